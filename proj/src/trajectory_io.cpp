#include "bsq/trajectory_io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "bsq/field_io.hpp"

namespace bsq {
namespace {

std::string snapshot_name(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%04zu.bin", prefix, i);
  return buf;
}

}  // namespace

void save_trajectory(const std::filesystem::path& dir, const Trajectory& traj) {
  traj.validate();
  std::filesystem::create_directories(dir);
  nlohmann::json index;
  index["nodes"] = traj.nodes();
  index["scheme"] = traj.meta.scheme;
  index["steps"] = traj.meta.steps;
  index["dealias"] = traj.meta.dealias;
  index["linear_only"] = traj.meta.linear_only;
  index["config_hash"] = traj.meta.config_hash;
  index["max_cfl"] = traj.meta.max_cfl;
  index["cfl_warning"] = traj.meta.cfl_warning;
  index["bilinear"] = traj.has_bilinear();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    save_field(dir / snapshot_name("u", i), traj.states[i].u, Representation::Spectral);
    save_field(dir / snapshot_name("theta", i), traj.states[i].theta, Representation::Spectral);
    if (traj.has_bilinear()) {
      save_field(dir / snapshot_name("b1", i), traj.b1[i], Representation::Spectral);
      save_field(dir / snapshot_name("b2", i), traj.b2[i], Representation::Spectral);
    }
  }
  std::ofstream out(dir / "index.json");
  if (!out) throw Error("cannot write " + (dir / "index.json").string());
  out << index.dump(2) << '\n';
}

Trajectory load_trajectory(const std::filesystem::path& dir) {
  std::ifstream in(dir / "index.json");
  if (!in) throw Error("missing trajectory index " + (dir / "index.json").string());
  const nlohmann::json index = nlohmann::json::parse(in);
  Trajectory traj;
  traj.meta.scheme = index.at("scheme").get<std::string>();
  traj.meta.steps = index.at("steps").get<long>();
  traj.meta.dealias = index.at("dealias").get<bool>();
  traj.meta.linear_only = index.value("linear_only", false);
  traj.meta.config_hash = index.value("config_hash", std::string());
  traj.meta.max_cfl = index.value("max_cfl", 0.0);
  traj.meta.cfl_warning = index.value("cfl_warning", false);
  const auto nodes = index.at("nodes").get<std::vector<double>>();
  const bool bilinear = index.value("bilinear", false);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    FlowState s;
    s.t = nodes[i];
    s.u = load_field(dir / snapshot_name("u", i));
    s.theta = load_field(dir / snapshot_name("theta", i));
    traj.states.push_back(std::move(s));
    if (bilinear) {
      traj.b1.push_back(load_field(dir / snapshot_name("b1", i)));
      traj.b2.push_back(load_field(dir / snapshot_name("b2", i)));
    }
  }
  traj.validate();
  return traj;
}

}  // namespace bsq
