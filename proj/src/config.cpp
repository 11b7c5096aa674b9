#include "bsq/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

namespace bsq {

using nlohmann::json;

std::string to_string(SolverMode mode) {
  switch (mode) {
    case SolverMode::March: return "march";
    case SolverMode::Picard: return "picard";
    case SolverMode::LinearOnly: return "linear-only";
  }
  return "march";
}

SolverMode parse_solver_mode(const std::string& name) {
  if (name == "march") return SolverMode::March;
  if (name == "picard") return SolverMode::Picard;
  if (name == "linear-only") return SolverMode::LinearOnly;
  throw InvalidArgument("unknown solver mode '" + name + "'");
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"kernels", "young", "dz",     "simulate",
                                              "picard",  "rates", "theorem"};
  return names;
}

json number_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw InvalidArgument(path + ": expected a number or \"inf\"");
}

namespace {

class Reader {
public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw InvalidArgument(path_ + ": expected an object");
  }
  ~Reader() = default;

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }
  std::string at(const std::string& key) const { return path_ + "." + key; }

  void number(const std::string& key, double& out) {
    if (auto* v = find(key)) out = number_from_json(*v, at(key));
  }
  void integer(const std::string& key, int& out) {
    if (auto* v = find(key)) {
      if (!v->is_number_integer()) throw InvalidArgument(at(key) + ": expected an integer");
      out = v->get<int>();
    }
  }
  void flag(const std::string& key, bool& out) {
    if (auto* v = find(key)) {
      if (!v->is_boolean()) throw InvalidArgument(at(key) + ": expected true or false");
      out = v->get<bool>();
    }
  }
  void text(const std::string& key, std::string& out) {
    if (auto* v = find(key)) {
      if (!v->is_string()) throw InvalidArgument(at(key) + ": expected a string");
      out = v->get<std::string>();
    }
  }
  void numbers(const std::string& key, std::vector<double>& out) {
    if (auto* v = find(key)) {
      if (!v->is_array()) throw InvalidArgument(at(key) + ": expected an array");
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        out.push_back(number_from_json((*v)[i], at(key) + "[" + std::to_string(i) + "]"));
      }
    }
  }
  void window(const std::string& key, double& lo, double& hi) {
    std::vector<double> w{lo, hi};
    numbers(key, w);
    if (w.size() != 2) throw InvalidArgument(at(key) + ": expected [low, high]");
    lo = w[0];
    hi = w[1];
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) throw InvalidArgument("unknown key " + at(it.key()));
    }
  }

private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

json numbers_json(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(number_json(x));
  return a;
}

}  // namespace

GridSpec ExperimentConfig::grid_spec() const { return GridSpec(grid.n, grid.L, grid.dealias); }

DataSpec ExperimentConfig::resolved_data() const {
  DataSpec d = data;
  d.seed = seed;
  if (zero_mean) {
    d.shape = ThetaShape::Dipole;
    d.mass = 0.0;
  }
  return d;
}

void ExperimentConfig::validate() const {
  grid_spec().validate();
  GridSpec(kernels.n, kernels.L).validate();
  GridSpec(young.n, young.L).validate();
  GridSpec(dz.n, dz.L).validate();
  if (!(solver.T > 0.0 && solver.dt > 0.0 && solver.output_interval > 0.0)) {
    throw InvalidArgument("solver: T, dt and output_interval must be positive");
  }
  if (!(picard.T > 0.0) || picard.nodes < 2 || picard.max_sweeps < 1 || !(picard.tol > 0.0)) {
    throw InvalidArgument("picard: need T > 0, nodes >= 2, max_sweeps >= 1, tol > 0");
  }
  if (young.count < 0) throw InvalidArgument("young.count must be nonnegative");
  for (double p : diagnostics.p_set) {
    if (!(p >= 1.0)) throw InvalidArgument("diagnostics.p_set entries must be >= 1");
  }
  for (double A : diagnostics.A_set) {
    if (!(A > 0.0)) throw InvalidArgument("diagnostics.A_set entries must be positive");
  }
  for (const auto& s : suites) {
    bool known = false;
    for (const auto& n : suite_names()) known = known || n == s;
    if (!known) throw InvalidArgument("unknown suite '" + s + "'");
  }
}

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  Reader top(j, "config");
  if (auto* g = top.find("grid")) {
    Reader r(*g, "config.grid");
    r.integer("n", c.grid.n);
    r.number("L", c.grid.L);
    r.number("dealias", c.grid.dealias);
    r.finish();
  }
  if (auto* d = top.find("data")) {
    Reader r(*d, "config.data");
    r.number("mass", c.data.mass);
    r.number("bump_width", c.data.bump_width);
    std::string shape = c.data.shape == ThetaShape::Bump ? "bump" : "dipole";
    r.text("shape", shape);
    if (shape == "bump") {
      c.data.shape = ThetaShape::Bump;
    } else if (shape == "dipole") {
      c.data.shape = ThetaShape::Dipole;
    } else {
      throw InvalidArgument("config.data.shape: expected \"bump\" or \"dipole\"");
    }
    r.number("dipole_separation", c.data.dipole_separation);
    r.number("dipole_strength", c.data.dipole_strength);
    r.number("u0_amplitude", c.data.u0_amplitude);
    r.number("u0_envelope", c.data.u0_envelope);
    r.number("u0_smoothing", c.data.u0_smoothing);
    r.number("amplitude", c.data.amplitude);
    r.flag("zero_mean", c.zero_mean);
    r.finish();
  }
  if (auto* s = top.find("solver")) {
    Reader r(*s, "config.solver");
    std::string mode = to_string(c.solver.mode), scheme = to_string(c.solver.scheme),
                quad = to_string(c.solver.quadrature);
    r.text("mode", mode);
    c.solver.mode = parse_solver_mode(mode);
    r.number("T", c.solver.T);
    r.number("dt", c.solver.dt);
    r.number("output_interval", c.solver.output_interval);
    r.text("scheme", scheme);
    c.solver.scheme = parse_scheme(scheme);
    r.text("quadrature", quad);
    c.solver.quadrature = parse_quadrature_rule(quad);
    r.flag("track_bilinear", c.solver.track_bilinear);
    r.flag("save_trajectory", c.solver.save_trajectory);
    r.finish();
  }
  if (auto* p = top.find("picard")) {
    Reader r(*p, "config.picard");
    r.number("T", c.picard.T);
    r.integer("nodes", c.picard.nodes);
    r.integer("max_sweeps", c.picard.max_sweeps);
    r.number("tol", c.picard.tol);
    r.finish();
  }
  if (auto* d = top.find("diagnostics")) {
    Reader r(*d, "config.diagnostics");
    r.numbers("p_set", c.diagnostics.p_set);
    r.numbers("A_set", c.diagnostics.A_set);
    r.window("fit_window", c.diagnostics.fit_low, c.diagnostics.fit_high);
    r.window("theorem_window", c.diagnostics.theorem_low, c.diagnostics.theorem_high);
    r.numbers("profile_times", c.diagnostics.profile_times);
    r.finish();
  }
  if (auto* k = top.find("kernels")) {
    Reader r(*k, "config.kernels");
    r.integer("n", c.kernels.n);
    r.number("L", c.kernels.L);
    r.numbers("times", c.kernels.times);
    r.numbers("r_set", c.kernels.r_set);
    r.finish();
  }
  if (auto* y = top.find("young")) {
    Reader r(*y, "config.young");
    r.integer("count", c.young.count);
    r.integer("n", c.young.n);
    r.number("L", c.young.L);
    r.finish();
  }
  if (auto* d = top.find("dz")) {
    Reader r(*d, "config.dz");
    r.integer("n", c.dz.n);
    r.number("L", c.dz.L);
    r.numbers("q_set", c.dz.q_set);
    r.finish();
  }
  if (auto* t = top.find("thresholds")) {
    Reader r(*t, "config.thresholds");
    auto& h = c.thresholds;
    r.number("kernel_scaling", h.kernel_scaling);
    r.number("kernel_slope", h.kernel_slope);
    r.number("norm_scaling", h.norm_scaling);
    r.number("young_slack", h.young_slack);
    r.number("dz_residual", h.dz_residual);
    r.number("vq_slack", h.vq_slack);
    r.number("rate_tolerance", h.rate_tolerance);
    r.number("picard_contraction", h.picard_contraction);
    r.integer("picard_min_sweeps", h.picard_min_sweeps);
    r.number("cross_validation", h.cross_validation);
    r.number("first_increment", h.first_increment);
    r.number("dominance", h.dominance);
    r.finish();
  }
  if (auto* s = top.find("suites")) {
    if (!s->is_array()) throw InvalidArgument("config.suites: expected an array of names");
    c.suites.clear();
    for (const auto& v : *s) {
      if (!v.is_string()) throw InvalidArgument("config.suites: expected strings");
      c.suites.push_back(v.get<std::string>());
    }
  }
  if (auto* s = top.find("seed")) {
    if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0)) {
      throw InvalidArgument("config.seed: expected a nonnegative integer");
    }
    c.seed = s->get<std::uint64_t>();
  }
  top.finish();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidArgument("config " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  const auto& h = c.thresholds;
  return {
      {"grid", {{"n", c.grid.n}, {"L", c.grid.L}, {"dealias", c.grid.dealias}}},
      {"data",
       {{"mass", c.data.mass},
        {"bump_width", c.data.bump_width},
        {"shape", c.data.shape == ThetaShape::Bump ? "bump" : "dipole"},
        {"dipole_separation", c.data.dipole_separation},
        {"dipole_strength", c.data.dipole_strength},
        {"u0_amplitude", c.data.u0_amplitude},
        {"u0_envelope", c.data.u0_envelope},
        {"u0_smoothing", c.data.u0_smoothing},
        {"amplitude", c.data.amplitude},
        {"zero_mean", c.zero_mean}}},
      {"solver",
       {{"mode", to_string(c.solver.mode)},
        {"T", c.solver.T},
        {"dt", c.solver.dt},
        {"output_interval", c.solver.output_interval},
        {"scheme", to_string(c.solver.scheme)},
        {"quadrature", to_string(c.solver.quadrature)},
        {"track_bilinear", c.solver.track_bilinear},
        {"save_trajectory", c.solver.save_trajectory}}},
      {"picard",
       {{"T", c.picard.T},
        {"nodes", c.picard.nodes},
        {"max_sweeps", c.picard.max_sweeps},
        {"tol", c.picard.tol}}},
      {"diagnostics",
       {{"p_set", numbers_json(c.diagnostics.p_set)},
        {"A_set", numbers_json(c.diagnostics.A_set)},
        {"fit_window", {c.diagnostics.fit_low, c.diagnostics.fit_high}},
        {"theorem_window", {c.diagnostics.theorem_low, c.diagnostics.theorem_high}},
        {"profile_times", numbers_json(c.diagnostics.profile_times)}}},
      {"kernels",
       {{"n", c.kernels.n},
        {"L", c.kernels.L},
        {"times", numbers_json(c.kernels.times)},
        {"r_set", numbers_json(c.kernels.r_set)}}},
      {"young", {{"count", c.young.count}, {"n", c.young.n}, {"L", c.young.L}}},
      {"dz", {{"n", c.dz.n}, {"L", c.dz.L}, {"q_set", numbers_json(c.dz.q_set)}}},
      {"thresholds",
       {{"kernel_scaling", h.kernel_scaling},
        {"kernel_slope", h.kernel_slope},
        {"norm_scaling", h.norm_scaling},
        {"young_slack", h.young_slack},
        {"dz_residual", h.dz_residual},
        {"vq_slack", h.vq_slack},
        {"rate_tolerance", h.rate_tolerance},
        {"picard_contraction", h.picard_contraction},
        {"picard_min_sweeps", h.picard_min_sweeps},
        {"cross_validation", h.cross_validation},
        {"first_increment", h.first_increment},
        {"dominance", h.dominance}}},
      {"suites", c.suites},
      {"seed", c.seed},
  };
}

std::string canonical_dump(const ExperimentConfig& c) { return to_json(c).dump(2); }

std::string config_hash(const ExperimentConfig& c) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canonical_dump(c)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bsq
