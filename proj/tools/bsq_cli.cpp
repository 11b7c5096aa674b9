#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bsq/experiment.hpp"

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::string out = "bsq_out";
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::optional<int> count;
  std::string suites;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  app->add_option("--out", c.out, "Artifact directory");
  app->add_option("--seed", c.seed, "Seed for every randomized component");
  app->add_option("--threads", c.threads, "Worker threads (0 = runtime default)");
}

bsq::ExperimentConfig resolve(const Common& c) {
  bsq::ExperimentConfig cfg = c.config.empty() ? bsq::ExperimentConfig{} : bsq::load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.count) cfg.young.count = *c.count;
  cfg.validate();
  return cfg;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int run(const Common& c, const std::vector<std::string>& suites) {
#ifdef _OPENMP
  if (c.threads > 0) omp_set_num_threads(c.threads);
#endif
  bsq::Experiment exp(resolve(c), c.out);
  const bsq::RunSummary summary = exp.run(suites);
  for (const auto& s : summary.suites) {
    std::cout << s.name << ": " << (s.pass ? "PASS" : "FAIL");
    if (!s.error.empty()) std::cout << " (" << s.error << ")";
    std::cout << '\n';
  }
  std::cout << "artifacts: " << fs::absolute(c.out).string() << '\n';
  return summary.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boussinesq far-field experiments"};
  app.require_subcommand(1);

  Common c;
  std::vector<std::string> runs;

  auto* run_cmd = app.add_subcommand("run", "Run the configured suites");
  add_common(run_cmd, c);
  run_cmd->add_option("--suite", c.suites, "Comma-separated suites");

  struct Single {
    const char* command;
    const char* suite;
    const char* help;
  };
  const Single singles[] = {
      {"simulate", "simulate", "Solve and write norm series"},
      {"picard", "picard", "Picard contraction and cross-validation"},
      {"kernels", "kernels", "Kernel decay and scaling checks"},
      {"verify-young", "young", "Exterior Young sweep"},
      {"verify-dz", "dz", "Dirac plus divergence decomposition checks"},
      {"rates", "rates", "Decay-rate fits"},
      {"theorem", "theorem", "Two-sided bounds and exterior profile"},
  };
  std::vector<std::pair<CLI::App*, std::string>> single_cmds;
  for (const auto& s : singles) {
    auto* cmd = app.add_subcommand(s.command, s.help);
    add_common(cmd, c);
    if (std::string(s.suite) == "young") cmd->add_option("--count", c.count, "Instances");
    single_cmds.emplace_back(cmd, s.suite);
  }

  auto* report_cmd = app.add_subcommand("report", "Aggregate rates.json of prior runs");
  report_cmd->add_option("runs", runs, "Run directories")->required()->check(CLI::ExistingDirectory);
  report_cmd->add_option("--out", c.out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run(c, split(c.suites));
    for (const auto& [cmd, suite] : single_cmds) {
      if (*cmd) return run(c, {suite});
    }
    if (*report_cmd) {
      std::vector<fs::path> dirs(runs.begin(), runs.end());
      const auto rep = bsq::aggregate_report(dirs, c.out);
      std::cout << "p,exponent,theory,deviation\n";
      for (const auto& r : rep["rows"]) {
        std::cout << r["p"].dump() << ',' << r["exponent"].get<double>() << ','
                  << r["theory"].get<double>() << ',' << r["deviation"].get<double>() << '\n';
      }
      std::cout << "max deviation (m != 0): " << rep["max_deviation"].get<double>() << '\n';
      return 0;
    }
  } catch (const bsq::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
