#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bsq/config.hpp"

namespace bsq {

struct SuiteResult {
  std::string name;
  bool pass = false;
  /// "stage: message" when the suite raised.
  std::string error;
  nlohmann::json report;
};

struct RunSummary {
  std::string config_hash;
  std::vector<SuiteResult> suites;
  bool pass() const;
};

nlohmann::json to_json(const RunSummary& s);

/// One configured run writing into `out`:
///   config.json    resolved configuration
///   <suite>.json   per-suite report (deterministic for a given config)
///   *.csv          norm series, decay profiles, Young sweep
///   trajectory/    optional checkpoints
///   summary.json   PASS/FAIL per suite against the configured thresholds
///   metadata.json  timestamps and thread count
/// The simulated trajectory is shared by the simulate, rates and theorem
/// suites.
class Experiment {
public:
  Experiment(ExperimentConfig config, std::filesystem::path out);

  /// Runs the given suites (the configured ones when empty) in canonical
  /// order. Errors are caught per suite and recorded; earlier outputs stay.
  RunSummary run(const std::vector<std::string>& suites = {});

  /// Runs a single suite and writes its report.
  SuiteResult run_suite(const std::string& name);

  const ExperimentConfig& config() const { return config_; }
  const std::filesystem::path& out() const { return out_; }

private:
  nlohmann::json kernels_suite(bool& pass);
  nlohmann::json young_suite(bool& pass);
  nlohmann::json dz_suite(bool& pass);
  nlohmann::json simulate_suite(bool& pass);
  nlohmann::json picard_suite(bool& pass);
  nlohmann::json rates_suite(bool& pass);
  nlohmann::json theorem_suite(bool& pass);

  const InitialData& data();
  const Trajectory& trajectory();
  const NormSeries& series();

  void write_json(const std::string& name, const nlohmann::json& j) const;

  ExperimentConfig config_;
  std::filesystem::path out_;
  std::string hash_;
  std::optional<InitialData> data_;
  std::optional<Trajectory> traj_;
  std::optional<NormSeries> series_;
};

/// Reads rates.json from each run directory and writes report.csv and
/// report.json into `out`: fitted exponent against -1/2 + 3/(2p) per p and
/// run. Throws InvalidArgument naming a run without rates.json.
nlohmann::json aggregate_report(const std::vector<std::filesystem::path>& runs,
                                const std::filesystem::path& out);

}  // namespace bsq
