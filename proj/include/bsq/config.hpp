#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "bsq/diagnostics.hpp"
#include "bsq/solvers.hpp"

namespace bsq {

enum class SolverMode { March, Picard, LinearOnly };

std::string to_string(SolverMode mode);
SolverMode parse_solver_mode(const std::string& name);

struct GridConfig {
  int n = 64;
  double L = 64.0;
  double dealias = 2.0 / 3.0;
};

struct SolverConfig {
  SolverMode mode = SolverMode::March;
  double T = 16.0;
  double dt = 0.05;
  double output_interval = 0.5;
  Scheme scheme = Scheme::IFRK4;
  QuadratureRule quadrature = QuadratureRule::Exponential;
  bool track_bilinear = true;
  bool save_trajectory = false;
};

struct PicardConfig {
  double T = 4.0;
  int nodes = 33;
  int max_sweeps = 30;
  double tol = 1e-10;
};

struct DiagnosticsConfig {
  std::vector<double> p_set{1.5, 2.0, 3.0, 6.0, kInf};
  std::vector<double> A_set{2.0, 4.0, 8.0};
  double fit_low = 2.0;
  double fit_high = 16.0;
  double theorem_low = 2.0;
  double theorem_high = 16.0;
  std::vector<double> profile_times{8.0, 12.0, 16.0};
};

struct KernelsConfig {
  int n = 128;
  double L = 64.0;
  std::vector<double> times{0.25, 4.0};
  std::vector<double> r_set{1.0, 1.5, 3.0};
};

struct YoungConfig {
  int count = 100;
  int n = 32;
  double L = 32.0;
};

struct DzConfig {
  int n = 64;
  double L = 24.0;
  std::vector<double> q_set{1.1, 1.2, 1.4};
};

/// PASS/FAIL limits; defaults are the acceptance values.
struct Thresholds {
  double kernel_scaling = 1e-3;
  double kernel_slope = 0.3;
  double norm_scaling = 1e-3;
  double young_slack = 1e-6;
  double dz_residual = 1e-6;
  double vq_slack = 0.02;
  double rate_tolerance = 0.12;
  double picard_contraction = 0.5;
  int picard_min_sweeps = 4;
  double cross_validation = 1e-3;
  double first_increment = 0.25;
  double dominance = 0.5;
};

struct ExperimentConfig {
  GridConfig grid;
  /// data.seed is ignored; the top-level seed drives every random component.
  DataSpec data;
  /// Dipole temperature with zero mass.
  bool zero_mean = false;
  SolverConfig solver;
  PicardConfig picard;
  DiagnosticsConfig diagnostics;
  KernelsConfig kernels;
  YoungConfig young;
  DzConfig dz;
  Thresholds thresholds;
  std::vector<std::string> suites{"kernels", "young", "dz", "rates", "theorem"};
  std::uint64_t seed = 1;

  GridSpec grid_spec() const;
  /// DataSpec with zero_mean and the seed applied.
  DataSpec resolved_data() const;
  void validate() const;
};

/// Known suite names in execution order.
const std::vector<std::string>& suite_names();

/// Missing keys take defaults; unknown keys and malformed values throw
/// InvalidArgument naming the offending path. Infinite exponents are written
/// "inf".
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& c);

/// Sorted-key dump with round-trip double precision.
std::string canonical_dump(const ExperimentConfig& c);
/// FNV-1a 64 of canonical_dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

/// JSON number, or "inf" / "-inf" for infinities.
nlohmann::json number_json(double x);
double number_from_json(const nlohmann::json& j, const std::string& path);

}  // namespace bsq
