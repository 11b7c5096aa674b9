#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "bsq/mild.hpp"

namespace bsq {

struct DiagnosticsSpec {
  std::vector<double> p_set{1.5, 2.0, 3.0, 6.0, kInf};
  std::vector<double> A_set{2.0, 4.0, 8.0};
};

/// Norm time series of a trajectory. Exterior entries use the region
/// |x - center| >= A sqrt(t) and are invalid (NaN, valid = false) once
/// A sqrt(t) >= L/2 and at t = 0.
struct NormSeries {
  std::vector<double> times;
  std::vector<double> p_set;
  std::vector<double> A_set;

  /// lp[ip][it] = ||u(t)||_p; weighted uses (1 + t)^{(1/2)(1 - 3/p)}.
  std::vector<std::vector<double>> lp;
  std::vector<std::vector<double>> weighted;

  std::vector<double> u3, sqrt_t_uinf, theta1, t32_theta_inf;

  /// [iA][it]: ||theta||_{L1(ext)}, ||u||_{L3(ext)}, sqrt(t) ||u||_{Linf(ext)}.
  std::vector<std::vector<double>> ext_theta1, ext_u3, ext_sqrt_t_uinf;
  std::vector<std::vector<bool>> valid;

  std::size_t p_index(double p) const;
  std::size_t A_index(double A) const;
};

NormSeries norm_series(const Trajectory& traj, const DiagnosticsSpec& spec = {});

/// Columns: t, one per requested norm, flags (invalid exterior radii).
void write_series_csv(const std::filesystem::path& path, const NormSeries& series);

/// -1/2 + 3/(2p), the decay exponent of ||u(t)||_p when int theta0 != 0.
double theorem_exponent(double p);

struct RateFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  double window_low = 0.0;
  double window_high = 0.0;
  /// Largest |value / fit - 1| on the window.
  double residual = 0.0;
  int samples = 0;
};

/// Least-squares slope of log(value) against log(t) over samples with
/// t in [t_lo, t_hi]. Throws Refused with fewer than 6 usable samples, when
/// t_hi / t_lo < 4, or on nonpositive values.
RateFit rate_fit(const std::vector<double>& times, const std::vector<double>& values,
                 double t_lo, double t_hi);

struct TheoremCheck {
  double p = 0.0;
  std::optional<double> c1;
  double c2 = 0.0;
  double t0 = 0.0;
  double t_max = 0.0;
  double A = 0.0;
  std::string lower_bound_note;
};

/// c1 = min ||u||_p t^{(1/2)(1-3/p)} / |m| and c2 = max ||u||_p t^{(1/2)(1-3/p)}
/// over samples in [t_lo, t_hi]. m = 0 skips c1. Throws Refused when the
/// window spans less than a factor 4 or holds no samples.
TheoremCheck theorem_check(const NormSeries& series, double m, double p, double t_lo,
                           double t_hi, double A = 0.0);

/// Exterior norms of the pieces of
///   u(t) = m t K(t) e3 + t F(t) * V + e^{t Delta} u0 - [B1 + B2](t).
struct ProfileDecomposition {
  double t = 0.0;
  double A = 0.0;
  double p = 0.0;
  double radius = 0.0;
  double mass_term = 0.0;
  double dipole_term = 0.0;
  double initial_term = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  /// ||B1 + B2|| and ||B1|| + ||B2|| on the region.
  double bilinear = 0.0;
  double bilinear_sum = 0.0;
  double sum_norm = 0.0;
  double u_norm = 0.0;
  /// ||sum - u(t)||_p / ||u(t)||_p on the region.
  double residual = 0.0;
  bool tracked_bilinear = false;
};

/// Uses the identity F * V = K * div V with div V = theta0 - m delta, so the
/// mass and dipole pieces are exact spectral multipliers. B1 and B2 come from
/// the trajectory's tracked terms when present, otherwise from quadrature on
/// its nodes. Throws InvalidArgument when A sqrt(t) >= L/2.
ProfileDecomposition profile_decomposition(const Trajectory& traj, const InitialData& data,
                                           double t, double A, double p = 3.0);

struct LimsupRow {
  double A = 0.0;
  double window_low = 0.0;
  double window_high = 0.0;
  double theta1_scaled = 0.0;
  double u3_scaled = 0.0;
  double uinf_scaled = 0.0;
  bool valid = false;
};

struct LimsupTable {
  std::vector<LimsupRow> rows;
  double kappa_hat = 0.0;
};

/// Late-window maxima (last half of each A's valid window) of the exterior
/// quantities scaled by A, A^2 and A^3.
LimsupTable exterior_limsup_proxy(const NormSeries& series);

nlohmann::json to_json(const RateFit& fit);
nlohmann::json to_json(const TheoremCheck& check);
nlohmann::json to_json(const ProfileDecomposition& d);
nlohmann::json to_json(const LimsupTable& table);

/// Number formatting shared by CSV and JSON writers: "inf" for infinity.
std::string format_exponent(double p);

}  // namespace bsq
