#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "bsq/field.hpp"

namespace bsq {

enum class KernelKind { K, F, Ftilde, G };

std::string to_string(KernelKind kind);
KernelKind parse_kernel_kind(const std::string& name);

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Real-space samples of one of the kernels of e^{t Delta} P (K),
/// e^{t Delta} P div (F), e^{t Delta} grad (Ftilde) or e^{t Delta} (G).
///
/// Component layout: K[j][l] at 3 j + l; F[j][h][l] at 9 j + 3 h + l
/// (output j, contracted derivative h, input l); Ftilde[h] at h; G at 0.
struct KernelTensor {
  GridSpec grid;
  double t = 0.0;
  KernelKind kind = KernelKind::G;
  std::vector<RealVec> components;

  static int component_count(KernelKind kind);

  /// Pointwise Frobenius magnitude.
  RealVec magnitude() const;
  /// The vector field K[., l] (only for K).
  Field column(int l) const;
  Field component_field(int c) const;
  /// K(x) at sample (i, j, k) as a matrix (only for K).
  Mat3 matrix_at(int i, int j, int k) const;
  /// Power p_t with K(x, t) = t^{-p_t} K(x / sqrt t, 1).
  double scaling_power() const;
};

/// Spectral construction followed by inverse transforms. Multipliers that
/// depend on the direction of k vanish on Nyquist planes.
/// Throws InvalidArgument for t <= 0 and UnderResolved if sqrt(t) < 2 dx.
KernelTensor build_kernel(KernelKind kind, const GridSpec& grid, double t);

/// Spectral multiplier of component c at wavevector k.
Complex kernel_symbol(KernelKind kind, int c, const Vec3& k, double t);

/// (1 / 4 pi) (3 x x^T - |x|^2 I) / |x|^5. Throws InvalidArgument at x = 0.
Mat3 homogeneous_part(const Vec3& x);

/// Lp norm of the pointwise Frobenius magnitude.
double kernel_lp_norm(const KernelTensor& kernel, double p);

/// Circular convolution of K (or G) with a field on the same grid.
/// K acts on vector fields, G on either rank.
Field apply_kernel(const KernelTensor& kernel, const Field& f);

struct DecayShell {
  double r_low = 0.0;
  double r_high = 0.0;
  double shell_max = 0.0;
};

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double window_low = 0.0;
  double window_high = 0.0;
  /// Largest |M(r) / fit(r) - 1| over the fitted shells.
  double residual = 0.0;
  int shells = 0;
};

struct DecayProfile {
  KernelKind kind = KernelKind::G;
  double expected_exponent = 0.0;
  std::vector<DecayShell> shells;
  std::optional<DecayFit> fit;
  std::string refusal;
};

struct DecayOptions {
  double r_first = 0.5;
  /// Fit shells with r_low in [fit_low, fit_high_fraction * L_eff], where
  /// L_eff is the box length in units of sqrt(t).
  double fit_low = 4.0;
  double fit_high_fraction = 0.25;
};

/// Dyadic shell maxima M(r) = max_{r <= |x| < 2r} |kernel| after rescaling
/// to t = 1, and a log-log fit over the resolved far field. Fewer than three
/// shells in the window leave `fit` empty with a reason in `refusal`.
DecayProfile decay_profile(const KernelTensor& kernel, double expected_exponent,
                           const DecayOptions& options = {});

void write_profile_csv(const std::filesystem::path& path, const DecayProfile& profile);
nlohmann::json to_json(const DecayProfile& profile);

/// Relative L2 difference over |x| <= L/4 between t^{p_t} K(x sqrt t, t),
/// built on the grid scaled by sqrt t, and K(x, 1) on `grid`. The two grids
/// share sample indices, so no interpolation is involved.
double scaling_defect(KernelKind kind, const GridSpec& grid, double t);

/// Same identity on one grid: K(x, t) against t^{-p_t} K(x / sqrt t, 1), with
/// K(., 1) evaluated off the grid by spectral upsampling plus local
/// interpolation. Relative L2 over |x| <= min(L/4, 0.45 sqrt(t) L). Limited by
/// interpolation and by periodic images, which do not scale.
double interpolated_scaling_defect(KernelKind kind, const GridSpec& grid, double t);

/// ||kernel(., t)||_r on the sqrt(t)-scaled grid divided by ||kernel(., 1)||_r
/// on `grid`, compared with t^{-p_t + 3 / (2 r)}: returns the relative defect.
double norm_scaling_defect(KernelKind kind, const GridSpec& grid, double t, double r);

}  // namespace bsq
