#pragma once

#include <functional>
#include <memory>
#include <string>

#include <json.hpp>

#include "bsq/field.hpp"

namespace bsq {

/// Point evaluation of a periodic scalar field inside the ball |x| < L/2.
/// The spectrum is zero-padded to `upsample` times the resolution and then
/// interpolated locally with an 8-point Lagrange stencil per axis; points with
/// |x| >= L/2 evaluate to 0.
class PointEvaluator {
public:
  explicit PointEvaluator(const Field& f, int upsample = 3);
  double operator()(const Vec3& x) const;
  double cutoff() const { return cutoff_; }
  const GridSpec& grid() const { return grid_; }

private:
  GridSpec grid_;
  int n2_ = 0;
  double h2_ = 0.0;
  double cutoff_ = 0.0;
  RealVec fine_;
};

/// Quadrature for V(x) = -x int_0^1 f(x / lambda) lambda^{-4} d lambda.
///
/// With s = |x| / lambda the integral becomes
///   V(x) = -(x / |x|) |x|^{-2} Phi(|x|),  Phi(r) = int_r^{L/2} s^2 f(s x/|x|) ds,
/// evaluated in the log variable sigma = ln s (lambda = e^{-(sigma - ln|x|)})
/// with composite Gauss-Legendre panels of width panel_width aligned to a
/// lattice anchored at ln(L/2).
struct LambdaQuadrature {
  double panel_width = 0.125;
  int points = 8;
  /// Refuse when halving panel_width changes V by more than tol relative to
  /// max |V| over the probe points.
  double tol = 1e-8;
};

/// Spherical product rule about the origin: Gauss-Legendre in cos(theta),
/// uniform in azimuth, composite Gauss-Legendre in r.
struct SphereQuadrature {
  int n_polar = 48;
  int n_azimuth = 96;
  double radial_panel = 0.25;
  int radial_points = 8;
  /// Inner cutoff for the log-radial rule used by ||V||_q.
  double r_min = 1e-2;
};

struct Decomposition {
  double mass = 0.0;
  /// V sampled on the grid (V = 0 at the origin sample); empty unless
  /// requested.
  Field V;
  LambdaQuadrature quad;
  /// Observed change of V under node doubling on the probe points.
  double refinement_change = 0.0;
  std::shared_ptr<const PointEvaluator> f;
};

/// Throws Refused when node doubling changes V by more than quad.tol.
Decomposition compute_V(const Field& f, const LambdaQuadrature& quad = {}, bool on_grid = true);

/// V at one point (zero vector at the origin).
Vec3 evaluate_V(const PointEvaluator& f, const Vec3& x, const LambdaQuadrature& quad = {});

/// Phi(r) = int_r^{L/2} s^2 f(s d) ds along the unit direction d, at the
/// ascending radii r (each < L/2).
std::vector<double> radial_flux(const PointEvaluator& f, const Vec3& direction,
                                const std::vector<double>& radii);

struct TestFunction {
  std::string name;
  Vec3 center{0, 0, 0};
  /// phi and grad phi vanish (to round-off) beyond this distance from center.
  double support_radius = 0.0;
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> gradient;
};

TestFunction gaussian_test_function(const Vec3& center, double width);
/// Smooth bump equal to 1 on |x - c| <= inner and 0 beyond outer.
TestFunction plateau_test_function(const Vec3& center, double inner, double outer);
/// Deterministic default set: Gaussians of several widths and offsets plus
/// plateau bumps, all supported well inside |x| < L/2 for L >= 24.
std::vector<TestFunction> default_test_set(double box_length);

struct WeakIdentityTerm {
  std::string name;
  bool skipped = false;
  std::string note;
  double f_phi = 0.0;
  double mass_phi0 = 0.0;
  double v_grad_phi = 0.0;
  double residual = 0.0;
};

struct WeakIdentityReport {
  std::vector<WeakIdentityTerm> terms;
  double max_residual = 0.0;
};

/// For each phi: |int f phi - m phi(0) + int V . grad phi| / (1 + |int f phi|),
/// with int f phi on the grid and int V . grad phi = -int dOmega int Phi d_r phi dr
/// by the spherical rule. Test functions reaching |x| >= L/2 are skipped.
WeakIdentityReport weak_identity_residual(const Decomposition& dec, const Field& f,
                                          const std::vector<TestFunction>& tests,
                                          const SphereQuadrature& sphere = {});

/// Sum over the tests of (int f phi + int V . grad phi) divided by the sum of
/// phi(0): recovers m when the tests form a partition of unity near supp f.
double weak_mass(const Decomposition& dec, const Field& f, const std::vector<TestFunction>& tests,
                 const SphereQuadrature& sphere = {});

/// ||V||_q computed on rays: int |V|^q = int dOmega int r^{2 - 2q} |Phi|^q dr.
double v_norm(const PointEvaluator& f, double q, const SphereQuadrature& sphere = {});
/// || |x| f ||_q on the same rays.
double moment_norm(const PointEvaluator& f, double q, const SphereQuadrature& sphere = {});

/// Minkowski constant int_0^1 lambda^{3/q - 3} d lambda = 1 / (3/q - 2).
double vq_constant(double q);

struct VqRow {
  double q = 0.0;
  double v_norm = 0.0;
  double moment_norm = 0.0;
  double ratio = 0.0;
  double constant = 0.0;
  bool pass = false;
};

/// Ratio ||V||_q / || |x| f ||_q against 1.02 vq_constant(q). Throws Refused
/// for q >= 3/2 and InvalidArgument for q < 1.
std::vector<VqRow> vq_bound_check(const Field& f, const std::vector<double>& qs,
                                  const SphereQuadrature& sphere = {});

nlohmann::json to_json(const WeakIdentityReport& r);
nlohmann::json to_json(const std::vector<VqRow>& rows);

}  // namespace bsq
