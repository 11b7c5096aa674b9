#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bsq/field.hpp"

namespace bsq {

/// (u, theta) at time t. Both fields are kept spectral.
struct FlowState {
  double t = 0.0;
  Field u;
  Field theta;
};

/// Initial velocity (divergence free) and temperature. The mass m = int theta0
/// is read off the zero mode once.
class InitialData {
public:
  InitialData() = default;
  /// Throws InvalidArgument if u0 is not divergence free to 1e-10 or the
  /// fields live on different grids.
  InitialData(Field u0, Field theta0);

  const Field& u0() const { return u0_; }
  const Field& theta0() const { return theta0_; }
  double mass() const { return mass_; }
  const GridSpec& grid() const { return theta0_.grid(); }

  InitialData scaled(double factor) const;
  static InitialData zero(const GridSpec& grid);

private:
  Field u0_;
  Field theta0_;
  double mass_ = 0.0;
};

enum class ThetaShape { Bump, Dipole };

/// Generator parameters for the default initial data.
///
/// Bump: theta0 = m G_w with G_w the heat kernel at time w, built
/// spectrally so the zero mode is exactly m. Dipole: a pair of such bumps
/// of strength +-dipole_strength at +-(d/2) e3, so m = 0.
/// u0 = amplitude * P(random band-limited field times a Gaussian envelope),
/// normalized in L3; zero when u0_amplitude is 0.
struct DataSpec {
  double mass = 1.0;
  double bump_width = 0.05;
  ThetaShape shape = ThetaShape::Bump;
  double dipole_separation = 1.0;
  double dipole_strength = 1.0;
  double u0_amplitude = 0.0;
  double u0_envelope = 2.0;
  double u0_smoothing = 0.5;
  /// Overall factor applied to both fields (amplitude scans).
  double amplitude = 1.0;
  std::uint64_t seed = 1;
};

InitialData generate_initial_data(const GridSpec& grid, const DataSpec& spec);

/// a(t) = (e^{t Delta}[u0 + t P(theta0 e3)], e^{t Delta} theta0).
FlowState linear_term(const InitialData& data, double t);

struct TrajectoryMeta {
  std::string scheme;
  long steps = 0;
  bool dealias = true;
  bool linear_only = false;
  std::string config_hash;
  double max_cfl = 0.0;
  bool cfl_warning = false;
};

/// States on strictly increasing time nodes starting at 0. When the
/// producing solver tracks them, b1[i] and b2[i] hold B1(u, u) and B2(u, theta)
/// at node i.
struct Trajectory {
  std::vector<FlowState> states;
  TrajectoryMeta meta;
  std::vector<Field> b1;
  std::vector<Field> b2;

  std::size_t size() const { return states.size(); }
  std::vector<double> nodes() const;
  const GridSpec& grid() const { return states.front().theta.grid(); }
  bool has_bilinear() const { return !b1.empty() && b1.size() == states.size(); }

  /// Index of the node equal to t (to 1e-9 relative), or throws
  /// InvalidArgument.
  std::size_t index_of(double t) const;

  /// Throws InvalidArgument unless nodes start at 0, strictly increase and
  /// all states share one grid.
  void validate() const;
};

/// Per-node samples of the Kato-type norms
///   sup ||u||_3 + sup sqrt(t) ||u||_inf + sup ||theta||_1 + sup t^{3/2} ||theta||_inf.
struct ENorm {
  double u3 = 0.0;
  double u_inf = 0.0;
  double theta1 = 0.0;
  double theta_inf = 0.0;

  void include(double t, const Field& u, const Field& theta);
  double total() const { return u3 + u_inf + theta1 + theta_inf; }
};

double e_norm(const Trajectory& traj);

}  // namespace bsq
