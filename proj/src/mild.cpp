#include "bsq/mild.hpp"

#include <random>

#include "bsq/duhamel.hpp"
#include "bsq/norms.hpp"
#include "bsq/spectral_ops.hpp"

namespace bsq {

InitialData::InitialData(Field u0, Field theta0) {
  if (!u0.is_vector() || theta0.is_vector()) {
    throw InvalidArgument("initial data: expected vector u0 and scalar theta0");
  }
  if (!(u0.grid() == theta0.grid())) throw InvalidArgument("initial data: grids differ");
  if (divergence_residual(u0) > 1e-10) throw InvalidArgument("initial data: u0 is not divergence free");
  u0_ = to_spectral(u0);
  theta0_ = to_spectral(theta0);
  mass_ = theta0_.spectral()[0].real();
}

InitialData InitialData::scaled(double factor) const {
  return InitialData(factor * u0_, factor * theta0_);
}

InitialData InitialData::zero(const GridSpec& grid) {
  return InitialData(Field::zeros(grid, Rank::Vector, Representation::Spectral),
                     Field::zeros(grid, Rank::Scalar, Representation::Spectral));
}

namespace {

Field random_velocity(const GridSpec& g, const DataSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal;
  std::vector<RealVec> comps(3, RealVec(g.num_points()));
  const double env = spec.u0_envelope;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const Vec3 x = coordinates(g, i, j, k);
        const double w = std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2 * env * env));
        const std::size_t q = g.point_index(i, j, k);
        for (auto& c : comps) c[q] = w * normal(rng);
      }
  Field u = leray_project(heat_semigroup(Field::from_real(g, std::move(comps)), spec.u0_smoothing));
  const double norm = lp_norm(u, 3.0);
  return norm > 0.0 ? (spec.u0_amplitude / norm) * u : u;
}

}  // namespace

InitialData generate_initial_data(const GridSpec& grid, const DataSpec& spec) {
  grid.validate();
  if (!(spec.bump_width > 0.0)) throw InvalidArgument("data: bump_width must be positive");
  ComplexVec theta(grid.num_modes());
  const bool dipole = spec.shape == ThetaShape::Dipole;
  for_each_mode(grid, [&](std::size_t q, double kx, double ky, double kz, int i, int j, int kk) {
    const double e = std::exp(-(kx * kx + ky * ky + kz * kz) * spec.bump_width);
    if (!dipole) {
      theta[q] = spec.mass * e;
    } else if (!on_nyquist(grid, i, j, kk)) {
      theta[q] = Complex(0.0, -2.0 * spec.dipole_strength * std::sin(0.5 * kz * spec.dipole_separation) * e);
    }
  });
  Field theta0 = Field::from_spectral(grid, {std::move(theta)});
  Field u0 = spec.u0_amplitude != 0.0 ? to_spectral(random_velocity(grid, spec))
                                      : Field::zeros(grid, Rank::Vector, Representation::Spectral);
  return InitialData(spec.amplitude * u0, spec.amplitude * theta0);
}

FlowState linear_term(const InitialData& data, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("linear_term: t must be >= 0");
  const GridSpec& g = data.grid();
  std::vector<ComplexVec> u = project_vertical(g, data.theta0().spectral());
  for (int c = 0; c < 3; ++c) {
    const auto& u0 = data.u0().spectral(c);
    for (std::size_t q = 0; q < u[c].size(); ++q) u[c][q] = u0[q] + t * u[c][q];
  }
  FlowState s;
  s.t = t;
  s.u = heat_semigroup(Field::from_spectral(g, std::move(u)), t);
  s.theta = heat_semigroup(data.theta0(), t);
  return s;
}

std::vector<double> Trajectory::nodes() const {
  std::vector<double> out;
  for (const auto& s : states) out.push_back(s.t);
  return out;
}

std::size_t Trajectory::index_of(double t) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (std::abs(states[i].t - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
  }
  throw InvalidArgument("trajectory: t=" + std::to_string(t) + " is not a node");
}

void Trajectory::validate() const {
  if (states.empty()) throw InvalidArgument("trajectory: empty");
  if (states.front().t != 0.0) throw InvalidArgument("trajectory: first node must be 0");
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i > 0 && !(states[i].t > states[i - 1].t)) {
      throw InvalidArgument("trajectory: nodes must strictly increase");
    }
    if (!(states[i].u.grid() == grid()) || !(states[i].theta.grid() == grid())) {
      throw InvalidArgument("trajectory: states on different grids");
    }
  }
}

void ENorm::include(double t, const Field& u, const Field& theta) {
  const RealVec mu = magnitude(u);
  const RealVec mt = magnitude(theta);
  const GridSpec& g = u.grid();
  u3 = std::max(u3, lp_norm_of_magnitudes(g, mu, 3.0));
  u_inf = std::max(u_inf, std::sqrt(t) * lp_norm_of_magnitudes(g, mu, kInf));
  theta1 = std::max(theta1, lp_norm_of_magnitudes(g, mt, 1.0));
  theta_inf = std::max(theta_inf, t * std::sqrt(t) * lp_norm_of_magnitudes(g, mt, kInf));
}

double e_norm(const Trajectory& traj) {
  ENorm e;
  for (const auto& s : traj.states) e.include(s.t, s.u, s.theta);
  return e.total();
}

}  // namespace bsq
