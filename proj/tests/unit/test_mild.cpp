#include <doctest.h>

#include "bsq/norms.hpp"
#include "bsq/solvers.hpp"
#include "bsq/spectral_ops.hpp"

using namespace bsq;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : magnitude(f)) m = std::max(m, v);
  return m;
}

double max_diff(const Field& a, const Field& b) { return max_abs(a - b); }

// Trajectory holding the same (u, theta) at every node.
Trajectory steady(const Field& u, const Field& theta, double T, int nodes) {
  Trajectory tr;
  for (int i = 0; i < nodes; ++i) tr.states.push_back({T * i / (nodes - 1), to_spectral(u), to_spectral(theta)});
  return tr;
}

struct ModeSetup {
  GridSpec g{16, 2 * kPi};
  double k = 1.0;
  double a = 0.7, b = -1.3;
  Field u = Field::sample_vector(g, [&](const Vec3& x) { return Vec3{0, a * std::cos(k * x[0]), 0}; });
  Field v = Field::sample_vector(g, [&](const Vec3& x) { return Vec3{0, 0, b * std::sin(k * x[1])}; });
  Field theta = Field::sample(g, [&](const Vec3& x) { return b * std::sin(k * x[1]); });
  // div(u theta) = a b k cos(k x) cos(k y).
  Field source = Field::sample(g, [&](const Vec3& x) { return a * b * k * std::cos(k * x[0]) * std::cos(k * x[1]); });
};

InitialData small_data(const GridSpec& g, double amplitude, double u0 = 0.0) {
  DataSpec spec;
  spec.mass = 1.0;
  spec.bump_width = 1.0;
  spec.u0_amplitude = u0;
  spec.amplitude = amplitude;
  spec.seed = 4;
  return generate_initial_data(g, spec);
}

}  // namespace

TEST_CASE("initial data generation") {
  const GridSpec g(16, 16.0);
  DataSpec spec;
  spec.mass = 2.5;
  const InitialData bump = generate_initial_data(g, spec);
  CHECK(bump.mass() == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(integral(to_real(bump.theta0()).real_only()) == doctest::Approx(2.5).epsilon(1e-12));
  spec.shape = ThetaShape::Dipole;
  spec.u0_amplitude = 0.1;
  const InitialData dip = generate_initial_data(g, spec);
  CHECK(std::abs(dip.mass()) < 1e-15);
  CHECK(lp_norm(dip.u0(), 3.0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(divergence_residual(dip.u0()) < 1e-10);
  CHECK(hermitian_defect(dip.theta0()) < 1e-12);
  // Same seed, same data.
  const InitialData again = generate_initial_data(g, spec);
  CHECK(max_diff(again.u0(), dip.u0()) == 0.0);

  const Field bad = Field::sample_vector(g, [](const Vec3& x) { return Vec3{std::sin(2 * kPi * x[0] / 16), 0, 0}; });
  CHECK_THROWS_AS(InitialData(bad, bump.theta0()), InvalidArgument);
}

TEST_CASE("linear term") {
  const GridSpec g(16, 2 * kPi);
  const InitialData data = small_data(g, 1.0, 0.05);
  const FlowState s0 = linear_term(data, 0.0);
  CHECK(max_diff(s0.u, data.u0()) == 0.0);
  CHECK(max_diff(s0.theta, data.theta0()) == 0.0);
  CHECK_THROWS_AS(linear_term(data, -1.0), InvalidArgument);

  // Single mode theta0 = cos(x + y): k = (1, 1, 0) is orthogonal to e3.
  const Field th = Field::sample(g, [](const Vec3& x) { return std::cos(x[0] + x[1]); });
  const InitialData one(Field::zeros(g, Rank::Vector, Representation::Spectral), th);
  const double t = 0.8;
  const FlowState s = linear_term(one, t);
  const Field expect = Field::sample_vector(g, [&](const Vec3& x) {
    return Vec3{0, 0, t * std::exp(-2 * t) * std::cos(x[0] + x[1])};
  });
  CHECK(max_diff(s.u, expect) < 1e-13);

  // Mode k = (1, 0, 1): (I - k k^T / 2) e3 = (-1/2, 0, 1/2).
  const Field th2 = Field::sample(g, [](const Vec3& x) { return std::cos(x[0] + x[2]); });
  const FlowState s2 = linear_term(InitialData(Field::zeros(g, Rank::Vector, Representation::Spectral), th2), t);
  const Field expect2 = Field::sample_vector(g, [&](const Vec3& x) {
    const double c = t * std::exp(-2 * t) * std::cos(x[0] + x[2]);
    return Vec3{-0.5 * c, 0, 0.5 * c};
  });
  CHECK(max_diff(s2.u, expect2) < 1e-13);
}

TEST_CASE("bilinear operators against per-mode oracles") {
  ModeSetup m;
  const double T = 1.5;
  const Field zero_u = Field::zeros(m.g, Rank::Vector, Representation::Spectral);
  const Field zero_t = Field::zeros(m.g, Rank::Scalar, Representation::Spectral);
  const Trajectory tu = steady(m.u, m.theta, T, 13);
  const Trajectory tv = steady(m.v, m.theta, T, 13);
  const Trajectory t0 = steady(zero_u, zero_t, T, 13);

  CHECK(max_abs(bilinear_B1(t0, tv, T)) == 0.0);
  CHECK(max_abs(bilinear_B1(tu, t0, T)) == 0.0);
  CHECK(max_abs(bilinear_B1(tu, tv, 0.0)) == 0.0);
  CHECK(max_abs(bilinear_B2(tu, t0, T)) == 0.0);
  CHECK(max_abs(bilinear_B2(tu, tu, 0.0)) == 0.0);
  CHECK(max_abs(bilinear_B3(tu, tu, 0.0)) == 0.0);
  CHECK(max_abs(buoyancy_duhamel(t0, T)) == 0.0);
  CHECK_THROWS_AS(bilinear_B1(tu, tv, 2 * T), InvalidArgument);
  CHECK_THROWS_AS(bilinear_B1(tu, tv, 0.3), InvalidArgument);

  const double lam = 2 * m.k * m.k;
  const double i1 = (1 - std::exp(-lam * T)) / lam;
  const double i2 = (1 - std::exp(-lam * T) * (1 + lam * T)) / (lam * lam);
  // B1(u, v): div(u (x) v)_3 = d_y(u_y v_z) = a b k cos(kx) cos(ky), orthogonal to k'.
  const Field e3src = vertical(m.source);
  CHECK(max_diff(bilinear_B1(tu, tv, T), i1 * e3src) < 1e-12);
  CHECK(max_diff(bilinear_B2(tu, tu, T), i2 * e3src) < 1e-12);
  CHECK(max_diff(bilinear_B3(tu, tu, T), i1 * m.source) < 1e-12);

  // Trapezoid converges at second order.
  QuadratureSpec trap{QuadratureRule::Trapezoid, 1};
  QuadratureSpec trap2{QuadratureRule::Trapezoid, 2};
  const double e_fine = max_diff(bilinear_B3(tu, tu, T, trap), i1 * m.source);
  const double e_coarse = max_diff(bilinear_B3(tu, tu, T, trap2), i1 * m.source);
  CHECK(e_fine > 0.0);
  CHECK(e_coarse / e_fine == doctest::Approx(4.0).epsilon(0.05));

  // Constant single-mode temperature: (1 - e^{-|k|^2 t}) / |k|^2 per mode.
  const Field th = Field::sample(m.g, [](const Vec3& x) { return std::cos(x[0]); });
  const Trajectory tt = steady(zero_u, th, T, 13);
  CHECK(max_diff(buoyancy_duhamel(tt, T), (1 - std::exp(-T)) * vertical(th)) < 1e-12);
}

TEST_CASE("bilinearity") {
  const GridSpec g(16, 8.0);
  DataSpec spec;
  spec.u0_amplitude = 0.3;
  spec.bump_width = 0.5;
  const InitialData d1 = generate_initial_data(g, spec);
  spec.seed = 9;
  const InitialData d2 = generate_initial_data(g, spec);
  Trajectory a, b, as, bs;
  const double alpha = 1.7, beta = -0.6;
  for (int i = 0; i < 5; ++i) {
    const double t = 0.25 * i;
    FlowState x = linear_term(d1, t), y = linear_term(d2, t);
    a.states.push_back(x);
    b.states.push_back(y);
    as.states.push_back({t, alpha * x.u, alpha * x.theta});
    bs.states.push_back({t, beta * y.u, beta * y.theta});
  }
  const double T = 1.0;
  auto check = [&](const Field& scaled, const Field& base) {
    CHECK(max_diff(scaled, alpha * beta * base) <= 1e-12 * max_abs(base));
  };
  check(bilinear_B1(as, bs, T), bilinear_B1(a, b, T));
  check(bilinear_B2(as, bs, T), bilinear_B2(a, b, T));
  check(bilinear_B3(as, bs, T), bilinear_B3(a, b, T));
}

TEST_CASE("buoyancy Duhamel of the heat flow equals t e^{t Delta} P theta0 e3") {
  const GridSpec g(16, 8.0);
  const InitialData data = small_data(g, 1.0);
  const double T = 2.0;
  Trajectory tr;
  for (int i = 0; i <= 64; ++i) tr.states.push_back(linear_term(data, T * i / 64));
  const Field exact = T * heat_semigroup(leray_project(vertical(data.theta0())), T);
  CHECK(max_diff(buoyancy_duhamel(tr, T), exact) <= 1e-4 * max_abs(exact));
}

TEST_CASE("accumulator matches direct quadrature on nonuniform nodes") {
  const GridSpec g(8, 2 * kPi);
  const std::vector<double> nodes{0.0, 0.1, 0.35, 0.4, 0.9, 1.6};
  auto g_at = [&](double s) {
    ComplexVec v(g.num_modes());
    for (std::size_t q = 0; q < v.size(); ++q) v[q] = Complex(std::cos(3 * s + q), std::sin(s * q));
    return v;
  };
  DuhamelAccumulator acc(g, 1, true, QuadratureRule::Trapezoid);
  for (double s : nodes) acc.push(s, {g_at(s)});
  double err_i = 0.0, err_j = 0.0;
  const double t = nodes.back();
  std::size_t q = 0;
  for_each_mode(g, [&](std::size_t idx, double kx, double ky, double kz, int, int, int) {
    if (++q > 40) return;
    const double lam = kx * kx + ky * ky + kz * kz;
    Complex si{}, sj{};
    for (std::size_t j = 1; j < nodes.size(); ++j) {
      const double h = nodes[j] - nodes[j - 1];
      auto f = [&](double s) { return std::exp(-lam * (t - s)) * g_at(s)[idx]; };
      si += 0.5 * h * (f(nodes[j - 1]) + f(nodes[j]));
      sj += 0.5 * h * ((t - nodes[j - 1]) * f(nodes[j - 1]) + (t - nodes[j]) * f(nodes[j]));
    }
    err_i = std::max(err_i, std::abs(si - acc.I()[0][idx]));
    err_j = std::max(err_j, std::abs(sj - acc.J()[0][idx]));
  });
  CHECK(err_i < 1e-13);
  CHECK(err_j < 1e-13);
  CHECK_THROWS_AS(acc.push(1.0, {g_at(1.0)}), InvalidArgument);
}

TEST_CASE("picard iteration") {
  const GridSpec g(16, 16.0);
  PicardOptions opt;
  opt.T = 2.0;
  opt.nodes = 9;

  const PicardResult zero = picard_solve(InitialData::zero(g), opt);
  CHECK(zero.history.sweeps() == 1);
  CHECK(zero.history.converged);
  CHECK(e_norm(zero.trajectory) == 0.0);

  const InitialData data = small_data(g, 1.0, 0.05);
  PicardOptions lin = opt;
  lin.linear_only = true;
  const PicardResult l = picard_solve(data, lin);
  for (const auto& s : l.trajectory.states) {
    const FlowState a = linear_term(data, s.t);
    CHECK(max_diff(s.u, a.u) <= 1e-12 * std::max(1e-300, max_abs(a.u)));
  }

  opt.max_sweeps = 8;
  opt.tol = 1e-13;
  const PicardResult r = picard_solve(data, opt);
  CHECK(r.history.sweeps() >= 4);
  for (double ratio : r.history.ratios()) CHECK(ratio < 0.5);

  const double f1 = first_increment_ratio(data, opt.T, opt.nodes);
  const double f2 = first_increment_ratio(data.scaled(0.5), opt.T, opt.nodes);
  CHECK(f1 > 0.0);
  CHECK(f2 <= 0.5 * f1);
  CHECK(f2 / f1 == doctest::Approx(0.5).epsilon(0.02));

  // Large data makes the map expand.
  PicardOptions big = opt;
  big.max_sweeps = 30;
  CHECK_THROWS_AS(picard_solve(small_data(g, 4000.0, 0.05), big), PicardDiverged);
}

TEST_CASE("march solver") {
  const GridSpec g(16, 16.0);
  MarchOptions opt;
  opt.T = 2.0;
  opt.dt = 0.1;
  opt.output_interval = 0.5;

  const Trajectory zero = march_solve(InitialData::zero(g), opt);
  CHECK(zero.size() == 5u);
  CHECK(e_norm(zero) == 0.0);

  const InitialData data = small_data(g, 1.0, 0.05);
  MarchOptions lin = opt;
  lin.linear_only = true;
  const Trajectory l = march_solve(data, lin);
  for (const auto& s : l.states) {
    const FlowState a = linear_term(data, s.t);
    CHECK(max_diff(s.u, a.u) <= 1e-12 * std::max(1e-300, max_abs(a.u)));
    CHECK(max_diff(s.theta, a.theta) <= 1e-12 * max_abs(a.theta));
  }

  const Trajectory full = march_solve(data, opt);
  const double m0 = data.mass();
  for (const auto& s : full.states) {
    CHECK(std::abs(s.theta.spectral()[0].real() - m0) <= 1e-12 * std::abs(m0));
    CHECK(divergence_residual(s.u) <= 1e-9);
  }
  CHECK_FALSE(full.meta.cfl_warning);

  // Small amplitude: deviation from the linear term is second order.
  const InitialData tiny = small_data(g, 1e-3);
  const Trajectory nt = march_solve(tiny, opt);
  const FlowState at = linear_term(tiny, opt.T);
  CHECK(max_diff(nt.states.back().u, at.u) <= 1e-4 * max_abs(at.u));

  // Richardson refinement for both schemes.
  for (auto [scheme, order] : {std::pair{Scheme::IFRK2, 2.0}, {Scheme::IFRK4, 4.0}}) {
    MarchOptions o = opt;
    o.scheme = scheme;
    o.T = 1.0;
    const InitialData strong = small_data(g, 20.0, 2.0);
    std::vector<Field> u;
    for (double dt : {0.1, 0.05, 0.025}) {
      o.dt = dt;
      u.push_back(march_solve(strong, o).states.back().u);
    }
    const double rate = std::log2(max_diff(u[0], u[1]) / max_diff(u[1], u[2]));
    CHECK(rate == doctest::Approx(order).epsilon(0.3 / order));
  }
}

TEST_CASE("symmetry inheritance") {
  const GridSpec g(16, 12.0);
  const InitialData data = small_data(g, 5.0);
  MarchOptions opt;
  opt.T = 1.0;
  opt.dt = 0.1;
  const Field u = to_real(march_solve(data, opt).states.back().u);
  const int n = g.n;
  double defect = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const std::size_t q = g.point_index(i, j, k);
        const std::size_t mx = g.point_index((n - i) % n, j, k);
        const std::size_t my = g.point_index(i, (n - j) % n, k);
        defect = std::max({defect, std::abs(u.real(0)[q] + u.real(0)[mx]), std::abs(u.real(1)[q] + u.real(1)[my]),
                           std::abs(u.real(2)[q] - u.real(2)[mx]), std::abs(u.real(2)[q] - u.real(2)[my])});
      }
  CHECK(defect <= 1e-9 * max_abs(u));
}

TEST_CASE("tracked bilinear terms reconstruct the solution") {
  const GridSpec g(16, 16.0);
  const InitialData data = small_data(g, 20.0, 1.0);
  MarchOptions opt;
  opt.T = 2.0;
  opt.dt = 0.025;
  opt.track_bilinear = true;
  const Trajectory tr = march_solve(data, opt);
  REQUIRE(tr.has_bilinear());
  const FlowState& s = tr.states.back();
  const Field rebuilt = linear_term(data, s.t).u - tr.b1.back() - tr.b2.back();
  CHECK(max_diff(rebuilt, s.u) <= 1e-3 * max_abs(s.u));
}

TEST_CASE("cross validation") {
  const GridSpec g(16, 16.0);
  PicardOptions p;
  p.T = 2.0;
  p.nodes = 17;
  p.tol = 1e-12;
  MarchOptions m;
  m.dt = 0.0625;
  const CrossValidation zero = cross_validate(InitialData::zero(g), p, m);
  CHECK(zero.max() == 0.0);
  const InitialData data = small_data(g, 1.0, 0.05);
  PicardOptions pl = p;
  pl.linear_only = true;
  CHECK(cross_validate(data, pl, m).max() <= 1e-10);
  CHECK(cross_validate(data, p, m).max() <= 1e-3);
}
