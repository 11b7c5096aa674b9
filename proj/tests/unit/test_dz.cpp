#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>

#include "bsq/dz.hpp"
#include "bsq/norms.hpp"

using namespace bsq;

namespace {

double gauss(const Vec3& x, double t) {
  const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  return std::pow(4.0 * std::numbers::pi * t, -1.5) * std::exp(-r2 / (4.0 * t));
}

// Phi(r) for f = G_1: int_r^inf s^2 G_1 ds = (4 pi)^{-3/2} (2 r e^{-r^2/4} + 2 sqrt(pi) erfc(r/2)).
double g1_flux(double r) {
  return std::pow(4.0 * std::numbers::pi, -1.5) *
         (2.0 * r * std::exp(-r * r / 4.0) + 2.0 * std::sqrt(std::numbers::pi) * std::erfc(r / 2.0));
}

const GridSpec kGrid(64, 24.0);

Field g1() {
  return Field::sample(kGrid, [](const Vec3& x) { return gauss(x, 1.0); });
}

double len(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

}  // namespace

TEST_CASE("point evaluator reproduces a band-limited field off the grid") {
  const PointEvaluator ev(g1());
  const Vec3 pts[] = {{0.1, 0.2, -0.3}, {1.234, -0.77, 2.1}, {3.3, 3.3, 0.05}, {-5.0, 1.0, 2.5}};
  for (const auto& x : pts) CHECK(ev(x) == doctest::Approx(gauss(x, 1.0)).epsilon(1e-9));
  CHECK(ev({11.0, 5.0, 0.0}) == 0.0);
}

TEST_CASE("V of the heat kernel matches the erfc closed form") {
  const Field f = g1();
  const Decomposition dec = compute_V(f, {}, false);
  CHECK(dec.mass == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(dec.refinement_change < 1e-8);
  for (double r : {0.05, 0.5, 1.0, 2.5, 5.0, 8.0}) {
    const Vec3 d{0.48, 0.6, 0.64};
    const Vec3 x{r * d[0], r * d[1], r * d[2]};
    const Vec3 v = evaluate_V(*dec.f, x);
    const double expect = g1_flux(r) / (r * r);
    CHECK(len(v) == doctest::Approx(expect).epsilon(1e-8));
    // radial and pointing inward
    CHECK(v[0] * x[0] + v[1] * x[1] + v[2] * x[2] < 0.0);
    CHECK(std::abs(v[0] * d[1] - v[1] * d[0]) < 1e-12 * len(v) + 1e-300);
  }
}

TEST_CASE("ray flux agrees with the log-panel rule") {
  const PointEvaluator ev(g1());
  const Vec3 d{0.0, 0.6, 0.8};
  std::vector<double> r{0.1, 0.7, 1.9, 4.0, 7.5};
  const auto phi = radial_flux(ev, d, r);
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(phi[i] == doctest::Approx(g1_flux(r[i])).epsilon(1e-9));
  }
  CHECK_THROWS_AS(radial_flux(ev, d, {2.0, 1.0}), InvalidArgument);
}

TEST_CASE("node doubling refusal") {
  LambdaQuadrature q;
  q.panel_width = 2.0;
  q.points = 4;
  q.tol = 1e-12;
  CHECK_THROWS_AS(compute_V(g1(), q, false), Refused);
  q.points = 5;
  CHECK_THROWS_AS(compute_V(g1(), q, false), InvalidArgument);
}

TEST_CASE("V is linear in f and scales with mu^2") {
  const Field f = g1();
  const Field g = Field::sample(kGrid, [](const Vec3& x) { return x[0] * gauss(x, 1.5); });
  const Field h = 2.0 * f + (-3.0) * g;
  const PointEvaluator ef(f), eg(g), eh(h);
  const double mu = 2.0;
  const PointEvaluator e2(Field::sample(kGrid, [](const Vec3& x) { return gauss(x, 2.0); }));
  const Field fm = Field::sample(kGrid, [mu](const Vec3& x) {
    return mu * mu * mu * gauss({mu * x[0], mu * x[1], mu * x[2]}, 2.0);
  });
  const PointEvaluator em(fm);
  const Vec3 pts[] = {{0.3, -0.2, 0.9}, {2.0, 1.0, -1.5}, {-3.0, 0.4, 2.2}};
  for (const auto& x : pts) {
    const Vec3 a = evaluate_V(ef, x), b = evaluate_V(eg, x), c = evaluate_V(eh, x);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(c[i] - (2.0 * a[i] - 3.0 * b[i])) < 1e-12);
    const Vec3 vm = evaluate_V(em, x);
    const Vec3 v1 = evaluate_V(e2, {mu * x[0], mu * x[1], mu * x[2]});
    for (int i = 0; i < 3; ++i) CHECK(vm[i] == doctest::Approx(mu * mu * v1[i]).epsilon(1e-7));
  }
}

TEST_CASE("grid V is odd for an even f") {
  const GridSpec g(32, 24.0);
  const Field f = Field::sample(g, [](const Vec3& x) { return gauss(x, 1.0); });
  const Decomposition dec = compute_V(f);
  REQUIRE(dec.V.is_vector());
  const auto& vx = dec.V.real(0);
  CHECK(vx[g.point_index(0, 0, 0)] == 0.0);
  const double a = vx[g.point_index(3, 5, 30)];
  const double b = vx[g.point_index(29, 27, 2)];
  CHECK(a == doctest::Approx(-b).epsilon(1e-12));
  CHECK(a < 0.0);  // x > 0 at index 3
}

TEST_CASE("weak identity holds for smooth data") {
  SphereQuadrature sq;
  sq.n_polar = 32;
  sq.n_azimuth = 64;
  const auto tests = default_test_set(24.0);
  const Field fs[] = {
      g1(),
      Field::sample(kGrid, [](const Vec3& x) { return -x[0] / 2.0 * gauss(x, 1.0); }),
      Field::sample(kGrid, [](const Vec3& x) { return x[0] * x[1] * x[2] * gauss(x, 1.0); }),
  };
  for (const auto& f : fs) {
    const Decomposition dec = compute_V(f, {}, false);
    const auto rep = weak_identity_residual(dec, f, tests, sq);
    int skipped = 0;
    for (const auto& t : rep.terms) skipped += t.skipped;
    CHECK(skipped == 1);
    CHECK(rep.terms.size() - skipped >= 10);
    CHECK(rep.max_residual < 1e-6);
  }
}

TEST_CASE("weak pairing recovers the mass") {
  SphereQuadrature sq;
  sq.n_polar = 16;
  sq.n_azimuth = 32;
  const Field f = Field::sample(kGrid, [](const Vec3& x) {
    return 0.7 * gauss(x, 1.0) + 0.3 * gauss({x[0] - 0.5, x[1], x[2]}, 0.8);
  });
  const Decomposition dec = compute_V(f, {}, false);
  const double m = weak_mass(dec, f, {plateau_test_function({0, 0, 0}, 9.0, 11.0)}, sq);
  CHECK(m == doctest::Approx(integral(f)).epsilon(1e-8));
  CHECK_THROWS_AS(weak_mass(dec, f, {gaussian_test_function({0, 0, 0}, 4.0)}, sq), Refused);
}

TEST_CASE("plateau test function is smooth and exact on its plateau") {
  const TestFunction t = plateau_test_function({1, 0, 0}, 1.0, 2.0);
  CHECK(t.value({1.5, 0, 0}) == 1.0);
  CHECK(t.value({4, 0, 0}) == 0.0);
  const Vec3 x{2.4, 0.3, -0.2};
  const Vec3 g = t.gradient(x);
  const double h = 1e-6;
  for (int a = 0; a < 3; ++a) {
    Vec3 xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    CHECK(g[a] == doctest::Approx((t.value(xp) - t.value(xm)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("V_q bound with the Minkowski constant") {
  CHECK(vq_constant(1.2) == doctest::Approx(2.0));
  CHECK(vq_constant(1.0) == doctest::Approx(1.0));
  SphereQuadrature sq;
  sq.n_polar = 4;
  sq.n_azimuth = 4;
  const auto rows = vq_bound_check(g1(), {1.0, 1.1, 1.2, 1.4}, sq);
  for (const auto& r : rows) {
    CHECK(r.pass);
    CHECK(r.ratio > 0.0);
  }
  CHECK_THROWS_AS(vq_bound_check(g1(), {1.5}, sq), Refused);
  CHECK_THROWS_AS(vq_bound_check(g1(), {0.9}, sq), InvalidArgument);
}

TEST_CASE("V_q of the heat kernel against a radial oracle") {
  // ||V||_q^q = 4 pi int_0^inf r^{2-2q} Phi(r)^q dr with Phi in closed form;
  // the substitution r = e^y and a fine trapezoid rule serve as the oracle.
  const double q = 1.2;
  double oracle = 0.0;
  const double dy = 1e-3;
  for (double y = -40.0; y < std::log(12.0); y += dy) {
    const double r = std::exp(y + 0.5 * dy);
    oracle += dy * std::pow(r, 3.0 - 2.0 * q) * std::pow(g1_flux(r) - g1_flux(12.0), q);
  }
  oracle = std::pow(4.0 * std::numbers::pi * oracle, 1.0 / q);
  SphereQuadrature sq;
  sq.n_polar = 4;
  sq.n_azimuth = 4;
  sq.r_min = 1e-3;
  const PointEvaluator ev(g1());
  CHECK(v_norm(ev, q, sq) == doctest::Approx(oracle).epsilon(1e-5));
}
