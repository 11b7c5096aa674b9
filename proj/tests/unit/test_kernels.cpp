#include <doctest.h>

#include <random>

#include "bsq/kernels.hpp"
#include "bsq/norms.hpp"
#include "bsq/spectral_ops.hpp"

using namespace bsq;

namespace {

int mirror(const GridSpec& g, int i) { return (g.n - i) % g.n; }

}  // namespace

TEST_CASE("build_kernel argument checks") {
  const GridSpec g(32, 16.0);
  CHECK_THROWS_AS(build_kernel(KernelKind::K, g, 0.0), InvalidArgument);
  CHECK_THROWS_AS(build_kernel(KernelKind::K, g, -1.0), InvalidArgument);
  // dx = 0.5, so sqrt(t) must be at least 1.
  CHECK_THROWS_AS(build_kernel(KernelKind::G, g, 0.8), UnderResolved);
  CHECK_NOTHROW(build_kernel(KernelKind::G, g, 1.0));
  CHECK(parse_kernel_kind("Ftilde") == KernelKind::Ftilde);
  CHECK_THROWS_AS(parse_kernel_kind("H"), InvalidArgument);
}

TEST_CASE("heat kernel has unit mass") {
  const GridSpec g(32, 16.0);
  const KernelTensor G = build_kernel(KernelKind::G, g, 1.0);
  CHECK(integral(G.component_field(0)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("K symbol is annihilated by k") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> d;
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3 k{d(rng), d(rng), d(rng)};
    for (int l = 0; l < 3; ++l) {
      Complex s{};
      for (int j = 0; j < 3; ++j) s += k[j] * kernel_symbol(KernelKind::K, 3 * j + l, k, 0.3);
      CHECK(std::abs(s) < 1e-14);
    }
    for (int h = 0; h < 3; ++h)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) {
          const Complex f = kernel_symbol(KernelKind::F, 9 * j + 3 * h + l, k, 0.3);
          const Complex expect = Complex(0, k[h]) * kernel_symbol(KernelKind::K, 3 * j + l, k, 0.3);
          CHECK(std::abs(f - expect) < 1e-15);
        }
  }
  CHECK(kernel_symbol(KernelKind::K, 0, {0, 0, 0}, 1.0) == Complex{});
}

TEST_CASE("kernel parity") {
  const GridSpec g(16, 8.0);
  const KernelTensor K = build_kernel(KernelKind::K, g, 1.0);
  const KernelTensor Ft = build_kernel(KernelKind::Ftilde, g, 1.0);
  double even_defect = 0.0, odd_defect = 0.0, scale = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const std::size_t q = g.point_index(i, j, k);
        const std::size_t m = g.point_index(mirror(g, i), mirror(g, j), mirror(g, k));
        for (const auto& c : K.components) {
          even_defect = std::max(even_defect, std::abs(c[q] - c[m]));
          scale = std::max(scale, std::abs(c[q]));
        }
        // d/dx_0 of an even function is odd under x_0 -> -x_0.
        const std::size_t m0 = g.point_index(mirror(g, i), j, k);
        odd_defect = std::max(odd_defect, std::abs(Ft.components[0][q] + Ft.components[0][m0]));
      }
  CHECK(even_defect <= 1e-13 * scale);
  CHECK(odd_defect <= 1e-13 * scale);
}

TEST_CASE("homogeneous part") {
  CHECK_THROWS_AS(homogeneous_part({0, 0, 0}), InvalidArgument);
  const Vec3 x{0.3, -1.2, 0.7};
  const Mat3 a = homogeneous_part(x);
  for (double lam : {2.0, 10.0}) {
    const Mat3 b = homogeneous_part({lam * x[0], lam * x[1], lam * x[2]});
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) CHECK(b[j][l] == doctest::Approx(a[j][l] / (lam * lam * lam)).epsilon(1e-13));
  }
  double trace = 0.0;
  for (int j = 0; j < 3; ++j) {
    trace += a[j][j];
    for (int l = 0; l < 3; ++l) CHECK(a[j][l] == a[l][j]);
  }
  CHECK(std::abs(trace) < 1e-15);
  CHECK(homogeneous_part({0, 0, 1})[2][2] == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
}

TEST_CASE("far field of K approaches the homogeneous part") {
  const GridSpec g(96, 48.0);
  const double t = 1.0;
  const KernelTensor K = build_kernel(KernelKind::K, g, t);
  // Residual |x|^3 |K - homogeneous| along a diagonal shrinks with |x| / sqrt t.
  std::vector<double> residual;
  for (int s : {2, 4, 8}) {
    const Vec3 x{g.coordinate(s), g.coordinate(s), g.coordinate(s)};
    const Mat3 m = K.matrix_at(s, s, s);
    const Mat3 h = homogeneous_part(x);
    double d = 0.0;
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) d = std::max(d, std::abs(m[j][l] - h[j][l]));
    const double r = std::sqrt(3.0) * g.coordinate(s);
    residual.push_back(r * r * r * d);
  }
  CHECK(residual[1] < residual[0]);
  CHECK(residual[2] < residual[1]);
  // K_33 at 10 sqrt(t) e3 against the closed form.
  const double k33 = K.matrix_at(0, 0, 20)[2][2];
  const double h33 = homogeneous_part({0, 0, 10.0})[2][2];
  CHECK(std::abs(k33 / h33 - 1.0) < 0.05);
}

TEST_CASE("K norms are stable under refinement") {
  const KernelTensor coarse = build_kernel(KernelKind::K, GridSpec(32, 16.0), 1.0);
  const KernelTensor fine = build_kernel(KernelKind::K, GridSpec(64, 16.0), 1.0);
  for (double p : {1.5, 2.0, 3.0, kInf}) {
    const double a = kernel_lp_norm(coarse, p), b = kernel_lp_norm(fine, p);
    CHECK(std::abs(a / b - 1.0) < 1e-3);
  }
}

TEST_CASE("K L1 norm grows logarithmically with the box") {
  std::vector<double> l1;
  for (int n : {32, 64, 128}) {
    l1.push_back(kernel_lp_norm(build_kernel(KernelKind::K, GridSpec(n, double(n)), 4.0), 1.0));
  }
  const double d1 = l1[1] - l1[0], d2 = l1[2] - l1[1];
  CHECK(d1 > 0.0);
  CHECK(d2 > 0.0);
  // Equal increments per doubling of L is the signature of c log L.
  CHECK(std::abs(d2 / d1 - 1.0) < 0.2);
}

TEST_CASE("decay profiles") {
  const GridSpec g(64, 32.0);
  const KernelTensor K = build_kernel(KernelKind::K, g, 1.0);
  const DecayProfile prof = decay_profile(K, -3.0);
  CHECK_FALSE(prof.fit.has_value());
  CHECK_FALSE(prof.refusal.empty());
  CHECK(prof.shells.size() == 5u);
  CHECK(prof.shells.back().r_high == 16.0);

  const KernelTensor G = build_kernel(KernelKind::G, g, 1.0);
  DecayOptions opt;
  opt.fit_low = 2.0;
  const DecayProfile pg = decay_profile(G, 0.0, opt);
  REQUIRE(pg.fit.has_value());
  CHECK(pg.fit->slope < -6.0);

  // Profiles computed at t = 4 on the doubled box collapse onto t = 1.
  const KernelTensor K4 = build_kernel(KernelKind::K, g.scaled(2.0), 4.0);
  const DecayProfile p4 = decay_profile(K4, -3.0);
  REQUIRE(p4.shells.size() == prof.shells.size());
  for (std::size_t s = 0; s < prof.shells.size(); ++s) {
    CHECK(p4.shells[s].shell_max == doctest::Approx(prof.shells[s].shell_max).epsilon(1e-10));
  }
}

TEST_CASE("scaling identities on grid pairs") {
  const GridSpec g(32, 16.0);
  for (double t : {1.0, 4.0}) {
    CHECK(scaling_defect(KernelKind::K, g, t) < 1e-3);
    CHECK(scaling_defect(KernelKind::F, g, t) < 1e-3);
  }
  for (double r : {1.0, 1.5, 3.0}) {
    CHECK(norm_scaling_defect(KernelKind::F, g, 4.0, r) < 1e-3);
    CHECK(norm_scaling_defect(KernelKind::Ftilde, g, 4.0, r) < 1e-3);
  }
}

TEST_CASE("K convolution equals the heat-projection multiplier") {
  const GridSpec g(32, 16.0);
  const Field theta = Field::sample(g, [](const Vec3& x) {
    return std::exp(-(x[0] * x[0] + 2 * x[1] * x[1] + (x[2] - 1) * (x[2] - 1)));
  });
  const double t = 1.5;
  const KernelTensor K = build_kernel(KernelKind::K, g, t);
  const Field a = to_real(apply_kernel(K, vertical(theta)));
  const Field b = to_real(heat_semigroup(leray_project(vertical(theta)), t));
  double d = 0.0, s = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t q = 0; q < g.num_points(); ++q) {
      d = std::max(d, std::abs(a.real(c)[q] - b.real(c)[q]));
      s = std::max(s, std::abs(b.real(c)[q]));
    }
  CHECK(d <= 1e-10 * s);
}
