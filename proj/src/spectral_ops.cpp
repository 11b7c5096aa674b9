#include "bsq/spectral_ops.hpp"

#include <algorithm>

#include "bsq/fft.hpp"

namespace bsq {
namespace {

// Parallel over the slowest axis; fn(idx, k, i, j, kk) with k the wavevector.
template <class Fn>
void modes_parallel(const GridSpec& g, Fn&& fn) {
  const int n = g.n;
  const int h = g.half_n();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const double kx = g.wavenumber(i);
    for (int j = 0; j < n; ++j) {
      const double ky = g.wavenumber(j);
      std::size_t idx = g.mode_index(i, j, 0);
      for (int kk = 0; kk < h; ++kk, ++idx) fn(idx, Vec3{kx, ky, g.wavenumber(kk)}, i, j, kk);
    }
  }
}

std::vector<ComplexVec> spectral_copy(const Field& f) {
  const Field s = to_spectral(f);
  std::vector<ComplexVec> out;
  for (int c = 0; c < s.components(); ++c) out.push_back(s.spectral(c));
  return out;
}

int axis_index(int axis, int i, int j, int kk) { return axis == 0 ? i : axis == 1 ? j : kk; }

}  // namespace

Field leray_project(const Field& v) {
  if (!v.is_vector()) throw InvalidArgument("leray_project: expected a vector field");
  const GridSpec& g = v.grid();
  auto c = spectral_copy(v);
  modes_parallel(g, [&](std::size_t q, const Vec3& k, int i, int j, int kk) {
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (k2 == 0.0 || on_nyquist(g, i, j, kk)) {
      for (int a = 0; a < 3; ++a) c[a][q] = 0.0;
      return;
    }
    const Complex dot = (k[0] * c[0][q] + k[1] * c[1][q] + k[2] * c[2][q]) / k2;
    for (int a = 0; a < 3; ++a) c[a][q] -= k[a] * dot;
  });
  return Field::from_spectral(g, std::move(c));
}

Field heat_semigroup(const Field& f, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("heat_semigroup: t must be >= 0");
  const GridSpec& g = f.grid();
  auto c = spectral_copy(f);
  if (t == 0.0) return Field::from_spectral(g, std::move(c));
  modes_parallel(g, [&](std::size_t q, const Vec3& k, int, int, int) {
    const double e = std::exp(-(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) * t);
    for (auto& comp : c) comp[q] *= e;
  });
  return Field::from_spectral(g, std::move(c));
}

Field grad_div(const Field& f, DerivativeKind kind, int axis) {
  const GridSpec& g = f.grid();
  const Field s = to_spectral(f);
  const Complex I(0.0, 1.0);
  switch (kind) {
    case DerivativeKind::Gradient: {
      if (s.is_vector()) throw InvalidArgument("gradient: expected a scalar field");
      const auto& src = s.spectral();
      std::vector<ComplexVec> out(3, ComplexVec(g.num_modes()));
      modes_parallel(g, [&](std::size_t q, const Vec3& k, int i, int j, int kk) {
        for (int a = 0; a < 3; ++a) {
          out[a][q] = g.is_nyquist(axis_index(a, i, j, kk)) ? Complex{} : I * k[a] * src[q];
        }
      });
      return Field::from_spectral(g, std::move(out));
    }
    case DerivativeKind::Divergence: {
      if (!s.is_vector()) throw InvalidArgument("divergence: expected a vector field");
      std::vector<ComplexVec> out(1, ComplexVec(g.num_modes()));
      modes_parallel(g, [&](std::size_t q, const Vec3& k, int i, int j, int kk) {
        Complex acc{};
        for (int a = 0; a < 3; ++a) {
          if (!g.is_nyquist(axis_index(a, i, j, kk))) acc += I * k[a] * s.spectral(a)[q];
        }
        out[0][q] = acc;
      });
      return Field::from_spectral(g, std::move(out));
    }
    case DerivativeKind::Component: {
      if (axis < 0 || axis > 2) throw InvalidArgument("derivative: axis must be 0, 1 or 2");
      auto c = spectral_copy(s);
      modes_parallel(g, [&](std::size_t q, const Vec3& k, int i, int j, int kk) {
        const bool drop = g.is_nyquist(axis_index(axis, i, j, kk));
        for (auto& comp : c) comp[q] = drop ? Complex{} : I * k[axis] * comp[q];
      });
      return Field::from_spectral(g, std::move(c));
    }
  }
  throw InvalidArgument("grad_div: unknown kind");
}

Field gradient(const Field& f) { return grad_div(f, DerivativeKind::Gradient); }
Field divergence(const Field& f) { return grad_div(f, DerivativeKind::Divergence); }
Field derivative(const Field& f, int axis) {
  return grad_div(f, DerivativeKind::Component, axis);
}

Field laplacian(const Field& f) {
  const GridSpec& g = f.grid();
  auto c = spectral_copy(f);
  modes_parallel(g, [&](std::size_t q, const Vec3& k, int, int, int) {
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    for (auto& comp : c) comp[q] *= -k2;
  });
  return Field::from_spectral(g, std::move(c));
}

Field dealias(const Field& f) {
  const GridSpec& g = f.grid();
  auto c = spectral_copy(f);
  modes_parallel(g, [&](std::size_t q, const Vec3&, int i, int j, int kk) {
    if (g.dealias_keeps(i) && g.dealias_keeps(j) && g.dealias_keeps(kk)) return;
    for (auto& comp : c) comp[q] = 0.0;
  });
  return Field::from_spectral(g, std::move(c));
}

Field dealiased_product(const Field& a, const Field& b) {
  if (a.is_vector() || b.is_vector()) throw InvalidArgument("dealiased_product: expected scalars");
  if (!(a.grid() == b.grid())) throw InvalidArgument("dealiased_product: grids differ");
  const GridSpec& g = a.grid();
  const Field ra = to_real(dealias(a));
  const Field rb = to_real(dealias(b));
  RealVec p(g.num_points());
  const auto& x = ra.real();
  const auto& y = rb.real();
#pragma omp parallel for schedule(static)
  for (std::size_t q = 0; q < p.size(); ++q) p[q] = x[q] * y[q];
  return dealias(Field::from_real(g, {std::move(p)}));
}

double divergence_residual(const Field& v) {
  if (!v.is_vector()) throw InvalidArgument("divergence_residual: expected a vector field");
  const Field s = to_spectral(v);
  const GridSpec& g = s.grid();
  double num = 0.0, den = 0.0;
  for_each_mode(g, [&](std::size_t q, double kx, double ky, double kz, int, int, int) {
    const Complex a = s.spectral(0)[q], b = s.spectral(1)[q], c = s.spectral(2)[q];
    const double kn = std::sqrt(kx * kx + ky * ky + kz * kz);
    num = std::max(num, std::abs(kx * a + ky * b + kz * c));
    den = std::max(den, kn * std::sqrt(std::norm(a) + std::norm(b) + std::norm(c)));
  });
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace bsq
