#include "bsq/norms.hpp"

#include <algorithm>

namespace bsq {
namespace {

double power(double a, double p) {
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  if (p == 3.0) return a * a * a;
  return std::pow(a, p);
}

}  // namespace

RealVec magnitude(const Field& f) {
  const Field r = to_real(f);
  const std::size_t m = r.grid().num_points();
  RealVec out(m);
  if (!r.is_vector()) {
    const auto& v = r.real();
    for (std::size_t q = 0; q < m; ++q) out[q] = std::abs(v[q]);
    return out;
  }
  const auto &a = r.real(0), &b = r.real(1), &c = r.real(2);
#pragma omp parallel for schedule(static)
  for (std::size_t q = 0; q < m; ++q) out[q] = std::sqrt(a[q] * a[q] + b[q] * b[q] + c[q] * c[q]);
  return out;
}

RealVec radii(const GridSpec& grid) {
  RealVec out(grid.num_points());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j)
      for (int k = 0; k < grid.n; ++k) out[grid.point_index(i, j, k)] = grid.radius(i, j, k);
  return out;
}

double lp_norm_of_magnitudes(const GridSpec& grid, std::span<const double> mag, double p,
                             const RegionSpec* region) {
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm: p must be >= 1");
  if (mag.size() != grid.num_points()) throw InvalidArgument("lp_norm: size mismatch");
  if (region && !region->valid_on(grid)) {
    throw InvalidArgument("lp_norm: region radius must satisfy 0 <= R < L/2");
  }
  const int n = grid.n;
  const bool inf = std::isinf(p);
  // Per-slab partials combined in a fixed order keep the result independent
  // of the thread count.
  std::vector<double> slab(n, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (region) {
          const bool outside = grid.radius(i, j, k) >= region->radius;
          if (outside != region->complement) continue;
        }
        const double a = mag[grid.point_index(i, j, k)];
        acc = inf ? std::max(acc, a) : acc + power(a, p);
      }
    }
    slab[i] = acc;
  }
  double total = 0.0;
  for (double s : slab) total = inf ? std::max(total, s) : total + s;
  if (inf) return total;
  return std::pow(total * grid.cell_volume(), 1.0 / p);
}

double lp_norm(const Field& f, double p) {
  const RealVec m = magnitude(f);
  return lp_norm_of_magnitudes(f.grid(), m, p);
}

double exterior_lp_norm(const Field& f, double p, const RegionSpec& region) {
  const RealVec m = magnitude(f);
  return lp_norm_of_magnitudes(f.grid(), m, p, &region);
}

double integral(const Field& f) {
  if (f.is_vector()) throw InvalidArgument("integral: expected a scalar field");
  if (f.has_spectral()) return f.spectral()[0].real();
  const auto& v = f.real();
  const GridSpec& g = f.grid();
  std::vector<double> slab(g.n, 0.0);
  const std::size_t per = std::size_t(g.n) * g.n;
  for (int i = 0; i < g.n; ++i) {
    double acc = 0.0;
    for (std::size_t q = i * per; q < (i + 1) * per; ++q) acc += v[q];
    slab[i] = acc;
  }
  double total = 0.0;
  for (double s : slab) total += s;
  return total * g.cell_volume();
}

double inner_product(const Field& f, const Field& g) {
  if (!(f.grid() == g.grid()) || f.components() != g.components()) {
    throw InvalidArgument("inner_product: incompatible fields");
  }
  const Field a = to_real(f), b = to_real(g);
  const GridSpec& grid = f.grid();
  const std::size_t per = std::size_t(grid.n) * grid.n;
  double total = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    const auto &x = a.real(c), &y = b.real(c);
    for (int i = 0; i < grid.n; ++i) {
      double acc = 0.0;
      for (std::size_t q = i * per; q < (i + 1) * per; ++q) acc += x[q] * y[q];
      total += acc;
    }
  }
  return total * grid.cell_volume();
}

}  // namespace bsq
