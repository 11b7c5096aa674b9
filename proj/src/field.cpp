#include "bsq/field.hpp"

#include <algorithm>

#include "bsq/fft.hpp"

namespace bsq {
namespace {

void check_count(int count) {
  if (count != 1 && count != 3) {
    throw InvalidArgument("field: expected 1 or 3 components, got " + std::to_string(count));
  }
}

void check_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("field: grids differ");
  if (a.components() != b.components()) throw InvalidArgument("field: ranks differ");
}

}  // namespace

Field Field::from_real(const GridSpec& grid, std::vector<RealVec> components) {
  grid.validate();
  check_count(int(components.size()));
  for (const auto& c : components) {
    if (c.size() != grid.num_points()) throw InvalidArgument("field: real component has wrong size");
  }
  Field f;
  f.grid_ = grid;
  f.components_ = int(components.size());
  f.real_ = std::make_shared<const std::vector<RealVec>>(std::move(components));
  return f;
}

Field Field::from_spectral(const GridSpec& grid, std::vector<ComplexVec> components) {
  grid.validate();
  check_count(int(components.size()));
  for (const auto& c : components) {
    if (c.size() != grid.num_modes()) {
      throw InvalidArgument("field: spectral component has wrong size");
    }
  }
  Field f;
  f.grid_ = grid;
  f.components_ = int(components.size());
  f.spectral_ = std::make_shared<const std::vector<ComplexVec>>(std::move(components));
  return f;
}

Field Field::zeros(const GridSpec& grid, Rank rank, Representation rep) {
  const int c = int(rank);
  if (rep == Representation::Real) {
    return from_real(grid, std::vector<RealVec>(c, RealVec(grid.num_points(), 0.0)));
  }
  return from_spectral(grid, std::vector<ComplexVec>(c, ComplexVec(grid.num_modes())));
}

Field Field::sample(const GridSpec& grid, const std::function<double(const Vec3&)>& fn) {
  RealVec v(grid.num_points());
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j)
      for (int k = 0; k < grid.n; ++k) v[grid.point_index(i, j, k)] = fn(coordinates(grid, i, j, k));
  std::vector<RealVec> comps;
  comps.push_back(std::move(v));
  return from_real(grid, std::move(comps));
}

Field Field::sample_vector(const GridSpec& grid, const std::function<Vec3(const Vec3&)>& fn) {
  std::vector<RealVec> comps(3, RealVec(grid.num_points()));
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j)
      for (int k = 0; k < grid.n; ++k) {
        const Vec3 v = fn(coordinates(grid, i, j, k));
        const std::size_t q = grid.point_index(i, j, k);
        for (int c = 0; c < 3; ++c) comps[c][q] = v[c];
      }
  return from_real(grid, std::move(comps));
}

const RealVec& Field::real(int c) const {
  if (!real_) throw std::logic_error("field: real representation not present");
  return real_->at(std::size_t(c));
}

const ComplexVec& Field::spectral(int c) const {
  if (!spectral_) throw std::logic_error("field: spectral representation not present");
  return spectral_->at(std::size_t(c));
}

Field Field::component(int c) const {
  if (c < 0 || c >= components_) throw InvalidArgument("field: component out of range");
  Field f;
  f.grid_ = grid_;
  f.components_ = 1;
  if (real_) f.real_ = std::make_shared<const std::vector<RealVec>>(1, (*real_)[c]);
  if (spectral_) f.spectral_ = std::make_shared<const std::vector<ComplexVec>>(1, (*spectral_)[c]);
  return f;
}

Field Field::spectral_only() const {
  Field f = to_spectral(*this);
  f.real_.reset();
  return f;
}

Field Field::real_only() const {
  Field f = to_real(*this);
  f.spectral_.reset();
  return f;
}

Field to_spectral(const Field& f) {
  if (f.empty()) throw InvalidArgument("field: empty");
  if (f.has_spectral()) return f;
  auto spec = std::make_shared<std::vector<ComplexVec>>();
  for (int c = 0; c < f.components(); ++c) spec->push_back(fft::forward(f.grid(), f.real(c)));
  Field out = f;
  out.spectral_ = std::move(spec);
  return out;
}

Field to_real(const Field& f) {
  if (f.empty()) throw InvalidArgument("field: empty");
  if (f.has_real()) return f;
  auto real = std::make_shared<std::vector<RealVec>>();
  for (int c = 0; c < f.components(); ++c) real->push_back(fft::inverse(f.grid(), f.spectral(c)));
  Field out = f;
  out.real_ = std::move(real);
  return out;
}

Field stack(const Field& a, const Field& b, const Field& c) {
  if (a.is_vector() || b.is_vector() || c.is_vector()) {
    throw InvalidArgument("stack: expected scalar fields");
  }
  if (!(a.grid() == b.grid()) || !(a.grid() == c.grid())) throw InvalidArgument("stack: grids differ");
  if (a.has_spectral() && b.has_spectral() && c.has_spectral()) {
    return Field::from_spectral(a.grid(), {a.spectral(), b.spectral(), c.spectral()});
  }
  const Field ra = to_real(a), rb = to_real(b), rc = to_real(c);
  return Field::from_real(a.grid(), {ra.real(), rb.real(), rc.real()});
}

Field vertical(const Field& scalar) {
  if (scalar.is_vector()) throw InvalidArgument("vertical: expected a scalar field");
  const Field s = to_spectral(scalar);
  ComplexVec zero(s.grid().num_modes());
  return Field::from_spectral(s.grid(), {zero, zero, s.spectral()});
}

namespace {

Field combine(const Field& a, const Field& b, double sa, double sb) {
  check_same_grid(a, b);
  if (a.has_spectral() && b.has_spectral()) {
    std::vector<ComplexVec> out;
    for (int c = 0; c < a.components(); ++c) {
      const auto& x = a.spectral(c);
      const auto& y = b.spectral(c);
      ComplexVec z(x.size());
      for (std::size_t q = 0; q < z.size(); ++q) z[q] = sa * x[q] + sb * y[q];
      out.push_back(std::move(z));
    }
    return Field::from_spectral(a.grid(), std::move(out));
  }
  const Field ra = to_real(a), rb = to_real(b);
  std::vector<RealVec> out;
  for (int c = 0; c < a.components(); ++c) {
    const auto& x = ra.real(c);
    const auto& y = rb.real(c);
    RealVec z(x.size());
    for (std::size_t q = 0; q < z.size(); ++q) z[q] = sa * x[q] + sb * y[q];
    out.push_back(std::move(z));
  }
  return Field::from_real(a.grid(), std::move(out));
}

}  // namespace

Field operator+(const Field& a, const Field& b) { return combine(a, b, 1.0, 1.0); }
Field operator-(const Field& a, const Field& b) { return combine(a, b, 1.0, -1.0); }

Field operator*(double s, const Field& f) {
  if (f.has_spectral()) {
    std::vector<ComplexVec> out;
    for (int c = 0; c < f.components(); ++c) {
      ComplexVec z = f.spectral(c);
      for (auto& v : z) v *= s;
      out.push_back(std::move(z));
    }
    return Field::from_spectral(f.grid(), std::move(out));
  }
  std::vector<RealVec> out;
  for (int c = 0; c < f.components(); ++c) {
    RealVec z = f.real(c);
    for (auto& v : z) v *= s;
    out.push_back(std::move(z));
  }
  return Field::from_real(f.grid(), std::move(out));
}

Vec3 coordinates(const GridSpec& grid, int i, int j, int k) {
  return {grid.coordinate(i), grid.coordinate(j), grid.coordinate(k)};
}

double hermitian_defect(const Field& f) {
  const Field s = to_spectral(f);
  const GridSpec& g = s.grid();
  const int n = g.n;
  double defect = 0.0, scale = 0.0;
  for (int c = 0; c < s.components(); ++c) {
    const auto& v = s.spectral(c);
    for (const auto& z : v) scale = std::max(scale, std::abs(z));
    // Planes kk = 0 and kk = n/2 are self-conjugate under (i, j) -> (-i, -j).
    for (int kk : {0, n / 2}) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const int mi = (n - i) % n, mj = (n - j) % n;
          const Complex a = v[g.mode_index(i, j, kk)];
          const Complex b = std::conj(v[g.mode_index(mi, mj, kk)]);
          defect = std::max(defect, std::abs(a - b));
        }
      }
    }
  }
  return scale > 0.0 ? defect / scale : 0.0;
}

}  // namespace bsq
