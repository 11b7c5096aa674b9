#include "bsq/grid.hpp"

#include <sstream>

namespace bsq {

GridSpec::GridSpec(int n_per_axis, double length, double dealias, Vec3 origin)
    : n(n_per_axis), box_length(length), dealias_fraction(dealias), center(origin) {
  validate();
}

void GridSpec::validate() const {
  if (n < 8 || n % 2 != 0) {
    throw InvalidArgument("grid: n_per_axis must be even and >= 8, got " + std::to_string(n));
  }
  if (!(box_length > 0.0) || !std::isfinite(box_length)) {
    throw InvalidArgument("grid: box_length must be positive");
  }
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0)) {
    throw InvalidArgument("grid: dealias_fraction must lie in (0, 1]");
  }
}

double GridSpec::radius(int i, int j, int k) const {
  const int idx[3] = {i, j, k};
  double r2 = 0.0;
  for (int a = 0; a < 3; ++a) {
    double d = coordinate(idx[a]) - center[a];
    d -= box_length * std::round(d / box_length);
    r2 += d * d;
  }
  return std::sqrt(r2);
}

GridSpec GridSpec::scaled(double factor) const {
  GridSpec g = *this;
  g.box_length *= factor;
  for (double& c : g.center) c *= factor;
  g.validate();
  return g;
}

std::string describe(const GridSpec& grid) {
  std::ostringstream os;
  os << "n=" << grid.n << " L=" << grid.box_length;
  return os.str();
}

}  // namespace bsq
