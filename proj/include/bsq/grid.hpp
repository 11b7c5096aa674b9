#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bsq {

using Vec3 = std::array<double, 3>;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when a precondition on an argument is violated.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Raised when an operation declines to produce a result (insufficient
/// window, unresolved quadrature, support overflow, ...). The message
/// carries the reason.
class Refused : public Error {
public:
  using Error::Error;
};

/// Raised when a kernel would be sampled with a Gaussian narrower than two
/// grid cells.
class UnderResolved : public Error {
public:
  using Error::Error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Discretization of the periodic cube [-L/2, L/2)^3 with n points per axis.
///
/// Sample index i along an axis sits at coordinate wrap(i) * dx, where
/// wrap(i) = i for i < n/2 and i - n otherwise, so the origin is sample 0.
/// The same wrap maps a spectral index to its integer mode m in [-n/2, n/2).
struct GridSpec {
  int n = 64;
  double box_length = 64.0;
  double dealias_fraction = 2.0 / 3.0;
  Vec3 center{0.0, 0.0, 0.0};

  GridSpec() = default;
  GridSpec(int n_per_axis, double length, double dealias = 2.0 / 3.0,
           Vec3 origin = {0.0, 0.0, 0.0});

  /// Throws InvalidArgument unless n is even and >= 8, L > 0 and the dealias
  /// fraction lies in (0, 1].
  void validate() const;

  double dx() const { return box_length / n; }
  double cell_volume() const { const double h = dx(); return h * h * h; }
  double volume() const { return box_length * box_length * box_length; }

  std::size_t num_points() const { return std::size_t(n) * n * n; }
  int half_n() const { return n / 2 + 1; }
  /// Number of stored coefficients for the real-to-complex half spectrum.
  std::size_t num_modes() const { return std::size_t(n) * n * half_n(); }

  int mode(int index) const { return index < n / 2 ? index : index - n; }
  double wavenumber(int index) const {
    return 2.0 * std::numbers::pi * mode(index) / box_length;
  }
  double coordinate(int index) const { return mode(index) * dx(); }
  bool is_nyquist(int index) const { return index == n / 2; }

  /// True iff the mode survives the dealias mask along one axis.
  bool dealias_keeps(int index) const {
    return std::abs(mode(index)) <= dealias_fraction * (n / 2);
  }

  std::size_t point_index(int i, int j, int k) const {
    return (std::size_t(i) * n + j) * n + k;
  }
  std::size_t mode_index(int i, int j, int k) const {
    return (std::size_t(i) * n + j) * half_n() + k;
  }

  /// Minimum-image distance from the sample (i, j, k) to `center`.
  double radius(int i, int j, int k) const;

  /// Grid with identical n and a box scaled by `factor`.
  GridSpec scaled(double factor) const;

  bool operator==(const GridSpec&) const = default;
};

/// Ball B_R (complement_flag false) or its complement (true) about the grid
/// center.
struct RegionSpec {
  double radius = 0.0;
  bool complement = true;

  /// A region is usable on `grid` only while radius < L/2.
  bool valid_on(const GridSpec& grid) const {
    return radius >= 0.0 && radius < 0.5 * grid.box_length;
  }
};

std::string describe(const GridSpec& grid);

}  // namespace bsq
