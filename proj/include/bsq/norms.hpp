#pragma once

#include <span>

#include "bsq/field.hpp"

namespace bsq {

/// (sum |f|^p dx^3)^{1/p} over the box; p = inf gives the grid maximum.
/// Vector fields use the pointwise Euclidean magnitude.
double lp_norm(const Field& f, double p);

/// Same quadrature restricted to {|x - center| >= R} (or < R when the region
/// is the ball). Throws InvalidArgument once R >= L/2.
double exterior_lp_norm(const Field& f, double p, const RegionSpec& region);

/// Norm of precomputed pointwise magnitudes. `radius` may be empty (whole
/// box); otherwise samples with radius < region.radius (or >= for the ball)
/// are skipped.
double lp_norm_of_magnitudes(const GridSpec& grid, std::span<const double> magnitude,
                             double p, const RegionSpec* region = nullptr);

/// Pointwise Euclidean magnitude in real space.
RealVec magnitude(const Field& f);

/// sum f dx^3 (scalar fields).
double integral(const Field& f);

/// sum f g dx^3, componentwise dot for vector fields.
double inner_product(const Field& f, const Field& g);

/// Minimum-image radii of every sample about grid.center.
RealVec radii(const GridSpec& grid);

}  // namespace bsq
