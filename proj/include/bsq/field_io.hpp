#pragma once

#include <filesystem>
#include <iosfwd>

#include "bsq/field.hpp"

namespace bsq {

/// Flat binary snapshot layout (all little-endian):
///   uint32 axis count (3), uint32 n, float64 box_length,
///   uint32 rank (1 or 3), uint32 representation (0 real, 1 spectral),
/// followed by the components in order. Real components hold n^3 float64
/// samples in row-major (i, j, k) order; spectral components hold
/// n * n * (n/2 + 1) interleaved (re, im) float64 pairs of the half spectrum.
void write_field(std::ostream& out, const Field& f, Representation rep);
Field read_field(std::istream& in);

void save_field(const std::filesystem::path& path, const Field& f, Representation rep);
Field load_field(const std::filesystem::path& path);

}  // namespace bsq
