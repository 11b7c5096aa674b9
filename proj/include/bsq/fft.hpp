#pragma once

#include "bsq/field.hpp"

namespace bsq::fft {

/// Forward transform of one real component: out = dx^3 * DFT(in).
void forward(const GridSpec& grid, const double* in, Complex* out);

/// Inverse transform of one half spectrum: out = L^-3 * IDFT(in).
/// `in` is left untouched.
void inverse(const GridSpec& grid, const Complex* in, double* out);

RealVec inverse(const GridSpec& grid, const ComplexVec& in);
ComplexVec forward(const GridSpec& grid, const RealVec& in);

}  // namespace bsq::fft
