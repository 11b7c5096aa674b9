#pragma once

#include "bsq/field.hpp"

namespace bsq {

enum class DerivativeKind { Gradient, Divergence, Component };

/// Leray projection v^(k) -> (I - k k^T / |k|^2) v^(k). The k = 0 mode is
/// set to zero, which pins the mean-free frame: a box with net buoyancy would
/// otherwise accelerate uniformly. Modes on a Nyquist plane are dropped since
/// the projector is not Hermitian-consistent there.
Field leray_project(const Field& v);

/// Heat semigroup e^{t Delta}: multiplier exp(-|k|^2 t). Throws for t < 0.
Field heat_semigroup(const Field& f, double t);

/// Spectral differentiation.
///   Gradient:   scalar -> vector
///   Divergence: vector -> scalar
///   Component:  d/dx_axis, any rank
/// Nyquist modes along the differentiated axis are dropped.
Field grad_div(const Field& f, DerivativeKind kind, int axis = 0);

Field gradient(const Field& f);
Field divergence(const Field& f);
Field derivative(const Field& f, int axis);
Field laplacian(const Field& f);

/// Zeroes every mode with some |m| > dealias_fraction * n/2.
Field dealias(const Field& f);

/// Pointwise product of two scalar fields, dealiased (both factors and the
/// product are masked).
Field dealiased_product(const Field& a, const Field& b);

/// Largest |k . v^(k)| relative to max |k| |v^(k)|.
double divergence_residual(const Field& v);

/// Calls fn(mode_index, kx, ky, kz, i, j, kk) for every stored mode.
template <class Fn>
void for_each_mode(const GridSpec& grid, Fn&& fn) {
  const int n = grid.n;
  const int h = grid.half_n();
  for (int i = 0; i < n; ++i) {
    const double kx = grid.wavenumber(i);
    for (int j = 0; j < n; ++j) {
      const double ky = grid.wavenumber(j);
      std::size_t idx = grid.mode_index(i, j, 0);
      for (int kk = 0; kk < h; ++kk, ++idx) {
        fn(idx, kx, ky, grid.wavenumber(kk), i, j, kk);
      }
    }
  }
}

/// True if the mode lies on any Nyquist plane.
inline bool on_nyquist(const GridSpec& grid, int i, int j, int kk) {
  return grid.is_nyquist(i) || grid.is_nyquist(j) || grid.is_nyquist(kk);
}

}  // namespace bsq
