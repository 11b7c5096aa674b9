#pragma once

#include <complex>
#include <cstdlib>
#include <functional>
#include <memory>
#include <new>
#include <vector>

#include "bsq/grid.hpp"

namespace bsq {

/// 64-byte aligned allocator so that FFT plans built on scratch buffers can
/// be executed on any field storage.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t kAlignment = 64;

  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t count) {
    std::size_t bytes = (count * sizeof(T) + kAlignment - 1) / kAlignment * kAlignment;
    void* p = std::aligned_alloc(kAlignment, bytes == 0 ? kAlignment : bytes);
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { std::free(p); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using Complex = std::complex<double>;
using RealVec = std::vector<double, AlignedAllocator<double>>;
using ComplexVec = std::vector<Complex, AlignedAllocator<Complex>>;

enum class Rank { Scalar = 1, Vector = 3 };
enum class Representation { Real = 0, Spectral = 1 };

/// Scalar or 3-vector field on a periodic grid.
///
/// A Field is immutable. It carries real samples, half-spectrum Fourier
/// coefficients, or both; conversions return a new Field that caches both
/// representations. Copies share storage.
///
/// Spectral coefficients approximate the continuous transform
///   f^(k) = sum_x f(x) e^{-i k.x} dx^3,
/// so the zero mode of a field equals its integral over the box.
class Field {
public:
  Field() = default;

  static Field from_real(const GridSpec& grid, std::vector<RealVec> components);
  static Field from_spectral(const GridSpec& grid, std::vector<ComplexVec> components);
  static Field zeros(const GridSpec& grid, Rank rank, Representation rep);

  /// Samples `fn` at every grid coordinate (origin at sample 0).
  static Field sample(const GridSpec& grid, const std::function<double(const Vec3&)>& fn);
  static Field sample_vector(const GridSpec& grid,
                             const std::function<Vec3(const Vec3&)>& fn);

  bool empty() const { return components_ == 0; }
  const GridSpec& grid() const { return grid_; }
  int components() const { return components_; }
  Rank rank() const { return components_ == 3 ? Rank::Vector : Rank::Scalar; }
  bool is_vector() const { return components_ == 3; }

  bool has_real() const { return real_ != nullptr; }
  bool has_spectral() const { return spectral_ != nullptr; }

  /// Throws std::logic_error if the representation is not present.
  const RealVec& real(int c = 0) const;
  const ComplexVec& spectral(int c = 0) const;

  Field component(int c) const;
  Field spectral_only() const;
  Field real_only() const;

private:
  friend Field to_spectral(const Field& f);
  friend Field to_real(const Field& f);

  GridSpec grid_;
  int components_ = 0;
  std::shared_ptr<const std::vector<RealVec>> real_;
  std::shared_ptr<const std::vector<ComplexVec>> spectral_;
};

Field to_spectral(const Field& f);
Field to_real(const Field& f);

/// Builds the vector field (a, b, c) from three scalars on the same grid.
Field stack(const Field& a, const Field& b, const Field& c);
/// theta * e3.
Field vertical(const Field& scalar);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& f);

/// Coordinates of sample (i, j, k).
Vec3 coordinates(const GridSpec& grid, int i, int j, int k);

/// Largest |c(k) - conj(c(-k))| over the stored planes that carry redundant
/// coefficients, relative to max |c|. Zero for spectra of real fields.
double hermitian_defect(const Field& f);

}  // namespace bsq
