#include "bsq/field_io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>

namespace bsq {
namespace {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes little-endian");

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error("field snapshot: truncated header");
  return v;
}

}  // namespace

void write_field(std::ostream& out, const Field& f, Representation rep) {
  const Field g = rep == Representation::Real ? to_real(f) : to_spectral(f);
  put<std::uint32_t>(out, 3);
  put<std::uint32_t>(out, std::uint32_t(g.grid().n));
  put<double>(out, g.grid().box_length);
  put<std::uint32_t>(out, std::uint32_t(g.components()));
  put<std::uint32_t>(out, std::uint32_t(rep));
  for (int c = 0; c < g.components(); ++c) {
    if (rep == Representation::Real) {
      const auto& v = g.real(c);
      out.write(reinterpret_cast<const char*>(v.data()), std::streamsize(v.size() * sizeof(double)));
    } else {
      const auto& v = g.spectral(c);
      out.write(reinterpret_cast<const char*>(v.data()), std::streamsize(v.size() * sizeof(Complex)));
    }
  }
  if (!out) throw Error("field snapshot: write failed");
}

Field read_field(std::istream& in) {
  if (get<std::uint32_t>(in) != 3) throw Error("field snapshot: expected 3 axes");
  const int n = int(get<std::uint32_t>(in));
  const double L = get<double>(in);
  const int rank = int(get<std::uint32_t>(in));
  const auto rep = Representation(get<std::uint32_t>(in));
  if (rank != 1 && rank != 3) throw Error("field snapshot: bad rank");
  const GridSpec grid(n, L);
  if (rep == Representation::Real) {
    std::vector<RealVec> comps(rank, RealVec(grid.num_points()));
    for (auto& v : comps) in.read(reinterpret_cast<char*>(v.data()), std::streamsize(v.size() * sizeof(double)));
    if (!in) throw Error("field snapshot: truncated data");
    return Field::from_real(grid, std::move(comps));
  }
  if (rep != Representation::Spectral) throw Error("field snapshot: bad representation tag");
  std::vector<ComplexVec> comps(rank, ComplexVec(grid.num_modes()));
  for (auto& v : comps) in.read(reinterpret_cast<char*>(v.data()), std::streamsize(v.size() * sizeof(Complex)));
  if (!in) throw Error("field snapshot: truncated data");
  return Field::from_spectral(grid, std::move(comps));
}

void save_field(const std::filesystem::path& path, const Field& f, Representation rep) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_field(out, f, rep);
}

Field load_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_field(in);
}

}  // namespace bsq
