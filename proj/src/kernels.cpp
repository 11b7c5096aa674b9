#include "bsq/kernels.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>

#include "bsq/dz.hpp"
#include "bsq/fft.hpp"
#include "bsq/norms.hpp"
#include "bsq/spectral_ops.hpp"

namespace bsq {
namespace {

constexpr double kPi = std::numbers::pi;

void check_build(KernelKind kind, const GridSpec& grid, double t) {
  grid.validate();
  if (!(t > 0.0)) throw InvalidArgument("build_kernel: t must be positive");
  if (std::sqrt(t) < 2.0 * grid.dx()) {
    throw UnderResolved("build_kernel: " + to_string(kind) + " at t=" + std::to_string(t) +
                        " is narrower than two cells on " + describe(grid));
  }
}

RealVec build_component(KernelKind kind, int c, const GridSpec& grid, double t) {
  ComplexVec spec(grid.num_modes());
  const bool odd = kind != KernelKind::G;
  const int n = grid.n;
  const int h = grid.half_n();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int kk = 0; kk < h; ++kk) {
        if (odd && on_nyquist(grid, i, j, kk)) continue;
        const Vec3 k{grid.wavenumber(i), grid.wavenumber(j), grid.wavenumber(kk)};
        spec[grid.mode_index(i, j, kk)] = kernel_symbol(kind, c, k, t);
      }
    }
  }
  return fft::inverse(grid, spec);
}

RealVec direct_magnitude(KernelKind kind, const GridSpec& grid, double t) {
  RealVec acc(grid.num_points(), 0.0);
  for (int c = 0; c < KernelTensor::component_count(kind); ++c) {
    const RealVec v = build_component(kind, c, grid, t);
    for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += v[q] * v[q];
  }
  for (auto& a : acc) a = std::sqrt(a);
  return acc;
}

double scaling_power(KernelKind kind) {
  return (kind == KernelKind::K || kind == KernelKind::G) ? 1.5 : 2.0;
}

// Radius of each sample from the origin (sample 0).
double origin_radius(const GridSpec& g, int i, int j, int k) {
  const double x = g.coordinate(i), y = g.coordinate(j), z = g.coordinate(k);
  return std::sqrt(x * x + y * y + z * z);
}

}  // namespace

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::K: return "K";
    case KernelKind::F: return "F";
    case KernelKind::Ftilde: return "Ftilde";
    case KernelKind::G: return "G";
  }
  return "?";
}

KernelKind parse_kernel_kind(const std::string& name) {
  if (name == "K") return KernelKind::K;
  if (name == "F") return KernelKind::F;
  if (name == "Ftilde") return KernelKind::Ftilde;
  if (name == "G") return KernelKind::G;
  throw InvalidArgument("unknown kernel kind '" + name + "' (expected K, F, Ftilde or G)");
}

int KernelTensor::component_count(KernelKind kind) {
  switch (kind) {
    case KernelKind::K: return 9;
    case KernelKind::F: return 27;
    case KernelKind::Ftilde: return 3;
    case KernelKind::G: return 1;
  }
  return 0;
}

RealVec KernelTensor::magnitude() const {
  RealVec acc(grid.num_points(), 0.0);
  for (const auto& v : components)
    for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += v[q] * v[q];
  for (auto& a : acc) a = std::sqrt(a);
  return acc;
}

Field KernelTensor::column(int l) const {
  if (kind != KernelKind::K) throw InvalidArgument("column: only defined for K");
  return Field::from_real(grid, {components[l], components[3 + l], components[6 + l]});
}

Field KernelTensor::component_field(int c) const {
  return Field::from_real(grid, {components.at(std::size_t(c))});
}

Mat3 KernelTensor::matrix_at(int i, int j, int k) const {
  if (kind != KernelKind::K) throw InvalidArgument("matrix_at: only defined for K");
  const std::size_t q = grid.point_index(i, j, k);
  Mat3 m{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) m[a][b] = components[3 * a + b][q];
  return m;
}

double KernelTensor::scaling_power() const { return bsq::scaling_power(kind); }

Complex kernel_symbol(KernelKind kind, int c, const Vec3& k, double t) {
  const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  const double e = std::exp(-k2 * t);
  const Complex I(0.0, 1.0);
  auto leray = [&](int j, int l) {
    if (k2 == 0.0) return 0.0;
    return e * ((j == l ? 1.0 : 0.0) - k[j] * k[l] / k2);
  };
  switch (kind) {
    case KernelKind::G: return e;
    case KernelKind::Ftilde: return I * k[c] * e;
    case KernelKind::K: return leray(c / 3, c % 3);
    case KernelKind::F: return I * k[(c / 3) % 3] * leray(c / 9, c % 3);
  }
  return 0.0;
}

KernelTensor build_kernel(KernelKind kind, const GridSpec& grid, double t) {
  check_build(kind, grid, t);
  KernelTensor out;
  out.grid = grid;
  out.t = t;
  out.kind = kind;
  for (int c = 0; c < KernelTensor::component_count(kind); ++c) {
    out.components.push_back(build_component(kind, c, grid, t));
  }
  return out;
}

Mat3 homogeneous_part(const Vec3& x) {
  const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  if (r2 == 0.0) throw InvalidArgument("homogeneous_part: x must be nonzero");
  const double r5 = r2 * r2 * std::sqrt(r2);
  Mat3 m{};
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l)
      m[j][l] = (3.0 * x[j] * x[l] - (j == l ? r2 : 0.0)) / (4.0 * kPi * r5);
  return m;
}

double kernel_lp_norm(const KernelTensor& kernel, double p) {
  const RealVec m = kernel.magnitude();
  return lp_norm_of_magnitudes(kernel.grid, m, p);
}

Field apply_kernel(const KernelTensor& kernel, const Field& f) {
  if (!(kernel.grid == f.grid())) throw InvalidArgument("apply_kernel: grids differ");
  const GridSpec& g = f.grid();
  const Field s = to_spectral(f);
  if (kernel.kind == KernelKind::G) {
    const ComplexVec kh = fft::forward(g, kernel.components[0]);
    std::vector<ComplexVec> out;
    for (int c = 0; c < s.components(); ++c) {
      ComplexVec z(g.num_modes());
      for (std::size_t q = 0; q < z.size(); ++q) z[q] = kh[q] * s.spectral(c)[q];
      out.push_back(std::move(z));
    }
    return Field::from_spectral(g, std::move(out));
  }
  if (kernel.kind != KernelKind::K || !f.is_vector()) {
    throw InvalidArgument("apply_kernel: expected K with a vector field or G");
  }
  std::vector<ComplexVec> out(3, ComplexVec(g.num_modes()));
  for (int c = 0; c < 9; ++c) {
    const ComplexVec kh = fft::forward(g, kernel.components[c]);
    const auto& src = s.spectral(c % 3);
    auto& dst = out[c / 3];
    for (std::size_t q = 0; q < dst.size(); ++q) dst[q] += kh[q] * src[q];
  }
  return Field::from_spectral(g, std::move(out));
}

DecayProfile decay_profile(const KernelTensor& kernel, double expected_exponent,
                           const DecayOptions& options) {
  const GridSpec& g = kernel.grid;
  const double st = std::sqrt(kernel.t);
  const double value_scale = std::pow(kernel.t, kernel.scaling_power());
  const double l_eff = g.box_length / st;
  const RealVec mag = kernel.magnitude();

  DecayProfile prof;
  prof.kind = kernel.kind;
  prof.expected_exponent = expected_exponent;
  for (double r = options.r_first; 2.0 * r <= 0.5 * l_eff; r *= 2.0) {
    prof.shells.push_back({r, 2.0 * r, 0.0});
  }
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const double rho = origin_radius(g, i, j, k) / st;
        for (auto& s : prof.shells) {
          if (rho >= s.r_low && rho < s.r_high) {
            s.shell_max = std::max(s.shell_max, value_scale * mag[g.point_index(i, j, k)]);
            break;
          }
        }
      }

  std::vector<double> xs, ys;
  const double hi = options.fit_high_fraction * l_eff;
  for (const auto& s : prof.shells) {
    if (s.r_low >= options.fit_low && s.r_low <= hi && s.shell_max > 0.0) {
      xs.push_back(std::log(s.r_low));
      ys.push_back(std::log(s.shell_max));
    }
  }
  if (xs.size() < 3) {
    prof.refusal = "only " + std::to_string(xs.size()) + " resolved shells with r_low in [" +
                   std::to_string(options.fit_low) + ", " + std::to_string(hi) + "]";
    return prof;
  }
  const double nx = double(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t a = 0; a < xs.size(); ++a) { mx += xs[a]; my += ys[a]; }
  mx /= nx;
  my /= nx;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t a = 0; a < xs.size(); ++a) {
    sxy += (xs[a] - mx) * (ys[a] - my);
    sxx += (xs[a] - mx) * (xs[a] - mx);
  }
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.window_low = std::exp(xs.front());
  fit.window_high = std::exp(xs.back());
  fit.shells = int(xs.size());
  for (std::size_t a = 0; a < xs.size(); ++a) {
    const double model = std::exp(fit.intercept + fit.slope * xs[a]);
    fit.residual = std::max(fit.residual, std::abs(std::exp(ys[a]) / model - 1.0));
  }
  prof.fit = fit;
  return prof;
}

void write_profile_csv(const std::filesystem::path& path, const DecayProfile& profile) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << std::setprecision(17) << "r_low,r_high,shell_max\n";
  for (const auto& s : profile.shells) out << s.r_low << ',' << s.r_high << ',' << s.shell_max << '\n';
}

nlohmann::json to_json(const DecayProfile& profile) {
  nlohmann::json j;
  j["kind"] = to_string(profile.kind);
  j["expected_exponent"] = profile.expected_exponent;
  if (profile.fit) {
    j["slope"] = profile.fit->slope;
    j["intercept"] = profile.fit->intercept;
    j["window"] = {profile.fit->window_low, profile.fit->window_high};
    j["residual"] = profile.fit->residual;
    j["shells"] = profile.fit->shells;
  } else {
    j["refused"] = profile.refusal;
  }
  return j;
}

double scaling_defect(KernelKind kind, const GridSpec& grid, double t) {
  const GridSpec scaled = grid.scaled(std::sqrt(t));
  check_build(kind, grid, 1.0);
  check_build(kind, scaled, t);
  const double factor = std::pow(t, scaling_power(kind));
  const double rmax = 0.25 * grid.box_length;
  double num = 0.0, den = 0.0;
  for (int c = 0; c < KernelTensor::component_count(kind); ++c) {
    const RealVec ref = build_component(kind, c, grid, 1.0);
    const RealVec at_t = build_component(kind, c, scaled, t);
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j)
        for (int k = 0; k < grid.n; ++k) {
          if (origin_radius(grid, i, j, k) > rmax) continue;
          const std::size_t q = grid.point_index(i, j, k);
          const double d = factor * at_t[q] - ref[q];
          num += d * d;
          den += ref[q] * ref[q];
        }
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

double interpolated_scaling_defect(KernelKind kind, const GridSpec& grid, double t) {
  check_build(kind, grid, 1.0);
  check_build(kind, grid, t);
  const double factor = std::pow(t, -scaling_power(kind));
  const double st = std::sqrt(t);
  const double rmax = std::min(0.25 * grid.box_length, 0.45 * st * grid.box_length);
  double num = 0.0, den = 0.0;
  for (int c = 0; c < KernelTensor::component_count(kind); ++c) {
    const RealVec at_t = build_component(kind, c, grid, t);
    const PointEvaluator ref(Field::from_real(grid, {build_component(kind, c, grid, 1.0)}));
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j)
        for (int k = 0; k < grid.n; ++k) {
          if (origin_radius(grid, i, j, k) > rmax) continue;
          const Vec3 x = coordinates(grid, i, j, k);
          const double v = at_t[grid.point_index(i, j, k)];
          const double d = v - factor * ref({x[0] / st, x[1] / st, x[2] / st});
          num += d * d;
          den += v * v;
        }
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

double norm_scaling_defect(KernelKind kind, const GridSpec& grid, double t, double r) {
  const GridSpec scaled = grid.scaled(std::sqrt(t));
  check_build(kind, grid, 1.0);
  check_build(kind, scaled, t);
  const RealVec m1 = direct_magnitude(kind, grid, 1.0);
  const RealVec mt = direct_magnitude(kind, scaled, t);
  const double n1 = lp_norm_of_magnitudes(grid, m1, r);
  const double nt = lp_norm_of_magnitudes(scaled, mt, r);
  const double predicted = std::pow(t, -scaling_power(kind) + 1.5 / r) * n1;
  return std::abs(nt / predicted - 1.0);
}

}  // namespace bsq
