#include "bsq/dz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "bsq/fft.hpp"
#include "bsq/norms.hpp"

namespace bsq {
namespace {

struct GaussRule {
  std::vector<double> x;  // nodes on [0, 1]
  std::vector<double> w;
};

template <int N>
GaussRule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  GaussRule r;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      r.x.push_back(0.5);
      r.w.push_back(0.5 * w[i]);
      continue;
    }
    r.x.push_back(0.5 * (1.0 - a[i]));
    r.w.push_back(0.5 * w[i]);
    r.x.push_back(0.5 * (1.0 + a[i]));
    r.w.push_back(0.5 * w[i]);
  }
  std::vector<std::size_t> order(r.x.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a1, auto a2) { return r.x[a1] < r.x[a2]; });
  GaussRule s;
  for (auto i : order) {
    s.x.push_back(r.x[i]);
    s.w.push_back(r.w[i]);
  }
  return s;
}

const GaussRule& gauss_rule(int points) {
  static const GaussRule r4 = make_rule<4>();
  static const GaussRule r8 = make_rule<8>();
  static const GaussRule r16 = make_rule<16>();
  switch (points) {
    case 4: return r4;
    case 8: return r8;
    case 16: return r16;
    default: throw InvalidArgument("Gauss-Legendre point count must be 4, 8 or 16");
  }
}

double norm3(const Vec3& x) { return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); }

Vec3 scaled(const Vec3& d, double s) { return {d[0] * s, d[1] * s, d[2] * s}; }

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

/// Phi(r) by log-radial panels aligned to ln(rho) - k h.
double flux_log(const PointEvaluator& f, const Vec3& d, double r, const LambdaQuadrature& q) {
  const double rho = f.cutoff();
  if (r >= rho) return 0.0;
  const GaussRule& g = gauss_rule(q.points);
  const double s_top = std::log(rho);
  const double s_r = std::log(r);
  const double h = q.panel_width;
  const int panels = static_cast<int>(std::ceil((s_top - s_r) / h - 1e-12));
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double hi = s_top - k * h;
    const double lo = std::max(s_r, hi - h);
    const double len = hi - lo;
    if (len <= 0.0) continue;
    double part = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      const double sigma = lo + len * g.x[i];
      const double s = std::exp(sigma);
      part += g.w[i] * s * s * s * f(scaled(d, s));
    }
    total += len * part;
  }
  return total;
}

std::vector<Vec3> probe_points(double rho) {
  std::vector<Vec3> pts;
  const double fr[] = {0.02, 0.1, 0.25, 0.5, 0.8};
  const Vec3 dirs[] = {{1, 0, 0}, {0, 0, 1}, {0.6, -0.8, 0}, {0.48, 0.6, 0.64},
                       {-0.36, 0.48, -0.8}, {-0.8, -0.36, 0.48}};
  for (double a : fr)
    for (const auto& d : dirs) pts.push_back(scaled(d, a * rho));
  return pts;
}

struct Sphere {
  std::vector<Vec3> dirs;
  std::vector<double> weights;
};

Sphere make_sphere(const SphereQuadrature& sq) {
  if (sq.n_polar < 2 || sq.n_azimuth < 1) throw InvalidArgument("sphere quadrature too small");
  // Gauss-Legendre in cos(theta) by Newton iteration on P_n.
  const int n = sq.n_polar;
  std::vector<double> mu(n), wmu(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    mu[i] = x;
    wmu[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  Sphere s;
  const double dphi = 2.0 * std::numbers::pi / sq.n_azimuth;
  for (int i = 0; i < n; ++i) {
    const double st = std::sqrt(std::max(0.0, 1.0 - mu[i] * mu[i]));
    for (int j = 0; j < sq.n_azimuth; ++j) {
      const double ph = (j + 0.5) * dphi;
      s.dirs.push_back({st * std::cos(ph), st * std::sin(ph), mu[i]});
      s.weights.push_back(wmu[i] * dphi);
    }
  }
  return s;
}

/// Composite Gauss nodes on [a, b] with panels of width <= h.
void linear_nodes(double a, double b, double h, int points, std::vector<double>& x,
                  std::vector<double>& w) {
  const GaussRule& g = gauss_rule(points);
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / h - 1e-12)));
  const double len = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      x.push_back(a + len * (k + g.x[i]));
      w.push_back(len * g.w[i]);
    }
  }
}

}  // namespace

PointEvaluator::PointEvaluator(const Field& f, int upsample) : grid_(f.grid()) {
  if (f.empty() || f.is_vector()) throw InvalidArgument("PointEvaluator needs a scalar field");
  if (upsample < 1) throw InvalidArgument("upsample factor must be positive");
  const int n = grid_.n;
  n2_ = upsample * n;
  const GridSpec fine_grid(n2_, grid_.box_length);
  h2_ = fine_grid.dx();
  cutoff_ = 0.5 * grid_.box_length;
  const Field fs = to_spectral(f);
  const ComplexVec& c = fs.spectral(0);
  ComplexVec fine(fine_grid.num_modes(), Complex(0.0, 0.0));
  for (int i = 0; i < n; ++i) {
    if (grid_.is_nyquist(i)) continue;
    const int fi = (grid_.mode(i) + n2_) % n2_;
    for (int j = 0; j < n; ++j) {
      if (grid_.is_nyquist(j)) continue;
      const int fj = (grid_.mode(j) + n2_) % n2_;
      for (int kk = 0; kk < grid_.half_n() - 1; ++kk) {
        fine[fine_grid.mode_index(fi, fj, kk)] = c[grid_.mode_index(i, j, kk)];
      }
    }
  }
  fine_ = fft::inverse(fine_grid, fine);
}

double PointEvaluator::operator()(const Vec3& x) const {
  if (norm3(x) >= cutoff_) return 0.0;
  constexpr int kW = 8;
  int idx[3][kW];
  double wt[3][kW];
  for (int a = 0; a < 3; ++a) {
    const double u = x[a] / h2_;
    const double fl = std::floor(u);
    const double tau = u - fl;
    const int base = static_cast<int>(fl);
    for (int j = 0; j < kW; ++j) {
      const int off = j - 3;
      idx[a][j] = ((base + off) % n2_ + n2_) % n2_;
      double num = 1.0, den = 1.0;
      for (int m = 0; m < kW; ++m) {
        if (m == j) continue;
        num *= tau - (m - 3);
        den *= off - (m - 3);
      }
      wt[a][j] = num / den;
    }
  }
  double total = 0.0;
  for (int i = 0; i < kW; ++i) {
    double si = 0.0;
    for (int j = 0; j < kW; ++j) {
      const double* row =
          fine_.data() + (static_cast<std::size_t>(idx[0][i]) * n2_ + idx[1][j]) * n2_;
      double sj = 0.0;
      for (int k = 0; k < kW; ++k) sj += wt[2][k] * row[idx[2][k]];
      si += wt[1][j] * sj;
    }
    total += wt[0][i] * si;
  }
  return total;
}

Vec3 evaluate_V(const PointEvaluator& f, const Vec3& x, const LambdaQuadrature& quad) {
  const double r = norm3(x);
  if (r == 0.0 || r >= f.cutoff()) return {0.0, 0.0, 0.0};
  const Vec3 d = scaled(x, 1.0 / r);
  const double phi = flux_log(f, d, r, quad);
  return scaled(d, -phi / (r * r));
}

std::vector<double> radial_flux(const PointEvaluator& f, const Vec3& direction,
                                const std::vector<double>& radii) {
  const GaussRule& g = gauss_rule(4);
  constexpr double kMaxPiece = 0.125;
  const double rho = f.cutoff();
  std::vector<double> out(radii.size(), 0.0);
  double acc = 0.0;
  double upper = rho;
  auto segment = [&](double a, double b) {
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / kMaxPiece)));
    const double len = (b - a) / pieces;
    double sum = 0.0;
    for (int p = 0; p < pieces; ++p) {
      for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double s = a + len * (p + g.x[i]);
        sum += len * g.w[i] * s * s * f(scaled(direction, s));
      }
    }
    return sum;
  };
  for (std::size_t i = radii.size(); i-- > 0;) {
    const double r = radii[i];
    if (i + 1 < radii.size() && r > radii[i + 1]) throw InvalidArgument("radii must ascend");
    if (r >= rho) {
      out[i] = 0.0;
      continue;
    }
    if (upper > r) acc += segment(r, upper);
    upper = r;
    out[i] = acc;
  }
  return out;
}

Decomposition compute_V(const Field& f, const LambdaQuadrature& quad, bool on_grid) {
  if (quad.panel_width <= 0.0) throw InvalidArgument("panel_width must be positive");
  gauss_rule(quad.points);
  Decomposition dec;
  dec.quad = quad;
  dec.f = std::make_shared<PointEvaluator>(f);
  dec.mass = integral(f);

  LambdaQuadrature fine = quad;
  fine.panel_width *= 0.5;
  double vmax = 0.0, change = 0.0;
  for (const auto& x : probe_points(dec.f->cutoff())) {
    const Vec3 a = evaluate_V(*dec.f, x, quad);
    const Vec3 b = evaluate_V(*dec.f, x, fine);
    vmax = std::max(vmax, norm3(a));
    change = std::max(change, norm3({a[0] - b[0], a[1] - b[1], a[2] - b[2]}));
  }
  dec.refinement_change = vmax > 0.0 ? change / vmax : change;
  if (dec.refinement_change > quad.tol) {
    throw Refused("lambda quadrature unresolved: node doubling changes V by " +
                  std::to_string(dec.refinement_change) + " (tol " + std::to_string(quad.tol) +
                  ")");
  }

  if (on_grid) {
    const GridSpec& grid = f.grid();
    const int n = grid.n;
    std::vector<RealVec> comps(3, RealVec(grid.num_points(), 0.0));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          const Vec3 v = evaluate_V(*dec.f, coordinates(grid, i, j, k), quad);
          const std::size_t p = grid.point_index(i, j, k);
          for (int c = 0; c < 3; ++c) comps[c][p] = v[c];
        }
      }
    }
    dec.V = Field::from_real(grid, std::move(comps));
  }
  return dec;
}

TestFunction gaussian_test_function(const Vec3& center, double width) {
  if (width <= 0.0) throw InvalidArgument("test function width must be positive");
  TestFunction t;
  t.name = "gauss(c=" + std::to_string(center[0]) + "," + std::to_string(center[1]) + "," +
           std::to_string(center[2]) + ";w=" + std::to_string(width) + ")";
  t.center = center;
  t.support_radius = 7.0 * width;
  const double inv = 1.0 / (2.0 * width * width);
  t.value = [center, inv](const Vec3& x) {
    const Vec3 y{x[0] - center[0], x[1] - center[1], x[2] - center[2]};
    return std::exp(-dot(y, y) * inv);
  };
  t.gradient = [center, inv](const Vec3& x) {
    const Vec3 y{x[0] - center[0], x[1] - center[1], x[2] - center[2]};
    const double e = -2.0 * inv * std::exp(-dot(y, y) * inv);
    return Vec3{e * y[0], e * y[1], e * y[2]};
  };
  return t;
}

TestFunction plateau_test_function(const Vec3& center, double inner, double outer) {
  if (!(inner >= 0.0 && outer > inner)) throw InvalidArgument("plateau needs 0 <= inner < outer");
  TestFunction t;
  t.name = "plateau(c=" + std::to_string(center[0]) + "," + std::to_string(center[1]) + "," +
           std::to_string(center[2]) + ";" + std::to_string(inner) + "," + std::to_string(outer) +
           ")";
  t.center = center;
  t.support_radius = outer;
  // psi(s) = 1 - H(s) with H the smooth step exp(-1/s) / (exp(-1/s) + exp(-1/(1-s))).
  auto step = [](double s, double* deriv) {
    if (s <= 0.0) {
      *deriv = 0.0;
      return 0.0;
    }
    if (s >= 1.0) {
      *deriv = 0.0;
      return 1.0;
    }
    const double a = std::exp(-1.0 / s);
    const double b = std::exp(-1.0 / (1.0 - s));
    const double da = a / (s * s);
    const double db = -b / ((1.0 - s) * (1.0 - s));
    const double den = a + b;
    *deriv = (da * den - a * (da + db)) / (den * den);
    return a / den;
  };
  const double width = outer - inner;
  t.value = [=](const Vec3& x) {
    const Vec3 y{x[0] - center[0], x[1] - center[1], x[2] - center[2]};
    double d;
    return 1.0 - step((norm3(y) - inner) / width, &d);
  };
  t.gradient = [=](const Vec3& x) {
    const Vec3 y{x[0] - center[0], x[1] - center[1], x[2] - center[2]};
    const double r = norm3(y);
    double d;
    step((r - inner) / width, &d);
    if (r == 0.0 || d == 0.0) return Vec3{0.0, 0.0, 0.0};
    const double g = -d / (width * r);
    return Vec3{g * y[0], g * y[1], g * y[2]};
  };
  return t;
}

std::vector<TestFunction> default_test_set(double box_length) {
  const double s = box_length / 24.0;
  std::vector<TestFunction> set;
  set.push_back(gaussian_test_function({0, 0, 0}, 1.0 * s));
  set.push_back(gaussian_test_function({0, 0, 0}, 1.6 * s));
  set.push_back(gaussian_test_function({1.0 * s, 0, 0}, 1.0 * s));
  set.push_back(gaussian_test_function({0, 0, 1.5 * s}, 1.2 * s));
  set.push_back(gaussian_test_function({0.8 * s, -0.6 * s, 0.5 * s}, 0.9 * s));
  set.push_back(gaussian_test_function({-1.0 * s, 1.0 * s, -1.0 * s}, 1.1 * s));
  set.push_back(gaussian_test_function({0, 2.0 * s, 0}, 1.0 * s));
  set.push_back(gaussian_test_function({2.0 * s, 0, -2.0 * s}, 1.0 * s));
  set.push_back(plateau_test_function({0, 0, 0}, 1.0 * s, 5.0 * s));
  set.push_back(plateau_test_function({0.5 * s, 0.5 * s, 0}, 2.0 * s, 7.0 * s));
  set.push_back(plateau_test_function({0, 0, 0}, 9.0 * s, 11.0 * s));
  set.push_back(gaussian_test_function({0, 0, 0}, 4.0 * s));  // reaches the boundary
  return set;
}

namespace {

struct RayFlux {
  Sphere sphere;
  std::vector<double> r, wr;
  std::vector<double> phi;  // rays x nodes
};

RayFlux ray_flux(const PointEvaluator& f, const SphereQuadrature& sq) {
  RayFlux rf;
  rf.sphere = make_sphere(sq);
  linear_nodes(0.0, f.cutoff(), sq.radial_panel, sq.radial_points, rf.r, rf.wr);
  const std::size_t nr = rf.r.size();
  const std::size_t nd = rf.sphere.dirs.size();
  rf.phi.assign(nd * nr, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t d = 0; d < nd; ++d) {
    const auto v = radial_flux(f, rf.sphere.dirs[d], rf.r);
    std::copy(v.begin(), v.end(), rf.phi.begin() + d * nr);
  }
  return rf;
}

double v_dot_grad(const RayFlux& rf, const TestFunction& t) {
  const std::size_t nr = rf.r.size();
  const std::size_t nd = rf.sphere.dirs.size();
  double total = 0.0;
#pragma omp parallel for reduction(+ : total) schedule(static)
  for (std::size_t d = 0; d < nd; ++d) {
    const Vec3& dir = rf.sphere.dirs[d];
    double ray = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
      const Vec3 g = t.gradient(scaled(dir, rf.r[i]));
      ray += rf.wr[i] * rf.phi[d * nr + i] * dot(dir, g);
    }
    total += rf.sphere.weights[d] * ray;
  }
  return -total;
}

double grid_pairing(const Field& f, const TestFunction& t) {
  const Field fr = to_real(f);
  const RealVec& v = fr.real(0);
  const GridSpec& grid = f.grid();
  const int n = grid.n;
  double total = 0.0;
#pragma omp parallel for reduction(+ : total) schedule(static)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        total += v[grid.point_index(i, j, k)] * t.value(coordinates(grid, i, j, k));
      }
    }
  }
  return total * grid.cell_volume();
}

bool fits(const TestFunction& t, double rho) { return norm3(t.center) + t.support_radius < rho; }

}  // namespace

WeakIdentityReport weak_identity_residual(const Decomposition& dec, const Field& f,
                                          const std::vector<TestFunction>& tests,
                                          const SphereQuadrature& sphere) {
  if (!dec.f) throw InvalidArgument("decomposition carries no evaluator");
  const RayFlux rf = ray_flux(*dec.f, sphere);
  const double rho = dec.f->cutoff();
  WeakIdentityReport rep;
  for (const auto& t : tests) {
    WeakIdentityTerm term;
    term.name = t.name;
    if (!fits(t, rho)) {
      term.skipped = true;
      term.note = "support reaches |x| = L/2";
      rep.terms.push_back(term);
      continue;
    }
    term.f_phi = grid_pairing(f, t);
    term.mass_phi0 = dec.mass * t.value({0.0, 0.0, 0.0});
    term.v_grad_phi = v_dot_grad(rf, t);
    term.residual =
        std::abs(term.f_phi - term.mass_phi0 + term.v_grad_phi) / (1.0 + std::abs(term.f_phi));
    rep.max_residual = std::max(rep.max_residual, term.residual);
    rep.terms.push_back(term);
  }
  return rep;
}

double weak_mass(const Decomposition& dec, const Field& f, const std::vector<TestFunction>& tests,
                 const SphereQuadrature& sphere) {
  if (!dec.f) throw InvalidArgument("decomposition carries no evaluator");
  const RayFlux rf = ray_flux(*dec.f, sphere);
  double num = 0.0, den = 0.0;
  for (const auto& t : tests) {
    if (!fits(t, dec.f->cutoff())) throw Refused("test function " + t.name + " reaches L/2");
    num += grid_pairing(f, t) + v_dot_grad(rf, t);
    den += t.value({0.0, 0.0, 0.0});
  }
  if (den == 0.0) throw Refused("test functions vanish at the origin");
  return num / den;
}

double v_norm(const PointEvaluator& f, double q, const SphereQuadrature& sq) {
  if (!(q >= 1.0 && q < 1.5)) throw InvalidArgument("v_norm needs 1 <= q < 3/2");
  const Sphere sphere = make_sphere(sq);
  const double rho = f.cutoff();
  if (sq.r_min <= 0.0 || sq.r_min >= rho) throw InvalidArgument("r_min out of range");
  std::vector<double> sig, ws;
  linear_nodes(std::log(sq.r_min), std::log(rho), 0.125, 8, sig, ws);
  std::vector<double> all = {sq.r_min};
  for (std::size_t i = 0; i < sig.size(); ++i) all.push_back(std::exp(sig[i]));
  const double e = 3.0 - 2.0 * q;
  double total = 0.0;
#pragma omp parallel for reduction(+ : total) schedule(dynamic)
  for (std::size_t d = 0; d < sphere.dirs.size(); ++d) {
    const auto phi = radial_flux(f, sphere.dirs[d], all);
    double ray = std::pow(std::abs(phi[0]), q) * std::pow(sq.r_min, e) / e;
    for (std::size_t i = 0; i < sig.size(); ++i) {
      ray += ws[i] * std::pow(all[i + 1], e) * std::pow(std::abs(phi[i + 1]), q);
    }
    total += sphere.weights[d] * ray;
  }
  return std::pow(total, 1.0 / q);
}

double moment_norm(const PointEvaluator& f, double q, const SphereQuadrature& sq) {
  if (!(q >= 1.0)) throw InvalidArgument("moment_norm needs q >= 1");
  const Sphere sphere = make_sphere(sq);
  std::vector<double> r, wr;
  linear_nodes(0.0, f.cutoff(), sq.radial_panel, sq.radial_points, r, wr);
  double total = 0.0;
#pragma omp parallel for reduction(+ : total) schedule(dynamic)
  for (std::size_t d = 0; d < sphere.dirs.size(); ++d) {
    double ray = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      ray += wr[i] * std::pow(r[i], 2.0 + q) * std::pow(std::abs(f(scaled(sphere.dirs[d], r[i]))), q);
    }
    total += sphere.weights[d] * ray;
  }
  return std::pow(total, 1.0 / q);
}

double vq_constant(double q) {
  if (!(q >= 1.0 && q < 1.5)) throw InvalidArgument("vq_constant needs 1 <= q < 3/2");
  return 1.0 / (3.0 / q - 2.0);
}

std::vector<VqRow> vq_bound_check(const Field& f, const std::vector<double>& qs,
                                  const SphereQuadrature& sphere) {
  for (double q : qs) {
    if (q >= 1.5) throw Refused("||V||_q is unbounded for q >= 3/2");
    if (q < 1.0) throw InvalidArgument("q must be at least 1");
  }
  const PointEvaluator ev(f);
  std::vector<VqRow> rows;
  for (double q : qs) {
    VqRow row;
    row.q = q;
    row.v_norm = v_norm(ev, q, sphere);
    row.moment_norm = moment_norm(ev, q, sphere);
    row.ratio = row.v_norm / row.moment_norm;
    row.constant = vq_constant(q);
    row.pass = row.ratio <= 1.02 * row.constant;
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json to_json(const WeakIdentityReport& r) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : r.terms) {
    nlohmann::json j{{"name", t.name}, {"skipped", t.skipped}};
    if (t.skipped) {
      j["note"] = t.note;
    } else {
      j["f_phi"] = t.f_phi;
      j["m_phi0"] = t.mass_phi0;
      j["v_grad_phi"] = t.v_grad_phi;
      j["residual"] = t.residual;
    }
    terms.push_back(j);
  }
  return {{"terms", terms}, {"max_residual", r.max_residual}};
}

nlohmann::json to_json(const std::vector<VqRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"q", r.q},
                   {"v_norm", r.v_norm},
                   {"moment_norm", r.moment_norm},
                   {"ratio", r.ratio},
                   {"constant", r.constant},
                   {"pass", r.pass}});
  }
  return out;
}

}  // namespace bsq
