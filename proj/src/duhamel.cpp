#include "bsq/duhamel.hpp"

#include <algorithm>

#include "bsq/fft.hpp"
#include "bsq/spectral_ops.hpp"

namespace bsq {
namespace {

// int_0^1 x^m e^{-z x} dx by its Taylor series (small z).
double moment_series(int m, double z) {
  double term = 1.0, sum = 0.0;
  for (int i = 0; i < 30; ++i) {
    sum += term / (i + m + 1);
    term *= -z / (i + 1);
  }
  return sum;
}

// int_0^1 x e^{-zx} dx, int_0^1 (1 - x) e^{-zx} dx, int_0^1 x^2 e^{-zx} dx.
void exponential_moments(double z, double& m1, double& m1c, double& m2) {
  if (z < 0.5) {
    const double m0 = moment_series(0, z);
    m1 = moment_series(1, z);
    m1c = m0 - m1;
    m2 = moment_series(2, z);
    return;
  }
  const double e = std::exp(-z);
  m1 = (1.0 - (1.0 + z) * e) / (z * z);
  m1c = (z - 1.0 + e) / (z * z);
  m2 = (2.0 - e * (z * z + 2.0 * z + 2.0)) / (z * z * z);
}

std::vector<ComplexVec> spectral_components(const Field& f) {
  const Field s = to_spectral(f);
  std::vector<ComplexVec> out;
  for (int c = 0; c < s.components(); ++c) out.push_back(s.spectral(c));
  return out;
}

RealVec dealiased_real(const ComplexVec& spec, const GridSpec& g) {
  ComplexVec z = spec;
  for_each_mode(g, [&](std::size_t q, double, double, double, int i, int j, int kk) {
    if (!(g.dealias_keeps(i) && g.dealias_keeps(j) && g.dealias_keeps(kk))) z[q] = 0.0;
  });
  return fft::inverse(g, z);
}

// FFT of a pointwise product followed by the dealias mask.
ComplexVec masked_product(const GridSpec& g, const RealVec& a, const RealVec& b) {
  RealVec p(a.size());
#pragma omp parallel for schedule(static)
  for (std::size_t q = 0; q < p.size(); ++q) p[q] = a[q] * b[q];
  ComplexVec s = fft::forward(g, p);
  for_each_mode(g, [&](std::size_t q, double, double, double, int i, int j, int kk) {
    if (!(g.dealias_keeps(i) && g.dealias_keeps(j) && g.dealias_keeps(kk))) s[q] = 0.0;
  });
  return s;
}

void check_pair(const Trajectory& a, const Trajectory& b, double t, const QuadratureSpec& quad,
                std::size_t& last) {
  a.validate();
  b.validate();
  if (quad.stride < 1) throw InvalidArgument("quadrature: stride must be >= 1");
  if (!(t >= 0.0)) throw InvalidArgument("duhamel: t must be >= 0");
  if (t > a.states.back().t * (1 + 1e-12) || t > b.states.back().t * (1 + 1e-12)) {
    throw InvalidArgument("duhamel: trajectory does not cover [0, t]");
  }
  last = a.index_of(t);
  if (last >= b.size() || std::abs(b.states[last].t - a.states[last].t) > 1e-12 * std::max(1.0, t)) {
    throw InvalidArgument("duhamel: trajectories have different nodes");
  }
  for (std::size_t i = 0; i <= last; ++i) {
    if (std::abs(b.states[i].t - a.states[i].t) > 1e-12 * std::max(1.0, t)) {
      throw InvalidArgument("duhamel: trajectories have different nodes");
    }
  }
  if (last % std::size_t(quad.stride) != 0) {
    throw InvalidArgument("duhamel: t is not on the strided quadrature nodes");
  }
}

}  // namespace

std::string to_string(QuadratureRule rule) {
  return rule == QuadratureRule::Trapezoid ? "trapezoid" : "exponential";
}

QuadratureRule parse_quadrature_rule(const std::string& name) {
  if (name == "trapezoid") return QuadratureRule::Trapezoid;
  if (name == "exponential") return QuadratureRule::Exponential;
  throw InvalidArgument("unknown quadrature rule '" + name + "' (expected trapezoid or exponential)");
}

DuhamelAccumulator::DuhamelAccumulator(const GridSpec& grid, int components, bool weighted,
                                       QuadratureRule rule)
    : grid_(grid), components_(components), weighted_(weighted), rule_(rule) {
  k2_.resize(grid.num_modes());
  for_each_mode(grid, [&](std::size_t q, double kx, double ky, double kz, int, int, int) {
    k2_[q] = kx * kx + ky * ky + kz * kz;
  });
  I_.assign(components, ComplexVec(grid.num_modes()));
  if (weighted) J_.assign(components, ComplexVec(grid.num_modes()));
}

const DuhamelAccumulator::Weights& DuhamelAccumulator::weights(double h) {
  if (std::abs(h - cache_.h) <= 1e-13 * h) return cache_;
  const std::size_t m = k2_.size();
  cache_.h = h;
  cache_.decay.resize(m);
  cache_.a_prev.resize(m);
  cache_.a_cur.resize(m);
  cache_.c_prev.resize(m);
  cache_.c_cur.resize(m);
  for (std::size_t q = 0; q < m; ++q) {
    const double z = k2_[q] * h;
    const double e = std::exp(-z);
    cache_.decay[q] = e;
    if (rule_ == QuadratureRule::Trapezoid) {
      cache_.a_prev[q] = 0.5 * h * e;
      cache_.a_cur[q] = 0.5 * h;
      cache_.c_prev[q] = 0.5 * h * h * e;
      cache_.c_cur[q] = 0.0;
    } else {
      double m1, m1c, m2;
      exponential_moments(z, m1, m1c, m2);
      cache_.a_prev[q] = h * m1;
      cache_.a_cur[q] = h * m1c;
      cache_.c_prev[q] = h * h * m2;
      cache_.c_cur[q] = h * h * (m1 - m2);
    }
  }
  return cache_;
}

void DuhamelAccumulator::push(double t, const std::vector<ComplexVec>& g) {
  if (int(g.size()) != components_) throw InvalidArgument("accumulator: component count mismatch");
  if (!started_) {
    started_ = true;
    time_ = t;
    g_prev_ = g;
    return;
  }
  if (!(t > time_)) throw InvalidArgument("accumulator: nodes must strictly increase");
  const Weights& w = weights(t - time_);
  const double h = t - time_;
  const std::size_t m = k2_.size();
  for (int c = 0; c < components_; ++c) {
    auto& I = I_[c];
    const auto& gp = g_prev_[c];
    const auto& gc = g[c];
#pragma omp parallel for schedule(static)
    for (std::size_t q = 0; q < m; ++q) {
      if (weighted_) {
        J_[c][q] = w.decay[q] * (J_[c][q] + h * I[q]) + w.c_prev[q] * gp[q] + w.c_cur[q] * gc[q];
      }
      I[q] = w.decay[q] * I[q] + w.a_prev[q] * gp[q] + w.a_cur[q] * gc[q];
    }
  }
  g_prev_ = g;
  time_ = t;
}

std::vector<ComplexVec> project(const GridSpec& grid, std::vector<ComplexVec> v) {
  return spectral_components(leray_project(Field::from_spectral(grid, std::move(v))));
}

std::vector<ComplexVec> project_vertical(const GridSpec& grid, const ComplexVec& s) {
  ComplexVec zero(grid.num_modes());
  return project(grid, {zero, zero, s});
}

NonlinearTerms transport_terms(const Field& u, const Field* v, const Field* theta) {
  const GridSpec& g = u.grid();
  const Field us = to_spectral(u);
  std::vector<RealVec> ur;
  for (int c = 0; c < 3; ++c) ur.push_back(dealiased_real(us.spectral(c), g));

  NonlinearTerms out;
  double m = 0.0;
  for (std::size_t q = 0; q < g.num_points(); ++q) {
    m = std::max(m, ur[0][q] * ur[0][q] + ur[1][q] * ur[1][q] + ur[2][q] * ur[2][q]);
  }
  out.max_speed = std::sqrt(m);
  const Complex I(0.0, 1.0);
  // dst = sum_j i k_j p_j
  auto apply_div = [&](const ComplexVec& p0, const ComplexVec& p1, const ComplexVec& p2,
                       ComplexVec& dst) {
    dst.assign(g.num_modes(), Complex{});
    for_each_mode(g, [&](std::size_t q, double kx, double ky, double kz, int i, int j, int kk) {
      if (on_nyquist(g, i, j, kk)) return;
      dst[q] = I * (kx * p0[q] + ky * p1[q] + kz * p2[q]);
    });
  };

  if (v) {
    const Field vs = to_spectral(*v);
    const bool same = us.has_spectral() && vs.has_spectral() && &us.spectral(0) == &vs.spectral(0);
    std::vector<RealVec> vr;
    if (!same) {
      for (int c = 0; c < 3; ++c) vr.push_back(dealiased_real(vs.spectral(c), g));
    }
    const std::vector<RealVec>& vv = same ? ur : vr;
    // prod[j][l] = (u_j v_l)^
    std::vector<std::vector<ComplexVec>> prod(3, std::vector<ComplexVec>(3));
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) {
        if (same && l < j) {
          prod[j][l] = prod[l][j];
        } else {
          prod[j][l] = masked_product(g, ur[j], vv[l]);
        }
      }
    out.div_uv.resize(3);
    for (int l = 0; l < 3; ++l) apply_div(prod[0][l], prod[1][l], prod[2][l], out.div_uv[l]);
  }
  if (theta) {
    const Field ts = to_spectral(*theta);
    const RealVec tr = dealiased_real(ts.spectral(), g);
    std::vector<ComplexVec> prod;
    for (int j = 0; j < 3; ++j) prod.push_back(masked_product(g, ur[j], tr));
    apply_div(prod[0], prod[1], prod[2], out.div_ut);
  }
  return out;
}

namespace {

enum class Which { B1, B2, B3, Buoyancy };

Field duhamel_term(Which which, const Trajectory& a, const Trajectory& b, double t,
                   const QuadratureSpec& quad) {
  std::size_t last = 0;
  check_pair(a, b, t, quad, last);
  const GridSpec& g = a.grid();
  const bool vector_input = which == Which::B1;
  const bool weighted = which == Which::B2;
  DuhamelAccumulator acc(g, vector_input ? 3 : 1, weighted, quad.rule);
  for (std::size_t i = 0; i <= last; i += std::size_t(quad.stride)) {
    std::vector<ComplexVec> integrand;
    switch (which) {
      case Which::B1:
        integrand = transport_terms(a.states[i].u, &b.states[i].u, nullptr).div_uv;
        break;
      case Which::B2:
      case Which::B3:
        integrand = {transport_terms(a.states[i].u, nullptr, &b.states[i].theta).div_ut};
        break;
      case Which::Buoyancy:
        integrand = {to_spectral(b.states[i].theta).spectral()};
        break;
    }
    acc.push(a.states[i].t, integrand);
  }
  switch (which) {
    case Which::B1: return Field::from_spectral(g, project(g, acc.I()));
    case Which::B2: return Field::from_spectral(g, project_vertical(g, acc.J()[0]));
    case Which::B3: return Field::from_spectral(g, acc.I());
    case Which::Buoyancy: return Field::from_spectral(g, project_vertical(g, acc.I()[0]));
  }
  return {};
}

}  // namespace

Field bilinear_B1(const Trajectory& traj_u, const Trajectory& traj_v, double t,
                  const QuadratureSpec& quad) {
  return duhamel_term(Which::B1, traj_u, traj_v, t, quad);
}

Field bilinear_B2(const Trajectory& traj_u, const Trajectory& traj_theta, double t,
                  const QuadratureSpec& quad) {
  return duhamel_term(Which::B2, traj_u, traj_theta, t, quad);
}

Field bilinear_B3(const Trajectory& traj_u, const Trajectory& traj_theta, double t,
                  const QuadratureSpec& quad) {
  return duhamel_term(Which::B3, traj_u, traj_theta, t, quad);
}

Field buoyancy_duhamel(const Trajectory& traj_theta, double t, const QuadratureSpec& quad) {
  return duhamel_term(Which::Buoyancy, traj_theta, traj_theta, t, quad);
}

}  // namespace bsq
