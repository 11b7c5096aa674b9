#include "bsq/solvers.hpp"

#include <algorithm>

#include "bsq/norms.hpp"
#include "bsq/spectral_ops.hpp"

namespace bsq {

std::vector<double> ConvergenceHistory::ratios() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < increments.size(); ++i) {
    out.push_back(increments[i - 1] > 0.0 ? increments[i] / increments[i - 1] : 0.0);
  }
  return out;
}

namespace {

double data_norm(const InitialData& data) {
  return lp_norm(data.u0(), 3.0) + lp_norm(data.theta0(), 1.0);
}

std::vector<double> uniform_nodes(double T, int nodes) {
  if (!(T > 0.0)) throw InvalidArgument("solver: T must be positive");
  if (nodes < 2) throw InvalidArgument("solver: at least 2 nodes are required");
  std::vector<double> t(nodes);
  for (int i = 0; i < nodes; ++i) t[i] = T * i / (nodes - 1);
  return t;
}

Field subtract_spectral(const Field& a, const std::vector<ComplexVec>& b) {
  std::vector<ComplexVec> out;
  for (int c = 0; c < a.components(); ++c) {
    ComplexVec z = a.spectral(c);
    for (std::size_t q = 0; q < z.size(); ++q) z[q] -= b[c][q];
    out.push_back(std::move(z));
  }
  return Field::from_spectral(a.grid(), std::move(out));
}

}  // namespace

PicardResult picard_solve(const InitialData& data, const PicardOptions& options) {
  const std::vector<double> t = uniform_nodes(options.T, options.nodes);
  if (options.max_sweeps < 1) throw InvalidArgument("picard: max_sweeps must be >= 1");
  const GridSpec& g = data.grid();

  PicardResult res;
  Trajectory& traj = res.trajectory;
  traj.meta.scheme = "picard";
  traj.meta.linear_only = options.linear_only;
  ENorm a_norm;
  for (double ti : t) {
    FlowState s = linear_term(data, ti);
    a_norm.include(ti, s.u, s.theta);
    traj.states.push_back(std::move(s));
  }
  res.history.a_norm = a_norm.total();
  if (options.linear_only) {
    res.history.increments.push_back(0.0);
    res.history.converged = true;
    return res;
  }

  int growing = 0;
  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    DuhamelAccumulator acc_uu(g, 3, false, options.quad.rule);
    DuhamelAccumulator acc_ut(g, 1, true, options.quad.rule);
    ENorm inc;
    for (std::size_t i = 0; i < t.size(); ++i) {
      FlowState& old = traj.states[i];
      const NonlinearTerms nl = transport_terms(old.u, &old.u, &old.theta);
      acc_uu.push(t[i], nl.div_uv);
      acc_ut.push(t[i], {nl.div_ut});
      std::vector<ComplexVec> b = project(g, acc_uu.I());
      const std::vector<ComplexVec> b2 = project_vertical(g, acc_ut.J()[0]);
      for (int c = 0; c < 3; ++c)
        for (std::size_t q = 0; q < b[c].size(); ++q) b[c][q] += b2[c][q];
      const FlowState a = linear_term(data, t[i]);
      FlowState next;
      next.t = t[i];
      next.u = subtract_spectral(a.u, b);
      next.theta = subtract_spectral(a.theta, acc_ut.I());
      inc.include(t[i], next.u - old.u, next.theta - old.theta);
      old = std::move(next);
    }
    const double increment = inc.total();
    auto& hist = res.history;
    hist.increments.push_back(increment);
    if (increment <= options.tol * hist.a_norm || increment == 0.0) {
      hist.converged = true;
      break;
    }
    const std::size_t n = hist.increments.size();
    growing = (n >= 2 && hist.increments[n - 1] > hist.increments[n - 2]) ? growing + 1 : 0;
    if (growing >= 3) {
      const double dn = data_norm(data);
      throw PicardDiverged("picard: increments grew for 3 consecutive sweeps; data norm "
                           "||u0||_3 + ||theta0||_1 = " + std::to_string(dn),
                           hist, dn);
    }
  }
  return res;
}

double first_increment_ratio(const InitialData& data, double T, int nodes,
                             const QuadratureSpec& quad) {
  PicardOptions opt;
  opt.T = T;
  opt.nodes = nodes;
  opt.max_sweeps = 1;
  opt.quad = quad;
  const PicardResult r = picard_solve(data, opt);
  if (r.history.a_norm == 0.0) return 0.0;
  return r.history.increments.front() / r.history.a_norm;
}

std::string to_string(Scheme scheme) { return scheme == Scheme::IFRK2 ? "IF-RK2" : "IF-RK4"; }

Scheme parse_scheme(const std::string& name) {
  if (name == "IF-RK2") return Scheme::IFRK2;
  if (name == "IF-RK4") return Scheme::IFRK4;
  throw InvalidArgument("unknown scheme '" + name + "' (expected IF-RK2 or IF-RK4)");
}

namespace {

// Spectral state (u_0, u_1, u_2, theta).
using State = std::vector<ComplexVec>;

struct Rhs {
  State value;
  NonlinearTerms terms;
};

class Marcher {
public:
  Marcher(const GridSpec& g, bool linear_only) : g_(g), linear_only_(linear_only) {
    k2_.resize(g.num_modes());
    for_each_mode(g, [&](std::size_t q, double kx, double ky, double kz, int, int, int) {
      k2_[q] = kx * kx + ky * ky + kz * kz;
    });
  }

  RealVec decay(double tau) const {
    RealVec e(k2_.size());
    for (std::size_t q = 0; q < e.size(); ++q) e[q] = std::exp(-k2_[q] * tau);
    return e;
  }

  Rhs rhs(const State& s) const {
    Rhs r;
    const Field u = Field::from_spectral(g_, {s[0], s[1], s[2]});
    const Field theta = Field::from_spectral(g_, {s[3]});
    State force(3, ComplexVec(g_.num_modes()));
    force[2] = s[3];
    ComplexVec dtheta(g_.num_modes());
    if (!linear_only_) {
      r.terms = transport_terms(u, &u, &theta);
      for (int c = 0; c < 3; ++c)
        for (std::size_t q = 0; q < force[c].size(); ++q) force[c][q] -= r.terms.div_uv[c][q];
      for (std::size_t q = 0; q < dtheta.size(); ++q) dtheta[q] = -r.terms.div_ut[q];
    } else {
      const RealVec m = magnitude(u);
      r.terms.max_speed = *std::max_element(m.begin(), m.end());
    }
    r.value = project(g_, std::move(force));
    r.value.push_back(std::move(dtheta));
    return r;
  }

  // out = e * (a + h * b)   (b may be null)
  static State combine(const RealVec& e, const State& a, double h, const State* b) {
    State out(a.size(), ComplexVec(e.size()));
    for (std::size_t c = 0; c < a.size(); ++c)
      for (std::size_t q = 0; q < e.size(); ++q) {
        const Complex v = b ? a[c][q] + h * (*b)[c][q] : a[c][q];
        out[c][q] = e[q] * v;
      }
    return out;
  }

  State step(const State& v, const Rhs& k1, double h, Scheme scheme) const {
    const RealVec eh = decay(h);
    if (scheme == Scheme::IFRK2) {
      const State k2 = rhs(combine(eh, v, h, &k1.value)).value;
      State out = combine(eh, v, 0.0, nullptr);
      for (std::size_t c = 0; c < out.size(); ++c)
        for (std::size_t q = 0; q < eh.size(); ++q)
          out[c][q] += 0.5 * h * (eh[q] * k1.value[c][q] + k2[c][q]);
      return out;
    }
    const RealVec e2 = decay(0.5 * h);
    const State v_half = combine(e2, v, 0.0, nullptr);
    const State k2 = rhs(combine(e2, v, 0.5 * h, &k1.value)).value;
    State s3 = v_half;
    for (std::size_t c = 0; c < s3.size(); ++c)
      for (std::size_t q = 0; q < e2.size(); ++q) s3[c][q] += 0.5 * h * k2[c][q];
    const State k3 = rhs(s3).value;
    State s4 = combine(eh, v, 0.0, nullptr);
    for (std::size_t c = 0; c < s4.size(); ++c)
      for (std::size_t q = 0; q < eh.size(); ++q) s4[c][q] += h * e2[q] * k3[c][q];
    const State k4 = rhs(s4).value;
    State out = combine(eh, v, 0.0, nullptr);
    for (std::size_t c = 0; c < out.size(); ++c)
      for (std::size_t q = 0; q < eh.size(); ++q)
        out[c][q] += h / 6.0 *
                     (eh[q] * k1.value[c][q] + 2.0 * e2[q] * (k2[c][q] + k3[c][q]) + k4[c][q]);
    return out;
  }

private:
  GridSpec g_;
  bool linear_only_;
  RealVec k2_;
};

bool finite_state(const State& s) {
  for (const auto& c : s)
    for (const auto& z : c)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace

Trajectory march_solve(const InitialData& data, const MarchOptions& options) {
  if (!(options.T > 0.0)) throw InvalidArgument("march: T must be positive");
  if (!(options.dt > 0.0)) throw InvalidArgument("march: dt must be positive");
  if (!(options.output_interval > 0.0)) throw InvalidArgument("march: output_interval must be positive");
  const GridSpec& g = data.grid();

  std::vector<double> outputs;
  for (int i = 0;; ++i) {
    const double t = i * options.output_interval;
    if (t >= options.T * (1 - 1e-12)) break;
    outputs.push_back(t);
  }
  outputs.push_back(options.T);

  Trajectory traj;
  traj.meta.scheme = to_string(options.scheme);
  traj.meta.linear_only = options.linear_only;
  const Marcher marcher(g, options.linear_only);
  State v = {data.u0().spectral(0), data.u0().spectral(1), data.u0().spectral(2),
             data.theta0().spectral()};

  const bool track = options.track_bilinear && !options.linear_only;
  DuhamelAccumulator acc_uu(g, 3, false, options.rule);
  DuhamelAccumulator acc_ut(g, 1, true, options.rule);

  auto record = [&](double t) {
    FlowState s;
    s.t = t;
    s.u = Field::from_spectral(g, {v[0], v[1], v[2]});
    s.theta = Field::from_spectral(g, {v[3]});
    traj.states.push_back(std::move(s));
    if (track) {
      traj.b1.push_back(Field::from_spectral(g, project(g, acc_uu.I())));
      traj.b2.push_back(Field::from_spectral(g, project_vertical(g, acc_ut.J()[0])));
    }
  };

  const double dx = g.dx();
  for (std::size_t o = 0; o < outputs.size(); ++o) {
    const double t0 = outputs[o];
    Rhs k1 = marcher.rhs(v);
    if (!std::isfinite(k1.terms.max_speed)) {
      throw SolverAborted("march: non-finite state at t=" + std::to_string(t0), traj);
    }
    if (track) {
      acc_uu.push(t0, k1.terms.div_uv);
      acc_ut.push(t0, {k1.terms.div_ut});
    }
    record(t0);
    if (o + 1 == outputs.size()) break;

    const double span = outputs[o + 1] - t0;
    const long steps = std::max(1L, long(std::ceil(span / options.dt - 1e-9)));
    const double h = span / double(steps);
    for (long s = 0; s < steps; ++s) {
      const double cfl = h * k1.terms.max_speed / dx;
      traj.meta.max_cfl = std::max(traj.meta.max_cfl, cfl);
      if (cfl > 0.5) traj.meta.cfl_warning = true;
      State next = marcher.step(v, k1, h, options.scheme);
      if (!finite_state(next)) {
        throw SolverAborted("march: non-finite state after t=" + std::to_string(t0 + s * h), traj);
      }
      v = std::move(next);
      ++traj.meta.steps;
      if (s + 1 < steps) {
        k1 = marcher.rhs(v);
        if (track) {
          const double ts = t0 + (s + 1) * h;
          acc_uu.push(ts, k1.terms.div_uv);
          acc_ut.push(ts, {k1.terms.div_ut});
        }
      }
    }
  }
  return traj;
}

double CrossValidation::max() const { return std::max({u_l2, u_linf, theta_l2, theta_linf}); }

CrossValidation compare_trajectories(const Trajectory& reference, const Trajectory& other) {
  reference.validate();
  other.validate();
  if (reference.size() != other.size()) throw InvalidArgument("compare: node counts differ");
  CrossValidation cv;
  auto rel = [](const Field& ref, const Field& x, double p) {
    const double d = lp_norm(x - ref, p);
    const double r = lp_norm(ref, p);
    return r > 0.0 ? d / r : d;
  };
  for (std::size_t i = 1; i < reference.size(); ++i) {
    const FlowState& a = reference.states[i];
    const FlowState& b = other.states[i];
    if (std::abs(a.t - b.t) > 1e-9 * std::max(1.0, a.t)) throw InvalidArgument("compare: nodes differ");
    cv.u_l2 = std::max(cv.u_l2, rel(a.u, b.u, 2.0));
    cv.u_linf = std::max(cv.u_linf, rel(a.u, b.u, kInf));
    cv.theta_l2 = std::max(cv.theta_l2, rel(a.theta, b.theta, 2.0));
    cv.theta_linf = std::max(cv.theta_linf, rel(a.theta, b.theta, kInf));
  }
  return cv;
}

CrossValidation cross_validate(const InitialData& data, const PicardOptions& picard,
                               const MarchOptions& march) {
  const PicardResult p = picard_solve(data, picard);
  MarchOptions m = march;
  m.T = picard.T;
  m.output_interval = picard.T / (picard.nodes - 1);
  m.linear_only = picard.linear_only;
  const Trajectory q = march_solve(data, m);
  return compare_trajectories(p.trajectory, q);
}

}  // namespace bsq
