#include "bsq/diagnostics.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "bsq/duhamel.hpp"
#include "bsq/norms.hpp"
#include "bsq/spectral_ops.hpp"

namespace bsq {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t find_value(const std::vector<double>& v, double x, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == x || (std::isfinite(x) && std::abs(v[i] - x) <= 1e-12 * std::abs(x))) return i;
  }
  throw InvalidArgument(std::string("series has no ") + what + " = " + format_exponent(x));
}

double compensation(double p) { return std::isinf(p) ? 0.5 : 0.5 * (1.0 - 3.0 / p); }

}  // namespace

std::string format_exponent(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

double theorem_exponent(double p) { return std::isinf(p) ? -0.5 : -0.5 + 1.5 / p; }

std::size_t NormSeries::p_index(double p) const { return find_value(p_set, p, "p"); }
std::size_t NormSeries::A_index(double A) const { return find_value(A_set, A, "A"); }

NormSeries norm_series(const Trajectory& traj, const DiagnosticsSpec& spec) {
  traj.validate();
  const GridSpec& g = traj.grid();
  NormSeries s;
  s.times = traj.nodes();
  s.p_set = spec.p_set;
  s.A_set = spec.A_set;
  const std::size_t nt = s.times.size();
  s.lp.assign(spec.p_set.size(), std::vector<double>(nt));
  s.weighted = s.lp;
  s.u3.resize(nt);
  s.sqrt_t_uinf.resize(nt);
  s.theta1.resize(nt);
  s.t32_theta_inf.resize(nt);
  s.ext_theta1.assign(spec.A_set.size(), std::vector<double>(nt, kNaN));
  s.ext_u3 = s.ext_theta1;
  s.ext_sqrt_t_uinf = s.ext_theta1;
  s.valid.assign(spec.A_set.size(), std::vector<bool>(nt, false));

  for (std::size_t it = 0; it < nt; ++it) {
    const double t = s.times[it];
    const RealVec mu = magnitude(traj.states[it].u);
    const RealVec mt = magnitude(traj.states[it].theta);
    for (std::size_t ip = 0; ip < spec.p_set.size(); ++ip) {
      const double p = spec.p_set[ip];
      s.lp[ip][it] = lp_norm_of_magnitudes(g, mu, p);
      s.weighted[ip][it] = std::pow(1.0 + t, compensation(p)) * s.lp[ip][it];
    }
    const double uinf = lp_norm_of_magnitudes(g, mu, kInf);
    s.u3[it] = lp_norm_of_magnitudes(g, mu, 3.0);
    s.sqrt_t_uinf[it] = std::sqrt(t) * uinf;
    s.theta1[it] = lp_norm_of_magnitudes(g, mt, 1.0);
    s.t32_theta_inf[it] = t * std::sqrt(t) * lp_norm_of_magnitudes(g, mt, kInf);
    for (std::size_t ia = 0; ia < spec.A_set.size(); ++ia) {
      const RegionSpec region{spec.A_set[ia] * std::sqrt(t), true};
      if (t <= 0.0 || !region.valid_on(g)) continue;
      s.valid[ia][it] = true;
      s.ext_theta1[ia][it] = lp_norm_of_magnitudes(g, mt, 1.0, &region);
      s.ext_u3[ia][it] = lp_norm_of_magnitudes(g, mu, 3.0, &region);
      s.ext_sqrt_t_uinf[ia][it] = std::sqrt(t) * lp_norm_of_magnitudes(g, mu, kInf, &region);
    }
  }
  return s;
}

void write_series_csv(const std::filesystem::path& path, const NormSeries& s) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << std::setprecision(17) << "t";
  for (double p : s.p_set) out << ",u_L" << format_exponent(p);
  for (double p : s.p_set) out << ",weighted_u_L" << format_exponent(p);
  out << ",u_L3,sqrt_t_u_Linf,theta_L1,t32_theta_Linf";
  for (double A : s.A_set) {
    const std::string a = format_exponent(A);
    out << ",ext_theta_L1_A" << a << ",ext_u_L3_A" << a << ",ext_sqrt_t_u_Linf_A" << a;
  }
  out << ",flags\n";
  for (std::size_t it = 0; it < s.times.size(); ++it) {
    out << s.times[it];
    for (const auto& v : s.lp) out << ',' << v[it];
    for (const auto& v : s.weighted) out << ',' << v[it];
    out << ',' << s.u3[it] << ',' << s.sqrt_t_uinf[it] << ',' << s.theta1[it] << ','
        << s.t32_theta_inf[it];
    std::string flags;
    for (std::size_t ia = 0; ia < s.A_set.size(); ++ia) {
      if (s.valid[ia][it]) {
        out << ',' << s.ext_theta1[ia][it] << ',' << s.ext_u3[ia][it] << ','
            << s.ext_sqrt_t_uinf[ia][it];
      } else {
        out << ",,,";
        flags += (flags.empty() ? "" : ";") + std::string("invalid_A") + format_exponent(s.A_set[ia]);
      }
    }
    out << ',' << (flags.empty() ? "ok" : flags) << '\n';
  }
}

RateFit rate_fit(const std::vector<double>& times, const std::vector<double>& values,
                 double t_lo, double t_hi) {
  if (times.size() != values.size()) throw InvalidArgument("rate_fit: size mismatch");
  if (!(t_lo > 0.0) || !(t_hi >= 4.0 * t_lo)) {
    throw Refused("rate_fit: window [" + std::to_string(t_lo) + ", " + std::to_string(t_hi) +
                  "] must satisfy t_lo > 0 and t_hi / t_lo >= 4");
  }
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < t_lo * (1 - 1e-12) || t > t_hi * (1 + 1e-12)) continue;
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw Refused("rate_fit: nonpositive or invalid value at t=" + std::to_string(t));
    }
    xs.push_back(std::log(t));
    ys.push_back(std::log(values[i]));
  }
  if (xs.size() < 6) {
    throw Refused("rate_fit: " + std::to_string(xs.size()) + " samples in window, at least 6 needed");
  }
  const double n = double(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  RateFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.amplitude = std::exp(intercept);
  fit.window_low = std::exp(xs.front());
  fit.window_high = std::exp(xs.back());
  fit.samples = int(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fit.residual = std::max(fit.residual, std::abs(std::exp(ys[i] - intercept - fit.exponent * xs[i]) - 1.0));
  }
  return fit;
}

TheoremCheck theorem_check(const NormSeries& series, double m, double p, double t_lo,
                           double t_hi, double A) {
  if (!(t_lo > 0.0) || !(t_hi >= 4.0 * t_lo)) {
    throw Refused("theorem_check: window must span at least a factor 4");
  }
  const auto& v = series.lp[series.p_index(p)];
  TheoremCheck c;
  c.p = p;
  c.A = A;
  double lo = kInf, hi = 0.0, first = kInf, last = 0.0;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double t = series.times[i];
    if (t < t_lo * (1 - 1e-12) || t > t_hi * (1 + 1e-12)) continue;
    const double w = std::pow(t, compensation(p)) * v[i];
    lo = std::min(lo, w);
    hi = std::max(hi, w);
    first = std::min(first, t);
    last = std::max(last, t);
  }
  if (hi == 0.0 && std::isinf(lo)) throw Refused("theorem_check: no samples in window");
  c.c2 = hi;
  c.t0 = first;
  c.t_max = last;
  if (m == 0.0) {
    c.lower_bound_note = "skipped (m = 0)";
  } else {
    c.c1 = lo / std::abs(m);
  }
  return c;
}

ProfileDecomposition profile_decomposition(const Trajectory& traj, const InitialData& data,
                                           double t, double A, double p) {
  const std::size_t idx = traj.index_of(t);
  const GridSpec& g = traj.grid();
  const RegionSpec region{A * std::sqrt(t), true};
  if (!region.valid_on(g)) {
    throw InvalidArgument("profile_decomposition: A sqrt(t) = " + std::to_string(region.radius) +
                          " is not below L/2");
  }
  const double m = data.mass();
  // m delta e3 and (theta0 - m delta) e3, then t e^{t Delta} P.
  ComplexVec delta(g.num_modes(), Complex(m, 0.0));
  ComplexVec rest = data.theta0().spectral();
  for (auto& z : rest) z -= m;
  auto profile = [&](const ComplexVec& s) {
    return t * heat_semigroup(Field::from_spectral(g, project_vertical(g, s)), t);
  };
  const Field mass_part = profile(delta);
  const Field dipole_part = profile(rest);
  const Field initial_part = heat_semigroup(data.u0(), t);

  ProfileDecomposition d;
  d.t = t;
  d.A = A;
  d.p = p;
  d.radius = region.radius;
  Field b1, b2;
  if (traj.has_bilinear()) {
    b1 = traj.b1[idx];
    b2 = traj.b2[idx];
    d.tracked_bilinear = true;
  } else if (traj.meta.linear_only) {
    b1 = Field::zeros(g, Rank::Vector, Representation::Spectral);
    b2 = b1;
  } else {
    b1 = bilinear_B1(traj, traj, t);
    b2 = bilinear_B2(traj, traj, t);
  }
  auto ext = [&](const Field& f) { return exterior_lp_norm(f, p, region); };
  const Field sum = mass_part + dipole_part + initial_part - b1 - b2;
  const Field& u = traj.states[idx].u;
  d.mass_term = ext(mass_part);
  d.dipole_term = ext(dipole_part);
  d.initial_term = ext(initial_part);
  d.b1 = ext(b1);
  d.b2 = ext(b2);
  d.bilinear = ext(b1 + b2);
  d.bilinear_sum = d.b1 + d.b2;
  d.sum_norm = ext(sum);
  d.u_norm = ext(u);
  const double diff = ext(sum - u);
  d.residual = d.u_norm > 0.0 ? diff / d.u_norm : diff;
  return d;
}

LimsupTable exterior_limsup_proxy(const NormSeries& s) {
  LimsupTable table;
  for (std::size_t ia = 0; ia < s.A_set.size(); ++ia) {
    LimsupRow row;
    row.A = s.A_set[ia];
    double lo = kInf, hi = 0.0;
    for (std::size_t it = 0; it < s.times.size(); ++it) {
      if (!s.valid[ia][it]) continue;
      lo = std::min(lo, s.times[it]);
      hi = std::max(hi, s.times[it]);
    }
    if (std::isinf(lo)) {
      table.rows.push_back(row);
      continue;
    }
    const double mid = 0.5 * (lo + hi);
    row.window_low = mid;
    row.window_high = hi;
    row.valid = true;
    const double A = row.A;
    for (std::size_t it = 0; it < s.times.size(); ++it) {
      if (!s.valid[ia][it] || s.times[it] < mid) continue;
      row.theta1_scaled = std::max(row.theta1_scaled, A * s.ext_theta1[ia][it]);
      row.u3_scaled = std::max(row.u3_scaled, A * A * s.ext_u3[ia][it]);
      row.uinf_scaled = std::max(row.uinf_scaled, A * A * A * s.ext_sqrt_t_uinf[ia][it]);
    }
    table.kappa_hat = std::max({table.kappa_hat, row.theta1_scaled, row.u3_scaled, row.uinf_scaled});
    table.rows.push_back(row);
  }
  return table;
}

nlohmann::json to_json(const RateFit& fit) {
  return {{"exponent", fit.exponent},
          {"amplitude", fit.amplitude},
          {"window", {fit.window_low, fit.window_high}},
          {"residual", fit.residual},
          {"samples", fit.samples}};
}

nlohmann::json to_json(const TheoremCheck& c) {
  nlohmann::json j{{"p", format_exponent(c.p)}, {"c2", c.c2}, {"t0", c.t0}, {"t_max", c.t_max}, {"A", c.A}};
  if (c.c1) {
    j["c1"] = *c.c1;
  } else {
    j["c1"] = nullptr;
    j["lower_bound"] = c.lower_bound_note;
  }
  return j;
}

nlohmann::json to_json(const ProfileDecomposition& d) {
  return {{"t", d.t},
          {"A", d.A},
          {"p", format_exponent(d.p)},
          {"radius", d.radius},
          {"mass_term", d.mass_term},
          {"dipole_term", d.dipole_term},
          {"initial_term", d.initial_term},
          {"b1", d.b1},
          {"b2", d.b2},
          {"bilinear", d.bilinear},
          {"bilinear_sum", d.bilinear_sum},
          {"sum", d.sum_norm},
          {"u", d.u_norm},
          {"residual", d.residual},
          {"tracked_bilinear", d.tracked_bilinear}};
}

nlohmann::json to_json(const LimsupTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"A", r.A},
                    {"valid", r.valid},
                    {"window", {r.window_low, r.window_high}},
                    {"A_theta_L1", r.theta1_scaled},
                    {"A2_u_L3", r.u3_scaled},
                    {"A3_sqrt_t_u_Linf", r.uinf_scaled}});
  }
  return {{"rows", rows}, {"kappa_hat", table.kappa_hat}};
}

}  // namespace bsq
