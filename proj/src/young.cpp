#include "bsq/young.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "bsq/fft.hpp"
#include "bsq/norms.hpp"

namespace bsq {

namespace {

Rational make(std::int64_t num, std::int64_t den) {
  if (den == 0) return Rational::inf();
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  return {num / (g == 0 ? 1 : g), den / (g == 0 ? 1 : g)};
}

bool in_range(const Rational& x) { return x.is_inf() || (x.num >= x.den && x.den > 0); }

}  // namespace

Rational Rational::parse(const std::string& s) {
  if (s == "inf" || s == "infinity") return inf();
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return make(std::stoll(s), 1);
    return make(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw InvalidArgument("cannot parse exponent '" + s + "'");
  }
}

double Rational::value() const {
  return is_inf() ? kInf : static_cast<double>(num) / static_cast<double>(den);
}

Rational Rational::reciprocal() const {
  if (is_inf()) return {0, 1};
  return make(den, num);
}

std::string Rational::str() const {
  if (is_inf()) return "inf";
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(a.num * b.den + b.num * a.den, a.den * b.den);
}

Rational operator-(const Rational& a, const Rational& b) {
  return make(a.num * b.den - b.num * a.den, a.den * b.den);
}

YoungExponents YoungExponents::from_pr(Rational p, Rational r, Rational r_tilde) {
  for (const auto& x : {p, r, r_tilde}) {
    if (!in_range(x)) throw InvalidArgument("exponent " + x.str() + " outside [1, inf]");
  }
  const Rational one{1, 1};
  const Rational lhs = one + p.reciprocal();
  const Rational inv_q = lhs - r.reciprocal();
  const Rational inv_qt = lhs - r_tilde.reciprocal();
  YoungExponents e;
  e.p = p;
  e.r = r;
  e.r_tilde = r_tilde;
  e.q = inv_q.reciprocal();
  e.q_tilde = inv_qt.reciprocal();
  if (inv_q.num < 0 || inv_qt.num < 0 || !in_range(e.q) || !in_range(e.q_tilde)) {
    throw InvalidArgument("no admissible q for (p, r, r~) = (" + p.str() + ", " + r.str() + ", " +
                          r_tilde.str() + ")");
  }
  return e;
}

bool YoungExponents::consistent() const {
  const Rational one{1, 1};
  const Rational lhs = one + p.reciprocal();
  return lhs == r.reciprocal() + q.reciprocal() &&
         lhs == r_tilde.reciprocal() + q_tilde.reciprocal() && in_range(p) && in_range(q) &&
         in_range(r) && in_range(q_tilde) && in_range(r_tilde);
}

std::string YoungExponents::str() const {
  return "p=" + p.str() + " q=" + q.str() + " r=" + r.str() + " q~=" + q_tilde.str() +
         " r~=" + r_tilde.str();
}

std::vector<YoungExponents> young_menu() {
  const auto I = Rational::inf();
  return {YoungExponents::from_pr({3, 1}, {3, 2}, {3, 1}),
          YoungExponents::from_pr(I, {3, 1}, {6, 5}),
          YoungExponents::from_pr({1, 1}, {1, 1}, {1, 1}),
          YoungExponents::from_pr({3, 1}, {3, 1}, {3, 1})};
}

std::vector<YoungExponents> proof_tuples() {
  const auto I = Rational::inf();
  return {YoungExponents::from_pr({1, 1}, {1, 1}, {1, 1}),
          YoungExponents::from_pr({3, 1}, {1, 1}, {1, 1}),
          YoungExponents::from_pr(I, {3, 2}, {3, 2}),
          YoungExponents::from_pr({3, 1}, {3, 2}, {1, 1}),
          YoungExponents::from_pr(I, I, {6, 1})};
}

void YoungInstance::validate() const {
  if (f.empty() || g.empty() || f.is_vector() || g.is_vector()) {
    throw InvalidArgument("Young instance needs scalar f and g");
  }
  if (!(f.grid() == g.grid())) throw InvalidArgument("f and g live on different grids");
  if (!(R >= 0.0 && R < 0.25 * f.grid().box_length)) {
    throw InvalidArgument("R must lie in [0, L/4)");
  }
  if (!e.consistent()) throw InvalidArgument("inconsistent exponents " + e.str());
}

namespace {

struct Support {
  double radius = 0.0;      // max |x| over nonzero samples
  double chebyshev = 0.0;   // max |x_i| over samples above the essential threshold
};

Support support_of(const Field& f) {
  const GridSpec& grid = f.grid();
  const RealVec& v = to_real(f).real(0);
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  Support s;
  const double thr = 1e-10 * vmax;
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      for (int k = 0; k < grid.n; ++k) {
        const double a = std::abs(v[grid.point_index(i, j, k)]);
        if (a == 0.0) continue;
        const Vec3 x = coordinates(grid, i, j, k);
        s.radius = std::max(s.radius, std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
        if (a > thr) {
          s.chebyshev = std::max({s.chebyshev, std::abs(x[0]), std::abs(x[1]), std::abs(x[2])});
        }
      }
    }
  }
  return s;
}

RealVec pad(const Field& f, const GridSpec& padded) {
  const GridSpec& grid = f.grid();
  const RealVec& v = to_real(f).real(0);
  RealVec out(padded.num_points(), 0.0);
  const int n2 = padded.n;
  auto wrap = [&](int i) { return (grid.mode(i) + n2) % n2; };
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      for (int k = 0; k < grid.n; ++k) {
        out[padded.point_index(wrap(i), wrap(j), wrap(k))] = v[grid.point_index(i, j, k)];
      }
    }
  }
  return out;
}

}  // namespace

Field convolve(const Field& f, const Field& g) {
  if (f.empty() || g.empty() || f.is_vector() || g.is_vector()) {
    throw InvalidArgument("convolve needs scalar fields");
  }
  if (!(f.grid() == g.grid())) throw InvalidArgument("convolve needs fields on one grid");
  const GridSpec& grid = f.grid();
  const Support sf = support_of(f);
  const Support sg = support_of(g);
  const double quarter = 0.25 * grid.box_length;
  if (sf.chebyshev > quarter || sg.chebyshev > quarter) {
    throw Refused("support overflow: essential extents " + std::to_string(sf.chebyshev) + ", " +
                  std::to_string(sg.chebyshev) + " exceed L/4 = " + std::to_string(quarter));
  }
  const GridSpec padded(2 * grid.n, 2.0 * grid.box_length);
  const ComplexVec a = fft::forward(padded, pad(f, padded));
  ComplexVec b = fft::forward(padded, pad(g, padded));
  for (std::size_t m = 0; m < b.size(); ++m) b[m] *= a[m];
  RealVec out = fft::inverse(padded, b);
  const double reach = sf.radius + sg.radius;
  for (int i = 0; i < padded.n; ++i) {
    for (int j = 0; j < padded.n; ++j) {
      for (int k = 0; k < padded.n; ++k) {
        const Vec3 x = coordinates(padded, i, j, k);
        if (std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) > reach * (1.0 + 1e-12)) {
          out[padded.point_index(i, j, k)] = 0.0;
        }
      }
    }
  }
  return Field::from_real(padded, {std::move(out)});
}

YoungResult exterior_young_check(const YoungInstance& inst) {
  inst.validate();
  YoungResult res;
  res.description = inst.description;
  res.exponents = inst.e.str();
  res.R = inst.R;
  const Field conv = convolve(inst.f, inst.g);
  const RegionSpec outer{inst.R, true};
  const RegionSpec half{0.5 * inst.R, true};
  res.lhs = exterior_lp_norm(conv, inst.e.p.value(), outer);
  res.rhs = 2.0 * (exterior_lp_norm(inst.f, inst.e.r.value(), half) *
                       lp_norm(inst.g, inst.e.q.value()) +
                   lp_norm(inst.f, inst.e.r_tilde.value()) *
                       exterior_lp_norm(inst.g, inst.e.q_tilde.value(), half));
  if (res.rhs == 0.0) {
    res.ratio = res.lhs == 0.0 ? 0.0 : kInf;
    res.hard_violation = res.lhs > 0.0;
  } else {
    res.ratio = res.lhs / res.rhs;
  }
  res.pass = !res.hard_violation && res.ratio <= 1.0 + 1e-6;
  return res;
}

namespace {

Field mixture(const GridSpec& grid, std::mt19937_64& rng, std::string& desc) {
  const double s = grid.box_length / 32.0;
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_real_distribution<double> width(0.6 * s, 0.95 * s);
  std::uniform_real_distribution<double> pos(-1.5 * s, 1.5 * s);
  std::normal_distribution<double> weight;
  struct Comp {
    double w, a;
    Vec3 c;
  };
  std::vector<Comp> comps(count(rng));
  for (auto& c : comps) {
    c.a = weight(rng);
    c.w = width(rng);
    c.c = {pos(rng), pos(rng), pos(rng)};
  }
  desc += std::to_string(comps.size()) + "g";
  return Field::sample(grid, [comps](const Vec3& x) {
    double v = 0.0;
    for (const auto& c : comps) {
      const double d2 = (x[0] - c.c[0]) * (x[0] - c.c[0]) + (x[1] - c.c[1]) * (x[1] - c.c[1]) +
                        (x[2] - c.c[2]) * (x[2] - c.c[2]);
      v += c.a * std::exp(-d2 / (2.0 * c.w * c.w));
    }
    return v;
  });
}

}  // namespace

std::vector<YoungInstance> random_instances(const GridSpec& grid, int count, std::uint64_t seed) {
  if (count < 0) throw InvalidArgument("count must be nonnegative");
  std::mt19937_64 rng(seed);
  const auto menu = young_menu();
  std::uniform_int_distribution<std::size_t> pick(0, menu.size() - 1);
  std::uniform_real_distribution<double> radius(0.0, grid.box_length / 8.0);
  std::vector<YoungInstance> out;
  for (int i = 0; i < count; ++i) {
    YoungInstance inst;
    inst.description = "random#" + std::to_string(i) + ":";
    inst.f = mixture(grid, rng, inst.description);
    inst.description += "*";
    inst.g = mixture(grid, rng, inst.description);
    inst.R = radius(rng);
    inst.e = menu[pick(rng)];
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<YoungInstance> structural_instances(const GridSpec& grid) {
  std::vector<YoungInstance> out;
  const double s = grid.box_length / 32.0;
  YoungInstance zero;
  zero.description = "R=0";
  zero.f = Field::sample(grid, [s](const Vec3& x) {
    return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * s * s));
  });
  zero.g = Field::sample(grid, [s](const Vec3& x) {
    const double d2 = (x[0] - s) * (x[0] - s) + x[1] * x[1] + (x[2] + 0.5 * s) * (x[2] + 0.5 * s);
    return std::exp(-d2 / (1.5 * s * s)) - 0.5 * std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (0.8 * s * s));
  });
  zero.R = 0.0;
  zero.e = young_menu()[0];
  out.push_back(zero);

  YoungInstance inside;
  inside.description = "supports in B_{R/2}";
  inside.R = 7.0 * s;
  const double a = 0.45 * inside.R;
  auto bump = [a](const Vec3& x) {
    const double r2 = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (a * a);
    return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
  };
  inside.f = Field::sample(grid, bump);
  inside.g = Field::sample(grid, [bump](const Vec3& x) { return x[0] * bump(x); });
  inside.e = young_menu()[1];
  out.push_back(inside);
  return out;
}

std::vector<YoungResult> young_sweep(const std::vector<YoungInstance>& instances) {
  std::vector<YoungResult> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) out.push_back(exterior_young_check(inst));
  return out;
}

void write_young_csv(const std::filesystem::path& path, const std::vector<YoungResult>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(17);
  out << "instance,exponents,R,lhs,rhs,ratio,pass\n";
  for (const auto& r : rows) {
    out << '"' << r.description << "\",\"" << r.exponents << "\"," << r.R << ',' << r.lhs << ','
        << r.rhs << ',' << r.ratio << ',' << (r.pass ? "PASS" : "FAIL") << '\n';
  }
}

nlohmann::json to_json(const YoungResult& r) {
  return {{"instance", r.description}, {"exponents", r.exponents}, {"R", r.R},
          {"lhs", r.lhs},              {"rhs", r.rhs},             {"ratio", r.ratio},
          {"pass", r.pass},            {"hard_violation", r.hard_violation}};
}

}  // namespace bsq
