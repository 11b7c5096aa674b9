#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "bsq/field.hpp"

namespace bsq {

/// Exact exponent in [1, inf]; den == 0 encodes inf.
struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;

  static Rational inf() { return {1, 0}; }
  /// "3", "3/2", "inf".
  static Rational parse(const std::string& s);

  bool is_inf() const { return den == 0; }
  double value() const;
  /// 1/x with 1/inf = 0 (returned as 0/1).
  Rational reciprocal() const;
  std::string str() const;

  bool operator==(const Rational& o) const { return num * o.den == o.num * den; }
};

Rational operator+(const Rational& a, const Rational& b);
Rational operator-(const Rational& a, const Rational& b);

/// (p, q, r, q~, r~) with 1 + 1/p = 1/r + 1/q = 1/r~ + 1/q~.
struct YoungExponents {
  Rational p, q, r, q_tilde, r_tilde;

  /// Solves for q and q~; throws InvalidArgument if either leaves [1, inf].
  static YoungExponents from_pr(Rational p, Rational r, Rational r_tilde);
  bool consistent() const;
  std::string str() const;
};

/// Tuples (p, r, r~) = (3, 3/2, 3), (inf, 3, 6/5), (1, 1, 1), (3, 3, 3).
std::vector<YoungExponents> young_menu();
/// Tuples (1, 1, 1), (3, 1, 1), (inf, 3/2, 3/2), (3, 3/2, 1), (inf, inf, 6).
std::vector<YoungExponents> proof_tuples();

struct YoungInstance {
  std::string description;
  Field f, g;
  double R = 0.0;
  YoungExponents e;

  /// Throws InvalidArgument unless f, g are scalars on one grid, R in [0, L/4)
  /// and the exponents are consistent.
  void validate() const;
};

/// Linear convolution sum_y f(y) g(x - y) dx^3 on the lattice, computed by
/// zero-padding to 2n per axis. The result lives on the padded grid
/// (2n, 2L). Samples outside the ball of radius r_f + r_g, where r_f bounds
/// the nonzero samples of f, are exactly zero. Throws Refused unless the
/// essential supports (samples above 1e-10 of the maximum) of f and g each lie
/// within |x_i| <= L/4.
Field convolve(const Field& f, const Field& g);

struct YoungResult {
  std::string description;
  std::string exponents;
  double R = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool pass = false;
  /// RHS = 0 with LHS > 0.
  bool hard_violation = false;
};

/// ||f*g||_{L^p(|x| >= R)} against
/// 2 (||f||_{L^r(|x| >= R/2)} ||g||_q + ||f||_{r~} ||g||_{L^q~(|x| >= R/2)}).
/// PASS iff ratio <= 1 + 1e-6.
YoungResult exterior_young_check(const YoungInstance& inst);

/// Gaussian mixtures of 1-3 components (signed weights, widths in
/// [0.6, 0.95] L/32, centers in [-1.5, 1.5]^3 L/32), R uniform in [0, L/8],
/// exponents uniform over young_menu().
std::vector<YoungInstance> random_instances(const GridSpec& grid, int count, std::uint64_t seed);

/// R = 0 with generic data, and compact bumps inside B_{R/2}.
std::vector<YoungInstance> structural_instances(const GridSpec& grid);

std::vector<YoungResult> young_sweep(const std::vector<YoungInstance>& instances);

void write_young_csv(const std::filesystem::path& path, const std::vector<YoungResult>& rows);
nlohmann::json to_json(const YoungResult& r);

}  // namespace bsq
