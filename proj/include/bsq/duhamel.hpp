#pragma once

#include "bsq/mild.hpp"

namespace bsq {

/// Time quadrature for Duhamel integrals on trajectory nodes.
///   Trapezoid: composite trapezoidal rule on the full integrand.
///   Exponential: the integrand's non-exponential part is interpolated
///     linearly between nodes and the heat factor is integrated exactly.
enum class QuadratureRule { Trapezoid, Exponential };

struct QuadratureSpec {
  QuadratureRule rule = QuadratureRule::Exponential;
  /// Use every stride-th trajectory node (node-doubling checks).
  int stride = 1;
};

std::string to_string(QuadratureRule rule);
QuadratureRule parse_quadrature_rule(const std::string& name);

/// Running Duhamel integrals of a spectral integrand g on increasing nodes:
///   I(t) = int_0^t e^{(t-s) Delta} g(s) ds,
///   J(t) = int_0^t (t - s) e^{(t-s) Delta} g(s) ds   (when weighted).
/// Each push costs O(modes), independent of the number of earlier nodes.
class DuhamelAccumulator {
public:
  DuhamelAccumulator(const GridSpec& grid, int components, bool weighted,
                     QuadratureRule rule = QuadratureRule::Exponential);

  /// First call fixes the start time (I = J = 0 there); subsequent calls
  /// must strictly increase t.
  void push(double t, const std::vector<ComplexVec>& g);

  double time() const { return time_; }
  bool started() const { return started_; }
  const std::vector<ComplexVec>& I() const { return I_; }
  const std::vector<ComplexVec>& J() const { return J_; }

private:
  struct Weights {
    double h = -1.0;
    RealVec decay, a_prev, a_cur, c_prev, c_cur;
  };
  const Weights& weights(double h);

  GridSpec grid_;
  int components_;
  bool weighted_;
  QuadratureRule rule_;
  bool started_ = false;
  double time_ = 0.0;
  std::vector<ComplexVec> I_, J_, g_prev_;
  RealVec k2_;
  Weights cache_;
};

/// Products entering the nonlinear terms, all spectral and dealiased:
///   div_uv[l] = sum_j d_j (u_j v_l)   (transport of v by u),
///   div_ut    = sum_j d_j (u_j theta).
/// Either part is left empty when the corresponding argument is null.
/// max_speed is the grid maximum of |u|.
struct NonlinearTerms {
  std::vector<ComplexVec> div_uv;
  ComplexVec div_ut;
  double max_speed = 0.0;
};

NonlinearTerms transport_terms(const Field& u, const Field* v, const Field* theta);

/// B1(u, v)(t) = int_0^t e^{(t-s) Delta} P div(u (x) v)(s) ds.
Field bilinear_B1(const Trajectory& traj_u, const Trajectory& traj_v, double t,
                  const QuadratureSpec& quad = {});
/// B2(u, theta)(t) = int_0^t (t - s) e^{(t-s) Delta} P[div(u theta)(s) e3] ds.
Field bilinear_B2(const Trajectory& traj_u, const Trajectory& traj_theta, double t,
                  const QuadratureSpec& quad = {});
/// B3(u, theta)(t) = int_0^t e^{(t-s) Delta} div(u theta)(s) ds.
Field bilinear_B3(const Trajectory& traj_u, const Trajectory& traj_theta, double t,
                  const QuadratureSpec& quad = {});
/// int_0^t e^{(t-s) Delta} P(theta(s) e3) ds.
Field buoyancy_duhamel(const Trajectory& traj_theta, double t, const QuadratureSpec& quad = {});

/// Spectral P applied to a 3-component spectral array, or P(s e3) for a scalar.
std::vector<ComplexVec> project(const GridSpec& grid, std::vector<ComplexVec> v);
std::vector<ComplexVec> project_vertical(const GridSpec& grid, const ComplexVec& s);

}  // namespace bsq
