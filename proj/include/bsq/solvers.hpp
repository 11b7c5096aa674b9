#pragma once

#include "bsq/duhamel.hpp"

namespace bsq {

struct PicardOptions {
  double T = 4.0;
  int nodes = 33;
  int max_sweeps = 30;
  /// Stop once the increment's E-norm is below tol * ||a||_E.
  double tol = 1e-10;
  bool linear_only = false;
  QuadratureSpec quad;
};

struct ConvergenceHistory {
  /// Sampled E-norm of v_{n+1} - v_n per sweep.
  std::vector<double> increments;
  double a_norm = 0.0;
  bool converged = false;

  int sweeps() const { return int(increments.size()); }
  /// increments[n+1] / increments[n].
  std::vector<double> ratios() const;
};

/// Raised when Picard increments grow for three consecutive sweeps.
class PicardDiverged : public Error {
public:
  PicardDiverged(const std::string& what, ConvergenceHistory h, double norm)
      : Error(what), history(std::move(h)), data_norm(norm) {}
  ConvergenceHistory history;
  /// ||u0||_3 + ||theta0||_1.
  double data_norm;
};

struct PicardResult {
  Trajectory trajectory;
  ConvergenceHistory history;
};

/// Iterates v_{n+1} = a - B(v_n, v_n) on M uniform nodes of [0, T], starting
/// from v_0 = a. Each sweep walks the nodes in order with running Duhamel
/// accumulators, so one sweep costs O(M) field operations.
PicardResult picard_solve(const InitialData& data, const PicardOptions& options);

/// ||B(a, a)||_E / ||a||_E: the relative size of the first Picard increment.
double first_increment_ratio(const InitialData& data, double T, int nodes,
                             const QuadratureSpec& quad = {});

enum class Scheme { IFRK2, IFRK4 };

std::string to_string(Scheme scheme);
Scheme parse_scheme(const std::string& name);

struct MarchOptions {
  double T = 16.0;
  double dt = 0.05;
  /// Spacing of the recorded nodes; dt is shortened to divide it.
  double output_interval = 0.5;
  Scheme scheme = Scheme::IFRK4;
  bool linear_only = false;
  /// Accumulate B1(u, u) and B2(u, theta) at step resolution alongside the
  /// march and store them at the recorded nodes.
  bool track_bilinear = false;
  QuadratureRule rule = QuadratureRule::Exponential;
};

/// Raised on a non-finite state. `partial` holds the nodes recorded so far.
class SolverAborted : public Error {
public:
  SolverAborted(const std::string& what, Trajectory p) : Error(what), partial(std::move(p)) {}
  Trajectory partial;
};

/// Integrating-factor Runge-Kutta (Lawson) march of the mild form. The heat
/// factor is applied exactly to u and theta; buoyancy, advection and the
/// projection are explicit.
Trajectory march_solve(const InitialData& data, const MarchOptions& options);

struct CrossValidation {
  double u_l2 = 0.0;
  double u_linf = 0.0;
  double theta_l2 = 0.0;
  double theta_linf = 0.0;
  double max() const;
};

/// Largest relative L2 / Linf discrepancies at the nodes t > 0 (absolute
/// when the reference vanishes).
CrossValidation compare_trajectories(const Trajectory& reference, const Trajectory& other);

/// Picard (IEE) against marching (IE) on the same nodes of [0, T].
CrossValidation cross_validate(const InitialData& data, const PicardOptions& picard,
                               const MarchOptions& march);

}  // namespace bsq
