#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "averkit/core.hpp"

namespace averkit {

struct Trajectory {
  std::vector<Vector> states;  // states[t] = P_alpha^t x0
  double alpha = 0.0;
  /// First t with ||x(t+1) - x(t)||_inf < tol; states then ends at t + 1.
  std::optional<std::size_t> converged_at;
};

/// Iterates x(t+1) = P_alpha x(t) by matrix-vector products for at most
/// t_max steps, stopping early once the sup-norm step falls below tol.
Trajectory simulate(const DerivedMatrices& m, const Vector& x0, std::size_t t_max, double tol);

/// Writes "t,x_0,...,x_{n-1}" followed by one row per recorded state.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Stationary distribution of a row-stochastic matrix with irreducible
/// support: power iteration on the lazy kernel (I + P)/2 until the l1 step
/// is below 1e-12, falling back to the direct solve when the iteration cap
/// is hit. Throws NotConnected when the support is reducible.
Vector stationary_distribution(const Matrix& P);

/// Direct solve of (P' - I) pi = 0 with one equation replaced by 1' pi = 1.
Vector stationary_distribution_direct(const Matrix& P);

/// Centrality vector pi' = pi' P of a connected graph.
Vector centrality(const DerivedMatrices& m);

inline double consensus_value(const Vector& pi, const Vector& x0) { return pi.dot(x0); }

struct MixingOptions {
  std::size_t t_cap = 1'000'000;
};

/// Worst-row l1 distance max_i sum_j |(P_alpha^t)_ij - pi_j|.
double worst_row_distance(const Matrix& power, const Vector& pi);

/// Smallest t with worst_row_distance(P_alpha^t, pi) <= 1/(2e), found by
/// multiplying out full matrix powers. Throws NotConnected for reducible
/// kernels and MixingCapExceeded when the cap is reached or the power
/// sequence provably cycles without mixing (periodic chains).
std::size_t mixing_time(const DerivedMatrices& m, const Vector& pi, const MixingOptions& opts = {});
std::size_t mixing_time(const Matrix& P_alpha, const Vector& pi, const MixingOptions& opts = {});

struct ConductanceResult {
  double phi = 0.0;
  std::vector<NodeId> argmin;  // lexicographically smallest minimizing subset
};

inline constexpr std::size_t kMaxExhaustiveNodes = 24;

/// Exhaustive minimum over nonempty proper subsets U of
/// sum_{i in U, j notin U} pi_i P_ij / (pi(U) pi(V \ U)).
/// Throws TooLargeForExhaustive above kMaxExhaustiveNodes nodes.
ConductanceResult conductance(const DerivedMatrices& m, const Vector& pi);
ConductanceResult conductance(const Matrix& P, const Vector& pi);

/// Bottleneck ratio of a single subset, evaluated directly.
double bottleneck_ratio(const Matrix& P, const Vector& pi, const std::vector<NodeId>& subset);

struct ConductanceBoundCheck {
  double lower = 0.0;           // (1 - 2/e) / phi
  double upper = 0.0;           // log(e^2 / pi_star) / phi^2
  bool lower_holds = false;
  bool upper_applicable = false;  // only asserted when phi <= 1
  bool upper_holds = false;

  bool holds() const { return lower_holds && (!upper_applicable || upper_holds); }
};

ConductanceBoundCheck check_conductance_bound(std::size_t tau_half, double phi, double pi_star);

/// Whether ||x(t) - 1 xbar||_inf <= ||x(0) - 1 xbar||_inf exp(-floor(t / tau))
/// at every recorded step, with xbar = pi' x(0). `slack` absorbs rounding.
bool check_convergence_envelope(const Trajectory& traj, const Vector& pi, std::size_t tau,
                                double slack = 1e-12);

}  // namespace averkit
