#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <utility>

#include "averkit/components.hpp"
#include "averkit/core.hpp"

namespace averkit {

/// Two stubborn nodes v0, v1 and communities U0 (n0 nodes), U1 (n1 nodes).
/// Every U_h node links to v_h with weight gamma; interior weights are the
/// blocks [[A, B], [C, D]] with A, D symmetric, C = B', B 1 = beta0 1 and
/// C 1 = beta1 1.
struct TwoCommunitySpec {
  std::size_t n0 = 0;
  std::size_t n1 = 0;
  double gamma = 1.0;
  double beta0 = 1.0;
  double beta1 = 1.0;
  Matrix A, B, C, D;

  std::size_t node_count() const { return n0 + n1 + 2; }
  NodeId v0() const { return 0; }
  NodeId v1() const { return static_cast<NodeId>(n0 + n1 + 1); }
  NodeId u0(std::size_t a) const { return static_cast<NodeId>(1 + a); }
  NodeId u1(std::size_t b) const { return static_cast<NodeId>(1 + n0 + b); }
};

/// Throws InvalidBlockStructure when the invariants above are violated.
void validate(const TwoCommunitySpec& spec, const Tolerances& tol = {});

/// Node order (v0, U0, U1, v1); v_h carry a weight-gamma self-loop.
WeightedDigraph build_two_community(const TwoCommunitySpec& spec);

/// Community mean states (y0, y1).
std::pair<double, double> community_means(const Vector& x_star, const TwoCommunitySpec& spec);

struct Proposition3Bounds {
  std::array<double, 2> bound_h{};  // |h - y_h| <= (1 + n_h / n_{1-h} + gamma / beta_h)^-1
  double bound_gap = 0.0;           // y1 - y0 <= (1 + beta0 / gamma + beta1 / gamma)^-1

  /// Whether (y0, y1), computed with stubborn values (0, 1), satisfies both.
  bool satisfied_by(double y0, double y1, double slack = 1e-12) const;
};

Proposition3Bounds proposition3_bounds(const TwoCommunitySpec& spec);

struct RegimeMetrics {
  double epsilon = 0.0;
  double homog_fraction = 0.0;  // max over centers c of #{|x_i - c| < eps} / n
  double homog_center = 0.0;    // a maximizing center
  double polar_fraction = 0.0;  // #{min_k |x_i - xbar_k| < eps} / n
  std::optional<double> y0, y1;
  std::optional<double> fluidity;
  std::optional<double> bound_thm4;
};

/// Fractions of equilibrium states near one common value and near some sink
/// value. The homogeneity maximum is exact: sorted states are swept with a
/// window of width 2 eps anchored at each state.
RegimeMetrics regime_metrics(const Vector& x_star, const Vector& xbar, double epsilon);

/// psi(y) = y log(e^2 / y), with psi(0) = 0.
double psi(double y);

struct Theorem4Result {
  double bound = 0.0;
  double fluidity = 0.0;        // tau_tilde * pi_tilde(S)
  double empirical_fraction = 0.0;
  bool holds = false;
  std::size_t tau_tilde = 0;
  double pi_tilde_sinks = 0.0;
  double pi_tilde_min = 0.0;
  double delta = 0.0;
  double center = 0.0;          // pi_tilde' x
};

/// Highly-fluid bound: builds the modified graph (sink links made
/// bidirectional), its centrality and lazy mixing time, and compares
/// #{|x_i - pi_tilde' x| >= eps} / n with
/// Delta / (eps n pi_tilde_min) * psi(tau_tilde pi_tilde(S)).
/// The equilibrium x is the block-solve profile with sink values xbar.
/// Throws ModifiedGraphDisconnected when the modified graph is reducible.
Theorem4Result theorem4_bound(const WeightedDigraph& g, const Condensation& cond,
                              const Vector& xbar, double epsilon);

/// Same, with a precomputed equilibrium.
Theorem4Result theorem4_bound(const WeightedDigraph& g, const Condensation& cond,
                              const Vector& xbar, const Vector& x_star, double epsilon);

struct ConservationCheck {
  double inverse_resistance = 0.0;  // 1 / R_{v0 <-> v1}
  double gamma_sum_u0 = 0.0;        // gamma sum_{U0} x_i
  double cross_flow = 0.0;          // sum_{i in U0, j in U1} W_ij (x_j - x_i)
  double gamma_sum_u1 = 0.0;        // gamma sum_{U1} (1 - x_j)
  double resistance = 0.0;
  double resistance_lower_bound = 0.0;  // 1/(gamma n0) + 1/(n0 beta0) + 1/(gamma n1)
  bool identity_ok = false;
  bool bound_ok = false;

  bool ok() const { return identity_ok && bound_ok; }
};

/// Checks that the current through v0 <-> v1 can be read off either
/// community or the cross links, given the equilibrium with stubborn values
/// (0, 1). Throws NotUndirected if the interior is not symmetric.
ConservationCheck conservation_identity_check(const WeightedDigraph& g, const Vector& x_star,
                                              const TwoCommunitySpec& spec, double tol = 1e-8);

}  // namespace averkit
