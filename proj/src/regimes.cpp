#include "averkit/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "averkit/dynamics.hpp"
#include "averkit/electrical.hpp"
#include "averkit/equilibrium.hpp"
#include "averkit/generators.hpp"

namespace averkit {

namespace {

[[noreturn]] void bad_block(const std::string& why) {
  throw Error(ErrorKind::InvalidBlockStructure, why);
}

bool symmetric(const Matrix& M, double tol) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < M.cols(); ++j) {
      if (!nearly_equal(M(i, j), M(j, i), tol)) return false;
    }
  }
  return true;
}

}  // namespace

void validate(const TwoCommunitySpec& spec, const Tolerances& tol) {
  const auto n0 = static_cast<Eigen::Index>(spec.n0);
  const auto n1 = static_cast<Eigen::Index>(spec.n1);
  if (spec.n0 == 0 || spec.n1 == 0) bad_block("both communities need at least one node");
  if (!(spec.gamma > 0.0) || !(spec.beta0 > 0.0) || !(spec.beta1 > 0.0)) {
    bad_block("gamma, beta0 and beta1 must be positive");
  }
  if (spec.A.rows() != n0 || spec.A.cols() != n0) bad_block("A must be n0 x n0");
  if (spec.B.rows() != n0 || spec.B.cols() != n1) bad_block("B must be n0 x n1");
  if (spec.C.rows() != n1 || spec.C.cols() != n0) bad_block("C must be n1 x n0");
  if (spec.D.rows() != n1 || spec.D.cols() != n1) bad_block("D must be n1 x n1");
  for (const Matrix* M : {&spec.A, &spec.B, &spec.C, &spec.D}) {
    if ((M->array() < 0.0).any() || !M->allFinite()) bad_block("blocks must be finite and nonnegative");
  }
  if (!symmetric(spec.A, tol.identity)) bad_block("A is not symmetric");
  if (!symmetric(spec.D, tol.identity)) bad_block("D is not symmetric");
  for (Eigen::Index i = 0; i < n0; ++i) {
    for (Eigen::Index j = 0; j < n1; ++j) {
      if (!nearly_equal(spec.B(i, j), spec.C(j, i), tol.identity)) bad_block("C is not B'");
    }
  }
  for (Eigen::Index i = 0; i < n0; ++i) {
    if (!nearly_equal(spec.B.row(i).sum(), spec.beta0, tol.identity)) {
      bad_block("row " + std::to_string(i) + " of B does not sum to beta0");
    }
  }
  for (Eigen::Index i = 0; i < n1; ++i) {
    if (!nearly_equal(spec.C.row(i).sum(), spec.beta1, tol.identity)) {
      bad_block("row " + std::to_string(i) + " of C does not sum to beta1");
    }
  }
}

WeightedDigraph build_two_community(const TwoCommunitySpec& spec) {
  validate(spec);
  std::vector<Edge> edges;
  const NodeId v0 = spec.v0(), v1 = spec.v1();
  edges.push_back({v0, v0, spec.gamma});
  auto add_block = [&](const Matrix& M, auto row_id, auto col_id) {
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      for (Eigen::Index j = 0; j < M.cols(); ++j) {
        if (M(i, j) > 0.0) {
          edges.push_back({row_id(static_cast<std::size_t>(i)), col_id(static_cast<std::size_t>(j)), M(i, j)});
        }
      }
    }
  };
  auto u0 = [&](std::size_t a) { return spec.u0(a); };
  auto u1 = [&](std::size_t b) { return spec.u1(b); };
  for (std::size_t a = 0; a < spec.n0; ++a) edges.push_back({spec.u0(a), v0, spec.gamma});
  add_block(spec.A, u0, u0);
  add_block(spec.B, u0, u1);
  add_block(spec.C, u1, u0);
  add_block(spec.D, u1, u1);
  for (std::size_t b = 0; b < spec.n1; ++b) edges.push_back({spec.u1(b), v1, spec.gamma});
  edges.push_back({v1, v1, spec.gamma});
  return WeightedDigraph::from_edges(spec.node_count(), edges);
}

std::pair<double, double> community_means(const Vector& x_star, const TwoCommunitySpec& spec) {
  if (static_cast<std::size_t>(x_star.size()) != spec.node_count()) {
    throw Error(ErrorKind::InvalidArgument, "x_star length does not match the two-community graph");
  }
  const double y0 = x_star.segment(1, static_cast<Eigen::Index>(spec.n0)).mean();
  const double y1 = x_star.segment(static_cast<Eigen::Index>(1 + spec.n0), static_cast<Eigen::Index>(spec.n1)).mean();
  return {y0, y1};
}

bool Proposition3Bounds::satisfied_by(double y0, double y1, double slack) const {
  return std::abs(0.0 - y0) <= bound_h[0] + slack && std::abs(1.0 - y1) <= bound_h[1] + slack &&
         y1 - y0 <= bound_gap + slack;
}

Proposition3Bounds proposition3_bounds(const TwoCommunitySpec& spec) {
  validate(spec);
  const double n0 = static_cast<double>(spec.n0);
  const double n1 = static_cast<double>(spec.n1);
  Proposition3Bounds b;
  b.bound_h[0] = 1.0 / (1.0 + n0 / n1 + spec.gamma / spec.beta0);
  b.bound_h[1] = 1.0 / (1.0 + n1 / n0 + spec.gamma / spec.beta1);
  b.bound_gap = 1.0 / (1.0 + spec.beta0 / spec.gamma + spec.beta1 / spec.gamma);
  return b;
}

RegimeMetrics regime_metrics(const Vector& x_star, const Vector& xbar, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  const auto n = static_cast<std::size_t>(x_star.size());
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty state vector");
  RegimeMetrics out;
  out.epsilon = epsilon;

  std::vector<double> x(x_star.data(), x_star.data() + n);
  std::sort(x.begin(), x.end());
  // Points fit in an open band of half-width eps iff their spread is < 2 eps;
  // the 1e-12 margin keeps exact-boundary spreads from counting via rounding.
  const double width = 2.0 * epsilon - 1e-12 * std::max(1.0, 2.0 * epsilon);
  std::size_t best = 0, j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    j = std::max(j, i);
    while (j < n && x[j] - x[i] < width) ++j;
    if (j - i > best) {
      best = j - i;
      out.homog_center = 0.5 * (x[i] + x[j - 1]);
    }
  }
  out.homog_fraction = static_cast<double>(best) / static_cast<double>(n);

  std::size_t polar = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < xbar.size(); ++k) {
      nearest = std::min(nearest, std::abs(x_star[static_cast<Eigen::Index>(i)] - xbar[k]));
    }
    if (nearest < epsilon) ++polar;
  }
  out.polar_fraction = static_cast<double>(polar) / static_cast<double>(n);
  return out;
}

double psi(double y) {
  if (y <= 0.0) return 0.0;
  return y * (2.0 - std::log(y));
}

Theorem4Result theorem4_bound(const WeightedDigraph& g, const Condensation& cond,
                              const Vector& xbar, const Vector& x_star, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  if (static_cast<std::size_t>(xbar.size()) != cond.sink_count()) {
    throw Error(ErrorKind::InvalidArgument, "xbar length does not match sink count");
  }
  const WeightedDigraph tilde = modified_tilde_graph(g, cond);
  if (!is_connected(tilde)) {
    throw Error(ErrorKind::ModifiedGraphDisconnected, "modified graph is not connected");
  }
  const DerivedMatrices mt = derive_matrices(tilde, 0.5);
  const Vector pi = centrality(mt);

  Theorem4Result r;
  r.tau_tilde = mixing_time(mt, pi);
  r.pi_tilde_min = pi.minCoeff();
  for (std::size_t c : cond.sinks) {
    for (NodeId v : cond.components[c]) r.pi_tilde_sinks += pi[v];
  }
  r.fluidity = static_cast<double>(r.tau_tilde) * r.pi_tilde_sinks;
  r.delta = xbar.maxCoeff() - xbar.minCoeff();
  const double n = static_cast<double>(g.size());
  r.bound = r.delta == 0.0 ? 0.0 : r.delta / (epsilon * n * r.pi_tilde_min) * psi(r.fluidity);
  r.center = pi.dot(x_star);
  std::size_t far = 0;
  for (Eigen::Index i = 0; i < x_star.size(); ++i) {
    if (std::abs(x_star[i] - r.center) >= epsilon) ++far;
  }
  r.empirical_fraction = static_cast<double>(far) / n;
  r.holds = r.empirical_fraction <= r.bound;
  return r;
}

Theorem4Result theorem4_bound(const WeightedDigraph& g, const Condensation& cond,
                              const Vector& xbar, double epsilon) {
  const DerivedMatrices m = derive_matrices(g, 0.5);
  const Matrix H = influence_matrix(cond, m, BlockSolve{}).H;
  return theorem4_bound(g, cond, xbar, H * xbar, epsilon);
}

ConservationCheck conservation_identity_check(const WeightedDigraph& g, const Vector& x_star,
                                              const TwoCommunitySpec& spec, double tol) {
  if (g.size() != spec.node_count() || static_cast<std::size_t>(x_star.size()) != spec.node_count()) {
    throw Error(ErrorKind::InvalidArgument, "graph, state and spec sizes disagree");
  }
  const Condensation cond = condense(g);
  const RestrictionCheck gate = check_undirected_restriction(g, cond);
  if (!gate.symmetric) {
    throw Error(ErrorKind::NotUndirected, "two-community interior is not undirected");
  }
  ConservationCheck c;
  const WeightedDigraph net = modified_tilde_graph(g, cond);
  c.resistance = effective_resistance(net, {spec.v0()}, {spec.v1()});
  c.inverse_resistance = 1.0 / c.resistance;

  for (std::size_t a = 0; a < spec.n0; ++a) c.gamma_sum_u0 += spec.gamma * x_star[spec.u0(a)];
  for (std::size_t b = 0; b < spec.n1; ++b) c.gamma_sum_u1 += spec.gamma * (1.0 - x_star[spec.u1(b)]);
  for (std::size_t a = 0; a < spec.n0; ++a) {
    const NodeId i = spec.u0(a);
    for (const Arc& arc : g.out_arcs(i)) {
      if (arc.dst >= spec.u1(0) && arc.dst < spec.v1()) c.cross_flow += arc.weight * (x_star[arc.dst] - x_star[i]);
    }
  }
  c.identity_ok = nearly_equal(c.gamma_sum_u0, c.inverse_resistance, tol) &&
                  nearly_equal(c.cross_flow, c.inverse_resistance, tol) &&
                  nearly_equal(c.gamma_sum_u1, c.inverse_resistance, tol);
  const double n0 = static_cast<double>(spec.n0), n1 = static_cast<double>(spec.n1);
  c.resistance_lower_bound = 1.0 / (spec.gamma * n0) + 1.0 / (n0 * spec.beta0) + 1.0 / (spec.gamma * n1);
  c.bound_ok = c.resistance >= c.resistance_lower_bound * (1.0 - tol);
  return c;
}

}  // namespace averkit
