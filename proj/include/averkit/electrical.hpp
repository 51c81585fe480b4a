#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "averkit/components.hpp"
#include "averkit/core.hpp"

namespace averkit {

/// Result of checking that the graph restricted to its regular nodes is
/// undirected and connected.
struct RestrictionCheck {
  bool symmetric = true;
  bool connected = true;
  std::optional<std::pair<NodeId, NodeId>> asymmetric_pair;

  bool ok() const { return symmetric && connected; }
  explicit operator bool() const { return ok(); }
};

RestrictionCheck check_undirected_restriction(const WeightedDigraph& g, const Condensation& cond,
                                              const Tolerances& tol = {});

struct GluedGraph {
  WeightedDigraph graph;
  std::vector<NodeId> mapping;  // old node -> new node
};

struct GlueOptions {
  /// Make every arc incident to a merged node bidirectional, with weight
  /// max(W_uv, W_vu); used when sink sets are glued into terminals.
  bool symmetrize_merged = false;
};

/// Merges each group into one node. New ids follow the smallest old id of
/// each class; parallel arcs add up and arcs inside a group disappear.
/// Throws OverlappingGroups when a node appears in two groups.
GluedGraph glue(const WeightedDigraph& g, const std::vector<std::vector<NodeId>>& groups,
                const GlueOptions& opts = {});

/// Unit-voltage solve between node sets A (voltage 1) and B (voltage 0).
struct ResistanceSolution {
  double resistance = 0.0;
  Vector voltages;
  double outflow_a = 0.0;   // current leaving A
  double inflow_b = 0.0;    // current entering B
  double energy = 0.0;      // 1/2 sum_ij W_ij (y_i - y_j)^2
};

/// Throws NotUndirected, Disconnected, or InvalidArgument for empty or
/// overlapping terminal sets.
ResistanceSolution solve_unit_voltage(const WeightedDigraph& g, const std::vector<NodeId>& A,
                                      const std::vector<NodeId>& B, const Tolerances& tol = {});

double effective_resistance(const WeightedDigraph& g, const std::vector<NodeId>& A,
                            const std::vector<NodeId>& B, const Tolerances& tol = {});

/// 1/2 sum_ij W_ij (y_i - y_j)^2 over ordered pairs.
double dissipated_energy(const WeightedDigraph& g, const Vector& y);

struct ThompsonFlow {
  Matrix theta;            // theta_ij = W_ij (y_i - y_j) R
  double resistance = 0.0;
  double net_outflow = 0.0;   // out of A; 1 for a unit flow
  double dual_energy = 0.0;   // 1/2 sum theta_ij^2 / W_ij
  double max_interior_imbalance = 0.0;
};

ThompsonFlow thompson_flow(const WeightedDigraph& g, const std::vector<NodeId>& A,
                           const std::vector<NodeId>& B, const Tolerances& tol = {});

/// Net flow from U to its complement.
double flow_across_cut(const Matrix& theta, const std::vector<char>& in_u);

struct GreenMatrix {
  Matrix G;
  Vector eigenvalues;    // ascending, first one ~0
  Matrix eigenvectors;   // orthonormal columns
};

/// G = sum_{l >= 2} phi_l phi_l' / lambda_l from the symmetric
/// eigendecomposition of L. Throws NotUndirected, Disconnected, and
/// IllConditioned when lambda_2 < 1e-10.
GreenMatrix green_matrix(const WeightedDigraph& g, const Tolerances& tol = {});

inline double resistance_via_green(const GreenMatrix& green, NodeId h, NodeId j) {
  if (h == j) return 0.0;
  return green.G(h, h) - 2.0 * green.G(h, j) + green.G(j, j);
}

enum class ResistanceRoute { Green, Solve };

struct ResistanceEquilibrium {
  Vector x;
  Matrix H;                    // implied influence weights
  std::vector<double> terminal_resistance;  // R_{S_k <-> S_-k}
};

/// Equilibrium from effective resistances: for each sink k, glue S_k and
/// S_-k into terminals, then
///   H_ik = (R_{S_k,S_-k} + R_{i,S_-k} - R_{i,S_k}) / (2 R_{S_k,S_-k}),
///   x_i  = sum_k H_ik xbar_k.
/// Requires at least two sinks and a passing restriction check.
ResistanceEquilibrium equilibrium_via_resistances(const WeightedDigraph& g,
                                                  const Condensation& cond, const Vector& xbar,
                                                  ResistanceRoute route = ResistanceRoute::Green,
                                                  const Tolerances& tol = {});

/// The undirected network obtained by gluing `terminals` (each a node set)
/// with incident arcs made bidirectional.
GluedGraph terminal_network(const WeightedDigraph& g,
                            const std::vector<std::vector<NodeId>>& terminals);

struct AddEdge {
  NodeId i = 0, j = 0;
  double weight = 1.0;
};
struct IncreaseWeight {
  NodeId i = 0, j = 0;
  double delta = 1.0;
};
struct GluePair {
  NodeId i = 0, j = 0;
};
using RayleighModification = std::variant<AddEdge, IncreaseWeight, GluePair>;

struct RayleighCheck {
  double before = 0.0;
  double after = 0.0;
  bool ok = false;  // after <= before + 1e-12
};

/// Applies an undirected modification and compares R_{A<->B}.
RayleighCheck check_rayleigh(const WeightedDigraph& g, const std::vector<NodeId>& A,
                             const std::vector<NodeId>& B, const RayleighModification& mod);

/// Applies the modification alone (symmetric in i, j).
GluedGraph apply_modification(const WeightedDigraph& g, const RayleighModification& mod);

}  // namespace averkit
