#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "averkit/error.hpp"

namespace averkit {

using NodeId = std::uint32_t;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Numeric tolerances shared by the analysis routines.
struct Tolerances {
  double identity = 1e-12;  // exact linear identities (row sums, symmetry)
  double solved = 1e-9;     // quantities obtained from a linear solve
};

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Arc {
  NodeId dst = 0;
  double weight = 0.0;
};

/// Nonnegative weighted digraph on nodes 0..n-1. An arc (i, j) exists iff
/// W_ij > 0; W_ii is a self-loop. Arcs are kept per source sorted by target,
/// so storage is sparse at every size and dense views are built on demand.
class WeightedDigraph {
 public:
  WeightedDigraph() = default;

  /// Builds W from an edge list. Throws NodeOutOfRange, NegativeWeight
  /// (any weight that is not finite and strictly positive) or DuplicateEdge.
  static WeightedDigraph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t size() const noexcept { return out_.size(); }
  std::span<const Arc> out_arcs(NodeId i) const { return out_[i]; }
  double weight(NodeId i, NodeId j) const;
  double out_degree(NodeId i) const;
  Vector out_degrees() const;
  std::size_t arc_count() const;

  /// Edge list sorted by (src, dst); from_edges(size(), edges()) reproduces
  /// the graph exactly.
  std::vector<Edge> edges() const;
  Matrix dense() const;

  friend bool operator==(const WeightedDigraph& a, const WeightedDigraph& b);

 private:
  std::vector<std::vector<Arc>> out_;
};

/// Adds a self-loop of weight `loop_weight` at every node whose out-degree is
/// zero. Nodes that already have outgoing weight are left untouched.
WeightedDigraph ensure_positive_outdegree(const WeightedDigraph& g,
                                          double loop_weight = 1.0);

/// Out-degrees w = W 1, the row-stochastic P = D^-1 W, the Laplacian
/// L = D - W and the lazy kernel P_alpha = alpha I + (1 - alpha) P.
struct DerivedMatrices {
  double alpha = 0.0;
  Vector w;
  Matrix W;
  Matrix P;
  Matrix L;
  Matrix P_alpha;

  std::size_t size() const noexcept { return static_cast<std::size_t>(w.size()); }
  Matrix D() const { return w.asDiagonal(); }
};

/// Throws ZeroOutDegree when some node has no outgoing weight and
/// InvalidArgument when alpha is outside [0, 1].
DerivedMatrices derive_matrices(const WeightedDigraph& g, double alpha);

/// Same construction from an explicit nonnegative weight matrix.
DerivedMatrices derive_matrices(const Matrix& W, double alpha);

struct GraphClass {
  bool undirected = false;
  bool balanced = false;
  bool reversible_pair_ok = false;  // detailed balance w_i P_ij = w_j P_ji
};

GraphClass classify(const DerivedMatrices& m, const Tolerances& tol = {});
GraphClass classify(const WeightedDigraph& g, const Tolerances& tol = {});

/// Whether |a - b| <= tol * max(1, |a|, |b|).
bool nearly_equal(double a, double b, double tol);

}  // namespace averkit
