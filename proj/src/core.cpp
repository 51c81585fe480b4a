#include "averkit/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace averkit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::NodeOutOfRange: return "NodeOutOfRange";
    case ErrorKind::ZeroOutDegree: return "ZeroOutDegree";
    case ErrorKind::NotConnected: return "NotConnected";
    case ErrorKind::MixingCapExceeded: return "MixingCapExceeded";
    case ErrorKind::TooLargeForExhaustive: return "TooLargeForExhaustive";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::MonteCarloCapExceeded: return "MonteCarloCapExceeded";
    case ErrorKind::OverlappingGroups: return "OverlappingGroups";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::NotUndirected: return "NotUndirected";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::InvalidBlockStructure: return "InvalidBlockStructure";
    case ErrorKind::ModifiedGraphDisconnected: return "ModifiedGraphDisconnected";
    case ErrorKind::ConnectivityRetriesExhausted: return "ConnectivityRetriesExhausted";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

bool nearly_equal(double a, double b, double tol) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

WeightedDigraph WeightedDigraph::from_edges(std::size_t n,
                                            std::span<const Edge> edges) {
  WeightedDigraph g;
  g.out_.resize(n);
  for (const Edge& e : edges) {
    if (e.src >= n || e.dst >= n) {
      throw Error(ErrorKind::NodeOutOfRange,
                  "edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                      ") outside node range 0.." + std::to_string(n));
    }
    if (!std::isfinite(e.weight) || e.weight <= 0.0) {
      throw Error(ErrorKind::NegativeWeight,
                  "edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                      ") has non-positive weight " + std::to_string(e.weight));
    }
    g.out_[e.src].push_back({e.dst, e.weight});
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& arcs = g.out_[i];
    std::stable_sort(arcs.begin(), arcs.end(),
                     [](const Arc& a, const Arc& b) { return a.dst < b.dst; });
    auto dup = std::adjacent_find(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
      return a.dst == b.dst;
    });
    if (dup != arcs.end()) {
      throw Error(ErrorKind::DuplicateEdge, "duplicate edge (" + std::to_string(i) + "," +
                                                std::to_string(dup->dst) + ")");
    }
  }
  return g;
}

double WeightedDigraph::weight(NodeId i, NodeId j) const {
  const auto& arcs = out_.at(i);
  auto it = std::lower_bound(arcs.begin(), arcs.end(), j,
                             [](const Arc& a, NodeId v) { return a.dst < v; });
  return (it != arcs.end() && it->dst == j) ? it->weight : 0.0;
}

double WeightedDigraph::out_degree(NodeId i) const {
  double s = 0.0;
  for (const Arc& a : out_.at(i)) s += a.weight;
  return s;
}

Vector WeightedDigraph::out_degrees() const {
  Vector w(static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < size(); ++i) w[static_cast<Eigen::Index>(i)] = out_degree(static_cast<NodeId>(i));
  return w;
}

std::size_t WeightedDigraph::arc_count() const {
  std::size_t c = 0;
  for (const auto& arcs : out_) c += arcs.size();
  return c;
}

std::vector<Edge> WeightedDigraph::edges() const {
  std::vector<Edge> out;
  out.reserve(arc_count());
  for (std::size_t i = 0; i < size(); ++i) {
    for (const Arc& a : out_[i]) out.push_back({static_cast<NodeId>(i), a.dst, a.weight});
  }
  return out;
}

Matrix WeightedDigraph::dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  Matrix W = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < size(); ++i) {
    for (const Arc& a : out_[i]) W(static_cast<Eigen::Index>(i), a.dst) = a.weight;
  }
  return W;
}

bool operator==(const WeightedDigraph& a, const WeightedDigraph& b) {
  return a.size() == b.size() && a.edges() == b.edges();
}

WeightedDigraph ensure_positive_outdegree(const WeightedDigraph& g, double loop_weight) {
  if (!(loop_weight > 0.0) || !std::isfinite(loop_weight)) {
    throw Error(ErrorKind::InvalidArgument, "loop_weight must be positive and finite");
  }
  std::vector<Edge> edges = g.edges();
  bool changed = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.out_arcs(static_cast<NodeId>(i)).empty()) {
      edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i), loop_weight});
      changed = true;
    }
  }
  if (!changed) return g;
  return WeightedDigraph::from_edges(g.size(), edges);
}

DerivedMatrices derive_matrices(const Matrix& W, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "alpha must lie in [0, 1]");
  }
  if (W.rows() != W.cols()) {
    throw Error(ErrorKind::InvalidArgument, "weight matrix must be square");
  }
  if ((W.array() < 0.0).any()) {
    throw Error(ErrorKind::NegativeWeight, "weight matrix has negative entries");
  }
  DerivedMatrices m;
  m.alpha = alpha;
  m.W = W;
  m.w = W.rowwise().sum();
  for (Eigen::Index i = 0; i < m.w.size(); ++i) {
    if (!(m.w[i] > 0.0)) {
      throw Error(ErrorKind::ZeroOutDegree,
                  "node " + std::to_string(i) + " has zero out-degree");
    }
  }
  m.P = m.w.cwiseInverse().asDiagonal() * W;
  m.L = Matrix(m.w.asDiagonal()) - W;
  const auto n = W.rows();
  m.P_alpha = alpha * Matrix::Identity(n, n) + (1.0 - alpha) * m.P;
  return m;
}

DerivedMatrices derive_matrices(const WeightedDigraph& g, double alpha) {
  return derive_matrices(g.dense(), alpha);
}

GraphClass classify(const DerivedMatrices& m, const Tolerances& tol) {
  GraphClass c;
  const Matrix& W = m.W;
  const auto n = W.rows();
  c.undirected = true;
  c.reversible_pair_ok = true;
  for (Eigen::Index i = 0; i < n && (c.undirected || c.reversible_pair_ok); ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (!nearly_equal(W(i, j), W(j, i), tol.identity)) c.undirected = false;
      if (!nearly_equal(m.w[i] * m.P(i, j), m.w[j] * m.P(j, i), tol.identity)) {
        c.reversible_pair_ok = false;
      }
    }
  }
  const Vector out_deg = W.rowwise().sum();
  const Vector in_deg = W.colwise().sum().transpose();
  c.balanced = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!nearly_equal(out_deg[i], in_deg[i], tol.identity)) c.balanced = false;
  }
  if (c.undirected && !(c.balanced && c.reversible_pair_ok)) {
    throw Error(ErrorKind::InvalidArgument,
                "inconsistent classification: undirected graph failed balance or detailed balance");
  }
  return c;
}

GraphClass classify(const WeightedDigraph& g, const Tolerances& tol) {
  return classify(derive_matrices(g, 0.0), tol);
}

}  // namespace averkit
