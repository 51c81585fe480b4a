#pragma once

#include <cstddef>
#include <vector>

#include "averkit/core.hpp"

namespace averkit {

/// Strongly connected components of the support of W, the reachability
/// order between them, and the sink components.
///
/// Components are listed by their smallest node id; each component's node
/// list is sorted. `successors[k]` holds the components reached by a single
/// arc out of component k (no self-references), so the component graph is a
/// DAG and sinks are exactly the components with no successors.
struct Condensation {
  std::vector<std::vector<NodeId>> components;
  std::vector<std::size_t> component_of;
  std::vector<std::vector<std::size_t>> successors;
  std::vector<std::size_t> sinks;    // ascending component indices
  std::vector<NodeId> regular;       // nodes outside every sink, ascending
  std::vector<int> sink_index_of;    // node -> sink position k, or -1

  std::size_t node_count() const noexcept { return component_of.size(); }
  std::size_t sink_count() const noexcept { return sinks.size(); }
  const std::vector<NodeId>& sink_nodes(std::size_t k) const { return components[sinks[k]]; }
  bool is_sink_node(NodeId i) const { return sink_index_of[i] >= 0; }

  /// Whether a path leads from component `from` into component `to`
  /// (reflexive).
  bool reaches(std::size_t from, std::size_t to) const;
};

Condensation condense(const WeightedDigraph& g);

/// Condensation of the support {(i, j) : M_ij > 0} of a square matrix.
Condensation condense(const Matrix& support);

/// Condensation of an explicit adjacency list.
Condensation condense(const std::vector<std::vector<NodeId>>& adjacency);

bool is_connected(const WeightedDigraph& g);
bool is_connected(const Matrix& support);

/// Singleton sinks: nodes whose only outgoing arc (if any) is a self-loop.
std::vector<NodeId> stubborn_nodes(const Condensation& cond);

}  // namespace averkit
