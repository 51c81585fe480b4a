#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "averkit/components.hpp"
#include "averkit/core.hpp"
#include "averkit/regimes.hpp"

namespace averkit {

struct ErdosRenyiGraph {
  WeightedDigraph graph;
  double p = 0.0;
  bool connected = false;
  std::size_t edge_count = 0;  // undirected edges
};

/// Undirected unit-weight G(n, p) with p = min(1, c ln(n) / n); each pair
/// i < j is drawn once, in lexicographic order, from a stream keyed by seed.
ErdosRenyiGraph erdos_renyi(std::size_t n, double c, std::uint64_t seed);

/// d-dimensional torus with `side` points per axis and unit nearest-neighbor
/// edges. Node id is the mixed-radix index of the lattice point.
WeightedDigraph torus(std::size_t d, std::size_t side);

enum class Matching { Identity, Permuted };

struct MatchedCommunities {
  WeightedDigraph graph;
  TwoCommunitySpec spec;
  std::array<std::size_t, 2> internal_edges{};  // ER edges in U0, U1
  std::array<std::size_t, 2> attempts{};        // draws until connected
  std::vector<NodeId> matching;                 // U0 index -> U1 index
};

struct MatchedConfig {
  std::size_t m = 0;
  double omega = 2.0;
  double beta = 1.0;
  double gamma = 1.0;
  std::uint64_t seed = 0;
  Matching matching = Matching::Identity;
  std::size_t max_attempts = 100;
};

/// Two independent connected ER graphs on U0, U1 with p = omega ln(m) / m,
/// joined by a perfect matching of weight-beta links, plus weight-gamma
/// arcs U_h -> v_h. Each community is redrawn with fresh sub-seeds until it
/// is connected; throws ConnectivityRetriesExhausted after max_attempts.
MatchedCommunities matched_communities(const MatchedConfig& cfg);

/// Keeps W on rows of regular nodes, sets W~_ij = W_ji for i in S, j in R and
/// zeroes every S x S entry (sink self-loops included).
WeightedDigraph modified_tilde_graph(const WeightedDigraph& g, const Condensation& cond);

/// Subgraph induced by `keep` (in the given order), relabeled 0..k-1.
WeightedDigraph induced_subgraph(const WeightedDigraph& g, const std::vector<NodeId>& keep);

struct CommunityTildeGraph {
  WeightedDigraph graph;
  std::vector<NodeId> nodes;       // original ids, in new-id order
  std::vector<NodeId> stubborn;    // new ids of {v_h} and U_{1-h}
};

/// The per-community construction: drop v_{1-h} and the links inside
/// U_{1-h}, treat {v_h} and U_{1-h} as stubborn, then apply
/// modified_tilde_graph.
CommunityTildeGraph community_tilde_graph(const MatchedCommunities& mc, int h);

}  // namespace averkit
