#include "averkit/generators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "averkit/parallel.hpp"

namespace averkit {

namespace {

constexpr std::uint64_t kErStream = 0x45524447ULL;      // "ERDG"
constexpr std::uint64_t kMatchStream = 0x4d415443ULL;   // "MATC"

void add_undirected(std::vector<Edge>& edges, NodeId i, NodeId j, double w) {
  edges.push_back({i, j, w});
  edges.push_back({j, i, w});
}

}  // namespace

ErdosRenyiGraph erdos_renyi(std::size_t n, double c, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "Erdos-Renyi needs n >= 2");
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "Erdos-Renyi needs c > 0");
  ErdosRenyiGraph out;
  out.p = std::clamp(c * std::log(static_cast<double>(n)) / static_cast<double>(n), 0.0, 1.0);
  Rng rng = make_rng(seed, {kErStream});
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (uniform01(rng) < out.p) {
        add_undirected(edges, static_cast<NodeId>(i), static_cast<NodeId>(j), 1.0);
        ++out.edge_count;
      }
    }
  }
  out.graph = WeightedDigraph::from_edges(n, edges);
  out.connected = is_connected(out.graph);
  return out;
}

WeightedDigraph torus(std::size_t d, std::size_t side) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "torus needs d >= 1");
  if (side < 3) throw Error(ErrorKind::InvalidArgument, "torus needs side >= 3");
  std::size_t n = 1;
  for (std::size_t k = 0; k < d; ++k) n *= side;
  std::vector<Edge> edges;
  edges.reserve(2 * d * n);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t stride = 1;
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t coord = (v / stride) % side;
      const std::size_t up = v - coord * stride + ((coord + 1) % side) * stride;
      const std::size_t down = v - coord * stride + ((coord + side - 1) % side) * stride;
      edges.push_back({static_cast<NodeId>(v), static_cast<NodeId>(up), 1.0});
      edges.push_back({static_cast<NodeId>(v), static_cast<NodeId>(down), 1.0});
      stride *= side;
    }
  }
  return WeightedDigraph::from_edges(n, edges);
}

MatchedCommunities matched_communities(const MatchedConfig& cfg) {
  if (cfg.m < 2) throw Error(ErrorKind::InvalidArgument, "matched communities need m >= 2");
  if (!(cfg.omega > 1.0)) throw Error(ErrorKind::InvalidArgument, "omega must exceed 1");
  if (!(cfg.beta > 0.0) || !(cfg.gamma > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "beta and gamma must be positive");
  }
  const std::size_t m = cfg.m;
  MatchedCommunities out;
  std::array<WeightedDigraph, 2> community;
  for (int h = 0; h < 2; ++h) {
    bool ok = false;
    for (std::size_t a = 0; a < cfg.max_attempts && !ok; ++a) {
      ErdosRenyiGraph er = erdos_renyi(m, cfg.omega, derive_seed(cfg.seed, {static_cast<std::uint64_t>(h), a}));
      out.attempts[static_cast<std::size_t>(h)] = a + 1;
      if (er.connected) {
        ok = true;
        out.internal_edges[static_cast<std::size_t>(h)] = er.edge_count;
        community[static_cast<std::size_t>(h)] = std::move(er.graph);
      }
    }
    if (!ok) {
      throw Error(ErrorKind::ConnectivityRetriesExhausted,
                  "community " + std::to_string(h) + " not connected after " +
                      std::to_string(cfg.max_attempts) + " draws");
    }
  }

  out.matching.resize(m);
  for (std::size_t a = 0; a < m; ++a) out.matching[a] = static_cast<NodeId>(a);
  if (cfg.matching == Matching::Permuted) {
    Rng rng = make_rng(cfg.seed, {kMatchStream});
    for (std::size_t a = m - 1; a > 0; --a) {
      const auto b = static_cast<std::size_t>(rng() % (a + 1));
      std::swap(out.matching[a], out.matching[b]);
    }
  }

  TwoCommunitySpec& spec = out.spec;
  spec.n0 = spec.n1 = m;
  spec.gamma = cfg.gamma;
  spec.beta0 = spec.beta1 = cfg.beta;
  spec.A = community[0].dense();
  spec.D = community[1].dense();
  const auto mi = static_cast<Eigen::Index>(m);
  spec.B = Matrix::Zero(mi, mi);
  for (std::size_t a = 0; a < m; ++a) spec.B(static_cast<Eigen::Index>(a), out.matching[a]) = cfg.beta;
  spec.C = spec.B.transpose();
  out.graph = build_two_community(spec);
  return out;
}

WeightedDigraph modified_tilde_graph(const WeightedDigraph& g, const Condensation& cond) {
  if (cond.sink_count() == 0) throw Error(ErrorKind::InvalidArgument, "graph has no sink");
  std::vector<Edge> edges;
  for (NodeId i : cond.regular) {
    for (const Arc& a : g.out_arcs(i)) {
      edges.push_back({i, a.dst, a.weight});
      if (cond.is_sink_node(a.dst)) edges.push_back({a.dst, i, a.weight});
    }
  }
  return WeightedDigraph::from_edges(g.size(), edges);
}

WeightedDigraph induced_subgraph(const WeightedDigraph& g, const std::vector<NodeId>& keep) {
  std::vector<long> position(g.size(), -1);
  for (std::size_t a = 0; a < keep.size(); ++a) {
    if (keep[a] >= g.size()) throw Error(ErrorKind::NodeOutOfRange, "induced subgraph node out of range");
    position[keep[a]] = static_cast<long>(a);
  }
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < keep.size(); ++a) {
    for (const Arc& arc : g.out_arcs(keep[a])) {
      if (position[arc.dst] >= 0) {
        edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(position[arc.dst]), arc.weight});
      }
    }
  }
  return WeightedDigraph::from_edges(keep.size(), edges);
}

CommunityTildeGraph community_tilde_graph(const MatchedCommunities& mc, int h) {
  if (h != 0 && h != 1) throw Error(ErrorKind::InvalidArgument, "community index must be 0 or 1");
  const TwoCommunitySpec& spec = mc.spec;
  const NodeId dropped = h == 0 ? spec.v1() : spec.v0();
  const NodeId own_sink = h == 0 ? spec.v0() : spec.v1();
  std::vector<char> other(spec.node_count(), 0);
  const std::size_t n_other = h == 0 ? spec.n1 : spec.n0;
  for (std::size_t b = 0; b < n_other; ++b) other[h == 0 ? spec.u1(b) : spec.u0(b)] = 1;

  CommunityTildeGraph out;
  for (std::size_t v = 0; v < spec.node_count(); ++v) {
    if (v != dropped) out.nodes.push_back(static_cast<NodeId>(v));
  }
  const WeightedDigraph sub = induced_subgraph(mc.graph, out.nodes);
  // Stubborn U_{1-h}: drop every arc leaving those nodes.
  std::vector<Edge> edges;
  for (const Edge& e : sub.edges()) {
    if (!other[out.nodes[e.src]]) edges.push_back(e);
  }
  const WeightedDigraph hat = WeightedDigraph::from_edges(out.nodes.size(), edges);
  const Condensation cond = condense(hat);
  out.graph = modified_tilde_graph(hat, cond);
  for (std::size_t a = 0; a < out.nodes.size(); ++a) {
    if (out.nodes[a] == own_sink || other[out.nodes[a]]) out.stubborn.push_back(static_cast<NodeId>(a));
  }
  return out;
}

}  // namespace averkit
