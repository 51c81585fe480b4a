#include "averkit/electrical.hpp"

#include <algorithm>
#include <map>
#include <string>

#include <Eigen/Eigenvalues>

namespace averkit {

namespace {

std::string pair_text(NodeId i, NodeId j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

std::optional<std::pair<NodeId, NodeId>> first_asymmetric_pair(const WeightedDigraph& g,
                                                               const std::vector<char>* mask,
                                                               double tol) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    for (const Arc& a : g.out_arcs(static_cast<NodeId>(i))) {
      if (mask && !(*mask)[a.dst]) continue;
      if (!nearly_equal(a.weight, g.weight(a.dst, static_cast<NodeId>(i)), tol)) {
        return std::pair{static_cast<NodeId>(i), a.dst};
      }
    }
  }
  return std::nullopt;
}

// Connectivity of the undirected support restricted to `mask`.
bool masked_connected(const WeightedDigraph& g, const std::vector<char>& mask) {
  const std::size_t n = g.size();
  std::vector<std::vector<NodeId>> adj(n);
  std::size_t first = n, members = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    ++members;
    if (first == n) first = i;
    for (const Arc& a : g.out_arcs(static_cast<NodeId>(i))) {
      if (!mask[a.dst]) continue;
      adj[i].push_back(a.dst);
      adj[a.dst].push_back(static_cast<NodeId>(i));
    }
  }
  if (members == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{static_cast<NodeId>(first)};
  seen[first] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == members;
}

void require_undirected_connected(const WeightedDigraph& g, const Tolerances& tol) {
  if (auto bad = first_asymmetric_pair(g, nullptr, tol.identity)) {
    throw Error(ErrorKind::NotUndirected,
                "graph is not undirected: asymmetric pair " + pair_text(bad->first, bad->second));
  }
  if (!masked_connected(g, std::vector<char>(g.size(), 1))) {
    throw Error(ErrorKind::Disconnected, "graph is not connected");
  }
}

std::vector<char> membership(std::size_t n, const std::vector<NodeId>& nodes, const char* what) {
  if (nodes.empty()) throw Error(ErrorKind::InvalidArgument, std::string(what) + " is empty");
  std::vector<char> in(n, 0);
  for (NodeId v : nodes) {
    if (v >= n) throw Error(ErrorKind::NodeOutOfRange, std::string(what) + " contains node " + std::to_string(v));
    in[v] = 1;
  }
  return in;
}

std::vector<NodeId> map_nodes(const std::vector<NodeId>& nodes, const std::vector<NodeId>& mapping) {
  std::vector<NodeId> out;
  for (NodeId v : nodes) out.push_back(mapping[v]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

RestrictionCheck check_undirected_restriction(const WeightedDigraph& g, const Condensation& cond,
                                              const Tolerances& tol) {
  RestrictionCheck check;
  std::vector<char> in_r(g.size(), 0);
  for (NodeId v : cond.regular) in_r[v] = 1;
  check.asymmetric_pair = first_asymmetric_pair(g, &in_r, tol.identity);
  check.symmetric = !check.asymmetric_pair.has_value();
  check.connected = masked_connected(g, in_r);
  return check;
}

GluedGraph glue(const WeightedDigraph& g, const std::vector<std::vector<NodeId>>& groups,
                const GlueOptions& opts) {
  const std::size_t n = g.size();
  std::vector<int> group_of(n, -1);
  for (std::size_t k = 0; k < groups.size(); ++k) {
    for (NodeId v : groups[k]) {
      if (v >= n) throw Error(ErrorKind::NodeOutOfRange, "glue group contains node " + std::to_string(v));
      if (group_of[v] >= 0 && group_of[v] != static_cast<int>(k)) {
        throw Error(ErrorKind::OverlappingGroups, "node " + std::to_string(v) + " is in two groups");
      }
      group_of[v] = static_cast<int>(k);
    }
  }
  // Representative = smallest member; new ids follow representatives.
  std::vector<NodeId> rep(n);
  std::vector<NodeId> group_rep(groups.size(), static_cast<NodeId>(n));
  for (std::size_t v = 0; v < n; ++v) {
    if (group_of[v] >= 0) {
      auto& r = group_rep[static_cast<std::size_t>(group_of[v])];
      r = std::min(r, static_cast<NodeId>(v));
    }
  }
  std::vector<char> is_rep(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    rep[v] = group_of[v] >= 0 ? group_rep[static_cast<std::size_t>(group_of[v])] : static_cast<NodeId>(v);
    is_rep[rep[v]] = 1;
  }
  std::vector<NodeId> new_id(n, 0);
  NodeId next = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (is_rep[v]) new_id[v] = next++;
  }
  GluedGraph out;
  out.mapping.resize(n);
  for (std::size_t v = 0; v < n; ++v) out.mapping[v] = new_id[rep[v]];

  std::map<std::pair<NodeId, NodeId>, double> acc;
  for (std::size_t u = 0; u < n; ++u) {
    for (const Arc& a : g.out_arcs(static_cast<NodeId>(u))) {
      const bool same_group = group_of[u] >= 0 && group_of[u] == group_of[a.dst];
      if (same_group && a.dst != u) continue;
      acc[{out.mapping[u], out.mapping[a.dst]}] += a.weight;
    }
  }
  if (opts.symmetrize_merged) {
    std::vector<char> merged(next, 0);
    for (std::size_t v = 0; v < n; ++v) {
      if (group_of[v] >= 0) merged[out.mapping[v]] = 1;
    }
    std::map<std::pair<NodeId, NodeId>, double> sym = acc;
    for (const auto& [key, w] : acc) {
      const auto [u, v] = key;
      if (u == v || !(merged[u] || merged[v])) continue;
      auto rev = acc.find({v, u});
      const double both = std::max(w, rev == acc.end() ? 0.0 : rev->second);
      sym[{u, v}] = both;
      sym[{v, u}] = both;
    }
    acc = std::move(sym);
  }
  std::vector<Edge> edges;
  edges.reserve(acc.size());
  for (const auto& [key, w] : acc) edges.push_back({key.first, key.second, w});
  out.graph = WeightedDigraph::from_edges(next, edges);
  return out;
}

double dissipated_energy(const WeightedDigraph& g, const Vector& y) {
  double e = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (const Arc& a : g.out_arcs(static_cast<NodeId>(i))) {
      const double d = y[static_cast<Eigen::Index>(i)] - y[a.dst];
      e += a.weight * d * d;
    }
  }
  return 0.5 * e;
}

ResistanceSolution solve_unit_voltage(const WeightedDigraph& g, const std::vector<NodeId>& A,
                                      const std::vector<NodeId>& B, const Tolerances& tol) {
  const std::size_t n = g.size();
  const auto in_a = membership(n, A, "source set");
  const auto in_b = membership(n, B, "target set");
  for (std::size_t v = 0; v < n; ++v) {
    if (in_a[v] && in_b[v]) {
      throw Error(ErrorKind::InvalidArgument, "source and target sets share node " + std::to_string(v));
    }
  }
  require_undirected_connected(g, tol);

  std::vector<Eigen::Index> interior_pos(n, -1);
  std::vector<NodeId> interior;
  for (std::size_t v = 0; v < n; ++v) {
    if (!in_a[v] && !in_b[v]) {
      interior_pos[v] = static_cast<Eigen::Index>(interior.size());
      interior.push_back(static_cast<NodeId>(v));
    }
  }
  const auto m = static_cast<Eigen::Index>(interior.size());
  Vector y = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t v = 0; v < n; ++v) {
    if (in_a[v]) y[static_cast<Eigen::Index>(v)] = 1.0;
  }
  if (m > 0) {
    Matrix LII = Matrix::Zero(m, m);
    Vector rhs = Vector::Zero(m);
    for (Eigen::Index a = 0; a < m; ++a) {
      const NodeId i = interior[static_cast<std::size_t>(a)];
      for (const Arc& arc : g.out_arcs(i)) {
        if (arc.dst == i) continue;
        LII(a, a) += arc.weight;
        if (interior_pos[arc.dst] >= 0) LII(a, interior_pos[arc.dst]) -= arc.weight;
        else if (in_a[arc.dst]) rhs[a] += arc.weight;
      }
    }
    Eigen::LDLT<Matrix> ldlt(LII);
    if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::SingularSystem, "interior Laplacian factorization failed");
    const Vector yi = ldlt.solve(rhs);
    for (Eigen::Index a = 0; a < m; ++a) y[interior[static_cast<std::size_t>(a)]] = yi[a];
  }

  ResistanceSolution sol;
  for (std::size_t i = 0; i < n; ++i) {
    for (const Arc& arc : g.out_arcs(static_cast<NodeId>(i))) {
      const double current = arc.weight * (y[static_cast<Eigen::Index>(i)] - y[arc.dst]);
      if (in_a[i]) sol.outflow_a += current;
      if (in_b[arc.dst]) sol.inflow_b += current;
    }
  }
  if (!(sol.outflow_a > 0.0)) throw Error(ErrorKind::Disconnected, "no current flows from source to target");
  sol.resistance = 1.0 / sol.outflow_a;
  sol.energy = dissipated_energy(g, y);
  sol.voltages = std::move(y);
  return sol;
}

double effective_resistance(const WeightedDigraph& g, const std::vector<NodeId>& A,
                            const std::vector<NodeId>& B, const Tolerances& tol) {
  return solve_unit_voltage(g, A, B, tol).resistance;
}

ThompsonFlow thompson_flow(const WeightedDigraph& g, const std::vector<NodeId>& A,
                           const std::vector<NodeId>& B, const Tolerances& tol) {
  const ResistanceSolution sol = solve_unit_voltage(g, A, B, tol);
  const std::size_t n = g.size();
  const auto in_a = membership(n, A, "source set");
  const auto in_b = membership(n, B, "target set");
  ThompsonFlow flow;
  flow.resistance = sol.resistance;
  flow.theta = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (const Arc& arc : g.out_arcs(static_cast<NodeId>(i))) {
      const double th = arc.weight * (sol.voltages[static_cast<Eigen::Index>(i)] - sol.voltages[arc.dst]) *
                        sol.resistance;
      flow.theta(static_cast<Eigen::Index>(i), arc.dst) = th;
      flow.dual_energy += th * th / arc.weight;
    }
  }
  flow.dual_energy *= 0.5;
  const Vector net = flow.theta.rowwise().sum();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = net[static_cast<Eigen::Index>(i)];
    if (in_a[i]) flow.net_outflow += v;
    else if (!in_b[i]) flow.max_interior_imbalance = std::max(flow.max_interior_imbalance, std::abs(v));
  }
  return flow;
}

double flow_across_cut(const Matrix& theta, const std::vector<char>& in_u) {
  double f = 0.0;
  for (Eigen::Index i = 0; i < theta.rows(); ++i) {
    if (!in_u[static_cast<std::size_t>(i)]) continue;
    for (Eigen::Index j = 0; j < theta.cols(); ++j) {
      if (!in_u[static_cast<std::size_t>(j)]) f += theta(i, j);
    }
  }
  return f;
}

GreenMatrix green_matrix(const WeightedDigraph& g, const Tolerances& tol) {
  require_undirected_connected(g, tol);
  const auto n = static_cast<Eigen::Index>(g.size());
  const Matrix W = g.dense();
  Matrix L = -W;
  L.diagonal() += W.rowwise().sum();
  L = 0.5 * (L + L.transpose());  // exact symmetry for the solver
  Eigen::SelfAdjointEigenSolver<Matrix> eig(L);
  if (eig.info() != Eigen::Success) throw Error(ErrorKind::IllConditioned, "eigendecomposition failed");
  GreenMatrix out;
  out.eigenvalues = eig.eigenvalues();
  out.eigenvectors = eig.eigenvectors();
  out.G = Matrix::Zero(n, n);
  if (n >= 2 && out.eigenvalues[1] < 1e-10) {
    throw Error(ErrorKind::IllConditioned, "second Laplacian eigenvalue below 1e-10");
  }
  for (Eigen::Index l = 1; l < n; ++l) {
    const Vector& phi = out.eigenvectors.col(l);
    out.G.noalias() += (phi * phi.transpose()) / out.eigenvalues[l];
  }
  return out;
}

GluedGraph terminal_network(const WeightedDigraph& g,
                            const std::vector<std::vector<NodeId>>& terminals) {
  return glue(g, terminals, GlueOptions{.symmetrize_merged = true});
}

ResistanceEquilibrium equilibrium_via_resistances(const WeightedDigraph& g,
                                                  const Condensation& cond, const Vector& xbar,
                                                  ResistanceRoute route, const Tolerances& tol) {
  const std::size_t s = cond.sink_count();
  if (s < 2) throw Error(ErrorKind::InvalidArgument, "resistance formula needs at least two sinks");
  if (static_cast<std::size_t>(xbar.size()) != s) {
    throw Error(ErrorKind::InvalidArgument, "xbar length does not match sink count");
  }
  const RestrictionCheck gate = check_undirected_restriction(g, cond, tol);
  if (!gate.symmetric) {
    throw Error(ErrorKind::NotUndirected,
                "regular restriction is not undirected: asymmetric pair " +
                    pair_text(gate.asymmetric_pair->first, gate.asymmetric_pair->second));
  }
  if (!gate.connected) throw Error(ErrorKind::Disconnected, "regular restriction is not connected");

  const std::size_t n = g.size();
  ResistanceEquilibrium out;
  out.H = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(s));
  for (std::size_t k = 0; k < s; ++k) {
    std::vector<NodeId> own = cond.sink_nodes(k), rest;
    for (std::size_t j = 0; j < s; ++j) {
      if (j != k) rest.insert(rest.end(), cond.sink_nodes(j).begin(), cond.sink_nodes(j).end());
    }
    const GluedGraph net = terminal_network(g, {own, rest});
    const NodeId v = net.mapping[own.front()];
    const NodeId vbar = net.mapping[rest.front()];

    std::vector<double> r_to_v(n), r_to_vbar(n);
    double r_terminals = 0.0;
    if (route == ResistanceRoute::Green) {
      const GreenMatrix green = green_matrix(net.graph, tol);
      r_terminals = resistance_via_green(green, v, vbar);
      for (std::size_t i = 0; i < n; ++i) {
        r_to_v[i] = resistance_via_green(green, net.mapping[i], v);
        r_to_vbar[i] = resistance_via_green(green, net.mapping[i], vbar);
      }
    } else {
      r_terminals = effective_resistance(net.graph, {v}, {vbar}, tol);
      for (std::size_t i = 0; i < n; ++i) {
        const NodeId u = net.mapping[i];
        r_to_v[i] = (u == v) ? 0.0 : effective_resistance(net.graph, {u}, {v}, tol);
        r_to_vbar[i] = (u == vbar) ? 0.0 : effective_resistance(net.graph, {u}, {vbar}, tol);
      }
    }
    out.terminal_resistance.push_back(r_terminals);
    for (std::size_t i = 0; i < n; ++i) {
      out.H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          (r_terminals + r_to_vbar[i] - r_to_v[i]) / (2.0 * r_terminals);
    }
  }
  out.x = out.H * xbar;
  return out;
}

GluedGraph apply_modification(const WeightedDigraph& g, const RayleighModification& mod) {
  auto add_symmetric = [&](NodeId i, NodeId j, double w) {
    if (i >= g.size() || j >= g.size()) throw Error(ErrorKind::NodeOutOfRange, "modification outside graph");
    if (i == j) throw Error(ErrorKind::InvalidArgument, "modification needs two distinct nodes");
    if (!(w > 0.0)) throw Error(ErrorKind::InvalidArgument, "added weight must be positive");
    std::vector<Edge> edges = g.edges();
    bool found_ij = false, found_ji = false;
    for (Edge& e : edges) {
      if (e.src == i && e.dst == j) { e.weight += w; found_ij = true; }
      if (e.src == j && e.dst == i) { e.weight += w; found_ji = true; }
    }
    if (!found_ij) edges.push_back({i, j, w});
    if (!found_ji) edges.push_back({j, i, w});
    GluedGraph out;
    out.graph = WeightedDigraph::from_edges(g.size(), edges);
    out.mapping.resize(g.size());
    for (std::size_t v = 0; v < g.size(); ++v) out.mapping[v] = static_cast<NodeId>(v);
    return out;
  };
  if (const auto* add = std::get_if<AddEdge>(&mod)) return add_symmetric(add->i, add->j, add->weight);
  if (const auto* inc = std::get_if<IncreaseWeight>(&mod)) {
    if (g.weight(inc->i, inc->j) == 0.0) {
      throw Error(ErrorKind::InvalidArgument, "increase-weight needs an existing edge " + pair_text(inc->i, inc->j));
    }
    return add_symmetric(inc->i, inc->j, inc->delta);
  }
  const auto& gp = std::get<GluePair>(mod);
  if (gp.i == gp.j) throw Error(ErrorKind::InvalidArgument, "glue-pair needs two distinct nodes");
  return glue(g, {{gp.i, gp.j}});
}

RayleighCheck check_rayleigh(const WeightedDigraph& g, const std::vector<NodeId>& A,
                             const std::vector<NodeId>& B, const RayleighModification& mod) {
  RayleighCheck c;
  c.before = effective_resistance(g, A, B);
  const GluedGraph changed = apply_modification(g, mod);
  const auto a2 = map_nodes(A, changed.mapping);
  const auto b2 = map_nodes(B, changed.mapping);
  for (NodeId v : a2) {
    if (std::binary_search(b2.begin(), b2.end(), v)) {
      throw Error(ErrorKind::InvalidArgument, "modification merges the source and target sets");
    }
  }
  c.after = effective_resistance(changed.graph, a2, b2);
  c.ok = c.after <= c.before + 1e-12;
  return c;
}

}  // namespace averkit
