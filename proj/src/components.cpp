#include "averkit/components.hpp"

#include <algorithm>
#include <limits>

namespace averkit {

namespace {

constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();

// Iterative Tarjan; returns raw component label per node.
std::vector<std::size_t> tarjan(const std::vector<std::vector<NodeId>>& adj,
                                std::size_t& count) {
  const std::size_t n = adj.size();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), label(n, kUnvisited);
  std::vector<char> on_stack(n, 0);
  std::vector<NodeId> stack;
  std::vector<std::pair<NodeId, std::size_t>> call;  // (node, next child position)
  std::size_t next_index = 0;
  count = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back({static_cast<NodeId>(root), 0});
    index[root] = low[root] = next_index++;
    stack.push_back(static_cast<NodeId>(root));
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < adj[v].size()) {
        const NodeId w = adj[v][pos++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const NodeId done = v;
      call.pop_back();
      if (!call.empty()) {
        const NodeId parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          label[w] = count;
        } while (w != done);
        ++count;
      }
    }
  }
  return label;
}

}  // namespace

bool Condensation::reaches(std::size_t from, std::size_t to) const {
  if (from == to) return true;
  std::vector<char> seen(components.size(), 0);
  std::vector<std::size_t> frontier{from};
  seen[from] = 1;
  while (!frontier.empty()) {
    const std::size_t c = frontier.back();
    frontier.pop_back();
    for (std::size_t nxt : successors[c]) {
      if (nxt == to) return true;
      if (!seen[nxt]) {
        seen[nxt] = 1;
        frontier.push_back(nxt);
      }
    }
  }
  return false;
}

Condensation condense(const std::vector<std::vector<NodeId>>& adjacency) {
  const std::size_t n = adjacency.size();
  std::size_t count = 0;
  const std::vector<std::size_t> raw = tarjan(adjacency, count);

  // Relabel components by smallest contained node id.
  std::vector<std::size_t> first_node(count, kUnvisited);
  for (std::size_t i = 0; i < n; ++i) {
    if (first_node[raw[i]] == kUnvisited) first_node[raw[i]] = i;
  }
  std::vector<std::size_t> order(count);
  for (std::size_t c = 0; c < count; ++c) order[c] = c;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return first_node[a] < first_node[b]; });
  std::vector<std::size_t> relabel(count);
  for (std::size_t k = 0; k < count; ++k) relabel[order[k]] = k;

  Condensation cond;
  cond.components.resize(count);
  cond.component_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = relabel[raw[i]];
    cond.component_of[i] = c;
    cond.components[c].push_back(static_cast<NodeId>(i));
  }

  cond.successors.resize(count);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ci = cond.component_of[i];
    for (NodeId j : adjacency[i]) {
      const std::size_t cj = cond.component_of[j];
      if (cj != ci) cond.successors[ci].push_back(cj);
    }
  }
  for (auto& s : cond.successors) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }

  cond.sink_index_of.assign(n, -1);
  for (std::size_t c = 0; c < count; ++c) {
    if (cond.successors[c].empty()) {
      const int k = static_cast<int>(cond.sinks.size());
      cond.sinks.push_back(c);
      for (NodeId i : cond.components[c]) cond.sink_index_of[i] = k;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (cond.sink_index_of[i] < 0) cond.regular.push_back(static_cast<NodeId>(i));
  }
  return cond;
}

Condensation condense(const WeightedDigraph& g) {
  std::vector<std::vector<NodeId>> adj(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (const Arc& a : g.out_arcs(static_cast<NodeId>(i))) adj[i].push_back(a.dst);
  }
  return condense(adj);
}

Condensation condense(const Matrix& support) {
  const auto n = support.rows();
  std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (support(i, j) > 0.0) adj[static_cast<std::size_t>(i)].push_back(static_cast<NodeId>(j));
    }
  }
  return condense(adj);
}

bool is_connected(const WeightedDigraph& g) {
  return g.size() > 0 && condense(g).components.size() == 1;
}

bool is_connected(const Matrix& support) {
  return support.rows() > 0 && condense(support).components.size() == 1;
}

std::vector<NodeId> stubborn_nodes(const Condensation& cond) {
  std::vector<NodeId> out;
  for (std::size_t c : cond.sinks) {
    if (cond.components[c].size() == 1) out.push_back(cond.components[c].front());
  }
  return out;
}

}  // namespace averkit
