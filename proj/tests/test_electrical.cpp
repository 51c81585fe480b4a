#include <cmath>
#include <random>

#include "averkit/components.hpp"
#include "averkit/electrical.hpp"
#include "averkit/equilibrium.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace averkit;

namespace {

WeightedDigraph G(std::size_t n, std::vector<Edge> e) { return WeightedDigraph::from_edges(n, e); }

WeightedDigraph undirected(std::size_t n, std::vector<Edge> e) {
  std::vector<Edge> both;
  for (const Edge& x : e) {
    both.push_back(x);
    both.push_back({x.dst, x.src, x.weight});
  }
  return G(n, both);
}

WeightedDigraph path(std::size_t edges, double w = 1.0) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < edges; ++i) e.push_back({i, i + 1, w});
  return undirected(edges + 1, e);
}

WeightedDigraph k3() { return undirected(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}); }

WeightedDigraph stubborn_path() {
  return ensure_positive_outdegree(G(4, {{1, 0, 1}, {1, 2, 1}, {2, 1, 1}, {2, 3, 1}}));
}

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x[i++] = a;
  return x;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("undirected restriction gate") {
  const auto g = stubborn_path();
  CHECK(check_undirected_restriction(g, condense(g)).ok());

  const auto asym = ensure_positive_outdegree(G(4, {{1, 0, 1}, {1, 2, 1}, {2, 1, 2}, {2, 3, 1}}));
  const auto r = check_undirected_restriction(asym, condense(asym));
  CHECK_FALSE(r.symmetric);
  REQUIRE(r.asymmetric_pair.has_value());
  CHECK(*r.asymmetric_pair == std::pair<NodeId, NodeId>{1, 2});

  // regular nodes 1 and 2 linked only through the sink 0
  const auto split = ensure_positive_outdegree(G(3, {{1, 0, 1}, {2, 0, 1}}));
  const auto s = check_undirected_restriction(split, condense(split));
  CHECK(s.symmetric);
  CHECK_FALSE(s.connected);
}

TEST_CASE("glue examples") {
  const auto g = G(3, {{0, 2, 1}, {1, 2, 2}});
  const auto glued = glue(g, {{0, 1}});
  CHECK(glued.graph.size() == 2);
  CHECK(glued.mapping == std::vector<NodeId>{0, 0, 1});
  CHECK(glued.graph.weight(0, 1) == 3.0);

  const auto single = glue(g, {{1}});
  CHECK(single.graph == g);

  const auto p = stubborn_path();
  GlueOptions sym;
  sym.symmetrize_merged = true;
  const auto t = glue(p, {{0}, {3}}, sym);
  CHECK(t.graph.size() == 4);
  CHECK(classify(t.graph).undirected);
  CHECK(t.graph.weight(0, 1) == 1.0);
  CHECK(t.graph.weight(3, 2) == 1.0);

  CHECK(kind_of([&] { glue(g, {{0, 1}, {1, 2}}); }) == ErrorKind::OverlappingGroups);
}

TEST_CASE("effective resistance examples") {
  CHECK(effective_resistance(path(3), {0}, {3}) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(effective_resistance(k3(), {0}, {1}) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(effective_resistance(path(3, 2.0), {0}, {3}) == doctest::Approx(1.5).epsilon(1e-12));
  const auto sol = solve_unit_voltage(path(3), {0}, {3});
  CHECK(sol.energy == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK((sol.voltages - vec({1, 2.0 / 3, 1.0 / 3, 0})).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(sol.outflow_a == doctest::Approx(sol.inflow_b).epsilon(1e-12));

  CHECK(kind_of([] { effective_resistance(G(2, {{0, 1, 1}, {1, 0, 2}}), {0}, {1}); }) == ErrorKind::NotUndirected);
  CHECK(kind_of([] { effective_resistance(undirected(4, {{0, 1, 1}, {2, 3, 1}}), {0}, {3}); }) ==
        ErrorKind::Disconnected);
  CHECK(kind_of([] { effective_resistance(path(2), {0}, {0}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("series and parallel laws") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t k = 1 + oracle::pick(rng, 8);
    std::vector<Edge> e;
    double series = 0.0;
    for (NodeId i = 0; i < k; ++i) {
      const double w = oracle::uniform(rng, 0.1, 5);
      series += 1.0 / w;
      e.push_back({i, i + 1, w});
    }
    CHECK(effective_resistance(undirected(k + 1, e), {0}, {static_cast<NodeId>(k)}) ==
          doctest::Approx(series).epsilon(1e-10));
    // k parallel two-edge branches between 0 and 1 through middle nodes
    std::vector<Edge> par;
    double conductance = 0.0;
    for (NodeId b = 0; b < k; ++b) {
      const double w1 = oracle::uniform(rng, 0.1, 5), w2 = oracle::uniform(rng, 0.1, 5);
      conductance += 1.0 / (1.0 / w1 + 1.0 / w2);
      par.push_back({0, 2 + b, w1});
      par.push_back({2 + b, 1, w2});
    }
    CHECK(effective_resistance(undirected(k + 2, par), {0}, {1}) == doctest::Approx(1.0 / conductance).epsilon(1e-10));
  }
}

TEST_CASE("Thompson flow examples") {
  auto f = thompson_flow(path(3), {0}, {3});
  CHECK(f.theta(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.theta(1, 2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.theta(2, 3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.theta(1, 0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(f.dual_energy == doctest::Approx(3.0).epsilon(1e-12));

  f = thompson_flow(k3(), {0}, {1});
  CHECK(f.theta(0, 1) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(f.theta(0, 2) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(f.theta(2, 1) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(f.max_interior_imbalance < 1e-12);
  CHECK(flow_across_cut(f.theta, {1, 0, 1}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("primal-dual sandwich and cut flows") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + oracle::pick(rng, 11);
    const auto g = oracle::connected_undirected(n, 0.3, rng);
    const NodeId a = static_cast<NodeId>(oracle::pick(rng, n));
    NodeId b = static_cast<NodeId>(oracle::pick(rng, n - 1));
    if (b >= a) ++b;
    const auto sol = solve_unit_voltage(g, {a}, {b});
    const auto f = thompson_flow(g, {a}, {b});
    CHECK(sol.energy * f.dual_energy == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(dissipated_energy(g, sol.voltages) == doctest::Approx(1.0 / sol.resistance).epsilon(1e-9));
    CHECK(f.net_outflow == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(f.max_interior_imbalance < 1e-9);
    CHECK((f.theta + f.theta.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (!(mask >> a & 1u) || (mask >> b & 1u)) continue;
      std::vector<char> in_u(n);
      for (std::size_t i = 0; i < n; ++i) in_u[i] = static_cast<char>(mask >> i & 1u);
      CHECK(flow_across_cut(f.theta, in_u) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("Green matrix examples and invariants") {
  auto gm = green_matrix(path(1));
  Matrix expect(2, 2);
  expect << 0.25, -0.25, -0.25, 0.25;
  CHECK((gm.G - expect).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(resistance_via_green(gm, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(resistance_via_green(gm, 1, 1) == 0.0);

  gm = green_matrix(k3());
  const Matrix k3g = (Matrix::Identity(3, 3) - Matrix::Constant(3, 3, 1.0 / 3)) / 3.0;
  CHECK((gm.G - k3g).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(resistance_via_green(gm, 0, 2) == doctest::Approx(2.0 / 3).epsilon(1e-12));

  CHECK(kind_of([] { green_matrix(undirected(4, {{0, 1, 1}, {2, 3, 1}})); }) == ErrorKind::Disconnected);
  CHECK(kind_of([] { green_matrix(undirected(3, {{0, 1, 1}, {1, 2, 1e-13}})); }) == ErrorKind::IllConditioned);

  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + oracle::pick(rng, 29);
    const auto g = oracle::connected_undirected(n, 0.15, rng);
    const auto green = green_matrix(g);
    const auto L = derive_matrices(g, 0.5).L;
    const auto N = static_cast<Eigen::Index>(n);
    CHECK((green.G * Vector::Ones(N)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((green.G - green.G.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((L * green.G - (Matrix::Identity(N, N) - Matrix::Constant(N, N, 1.0 / n))).cwiseAbs().maxCoeff() < 1e-9);
    const Matrix W = g.dense();
    for (int pair = 0; pair < 5; ++pair) {
      const auto h = static_cast<NodeId>(oracle::pick(rng, n));
      const auto j = static_cast<NodeId>(oracle::pick(rng, n));
      if (h == j) continue;
      const double r = effective_resistance(g, {h}, {j});
      CHECK(resistance_via_green(green, h, j) == doctest::Approx(r).epsilon(1e-9));
      CHECK(oracle::resistance_pinv(W, h, j) == doctest::Approx(r).epsilon(1e-9));
    }
  }
}

TEST_CASE("equilibrium via resistances examples") {
  const auto p3 = ensure_positive_outdegree(G(3, {{1, 0, 1}, {1, 2, 1}}));
  auto r = equilibrium_via_resistances(p3, condense(p3), vec({0, 1}));
  CHECK(r.x[1] == doctest::Approx(0.5).epsilon(1e-12));

  const auto p4 = stubborn_path();
  const auto c4 = condense(p4);
  for (auto route : {ResistanceRoute::Green, ResistanceRoute::Solve}) {
    r = equilibrium_via_resistances(p4, c4, vec({0, 1}), route);
    CHECK((r.x - vec({0, 1.0 / 3, 2.0 / 3, 1})).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(r.terminal_resistance[0] == doctest::Approx(3.0).epsilon(1e-12));
  }
  r = equilibrium_via_resistances(p4, c4, vec({0.7, 0.7}));
  CHECK((r.x - Vector::Constant(4, 0.7)).cwiseAbs().maxCoeff() < 1e-12);

  const auto single = path(2);
  CHECK(kind_of([&] { equilibrium_via_resistances(single, condense(single), vec({1})); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("resistance equilibrium matches the direct one; bias sign") {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t s = 2 + oracle::pick(rng, 2);
    const auto g = oracle::undirected_interior(s + 2 + oracle::pick(rng, 30), s, rng);
    const auto c = condense(g);
    REQUIRE(c.sink_count() == s);
    REQUIRE(check_undirected_restriction(g, c).ok());
    Vector xbar(static_cast<Eigen::Index>(s));
    for (Eigen::Index k = 0; k < xbar.size(); ++k) xbar[k] = oracle::uniform(rng, -1, 1);
    const auto m = derive_matrices(g, 0.5);
    const Matrix H = influence_matrix(c, m).H;
    const auto via = equilibrium_via_resistances(g, c, xbar);
    CHECK((via.x - H * xbar).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((via.H - H).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((via.H.rowwise().sum() - Vector::Ones(H.rows())).cwiseAbs().maxCoeff() < 1e-10);
    const Vector kirchhoff = m.L * via.x;
    for (NodeId i : c.regular) CHECK(std::abs(kirchhoff[i]) < 1e-9);
  }
  // two sinks, xbar = (1, 0): x_i - 1/2 has the sign of R_{i,S-} - R_{i,S+}
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = oracle::undirected_interior(4 + oracle::pick(rng, 20), 2, rng);
    const auto c = condense(g);
    const auto via = equilibrium_via_resistances(g, c, vec({1, 0}));
    const auto net = terminal_network(g, {c.sink_nodes(0), c.sink_nodes(1)});
    for (NodeId i : c.regular) {
      const NodeId u = net.mapping[i];
      const double r_plus = effective_resistance(net.graph, {u}, {net.mapping[c.sink_nodes(0)[0]]});
      const double r_minus = effective_resistance(net.graph, {u}, {net.mapping[c.sink_nodes(1)[0]]});
      const double bias = via.x[i] - 0.5;
      if (std::abs(r_minus - r_plus) > 1e-9) CHECK((bias > 0) == (r_minus > r_plus));
    }
  }
}

TEST_CASE("Rayleigh monotonicity") {
  const auto p = path(3);
  auto chord = check_rayleigh(p, {0}, {3}, AddEdge{0, 2, 1.0});
  CHECK(chord.after < chord.before);
  CHECK(chord.ok);
  auto dbl = check_rayleigh(p, {0}, {3}, IncreaseWeight{1, 2, 1.0});
  CHECK(dbl.after == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(dbl.ok);
  auto gl = check_rayleigh(p, {0}, {3}, GluePair{1, 2});
  CHECK(gl.after == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(gl.ok);
  CHECK_THROWS_AS(check_rayleigh(p, {0}, {3}, IncreaseWeight{0, 3, 1.0}), Error);

  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + oracle::pick(rng, 15);
    const auto g = oracle::connected_undirected(n, 0.2, rng);
    const NodeId a = 0, b = static_cast<NodeId>(n - 1);
    const auto i = static_cast<NodeId>(oracle::pick(rng, n));
    auto j = static_cast<NodeId>(oracle::pick(rng, n - 1));
    if (j >= i) ++j;
    RayleighModification mod;
    switch (trial % 3) {
      case 0: mod = AddEdge{i, j, oracle::uniform(rng, 0.1, 3)}; break;
      case 1: {
        const auto e = g.edges()[oracle::pick(rng, g.edges().size())];
        mod = IncreaseWeight{e.src, e.dst, oracle::uniform(rng, 0.1, 3)};
        break;
      }
      default:
        if ((i == a && j == b) || (i == b && j == a)) continue;
        mod = GluePair{i, j};
    }
    CHECK(check_rayleigh(g, {a}, {b}, mod).ok);
  }
}
