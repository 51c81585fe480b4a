// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "averkit/components.hpp"
#include "averkit/dynamics.hpp"
#include "averkit/electrical.hpp"
#include "averkit/equilibrium.hpp"
#include "averkit/generators.hpp"
#include "averkit/regimes.hpp"
#include "oracles.hpp"

using namespace averkit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // 0: none
  std::function<Outcome()> body;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Corpus for criteria 1 and 2: 100 digraphs, n <= 50, 1-4 sinks.
struct Instance {
  WeightedDigraph g;
  Condensation cond;
};

const std::vector<Instance>& corpus() {
  static const std::vector<Instance> c = [] {
    std::vector<Instance> out;
    std::mt19937_64 rng(20240101);
    for (int k = 0; k < 100; ++k) {
      const std::size_t s = 1 + static_cast<std::size_t>(k % 4);
      const std::size_t n = s + 5 + oracle::pick(rng, 50 - s - 5 + 1);
      WeightedDigraph g = oracle::with_sinks(n, s, rng);
      Condensation cond = condense(g);
      out.push_back({std::move(g), std::move(cond)});
    }
    return out;
  }();
  return c;
}

Outcome c1_methods() {
  double worst = 0;
  std::size_t entries = 0, beyond = 0;
  double worst_z = 0;
  for (std::size_t k = 0; k < corpus().size(); ++k) {
    const auto& [g, cond] = corpus()[k];
    const auto m = derive_matrices(g, 0.5);
    const Matrix H = influence_matrix(cond, m, BlockSolve{}).H;
    const Matrix HL = influence_matrix(cond, m, LaplaceSolve{}).H;
    worst = std::max(worst, (H - HL).cwiseAbs().maxCoeff());
    MonteCarlo mc;
    mc.samples = 10'000;
    mc.seed = k;
    const Matrix HM = influence_matrix(cond, m, mc).H;
    for (NodeId i : cond.regular) {
      for (Eigen::Index q = 0; q < H.cols(); ++q) {
        const double p = H(i, q);
        const double se = std::sqrt(std::max(p * (1 - p), 0.0) / 1e4);
        const double d = std::abs(HM(i, q) - p);
        ++entries;
        const double z = se > 0 ? d / se : (d > 1e-12 ? 1e300 : 0.0);
        worst_z = std::max(worst_z, z);
        if (z > 4.0) ++beyond;
      }
    }
  }
  Outcome o;
  o.pass = worst < 1e-9 && beyond == 0;
  o.detail = fmt("max|block-laplace|=%.2e, MC entries beyond 4 s.e.: %zu of %zu (max z=%.2f)", worst, beyond,
                 entries, worst_z);
  return o;
}

// Time scale for P_alpha on a graph with sinks: the slowest of the
// absorption scale 1/(1 - rho(Q)) and the lazy mixing time of each sink.
std::size_t mixing_estimate(const Condensation& cond, const DerivedMatrices& m) {
  double scale = 1.0;
  const auto& R = cond.regular;
  if (!R.empty()) {
    Matrix Q(static_cast<Eigen::Index>(R.size()), static_cast<Eigen::Index>(R.size()));
    for (std::size_t a = 0; a < R.size(); ++a)
      for (std::size_t b = 0; b < R.size(); ++b) Q(a, b) = m.P_alpha(R[a], R[b]);
    const double rho = Eigen::EigenSolver<Matrix>(Q, false).eigenvalues().cwiseAbs().maxCoeff();
    scale = std::max(scale, 1.0 / (1.0 - rho));
  }
  for (std::size_t k = 0; k < cond.sink_count(); ++k) {
    const auto& S = cond.sink_nodes(k);
    if (S.size() == 1) continue;
    Matrix W(static_cast<Eigen::Index>(S.size()), static_cast<Eigen::Index>(S.size()));
    for (std::size_t a = 0; a < S.size(); ++a)
      for (std::size_t b = 0; b < S.size(); ++b) W(a, b) = m.W(S[a], S[b]);
    const auto ms = derive_matrices(W, 0.5);
    scale = std::max(scale, static_cast<double>(mixing_time(ms, centrality(ms))));
  }
  return static_cast<std::size_t>(std::ceil(scale));
}

Outcome c2_simulation() {
  double worst = 0;
  std::mt19937_64 rng(2);
  for (const auto& [g, cond] : corpus()) {
    const auto m = derive_matrices(g, 0.5);
    Vector x0(m.P.rows());
    for (Eigen::Index i = 0; i < x0.size(); ++i) x0[i] = oracle::uniform(rng, -1, 1);
    const auto p = equilibrium_profile(cond, m, x0);
    const std::size_t T = 50 * mixing_estimate(cond, m);
    const auto t = simulate(m, x0, T, 0.0);
    worst = std::max(worst, (t.states.back() - p.x_star).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-6, fmt("max ||P_a^T x0 - H xbar||_inf = %.2e", worst)};
}

Outcome c3_envelope() {
  std::mt19937_64 rng(3);
  int failures = 0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + oracle::pick(rng, 29);
    const auto g = k % 2 ? oracle::connected_digraph(n, 0.15, rng) : oracle::connected_undirected(n, 0.15, rng);
    const auto m = derive_matrices(g, 0.5);
    const Vector pi = centrality(m);
    const std::size_t tau = mixing_time(m, pi);
    Vector x0(m.P.rows());
    for (Eigen::Index i = 0; i < x0.size(); ++i) x0[i] = oracle::uniform(rng, -1, 1);
    if (!check_convergence_envelope(simulate(m, x0, 12 * tau, 0.0), pi, tau)) ++failures;
  }
  return {failures == 0, fmt("%d of 100 graphs violate the envelope", failures)};
}

Outcome c4_theorem3() {
  std::mt19937_64 rng(4);
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t s = 2 + static_cast<std::size_t>(k % 2);
    const std::size_t n = s + 3 + oracle::pick(rng, 40 - s - 3 + 1);
    const auto g = oracle::undirected_interior(n, s, rng);
    const auto cond = condense(g);
    if (!check_undirected_restriction(g, cond).ok()) return {false, "generator produced a gated instance"};
    Vector xbar(static_cast<Eigen::Index>(s));
    for (Eigen::Index q = 0; q < xbar.size(); ++q) xbar[q] = oracle::uniform(rng, -1, 1);
    const auto direct = equilibrium_profile(cond, derive_matrices(g, 0.5), Vector::Zero(static_cast<Eigen::Index>(n)));
    const auto via = equilibrium_via_resistances(g, cond, xbar);
    worst = std::max(worst, (via.x - direct.H * xbar).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-8, fmt("max deviation = %.2e", worst)};
}

Outcome c5_thompson() {
  std::mt19937_64 rng(5);
  double worst_primal = 0, worst_dual = 0, worst_cut = 0;
  std::size_t cuts = 0;
  for (int k = 0; k < 60; ++k) {
    const std::size_t n = 2 + oracle::pick(rng, 11);
    const auto g = oracle::connected_undirected(n, 0.3, rng);
    // terminal sets of size 1-2
    std::vector<NodeId> perm = oracle::random_permutation(n, rng);
    const std::size_t na = n >= 4 ? 1 + oracle::pick(rng, 2) : 1;
    const std::size_t nb = n >= 4 ? 1 + oracle::pick(rng, 2) : 1;
    std::vector<NodeId> A(perm.begin(), perm.begin() + static_cast<long>(na));
    std::vector<NodeId> B(perm.begin() + static_cast<long>(na), perm.begin() + static_cast<long>(na + nb));
    std::sort(A.begin(), A.end());
    std::sort(B.begin(), B.end());
    const auto sol = solve_unit_voltage(g, A, B);
    const auto f = thompson_flow(g, A, B);
    const double R = sol.resistance;
    worst_primal = std::max(worst_primal, std::abs(sol.energy - 1.0 / R) / std::max(1.0, 1.0 / R));
    worst_dual = std::max(worst_dual, std::abs(f.dual_energy - R) / std::max(1.0, R));
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      bool ok = true;
      for (NodeId a : A) ok = ok && (mask >> a & 1u);
      for (NodeId b : B) ok = ok && !(mask >> b & 1u);
      if (!ok) continue;
      std::vector<char> in_u(n);
      for (std::size_t i = 0; i < n; ++i) in_u[i] = static_cast<char>(mask >> i & 1u);
      worst_cut = std::max(worst_cut, std::abs(flow_across_cut(f.theta, in_u) - 1.0));
      ++cuts;
    }
  }
  const bool pass = worst_primal < 1e-8 && worst_dual < 1e-8 && worst_cut < 1e-8;
  return {pass, fmt("primal dev %.2e, dual dev %.2e, worst cut dev %.2e over %zu cuts", worst_primal, worst_dual,
                    worst_cut, cuts)};
}

Outcome c6_green() {
  std::mt19937_64 rng(6);
  double worst = 0;
  std::size_t pairs = 0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = 2 + oracle::pick(rng, 29);
    const auto g = oracle::connected_undirected(n, 0.15, rng);
    const auto green = green_matrix(g);
    for (NodeId h = 0; h < n; ++h)
      for (NodeId j = h + 1; j < n; ++j) {
        const double r = effective_resistance(g, {h}, {j});
        worst = std::max(worst, std::abs(resistance_via_green(green, h, j) - r) / std::max(1.0, r));
        ++pairs;
      }
  }
  return {worst < 1e-9, fmt("max |R_green - R_solve| = %.2e over %zu pairs", worst, pairs)};
}

Outcome c7_conductance() {
  std::mt19937_64 rng(7);
  int lower_fail = 0, upper_fail = 0, upper_checked = 0, lazy_fail = 0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 2 + oracle::pick(rng, 11);
    const auto g = k % 2 ? oracle::connected_digraph(n, 0.25, rng) : oracle::connected_undirected(n, 0.25, rng);
    const auto m = derive_matrices(g, 0.5);
    const Vector pi = centrality(m);
    const std::size_t tau = mixing_time(m, pi);
    const auto chk = check_conductance_bound(tau, conductance(m, pi).phi, pi.minCoeff());
    if (!chk.lower_holds) ++lower_fail;
    if (chk.upper_applicable) {
      ++upper_checked;
      if (!chk.upper_holds) ++upper_fail;
    }
    // informational: the same two-sided check with the conductance of P_{1/2}
    if (!check_conductance_bound(tau, conductance(m.P_alpha, pi).phi, pi.minCoeff()).holds()) ++lazy_fail;
  }
  return {lower_fail == 0 && upper_fail == 0,
          fmt("lower-bound failures %d/200; upper bound checked on %d (phi <= 1), failures %d; "
              "two-sided check with phi of P_1/2 fails on %d/200",
              lower_fail, upper_checked, upper_fail, lazy_fail)};
}

Outcome c8_torus() {
  auto tau_of = [](std::size_t d, std::size_t side) {
    const auto m = derive_matrices(torus(d, side), 0.5);
    return static_cast<double>(mixing_time(m, centrality(m)));
  };
  std::vector<double> x1, y1, x2, y2;
  for (std::size_t n : {16, 24, 32, 48, 64}) {
    x1.push_back(std::log(static_cast<double>(n)));
    y1.push_back(std::log(tau_of(1, n)));
  }
  for (std::size_t side : {4, 5, 6, 7, 8, 9, 10}) {
    x2.push_back(std::log(static_cast<double>(side * side)));
    y2.push_back(std::log(tau_of(2, side)));
  }
  const double s1 = slope(x1, y1), s2 = slope(x2, y2);
  return {s1 >= 1.8 && s1 <= 2.2 && s2 >= 0.8 && s2 <= 1.2, fmt("d=1 slope %.3f, d=2 slope %.3f", s1, s2)};
}

Vector stubborn_equilibrium(const WeightedDigraph& g) {
  const auto cond = condense(g);
  Vector xbar(2);
  xbar << 0.0, 1.0;
  return influence_matrix(cond, derive_matrices(g, 0.5)).H * xbar;
}

std::vector<WeightedDigraph> tilde_instances;  // community constructions for criterion 11
std::vector<std::pair<double, std::size_t>> tilde_params;

void remember_tildes(const MatchedCommunities& mc) {
  for (int h = 0; h < 2; ++h) {
    tilde_instances.push_back(community_tilde_graph(mc, h).graph);
    tilde_params.emplace_back(mc.spec.gamma + mc.spec.beta0, mc.internal_edges[static_cast<std::size_t>(h)]);
  }
}

Outcome c9_prop3() {
  int violations = 0, rows = 0;
  double worst_y0_ratio100 = 0;
  bool polar_ok = true;
  for (double gamma : {0.01, 1.0, 100.0})
    for (double beta : {0.01, 1.0, 100.0})
      for (std::size_t m : {16, 64})
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
          MatchedConfig cfg;
          cfg.m = m;
          cfg.gamma = gamma;
          cfg.beta = beta;
          cfg.seed = seed;
          const auto mc = matched_communities(cfg);
          remember_tildes(mc);
          const auto [y0, y1] = community_means(stubborn_equilibrium(mc.graph), mc.spec);
          if (!proposition3_bounds(mc.spec).satisfied_by(y0, y1, 1e-12)) ++violations;
          if (gamma / beta == 100.0) {
            worst_y0_ratio100 = std::max(worst_y0_ratio100, std::abs(y0));
            polar_ok = polar_ok && std::abs(y0) <= 1.0 / 102 + 1e-12;
          }
          ++rows;
        }
  return {violations == 0 && polar_ok,
          fmt("%d violations over %d instances; gamma/beta=100: max |y0| = %.6f (1/102 = %.6f)", violations, rows,
              worst_y0_ratio100, 1.0 / 102)};
}

Outcome c10_theorem4() {
  int fails = 0, checked = 0, skipped = 0;
  std::vector<double> medians;
  std::string per_m;
  for (std::size_t m : {32, 64, 128}) {
    std::vector<double> fl;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      MatchedConfig cfg;
      cfg.m = m;
      cfg.gamma = 0.01;
      cfg.beta = 1.0;
      cfg.seed = seed;
      const auto mc = matched_communities(cfg);
      remember_tildes(mc);
      const auto cond = condense(mc.graph);
      Vector xbar(2);
      xbar << 0.0, 1.0;
      try {
        const auto r = theorem4_bound(mc.graph, cond, xbar, 0.1);
        ++checked;
        if (!r.holds) ++fails;
        fl.push_back(r.fluidity);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ModifiedGraphDisconnected) throw;
        ++skipped;
      }
    }
    medians.push_back(median(fl));
    per_m += fmt(" m=%zu:%.5f", m, medians.back());
  }
  const bool decreasing = medians[1] < medians[0] && medians[2] < medians[1];
  return {fails == 0 && decreasing && checked > 0,
          fmt("bound held on %d/%d (skipped %d); median fluidity%s", checked - fails, checked, skipped,
              per_m.c_str())};
}

Outcome c11_eq24() {
  double worst = 0;
  for (std::size_t k = 0; k < tilde_instances.size(); ++k) {
    const auto& g = tilde_instances[k];
    const auto [gb, l] = tilde_params[k];
    const Vector pi = centrality(derive_matrices(g, 0.5));
    // stubborn nodes of the construction are those without internal ER links: v_h and U_{1-h}
    const std::size_t m = (g.size() - 1) / 2;
    double ps = 0;
    // node order after dropping v_{1-h}: h=0 -> (v0, U0, U1); h=1 -> (U0, U1, v1)
    const bool h0 = k % 2 == 0;
    ps += h0 ? pi[0] : pi[static_cast<Eigen::Index>(2 * m)];
    for (std::size_t b = 0; b < m; ++b) ps += pi[static_cast<Eigen::Index>(h0 ? 1 + m + b : b)];
    const double md = static_cast<double>(m);
    const double expect = gb * md / (2 * gb * md + 2 * static_cast<double>(l));
    worst = std::max(worst, std::abs(ps - expect));
  }
  return {worst < 1e-10 && !tilde_instances.empty(),
          fmt("max deviation %.2e over %zu constructions", worst, tilde_instances.size())};
}

Outcome c12_rayleigh() {
  std::mt19937_64 rng(12);
  int bad = 0, done = 0;
  double worst_increase = -1e300;
  while (done < 500) {
    const std::size_t n = 3 + oracle::pick(rng, 18);
    const auto g = oracle::connected_undirected(n, 0.2, rng);
    const auto perm = oracle::random_permutation(n, rng);
    const NodeId a = perm[0], b = perm[1];
    const NodeId i = perm[oracle::pick(rng, n)], j = perm[oracle::pick(rng, n)];
    if (i == j) continue;
    RayleighModification mod;
    switch (done % 3) {
      case 0: mod = AddEdge{i, j, oracle::uniform(rng, 0.05, 5)}; break;
      case 1: {
        const auto edges = g.edges();
        const Edge e = edges[oracle::pick(rng, edges.size())];
        mod = IncreaseWeight{e.src, e.dst, oracle::uniform(rng, 0.05, 5)};
        break;
      }
      default:
        if ((i == a && j == b) || (i == b && j == a)) continue;
        mod = GluePair{i, j};
    }
    const auto r = check_rayleigh(g, {a}, {b}, mod);
    worst_increase = std::max(worst_increase, r.after - r.before);
    if (!r.ok) ++bad;
    ++done;
  }
  return {bad == 0, fmt("%d of 500 perturbations increased R (max change %.2e)", bad, worst_increase)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "cross-method equivalence", 120, c1_methods},
      {2, "simulation consistency", 0, c2_simulation},
      {3, "convergence envelope", 0, c3_envelope},
      {4, "resistance equilibrium", 60, c4_theorem3},
      {5, "Thompson duality", 0, c5_thompson},
      {6, "Green-matrix identity", 0, c6_green},
      {7, "conductance bound", 0, c7_conductance},
      {8, "torus scaling", 180, c8_torus},
      {9, "two-community bounds", 0, c9_prop3},
      {10, "highly-fluid bound", 0, c10_theorem4},
      {11, "aggregate centrality identity", 0, c11_eq24},
      {12, "Rayleigh monotonicity", 0, c12_rayleigh},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0 && secs > c.time_limit_s) {
      o.pass = false;
      o.detail += fmt("; over the %.0f s limit", c.time_limit_s);
    }
    std::printf("criterion %2d: %s  %s: %s [%.1f s]\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
