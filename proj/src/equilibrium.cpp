#include "averkit/equilibrium.hpp"

#include <atomic>
#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "averkit/dynamics.hpp"
#include "averkit/parallel.hpp"

namespace averkit {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;

Matrix sink_indicator_rows(const Condensation& cond) {
  const auto n = static_cast<Eigen::Index>(cond.node_count());
  const auto s = static_cast<Eigen::Index>(cond.sink_count());
  Matrix H = Matrix::Zero(n, s);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int k = cond.sink_index_of[static_cast<std::size_t>(i)];
    if (k >= 0) H(i, k) = 1.0;
  }
  return H;
}

void require_sinks(const Condensation& cond, const DerivedMatrices& m) {
  if (cond.node_count() != m.size()) {
    throw Error(ErrorKind::InvalidArgument, "condensation and matrices disagree on node count");
  }
  if (cond.sink_count() == 0) throw Error(ErrorKind::InvalidArgument, "graph has no sink");
}

Matrix solve_dense_or_iterative(const Matrix& A, const Matrix& rhs, const SolveOptions& opts) {
  if (static_cast<std::size_t>(A.rows()) <= opts.dense_limit) {
    Eigen::PartialPivLU<Matrix> lu(A);
    if (!(lu.rcond() >= 1e-14)) {
      throw Error(ErrorKind::SingularSystem, "regular block system is singular");
    }
    return lu.solve(rhs);
  }
  SparseMatrix S = A.sparseView();
  S.makeCompressed();
  Eigen::BiCGSTAB<SparseMatrix, Eigen::DiagonalPreconditioner<double>> solver;
  solver.setTolerance(opts.iterative_tol);
  solver.setMaxIterations(std::max<Eigen::Index>(1000, 10 * A.rows()));
  solver.compute(S);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularSystem, "preconditioner setup failed");
  }
  Matrix out(A.rows(), rhs.cols());
  for (Eigen::Index k = 0; k < rhs.cols(); ++k) {
    Vector col = solver.solve(rhs.col(k));
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorKind::SingularSystem, "iterative solve did not converge");
    }
    out.col(k) = col;
  }
  return out;
}

Matrix block_solve(const Condensation& cond, const DerivedMatrices& m, const SolveOptions& opts) {
  if (m.alpha >= 1.0) throw Error(ErrorKind::SingularSystem, "alpha = 1 freezes every node");
  Matrix H = sink_indicator_rows(cond);
  const auto& R = cond.regular;
  const auto r = static_cast<Eigen::Index>(R.size());
  if (r == 0) return H;
  const auto s = static_cast<Eigen::Index>(cond.sink_count());
  const auto n = static_cast<Eigen::Index>(m.size());

  Matrix IminusQ(r, r);
  Matrix rhs = Matrix::Zero(r, s);
  for (Eigen::Index a = 0; a < r; ++a) {
    const auto i = static_cast<Eigen::Index>(R[static_cast<std::size_t>(a)]);
    for (Eigen::Index b = 0; b < r; ++b) {
      const auto j = static_cast<Eigen::Index>(R[static_cast<std::size_t>(b)]);
      IminusQ(a, b) = (a == b ? 1.0 : 0.0) - m.P_alpha(i, j);
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const int k = cond.sink_index_of[static_cast<std::size_t>(j)];
      if (k >= 0) rhs(a, k) += m.P_alpha(i, j);
    }
  }
  const Matrix Y = solve_dense_or_iterative(IminusQ, rhs, opts);
  for (Eigen::Index a = 0; a < r; ++a) H.row(R[static_cast<std::size_t>(a)]) = Y.row(a);
  return H;
}

Matrix laplace_solve(const Condensation& cond, const DerivedMatrices& m, const SolveOptions& opts) {
  const auto n = static_cast<Eigen::Index>(m.size());
  const auto s = static_cast<Eigen::Index>(cond.sink_count());
  Matrix A = m.L;
  Matrix rhs = Matrix::Zero(n, s);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int k = cond.sink_index_of[static_cast<std::size_t>(i)];
    if (k < 0) continue;
    A.row(i).setZero();
    A(i, i) = 1.0;
    rhs(i, k) = 1.0;
  }
  if (static_cast<std::size_t>(n) <= opts.dense_limit) {
    Eigen::PartialPivLU<Matrix> lu(A);
    if (!(lu.rcond() >= 1e-14)) {
      throw Error(ErrorKind::SingularSystem, "Laplace system is singular");
    }
    return lu.solve(rhs);
  }
  SparseMatrix S = A.sparseView();
  S.makeCompressed();
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(S);
  if (lu.info() != Eigen::Success) throw Error(ErrorKind::SingularSystem, "Laplace system is singular");
  return lu.solve(rhs);
}

// Vose alias table over one row of P.
struct AliasRow {
  std::vector<NodeId> targets;
  std::vector<double> prob;
  std::vector<std::uint32_t> alias;

  NodeId sample(Rng& rng) const {
    const double u = uniform01(rng) * static_cast<double>(targets.size());
    auto slot = static_cast<std::size_t>(u);
    if (slot >= targets.size()) slot = targets.size() - 1;
    const double frac = u - static_cast<double>(slot);
    return frac < prob[slot] ? targets[slot] : targets[alias[slot]];
  }
};

AliasRow build_alias(const Matrix& P, Eigen::Index i) {
  AliasRow row;
  std::vector<double> weights;
  for (Eigen::Index j = 0; j < P.cols(); ++j) {
    if (P(i, j) > 0.0) {
      row.targets.push_back(static_cast<NodeId>(j));
      weights.push_back(P(i, j));
    }
  }
  const std::size_t k = row.targets.size();
  double total = 0.0;
  for (double w : weights) total += w;
  row.prob.assign(k, 1.0);
  row.alias.resize(k);
  std::vector<double> scaled(k);
  std::vector<std::uint32_t> small, large;
  for (std::size_t a = 0; a < k; ++a) {
    row.alias[a] = static_cast<std::uint32_t>(a);
    scaled[a] = weights[a] * static_cast<double>(k) / total;
    (scaled[a] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(a));
  }
  while (!small.empty() && !large.empty()) {
    const auto lo = small.back();
    small.pop_back();
    const auto hi = large.back();
    row.prob[lo] = scaled[lo];
    row.alias[lo] = hi;
    scaled[hi] = (scaled[hi] + scaled[lo]) - 1.0;
    if (scaled[hi] < 1.0) {
      large.pop_back();
      small.push_back(hi);
    }
  }
  return row;
}

InfluenceResult monte_carlo(const Condensation& cond, const DerivedMatrices& m,
                            const MonteCarlo& mc) {
  if (mc.samples == 0) throw Error(ErrorKind::InvalidArgument, "samples must be positive");
  if (!(m.alpha >= 0.0 && m.alpha < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "Monte Carlo requires alpha in [0, 1)");
  }
  const auto n = static_cast<Eigen::Index>(m.size());
  const auto s = static_cast<Eigen::Index>(cond.sink_count());
  InfluenceResult out;
  out.method = "monte_carlo";
  out.H = sink_indicator_rows(cond);
  out.standard_error = Matrix::Zero(n, s);

  std::vector<AliasRow> rows(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!cond.is_sink_node(static_cast<NodeId>(i))) rows[static_cast<std::size_t>(i)] = build_alias(m.P, i);
  }

  // A P_alpha walk is the P jump chain with Geometric(1 - alpha) holding
  // times; the holding times only matter for the step cap.
  const double log_alpha = m.alpha > 0.0 ? std::log(m.alpha) : 0.0;
  const auto& R = cond.regular;
  std::vector<std::vector<std::size_t>> counts(R.size(), std::vector<std::size_t>(static_cast<std::size_t>(s), 0));
  parallel_for(R.size(), [&](std::size_t a) {
    const NodeId start = R[a];
    Rng rng = make_rng(mc.seed, {static_cast<std::uint64_t>(start)});
    for (std::size_t sample = 0; sample < mc.samples; ++sample) {
      NodeId at = start;
      std::size_t steps = 0;
      while (true) {
        std::size_t hold = 1;
        if (m.alpha > 0.0) {
          const double u = 1.0 - uniform01(rng);  // (0, 1]
          hold += static_cast<std::size_t>(std::floor(std::log(u) / log_alpha));
        }
        steps += hold;
        if (steps > mc.step_cap) {
          throw Error(ErrorKind::MonteCarloCapExceeded,
                      "walk from node " + std::to_string(start) + " exceeded " +
                          std::to_string(mc.step_cap) + " steps");
        }
        at = rows[at].sample(rng);
        const int k = cond.sink_index_of[at];
        if (k >= 0) {
          ++counts[a][static_cast<std::size_t>(k)];
          break;
        }
      }
    }
  });

  const double N = static_cast<double>(mc.samples);
  for (std::size_t a = 0; a < R.size(); ++a) {
    const auto i = static_cast<Eigen::Index>(R[a]);
    for (Eigen::Index k = 0; k < s; ++k) {
      const double p = static_cast<double>(counts[a][static_cast<std::size_t>(k)]) / N;
      out.H(i, k) = p;
      (*out.standard_error)(i, k) = std::sqrt(p * (1.0 - p) / N);
    }
  }
  return out;
}

}  // namespace

std::string_view method_name(const InfluenceMethod& method) {
  struct {
    std::string_view operator()(const BlockSolve&) const { return "block_solve"; }
    std::string_view operator()(const LaplaceSolve&) const { return "laplace_solve"; }
    std::string_view operator()(const MonteCarlo&) const { return "monte_carlo"; }
  } visitor;
  return std::visit(visitor, method);
}

Vector sink_averages(const Condensation& cond, const DerivedMatrices& m, const Vector& x0,
                     std::vector<Vector>* sink_centralities) {
  if (static_cast<std::size_t>(x0.size()) != m.size()) {
    throw Error(ErrorKind::InvalidArgument, "x0 length does not match node count");
  }
  const std::size_t s = cond.sink_count();
  Vector xbar(static_cast<Eigen::Index>(s));
  if (sink_centralities) sink_centralities->clear();
  for (std::size_t k = 0; k < s; ++k) {
    const auto& nodes = cond.sink_nodes(k);
    const auto sz = static_cast<Eigen::Index>(nodes.size());
    Matrix sub(sz, sz);
    Vector local(sz);
    for (Eigen::Index a = 0; a < sz; ++a) {
      local[a] = x0[nodes[static_cast<std::size_t>(a)]];
      for (Eigen::Index b = 0; b < sz; ++b) {
        sub(a, b) = m.P(nodes[static_cast<std::size_t>(a)], nodes[static_cast<std::size_t>(b)]);
      }
    }
    const Vector pi = stationary_distribution(sub);
    xbar[static_cast<Eigen::Index>(k)] = pi.dot(local);
    if (sink_centralities) sink_centralities->push_back(pi);
  }
  return xbar;
}

InfluenceResult influence_matrix(const Condensation& cond, const DerivedMatrices& m,
                                 const InfluenceMethod& method, const SolveOptions& opts) {
  require_sinks(cond, m);
  if (const auto* mc = std::get_if<MonteCarlo>(&method)) return monte_carlo(cond, m, *mc);
  InfluenceResult out;
  out.method = method_name(method);
  out.H = std::holds_alternative<BlockSolve>(method) ? block_solve(cond, m, opts)
                                                     : laplace_solve(cond, m, opts);
  return out;
}

EquilibriumProfile equilibrium_profile(const Condensation& cond, const DerivedMatrices& m,
                                       const Vector& x0, const InfluenceMethod& method,
                                       const SolveOptions& opts) {
  require_sinks(cond, m);
  EquilibriumProfile p;
  p.xbar = sink_averages(cond, m, x0, &p.sink_centralities);
  if (cond.sink_count() == 1) {
    p.H = Matrix::Ones(static_cast<Eigen::Index>(m.size()), 1);
  } else {
    p.H = influence_matrix(cond, m, method, opts).H;
  }
  p.x_star = p.H * p.xbar;
  return p;
}

}  // namespace averkit
