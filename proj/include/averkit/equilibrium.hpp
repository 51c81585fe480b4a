#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "averkit/components.hpp"
#include "averkit/core.hpp"

namespace averkit {

/// Schur-style solve on the regular block: (I - Q) Y = [R^(1) 1, ..., R^(s) 1].
struct BlockSolve {};
/// Direct solve of L H = 0 on regular rows with identity rows on sinks.
struct LaplaceSolve {};
/// First-hit frequencies of walks driven by P_alpha from every regular node.
struct MonteCarlo {
  std::size_t samples = 10'000;
  std::uint64_t seed = 0;
  std::size_t step_cap = 1'000'000;
};

using InfluenceMethod = std::variant<BlockSolve, LaplaceSolve, MonteCarlo>;

std::string_view method_name(const InfluenceMethod& method);

struct SolveOptions {
  /// Regular blocks larger than this use diagonally preconditioned BiCGSTAB
  /// on a sparse copy instead of a dense LU factorization.
  std::size_t dense_limit = 2048;
  double iterative_tol = 1e-13;
};

struct InfluenceResult {
  Matrix H;                      // n x s, row-stochastic
  std::optional<Matrix> standard_error;  // Monte Carlo only: sqrt(p (1 - p) / N)
  std::string_view method;
};

/// Sink consensus values xbar_k = sum_{i in S_k} pi^(k)_i x0_i, where
/// pi^(k) is the centrality of the sink's induced subgraph.
Vector sink_averages(const Condensation& cond, const DerivedMatrices& m, const Vector& x0,
                     std::vector<Vector>* sink_centralities = nullptr);

/// Influence matrix H. Rows of sink nodes are exact indicators. Requires
/// alpha < 1 (SingularSystem otherwise); Monte Carlo throws
/// MonteCarloCapExceeded if a walk is not absorbed within step_cap steps.
InfluenceResult influence_matrix(const Condensation& cond, const DerivedMatrices& m,
                                 const InfluenceMethod& method = BlockSolve{},
                                 const SolveOptions& opts = {});

struct EquilibriumProfile {
  Vector xbar;
  Matrix H;
  Vector x_star;
  std::vector<Vector> sink_centralities;
};

EquilibriumProfile equilibrium_profile(const Condensation& cond, const DerivedMatrices& m,
                                       const Vector& x0,
                                       const InfluenceMethod& method = BlockSolve{},
                                       const SolveOptions& opts = {});

}  // namespace averkit
