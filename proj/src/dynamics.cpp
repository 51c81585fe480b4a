#include "averkit/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "averkit/components.hpp"
#include "averkit/edge_list.hpp"

namespace averkit {

Trajectory simulate(const DerivedMatrices& m, const Vector& x0, std::size_t t_max, double tol) {
  if (static_cast<std::size_t>(x0.size()) != m.size()) {
    throw Error(ErrorKind::InvalidArgument, "x0 length does not match node count");
  }
  Trajectory traj;
  traj.alpha = m.alpha;
  traj.states.reserve(std::min<std::size_t>(t_max + 1, 4096));
  traj.states.push_back(x0);
  for (std::size_t t = 0; t < t_max; ++t) {
    Vector next = m.P_alpha * traj.states.back();
    const double step = (next - traj.states.back()).lpNorm<Eigen::Infinity>();
    traj.states.push_back(std::move(next));
    if (step < tol) {
      traj.converged_at = t;
      break;
    }
  }
  return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << 't';
  const auto n = traj.states.empty() ? 0 : traj.states.front().size();
  for (Eigen::Index i = 0; i < n; ++i) out << ",x_" << i;
  out << '\n';
  for (std::size_t t = 0; t < traj.states.size(); ++t) {
    out << t;
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double(traj.states[t][i]);
    out << '\n';
  }
}

Vector stationary_distribution_direct(const Matrix& P) {
  const auto n = P.rows();
  Matrix A = P.transpose() - Matrix::Identity(n, n);
  A.row(n - 1).setOnes();
  Vector b = Vector::Zero(n);
  b[n - 1] = 1.0;
  Eigen::FullPivLU<Matrix> lu(A);
  if (!lu.isInvertible()) {
    throw Error(ErrorKind::NotConnected, "stationary distribution is not unique");
  }
  Vector pi = lu.solve(b);
  pi = pi.cwiseMax(0.0);
  return pi / pi.sum();
}

Vector stationary_distribution(const Matrix& P) {
  const auto n = P.rows();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty matrix");
  if (!is_connected(P)) throw Error(ErrorKind::NotConnected, "graph is not connected");
  if (n == 1) return Vector::Ones(1);

  const Matrix lazy_t = 0.5 * (Matrix::Identity(n, n) + P).transpose();
  // Cap: 10 n tau with the crude tau estimate n.
  const std::size_t cap = 10 * static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  Vector pi = Vector::Constant(n, 1.0 / static_cast<double>(n));
  for (std::size_t it = 0; it < cap; ++it) {
    Vector next = lazy_t * pi;
    next /= next.sum();
    const double change = (next - pi).lpNorm<1>();
    pi = std::move(next);
    if (change < 1e-12) return pi;
  }
  return stationary_distribution_direct(P);
}

Vector centrality(const DerivedMatrices& m) { return stationary_distribution(m.P); }

double worst_row_distance(const Matrix& power, const Vector& pi) {
  return (power.rowwise() - pi.transpose()).cwiseAbs().rowwise().sum().maxCoeff();
}

std::size_t mixing_time(const Matrix& P_alpha, const Vector& pi, const MixingOptions& opts) {
  const auto n = P_alpha.rows();
  if (!is_connected(P_alpha)) throw Error(ErrorKind::NotConnected, "graph is not connected");
  const double threshold = 1.0 / (2.0 * std::numbers::e);
  Matrix power = Matrix::Identity(n, n);
  Matrix prev1, prev2;
  for (std::size_t t = 0; t <= opts.t_cap; ++t) {
    if (worst_row_distance(power, pi) <= threshold) return t;
    // An exactly repeating power sequence that has not mixed never will.
    if ((t >= 1 && power == prev1) || (t >= 2 && power == prev2)) break;
    prev2 = std::move(prev1);
    prev1 = power;
    power = power * P_alpha;
  }
  throw Error(ErrorKind::MixingCapExceeded,
              "mixing time exceeds cap of " + std::to_string(opts.t_cap) + " steps");
}

std::size_t mixing_time(const DerivedMatrices& m, const Vector& pi, const MixingOptions& opts) {
  return mixing_time(m.P_alpha, pi, opts);
}

double bottleneck_ratio(const Matrix& P, const Vector& pi, const std::vector<NodeId>& subset) {
  const auto n = P.rows();
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (NodeId i : subset) in[i] = 1;
  double flux = 0.0, mass = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!in[static_cast<std::size_t>(i)]) continue;
    mass += pi[i];
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!in[static_cast<std::size_t>(j)]) flux += pi[i] * P(i, j);
    }
  }
  return flux / (mass * (1.0 - mass));
}

namespace {

std::vector<NodeId> mask_nodes(std::uint32_t mask) {
  std::vector<NodeId> out;
  while (mask) {
    out.push_back(static_cast<NodeId>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

}  // namespace

ConductanceResult conductance(const Matrix& P, const Vector& pi) {
  const auto n = static_cast<std::size_t>(P.rows());
  if (n > kMaxExhaustiveNodes) {
    throw Error(ErrorKind::TooLargeForExhaustive,
                "exhaustive conductance limited to " + std::to_string(kMaxExhaustiveNodes) +
                    " nodes, got " + std::to_string(n));
  }
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "conductance needs at least 2 nodes");

  const Matrix Q = pi.asDiagonal() * P;  // probability flux i -> j
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);

  // Walk subsets in Gray-code order, updating flux and mass in O(n) per
  // step; candidates near the running minimum are re-evaluated exactly.
  auto exact = [&](std::uint32_t mask) { return bottleneck_ratio(P, pi, mask_nodes(mask)); };
  auto recompute = [&](std::uint32_t mask, double& flux, double& mass) {
    flux = 0.0;
    mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1u)) continue;
      mass += pi[static_cast<Eigen::Index>(i)];
      for (std::size_t j = 0; j < n; ++j) {
        if (!(mask >> j & 1u)) flux += Q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  };

  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  double flux = 0.0, mass = 0.0;
  std::uint32_t mask = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t g = 1; g < total; ++g) {
    const auto k = static_cast<std::size_t>(std::countr_zero(g));
    const auto ki = static_cast<Eigen::Index>(k);
    const bool adding = !(mask >> k & 1u);
    double into_k = 0.0, out_of_k = 0.0;  // w.r.t. current U without k
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      const auto ji = static_cast<Eigen::Index>(j);
      if (mask >> j & 1u) into_k += Q(ji, ki);
      else out_of_k += Q(ki, ji);
    }
    if (adding) {
      flux += out_of_k - into_k;
      mass += pi[ki];
    } else {
      flux -= out_of_k - into_k;
      mass -= pi[ki];
    }
    mask ^= (1u << k);
    if ((g & 0xfff) == 0) recompute(mask, flux, mass);
    if (mask == full) continue;
    const double ratio = flux / (mass * (1.0 - mass));
    if (ratio <= best * (1.0 + 1e-9) + 1e-300) {
      const double r = exact(mask);
      if (best_mask == 0 || (r < best && !nearly_equal(r, best, 1e-12))) {
        best = r;
        best_mask = mask;
      } else if (nearly_equal(r, best, 1e-12) && mask_nodes(mask) < mask_nodes(best_mask)) {
        best_mask = mask;
        best = std::min(best, r);
      }
    }
  }
  ConductanceResult out;
  out.argmin = mask_nodes(best_mask);
  out.phi = exact(best_mask);
  return out;
}

ConductanceResult conductance(const DerivedMatrices& m, const Vector& pi) {
  if (!is_connected(m.P)) throw Error(ErrorKind::NotConnected, "graph is not connected");
  return conductance(m.P, pi);
}

ConductanceBoundCheck check_conductance_bound(std::size_t tau_half, double phi, double pi_star) {
  ConductanceBoundCheck c;
  const double tau = static_cast<double>(tau_half);
  c.lower = (1.0 - 2.0 / std::numbers::e) / phi;
  c.upper = std::log(std::numbers::e * std::numbers::e / pi_star) / (phi * phi);
  c.lower_holds = c.lower <= tau;
  c.upper_applicable = phi <= 1.0;
  c.upper_holds = tau <= c.upper;
  return c;
}

bool check_convergence_envelope(const Trajectory& traj, const Vector& pi, std::size_t tau,
                                double slack) {
  if (traj.states.empty()) return true;
  const Vector& x0 = traj.states.front();
  const double xbar = pi.dot(x0);
  const double initial = (x0.array() - xbar).abs().maxCoeff();
  for (std::size_t t = 0; t < traj.states.size(); ++t) {
    const double dev = (traj.states[t].array() - xbar).abs().maxCoeff();
    double factor = 1.0;
    if (tau == 0) factor = (t == 0) ? 1.0 : 0.0;
    else factor = std::exp(-static_cast<double>(t / tau));
    if (dev > initial * factor + slack * std::max(1.0, initial)) return false;
  }
  return true;
}

}  // namespace averkit
