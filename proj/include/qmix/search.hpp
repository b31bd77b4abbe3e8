#ifndef QMIX_SEARCH_HPP_
#define QMIX_SEARCH_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qmix/kkt.hpp"
#include "qmix/state.hpp"

namespace qmix {

enum class SupportOutcome { feasible, infeasible_sign, rank_deficient };

struct TraceEntry {
  std::vector<int> support;
  SupportOutcome outcome;
};

struct SolveOptions {
  /// Cap on evaluated support systems before falling back to the numerical
  /// oracle plus Caratheodory reduction.
  std::int64_t budget = 1'000'000;
  /// Maximum number of trace entries retained (counters stay exact).
  std::size_t trace_cap = 256;
  /// Distance-equality threshold for the minimal support size.
  double distance_tie_tol = 1e-9;
};

struct ApproxSolution {
  double distance = 0.0;
  Eigen::VectorXd weights;  // length N, zeros off-support
  std::vector<int> support;
  int minimal_n = 0;
  std::int64_t evaluated_supports = 0;
  std::vector<TraceEntry> case_trace;
  std::int64_t feasible_count = 0;
  std::int64_t infeasible_count = 0;
  std::int64_t rank_deficient_count = 0;
  bool oracle_fallback = false;
  std::vector<std::string> warnings;
};

struct SweepRecord {
  double k = 0.0;
  double distance = 0.0;
  int minimal_n = 0;
  std::vector<int> support;
  Eigen::VectorXd weights;
};

/// Globally optimal convex approximation of r_o by members of the set.
///
/// Walks the stationarity systems of supports with an active-set descent:
/// infeasible sign patterns drop the blocking index, rank-deficient systems
/// shrink, and a solution is accepted only once the simplex first-order
/// optimality certificate holds over the full set. The minimal support size
/// is then refined over subsets of the optimal active set.
ApproxSolution solve(const CoeffVector& r_o, const StateSet& set,
                     const SolveOptions& opts = {});

/// Exhaustive variant: evaluates every support of size <= max_support_size
/// (default min(N, d^2)) level by level and takes the global minimum over all
/// feasible supports. Intended for cross-validation and small instances.
ApproxSolution exhaustive_solve(const CoeffVector& r_o, const StateSet& set,
                                int max_support_size = -1,
                                const SolveOptions& opts = {});

/// Caratheodory reduction: rewrites a convex combination of m > d^2 vectors
/// as one of at most d^2 of them, preserving the mixed vector. Returns the
/// reduced weights over the surviving indices.
std::pair<Eigen::VectorXd, std::vector<int>> caratheodory_reduce(
    const Eigen::VectorXd& weights, const Eigen::MatrixXd& vectors);

/// Solves the family target at every k in the grid.
std::vector<SweepRecord> minimal_support_profile(const TargetFamily& family,
                                                 const StateSet& set,
                                                 const std::vector<double>& k_grid,
                                                 const SolveOptions& opts = {});

}  // namespace qmix

#endif  // QMIX_SEARCH_HPP_
