#include "qmix/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qmix/oracle.hpp"

namespace qmix {

namespace {

constexpr double kCertTol = 1e-10;       // internal certificate stop threshold
constexpr double kActiveEps = 1e-10;     // weight threshold for the active set
constexpr double kDuplicateTol = 1e-12;  // member dedup threshold

struct Context {
  const CoeffVector* target = nullptr;
  const StateSet* set = nullptr;
  Eigen::MatrixXd gram;  // N x N
  Eigen::VectorXd proj;  // R^T r_o
  SolveOptions opts;
  ApproxSolution* out = nullptr;
  bool budget_hit = false;

  // Evaluates one support system; returns the pseudo-probability and logs it.
  PseudoProbability eval(const std::vector<int>& support) {
    ++out->evaluated_supports;
    if (out->evaluated_supports >= opts.budget) budget_hit = true;
    const SupportSystem sys = build_system(*target, *set, support);
    PseudoProbability pp = solve_support(sys, *target, *set);
    SupportOutcome outcome = pp.rank_deficient ? SupportOutcome::rank_deficient
                             : pp.feasible     ? SupportOutcome::feasible
                                               : SupportOutcome::infeasible_sign;
    if (pp.feasible) {
      ++out->feasible_count;
    } else if (pp.rank_deficient) {
      ++out->rank_deficient_count;
    } else {
      ++out->infeasible_count;
    }
    if (out->case_trace.size() < opts.trace_cap) {
      out->case_trace.push_back({support, outcome});
    }
    return pp;
  }

  Eigen::VectorXd full_weights(const std::vector<int>& support,
                               const Eigen::VectorXd& w) const {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(set->size());
    for (std::size_t i = 0; i < support.size(); ++i) p[support[i]] = w[i];
    return p;
  }

  // Simplex first-order optimality: directional derivative toward every
  // vertex must be nonnegative (up to tolerance) at the candidate weights.
  double min_directional_derivative(const Eigen::VectorXd& p) const {
    const Eigen::VectorXd g = gram * p - proj;
    return (g.array() - p.dot(g)).minCoeff();
  }
};

bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Smallest subset of the active set reproducing the optimal distance.
void refine_minimal_support(Context& ctx, const std::vector<int>& active,
                            double best_distance, ApproxSolution& sol) {
  const int m = static_cast<int>(active.size());
  for (int n = 1; n < m; ++n) {
    std::vector<int> pick(n);
    std::iota(pick.begin(), pick.end(), 0);
    do {
      if (ctx.budget_hit) {
        sol.warnings.push_back("support budget exhausted during minimal-n refinement");
        return;
      }
      std::vector<int> support(n);
      for (int i = 0; i < n; ++i) support[i] = active[pick[i]];
      const PseudoProbability pp = ctx.eval(support);
      if (pp.feasible &&
          std::abs(pp.distance - best_distance) <= ctx.opts.distance_tie_tol) {
        sol.distance = pp.distance;
        sol.support = support;
        sol.weights = ctx.full_weights(support, pp.values);
        sol.minimal_n = n;
        return;
      }
    } while (next_combination(pick, m));
  }
}

std::vector<int> active_indices(const Eigen::VectorXd& p) {
  std::vector<int> act;
  for (int i = 0; i < p.size(); ++i) {
    if (p[i] > kActiveEps) act.push_back(i);
  }
  return act;
}

void oracle_fallback(Context& ctx, ApproxSolution& sol) {
  sol.oracle_fallback = true;
  sol.warnings.push_back("fell back to projected-gradient oracle");
  const OracleResult res = projected_gradient(*ctx.target, *ctx.set);
  Eigen::VectorXd w = res.weights.cwiseMax(0.0);
  w /= w.sum();

  std::vector<int> act = active_indices(w);
  const int cap = ctx.set->dim * ctx.set->dim;
  if (static_cast<int>(act.size()) > cap) {
    auto [rw, ridx] = caratheodory_reduce(w, ctx.set->vectors);
    w.setZero();
    for (std::size_t i = 0; i < ridx.size(); ++i) {
      w[ridx[i]] = rw[static_cast<Eigen::Index>(i)];
    }
    act = ridx;
  }
  sol.distance = 0.5 * (ctx.target->coeffs - ctx.set->vectors * w).squaredNorm();
  sol.weights = w;
  sol.support = act;
  sol.minimal_n = static_cast<int>(act.size());
}

// Active-set descent over Theorem-1 support systems. Returns true and fills
// (weights, distance) once the global-optimality certificate holds.
bool descend(Context& ctx, Eigen::VectorXd& best_p, double& best_distance) {
  const StateSet& set = *ctx.set;
  const CoeffVector& ro = *ctx.target;
  const int n = set.size();

  int start = 0;
  double start_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double d = 0.5 * (ro.coeffs - set.vectors.col(i)).squaredNorm();
    if (d < start_d) {
      start_d = d;
      start = i;
    }
  }
  std::vector<int> support = {start};
  Eigen::VectorXd w = Eigen::VectorXd::Ones(1);

  const int max_steps = 100 * n + 1000;
  for (int step = 0; step < max_steps; ++step) {
    if (ctx.budget_hit) return false;
    const PseudoProbability pp = ctx.eval(support);
    const int K = static_cast<int>(support.size());

    if (pp.rank_deficient) {
      int drop = 0;
      for (int i = 1; i < K; ++i) {
        if (w[i] < w[drop]) drop = i;
      }
      support.erase(support.begin() + drop);
      Eigen::VectorXd w2(K - 1);
      int t = 0;
      for (int i = 0; i < K; ++i) {
        if (i != drop) w2[t++] = w[i];
      }
      const double s = w2.sum();
      w = s > 0.0 ? Eigen::VectorXd(w2 / s)
                  : Eigen::VectorXd::Constant(K - 1, 1.0 / (K - 1));
      continue;
    }

    if (pp.feasible) {
      w = pp.values;
      const Eigen::VectorXd p = ctx.full_weights(support, w);
      const Eigen::VectorXd g = ctx.gram * p - ctx.proj;
      const Eigen::ArrayXd dd = g.array() - p.dot(g);
      // Zero-weight clamped support members sit within tolerance of
      // stationarity already; only off-support vertices can enter.
      int worst = -1;
      std::size_t si = 0;
      for (int i = 0; i < n; ++i) {
        if (si < support.size() && support[si] == i) {
          ++si;
          continue;
        }
        if (worst < 0 || dd[i] < dd[worst]) worst = i;
      }
      if (worst < 0 || dd[worst] >= -kCertTol) {
        best_p = p;
        best_distance = 0.5 * (ro.coeffs - set.vectors * p).squaredNorm();
        return true;
      }
      const auto pos = std::lower_bound(support.begin(), support.end(), worst);
      const int slot = static_cast<int>(pos - support.begin());
      support.insert(pos, worst);
      Eigen::VectorXd w2(K + 1);
      w2 << w.head(slot), 0.0, w.tail(K - slot);
      w = w2;
      continue;
    }

    // Infeasible sign pattern: step from the current weights toward the
    // pseudo-probabilities until the first weight hits zero, drop it.
    double alpha = 1.0;
    int blocking = -1;
    for (int i = 0; i < K; ++i) {
      if (pp.values[i] < 0.0) {
        const double a = w[i] / (w[i] - pp.values[i]);
        if (a < alpha) {
          alpha = a;
          blocking = i;
        }
      }
    }
    if (blocking < 0) {
      // Should not happen: infeasible implies a negative entry.
      return false;
    }
    Eigen::VectorXd stepped = w + alpha * (pp.values - w);
    stepped[blocking] = 0.0;
    support.erase(support.begin() + blocking);
    Eigen::VectorXd w2(K - 1);
    int t = 0;
    for (int i = 0; i < K; ++i) {
      if (i != blocking) w2[t++] = std::max(stepped[i], 0.0);
    }
    const double s = w2.sum();
    w = s > 0.0 ? Eigen::VectorXd(w2 / s)
                : Eigen::VectorXd::Constant(K - 1, 1.0 / (K - 1));
  }
  return false;
}

// Collapses members equal within kDuplicateTol; returns kept original indices.
std::vector<int> dedup_indices(const StateSet& set) {
  std::vector<int> keep;
  for (int i = 0; i < set.size(); ++i) {
    bool dup = false;
    for (int j : keep) {
      if ((set.vectors.col(i) - set.vectors.col(j)).lpNorm<Eigen::Infinity>() <=
          kDuplicateTol) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(i);
  }
  return keep;
}

void check_inputs(const CoeffVector& r_o, const StateSet& set) {
  if (set.size() < 1) throw std::invalid_argument("solve: empty state set");
  if (r_o.dim != set.dim || r_o.coeffs.size() != set.vectors.rows()) {
    throw std::invalid_argument("solve: target and set dimensions differ");
  }
}

// Maps a solution on the deduplicated set back to original indexing.
ApproxSolution remap(const ApproxSolution& sol, const std::vector<int>& keep,
                     int original_n) {
  ApproxSolution out = sol;
  out.weights = Eigen::VectorXd::Zero(original_n);
  for (int i = 0; i < sol.weights.size(); ++i) {
    out.weights[keep[i]] = sol.weights[i];
  }
  out.support.clear();
  for (int i : sol.support) out.support.push_back(keep[i]);
  for (auto& entry : out.case_trace) {
    for (auto& idx : entry.support) idx = keep[idx];
  }
  return out;
}

}  // namespace

ApproxSolution solve(const CoeffVector& r_o, const StateSet& set,
                     const SolveOptions& opts) {
  check_inputs(r_o, set);

  const std::vector<int> keep = dedup_indices(set);
  if (static_cast<int>(keep.size()) < set.size()) {
    StateSet reduced;
    reduced.dim = set.dim;
    reduced.vectors.resize(set.vectors.rows(), keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
      reduced.vectors.col(i) = set.vectors.col(keep[i]);
    }
    ApproxSolution sol = solve(r_o, reduced, opts);
    sol.warnings.push_back("duplicate set members collapsed before search");
    return remap(sol, keep, set.size());
  }

  ApproxSolution sol;
  Context ctx;
  ctx.target = &r_o;
  ctx.set = &set;
  ctx.gram = set.vectors.transpose() * set.vectors;
  ctx.proj = set.vectors.transpose() * r_o.coeffs;
  ctx.opts = opts;
  ctx.out = &sol;

  Eigen::VectorXd p;
  double distance = 0.0;
  if (!descend(ctx, p, distance)) {
    oracle_fallback(ctx, sol);
    return sol;
  }

  sol.distance = distance;
  sol.weights = p;
  sol.support = active_indices(p);
  sol.minimal_n = static_cast<int>(sol.support.size());
  refine_minimal_support(ctx, sol.support, distance, sol);
  return sol;
}

ApproxSolution exhaustive_solve(const CoeffVector& r_o, const StateSet& set,
                                int max_support_size, const SolveOptions& opts) {
  check_inputs(r_o, set);
  const int n = set.size();
  const int cap = set.dim * set.dim;
  const int k_max = max_support_size > 0 ? std::min(max_support_size, n)
                                         : std::min(n, cap);

  ApproxSolution sol;
  Context ctx;
  ctx.target = &r_o;
  ctx.set = &set;
  ctx.gram = set.vectors.transpose() * set.vectors;
  ctx.proj = set.vectors.transpose() * r_o.coeffs;
  ctx.opts = opts;
  ctx.out = &sol;

  bool found = false;
  double best_distance = std::numeric_limits<double>::infinity();
  std::vector<int> best_support;
  Eigen::VectorXd best_weights;

  for (int K = k_max; K >= 1 && !ctx.budget_hit; --K) {
    std::vector<int> pick(K);
    std::iota(pick.begin(), pick.end(), 0);
    do {
      if (ctx.budget_hit) break;
      const PseudoProbability pp = ctx.eval(pick);
      if (!pp.feasible) continue;
      const bool better =
          !found || pp.distance < best_distance - opts.distance_tie_tol ||
          (std::abs(pp.distance - best_distance) <= opts.distance_tie_tol &&
           (pick.size() < best_support.size() ||
            (pick.size() == best_support.size() && pick < best_support)));
      if (better) {
        found = true;
        best_distance = pp.distance;
        best_support = pick;
        best_weights = pp.values;
      }
    } while (next_combination(pick, n));
  }

  if (ctx.budget_hit || !found) {
    oracle_fallback(ctx, sol);
    return sol;
  }
  sol.distance = best_distance;
  sol.support = best_support;
  sol.weights = ctx.full_weights(best_support, best_weights);
  sol.minimal_n = static_cast<int>(best_support.size());
  return sol;
}

std::pair<Eigen::VectorXd, std::vector<int>> caratheodory_reduce(
    const Eigen::VectorXd& weights, const Eigen::MatrixXd& vectors) {
  if (weights.size() != vectors.cols()) {
    throw std::invalid_argument("caratheodory_reduce: size mismatch");
  }
  const int dsq = static_cast<int>(vectors.rows());
  Eigen::VectorXd q = weights;
  std::vector<int> active;
  for (int i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0) active.push_back(i);
  }

  while (static_cast<int>(active.size()) > dsq) {
    const int m = static_cast<int>(active.size());
    Eigen::MatrixXd cols(dsq, m);
    for (int i = 0; i < m; ++i) cols.col(i) = vectors.col(active[i]);

    // Null-space direction; with m > d^2 one always exists. The common unit
    // first coefficient makes its entries sum to zero automatically.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cols, Eigen::ComputeFullV);
    Eigen::VectorXd l = svd.matrixV().col(m - 1);
    if (l.maxCoeff() <= 0.0) l = -l;

    double alpha = std::numeric_limits<double>::infinity();
    int drop = -1;
    for (int i = 0; i < m; ++i) {
      if (l[i] > 0.0) {
        const double a = q[active[i]] / l[i];
        if (a < alpha) {
          alpha = a;
          drop = i;
        }
      }
    }
    for (int i = 0; i < m; ++i) q[active[i]] -= alpha * l[i];
    q[active[drop]] = 0.0;
    active.erase(active.begin() + drop);
    for (int i : active) q[i] = std::max(q[i], 0.0);
  }
  Eigen::VectorXd reduced(static_cast<Eigen::Index>(active.size()));
  for (std::size_t i = 0; i < active.size(); ++i) reduced[i] = q[active[i]];
  return {reduced, active};
}

std::vector<SweepRecord> minimal_support_profile(const TargetFamily& family,
                                                 const StateSet& set,
                                                 const std::vector<double>& k_grid,
                                                 const SolveOptions& opts) {
  std::vector<SweepRecord> records;
  records.reserve(k_grid.size());
  for (double k : k_grid) {
    const CoeffVector target = interpolate(family, k);
    const ApproxSolution sol = solve(target, set, opts);
    records.push_back({k, sol.distance, sol.minimal_n, sol.support, sol.weights});
  }
  return records;
}

}  // namespace qmix
