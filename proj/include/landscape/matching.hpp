#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "landscape/diagram.hpp"
#include "landscape/error.hpp"

namespace landscape {

/// Minimum-cost perfect assignment on a dense n x n cost matrix, solved by
/// shortest augmenting paths with vertex potentials (O(n^3)).
/// Returns assignment[row] = column.
class AssignmentSolver {
 public:
  using CostFn = std::function<double(std::size_t, std::size_t)>;

  static std::vector<std::size_t> solve(std::size_t n, const CostFn& cost) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    // 1-based arrays; index 0 is the virtual root column.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (std::size_t row = 1; row <= n; ++row) {
      match[0] = row;
      std::size_t col0 = 0;
      std::fill(minv.begin(), minv.end(), kInf);
      std::fill(used.begin(), used.end(), 0);
      do {
        used[col0] = 1;
        const std::size_t r = match[col0];
        double delta = kInf;
        std::size_t col1 = 0;
        for (std::size_t c = 1; c <= n; ++c) {
          if (used[c]) {
            continue;
          }
          const double reduced = cost(r - 1, c - 1) - u[r] - v[c];
          if (reduced < minv[c]) {
            minv[c] = reduced;
            way[c] = col0;
          }
          if (minv[c] < delta) {
            delta = minv[c];
            col1 = c;
          }
        }
        for (std::size_t c = 0; c <= n; ++c) {
          if (used[c]) {
            u[match[c]] += delta;
            v[c] -= delta;
          } else {
            minv[c] -= delta;
          }
        }
        col0 = col1;
      } while (match[col0] != 0);
      do {
        const std::size_t col1 = way[col0];
        match[col0] = match[col1];
        col0 = col1;
      } while (col0 != 0);
    }
    std::vector<std::size_t> assignment(n);
    for (std::size_t c = 1; c <= n; ++c) {
      if (match[c] != 0) {
        assignment[match[c] - 1] = c - 1;
      }
    }
    return assignment;
  }
};

/// Hopcroft-Karp maximum bipartite matching on an implicit dense graph.
class BipartiteMatcher {
 public:
  using EdgeFn = std::function<bool(std::size_t, std::size_t)>;

  /// True if the n x n graph defined by `edge` has a perfect matching.
  static bool has_perfect_matching(std::size_t n, const EdgeFn& edge) {
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (edge(i, j)) {
          adj[i].push_back(j);
        }
      }
      if (adj[i].empty()) {
        return false;
      }
    }
    std::vector<std::size_t> match_left(n, kNone), match_right(n, kNone), dist(n);
    std::size_t matched = 0;

    auto bfs = [&]() {
      std::queue<std::size_t> queue;
      bool found = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (match_left[i] == kNone) {
          dist[i] = 0;
          queue.push(i);
        } else {
          dist[i] = kNone;
        }
      }
      while (!queue.empty()) {
        const std::size_t i = queue.front();
        queue.pop();
        for (std::size_t j : adj[i]) {
          const std::size_t k = match_right[j];
          if (k == kNone) {
            found = true;
          } else if (dist[k] == kNone) {
            dist[k] = dist[i] + 1;
            queue.push(k);
          }
        }
      }
      return found;
    };

    std::function<bool(std::size_t)> dfs = [&](std::size_t i) -> bool {
      for (std::size_t j : adj[i]) {
        const std::size_t k = match_right[j];
        if (k == kNone || (dist[k] == dist[i] + 1 && dfs(k))) {
          match_left[i] = j;
          match_right[j] = i;
          return true;
        }
      }
      dist[i] = kNone;
      return false;
    };

    while (bfs()) {
      for (std::size_t i = 0; i < n; ++i) {
        if (match_left[i] == kNone && dfs(i)) {
          ++matched;
        }
      }
    }
    return matched == n;
  }
};

namespace detail {

inline void require_finite(const PersistenceDiagram& d, const char* what) {
  for (const auto& p : d.points) {
    if (!p.is_finite()) {
      throw ContractError(std::string(what) + ": infinite interval " + to_string(p) +
                          "; threshold the diagram first");
    }
  }
}

inline double sup_distance(const DiagramPoint& x, const DiagramPoint& y) {
  return std::max(std::abs(x.birth - y.birth), std::abs(x.death - y.death));
}

/// Diagonal-augmented bipartite problem between D (rows) and D' (columns).
/// Rows: points of D, then one diagonal slot per point of D'.
/// Columns: points of D', then one diagonal slot per point of D.
/// A point matched to a diagonal slot pays (d - b)/2, the sup-norm distance to
/// its nearest diagonal point; diagonal-to-diagonal pairs cost nothing.
struct AugmentedPair {
  const PersistenceDiagram& source;
  const PersistenceDiagram& target;

  std::size_t size() const { return source.size() + target.size(); }

  // Returns {epsilon, ell} for the pair (row, col); ell is the persistence of the
  // source endpoint (0 for a diagonal source).
  std::pair<double, double> pair(std::size_t row, std::size_t col) const {
    const std::size_t n = source.size();
    const std::size_t m = target.size();
    const bool row_real = row < n;
    const bool col_real = col < m;
    if (row_real && col_real) {
      const auto& x = source.points[row];
      return {sup_distance(x, target.points[col]), x.persistence()};
    }
    if (row_real) {
      const auto& x = source.points[row];
      return {0.5 * x.persistence(), x.persistence()};
    }
    if (col_real) {
      return {0.5 * target.points[col].persistence(), 0.0};
    }
    return {0.0, 0.0};
  }
};

template <typename PairCost>
double min_assignment_cost(const AugmentedPair& problem, PairCost pair_cost) {
  const std::size_t n = problem.size();
  if (n == 0) {
    return 0.0;
  }
  auto cost = [&](std::size_t r, std::size_t c) {
    auto [eps, ell] = problem.pair(r, c);
    return pair_cost(eps, ell);
  };
  const auto assignment = AssignmentSolver::solve(n, cost);
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    total += cost(r, assignment[r]);
  }
  return total;
}

}  // namespace detail

/// W_inf: smallest eps admitting a diagonal-augmented perfect matching with
/// every pair within eps. Found by binary search over the candidate pair costs.
inline double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  detail::require_finite(a, "bottleneck_distance");
  detail::require_finite(b, "bottleneck_distance");
  const detail::AugmentedPair problem{a, b};
  const std::size_t n = problem.size();
  if (n == 0) {
    return 0.0;
  }
  std::vector<double> candidates;
  candidates.reserve(a.size() * b.size() + n);
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t c = 0; c < b.size(); ++c) {
      candidates.push_back(problem.pair(r, c).first);
    }
    candidates.push_back(problem.pair(r, b.size()).first);
  }
  for (std::size_t c = 0; c < b.size(); ++c) {
    candidates.push_back(problem.pair(a.size(), c).first);
  }
  candidates.push_back(0.0);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;  // the largest candidate always admits a matching
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const double eps = candidates[mid];
    const bool feasible = BipartiteMatcher::has_perfect_matching(
        n, [&](std::size_t r, std::size_t c) { return problem.pair(r, c).first <= eps; });
    if (feasible) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

/// W_p = (min over bijections of sum eps_j^p)^{1/p}.
inline double wasserstein_distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                   int p) {
  if (p < 1) {
    throw ContractError("wasserstein_distance: p must be a positive integer");
  }
  detail::require_finite(a, "wasserstein_distance");
  detail::require_finite(b, "wasserstein_distance");
  const double total = detail::min_assignment_cost(
      {a, b}, [p](double eps, double) { return std::pow(eps, p); });
  return std::pow(std::max(total, 0.0), 1.0 / p);
}

/// Persistence-weighted W_p: each pair costs ell_j * eps_j^p, ell_j taken from
/// the first diagram. Asymmetric.
inline double weighted_wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                   int p) {
  if (p < 1) {
    throw ContractError("weighted_wasserstein: p must be a positive integer");
  }
  detail::require_finite(a, "weighted_wasserstein");
  detail::require_finite(b, "weighted_wasserstein");
  const double total = detail::min_assignment_cost(
      {a, b}, [p](double eps, double ell) { return ell * std::pow(eps, p); });
  return std::pow(std::max(total, 0.0), 1.0 / p);
}

/// min over bijections of sum_j [ell_j eps_j^p + 2/(p+1) eps_j^{p+1}]; an upper
/// bound on Lambda_p(D, D')^p.
inline double stability_bound(const PersistenceDiagram& a, const PersistenceDiagram& b, int p) {
  if (p < 1) {
    throw ContractError("stability_bound: p must be a positive integer");
  }
  detail::require_finite(a, "stability_bound");
  detail::require_finite(b, "stability_bound");
  const double c = 2.0 / (p + 1);
  return detail::min_assignment_cost({a, b}, [p, c](double eps, double ell) {
    return ell * std::pow(eps, p) + c * std::pow(eps, p + 1);
  });
}

}  // namespace landscape
