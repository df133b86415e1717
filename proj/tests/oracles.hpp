#pragma once

// Independent reference implementations used only by tests. Each one is the
// slow, obvious computation of a quantity the library computes cleverly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "landscape/diagram.hpp"
#include "landscape/piecewise_linear.hpp"

namespace oracle {

using landscape::DiagramPoint;
using landscape::PersistenceDiagram;

// k-th largest tent value at t (k is 1-based).
inline double kth_tent(const PersistenceDiagram& d, std::size_t k, double t) {
  std::vector<double> v;
  for (const auto& p : d.points) v.push_back(std::max(0.0, std::min(t - p.birth, p.death - t)));
  std::sort(v.begin(), v.end(), std::greater<>());
  return k <= v.size() ? v[k - 1] : 0.0;
}

// Random finite diagram; about a third of the draws snap to a coarse grid so
// that ties, duplicates and shared endpoints occur.
inline PersistenceDiagram random_diagram(std::mt19937_64& gen, std::size_t max_points, int degree = 1) {
  std::uniform_int_distribution<std::size_t> count(0, max_points);
  std::uniform_real_distribution<double> birth(-5.0, 5.0);
  std::uniform_real_distribution<double> length(0.01, 4.0);
  std::bernoulli_distribution snap(1.0 / 3.0);
  PersistenceDiagram d;
  d.degree = degree;
  const std::size_t n = count(gen);
  for (std::size_t i = 0; i < n; ++i) {
    double b = birth(gen);
    double l = length(gen);
    if (snap(gen)) {
      b = std::round(b * 2.0) / 2.0;
      l = std::max(0.5, std::round(l * 2.0) / 2.0);
    }
    d.points.push_back({b, b + l});
  }
  return d;
}

// Exhaustive optimum over diagonal-augmented bijections. Diagonal-to-diagonal
// pairs cost nothing, so it suffices to enumerate partial injections D -> D':
// unmatched points of D go to the diagonal (eps = pers/2, ell = pers) and
// unmatched points of D' come from it (eps = pers/2, ell = 0).
struct MatchingOptimum {
  double min_sum = std::numeric_limits<double>::infinity();
  double min_max = std::numeric_limits<double>::infinity();
};

inline double sup_dist(const DiagramPoint& x, const DiagramPoint& y) {
  return std::max(std::abs(x.birth - y.birth), std::abs(x.death - y.death));
}

inline MatchingOptimum brute_force_matching(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                            const std::function<double(double, double)>& cost) {
  MatchingOptimum best;
  std::vector<int> target_of(a.size(), -1);
  std::vector<char> used(b.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == a.size()) {
      double sum = 0.0, mx = 0.0;
      for (std::size_t r = 0; r < a.size(); ++r) {
        const auto& x = a.points[r];
        const double eps = target_of[r] < 0 ? 0.5 * x.persistence()
                                            : sup_dist(x, b.points[static_cast<std::size_t>(target_of[r])]);
        sum += cost(eps, x.persistence());
        mx = std::max(mx, eps);
      }
      for (std::size_t c = 0; c < b.size(); ++c) {
        if (used[c]) continue;
        const double eps = 0.5 * b.points[c].persistence();
        sum += cost(eps, 0.0);
        mx = std::max(mx, eps);
      }
      best.min_sum = std::min(best.min_sum, sum);
      best.min_max = std::min(best.min_max, mx);
      return;
    }
    target_of[i] = -1;
    rec(i + 1);
    for (std::size_t c = 0; c < b.size(); ++c) {
      if (used[c]) continue;
      used[c] = 1;
      target_of[i] = static_cast<int>(c);
      rec(i + 1);
      used[c] = 0;
    }
    target_of[i] = -1;
  };
  rec(0);
  return best;
}

// Adaptive Simpson quadrature in long double.
template <typename F>
long double simpson(const F& f, long double a, long double b, long double tol, int depth = 60) {
  auto step = [&](auto&& self, long double lo, long double hi, long double flo, long double fmid,
                  long double fhi, long double whole, long double eps, int d) -> long double {
    const long double mid = 0.5L * (lo + hi);
    const long double lm = 0.5L * (lo + mid), rm = 0.5L * (mid + hi);
    const long double flm = f(lm), frm = f(rm);
    const long double left = (mid - lo) / 6.0L * (flo + 4.0L * flm + fmid);
    const long double right = (hi - mid) / 6.0L * (fmid + 4.0L * frm + fhi);
    const long double delta = left + right - whole;
    if (d <= 0 || std::fabs(delta) <= 15.0L * eps) return left + right + delta / 15.0L;
    return self(self, lo, mid, flo, flm, fmid, left, 0.5L * eps, d - 1) +
           self(self, mid, hi, fmid, frm, fhi, right, 0.5L * eps, d - 1);
  };
  const long double fa = f(a), fb = f(b), fm = f(0.5L * (a + b));
  const long double whole = (b - a) / 6.0L * (fa + 4.0L * fm + fb);
  return step(step, a, b, fa, fm, fb, whole, tol, depth);
}

// Student t CDF by integrating the density from 0.
inline double student_cdf(double t, double df) {
  const long double nu = df;
  const long double logc = std::lgamma((nu + 1.0L) / 2.0L) - std::lgamma(nu / 2.0L) -
                           0.5L * std::log(nu * 3.14159265358979323846264338327950288L);
  auto density = [&](long double x) {
    return std::exp(logc - (nu + 1.0L) / 2.0L * std::log1p(x * x / nu));
  };
  const long double half = simpson(density, 0.0L, std::fabs(static_cast<long double>(t)), 1e-15L);
  return static_cast<double>(t >= 0 ? 0.5L + half : 0.5L - half);
}

// F CDF by integrating the density; x = u^2 removes the singularity at 0.
inline double f_cdf(double x, double d1, double d2) {
  if (x <= 0.0) return 0.0;
  const long double a = d1, b = d2;
  const long double logc = std::lgamma((a + b) / 2.0L) - std::lgamma(a / 2.0L) - std::lgamma(b / 2.0L) +
                           a / 2.0L * std::log(a / b);
  auto integrand = [&](long double u) -> long double {
    if (u == 0.0L) return a == 1.0L ? 2.0L * std::exp(logc) : 0.0L;
    const long double v = u * u;
    return 2.0L * u *
           std::exp(logc + (a / 2.0L - 1.0L) * std::log(v) - (a + b) / 2.0L * std::log1p(a * v / b));
  };
  return static_cast<double>(simpson(integrand, 0.0L, std::sqrt(static_cast<long double>(x)), 1e-15L));
}

// Rank over F2 of a 0/1 matrix given as rows of bitsets.
inline std::size_t f2_rank(std::vector<std::vector<std::uint64_t>> rows) {
  std::size_t rank = 0;
  const std::size_t words = rows.empty() ? 0 : rows.front().size();
  for (std::size_t bit = 0; bit < words * 64 && rank < rows.size(); ++bit) {
    const std::size_t w = bit / 64;
    const std::uint64_t mask = std::uint64_t{1} << (bit % 64);
    std::size_t pivot = rank;
    while (pivot < rows.size() && !(rows[pivot][w] & mask)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && (rows[r][w] & mask)) {
        for (std::size_t k = 0; k < words; ++k) rows[r][k] ^= rows[rank][k];
      }
    }
    ++rank;
  }
  return rank;
}

// Kruskal: sorted MST edge weights of the graph with edges (u, v, w).
struct Edge {
  std::size_t u, v;
  double w;
};

inline std::vector<double> mst_weights(std::size_t n, std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.w < y.w; });
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  std::vector<double> out;
  for (const auto& e : edges) {
    const auto a = find(e.u), b = find(e.v);
    if (a == b) continue;
    parent[a] = b;
    out.push_back(e.w);
  }
  return out;
}

// Pointwise check that a PL function has |slope| <= 1 and values >= 0.
inline bool lipschitz_nonnegative(const landscape::PiecewiseLinearFunction& f) {
  const auto& pts = f.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].value < 0.0) return false;
    if (i > 0) {
      const double dt = pts[i].t - pts[i - 1].t;
      const double dv = std::abs(pts[i].value - pts[i - 1].value);
      if (dv > dt * (1.0 + 1e-9) + 1e-12) return false;
    }
  }
  return true;
}

// f >= g at the union of their breakpoints (enough for PL functions).
inline bool dominates(const landscape::PiecewiseLinearFunction& f,
                      const landscape::PiecewiseLinearFunction& g) {
  std::vector<double> ts;
  for (const auto& p : f.points()) ts.push_back(p.t);
  for (const auto& p : g.points()) ts.push_back(p.t);
  for (double t : ts) {
    if (f(t) < g(t) - 1e-12) return false;
  }
  return true;
}

}  // namespace oracle
