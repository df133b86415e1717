#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "landscape/error.hpp"

namespace landscape {

struct CriticalPoint {
  double t = 0.0;
  double value = 0.0;

  friend bool operator==(const CriticalPoint&, const CriticalPoint&) = default;
};

namespace detail {

// Abscissae closer than this (relative) are treated as the same point.
inline constexpr double kAbscissaTolerance = 1e-12;

inline bool same_abscissa(double a, double b) {
  return std::abs(a - b) <=
         kAbscissaTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

// True if b lies on the segment from a to c up to rounding.
inline bool collinear(const CriticalPoint& a, const CriticalPoint& b,
                      const CriticalPoint& c) {
  const double span = c.t - a.t;
  const double w = (b.t - a.t) / span;
  const double interpolated = a.value + w * (c.value - a.value);
  const double scale =
      std::max({1.0, std::abs(a.value), std::abs(b.value), std::abs(c.value)});
  return std::abs(interpolated - b.value) <= 1e-12 * scale;
}

// Integral of |v|^p over a segment on which v does not change sign, with
// endpoint magnitudes a and b. Uses the expansion
// (b^{p+1} - a^{p+1}) / (b - a) = sum_i a^i b^{p-i}, which is exact for
// a == b and stable when a is close to b.
inline double same_sign_power_integral(double width, double a, double b, int p) {
  // S_0 = 1, S_k = b S_{k-1} + a^k.
  double sum = 1.0;
  double apow = 1.0;
  for (int k = 1; k <= p; ++k) {
    apow *= a;
    sum = sum * b + apow;
  }
  return width * sum / static_cast<double>(p + 1);
}

inline double int_pow(double x, int p) {
  double r = 1.0;
  for (int k = 0; k < p; ++k) r *= x;
  return r;
}

}  // namespace detail

/// A continuous piecewise-linear function on the real line, stored as its
/// critical points. Between consecutive critical points the function is the
/// linear interpolation; outside [t_first, t_last] it is identically zero.
///
/// Instances are always kept in canonical form: abscissae strictly
/// increasing, collinear interior points removed, leading/trailing runs of
/// zeros trimmed. The zero function has no critical points.
class PiecewiseLinearFunction {
 public:
  PiecewiseLinearFunction() = default;

  /// Builds a function from critical points sorted by abscissa. Points whose
  /// abscissae coincide within tolerance are merged. Throws ContractError if
  /// the abscissae decrease or a coordinate is not finite.
  explicit PiecewiseLinearFunction(std::vector<CriticalPoint> points)
      : points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!std::isfinite(points_[i].t) || !std::isfinite(points_[i].value)) {
        throw ContractError("piecewise-linear function: non-finite critical point");
      }
      if (i > 0 && points_[i].t < points_[i - 1].t &&
          !detail::same_abscissa(points_[i].t, points_[i - 1].t)) {
        throw ContractError("piecewise-linear function: abscissae must be increasing");
      }
    }
    canonicalize();
  }

  std::span<const CriticalPoint> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool is_zero() const noexcept { return points_.empty(); }

  double support_min() const noexcept { return points_.empty() ? 0.0 : points_.front().t; }
  double support_max() const noexcept { return points_.empty() ? 0.0 : points_.back().t; }

  double operator()(double t) const noexcept {
    if (points_.empty() || t < points_.front().t || t > points_.back().t) {
      return 0.0;
    }
    auto it = std::lower_bound(points_.begin(), points_.end(), t,
                               [](const CriticalPoint& p, double x) { return p.t < x; });
    if (it->t == t) {
      return it->value;
    }
    const auto& right = *it;
    const auto& left = *(it - 1);
    const double w = (t - left.t) / (right.t - left.t);
    return left.value + w * (right.value - left.value);
  }

  /// Largest |f(t)|; attained at a critical point.
  double sup_abs() const noexcept {
    double best = 0.0;
    for (const auto& p : points_) {
      best = std::max(best, std::abs(p.value));
    }
    return best;
  }

  /// Exact integral of |f|^p over the real line for integer p >= 1.
  /// Segments are split at sign changes so each piece integrates in closed form.
  double integral_abs_pow(int p) const {
    if (p < 1) {
      throw ContractError("integral_abs_pow: exponent must be a positive integer");
    }
    double total = 0.0;
    for (std::size_t i = 1; i < points_.size(); ++i) {
      const auto& a = points_[i - 1];
      const auto& b = points_[i];
      const double width = b.t - a.t;
      if ((a.value >= 0.0 && b.value >= 0.0) || (a.value <= 0.0 && b.value <= 0.0)) {
        total += detail::same_sign_power_integral(width, std::abs(a.value),
                                                  std::abs(b.value), p);
      } else {
        const double va = std::abs(a.value);
        const double vb = std::abs(b.value);
        const double left = width * va / (va + vb);
        const double right = width - left;
        total += (left * detail::int_pow(va, p) + right * detail::int_pow(vb, p)) / (p + 1);
      }
    }
    return total;
  }

  /// Signed integral of f over [lo, hi] (lo may be -inf, hi may be +inf).
  double integral(double lo = -std::numeric_limits<double>::infinity(),
                  double hi = std::numeric_limits<double>::infinity()) const noexcept {
    if (points_.empty() || hi <= lo) {
      return 0.0;
    }
    double total = 0.0;
    for (std::size_t i = 1; i < points_.size(); ++i) {
      double t0 = points_[i - 1].t;
      double t1 = points_[i].t;
      if (t1 <= lo || t0 >= hi) {
        continue;
      }
      double v0 = points_[i - 1].value;
      double v1 = points_[i].value;
      const double slope = (v1 - v0) / (t1 - t0);
      if (t0 < lo) {
        v0 += slope * (lo - t0);
        t0 = lo;
      }
      if (t1 > hi) {
        v1 -= slope * (t1 - hi);
        t1 = hi;
      }
      total += 0.5 * (v0 + v1) * (t1 - t0);
    }
    return total;
  }

  PiecewiseLinearFunction scaled(double c) const {
    if (c == 0.0 || points_.empty()) {
      return {};
    }
    std::vector<CriticalPoint> out(points_.begin(), points_.end());
    for (auto& p : out) {
      p.value *= c;
    }
    return PiecewiseLinearFunction(std::move(out));
  }

  /// Returns a*f + b*g, exact on the union of both abscissa sets.
  static PiecewiseLinearFunction combine(double a, const PiecewiseLinearFunction& f,
                                         double b, const PiecewiseLinearFunction& g) {
    if (f.is_zero() || a == 0.0) {
      return g.scaled(b);
    }
    if (g.is_zero() || b == 0.0) {
      return f.scaled(a);
    }
    std::vector<CriticalPoint> out;
    out.reserve(f.size() + g.size());
    const auto fp = f.points();
    const auto gp = g.points();
    // Value of h at t, where t lies strictly before hp[k] (or past the end).
    auto between = [](std::span<const CriticalPoint> hp, std::size_t k, double t) {
      if (k == 0 || k == hp.size()) return 0.0;
      const auto& lo = hp[k - 1];
      const auto& hi = hp[k];
      return lo.value + (hi.value - lo.value) * ((t - lo.t) / (hi.t - lo.t));
    };
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < fp.size() || j < gp.size()) {
      if (j == gp.size() || (i < fp.size() && fp[i].t < gp[j].t)) {
        out.push_back({fp[i].t, a * fp[i].value + b * between(gp, j, fp[i].t)});
        ++i;
      } else if (i == fp.size() || gp[j].t < fp[i].t) {
        out.push_back({gp[j].t, a * between(fp, i, gp[j].t) + b * gp[j].value});
        ++j;
      } else {
        out.push_back({fp[i].t, a * fp[i].value + b * gp[j].value});
        ++i;
        ++j;
      }
    }
    return PiecewiseLinearFunction(std::move(out));
  }

  /// Returns sum_i coefficients[i] * functions[i] by balanced pairwise merging,
  /// so the total cost is O(M log N) for N functions with M critical points.
  static PiecewiseLinearFunction weighted_sum(std::span<const double> coefficients,
                                              std::span<const PiecewiseLinearFunction* const> functions) {
    if (coefficients.size() != functions.size()) {
      throw ContractError("weighted_sum: coefficient/function count mismatch");
    }
    if (functions.empty()) {
      return {};
    }
    std::vector<PiecewiseLinearFunction> layer;
    layer.reserve(functions.size());
    for (std::size_t i = 0; i < functions.size(); ++i) {
      layer.push_back(functions[i]->scaled(coefficients[i]));
    }
    while (layer.size() > 1) {
      std::vector<PiecewiseLinearFunction> next;
      next.reserve((layer.size() + 1) / 2);
      for (std::size_t i = 0; i + 1 < layer.size(); i += 2) {
        next.push_back(combine(1.0, layer[i], 1.0, layer[i + 1]));
      }
      if (layer.size() % 2 == 1) {
        next.push_back(std::move(layer.back()));
      }
      layer = std::move(next);
    }
    return std::move(layer.front());
  }

  friend bool operator==(const PiecewiseLinearFunction&, const PiecewiseLinearFunction&) = default;

 private:
  // In place: merge near-equal abscissae, trim zero runs, drop collinear points.
  void canonicalize() {
    std::size_t n = 0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (n > 0 && detail::same_abscissa(points_[n - 1].t, points_[i].t)) {
        continue;
      }
      points_[n++] = points_[i];
    }
    // Drop leading and trailing zero runs, keeping one zero at each end.
    std::size_t first = 0;
    while (first + 1 < n && points_[first].value == 0.0 && points_[first + 1].value == 0.0) {
      ++first;
    }
    std::size_t last = n;
    while (last > first + 1 && points_[last - 1].value == 0.0 && points_[last - 2].value == 0.0) {
      --last;
    }
    std::size_t out = first;
    for (std::size_t i = first; i < last; ++i) {
      const CriticalPoint p = points_[i];
      while (out >= first + 2 && detail::collinear(points_[out - 2], points_[out - 1], p)) {
        --out;
      }
      points_[out++] = p;
    }
    const bool all_zero = std::all_of(points_.begin() + static_cast<std::ptrdiff_t>(first),
                                      points_.begin() + static_cast<std::ptrdiff_t>(out),
                                      [](const CriticalPoint& p) { return p.value == 0.0; });
    if (all_zero) {
      points_.clear();
      return;
    }
    points_.resize(out);
    points_.erase(points_.begin(), points_.begin() + static_cast<std::ptrdiff_t>(first));
  }

  std::vector<CriticalPoint> points_;
};

}  // namespace landscape
