#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "landscape/distributions.hpp"
#include "landscape/error.hpp"
#include "landscape/landscape.hpp"
#include "landscape/metrics.hpp"
#include "landscape/random.hpp"

namespace landscape {

// ---------------------------------------------------------------------------
// Mean landscape and functionals

inline PersistenceLandscape mean_landscape(std::span<const PersistenceLandscape> samples) {
  if (samples.empty()) {
    throw ContractError("mean_landscape: no samples");
  }
  const double w = 1.0 / static_cast<double>(samples.size());
  std::vector<LandscapeTerm> terms;
  terms.reserve(samples.size());
  for (const auto& s : samples) {
    terms.push_back({w, &s});
  }
  return linear_combination(terms);
}

/// A continuous linear functional Y = sum_k int f_k(t) lambda_k(t) dt.
struct FunctionalSpec {
  enum class Kind { kIndicator, kWeighted, kCustom };

  Kind kind = Kind::kIndicator;
  /// Window half-width; the weight vanishes outside [-bound, bound].
  double bound = kInfinity;
  /// Indicator kind: number of levels integrated (nullopt = all).
  std::optional<std::size_t> levels;
  /// Weighted kind: f_k = k^{-decay} on the window.
  double decay = 2.0;
  /// Custom kind: one piecewise-linear weight per level (missing levels weigh 0).
  std::vector<PiecewiseLinearFunction> weights;

  /// Indicator of [-bound, bound] on the first `levels` levels; with both
  /// defaults this is the L1 norm of a non-negative landscape.
  static FunctionalSpec indicator(double bound = kInfinity,
                                  std::optional<std::size_t> levels = std::nullopt) {
    FunctionalSpec f;
    f.kind = Kind::kIndicator;
    f.bound = bound;
    f.levels = levels;
    f.validate();
    return f;
  }

  static FunctionalSpec weighted(double decay, double bound = kInfinity) {
    FunctionalSpec f;
    f.kind = Kind::kWeighted;
    f.decay = decay;
    f.bound = bound;
    f.validate();
    return f;
  }

  static FunctionalSpec custom(std::vector<PiecewiseLinearFunction> weights) {
    FunctionalSpec f;
    f.kind = Kind::kCustom;
    f.weights = std::move(weights);
    return f;
  }

  /// Parses "l1", "indicator[:B[:K]]" or "weighted:r[:B]". B may be "inf".
  static FunctionalSpec parse(const std::string& text);

  void validate() const {
    if (!(bound > 0.0)) {
      throw ContractError("functional: window bound must be positive");
    }
    if (levels && *levels == 0) {
      throw ContractError("functional: number of levels must be positive");
    }
    if (kind == Kind::kWeighted && !(decay > 1.0)) {
      throw ContractError("functional: weighted decay r must exceed 1");
    }
  }
};

namespace detail {

// Exact integral of the product of two piecewise-linear functions (piecewise
// quadratic, so Simpson's rule on each merged segment is exact).
inline double product_integral(const PiecewiseLinearFunction& f, const PiecewiseLinearFunction& g) {
  if (f.is_zero() || g.is_zero()) {
    return 0.0;
  }
  std::vector<double> ts;
  for (const auto& p : f.points()) ts.push_back(p.t);
  for (const auto& p : g.points()) ts.push_back(p.t);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  const double lo = std::max(f.support_min(), g.support_min());
  const double hi = std::min(f.support_max(), g.support_max());
  double total = 0.0;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double a = ts[i - 1];
    const double b = ts[i];
    if (b <= lo || a >= hi) {
      continue;
    }
    const double m = 0.5 * (a + b);
    total += (b - a) / 6.0 * (f(a) * g(a) + 4.0 * f(m) * g(m) + f(b) * g(b));
  }
  return total;
}

inline std::string_view next_field(std::string_view& rest) {
  const auto colon = rest.find(':');
  auto field = rest.substr(0, colon);
  rest = colon == std::string_view::npos ? std::string_view{} : rest.substr(colon + 1);
  return field;
}

inline double parse_real(std::string_view text) {
  if (text == "inf") {
    return kInfinity;
  }
  try {
    std::size_t used = 0;
    const std::string s(text);
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ContractError("");
    return v;
  } catch (const std::exception&) {
    throw ContractError("functional: invalid number '" + std::string(text) + "'");
  }
}

}  // namespace detail

inline FunctionalSpec FunctionalSpec::parse(const std::string& text) {
  std::string_view rest(text);
  const auto name = detail::next_field(rest);
  if (name == "l1") {
    if (!rest.empty()) throw ContractError("functional: 'l1' takes no parameters");
    return indicator();
  }
  if (name == "indicator") {
    double bound = kInfinity;
    std::optional<std::size_t> levels;
    if (!rest.empty()) bound = detail::parse_real(detail::next_field(rest));
    if (!rest.empty()) {
      const auto field = detail::next_field(rest);
      if (field != "all") {
        const double k = detail::parse_real(field);
        if (!(k >= 1.0) || k != std::floor(k)) {
          throw ContractError("functional: level count must be a positive integer");
        }
        levels = static_cast<std::size_t>(k);
      }
    }
    if (!rest.empty()) throw ContractError("functional: too many fields in '" + text + "'");
    return indicator(bound, levels);
  }
  if (name == "weighted") {
    if (rest.empty()) throw ContractError("functional: 'weighted' needs a decay exponent");
    const double decay = detail::parse_real(detail::next_field(rest));
    double bound = kInfinity;
    if (!rest.empty()) bound = detail::parse_real(detail::next_field(rest));
    if (!rest.empty()) throw ContractError("functional: too many fields in '" + text + "'");
    return weighted(decay, bound);
  }
  throw ContractError("functional: unknown kind '" + std::string(name) +
                      "' (expected l1, indicator or weighted)");
}

/// Y = int f lambda, computed exactly level by level.
inline double apply_functional(const PersistenceLandscape& l, const FunctionalSpec& f) {
  double total = 0.0;
  switch (f.kind) {
    case FunctionalSpec::Kind::kIndicator: {
      const std::size_t depth = std::min(l.num_levels(), f.levels.value_or(l.num_levels()));
      for (std::size_t k = 1; k <= depth; ++k) {
        total += l.level(k).integral(-f.bound, f.bound);
      }
      break;
    }
    case FunctionalSpec::Kind::kWeighted:
      for (std::size_t k = 1; k <= l.num_levels(); ++k) {
        total += std::pow(static_cast<double>(k), -f.decay) * l.level(k).integral(-f.bound, f.bound);
      }
      break;
    case FunctionalSpec::Kind::kCustom: {
      const std::size_t depth = std::min(l.num_levels(), f.weights.size());
      for (std::size_t k = 1; k <= depth; ++k) {
        total += detail::product_integral(f.weights[k - 1], l.level(k));
      }
      break;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Scalar inference

struct TestResult {
  double statistic = 0.0;
  double degrees_of_freedom = 0.0;
  /// Second degrees-of-freedom parameter for F-distributed statistics (0 otherwise).
  double degrees_of_freedom2 = 0.0;
  double p_value = 1.0;
  std::string method;
};

struct Interval {
  double low;
  double high;
};

namespace detail {

inline double mean(std::span<const double> y) {
  return std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
}

// Unbiased sample variance (two-pass).
inline double variance(std::span<const double> y) {
  const double m = mean(y);
  double ss = 0.0;
  for (double v : y) ss += (v - m) * (v - m);
  return ss / static_cast<double>(y.size() - 1);
}

inline void require_size(std::span<const double> y, std::size_t n, const char* what) {
  if (y.size() < n) {
    throw ContractError(std::string(what) + ": need at least " + std::to_string(n) +
                        " observations, got " + std::to_string(y.size()));
  }
}

}  // namespace detail

inline double sample_mean(std::span<const double> y) {
  detail::require_size(y, 1, "sample_mean");
  return detail::mean(y);
}

inline double sample_variance(std::span<const double> y) {
  detail::require_size(y, 2, "sample_variance");
  return detail::variance(y);
}

/// Ybar +- t_{alpha/2, n-1} S / sqrt(n).
inline Interval confidence_interval(std::span<const double> y, double alpha) {
  detail::require_size(y, 2, "confidence_interval");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ContractError("confidence_interval: alpha must lie in (0, 1]");
  }
  const double n = static_cast<double>(y.size());
  const double m = detail::mean(y);
  const double s = std::sqrt(detail::variance(y));
  const double t = alpha >= 1.0 ? 0.0 : dist::student_quantile(1.0 - alpha / 2.0, n - 1.0);
  const double half = t * s / std::sqrt(n);
  return {m - half, m + half};
}

enum class TTestMethod { kPooled, kWelch };

/// Two-sided two-sample t-test.
inline TestResult two_sample_t(std::span<const double> y, std::span<const double> z,
                               TTestMethod method) {
  detail::require_size(y, 2, "two_sample_t");
  detail::require_size(z, 2, "two_sample_t");
  const double n1 = static_cast<double>(y.size());
  const double n2 = static_cast<double>(z.size());
  const double m1 = detail::mean(y);
  const double m2 = detail::mean(z);
  const double v1 = detail::variance(y);
  const double v2 = detail::variance(z);
  TestResult r;
  double se;
  if (method == TTestMethod::kPooled) {
    r.method = "student-pooled";
    r.degrees_of_freedom = n1 + n2 - 2.0;
    const double pooled = ((n1 - 1.0) * v1 + (n2 - 1.0) * v2) / (n1 + n2 - 2.0);
    se = std::sqrt(pooled) * std::sqrt(1.0 / n1 + 1.0 / n2);
  } else {
    r.method = "welch";
    const double a = v1 / n1;
    const double b = v2 / n2;
    se = std::sqrt(a + b);
    r.degrees_of_freedom =
        (a + b) * (a + b) / (a * a / (n1 - 1.0) + b * b / (n2 - 1.0));
  }
  const double diff = m1 - m2;
  if (se == 0.0) {
    if (method == TTestMethod::kWelch) r.degrees_of_freedom = n1 + n2 - 2.0;
    r.statistic = diff == 0.0 ? 0.0 : std::copysign(kInfinity, diff);
    r.p_value = diff == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.statistic = diff / se;
  r.p_value = dist::student_two_sided(r.statistic, r.degrees_of_freedom);
  return r;
}

/// Levene's test for equal variances, centering each group at its mean.
/// W ~ F(1, n1 + n2 - 2) under the null.
inline TestResult levene_test(std::span<const double> y, std::span<const double> z) {
  detail::require_size(y, 2, "levene_test");
  detail::require_size(z, 2, "levene_test");
  auto deviations = [](std::span<const double> g) {
    const double m = detail::mean(g);
    std::vector<double> out;
    out.reserve(g.size());
    for (double v : g) out.push_back(std::abs(v - m));
    return out;
  };
  const auto d1 = deviations(y);
  const auto d2 = deviations(z);
  const double n1 = static_cast<double>(d1.size());
  const double n2 = static_cast<double>(d2.size());
  const double n = n1 + n2;
  const double g1 = detail::mean(d1);
  const double g2 = detail::mean(d2);
  const double grand = (n1 * g1 + n2 * g2) / n;
  const double between = n1 * (g1 - grand) * (g1 - grand) + n2 * (g2 - grand) * (g2 - grand);
  double within = 0.0;
  for (double v : d1) within += (v - g1) * (v - g1);
  for (double v : d2) within += (v - g2) * (v - g2);

  TestResult r;
  r.method = "levene-mean";
  r.degrees_of_freedom = 1.0;
  r.degrees_of_freedom2 = n - 2.0;
  const double scale = std::max({1.0, g1, g2});
  if (within <= 1e-300 * scale) {
    const bool equal = std::abs(g1 - g2) <= 1e-15 * scale;
    r.statistic = equal ? 0.0 : kInfinity;
    r.p_value = equal ? 1.0 : 0.0;
    return r;
  }
  r.statistic = (n - 2.0) * between / within;
  r.p_value = dist::f_upper_tail(r.statistic, 1.0, n - 2.0);
  return r;
}

using Observation = std::vector<double>;

/// Two-sample Hotelling T^2 with pooled covariance.
/// F = (n1 + n2 - k - 1) / (k (n1 + n2 - 2)) T^2 ~ F(k, n1 + n2 - k - 1).
inline TestResult hotelling_t2(std::span<const Observation> a, std::span<const Observation> b) {
  if (a.empty() || b.empty()) {
    throw ContractError("hotelling_t2: both groups must be nonempty");
  }
  const std::size_t k = a.front().size();
  if (k == 0) {
    throw ContractError("hotelling_t2: observations must have positive dimension");
  }
  for (const auto* group : {&a, &b}) {
    for (const auto& obs : *group) {
      if (obs.size() != k) {
        throw ContractError("hotelling_t2: observations differ in dimension");
      }
    }
  }
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  if (!(n1 + n2 - 2.0 > static_cast<double>(k))) {
    throw ContractError("hotelling_t2: need n1 + n2 - 2 > dimension");
  }
  auto to_matrix = [k](std::span<const Observation> g) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < k; ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g[i][j];
    return m;
  };
  const Eigen::MatrixXd ma = to_matrix(a);
  const Eigen::MatrixXd mb = to_matrix(b);
  const Eigen::VectorXd mean_a = ma.colwise().mean();
  const Eigen::VectorXd mean_b = mb.colwise().mean();
  const Eigen::MatrixXd ca = ma.rowwise() - mean_a.transpose();
  const Eigen::MatrixXd cb = mb.rowwise() - mean_b.transpose();
  const Eigen::MatrixXd pooled = (ca.transpose() * ca + cb.transpose() * cb) / (n1 + n2 - 2.0);
  const Eigen::VectorXd diff = mean_a - mean_b;

  TestResult r;
  r.method = "hotelling-two-sample";
  r.degrees_of_freedom = static_cast<double>(k);
  r.degrees_of_freedom2 = n1 + n2 - static_cast<double>(k) - 1.0;
  if (diff.squaredNorm() == 0.0) {
    r.statistic = 0.0;
    r.p_value = 1.0;
    return r;
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(pooled);
  const double scale = std::max(1.0, pooled.diagonal().cwiseAbs().maxCoeff());
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-12 * scale) {
    throw NumericalError(
        "hotelling_t2: pooled covariance is singular; reduce the number of functionals");
  }
  const double t2 = (n1 * n2 / (n1 + n2)) * diff.dot(ldlt.solve(diff));
  r.statistic = t2;
  const double f = (n1 + n2 - static_cast<double>(k) - 1.0) /
                   (static_cast<double>(k) * (n1 + n2 - 2.0)) * t2;
  r.p_value = dist::f_upper_tail(f, r.degrees_of_freedom, r.degrees_of_freedom2);
  return r;
}

/// Paired (one-sample) Hotelling T^2 on the differences a_i - b_i.
/// F = (n - k) / (k (n - 1)) T^2 ~ F(k, n - k).
inline TestResult hotelling_t2_paired(std::span<const Observation> a,
                                      std::span<const Observation> b) {
  if (a.size() != b.size() || a.empty()) {
    throw ContractError("hotelling_t2_paired: groups must be nonempty and of equal size");
  }
  const std::size_t k = a.front().size();
  const double n = static_cast<double>(a.size());
  if (!(n > static_cast<double>(k))) {
    throw ContractError("hotelling_t2_paired: need more pairs than dimensions");
  }
  Eigen::MatrixXd d(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != k || b[i].size() != k) {
      throw ContractError("hotelling_t2_paired: observations differ in dimension");
    }
    for (std::size_t j = 0; j < k; ++j)
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[i][j] - b[i][j];
  }
  const Eigen::VectorXd mean = d.colwise().mean();
  const Eigen::MatrixXd centered = d.rowwise() - mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / (n - 1.0);
  TestResult r;
  r.method = "hotelling-paired";
  r.degrees_of_freedom = static_cast<double>(k);
  r.degrees_of_freedom2 = n - static_cast<double>(k);
  if (mean.squaredNorm() == 0.0) {
    return r;
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  const double scale = std::max(1.0, cov.diagonal().cwiseAbs().maxCoeff());
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-12 * scale) {
    throw NumericalError(
        "hotelling_t2_paired: covariance is singular; reduce the number of functionals");
  }
  r.statistic = n * mean.dot(ldlt.solve(mean));
  const double f = (n - static_cast<double>(k)) / (static_cast<double>(k) * (n - 1.0)) * r.statistic;
  r.p_value = dist::f_upper_tail(f, r.degrees_of_freedom, r.degrees_of_freedom2);
  return r;
}

// ---------------------------------------------------------------------------
// Permutation test on the distance between mean landscapes

struct PermutationResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t replicates = 0;
  std::size_t at_least_as_extreme = 0;
};

namespace detail {

inline double mean_distance(std::span<const PersistenceLandscape> pooled,
                            std::span<const std::size_t> order, std::size_t size_a, PNorm p) {
  std::vector<LandscapeTerm> terms;
  terms.reserve(order.size());
  const double wa = 1.0 / static_cast<double>(size_a);
  const double wb = -1.0 / static_cast<double>(order.size() - size_a);
  for (std::size_t i = 0; i < order.size(); ++i) {
    terms.push_back({i < size_a ? wa : wb, &pooled[order[i]]});
  }
  return lp_norm(linear_combination(terms), p);
}

inline bool at_least(double candidate, double observed) {
  return candidate >= observed - 1e-12 * std::max(1.0, std::abs(observed));
}

}  // namespace detail

/// Statistic T = Lambda_p(mean(A), mean(B)); p-value (1 + #{T* >= T}) / (1 + reps)
/// over `reps` uniformly random relabelings. Relabeling i draws its randomness
/// from CounterRng::stream(seed, i), so the result is independent of
/// `threads` and extending `reps` keeps the earlier draws.
inline PermutationResult permutation_test(std::span<const PersistenceLandscape> group_a,
                                          std::span<const PersistenceLandscape> group_b, PNorm p,
                                          std::size_t reps, std::uint64_t seed,
                                          unsigned threads = 1) {
  if (group_a.empty() || group_b.empty()) {
    throw ContractError("permutation_test: both groups must be nonempty");
  }
  if (reps == 0) {
    throw ContractError("permutation_test: reps must be positive");
  }
  std::vector<PersistenceLandscape> pooled(group_a.begin(), group_a.end());
  pooled.insert(pooled.end(), group_b.begin(), group_b.end());
  const std::size_t total = pooled.size();
  const std::size_t size_a = group_a.size();

  std::vector<std::size_t> identity(total);
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  PermutationResult result;
  result.statistic = detail::mean_distance(pooled, identity, size_a, p);
  result.replicates = reps;

  std::vector<char> extreme(reps, 0);
  auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> order(total);
    for (std::size_t i = begin; i < end; ++i) {
      auto rng = CounterRng::stream(seed, i);
      std::iota(order.begin(), order.end(), std::size_t{0});
      for (std::size_t j = total - 1; j > 0; --j) {
        std::swap(order[j], order[rng.below(j + 1)]);
      }
      extreme[i] = detail::at_least(detail::mean_distance(pooled, order, size_a, p),
                                    result.statistic);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(reps)));
  if (threads == 1) {
    work(0, reps);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (reps + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(reps, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }
  result.at_least_as_extreme =
      static_cast<std::size_t>(std::count(extreme.begin(), extreme.end(), 1));
  result.p_value = static_cast<double>(1 + result.at_least_as_extreme) /
                   static_cast<double>(1 + reps);
  return result;
}

/// Exact permutation test over all C(n_a + n_b, n_a) relabelings (the observed
/// labeling included): p = #{T* >= T} / #relabelings. Limited to 20 landscapes.
inline PermutationResult permutation_test_exhaustive(std::span<const PersistenceLandscape> group_a,
                                                     std::span<const PersistenceLandscape> group_b,
                                                     PNorm p) {
  if (group_a.empty() || group_b.empty()) {
    throw ContractError("permutation_test_exhaustive: both groups must be nonempty");
  }
  const std::size_t total = group_a.size() + group_b.size();
  if (total > 20) {
    throw ContractError("permutation_test_exhaustive: at most 20 landscapes supported");
  }
  std::vector<PersistenceLandscape> pooled(group_a.begin(), group_a.end());
  pooled.insert(pooled.end(), group_b.begin(), group_b.end());
  const std::size_t size_a = group_a.size();
  std::vector<std::size_t> identity(total);
  std::iota(identity.begin(), identity.end(), std::size_t{0});

  PermutationResult result;
  result.statistic = detail::mean_distance(pooled, identity, size_a, p);
  std::vector<std::size_t> order(total);
  for (std::uint32_t mask = 0; mask < (1u << total); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != size_a) continue;
    std::size_t ia = 0;
    std::size_t ib = size_a;
    for (std::size_t i = 0; i < total; ++i) {
      if (mask & (1u << i)) order[ia++] = i; else order[ib++] = i;
    }
    ++result.replicates;
    if (detail::at_least(detail::mean_distance(pooled, order, size_a, p), result.statistic)) {
      ++result.at_least_as_extreme;
    }
  }
  result.p_value = static_cast<double>(result.at_least_as_extreme) /
                   static_cast<double>(result.replicates);
  return result;
}

}  // namespace landscape
