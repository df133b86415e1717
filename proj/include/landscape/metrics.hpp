#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "landscape/diagram.hpp"
#include "landscape/error.hpp"
#include "landscape/landscape.hpp"

namespace landscape {

/// Exponent of an L^p norm: a positive integer or infinity.
class PNorm {
 public:
  constexpr explicit PNorm(int p) : p_(p) {
    if (p < 1) {
      throw ContractError("PNorm: p must be a positive integer");
    }
  }
  static constexpr PNorm infinity() { return PNorm(); }

  constexpr bool is_infinite() const noexcept { return p_ == 0; }
  constexpr int value() const noexcept { return p_; }

  std::string to_string() const { return is_infinite() ? "inf" : std::to_string(p_); }

  /// Parses "1", "2", ..., "inf".
  static PNorm parse(const std::string& text) {
    if (text == "inf" || text == "infinity") {
      return infinity();
    }
    std::size_t used = 0;
    int p = 0;
    try {
      p = std::stoi(text, &used);
    } catch (const std::exception&) {
      throw ContractError("invalid p '" + text + "': expected a positive integer or 'inf'");
    }
    if (used != text.size()) {
      throw ContractError("invalid p '" + text + "': expected a positive integer or 'inf'");
    }
    return PNorm(p);
  }

  friend constexpr bool operator==(PNorm, PNorm) = default;

 private:
  constexpr PNorm() = default;
  int p_ = 0;
};

/// ||L||_p = (sum_k ||lambda_k||_p^p)^{1/p}; for p = inf, sup over all levels.
inline double lp_norm(const PersistenceLandscape& l, PNorm p) {
  if (p.is_infinite()) {
    double best = 0.0;
    for (const auto& level : l.levels()) {
      best = std::max(best, level.sup_abs());
    }
    return best;
  }
  double total = 0.0;
  for (const auto& level : l.levels()) {
    total += level.integral_abs_pow(p.value());
  }
  return p.value() == 1 ? total : std::pow(total, 1.0 / p.value());
}

/// ||L||_p^p without the final root (p finite).
inline double lp_norm_pow(const PersistenceLandscape& l, int p) {
  double total = 0.0;
  for (const auto& level : l.levels()) {
    total += level.integral_abs_pow(p);
  }
  return total;
}

/// Lambda_p(L, M) = ||L - M||_p.
inline double landscape_distance(const PersistenceLandscape& l, const PersistenceLandscape& m,
                                 PNorm p) {
  return lp_norm(combine(1.0, l, -1.0, m), p);
}

/// Per-pair stability bound ell * eps^p + 2/(p+1) * eps^{p+1}, with ell the
/// persistence of `x` and eps the sup-norm distance between the points.
inline double pair_bound(const DiagramPoint& x, const DiagramPoint& y, int p) {
  if (!x.is_finite() || !y.is_finite()) {
    throw ContractError("pair_bound: points must be finite");
  }
  if (p < 1) {
    throw ContractError("pair_bound: p must be a positive integer");
  }
  const double eps = std::max(std::abs(x.birth - y.birth), std::abs(x.death - y.death));
  const double ell = x.persistence();
  return ell * std::pow(eps, p) + 2.0 / (p + 1) * std::pow(eps, p + 1);
}

}  // namespace landscape
