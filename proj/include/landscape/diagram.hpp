#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "landscape/error.hpp"

namespace landscape {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A birth/death pair. Death may be +infinity for essential classes.
struct DiagramPoint {
  double birth = 0.0;
  double death = 0.0;

  double persistence() const noexcept { return death - birth; }
  bool is_finite() const noexcept { return std::isfinite(death); }
  double midpoint() const noexcept { return 0.5 * (birth + death); }
  double half_persistence() const noexcept { return 0.5 * (death - birth); }

  friend bool operator==(const DiagramPoint&, const DiagramPoint&) = default;
};

inline std::string to_string(const DiagramPoint& p) {
  std::ostringstream os;
  os.precision(17);
  os << '(' << p.birth << ", " << p.death << ')';
  return os.str();
}

/// Multiset of points in one homology degree.
struct PersistenceDiagram {
  int degree = 0;
  std::vector<DiagramPoint> points;

  PersistenceDiagram() = default;
  PersistenceDiagram(int deg, std::vector<DiagramPoint> pts) : degree(deg), points(std::move(pts)) {
    validate();
  }

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }

  bool is_finite() const noexcept {
    return std::all_of(points.begin(), points.end(),
                       [](const DiagramPoint& p) { return p.is_finite(); });
  }

  void validate() const {
    if (degree < 0) {
      throw ContractError("persistence diagram: negative degree");
    }
    for (const auto& p : points) {
      if (!std::isfinite(p.birth)) {
        throw ContractError("persistence diagram: non-finite birth in " + to_string(p));
      }
      if (std::isnan(p.death) || p.death < p.birth) {
        throw ContractError("persistence diagram: death precedes birth in " + to_string(p));
      }
    }
  }
};

/// Number of points alive over all of [a, b]: #{ b_i <= a and b <= d_i }.
/// Zero when a > b. Both endpoints use the closed convention.
inline std::size_t rank(const PersistenceDiagram& diagram, double a, double b) noexcept {
  if (a > b) {
    return 0;
  }
  return static_cast<std::size_t>(std::count_if(
      diagram.points.begin(), diagram.points.end(),
      [&](const DiagramPoint& p) { return p.birth <= a && b <= p.death; }));
}

/// Rank in (midpoint, half-width) coordinates; zero for negative half-width.
inline std::size_t rescaled_rank(const PersistenceDiagram& diagram, double m, double h) noexcept {
  if (h < 0.0) {
    return 0;
  }
  return rank(diagram, m - h, m + h);
}

/// Clips the diagram to the window [-bound, bound]. Infinite deaths become
/// `bound`; points that end up with zero persistence are dropped.
inline PersistenceDiagram threshold_diagram(const PersistenceDiagram& diagram, double bound) {
  if (!(bound > 0.0)) {
    throw ContractError("threshold_diagram: bound must be positive");
  }
  PersistenceDiagram out;
  out.degree = diagram.degree;
  for (const auto& p : diagram.points) {
    const double b = std::max(p.birth, -bound);
    const double d = std::min(p.death, bound);
    if (d > b) {
      out.points.push_back({b, d});
    }
  }
  return out;
}

/// Replaces every infinite death with `value` (points with value <= birth are dropped).
inline PersistenceDiagram truncate_essential(const PersistenceDiagram& diagram, double value) {
  PersistenceDiagram out;
  out.degree = diagram.degree;
  for (const auto& p : diagram.points) {
    if (p.is_finite()) {
      out.points.push_back(p);
    } else if (value > p.birth) {
      out.points.push_back({p.birth, value});
    }
  }
  return out;
}

enum class PersistenceSummary { kSumOfSquares, kMaximum };

/// pers_2 (sum of squared lengths) or pers_inf (longest length).
inline double pers_summary(const PersistenceDiagram& diagram, PersistenceSummary kind) {
  double acc = 0.0;
  for (const auto& p : diagram.points) {
    if (!p.is_finite()) {
      throw ContractError("pers_summary: infinite interval " + to_string(p) +
                          "; threshold the diagram first");
    }
    const double len = p.persistence();
    acc = kind == PersistenceSummary::kSumOfSquares ? acc + len * len : std::max(acc, len);
  }
  return acc;
}

}  // namespace landscape
