#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "landscape/diagram.hpp"
#include "landscape/error.hpp"
#include "landscape/piecewise_linear.hpp"

namespace landscape {

/// Sequence of piecewise-linear levels lambda_1, lambda_2, ... Only nonzero
/// levels are stored; level k (1-based) beyond size() is the zero function.
///
/// Landscapes built from diagrams satisfy lambda_k >= lambda_{k+1} >= 0 and are
/// 1-Lipschitz. Linear combinations (means, differences) reuse the same type
/// and only keep whatever of those properties the combination preserves.
class PersistenceLandscape {
 public:
  PersistenceLandscape() = default;
  explicit PersistenceLandscape(std::vector<PiecewiseLinearFunction> levels)
      : levels_(std::move(levels)) {
    while (!levels_.empty() && levels_.back().is_zero()) {
      levels_.pop_back();
    }
  }

  std::size_t num_levels() const noexcept { return levels_.size(); }
  const std::vector<PiecewiseLinearFunction>& levels() const noexcept { return levels_; }

  /// Level k, 1-based. Returns the zero function past the stored levels.
  const PiecewiseLinearFunction& level(std::size_t k) const noexcept {
    static const PiecewiseLinearFunction zero;
    return (k >= 1 && k <= levels_.size()) ? levels_[k - 1] : zero;
  }

  double operator()(std::size_t k, double t) const noexcept { return level(k)(t); }

  friend bool operator==(const PersistenceLandscape&, const PersistenceLandscape&) = default;

 private:
  std::vector<PiecewiseLinearFunction> levels_;
};

/// Triangle (h - |t - m|)_+ with m the midpoint and h the half-persistence.
inline PiecewiseLinearFunction tent(const DiagramPoint& point) {
  if (!point.is_finite()) {
    throw ContractError("tent: infinite interval " + to_string(point));
  }
  if (!(point.death > point.birth)) {
    return {};
  }
  return PiecewiseLinearFunction(
      {{point.birth, 0.0}, {point.midpoint(), point.half_persistence()}, {point.death, 0.0}});
}

/// Builds lambda_1, lambda_2, ... by peeling successive upper envelopes of
/// the tents. Bars are processed sorted by (birth ascending, death
/// descending); each pass traces one level and pushes the overlapped parts
/// of tents back for the next level.
inline PersistenceLandscape landscape_from_diagram(const PersistenceDiagram& diagram,
                                                   std::optional<std::size_t> max_levels = {}) {
  struct Bar {
    double birth;
    double death;
  };
  auto bar_less = [](const Bar& x, const Bar& y) {
    return x.birth < y.birth || (x.birth == y.birth && x.death > y.death);
  };

  std::vector<Bar> bars;
  bars.reserve(diagram.points.size());
  for (const auto& p : diagram.points) {
    if (!std::isfinite(p.birth) || !p.is_finite()) {
      throw ContractError("landscape_from_diagram: infinite interval " + to_string(p) +
                          " in degree " + std::to_string(diagram.degree) +
                          "; threshold the diagram first");
    }
    if (p.death < p.birth) {
      throw ContractError("landscape_from_diagram: death precedes birth in " + to_string(p));
    }
    if (p.death > p.birth) {
      bars.push_back({p.birth, p.death});
    }
  }
  std::sort(bars.begin(), bars.end(), bar_less);

  const std::size_t limit = max_levels.value_or(bars.size());
  std::vector<PiecewiseLinearFunction> levels;
  while (!bars.empty() && levels.size() < limit) {
    std::vector<CriticalPoint> pts;
    Bar current = bars.front();
    bars.erase(bars.begin());
    pts.push_back({current.birth, 0.0});
    pts.push_back({0.5 * (current.birth + current.death), 0.5 * (current.death - current.birth)});

    std::size_t pos = 0;
    while (true) {
      auto next = std::find_if(bars.begin() + static_cast<std::ptrdiff_t>(pos), bars.end(),
                               [&](const Bar& b) { return b.death > current.death; });
      if (next == bars.end()) {
        pts.push_back({current.death, 0.0});
        break;
      }
      const Bar found = *next;
      pos = static_cast<std::size_t>(next - bars.begin());
      bars.erase(next);

      if (found.birth > current.death) {
        pts.push_back({current.death, 0.0});
      }
      if (found.birth >= current.death) {
        pts.push_back({found.birth, 0.0});
      } else {
        pts.push_back({0.5 * (found.birth + current.death),
                       0.5 * (current.death - found.birth)});
        // The part of `found` hidden under the current level feeds the next one.
        const Bar hidden{found.birth, current.death};
        auto at = std::upper_bound(bars.begin(), bars.end(), hidden, bar_less);
        const auto at_index = static_cast<std::size_t>(at - bars.begin());
        bars.insert(at, hidden);
        if (at_index <= pos) {
          ++pos;
        }
      }
      pts.push_back({0.5 * (found.birth + found.death), 0.5 * (found.death - found.birth)});
      current = found;
    }
    levels.emplace_back(std::move(pts));
  }
  return PersistenceLandscape(std::move(levels));
}

/// lambda_k(t); zero past the stored levels or outside the support.
inline double evaluate(const PersistenceLandscape& landscape, std::size_t k, double t) noexcept {
  return landscape(k, t);
}

struct LandscapeTerm {
  double coefficient;
  const PersistenceLandscape* landscape;
};

/// Level-wise exact combination sum_i c_i * L_i.
inline PersistenceLandscape linear_combination(std::span<const LandscapeTerm> terms) {
  if (terms.empty()) {
    throw ContractError("linear_combination: empty term list");
  }
  std::size_t depth = 0;
  for (const auto& term : terms) {
    depth = std::max(depth, term.landscape->num_levels());
  }
  std::vector<PiecewiseLinearFunction> levels;
  levels.reserve(depth);
  std::vector<double> coefficients;
  std::vector<const PiecewiseLinearFunction*> functions;
  for (std::size_t k = 1; k <= depth; ++k) {
    coefficients.clear();
    functions.clear();
    for (const auto& term : terms) {
      if (term.landscape->num_levels() >= k) {
        coefficients.push_back(term.coefficient);
        functions.push_back(&term.landscape->level(k));
      }
    }
    levels.push_back(PiecewiseLinearFunction::weighted_sum(coefficients, functions));
  }
  return PersistenceLandscape(std::move(levels));
}

inline PersistenceLandscape linear_combination(std::initializer_list<LandscapeTerm> terms) {
  return linear_combination(std::span<const LandscapeTerm>(terms.begin(), terms.size()));
}

/// a*L + b*M.
inline PersistenceLandscape combine(double a, const PersistenceLandscape& l, double b,
                                    const PersistenceLandscape& m) {
  return linear_combination({LandscapeTerm{a, &l}, LandscapeTerm{b, &m}});
}

}  // namespace landscape
