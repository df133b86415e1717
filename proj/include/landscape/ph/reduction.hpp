#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "landscape/diagram.hpp"
#include "landscape/error.hpp"
#include "landscape/ph/complex.hpp"

namespace landscape::ph {

struct PersistenceOptions {
  /// Highest homology degree reported.
  int max_degree = 1;
  /// Reduced homology: one essential degree-0 class is removed.
  bool reduced = false;
  /// Keep pairs with birth == death.
  bool keep_zero_persistence = false;
  /// Sort simplices into filtration order first. When false the given order is
  /// used as-is and must already be a valid filtration order.
  bool sort = true;
};

namespace detail {

// Combinatorial-number-system key of a simplex, unique within a dimension.
class SimplexIndexer {
 public:
  SimplexIndexer(std::size_t num_vertices, int max_dim) {
    const std::size_t k_max = static_cast<std::size_t>(max_dim) + 1;
    binom_.assign((k_max + 1) * (num_vertices + 1), 0);
    width_ = num_vertices + 1;
    constexpr std::uint64_t kLimit = std::uint64_t{1} << 60;
    for (std::size_t n = 0; n <= num_vertices; ++n) {
      at(0, n) = 1;
      for (std::size_t k = 1; k <= k_max; ++k) {
        if (n == 0) continue;
        const std::uint64_t v = at(k, n - 1) + at(k - 1, n - 1);
        if (v > kLimit) {
          throw ContractError("complex too large to index (too many vertices for its dimension)");
        }
        at(k, n) = v;
      }
    }
  }

  std::uint64_t key(const VertexSet& s) const noexcept {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < s.size(); ++i) k += at(i + 1, s[i]);
    return k;
  }

 private:
  std::uint64_t& at(std::size_t k, std::size_t n) { return binom_[k * width_ + n]; }
  std::uint64_t at(std::size_t k, std::size_t n) const { return binom_[k * width_ + n]; }

  std::vector<std::uint64_t> binom_;
  std::size_t width_ = 0;
};

using Column = std::vector<std::uint32_t>;

// column <- column + other over F2 (both sorted ascending).
inline void add_column(Column& column, const Column& other, Column& scratch) {
  scratch.clear();
  std::set_symmetric_difference(column.begin(), column.end(), other.begin(), other.end(),
                                std::back_inserter(scratch));
  column.swap(scratch);
}

}  // namespace detail

/// Persistence diagrams (degrees 0..max_degree) of a filtered complex, by
/// column reduction of the F2 boundary matrix in filtration order.
///
/// Dimensions are reduced from the top down with the twist (clearing)
/// optimization: once a column of dimension q+1 has pivot row i, column i is
/// known to reduce to zero and is skipped. Unpaired positive simplices become
/// essential points (birth, inf).
inline std::vector<PersistenceDiagram> persistent_homology(const FilteredComplex& complex,
                                                           const PersistenceOptions& options = {}) {
  if (options.max_degree < 0) {
    throw ContractError("persistent_homology: max_degree must be non-negative");
  }
  std::vector<FilteredSimplex> order = complex.simplices;
  if (options.sort) {
    std::sort(order.begin(), order.end(), filtration_less);
  }
  const std::size_t n = order.size();
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw ContractError("persistent_homology: complex too large");
  }

  std::uint32_t max_vertex = 0;
  int top_dim = 0;
  for (const auto& s : order) {
    if (s.vertices.size() == 0) throw ContractError("persistent_homology: empty simplex");
    max_vertex = std::max(max_vertex, *(s.vertices.end() - 1));
    top_dim = std::max(top_dim, s.dimension());
  }
  const detail::SimplexIndexer indexer(n == 0 ? 0 : max_vertex + 1, top_dim);
  std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> index(
      static_cast<std::size_t>(top_dim) + 1);
  for (std::size_t j = 0; j < n; ++j) {
    auto& table = index[static_cast<std::size_t>(order[j].dimension())];
    if (!table.emplace(indexer.key(order[j].vertices), static_cast<std::uint32_t>(j)).second) {
      throw ContractError("persistent_homology: duplicate simplex " + order[j].vertices.to_string());
    }
  }

  // Boundaries, checking the filtration property.
  auto boundary = [&](std::size_t j) {
    const auto& s = order[j];
    detail::Column col;
    if (s.dimension() == 0) return col;
    const auto& table = index[static_cast<std::size_t>(s.dimension() - 1)];
    for (std::size_t i = 0; i < s.vertices.size(); ++i) {
      const VertexSet face = s.vertices.facet(i);
      const auto it = table.find(indexer.key(face));
      if (it == table.end()) {
        throw ContractError("filtration property violated: simplex " + s.vertices.to_string() +
                            " is missing its face " + face.to_string());
      }
      if (it->second >= j) {
        throw ContractError("filtration property violated: simplex " + s.vertices.to_string() +
                            " (value " + std::to_string(s.value) + ") precedes its face " +
                            face.to_string() + " (value " +
                            std::to_string(order[it->second].value) + ")");
      }
      col.push_back(it->second);
    }
    std::sort(col.begin(), col.end());
    return col;
  };

  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> pivot_owner(n, kNone);  // row -> column that owns it as pivot
  std::vector<std::uint32_t> partner(n, kNone);      // birth <-> death
  std::vector<char> cleared(n, 0);
  std::unordered_map<std::uint32_t, detail::Column> reduced;  // pivot columns only

  std::vector<std::vector<std::uint32_t>> by_dim(static_cast<std::size_t>(top_dim) + 1);
  for (std::size_t j = 0; j < n; ++j) {
    by_dim[static_cast<std::size_t>(order[j].dimension())].push_back(static_cast<std::uint32_t>(j));
  }
  // Columns above max_degree + 1 cannot affect the reported degrees; their
  // faces are still validated.
  const int reduce_top = std::min(top_dim, options.max_degree + 1);
  for (int dim = top_dim; dim > reduce_top; --dim) {
    for (auto j : by_dim[static_cast<std::size_t>(dim)]) (void)boundary(j);
  }

  detail::Column scratch;
  for (int dim = reduce_top; dim >= 1; --dim) {
    for (auto j : by_dim[static_cast<std::size_t>(dim)]) {
      if (cleared[j]) {
        (void)boundary(j);
        continue;
      }
      detail::Column col = boundary(j);
      while (!col.empty()) {
        const auto owner = pivot_owner[col.back()];
        if (owner == kNone) break;
        detail::add_column(col, reduced.at(owner), scratch);
      }
      if (!col.empty()) {
        const auto low = col.back();
        pivot_owner[low] = j;
        partner[low] = j;
        partner[j] = low;
        cleared[low] = 1;
        reduced.emplace(j, std::move(col));
      }
    }
  }

  std::vector<PersistenceDiagram> diagrams(static_cast<std::size_t>(options.max_degree) + 1);
  for (int q = 0; q <= options.max_degree; ++q) diagrams[static_cast<std::size_t>(q)].degree = q;

  bool dropped_reduced_class = !options.reduced;
  for (std::size_t j = 0; j < n; ++j) {
    const int q = order[j].dimension();
    if (q > options.max_degree) continue;
    const bool is_death = partner[j] != kNone && partner[j] < j;
    if (is_death) continue;
    auto& diagram = diagrams[static_cast<std::size_t>(q)];
    const double birth = order[j].value;
    if (partner[j] != kNone) {
      const double death = order[partner[j]].value;
      if (death > birth || options.keep_zero_persistence) {
        diagram.points.push_back({birth, death});
      }
    } else if (reduced.count(static_cast<std::uint32_t>(j)) == 0) {
      // Positive and never killed: essential.
      if (q == 0 && !dropped_reduced_class) {
        dropped_reduced_class = true;
        continue;
      }
      diagram.points.push_back({birth, kInfinity});
    }
  }
  return diagrams;
}

}  // namespace landscape::ph
