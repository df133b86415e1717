#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "landscape/error.hpp"

namespace landscape::ph {

/// Sorted vertex ids of one simplex, stored inline (dimension <= kMaxDim).
class VertexSet {
 public:
  static constexpr std::size_t kCapacity = 6;
  static constexpr int kMaxDim = static_cast<int>(kCapacity) - 1;

  VertexSet() = default;
  VertexSet(std::initializer_list<std::uint32_t> ids) {
    for (auto v : ids) push_back(v);
    normalize();
  }
  explicit VertexSet(std::span<const std::uint32_t> ids) {
    for (auto v : ids) push_back(v);
    normalize();
  }

  void push_back(std::uint32_t v) {
    if (size_ == kCapacity) {
      throw ContractError("simplex exceeds the supported dimension " + std::to_string(kMaxDim));
    }
    ids_[size_++] = v;
  }

  /// Sorts the ids; rejects repeated vertices.
  void normalize() {
    std::sort(ids_.begin(), ids_.begin() + size_);
    if (std::adjacent_find(ids_.begin(), ids_.begin() + size_) != ids_.begin() + size_) {
      throw ContractError("simplex " + to_string() + " repeats a vertex");
    }
  }

  std::size_t size() const noexcept { return size_; }
  int dimension() const noexcept { return static_cast<int>(size_) - 1; }
  std::uint32_t operator[](std::size_t i) const noexcept { return ids_[i]; }
  const std::uint32_t* begin() const noexcept { return ids_.data(); }
  const std::uint32_t* end() const noexcept { return ids_.data() + size_; }

  /// The facet obtained by removing vertex position `skip`.
  VertexSet facet(std::size_t skip) const {
    VertexSet out;
    for (std::size_t i = 0; i < size_; ++i) {
      if (i != skip) out.ids_[out.size_++] = ids_[i];
    }
    return out;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < size_; ++i) os << (i ? "," : "") << ids_[i];
    os << '}';
    return os.str();
  }

  friend bool operator==(const VertexSet& a, const VertexSet& b) {
    return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin());
  }
  friend bool operator<(const VertexSet& a, const VertexSet& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }

 private:
  std::array<std::uint32_t, kCapacity> ids_{};
  std::uint8_t size_ = 0;
};

struct FilteredSimplex {
  VertexSet vertices;
  double value = 0.0;

  int dimension() const noexcept { return vertices.dimension(); }
};

/// Filtration order: value, then dimension, then lexicographic vertices.
inline bool filtration_less(const FilteredSimplex& a, const FilteredSimplex& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.dimension() != b.dimension()) return a.dimension() < b.dimension();
  return a.vertices < b.vertices;
}

/// Simplices with filtration values. Every face of a simplex must be present
/// with a value no larger than the simplex's; persistent_homology checks this.
struct FilteredComplex {
  std::vector<FilteredSimplex> simplices;

  std::size_t size() const noexcept { return simplices.size(); }

  int max_dimension() const noexcept {
    int d = -1;
    for (const auto& s : simplices) d = std::max(d, s.dimension());
    return d;
  }

  std::size_t count(int dim) const noexcept {
    return static_cast<std::size_t>(std::count_if(
        simplices.begin(), simplices.end(),
        [dim](const FilteredSimplex& s) { return s.dimension() == dim; }));
  }
};

/// Symmetric dissimilarity matrix with zero diagonal (triangle inequality not required).
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::size_t n, std::vector<double> entries) : n_(n), d_(std::move(entries)) {
    if (d_.size() != n_ * n_) {
      throw ContractError("distance matrix: expected n*n entries");
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (d_[i * n_ + i] != 0.0) throw ContractError("distance matrix: nonzero diagonal");
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double v = d_[i * n_ + j];
        if (v != d_[j * n_ + i]) throw ContractError("distance matrix: not symmetric");
        if (!(v >= 0.0)) throw ContractError("distance matrix: negative or NaN entry");
      }
    }
  }

  /// Euclidean distances between the rows of `points`.
  static DistanceMatrix euclidean(std::span<const std::vector<double>> points) {
    const std::size_t n = points.size();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (points[i].size() != points[j].size()) {
          throw ContractError("point cloud: inconsistent dimensions");
        }
        double s = 0.0;
        for (std::size_t c = 0; c < points[i].size(); ++c) {
          const double diff = points[i][c] - points[j][c];
          s += diff * diff;
        }
        d[i * n + j] = d[j * n + i] = std::sqrt(s);
      }
    }
    DistanceMatrix out;
    out.n_ = n;
    out.d_ = std::move(d);
    return out;
  }

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

struct WeightedEdge {
  std::uint32_t u;
  std::uint32_t v;
  double value;
};

/// n vertices at filtration 0 plus finitely-valued edges.
class FilteredGraph {
 public:
  FilteredGraph() = default;
  FilteredGraph(std::size_t n, std::vector<WeightedEdge> edges) : n_(n), edges_(std::move(edges)) {
    for (const auto& e : edges_) {
      if (e.u >= n_ || e.v >= n_ || e.u == e.v) {
        throw ContractError("filtered graph: invalid edge endpoints");
      }
      if (!std::isfinite(e.value)) {
        throw ContractError("filtered graph: edge values must be finite");
      }
    }
  }

  std::size_t num_vertices() const noexcept { return n_; }
  const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }

 private:
  std::size_t n_ = 0;
  std::vector<WeightedEdge> edges_;
};

namespace detail {

// Flag complex of a dense weighted graph (weight = +inf for absent edges):
// every clique with at most max_dim + 1 vertices and value <= cap, where the
// value of a clique is its largest edge weight (vertices sit at 0).
inline FilteredComplex flag_complex(std::size_t n, std::span<const double> weight, int max_dim,
                                    double cap) {
  if (max_dim < 0 || max_dim > VertexSet::kMaxDim) {
    throw ContractError("flag complex: dimension out of range");
  }
  FilteredComplex out;
  std::vector<std::vector<std::uint32_t>> higher(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.simplices.push_back({VertexSet{static_cast<std::uint32_t>(i)}, 0.0});
    for (std::size_t j = i + 1; j < n; ++j) {
      if (weight[i * n + j] <= cap) higher[i].push_back(static_cast<std::uint32_t>(j));
    }
  }
  struct Frame {
    VertexSet clique;
    double value;
    std::vector<std::uint32_t> candidates;
  };
  std::vector<Frame> stack;
  for (std::size_t i = 0; i < n; ++i) {
    if (max_dim < 1) break;
    stack.push_back({VertexSet{static_cast<std::uint32_t>(i)}, 0.0, higher[i]});
    while (!stack.empty()) {
      Frame f = std::move(stack.back());
      stack.pop_back();
      for (std::size_t c = 0; c < f.candidates.size(); ++c) {
        const std::uint32_t v = f.candidates[c];
        double value = f.value;
        for (auto u : f.clique) value = std::max(value, weight[u * n + v]);
        VertexSet next = f.clique;
        next.push_back(v);
        out.simplices.push_back({next, value});
        if (next.dimension() < max_dim) {
          std::vector<std::uint32_t> remaining;
          for (std::size_t c2 = c + 1; c2 < f.candidates.size(); ++c2) {
            const std::uint32_t w = f.candidates[c2];
            if (weight[v * n + w] <= cap) remaining.push_back(w);
          }
          if (!remaining.empty()) stack.push_back({next, value, std::move(remaining)});
        }
      }
    }
  }
  return out;
}

}  // namespace detail

/// Vietoris-Rips complex: simplices up to dimension max_dim + 1 (so that
/// homology in degree max_dim is correct) whose diameter is at most max_radius.
/// A simplex's value is its largest pairwise distance.
inline FilteredComplex vietoris_rips(const DistanceMatrix& d, int max_dim, double max_radius) {
  if (max_dim < 0) throw ContractError("vietoris_rips: max_dim must be non-negative");
  if (!(max_radius > 0.0)) throw ContractError("vietoris_rips: max_radius must be positive");
  const std::size_t n = d.size();
  std::vector<double> w(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w[i * n + j] = d(i, j);
  return detail::flag_complex(n, w, max_dim + 1, max_radius);
}

/// Clique complex of a filtered graph, simplices up to dimension max_dim + 1,
/// truncated at max_filtration.
inline FilteredComplex clique_complex(const FilteredGraph& g, int max_dim, double max_filtration) {
  if (max_dim < 0) throw ContractError("clique_complex: max_dim must be non-negative");
  const std::size_t n = g.num_vertices();
  std::vector<double> w(n * n, std::numeric_limits<double>::infinity());
  for (const auto& e : g.edges()) {
    const double v = std::min(w[e.u * n + e.v], e.value);
    w[e.u * n + e.v] = w[e.v * n + e.u] = v;
  }
  return detail::flag_complex(n, w, max_dim + 1, max_filtration);
}

/// Grid shape (2 or 3 axes); vertex id = i0 + s0 * (i1 + s1 * i2).
struct GridShape {
  std::vector<std::size_t> dims;

  std::size_t num_vertices() const noexcept {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    return n;
  }

  void validate() const {
    if (dims.size() != 2 && dims.size() != 3) {
      throw ContractError("grid shape must have 2 or 3 axes");
    }
    for (auto d : dims) {
      if (d == 0) throw ContractError("grid shape: axes must be nonempty");
    }
  }
};

/// Freudenthal (Kuhn) triangulation of a grid: every cube cell splits into d!
/// simplices, one per axis ordering. Each simplex is a chain
/// x < x + e_{s1} < x + e_{s1} + e_{s2} < ... so it is enumerated exactly once
/// from its minimal vertex x.
inline std::vector<VertexSet> freudenthal_grid(const GridShape& shape) {
  shape.validate();
  const std::size_t d = shape.dims.size();
  std::vector<std::size_t> stride(d, 1);
  for (std::size_t a = 1; a < d; ++a) stride[a] = stride[a - 1] * shape.dims[a - 1];

  // All strictly increasing chains of nonempty axis subsets (as bitmasks).
  std::vector<std::vector<unsigned>> chains;
  const unsigned full = (1u << d) - 1;
  std::vector<std::vector<unsigned>> frontier;
  for (unsigned s = 1; s <= full; ++s) frontier.push_back({s});
  while (!frontier.empty()) {
    std::vector<std::vector<unsigned>> next;
    for (const auto& chain : frontier) {
      chains.push_back(chain);
      for (unsigned s = 1; s <= full; ++s) {
        if (s != chain.back() && (s & chain.back()) == chain.back()) {
          auto longer = chain;
          longer.push_back(s);
          next.push_back(std::move(longer));
        }
      }
    }
    frontier = std::move(next);
  }

  std::vector<VertexSet> out;
  const std::size_t nv = shape.num_vertices();
  std::vector<std::size_t> coord(d);
  for (std::size_t id = 0; id < nv; ++id) {
    std::size_t rem = id;
    for (std::size_t a = 0; a < d; ++a) {
      coord[a] = rem % shape.dims[a];
      rem /= shape.dims[a];
    }
    out.push_back(VertexSet{static_cast<std::uint32_t>(id)});
    for (const auto& chain : chains) {
      const unsigned top = chain.back();
      bool inside = true;
      for (std::size_t a = 0; a < d; ++a) {
        if ((top >> a & 1u) && coord[a] + 1 >= shape.dims[a]) inside = false;
      }
      if (!inside) continue;
      VertexSet s;
      s.push_back(static_cast<std::uint32_t>(id));
      for (unsigned mask : chain) {
        std::size_t v = id;
        for (std::size_t a = 0; a < d; ++a) {
          if (mask >> a & 1u) v += stride[a];
        }
        s.push_back(static_cast<std::uint32_t>(v));
      }
      s.normalize();
      out.push_back(s);
    }
  }
  return out;
}

/// Lower-star filtration: each simplex takes the maximum of its vertex values.
/// With `negate`, values are negated first, which realizes the superlevel
/// filtration of the original function in reversed parameter.
inline FilteredComplex lower_star(std::span<const double> vertex_values,
                                  std::span<const VertexSet> simplices, bool negate = false) {
  for (double v : vertex_values) {
    if (!std::isfinite(v)) throw ContractError("lower_star: vertex values must be finite");
  }
  FilteredComplex out;
  out.simplices.reserve(simplices.size());
  for (const auto& s : simplices) {
    double value = -std::numeric_limits<double>::infinity();
    for (auto v : s) {
      if (v >= vertex_values.size()) {
        throw ContractError("lower_star: simplex " + s.to_string() + " uses an unknown vertex");
      }
      value = std::max(value, negate ? -vertex_values[v] : vertex_values[v]);
    }
    out.simplices.push_back({s, value});
  }
  return out;
}

}  // namespace landscape::ph
