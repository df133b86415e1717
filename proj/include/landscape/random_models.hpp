#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "landscape/error.hpp"
#include "landscape/ph/complex.hpp"
#include "landscape/random.hpp"

namespace landscape::models {

/// Points as rows; all rows share the ambient dimension.
using PointCloud = std::vector<std::vector<double>>;

/// Values on a regular grid, vertex id = i0 + s0 * (i1 + s1 * i2).
struct GridField {
  ph::GridShape shape;
  std::vector<double> values;
};

inline PointCloud sample_cube(std::size_t n, std::size_t dim, std::uint64_t seed) {
  if (n == 0) throw ContractError("sample_cube: n must be positive");
  if (dim != 2 && dim != 3) throw ContractError("sample_cube: dimension must be 2 or 3");
  CounterRng rng(seed);
  PointCloud cloud(n, std::vector<double>(dim));
  for (auto& p : cloud)
    for (auto& c : p) c = rng.uniform();
  return cloud;
}

struct Annulus {
  double cx;
  double cy;
};

/// Area-uniform sample on a union of disjoint congruent annuli in the plane.
inline PointCloud sample_annuli(std::size_t n, double inner, double outer,
                                std::span<const Annulus> centers, std::uint64_t seed) {
  if (!(inner > 0.0 && inner < outer)) {
    throw ContractError("sample_annuli: need 0 < inner radius < outer radius");
  }
  if (centers.empty()) throw ContractError("sample_annuli: no centers given");
  CounterRng rng(seed);
  PointCloud cloud;
  cloud.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Congruent annuli have equal area, so each is equally likely.
    const auto& c = centers[rng.below(centers.size())];
    const double r = std::sqrt(inner * inner + rng.uniform() * (outer * outer - inner * inner));
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    cloud.push_back({c.cx + r * std::cos(angle), c.cy + r * std::sin(angle)});
  }
  return cloud;
}

/// Two annuli with radii 1/2 and 1 whose centers are 2.4 apart.
inline std::vector<Annulus> default_annuli() { return {{0.0, 0.0}, {2.4, 0.0}}; }

/// Surface-area-uniform sample of the torus with major radius R and tube
/// radius r: the tube angle is drawn by rejection from density ~ R + r cos(theta).
inline PointCloud sample_torus(std::size_t n, double major, double minor, std::uint64_t seed) {
  if (!(major > minor && minor > 0.0)) {
    throw ContractError("sample_torus: need R > r > 0");
  }
  CounterRng rng(seed);
  PointCloud cloud;
  cloud.reserve(n);
  while (cloud.size() < n) {
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    const double accept = rng.uniform() * (major + minor);
    if (accept > major + minor * std::cos(theta)) continue;
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    const double ring = major + minor * std::cos(theta);
    cloud.push_back({ring * std::cos(phi), ring * std::sin(phi), minor * std::sin(theta)});
  }
  return cloud;
}

/// Uniform sample on the sphere of the given radius (normalized Gaussian triples).
inline PointCloud sample_sphere(std::size_t n, double radius, std::uint64_t seed) {
  if (!(radius > 0.0)) throw ContractError("sample_sphere: radius must be positive");
  CounterRng rng(seed);
  PointCloud cloud;
  cloud.reserve(n);
  while (cloud.size() < n) {
    const double x = rng.normal();
    const double y = rng.normal();
    const double z = rng.normal();
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (norm == 0.0) continue;
    cloud.push_back({radius * x / norm, radius * y / norm, radius * z / norm});
  }
  return cloud;
}

/// Unit sphere (area 4 pi) and the torus of equal area with r = R / 2:
/// 4 pi^2 R r = 4 pi gives R = sqrt(2 / pi).
struct EqualAreaGeometry {
  double sphere_radius = 1.0;
  double torus_major = std::sqrt(2.0 / std::numbers::pi);
  double torus_minor = 0.5 * std::sqrt(2.0 / std::numbers::pi);
};

inline PointCloud add_gaussian_noise(PointCloud cloud, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw ContractError("add_gaussian_noise: sigma must be non-negative");
  if (sigma == 0.0) return cloud;
  CounterRng rng(seed);
  for (auto& p : cloud)
    for (auto& c : p) c += sigma * rng.normal();
  return cloud;
}

/// Complete graph on n vertices with iid uniform [0, 1] edge values.
inline ph::FilteredGraph er_filtered_graph(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ContractError("er_filtered_graph: n must be positive");
  CounterRng rng(seed);
  std::vector<ph::WeightedEdge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), rng.uniform()});
  return ph::FilteredGraph(n, std::move(edges));
}

/// Stationary zero-mean, unit-variance Gaussian field on a grid with spacing
/// `spacing`, covariance gamma(h) = exp(-decay * |h|^2) of the lag vector h.
///
/// The dense covariance is factorized once (Cholesky, 1e-10 diagonal jitter);
/// draw() then costs one triangular matrix-vector product per field.
class GaussianFieldSampler {
 public:
  static constexpr std::size_t kMaxNodes = 4096;

  GaussianFieldSampler(ph::GridShape shape, double decay, double spacing)
      : shape_(std::move(shape)) {
    shape_.validate();
    if (!(decay > 0.0)) throw ContractError("gaussian field: decay must be positive");
    if (!(spacing > 0.0)) throw ContractError("gaussian field: spacing must be positive");
    const std::size_t n = shape_.num_vertices();
    if (n > kMaxNodes) {
      throw ContractError("gaussian field: grid has " + std::to_string(n) +
                          " nodes; dense factorization supports at most " +
                          std::to_string(kMaxNodes) + " (use a coarser grid)");
    }
    const std::size_t d = shape_.dims.size();
    std::vector<std::vector<double>> coords(n, std::vector<double>(d));
    for (std::size_t id = 0; id < n; ++id) {
      std::size_t rem = id;
      for (std::size_t a = 0; a < d; ++a) {
        coords[id][a] = spacing * static_cast<double>(rem % shape_.dims[a]);
        rem /= shape_.dims[a];
      }
    }
    Eigen::MatrixXd cov(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double h2 = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
          const double diff = coords[i][a] - coords[j][a];
          h2 += diff * diff;
        }
        const double c = std::exp(-decay * h2);
        cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c;
        cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = c;
      }
      cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += 1e-10;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
      throw NumericalError(
          "gaussian field: covariance not positive definite after jitter; use a coarser grid");
    }
    factor_ = llt.matrixL();
  }

  const ph::GridShape& shape() const noexcept { return shape_; }

  GridField draw(std::uint64_t seed) const {
    CounterRng rng(seed);
    const auto n = factor_.rows();
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
    const Eigen::VectorXd x = factor_.triangularView<Eigen::Lower>() * z;
    return {shape_, std::vector<double>(x.data(), x.data() + n)};
  }

 private:
  ph::GridShape shape_;
  Eigen::MatrixXd factor_;
};

/// One field; for many draws on the same grid reuse a GaussianFieldSampler.
inline GridField gaussian_random_field(const ph::GridShape& shape, double decay, double spacing,
                                       std::uint64_t seed) {
  return GaussianFieldSampler(shape, decay, spacing).draw(seed);
}

/// Integral of the bump max(1 - |u| / h, 0) over R^d: V_d h^d / (d + 1),
/// with V_d the unit-ball volume.
inline double triangular_kernel_mass(std::size_t dim, double bandwidth) {
  double unit_ball;
  switch (dim) {
    case 1: unit_ball = 2.0; break;
    case 2: unit_ball = std::numbers::pi; break;
    case 3: unit_ball = 4.0 / 3.0 * std::numbers::pi; break;
    default: throw ContractError("triangular kernel: dimension must be 1, 2 or 3");
  }
  return unit_ball * std::pow(bandwidth, static_cast<double>(dim)) / static_cast<double>(dim + 1);
}

/// Triangular-kernel density estimate of `data` at each of `at`.
inline std::vector<double> triangular_kde(const PointCloud& data, double bandwidth,
                                          const PointCloud& at) {
  if (!(bandwidth > 0.0)) throw ContractError("triangular_kde: bandwidth must be positive");
  if (data.empty()) throw ContractError("triangular_kde: no data points");
  const std::size_t dim = data.front().size();
  const double norm = 1.0 / (static_cast<double>(data.size()) * triangular_kernel_mass(dim, bandwidth));
  const double h2 = bandwidth * bandwidth;
  std::vector<double> out(at.size(), 0.0);
  for (std::size_t i = 0; i < at.size(); ++i) {
    if (at[i].size() != dim) throw ContractError("triangular_kde: dimension mismatch");
    double acc = 0.0;
    for (const auto& x : data) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        const double diff = at[i][c] - x[c];
        d2 += diff * diff;
      }
      if (d2 < h2) acc += 1.0 - std::sqrt(d2) / bandwidth;
    }
    out[i] = acc * norm;
  }
  return out;
}

/// Scott-style default bandwidth: n^{-1/(d+4)} times the mean per-axis
/// standard deviation of the data.
inline double default_bandwidth(const PointCloud& data) {
  if (data.size() < 2) throw ContractError("default_bandwidth: need at least two points");
  const std::size_t dim = data.front().size();
  double spread = 0.0;
  for (std::size_t c = 0; c < dim; ++c) {
    double mean = 0.0;
    for (const auto& p : data) mean += p[c];
    mean /= static_cast<double>(data.size());
    double var = 0.0;
    for (const auto& p : data) var += (p[c] - mean) * (p[c] - mean);
    spread += std::sqrt(var / static_cast<double>(data.size() - 1));
  }
  spread /= static_cast<double>(dim);
  return spread * std::pow(static_cast<double>(data.size()), -1.0 / (static_cast<double>(dim) + 4.0));
}

/// Node coordinates of a grid spanning [lo, hi] on every axis.
inline PointCloud grid_nodes(const ph::GridShape& shape, double lo, double hi) {
  shape.validate();
  const std::size_t d = shape.dims.size();
  PointCloud out(shape.num_vertices(), std::vector<double>(d));
  for (std::size_t id = 0; id < out.size(); ++id) {
    std::size_t rem = id;
    for (std::size_t a = 0; a < d; ++a) {
      const std::size_t i = rem % shape.dims[a];
      rem /= shape.dims[a];
      const double step = shape.dims[a] > 1 ? (hi - lo) / static_cast<double>(shape.dims[a] - 1) : 0.0;
      out[id][a] = lo + step * static_cast<double>(i);
    }
  }
  return out;
}

}  // namespace landscape::models
