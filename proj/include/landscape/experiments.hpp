#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "landscape/diagram.hpp"
#include "landscape/landscape.hpp"
#include "landscape/metrics.hpp"
#include "landscape/ph/complex.hpp"
#include "landscape/ph/reduction.hpp"
#include "landscape/random.hpp"
#include "landscape/random_models.hpp"
#include "landscape/stats.hpp"

namespace landscape::experiments {

/// Runs fn(0..count-1) on up to `threads` workers and returns results in index
/// order. The first exception thrown by any task is rethrown.
template <typename Result>
std::vector<Result> parallel_map(std::size_t count, unsigned threads,
                                 const std::function<Result(std::size_t)>& fn) {
  std::vector<std::optional<Result>> slots(count);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) slots[i].emplace(fn(i));
  } else {
    std::mutex mu;
    std::size_t next = 0;
    std::exception_ptr failure;
    auto worker = [&] {
      while (true) {
        std::size_t i;
        {
          std::lock_guard lock(mu);
          if (next >= count || failure) return;
          i = next++;
        }
        try {
          slots[i].emplace(fn(i));
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
  }
  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Per-degree outcome of a replicate experiment.
struct DegreeSummary {
  int degree = 0;
  /// Sample group ("torus", "sphere", ...); empty for single-group experiments.
  std::string group;
  std::vector<double> y;
  Interval ci{0.0, 0.0};
  PersistenceLandscape mean;
};

struct ExperimentReport {
  std::string experiment;
  std::uint64_t seed = 0;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::vector<DegreeSummary> degrees;
  nlohmann::ordered_json tests = nlohmann::ordered_json::object();
  nlohmann::ordered_json timings = nlohmann::ordered_json::object();

  const DegreeSummary& degree(int q, const std::string& group = "") const {
    for (const auto& d : degrees) {
      if (d.degree == q && d.group == group) return d;
    }
    throw ContractError("report has no degree " + std::to_string(q) +
                        (group.empty() ? "" : " for group " + group));
  }

  /// Structured report; `mean_files` names the exported mean landscapes per degree.
  nlohmann::ordered_json to_json(const std::vector<std::string>& mean_files = {},
                                 bool with_timings = false) const {
    nlohmann::ordered_json j;
    j["experiment"] = experiment;
    j["seed"] = seed;
    j["parameters"] = parameters;
    auto& degs = j["degrees"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < degrees.size(); ++i) {
      const auto& d = degrees[i];
      nlohmann::ordered_json e;
      e["degree"] = d.degree;
      if (!d.group.empty()) e["group"] = d.group;
      e["n"] = d.y.size();
      e["mean_y"] = d.y.empty() ? 0.0 : sample_mean(d.y);
      e["ci"] = {d.ci.low, d.ci.high};
      e["mean_landscape_levels"] = d.mean.num_levels();
      if (i < mean_files.size()) e["mean_landscape_file"] = mean_files[i];
      e["y"] = d.y;
      degs.push_back(std::move(e));
    }
    if (!tests.empty()) j["tests"] = tests;
    if (with_timings) j["timings_seconds"] = timings;
    return j;
  }
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Y = ||lambda||_1 per replicate, CI, and the mean landscape for each degree.
inline std::vector<DegreeSummary> summarize(
    const std::vector<std::vector<PersistenceDiagram>>& replicates, int max_degree, double alpha,
    const FunctionalSpec& functional) {
  std::vector<DegreeSummary> out;
  for (int q = 0; q <= max_degree; ++q) {
    DegreeSummary s;
    s.degree = q;
    std::vector<PersistenceLandscape> landscapes;
    landscapes.reserve(replicates.size());
    for (const auto& r : replicates) {
      landscapes.push_back(landscape_from_diagram(r[static_cast<std::size_t>(q)]));
      s.y.push_back(apply_functional(landscapes.back(), functional));
    }
    if (s.y.size() >= 2) {
      s.ci = confidence_interval(s.y, alpha);
    } else if (s.y.size() == 1) {
      s.ci = {s.y.front(), s.y.front()};
    }
    if (!landscapes.empty()) s.mean = mean_landscape(landscapes);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Random geometric complexes: Vietoris-Rips on uniform points in the cube.

enum class RipsScale {
  kDiameter,  ///< filtration value = largest pairwise distance
  kRadius     ///< filtration value = half of it (ball radius)
};

struct GeometricParams {
  std::size_t points = 100;
  std::size_t dims = 3;
  int max_degree = 1;
  std::size_t reps = 100;
  std::uint64_t seed = 0;
  RipsScale scale = RipsScale::kRadius;
  double alpha = 0.05;
  unsigned threads = 1;
};

/// Degree-q diagrams (reduced in degree 0) for one replicate.
inline std::vector<PersistenceDiagram> geometric_replicate(const GeometricParams& p, std::size_t index) {
  auto rng = CounterRng::stream(p.seed, index);
  const auto cloud = models::sample_cube(p.points, p.dims, rng());
  const auto dm = ph::DistanceMatrix::euclidean(cloud);
  auto complex = ph::vietoris_rips(dm, p.max_degree, kInfinity);
  if (p.scale == RipsScale::kRadius) {
    for (auto& s : complex.simplices) s.value *= 0.5;
  }
  return ph::persistent_homology(complex, {.max_degree = p.max_degree, .reduced = true});
}

inline ExperimentReport run_geometric(const GeometricParams& p) {
  const auto start = std::chrono::steady_clock::now();
  auto diagrams = parallel_map<std::vector<PersistenceDiagram>>(
      p.reps, p.threads, [&](std::size_t i) { return geometric_replicate(p, i); });
  ExperimentReport r;
  r.experiment = "geometric";
  r.seed = p.seed;
  r.parameters = {{"points", p.points}, {"dims", p.dims}, {"max_degree", p.max_degree},
                  {"reps", p.reps}, {"alpha", p.alpha},
                  {"scale", p.scale == RipsScale::kRadius ? "radius" : "diameter"},
                  {"functional", "l1"}};
  r.timings["replicates"] = detail::seconds_since(start);
  r.degrees = detail::summarize(diagrams, p.max_degree, p.alpha, FunctionalSpec::indicator());
  r.timings["total"] = detail::seconds_since(start);
  return r;
}

// ---------------------------------------------------------------------------
// Erdos-Renyi random clique complexes.

struct CliqueParams {
  std::size_t vertices = 25;
  double max_filtration = 0.55;
  int max_degree = 1;
  std::size_t reps = 10;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  unsigned threads = 1;
};

struct CliqueReplicate {
  ph::FilteredGraph graph;
  std::vector<PersistenceDiagram> diagrams;  // essential classes truncated at max_filtration
};

inline CliqueReplicate clique_replicate(const CliqueParams& p, std::size_t index) {
  auto rng = CounterRng::stream(p.seed, index);
  CliqueReplicate out;
  out.graph = models::er_filtered_graph(p.vertices, rng());
  const auto complex = ph::clique_complex(out.graph, p.max_degree, p.max_filtration);
  out.diagrams = ph::persistent_homology(complex, {.max_degree = p.max_degree, .reduced = true});
  for (auto& d : out.diagrams) d = truncate_essential(d, p.max_filtration);
  return out;
}

inline ExperimentReport run_clique(const CliqueParams& p) {
  const auto start = std::chrono::steady_clock::now();
  auto reps = parallel_map<std::vector<PersistenceDiagram>>(
      p.reps, p.threads, [&](std::size_t i) { return clique_replicate(p, i).diagrams; });
  ExperimentReport r;
  r.experiment = "clique";
  r.seed = p.seed;
  r.parameters = {{"vertices", p.vertices}, {"max_filtration", p.max_filtration},
                  {"max_degree", p.max_degree}, {"reps", p.reps}, {"alpha", p.alpha},
                  {"functional", "l1"}};
  r.degrees = detail::summarize(reps, p.max_degree, p.alpha, FunctionalSpec::indicator());
  r.timings["total"] = detail::seconds_since(start);
  return r;
}

// ---------------------------------------------------------------------------
// Gaussian random fields: lower-star persistence on the Freudenthal grid.

struct GrfParams {
  ph::GridShape shape{{32, 32}};
  double decay = 400.0;
  double spacing = 1.0 / 31.0;
  int max_degree = 1;
  std::size_t reps = 100;
  std::uint64_t seed = 0;
  /// Superlevel filtration (negated field) instead of sublevel.
  bool superlevel = false;
  /// Reduced degree-0 homology; otherwise the essential class is truncated
  /// at the maximum of the filtration function.
  bool reduced = false;
  double alpha = 0.05;
  unsigned threads = 1;
};

/// Diagrams of one field sample under the given filtration direction.
inline std::vector<PersistenceDiagram> field_diagrams(const models::GridField& field,
                                                      std::span<const ph::VertexSet> grid,
                                                      int max_degree, bool superlevel, bool reduced) {
  const auto complex = ph::lower_star(field.values, grid, superlevel);
  auto diagrams = ph::persistent_homology(complex, {.max_degree = max_degree, .reduced = reduced});
  double top = -kInfinity;
  for (double v : field.values) top = std::max(top, superlevel ? -v : v);
  for (auto& d : diagrams) d = truncate_essential(d, top);
  return diagrams;
}

inline ExperimentReport run_grf(const GrfParams& p) {
  const auto start = std::chrono::steady_clock::now();
  const models::GaussianFieldSampler sampler(p.shape, p.decay, p.spacing);
  const auto grid = ph::freudenthal_grid(p.shape);
  auto reps = parallel_map<std::vector<PersistenceDiagram>>(p.reps, p.threads, [&](std::size_t i) {
    const auto field = sampler.draw(CounterRng::stream(p.seed, i)());
    return field_diagrams(field, grid, p.max_degree, p.superlevel, p.reduced);
  });
  ExperimentReport r;
  r.experiment = "grf";
  r.seed = p.seed;
  std::string shape;
  for (auto d : p.shape.dims) shape += (shape.empty() ? "" : "x") + std::to_string(d);
  r.parameters = {{"shape", shape}, {"decay", p.decay}, {"spacing", p.spacing},
                  {"max_degree", p.max_degree}, {"reps", p.reps},
                  {"filtration", p.superlevel ? "superlevel" : "sublevel"},
                  {"reduced", p.reduced}, {"alpha", p.alpha}, {"functional", "l1"}};
  r.degrees = detail::summarize(reps, p.max_degree, p.alpha, FunctionalSpec::indicator());
  r.timings["total"] = detail::seconds_since(start);
  return r;
}

// ---------------------------------------------------------------------------
// Torus versus sphere: KDE on a Freudenthal grid, lower-star persistence,
// then two-sample inference per degree.

/// Noise level of the noisy torus/sphere variant, as a fraction of diameter.
inline constexpr double kNoisyFraction = 0.1;

struct TorusSphereParams {
  std::size_t points = 300;
  std::size_t samples = 10;
  std::size_t grid = 16;
  /// Grid spans [-extent, extent]^3.
  double extent = 1.6;
  /// Kernel bandwidth; <= 0 selects the Scott-style default per sample.
  double bandwidth = 0.0;
  /// Gaussian noise as a fraction of each object's diameter (0 = none).
  double noise = 0.0;
  int max_degree = 2;
  /// A simplex enters at level r once the density is <= r at all its
  /// vertices; true filters by superlevel sets instead.
  bool superlevel = false;
  std::size_t perm_reps = 999;
  int perm_p = 1;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  unsigned threads = 1;
};

inline std::vector<PersistenceDiagram> torus_sphere_replicate(const TorusSphereParams& p,
                                                              bool torus, std::size_t index,
                                                              std::span<const ph::VertexSet> grid,
                                                              const models::PointCloud& nodes) {
  const models::EqualAreaGeometry geo;
  auto rng = CounterRng::stream(p.seed, 2 * index + (torus ? 1 : 0));
  auto cloud = torus ? models::sample_torus(p.points, geo.torus_major, geo.torus_minor, rng())
                     : models::sample_sphere(p.points, geo.sphere_radius, rng());
  const double diameter = torus ? 2.0 * (geo.torus_major + geo.torus_minor) : 2.0 * geo.sphere_radius;
  cloud = models::add_gaussian_noise(std::move(cloud), p.noise * diameter, rng());
  const double h = p.bandwidth > 0.0 ? p.bandwidth : models::default_bandwidth(cloud);
  const auto density = models::triangular_kde(cloud, h, nodes);
  const auto complex = ph::lower_star(density, grid, p.superlevel);
  // The full grid complex is contractible: with reduced homology every class dies.
  return ph::persistent_homology(complex, {.max_degree = p.max_degree, .reduced = true});
}

inline ExperimentReport run_torus_sphere(const TorusSphereParams& p) {
  const auto start = std::chrono::steady_clock::now();
  const ph::GridShape shape{{p.grid, p.grid, p.grid}};
  const auto grid = ph::freudenthal_grid(shape);
  const auto nodes = models::grid_nodes(shape, -p.extent, p.extent);
  auto all = parallel_map<std::vector<PersistenceDiagram>>(
      2 * p.samples, p.threads, [&](std::size_t i) {
        return torus_sphere_replicate(p, i % 2 == 1, i / 2, grid, nodes);
      });
  std::vector<std::vector<PersistenceDiagram>> torus, sphere;
  for (std::size_t i = 0; i < all.size(); ++i) (i % 2 ? torus : sphere).push_back(std::move(all[i]));

  ExperimentReport r;
  r.experiment = "torus-sphere";
  r.seed = p.seed;
  r.parameters = {{"points", p.points}, {"samples", p.samples}, {"grid", p.grid},
                  {"extent", p.extent}, {"bandwidth", p.bandwidth > 0.0 ? nlohmann::ordered_json(p.bandwidth) : nlohmann::ordered_json("scott")},
                  {"noise_fraction_of_diameter", p.noise}, {"max_degree", p.max_degree},
                  {"filtration", p.superlevel ? "superlevel" : "sublevel"},
                  {"perm_reps", p.perm_reps}, {"perm_p", p.perm_p}, {"alpha", p.alpha},
                  {"functional", "l1"}};
  const auto functional = FunctionalSpec::indicator();
  auto ts = detail::summarize(torus, p.max_degree, p.alpha, functional);
  auto ss = detail::summarize(sphere, p.max_degree, p.alpha, functional);
  for (int q = 0; q <= p.max_degree; ++q) {
    auto& t = ts[static_cast<std::size_t>(q)];
    auto& s = ss[static_cast<std::size_t>(q)];
    nlohmann::ordered_json entry;
    const auto levene = levene_test(t.y, s.y);
    const bool equal_var = levene.p_value >= p.alpha;
    const auto tt = two_sample_t(t.y, s.y, equal_var ? TTestMethod::kPooled : TTestMethod::kWelch);
    std::vector<PersistenceLandscape> lt, ls;
    for (const auto& d : torus) lt.push_back(landscape_from_diagram(d[static_cast<std::size_t>(q)]));
    for (const auto& d : sphere) ls.push_back(landscape_from_diagram(d[static_cast<std::size_t>(q)]));
    const auto perm = permutation_test(lt, ls, PNorm(p.perm_p), p.perm_reps,
                                       p.seed ^ (0xA5A5ULL + static_cast<std::uint64_t>(q)), p.threads);
    entry["levene"] = {{"statistic", levene.statistic}, {"p_value", levene.p_value}};
    entry["t_test"] = {{"method", tt.method}, {"statistic", tt.statistic},
                       {"df", tt.degrees_of_freedom}, {"p_value", tt.p_value}};
    entry["permutation"] = {{"statistic", perm.statistic}, {"p_value", perm.p_value},
                            {"reps", perm.replicates}};
    r.tests["degree_" + std::to_string(q)] = entry;
    t.group = "torus";
    s.group = "sphere";
  }
  for (auto& t : ts) r.degrees.push_back(std::move(t));
  for (auto& s : ss) r.degrees.push_back(std::move(s));
  r.timings["total"] = detail::seconds_since(start);
  return r;
}

}  // namespace landscape::experiments
