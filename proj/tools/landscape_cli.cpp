// Command-line front end: each subcommand is a thin adapter over one library
// operation. Exit codes: 0 success, 2 input contract violation, 1 internal error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "landscape/diagram.hpp"
#include "landscape/error.hpp"
#include "landscape/experiments.hpp"
#include "landscape/io.hpp"
#include "landscape/landscape.hpp"
#include "landscape/matching.hpp"
#include "landscape/metrics.hpp"
#include "landscape/ph/complex.hpp"
#include "landscape/ph/reduction.hpp"
#include "landscape/random_models.hpp"
#include "landscape/stats.hpp"

namespace {

using namespace landscape;
using nlohmann::ordered_json;

void print_value(double v) { std::cout << io::format_real(v) << '\n'; }

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    auto out = io::detail::open_output(out_path);
    out << text;
  }
}

ordered_json result_json(const TestResult& r) {
  ordered_json j;
  j["method"] = r.method;
  j["statistic"] = r.statistic;
  j["df"] = r.degrees_of_freedom;
  if (r.degrees_of_freedom2 != 0.0) j["df2"] = r.degrees_of_freedom2;
  j["p_value"] = r.p_value;
  return j;
}

std::vector<PersistenceLandscape> read_landscapes(const std::vector<std::string>& paths) {
  std::vector<PersistenceLandscape> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(io::read_landscape(p));
  return out;
}

std::vector<double> functional_values(const std::vector<std::string>& paths, const std::string& spec) {
  const auto f = FunctionalSpec::parse(spec);
  std::vector<double> y;
  for (const auto& l : read_landscapes(paths)) y.push_back(apply_functional(l, f));
  return y;
}

PersistenceDiagram load_diagram(const std::string& path, int degree, std::optional<double> threshold) {
  auto d = io::read_diagram(path, degree);
  if (threshold) d = threshold_diagram(d, *threshold);
  return d;
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistence landscapes: construction, metrics, inference and experiments"};
  app.require_subcommand(1);
  std::function<void()> action;

  // --- compute -------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("compute", "Landscape of one degree of a diagram file");
    auto diagram = std::make_shared<std::string>();
    auto degree = std::make_shared<int>(0);
    auto kmax = std::make_shared<std::optional<std::size_t>>();
    auto threshold = std::make_shared<std::optional<double>>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--diagram", *diagram, "Diagram file (<degree> <birth> <death> per line)")->required();
    cmd->add_option("--degree", *degree, "Homology degree")->required();
    cmd->add_option("--kmax", *kmax, "Keep at most this many levels");
    cmd->add_option("--threshold", *threshold, "Clip the diagram to [-B, B] first");
    cmd->add_option("-o,--output", *out, "Output landscape file (JSON)")->required();
    cmd->callback([=, &action] {
      action = [=] {
        const auto d = load_diagram(*diagram, *degree, *threshold);
        io::write_landscape(*out, landscape_from_diagram(d, *kmax));
      };
    });
  }

  // --- norm / distance -----------------------------------------------------
  {
    auto* cmd = app.add_subcommand("norm", "L^p norm of a landscape");
    auto p = std::make_shared<std::string>("1");
    auto file = std::make_shared<std::string>();
    cmd->add_option("--p", *p, "Positive integer or inf");
    cmd->add_option("landscape", *file, "Landscape file (JSON)")->required();
    cmd->callback([=, &action] {
      action = [=] { print_value(lp_norm(io::read_landscape(*file), PNorm::parse(*p))); };
    });
  }
  {
    auto* cmd = app.add_subcommand("distance", "Landscape distance ||L - M||_p");
    auto p = std::make_shared<std::string>("1");
    auto files = std::make_shared<std::vector<std::string>>();
    cmd->add_option("--p", *p, "Positive integer or inf");
    cmd->add_option("landscapes", *files, "Two landscape files")->required()->expected(2);
    cmd->callback([=, &action] {
      action = [=] {
        print_value(landscape_distance(io::read_landscape((*files)[0]),
                                       io::read_landscape((*files)[1]), PNorm::parse(*p)));
      };
    });
  }
  {
    auto* cmd = app.add_subcommand("diagram-distance", "Matching distances between diagrams");
    auto metric = std::make_shared<std::string>("bottleneck");
    auto p = std::make_shared<int>(1);
    auto degree = std::make_shared<int>(0);
    auto threshold = std::make_shared<std::optional<double>>();
    auto files = std::make_shared<std::vector<std::string>>();
    cmd->add_option("--metric", *metric, "Matching distance (bound: stability bound)")
        ->check(CLI::IsMember({"bottleneck", "wasserstein", "weighted", "bound"}));
    cmd->add_option("--p", *p, "Positive integer exponent")->check(CLI::PositiveNumber);
    cmd->add_option("--degree", *degree, "Homology degree read from both files");
    cmd->add_option("--threshold", *threshold, "Clip both diagrams to [-B, B] first");
    cmd->add_option("diagrams", *files, "Two diagram files")->required()->expected(2);
    cmd->callback([=, &action] {
      action = [=] {
        const auto a = load_diagram((*files)[0], *degree, *threshold);
        const auto b = load_diagram((*files)[1], *degree, *threshold);
        if (*metric == "bottleneck") print_value(bottleneck_distance(a, b));
        else if (*metric == "wasserstein") print_value(wasserstein_distance(a, b, *p));
        else if (*metric == "weighted") print_value(weighted_wasserstein(a, b, *p));
        else print_value(stability_bound(a, b, *p));
      };
    });
  }

  // --- mean / inference ----------------------------------------------------
  {
    auto* cmd = app.add_subcommand("mean", "Pointwise mean of landscapes");
    auto files = std::make_shared<std::vector<std::string>>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("landscapes", *files, "Landscape files")->required();
    cmd->add_option("-o,--output", *out, "Output landscape file (JSON)")->required();
    cmd->callback([=, &action] {
      action = [=] { io::write_landscape(*out, mean_landscape(read_landscapes(*files))); };
    });
  }
  {
    auto* cmd = app.add_subcommand("ci", "Confidence interval for E(Y), Y = int f lambda");
    auto alpha = std::make_shared<double>(0.05);
    auto spec = std::make_shared<std::string>("l1");
    auto files = std::make_shared<std::vector<std::string>>();
    cmd->add_option("--alpha", *alpha, "Confidence level is 1 - alpha");
    cmd->add_option("--functional", *spec, "l1 | indicator[:B[:K]] | weighted:r[:B]");
    cmd->add_option("landscapes", *files, "Landscape files, one per sample")->required();
    cmd->callback([=, &action] {
      action = [=] {
        const auto ci = confidence_interval(functional_values(*files, *spec), *alpha);
        print_value(ci.low);
        print_value(ci.high);
      };
    });
  }
  for (const std::string name : {"ttest", "levene"}) {
    auto* cmd = app.add_subcommand(name, name == "ttest" ? "Two-sample t-test on a functional"
                                                         : "Levene test for equal variances");
    auto spec = std::make_shared<std::string>("l1");
    auto method = std::make_shared<std::string>("pooled");
    auto a = std::make_shared<std::vector<std::string>>();
    auto b = std::make_shared<std::vector<std::string>>();
    cmd->add_option("--functional", *spec, "l1 | indicator[:B[:K]] | weighted:r[:B]");
    if (name == "ttest") {
      cmd->add_option("--method", *method, "Pooled (Student) or Welch t-test")->check(CLI::IsMember({"pooled", "welch"}));
    }
    cmd->add_option("--group-a", *a, "Landscape files of the first group")->required();
    cmd->add_option("--group-b", *b, "Landscape files of the second group")->required();
    cmd->callback([=, &action] {
      action = [=] {
        const auto ya = functional_values(*a, *spec);
        const auto yb = functional_values(*b, *spec);
        const auto r = name == "levene"
                           ? levene_test(ya, yb)
                           : two_sample_t(ya, yb, *method == "welch" ? TTestMethod::kWelch
                                                                     : TTestMethod::kPooled);
        std::cout << result_json(r).dump(2) << '\n';
      };
    });
  }
  {
    auto* cmd = app.add_subcommand("hotelling", "Hotelling T^2 on (int lambda_1, ..., int lambda_K)");
    auto levels = std::make_shared<std::size_t>(2);
    auto paired = std::make_shared<bool>(false);
    auto a = std::make_shared<std::vector<std::string>>();
    auto b = std::make_shared<std::vector<std::string>>();
    cmd->add_option("--levels", *levels, "Number of levels K")->check(CLI::PositiveNumber);
    cmd->add_flag("--paired", *paired, "Paired test on per-pair differences");
    cmd->add_option("--group-a", *a, "Landscape files of the first group")->required();
    cmd->add_option("--group-b", *b, "Landscape files of the second group")->required();
    cmd->callback([=, &action] {
      action = [=] {
        auto vectors = [&](const std::vector<std::string>& files) {
          std::vector<Observation> out;
          for (const auto& l : read_landscapes(files)) {
            Observation v;
            for (std::size_t k = 1; k <= *levels; ++k) v.push_back(l.level(k).integral());
            out.push_back(std::move(v));
          }
          return out;
        };
        const auto va = vectors(*a);
        const auto vb = vectors(*b);
        const auto r = *paired ? hotelling_t2_paired(va, vb) : hotelling_t2(va, vb);
        std::cout << result_json(r).dump(2) << '\n';
      };
    });
  }
  {
    auto* cmd = app.add_subcommand("permtest", "Permutation test on the distance between mean landscapes");
    auto p = std::make_shared<std::string>("1");
    auto reps = std::make_shared<std::size_t>(999);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto threads = std::make_shared<unsigned>(default_threads());
    auto a = std::make_shared<std::vector<std::string>>();
    auto b = std::make_shared<std::vector<std::string>>();
    cmd->add_option("--p", *p, "Positive integer or inf");
    cmd->add_option("--reps", *reps, "Random relabelings")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", *seed, "Master seed");
    cmd->add_option("--threads", *threads, "Worker threads (results do not depend on it)");
    cmd->add_option("--group-a", *a, "Landscape files of the first group")->required();
    cmd->add_option("--group-b", *b, "Landscape files of the second group")->required();
    cmd->callback([=, &action] {
      action = [=] {
        const auto r = permutation_test(read_landscapes(*a), read_landscapes(*b), PNorm::parse(*p),
                                        *reps, *seed, *threads);
        ordered_json j;
        j["statistic"] = r.statistic;
        j["p_value"] = r.p_value;
        j["reps"] = r.replicates;
        j["at_least_as_extreme"] = r.at_least_as_extreme;
        std::cout << j.dump(2) << '\n';
      };
    });
  }

  // --- ph ----------------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("ph", "Persistent homology of a Rips, clique or lower-star filtration");
    auto input = std::make_shared<std::string>();
    auto filtration = std::make_shared<std::string>("rips");
    auto maxdim = std::make_shared<int>(1);
    auto maxradius = std::make_shared<double>(kInfinity);
    auto shape = std::make_shared<std::string>();
    auto negate = std::make_shared<bool>(false);
    auto reduced = std::make_shared<bool>(false);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--input", *input,
                    "rips: points CSV; clique: graph CSV (n, then u,v,value); lowerstar: grid values")
        ->required();
    cmd->add_option("--filtration", *filtration, "Filtration type")->check(CLI::IsMember({"rips", "clique", "lowerstar"}));
    cmd->add_option("--maxdim", *maxdim, "Highest homology degree")->check(CLI::NonNegativeNumber);
    cmd->add_option("--maxradius", *maxradius, "Rips diameter / clique filtration cap");
    cmd->add_option("--shape", *shape, "Grid shape for lowerstar, e.g. 32x32");
    cmd->add_flag("--negate", *negate, "lowerstar: superlevel filtration (negated values)");
    cmd->add_flag("--reduced", *reduced, "Reduced homology in degree 0");
    cmd->add_option("-o,--output", *out, "Output diagram file")->required();
    cmd->callback([=, &action] {
      action = [=] {
        ph::FilteredComplex complex;
        if (*filtration == "rips") {
          const auto pts = io::read_points(*input);
          complex = ph::vietoris_rips(ph::DistanceMatrix::euclidean(pts), *maxdim, *maxradius);
        } else if (*filtration == "clique") {
          complex = ph::clique_complex(io::read_graph(*input), *maxdim, *maxradius);
        } else {
          if (shape->empty()) throw ContractError("lowerstar requires --shape");
          const auto field = io::read_grid(*input, io::parse_shape(*shape));
          const auto grid = ph::freudenthal_grid(field.shape);
          complex = ph::lower_star(field.values, grid, *negate);
        }
        const auto diagrams =
            ph::persistent_homology(complex, {.max_degree = *maxdim, .reduced = *reduced});
        std::ostringstream os;
        io::write_diagrams(os, diagrams);
        emit(os.str(), *out);
      };
    });
  }

  // --- gen -----------------------------------------------------------------
  {
    auto* gen = app.add_subcommand("gen", "Sample from the random models");
    gen->require_subcommand(1);
    auto n = std::make_shared<std::size_t>(100);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto out = std::make_shared<std::string>();
    auto dims = std::make_shared<std::size_t>(3);
    auto inner = std::make_shared<double>(0.5);
    auto outer = std::make_shared<double>(1.0);
    auto radius = std::make_shared<double>(1.0);
    const models::EqualAreaGeometry geo;
    auto major = std::make_shared<double>(geo.torus_major);
    auto minor = std::make_shared<double>(geo.torus_minor);
    auto noise = std::make_shared<double>(0.0);
    auto shape = std::make_shared<std::string>("32x32");
    auto decay = std::make_shared<double>(400.0);
    auto spacing = std::make_shared<double>(0.0);

    auto common = [&](CLI::App* c, bool points) {
      c->add_option("--seed", *seed, "Master seed");
      c->add_option("-o,--output", *out, "Output file (default stdout)");
      if (points) {
        c->add_option("-n,--points", *n, "Number of points")->check(CLI::PositiveNumber);
        c->add_option("--noise", *noise, "Gaussian noise standard deviation");
      }
    };
    auto write_cloud = [=](models::PointCloud cloud) {
      cloud = models::add_gaussian_noise(std::move(cloud), *noise, *seed ^ 0x5EEDULL);
      std::ostringstream os;
      io::write_rows(os, cloud);
      emit(os.str(), *out);
    };

    auto* cube = gen->add_subcommand("cube", "Uniform points in [0,1]^d");
    common(cube, true);
    cube->add_option("--dims", *dims, "Ambient dimension")->check(CLI::IsMember({2, 3}));
    cube->callback([=, &action] { action = [=] { write_cloud(models::sample_cube(*n, *dims, *seed)); }; });

    auto* annuli = gen->add_subcommand("annuli", "Uniform points on two interlocking annuli");
    common(annuli, true);
    annuli->add_option("--inner", *inner, "Inner radius");
    annuli->add_option("--outer", *outer, "Outer radius");
    annuli->callback([=, &action] {
      action = [=] {
        const auto centers = models::default_annuli();
        write_cloud(models::sample_annuli(*n, *inner, *outer, centers, *seed));
      };
    });

    auto* torus = gen->add_subcommand("torus", "Surface-uniform torus sample");
    common(torus, true);
    torus->add_option("--major", *major, "Major radius R");
    torus->add_option("--minor", *minor, "Tube radius r");
    torus->callback([=, &action] { action = [=] { write_cloud(models::sample_torus(*n, *major, *minor, *seed)); }; });

    auto* sphere = gen->add_subcommand("sphere", "Surface-uniform sphere sample");
    common(sphere, true);
    sphere->add_option("--radius", *radius, "Sphere radius");
    sphere->callback([=, &action] { action = [=] { write_cloud(models::sample_sphere(*n, *radius, *seed)); }; });

    auto* er = gen->add_subcommand("er", "Complete graph with iid uniform edge values");
    common(er, false);
    er->add_option("-n,--vertices", *n, "Number of vertices")->check(CLI::PositiveNumber);
    er->callback([=, &action] {
      action = [=] {
        std::ostringstream os;
        io::write_graph(os, models::er_filtered_graph(*n, *seed));
        emit(os.str(), *out);
      };
    });

    auto* grf = gen->add_subcommand("grf", "Gaussian random field with covariance exp(-decay |h|^2)");
    common(grf, false);
    grf->add_option("--shape", *shape, "Grid shape, e.g. 32x32");
    grf->add_option("--decay", *decay, "Covariance decay");
    grf->add_option("--spacing", *spacing, "Grid spacing (default: unit square/cube)");
    grf->callback([=, &action] {
      action = [=] {
        const auto s = io::parse_shape(*shape);
        const double h = *spacing > 0.0 ? *spacing : 1.0 / static_cast<double>(s.dims.front() - 1);
        std::ostringstream os;
        io::write_grid(os, models::gaussian_random_field(s, *decay, h, *seed));
        emit(os.str(), *out);
      };
    });
  }

  // --- experiment ----------------------------------------------------------
  {
    auto* exp = app.add_subcommand("experiment", "Replicate experiments with a structured report");
    exp->require_subcommand(1);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto reps = std::make_shared<std::optional<std::size_t>>();
    auto maxdeg = std::make_shared<std::optional<int>>();
    auto threads = std::make_shared<unsigned>(default_threads());
    auto alpha = std::make_shared<double>(0.05);
    auto out = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    auto timings = std::make_shared<bool>(false);

    auto common = [&](CLI::App* c) {
      c->add_option("--seed", *seed, "Master seed");
      c->add_option("--reps", *reps, "Replicates (samples per group for torus-sphere)")
          ->check(CLI::PositiveNumber);
      c->add_option("--maxdeg", *maxdeg, "Highest homology degree (torus-sphere: 2, others: 1)")
          ->check(CLI::NonNegativeNumber);
      c->add_option("--threads", *threads, "Worker threads (results do not depend on it)");
      c->add_option("--alpha", *alpha, "Confidence level is 1 - alpha");
      c->add_option("-o,--output", *out, "Report file (default stdout)");
      c->add_option("--out-dir", *out_dir, "Directory for mean landscape files");
      c->add_flag("--timings", *timings, "Include wall-clock timings in the report");
    };
    auto finish = [=](const experiments::ExperimentReport& r) {
      std::vector<std::string> files;
      if (!out_dir->empty()) {
        std::filesystem::create_directories(*out_dir);
        for (const auto& d : r.degrees) {
          const std::string name = r.experiment + (d.group.empty() ? "" : "_" + d.group) +
                                   "_mean_deg" + std::to_string(d.degree) + ".json";
          io::write_landscape((std::filesystem::path(*out_dir) / name).string(), d.mean);
          files.push_back(name);
        }
      }
      emit(r.to_json(files, *timings).dump(2) + "\n", *out);
    };

    auto geo = std::make_shared<experiments::GeometricParams>();
    auto scale = std::make_shared<std::string>("radius");
    auto* g = exp->add_subcommand("geometric", "Vietoris-Rips on uniform points in the cube");
    common(g);
    g->add_option("--points", geo->points, "Points per replicate")->check(CLI::PositiveNumber);
    g->add_option("--dims", geo->dims, "Ambient dimension")->check(CLI::IsMember({2, 3}));
    g->add_option("--scale", *scale, "Filtration value: radius (half diameter) or diameter")
        ->check(CLI::IsMember({"radius", "diameter"}));
    g->callback([=, &action] {
      action = [=] {
        auto p = *geo;
        p.reps = reps->value_or(100);
        p.seed = *seed;
        p.max_degree = maxdeg->value_or(1);
        p.threads = *threads;
        p.alpha = *alpha;
        p.scale = *scale == "radius" ? experiments::RipsScale::kRadius : experiments::RipsScale::kDiameter;
        finish(experiments::run_geometric(p));
      };
    });

    auto clq = std::make_shared<experiments::CliqueParams>();
    auto* c = exp->add_subcommand("clique", "Erdos-Renyi random clique complexes");
    common(c);
    c->add_option("--vertices", clq->vertices, "Graph vertices")->check(CLI::PositiveNumber);
    c->add_option("--max-filtration", clq->max_filtration, "Truncation value");
    c->callback([=, &action] {
      action = [=] {
        auto p = *clq;
        p.reps = reps->value_or(10);
        p.seed = *seed;
        p.max_degree = maxdeg->value_or(1);
        p.threads = *threads;
        p.alpha = *alpha;
        finish(experiments::run_clique(p));
      };
    });

    auto grf = std::make_shared<experiments::GrfParams>();
    auto grf_shape = std::make_shared<std::string>("32x32");
    auto grf_spacing = std::make_shared<double>(0.0);
    auto* f = exp->add_subcommand("grf", "Gaussian random fields, lower-star persistence");
    common(f);
    f->add_option("--shape", *grf_shape, "Grid shape, e.g. 32x32");
    f->add_option("--decay", grf->decay, "Covariance decay");
    f->add_option("--spacing", *grf_spacing, "Grid spacing (default: unit square/cube)");
    f->add_flag("--superlevel", grf->superlevel);
    f->add_flag("--reduced", grf->reduced);
    f->callback([=, &action] {
      action = [=] {
        auto p = *grf;
        p.shape = io::parse_shape(*grf_shape);
        p.spacing = *grf_spacing > 0.0 ? *grf_spacing : 1.0 / static_cast<double>(p.shape.dims.front() - 1);
        p.reps = reps->value_or(100);
        p.seed = *seed;
        p.max_degree = maxdeg->value_or(1);
        p.threads = *threads;
        p.alpha = *alpha;
        finish(experiments::run_grf(p));
      };
    });

    auto ts = std::make_shared<experiments::TorusSphereParams>();
    auto superlevel = std::make_shared<bool>(false);
    auto noisy = std::make_shared<bool>(false);
    auto* t = exp->add_subcommand("torus-sphere", "Torus versus sphere two-sample inference");
    common(t);
    t->add_option("--points", ts->points, "Points per sample")->check(CLI::PositiveNumber);
    t->add_option("--grid", ts->grid, "Grid nodes per axis")->check(CLI::Range(2, 64));
    t->add_option("--extent", ts->extent, "Grid spans [-extent, extent]^3");
    t->add_option("--bandwidth", ts->bandwidth, "KDE bandwidth (default: Scott-style rule)");
    t->add_option("--noise", ts->noise, "Noise sigma as a fraction of object diameter");
    t->add_option("--perm-reps", ts->perm_reps, "Permutation test relabelings");
    t->add_option("--perm-p", ts->perm_p, "Exponent of the permutation test distance")->check(CLI::PositiveNumber);
    t->add_flag("--noisy", *noisy, "Noise at 0.1 x diameter unless --noise is given");
    t->add_flag("--superlevel", *superlevel, "Filter by high density first");
    t->callback([=, &action] {
      action = [=] {
        auto p = *ts;
        p.samples = reps->value_or(10);
        p.seed = *seed;
        p.max_degree = maxdeg->value_or(2);
        p.threads = *threads;
        p.alpha = *alpha;
        p.superlevel = *superlevel;
        if (*noisy && t->count("--noise") == 0) p.noise = experiments::kNoisyFraction;
        finish(experiments::run_torus_sphere(p));
      };
    });
  }

  // --- export-plot ---------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("export-plot", "Sample each level on a grid as CSV");
    auto file = std::make_shared<std::string>();
    auto step = std::make_shared<double>(0.01);
    auto out = std::make_shared<std::string>();
    cmd->add_option("landscape", *file, "Landscape file (JSON)")->required();
    cmd->add_option("--grid-step", *step, "Sampling step in t");
    cmd->add_option("-o,--output", *out, "CSV file (default stdout)");
    cmd->callback([=, &action] {
      action = [=] { emit(io::landscape_to_csv(io::read_landscape(*file), *step), *out); };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (action) action();
    return 0;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
