#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "landscape/diagram.hpp"
#include "landscape/error.hpp"
#include "landscape/ph/complex.hpp"
#include "landscape/ph/reduction.hpp"
#include "oracles.hpp"

namespace {

using namespace landscape;
using namespace landscape::ph;

using Pairs = std::vector<std::pair<double, double>>;

Pairs sorted_pairs(const PersistenceDiagram& d) {
  Pairs out;
  for (const auto& p : d.points) out.emplace_back(p.birth, p.death);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PersistenceDiagram> ph(const FilteredComplex& c, int max_degree, bool reduced) {
  PersistenceOptions o;
  o.max_degree = max_degree;
  o.reduced = reduced;
  return persistent_homology(c, o);
}

DistanceMatrix points(std::vector<std::vector<double>> p) { return DistanceMatrix::euclidean(p); }

std::vector<std::vector<double>> random_cloud(std::mt19937_64& gen, std::size_t n, std::size_t dim) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> p(n, std::vector<double>(dim));
  for (auto& x : p)
    for (auto& c : x) c = u(gen);
  return p;
}

TEST(VietorisRips, Examples) {
  const double h = std::sqrt(3.0) / 2.0;
  const auto tri = ph(vietoris_rips(points({{0, 0}, {1, 0}, {0.5, h}}), 2, 10.0), 2, true);
  ASSERT_EQ(tri[0].size(), 2u);
  for (const auto& p : tri[0].points) {
    EXPECT_EQ(p.birth, 0.0);
    EXPECT_NEAR(p.death, 1.0, 1e-15);
  }
  EXPECT_TRUE(tri[1].points.empty());

  const auto sq = ph(vietoris_rips(points({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 2, 10.0), 2, true);
  ASSERT_EQ(sq[1].size(), 1u);
  EXPECT_DOUBLE_EQ(sq[1].points[0].birth, 1.0);
  EXPECT_DOUBLE_EQ(sq[1].points[0].death, std::sqrt(2.0));
  EXPECT_TRUE(sq[2].points.empty());

  const auto two = ph(vietoris_rips(points({{0.0}, {2.5}}), 1, 10.0), 1, true);
  EXPECT_EQ(sorted_pairs(two[0]), (Pairs{{0.0, 2.5}}));
}

TEST(VietorisRips, GeneratesOneDimensionAboveMaxDegree) {
  const auto c = vietoris_rips(points({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 1, 10.0);
  EXPECT_EQ(c.max_dimension(), 2);
  EXPECT_EQ(c.count(2), 4u);
  EXPECT_THROW(vietoris_rips(points({{0.0}}), -1, 1.0), ContractError);
  EXPECT_THROW(vietoris_rips(points({{0.0}}), 1, 0.0), ContractError);
}

TEST(VietorisRips, EnlargingRadiusKeepsResolvedPairs) {
  std::mt19937_64 gen(31);
  for (int c = 0; c < 30; ++c) {
    const auto d = points(random_cloud(gen, 9, 2));
    const double small = 0.3, large = 0.6;
    const auto a = ph(vietoris_rips(d, 1, small), 1, false);
    const auto b = ph(vietoris_rips(d, 1, large), 1, false);
    for (int q = 0; q <= 1; ++q) {
      auto got = sorted_pairs(b[q]);
      for (const auto& p : sorted_pairs(a[q])) {
        if (p.second >= small) continue;
        const auto it = std::find(got.begin(), got.end(), p);
        ASSERT_NE(it, got.end()) << "degree " << q << " lost (" << p.first << ", " << p.second << ")";
        got.erase(it);
      }
    }
  }
}

TEST(CliqueComplex, Examples) {
  const FilteredGraph tri(3, {{0, 1, 0.1}, {1, 2, 0.2}, {0, 2, 0.3}});
  const auto c = clique_complex(tri, 1, 1.0);
  ASSERT_EQ(c.count(2), 1u);
  for (const auto& s : c.simplices) {
    if (s.dimension() == 2) EXPECT_DOUBLE_EQ(s.value, 0.3);
  }
  const FilteredGraph path(4, {{0, 1, 0.1}, {1, 2, 0.2}, {2, 3, 0.3}});
  EXPECT_EQ(clique_complex(path, 3, 1.0).max_dimension(), 1);
  // Truncation drops edges above the cap and the cliques that use them.
  const auto cut = clique_complex(tri, 1, 0.25);
  EXPECT_EQ(cut.count(1), 2u);
  EXPECT_EQ(cut.count(2), 0u);
  EXPECT_THROW(FilteredGraph(2, {{0, 0, 1.0}}), ContractError);
  EXPECT_THROW(FilteredGraph(2, {{0, 1, INFINITY}}), ContractError);
}

TEST(CliqueComplex, DegreeZeroDeathsAreMinimumSpanningTree) {
  std::mt19937_64 gen(32);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  for (int c = 0; c < 200; ++c) {
    const std::size_t n = 2 + c % 9;
    std::vector<WeightedEdge> edges;
    std::vector<oracle::Edge> oe;
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = i + 1; j < n; ++j) {
        double v = w(gen);
        if (c % 2) v = std::round(v * 4.0) / 4.0;  // ties
        edges.push_back({i, j, v});
        oe.push_back({i, j, v});
      }
    }
    const auto d = ph(clique_complex(FilteredGraph(n, edges), 1, 2.0), 0, true);
    std::vector<double> deaths, births;
    for (const auto& p : d[0].points) deaths.push_back(p.death), births.push_back(p.birth);
    auto mst = oracle::mst_weights(n, oe);
    // Zero-length merges are dropped from the diagram.
    mst.erase(std::remove(mst.begin(), mst.end(), 0.0), mst.end());
    std::sort(deaths.begin(), deaths.end());
    std::sort(mst.begin(), mst.end());
    EXPECT_EQ(deaths, mst);
    for (double b : births) EXPECT_EQ(b, 0.0);
  }
}

TEST(Freudenthal, Counts) {
  const auto square = freudenthal_grid({{2, 2}});
  std::map<int, int> by_dim;
  for (const auto& s : square) ++by_dim[s.dimension()];
  EXPECT_EQ(by_dim[0], 4);
  EXPECT_EQ(by_dim[1], 5);
  EXPECT_EQ(by_dim[2], 2);

  by_dim.clear();
  for (const auto& s : freudenthal_grid({{2, 2, 2}})) ++by_dim[s.dimension()];
  EXPECT_EQ(by_dim[3], 6);
  EXPECT_EQ(by_dim[0] - by_dim[1] + by_dim[2] - by_dim[3], 1);
  EXPECT_THROW(freudenthal_grid({{4}}), ContractError);
}

TEST(Freudenthal, GridsAreContractible) {
  for (const auto& dims : std::vector<std::vector<std::size_t>>{{3, 5}, {1, 4}, {6, 2}, {3, 3, 3}, {2, 4, 3}}) {
    std::map<int, long> by_dim;
    const auto simplices = freudenthal_grid({dims});
    for (const auto& s : simplices) ++by_dim[s.dimension()];
    EXPECT_EQ(by_dim[0] - by_dim[1] + by_dim[2] - by_dim[3], 1);
    // Homology of the constant filtration: one component, nothing else.
    const std::vector<double> zero(GridShape{dims}.num_vertices(), 0.0);
    const auto d = ph(lower_star(zero, simplices), 2, false);
    EXPECT_EQ(d[0].size(), 1u);
    EXPECT_TRUE(d[1].points.empty());
    EXPECT_TRUE(d[2].points.empty());
  }
}

TEST(LowerStar, Examples) {
  const std::vector<VertexSet> edge{{0}, {1}, {0, 1}};
  const std::vector<double> flat{2.0, 2.0};
  for (const auto& s : lower_star(flat, edge).simplices) EXPECT_EQ(s.value, 2.0);
  const std::vector<double> vals{1.0, 3.0};
  EXPECT_EQ(lower_star(vals, edge).simplices[2].value, 3.0);
  EXPECT_EQ(lower_star(vals, edge, true).simplices[2].value, -1.0);

  const std::vector<VertexSet> path{{0}, {1}, {2}, {0, 1}, {1, 2}};
  const std::vector<double> well{0.0, 1.0, 0.0};
  EXPECT_EQ(sorted_pairs(ph(lower_star(well, path), 0, true)[0]), (Pairs{{0.0, 1.0}}));
  const std::vector<double> bad{0.0, NAN, 0.0};
  EXPECT_THROW(lower_star(bad, path), ContractError);
}

TEST(PersistentHomology, Examples) {
  FilteredComplex c;
  c.simplices = {{{0}, 0.0}, {{1}, 0.0}, {{0, 1}, 1.0}};
  EXPECT_EQ(sorted_pairs(ph(c, 0, true)[0]), (Pairs{{0.0, 1.0}}));
  EXPECT_EQ(sorted_pairs(ph(c, 0, false)[0]), (Pairs{{0.0, 1.0}, {0.0, INFINITY}}));

  FilteredComplex cycle;
  cycle.simplices = {{{0}, 0.0}, {{1}, 0.0}, {{2}, 0.0}, {{0, 1}, 1.0}, {{1, 2}, 1.0}, {{0, 2}, 1.0}};
  EXPECT_EQ(sorted_pairs(ph(cycle, 1, false)[1]), (Pairs{{1.0, INFINITY}}));
}

TEST(PersistentHomology, RejectsBrokenFiltrations) {
  FilteredComplex missing;
  missing.simplices = {{{0}, 0.0}, {{0, 1}, 1.0}};
  try {
    ph(missing, 1, false);
    FAIL();
  } catch (const ContractError& e) {
    EXPECT_NE(std::string(e.what()).find("{0,1}"), std::string::npos);
  }
  FilteredComplex late;
  late.simplices = {{{0}, 0.0}, {{1}, 2.0}, {{0, 1}, 1.0}};
  EXPECT_THROW(ph(late, 1, false), ContractError);
  FilteredComplex dup;
  dup.simplices = {{{0}, 0.0}, {{0}, 0.0}};
  EXPECT_THROW(ph(dup, 0, false), ContractError);
}

// Betti numbers of the subcomplex with values <= t, by F2 ranks of boundary matrices.
std::vector<std::size_t> brute_force_betti(const FilteredComplex& c, double t, int max_degree) {
  std::vector<std::vector<VertexSet>> cells(static_cast<std::size_t>(max_degree) + 2);
  for (const auto& s : c.simplices) {
    if (s.value <= t && s.dimension() <= max_degree + 1) cells[s.dimension()].push_back(s.vertices);
  }
  auto boundary_rank = [&](int q) -> std::size_t {  // rank of d_q : C_q -> C_{q-1}
    if (q == 0 || cells[q].empty() || cells[q - 1].empty()) return 0;
    const auto& faces = cells[q - 1];
    const std::size_t words = (faces.size() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> rows;
    for (const auto& s : cells[q]) {
      std::vector<std::uint64_t> row(words, 0);
      for (std::size_t i = 0; i < s.size(); ++i) {
        const auto idx = std::find(faces.begin(), faces.end(), s.facet(i)) - faces.begin();
        row[idx / 64] ^= std::uint64_t{1} << (idx % 64);
      }
      rows.push_back(std::move(row));
    }
    return oracle::f2_rank(std::move(rows));
  };
  std::vector<std::size_t> betti;
  for (int q = 0; q <= max_degree; ++q) {
    betti.push_back(cells[q].size() - boundary_rank(q) - boundary_rank(q + 1));
  }
  return betti;
}

TEST(PersistentHomology, RanksMatchBruteForceBetti) {
  std::mt19937_64 gen(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int c = 0; c < 60; ++c) {
    const std::size_t n = 4 + c % 5;
    FilteredComplex complex;
    if (c % 2 == 0) {
      complex = vietoris_rips(points(random_cloud(gen, n, 2 + c % 2)), 2, 2.0);
    } else {
      // Lower-star filtration of a random vertex function on a small grid.
      const GridShape shape{{3, 2 + static_cast<std::size_t>(c % 3)}};
      std::vector<double> v(shape.num_vertices());
      for (auto& x : v) x = u(gen);
      complex = lower_star(v, freudenthal_grid(shape));
    }
    const auto d = ph(complex, 2, false);
    std::vector<double> values;
    for (const auto& s : complex.simplices) values.push_back(s.value);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t i = 0; i < values.size(); ++i) {
      // Generic levels: midpoints between consecutive values and past the last.
      const double t = i + 1 < values.size() ? 0.5 * (values[i] + values[i + 1]) : values[i] + 1.0;
      const auto betti = brute_force_betti(complex, t, 2);
      for (int q = 0; q <= 2; ++q) {
        ASSERT_EQ(rank(d[q], t, t), betti[q]) << "case " << c << " degree " << q << " t " << t;
      }
    }
  }
}

TEST(PersistentHomology, TieOrderDoesNotMatter) {
  std::mt19937_64 gen(34);
  std::uniform_int_distribution<int> level(0, 3);
  for (int c = 0; c < 40; ++c) {
    const GridShape shape{{4, 3}};
    std::vector<double> v(shape.num_vertices());
    for (auto& x : v) x = level(gen);  // heavy ties
    auto complex = lower_star(v, freudenthal_grid(shape));
    const auto reference = ph(complex, 1, false);
    for (int r = 0; r < 5; ++r) {
      std::shuffle(complex.simplices.begin(), complex.simplices.end(), gen);
      // Any order by (value, dimension) respects faces.
      std::stable_sort(complex.simplices.begin(), complex.simplices.end(),
                       [](const FilteredSimplex& a, const FilteredSimplex& b) {
                         return a.value != b.value ? a.value < b.value : a.dimension() < b.dimension();
                       });
      PersistenceOptions o;
      o.max_degree = 1;
      o.sort = false;
      const auto got = persistent_homology(complex, o);
      for (int q = 0; q <= 1; ++q) EXPECT_EQ(sorted_pairs(got[q]), sorted_pairs(reference[q]));
    }
  }
}

TEST(PersistentHomology, BirthsNeverExceedDeaths) {
  std::mt19937_64 gen(35);
  for (int c = 0; c < 20; ++c) {
    const auto d = ph(vietoris_rips(points(random_cloud(gen, 12, 3)), 2, 0.8), 2, true);
    for (const auto& diagram : d)
      for (const auto& p : diagram.points) EXPECT_LE(p.birth, p.death);
  }
}

}  // namespace
