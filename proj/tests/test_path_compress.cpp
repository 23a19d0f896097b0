#include <random>
#include <set>

#include "cpt_check.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace bmsf;

namespace {

auto none_marked = [](SiteId) { return false; };

CompressedPathTree cpt_of(std::size_t n, const std::vector<ForestEdge>& es,
                          std::vector<VertexId> marked, std::uint64_t seed = 1) {
  RCForest f = RCForest::build(es, n, seed);
  return compressed_path_trees(f, marked);
}

}  // namespace

TEST_CASE("splice_out keeps the heavier edge") {
  WorkingGraph g;
  g.add_edge(0, 1, WeightKey{3, 10});
  g.add_edge(1, 2, WeightKey{9, 11});
  CHECK(g.splice_out(1, none_marked));
  CHECK_FALSE(g.contains(1));
  REQUIRE(g.degree(0) == 1);
  CHECK(g.arcs(0)[0].to == 2);
  CHECK(g.arcs(0)[0].key == WeightKey{9, 11});
}

TEST_CASE("splice_out leaves marked and degree-3 vertices alone") {
  WorkingGraph g;
  g.add_edge(0, 1, WeightKey{3, 10});
  g.add_edge(1, 2, WeightKey{9, 11});
  CHECK_FALSE(g.splice_out(1, [](SiteId s) { return s == 1; }));
  g.add_edge(1, 3, WeightKey{1, 12});
  CHECK_FALSE(g.splice_out(1, none_marked));
  CHECK(g.degree(1) == 3);
}

TEST_CASE("prune removes an unmarked leaf and splices its neighbour") {
  WorkingGraph g;
  g.add_edge(0, 1, WeightKey{1, 0});
  g.add_edge(1, 2, WeightKey{2, 1});
  g.add_edge(1, 3, WeightKey{5, 2});
  auto marked = [](SiteId s) { return s == 2 || s == 3; };
  g.prune(0, marked);
  CHECK_FALSE(g.contains(0));
  CHECK_FALSE(g.contains(1));
  REQUIRE(g.degree(2) == 1);
  CHECK(g.arcs(2)[0].to == 3);
  CHECK(g.arcs(2)[0].key == WeightKey{5, 2});
}

TEST_CASE("prune leaves a marked leaf and splices degree two") {
  WorkingGraph g;
  g.add_edge(0, 1, WeightKey{1, 0});
  g.prune(0, [](SiteId s) { return s == 0; });
  CHECK(g.contains(0));
  g.add_edge(1, 2, WeightKey{4, 1});
  g.prune(1, none_marked);
  CHECK_FALSE(g.contains(1));
  CHECK(g.degree(0) == 1);
}

TEST_CASE("expand_cluster base cases") {
  std::mt19937_64 rng(4);
  const std::size_t n = 40;
  RCForest f = RCForest::build(test::random_tree(n, rng), n, 4);
  std::vector<VertexId> marked{0};
  f.mark(marked);
  bool saw_binary = false, saw_unary = false;
  for (SiteId s = 0; s < f.site_capacity(); ++s) {
    if (!f.site_alive(s)) continue;
    const ClusterRef c = ClusterRef::composite(s);
    if (f.is_marked(c)) continue;
    WorkingGraph g;
    expand_cluster(f, c, g);
    const auto b = f.boundary(c);
    if (f.kind(c) == ClusterKind::Binary) {
      saw_binary = true;
      REQUIRE(g.vertices() == std::vector<SiteId>{std::min(b[0], b[1]), std::max(b[0], b[1])});
      REQUIRE(g.degree(b[0]) == 1);
      CHECK(g.arcs(b[0])[0].key == f.weight(c));
    } else if (f.kind(c) == ClusterKind::Unary) {
      saw_unary = true;
      CHECK(g.vertices() == std::vector<SiteId>{b[0]});
      CHECK(g.degree(b[0]) == 0);
    }
  }
  CHECK(saw_binary);
  CHECK(saw_unary);
  WorkingGraph g;
  expand_cluster(f, f.leaf_of(0), g);
  CHECK(g.vertices() == std::vector<SiteId>{0});
  f.unmark();
}

TEST_CASE("path a-b-c-d-e") {
  std::vector<ForestEdge> es{{0, 1, {3, 0}}, {1, 2, {9, 1}}, {2, 3, {2, 2}}, {3, 4, {5, 3}}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto two = cpt_of(5, es, {0, 4}, seed);
    CHECK(two.vertices == std::vector<VertexId>{0, 4});
    REQUIRE(two.edges.size() == 1);
    CHECK(two.edges[0].key == WeightKey{9, 1});
    CHECK(two.edges[0].origin() == 1);

    auto three = cpt_of(5, es, {0, 2, 4}, seed);
    REQUIRE(three.edges.size() == 2);
    CHECK(three.edges[0].a == 0);
    CHECK(three.edges[0].b == 2);
    CHECK(three.edges[0].key == WeightKey{9, 1});
    CHECK(three.edges[1].a == 2);
    CHECK(three.edges[1].b == 4);
    CHECK(three.edges[1].key == WeightKey{5, 3});
  }
}

TEST_CASE("star center survives as a Steiner vertex") {
  const VertexId c = 0, x = 1, y = 2, z = 3;
  std::vector<ForestEdge> es{{x, c, {1, 0}}, {y, c, {2, 1}}, {z, c, {3, 2}}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto cpt = cpt_of(4, es, {x, y, z}, seed);
    CHECK(cpt.vertices == std::vector<VertexId>{0, 1, 2, 3});
    REQUIRE(cpt.edges.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(cpt.edges[i].a == c);
      CHECK(cpt.edges[i].key.weight == static_cast<Weight>(i + 1));
    }
  }
}

TEST_CASE("unmarked components contribute nothing") {
  std::vector<ForestEdge> es{{0, 1, {1, 0}}, {2, 3, {1, 1}}};
  auto cpt = cpt_of(4, es, {0, 1});
  CHECK(cpt.vertices == std::vector<VertexId>{0, 1});
  CHECK(cpt.edges.size() == 1);
}

TEST_CASE("random forests: path max, minimality, size and laziness") {
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    std::mt19937_64 rng(trial);
    const std::size_t n = 2 + rng() % 99;
    auto es = test::random_tree(n, rng);
    // Drop some edges to get a forest, and sometimes make a hub.
    std::vector<ForestEdge> kept;
    for (auto& e : es)
      if (rng() % 8 != 0) kept.push_back(e);
    RCForest f = RCForest::build(kept, n, trial);
    const std::size_t l = 1 + rng() % std::min<std::size_t>(10, n);
    std::set<VertexId> ms;
    while (ms.size() < l) ms.insert(static_cast<VertexId>(rng() % n));
    std::vector<VertexId> marked(ms.begin(), ms.end());
    CptStats stats;
    const auto cpt = compressed_path_trees(f, marked, &stats);
    const auto err = test::check_cpt(n, test::as_tree(kept), marked, cpt);
    if (!err.empty()) FAIL(err);
    CHECK(stats.visited <= stats.marked_with_children);
    for (SiteId s = 0; s < f.site_capacity(); ++s)
      if (f.site_alive(s)) REQUIRE_FALSE(f.is_marked(ClusterRef::composite(s)));
  }
}

TEST_CASE("high-degree Steiner vertices are mapped back to their owner") {
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    std::mt19937_64 rng(trial);
    const std::size_t n = 60;
    std::vector<ForestEdge> es;
    // Two hubs joined by an edge, every other vertex hangs off one of them.
    es.push_back({0, 1, {500, 0}});
    for (VertexId v = 2; v < n; ++v)
      es.push_back({static_cast<VertexId>(rng() % 2), v, {static_cast<Weight>(rng() % 100), v}});
    RCForest f = RCForest::build(es, n, trial);
    std::set<VertexId> ms;
    while (ms.size() < 8) ms.insert(2 + static_cast<VertexId>(rng() % (n - 2)));
    std::vector<VertexId> marked(ms.begin(), ms.end());
    const auto cpt = compressed_path_trees(f, marked);
    const auto err = test::check_cpt(n, test::as_tree(es), marked, cpt);
    if (!err.empty()) FAIL(err);
  }
}
