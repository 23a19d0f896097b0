#include <algorithm>
#include <random>

#include "bmsf/oracle.hpp"
#include "doctest.h"

using namespace bmsf;
using oracle::Snapshot;

namespace {

StreamEdge se(VertexId u, VertexId v, Weight w, EdgeId id) { return {u, v, w, id, id}; }

}  // namespace

TEST_CASE("kruskal on a triangle drops the heaviest edge") {
  Snapshot g{3, {se(0, 1, 1, 0), se(1, 2, 2, 1), se(2, 0, 3, 2)}};
  CHECK(oracle::kruskal_msf(g) == std::vector<EdgeId>{0, 1});
  CHECK(oracle::kruskal_msf(g, oracle::KeyMode::Arrival) == std::vector<EdgeId>{1, 2});
}

TEST_CASE("kruskal does not depend on input order") {
  std::mt19937_64 rng(3);
  Snapshot g{10, {}};
  for (EdgeId i = 0; i < 40; ++i) g.edges.push_back(se(rng() % 10, rng() % 10, rng() % 4, i));
  const auto base = oracle::kruskal_msf(g);
  for (int t = 0; t < 10; ++t) {
    std::shuffle(g.edges.begin(), g.edges.end(), rng);
    CHECK(oracle::kruskal_msf(g) == base);
  }
}

TEST_CASE("maxflow counts parallel paths") {
  for (std::size_t k = 1; k <= 4; ++k) {
    // k disjoint two-edge paths from 0 to 1 through vertices 2..k+1.
    Snapshot g{k + 2, {}};
    for (std::size_t i = 0; i < k; ++i) {
      g.edges.push_back(se(0, static_cast<VertexId>(2 + i), 1, 2 * i));
      g.edges.push_back(se(static_cast<VertexId>(2 + i), 1, 1, 2 * i + 1));
    }
    CHECK(oracle::maxflow_naive(g, 0, 1) == k);
  }
}

TEST_CASE("every proper cut of K3 has value 2") {
  Snapshot g{3, {se(0, 1, 1, 0), se(1, 2, 1, 1), se(2, 0, 1, 2)}};
  const auto cuts = oracle::cut_enumerate(g);
  CHECK(cuts.size() == 3);
  for (const auto& [mask, value] : cuts) CHECK(value == 2);
  Snapshot big{17, {}};
  CHECK_THROWS_AS(oracle::cut_enumerate(big), std::length_error);
}

TEST_CASE("simple predicates") {
  Snapshot path{4, {se(0, 1, 2, 0), se(1, 2, 5, 1)}};
  CHECK(oracle::connected_naive(path, 0, 2));
  CHECK_FALSE(oracle::connected_naive(path, 0, 3));
  CHECK(oracle::components_naive(path) == 2);
  CHECK(oracle::bipartite_naive(path));
  CHECK_FALSE(oracle::has_cycle_naive(path));
  CHECK(oracle::msf_weight_exact(path) == 7);
  Snapshot tri{3, {se(0, 1, 1, 0), se(1, 2, 1, 1), se(2, 0, 1, 2)}};
  CHECK_FALSE(oracle::bipartite_naive(tri));
  CHECK(oracle::has_cycle_naive(tri));
}

TEST_CASE("path max walk") {
  std::vector<oracle::TreeEdge> t{{0, 1, {3, 0}}, {1, 2, {9, 1}}};
  CHECK(oracle::path_max_naive(4, t, 0, 2) == WeightKey{9, 1});
  CHECK(oracle::path_max_naive(4, t, 0, 0) == std::nullopt);
  CHECK(oracle::path_max_naive(4, t, 0, 3) == std::nullopt);
}

TEST_CASE("window log replays arrivals") {
  oracle::WindowLog log(3);
  std::vector<RawEdge> b{{0, 0, 1}, {0, 1, 1}, {1, 2, 1}};
  log.insert(b);
  CHECK(log.snapshot().edges.size() == 2);
  log.expire(2);
  const auto s = log.snapshot();
  REQUIRE(s.edges.size() == 1);
  CHECK(s.edges[0].toa == 2);
  log.expire(10);
  CHECK(log.threshold() == 3);
}

TEST_CASE("component labels") {
  Snapshot g{5, {se(3, 1, 1, 0), se(4, 2, 1, 1)}};
  CHECK(oracle::component_labels(g) == std::vector<VertexId>{0, 1, 2, 1, 2});
}
