#include <algorithm>
#include <random>
#include <set>

#include "bmsf/batch_msf.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace bmsf;

namespace {

KeyedEdge ke(VertexId u, VertexId v, Weight w, EdgeId id) { return {u, v, {w, id}}; }

// Lexicographically smallest sorted key sequence over all maximal forests.
std::vector<EdgeId> brute_msf(std::size_t n, const std::vector<KeyedEdge>& es) {
  const std::size_t m = es.size();
  std::vector<WeightKey> best_keys;
  std::vector<EdgeId> best;
  bool found = false;
  oracle::Snapshot all{n, {}};
  for (const auto& e : es) all.edges.push_back({e.u, e.v, 0, 0, 0});
  const std::size_t rank = n - oracle::components_naive(all);
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != rank) continue;
    oracle::Snapshot s{n, {}};
    std::vector<WeightKey> keys;
    std::vector<EdgeId> ids;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1u) {
        s.edges.push_back({es[i].u, es[i].v, 0, 0, 0});
        keys.push_back(es[i].key);
        ids.push_back(es[i].id());
      }
    if (oracle::has_cycle_naive(s)) continue;
    std::sort(keys.begin(), keys.end(), std::greater<>());
    if (!found || keys < best_keys) {
      found = true;
      best_keys = keys;
      best = ids;
    }
  }
  std::sort(best.begin(), best.end());
  return best;
}

std::vector<EdgeId> ids_of(const std::vector<KeyedEdge>& es) {
  std::vector<EdgeId> out;
  for (const auto& e : es) out.push_back(e.id());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("a lighter edge closing a cycle evicts the heaviest path edge") {
  MSForest m(3, 1);
  std::vector<KeyedEdge> init{ke(0, 1, 5, 0), ke(1, 2, 8, 1)};
  m.batch_insert(init);
  std::vector<KeyedEdge> b{ke(0, 2, 6, 2)};
  const auto r = m.batch_insert(b);
  CHECK(r.added == std::vector<EdgeId>{2});
  CHECK(r.evicted == std::vector<EdgeId>{1});
  CHECK(m.edge_ids() == std::vector<EdgeId>{0, 2});
}

TEST_CASE("an edge between components is always added") {
  MSForest m(4, 1);
  std::vector<KeyedEdge> init{ke(0, 1, 5, 0)};
  m.batch_insert(init);
  std::vector<KeyedEdge> b{ke(1, 3, 100, 1)};
  const auto r = m.batch_insert(b);
  CHECK(r.added == std::vector<EdgeId>{1});
  CHECK(r.evicted.empty());
}

TEST_CASE("an edge heavier than the path max is rejected") {
  MSForest m(3, 1);
  std::vector<KeyedEdge> init{ke(0, 1, 5, 0), ke(1, 2, 8, 1)};
  m.batch_insert(init);
  std::vector<KeyedEdge> b{ke(0, 2, 9, 2)};
  const auto r = m.batch_insert(b);
  CHECK(r.added.empty());
  CHECK(r.evicted.empty());
  // Re-inserting an evicted edge under a fresh id is rejected again.
  std::vector<KeyedEdge> lighter{ke(0, 2, 6, 3)};
  CHECK(m.batch_insert(lighter).evicted == std::vector<EdgeId>{1});
  std::vector<KeyedEdge> again{ke(1, 2, 8, 4)};
  CHECK(m.batch_insert(again).added.empty());
}

TEST_CASE("msf_small") {
  std::vector<KeyedEdge> path{ke(10, 20, 3, 0), ke(20, 30, 1, 1)};
  CHECK(ids_of(msf_small(path)) == std::vector<EdgeId>{0, 1});
  std::vector<KeyedEdge> tri{ke(0, 1, 1, 0), ke(1, 2, 2, 1), ke(2, 0, 3, 2)};
  CHECK(ids_of(msf_small(tri)) == std::vector<EdgeId>{0, 1});
  std::vector<KeyedEdge> ties{ke(0, 1, 1, 5), ke(1, 2, 1, 4), ke(2, 0, 1, 3)};
  CHECK(ids_of(msf_small(ties)) == std::vector<EdgeId>{3, 4});
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = 2 + rng() % 6;
    const std::size_t m = rng() % 13;
    std::vector<KeyedEdge> es;
    for (std::size_t i = 0; i < m; ++i)
      es.push_back(ke(rng() % n, rng() % n, static_cast<Weight>(rng() % 4), i));
    REQUIRE(ids_of(msf_small(es)) == brute_msf(n, es));
  }
}

TEST_CASE("components and edge counts") {
  MSForest m(4, 0);
  CHECK(m.components() == 4);
  std::vector<KeyedEdge> tree{ke(0, 1, 1, 0), ke(1, 2, 1, 1), ke(2, 3, 1, 2)};
  m.batch_insert(tree);
  CHECK(m.components() == 1);
  CHECK(m.msf_edge_count() == 3);
}

TEST_CASE("batch_delete") {
  MSForest m(2, 0);
  std::vector<KeyedEdge> e{ke(0, 1, 1, 0)};
  m.batch_insert(e);
  std::vector<EdgeId> none;
  m.batch_delete(none);
  CHECK(m.components() == 1);
  std::vector<EdgeId> del{0};
  m.batch_delete(del);
  CHECK(m.components() == 2);
  CHECK_THROWS_AS(m.batch_delete(del), std::invalid_argument);
}

TEST_CASE("invalid batches are rejected whole") {
  MSForest m(4, 0);
  std::vector<KeyedEdge> bad{ke(0, 1, 1, 0), ke(0, 7, 1, 1)};
  try {
    m.batch_insert(bad);
    FAIL("expected BatchError");
  } catch (const BatchError& e) {
    CHECK(e.index() == 1);
  }
  CHECK(m.msf_edge_count() == 0);
  std::vector<KeyedEdge> dup{ke(0, 1, 1, 0), ke(1, 2, 1, 0)};
  CHECK_THROWS_AS(m.batch_insert(dup), BatchError);
}

TEST_CASE("random streams match Kruskal") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = 2 + rng() % 199;
    MSForest m(n, seed);
    oracle::Snapshot all{n, {}};
    EdgeId next = 0;
    for (int b = 0; b < 40; ++b) {
      const std::size_t size = 1 + rng() % 32;
      std::vector<KeyedEdge> batch;
      for (std::size_t i = 0; i < size; ++i) {
        const VertexId u = rng() % n, v = rng() % n;
        const Weight w = static_cast<Weight>(rng() % 20);
        batch.push_back(ke(u, v, w, next));
        all.edges.push_back({u, v, w, next, next});
        ++next;
      }
      const auto before = m.edge_ids();
      const auto r = m.batch_insert(batch);
      const auto after = m.edge_ids();
      REQUIRE(after == oracle::kruskal_msf(all));
      std::set<EdgeId> bids;
      for (auto& e : batch) bids.insert(e.id());
      for (EdgeId id : r.added) {
        REQUIRE(bids.count(id));
        REQUIRE_FALSE(std::binary_search(r.evicted.begin(), r.evicted.end(), id));
      }
      for (EdgeId id : r.evicted) REQUIRE(std::binary_search(before.begin(), before.end(), id));
      REQUIRE(m.components() == oracle::components_naive(all));
      REQUIRE(r.evicted.size() <= r.cpt_edges);
    }
  }
}
