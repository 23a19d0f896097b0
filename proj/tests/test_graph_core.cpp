#include <algorithm>
#include <random>
#include <set>

#include "bmsf/graph_core.hpp"
#include "doctest.h"

using namespace bmsf;

TEST_CASE("normalize_batch drops self-loops and keeps parallel edges") {
  EdgeStamper s(4);
  std::vector<RawEdge> loop{{1, 1, 5}};
  CHECK(s.normalize_batch(loop).empty());
  CHECK(s.next_toa() == 1);
  std::vector<RawEdge> par{{0, 1, 5}, {0, 1, 5}};
  const auto out = s.normalize_batch(par);
  REQUIRE(out.size() == 2);
  CHECK(out[0].id != out[1].id);
  CHECK(out[1].toa == out[0].toa + 1);
}

TEST_CASE("normalize_batch rejects out-of-range endpoints without consuming") {
  EdgeStamper s(4);
  std::vector<RawEdge> bad{{0, 1, 1}, {0, 7, 1}};
  try {
    s.normalize_batch(bad);
    FAIL("expected BatchError");
  } catch (const BatchError& e) {
    CHECK(e.index() == 1);
  }
  CHECK(s.next_toa() == 0);
}

TEST_CASE("output length is input length minus self-loops") {
  std::mt19937_64 rng(1);
  EdgeStamper s(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<RawEdge> b;
    std::size_t loops = 0;
    for (int i = 0; i < 10; ++i) {
      RawEdge e{static_cast<VertexId>(rng() % 5), static_cast<VertexId>(rng() % 5), 1};
      loops += e.u == e.v;
      b.push_back(e);
    }
    CHECK(s.normalize_batch(b).size() == b.size() - loops);
  }
}

TEST_CASE("WeightKey is a strict total order") {
  std::mt19937_64 rng(2);
  std::vector<WeightKey> keys;
  for (EdgeId id = 0; id < 200; ++id) keys.push_back({static_cast<Weight>(rng() % 5), id});
  std::sort(keys.begin(), keys.end());
  for (std::size_t i = 1; i < keys.size(); ++i) CHECK(keys[i - 1] < keys[i]);
  CHECK_FALSE(keys[0] < keys[0]);
}

TEST_CASE("window keys reverse arrival order") {
  for (Toa a = 0; a < 20; ++a)
    for (Toa b = a + 1; b < 20; ++b)
      CHECK(make_window_key(StreamEdge{0, 1, 0, a, a}) > make_window_key(StreamEdge{0, 1, 0, b, b}));
}

TEST_CASE("arrival order validation") {
  std::vector<StreamEdge> ok{{0, 1, 0, 1, 1}, {0, 1, 0, 2, 2}};
  CHECK_NOTHROW(validate_arrival_order(ok));
  std::vector<StreamEdge> same{{0, 1, 0, 3, 3}, {0, 1, 0, 3, 4}};
  CHECK_THROWS_AS(validate_arrival_order(same), std::invalid_argument);
}
