#ifndef BMSF_STREAM_GEN_HPP
#define BMSF_STREAM_GEN_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "bmsf/graph_core.hpp"

namespace bmsf::test {

struct StreamOp {
  bool is_expire = false;
  std::uint64_t delta = 0;
  std::vector<RawEdge> batch;
};

// Random interleaving of batch inserts and expirations. Expirations keep the
// window around `window` edges; self-loops appear occasionally.
inline std::vector<StreamOp> random_stream(std::size_t n, std::size_t ops, std::uint64_t seed,
                                           std::size_t max_batch = 8, Weight min_w = 1,
                                           Weight max_w = 64, std::size_t window = 64) {
  std::mt19937_64 rng(seed);
  std::vector<StreamOp> out;
  std::uint64_t inserted = 0, expired = 0;
  for (std::size_t i = 0; i < ops; ++i) {
    StreamOp op;
    const std::uint64_t live = inserted - expired;
    if (live > 0 && (rng() % 3 == 0 || live > window)) {
      op.is_expire = true;
      op.delta = 1 + rng() % std::max<std::uint64_t>(1, live / 2 + 1);
      if (rng() % 20 == 0) op.delta = live + 5;
      expired = std::min(inserted, expired + op.delta);
    } else {
      const std::size_t size = 1 + rng() % max_batch;
      for (std::size_t j = 0; j < size; ++j) {
        VertexId u = rng() % n, v = rng() % n;
        if (rng() % 25 == 0) v = u;
        op.batch.push_back({u, v, std::uniform_int_distribution<Weight>(min_w, max_w)(rng)});
      }
      inserted += size;
    }
    out.push_back(std::move(op));
  }
  return out;
}

}  // namespace bmsf::test

#endif  // BMSF_STREAM_GEN_HPP
