#ifndef BMSF_GRAPH_CORE_HPP
#define BMSF_GRAPH_CORE_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bmsf {

// Vertices are dense indices in [0, n); n is fixed when a structure is built.
using VertexId = std::uint32_t;
// Unique per inserted edge, never reused, monotone in arrival order.
using EdgeId = std::uint64_t;
using Weight = std::int64_t;
// Arrival position of an edge in the stream.
using Toa = std::uint64_t;

// Total order used by every MSF computation. Distinct edges never compare
// equal, so the minimum spanning forest of any edge set is unique.
struct WeightKey {
  Weight weight = 0;
  EdgeId edge = 0;

  friend constexpr auto operator<=>(const WeightKey&, const WeightKey&) = default;
};

struct RawEdge {
  VertexId u = 0;
  VertexId v = 0;
  Weight w = 0;
};

struct StreamEdge {
  VertexId u = 0;
  VertexId v = 0;
  Weight w = 0;
  Toa toa = 0;
  EdgeId id = 0;
};

// An edge as the MSF structures see it: endpoints plus its ordering key.
// key.edge is the edge identity.
struct KeyedEdge {
  VertexId u = 0;
  VertexId v = 0;
  WeightKey key;

  EdgeId id() const { return key.edge; }
};

// Raised when a batch contains an invalid edge; nothing from the batch is
// applied.
class BatchError : public std::invalid_argument {
 public:
  BatchError(std::size_t index, const std::string& what)
      : std::invalid_argument(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

inline WeightKey weight_key(const StreamEdge& e) { return {e.w, e.id}; }

// Older edges are heavier: weight = -toa.
inline WeightKey make_window_key(const StreamEdge& e) {
  return {-static_cast<Weight>(e.toa), e.id};
}

inline KeyedEdge keyed_by_weight(const StreamEdge& e) { return {e.u, e.v, weight_key(e)}; }
inline KeyedEdge keyed_by_arrival(const StreamEdge& e) { return {e.u, e.v, make_window_key(e)}; }

// Throws std::invalid_argument unless toa is strictly increasing along `edges`.
void validate_arrival_order(std::span<const StreamEdge> edges);

// Hands out arrival positions and edge ids. Every raw edge consumes one
// arrival slot, including self-loops that normalize_batch drops, so expiry
// counts line up with the user-visible stream.
class EdgeStamper {
 public:
  explicit EdgeStamper(std::size_t n) : n_(n) {}

  // Drops self-loops, keeps parallel edges. Throws BatchError (and consumes
  // nothing) if an endpoint is out of range.
  std::vector<StreamEdge> normalize_batch(std::span<const RawEdge> edges);

  // Consumes `count` arrival slots without producing edges.
  void skip(std::uint64_t count) { next_toa_ += count; }

  std::size_t num_vertices() const { return n_; }
  Toa next_toa() const { return next_toa_; }

 private:
  std::size_t n_;
  Toa next_toa_ = 0;
};

// Counter-based hash used wherever a structure needs reproducible coins.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(seed ^ mix64(a)) + b);
}

}  // namespace bmsf

#endif  // BMSF_GRAPH_CORE_HPP
