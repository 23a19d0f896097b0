#ifndef BMSF_ORACLE_HPP
#define BMSF_ORACLE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bmsf/graph_core.hpp"

// Brute-force references. Nothing here calls into the structures under test;
// union-find, sorting and traversal are reimplemented locally.
namespace bmsf::oracle {

// Unexpired edges of a window (or all edges of a static graph).
struct Snapshot {
  std::size_t n = 0;
  std::vector<StreamEdge> edges;
};

enum class KeyMode { Weight, Arrival };

// Ids of the unique minimum spanning forest. Arrival mode orders by
// (-toa, id), so older edges are heavier.
std::vector<EdgeId> kruskal_msf(const Snapshot& g, KeyMode mode = KeyMode::Weight);

struct TreeEdge {
  VertexId u = 0;
  VertexId v = 0;
  WeightKey key;
};

// Maximum key on the u-v path of a forest; nullopt for u == v or
// disconnected endpoints.
std::optional<WeightKey> path_max_naive(std::size_t n, std::span<const TreeEdge> tree, VertexId u,
                                        VertexId v);

bool connected_naive(const Snapshot& g, VertexId u, VertexId v);
// Smallest vertex of each vertex's component.
std::vector<VertexId> component_labels(const Snapshot& g);
std::size_t components_naive(const Snapshot& g);
bool bipartite_naive(const Snapshot& g);
bool has_cycle_naive(const Snapshot& g);

// Every cut (S, V \ S) with vertex 0 in S and S != V, as (bitmask of S,
// number of crossing edges). Throws std::length_error for n > 16.
std::vector<std::pair<std::uint32_t, std::size_t>> cut_enumerate(const Snapshot& g);

// Number of edge-disjoint u-v paths. Throws std::length_error for graphs
// with more than 4096 edges.
std::size_t maxflow_naive(const Snapshot& g, VertexId u, VertexId v);

// Sum of true weights of the minimum spanning forest.
std::int64_t msf_weight_exact(const Snapshot& g);

// Replays an insert/expire stream independently of the structures: every raw
// edge takes the next arrival position, self-loops included, and its edge id
// is that position.
class WindowLog {
 public:
  explicit WindowLog(std::size_t n) : n_(n) {}

  void insert(std::span<const RawEdge> batch);
  void expire(std::uint64_t delta);

  Snapshot snapshot() const;
  // Every stored edge, expired or not.
  Snapshot history() const { return {n_, all_}; }
  std::uint64_t next_toa() const { return next_; }
  std::uint64_t threshold() const { return threshold_; }

 private:
  std::size_t n_;
  std::uint64_t next_ = 0;
  std::uint64_t threshold_ = 0;
  std::vector<StreamEdge> all_;
};

}  // namespace bmsf::oracle

#endif  // BMSF_ORACLE_HPP
