#ifndef BMSF_BATCH_MSF_HPP
#define BMSF_BATCH_MSF_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "bmsf/graph_core.hpp"
#include "bmsf/path_compress.hpp"
#include "bmsf/rc_forest.hpp"

namespace bmsf {

struct InsertResult {
  std::vector<EdgeId> added;    // batch edges now in the MSF, sorted
  std::vector<EdgeId> evicted;  // former MSF edges removed, sorted
  std::size_t cpt_edges = 0;    // size of the compressed path forest used
};

// Unique minimum spanning forest of a small graph under WeightKey order.
// Vertex ids may be sparse. Self-loops are never selected.
std::vector<KeyedEdge> msf_small(std::span<const KeyedEdge> edges);

// Exact minimum spanning forest under batch insertions. Each batch is
// resolved on the compressed path forest of its endpoints, so the work is
// local to the batch and the tree paths it touches.
class MSForest {
 public:
  explicit MSForest(std::size_t n, std::uint64_t seed = 0) : rc_(n, seed) {}

  // Throws BatchError (nothing applied) for endpoints out of range or edge ids
  // that are already in the forest or repeated in the batch.
  InsertResult batch_insert(std::span<const KeyedEdge> batch);
  InsertResult batch_insert(std::span<const StreamEdge> batch);

  // Removes MSF edges. The caller guarantees that no non-forest edge could
  // replace them. Throws std::invalid_argument for ids not in the forest.
  void batch_delete(std::span<const EdgeId> edges);

  std::optional<WeightKey> heaviest_on_path(VertexId u, VertexId v) const {
    return rc_.path_max(u, v);
  }
  bool connected(VertexId u, VertexId v) const { return rc_.connected(u, v); }
  std::size_t components() const { return rc_.num_components(); }
  std::size_t msf_edge_count() const { return rc_.num_edges(); }
  std::size_t num_vertices() const { return rc_.num_vertices(); }
  bool contains(EdgeId id) const { return rc_.contains_edge(id); }
  // Sorted by edge id.
  std::vector<KeyedEdge> edges() const;
  std::vector<EdgeId> edge_ids() const;

  const RCForest& forest() const { return rc_; }

 private:
  RCForest rc_;
};

}  // namespace bmsf

#endif  // BMSF_BATCH_MSF_HPP
