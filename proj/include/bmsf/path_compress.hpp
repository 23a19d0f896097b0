#ifndef BMSF_PATH_COMPRESS_HPP
#define BMSF_PATH_COMPRESS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "bmsf/graph_core.hpp"
#include "bmsf/rc_forest.hpp"

namespace bmsf {

struct CptEdge {
  VertexId a = 0;
  VertexId b = 0;
  WeightKey key;  // key of the heaviest original edge on the represented path

  EdgeId origin() const { return key.edge; }
};

// Minimal tree over the marked vertices plus Steiner vertices of degree >= 3
// that preserves the heaviest edge between every pair of marked vertices.
struct CompressedPathTree {
  std::vector<VertexId> vertices;  // sorted
  std::vector<CptEdge> edges;      // a < b, sorted by (a, b)
};

// Undirected graph over RC sites used while expanding clusters. Edges with
// no key stand for paths made only of DUMMY edges.
class WorkingGraph {
 public:
  struct Arc {
    SiteId to = kNoSite;
    std::optional<WeightKey> key;
  };

  void add_vertex(SiteId v) { adj_.try_emplace(v); }
  void add_edge(SiteId a, SiteId b, std::optional<WeightKey> key);
  void remove_vertex(SiteId v);
  bool contains(SiteId v) const { return adj_.count(v) != 0; }
  std::size_t degree(SiteId v) const;
  const std::vector<Arc>& arcs(SiteId v) const { return adj_.at(v); }
  std::size_t num_vertices() const { return adj_.size(); }
  std::vector<SiteId> vertices() const;
  void clear() { adj_.clear(); }

  // Replaces the two edges of an unmarked degree-2 vertex by one edge that
  // keeps the heavier key. Returns whether v was removed.
  template <typename Marked>
  bool splice_out(SiteId v, const Marked& marked);

  // Degree 2: splice_out. Unmarked degree 1: drop v and its edge, then
  // splice_out the former neighbour.
  template <typename Marked>
  void prune(SiteId v, const Marked& marked);

 private:
  void erase_arc(SiteId from, SiteId to);

  std::unordered_map<SiteId, std::vector<Arc>> adj_;
};

template <typename Marked>
bool WorkingGraph::splice_out(SiteId v, const Marked& marked) {
  auto it = adj_.find(v);
  if (it == adj_.end() || it->second.size() != 2 || marked(v)) return false;
  const Arc x = it->second[0];
  const Arc y = it->second[1];
  remove_vertex(v);
  add_edge(x.to, y.to, x.key < y.key ? y.key : x.key);
  return true;
}

template <typename Marked>
void WorkingGraph::prune(SiteId v, const Marked& marked) {
  auto it = adj_.find(v);
  if (it == adj_.end()) return;
  if (it->second.size() == 2) {
    splice_out(v, marked);
  } else if (it->second.size() == 1 && !marked(v)) {
    const SiteId u = it->second[0].to;
    remove_vertex(v);
    splice_out(u, marked);
  }
}

struct CptStats {
  std::size_t visited = 0;                // clusters ExpandCluster was called on
  std::size_t marked_with_children = 0;   // marked composites plus their children
};

// Writes the compressed path tree of C and its boundary into `out`, treating
// the boundary as marked. Requires RCForest::mark to have been called.
void expand_cluster(const RCForest& rc, ClusterRef c, WorkingGraph& out, CptStats* stats = nullptr);

// Marks `marked`, expands every root containing one of them, unmarks, and
// maps sites back to their original vertices.
CompressedPathTree compressed_path_trees(RCForest& rc, std::span<const VertexId> marked,
                                         CptStats* stats = nullptr);

}  // namespace bmsf

#endif  // BMSF_PATH_COMPRESS_HPP
