#include "bmsf/path_compress.hpp"

#include <algorithm>
#include <stdexcept>

namespace bmsf {

void WorkingGraph::add_edge(SiteId a, SiteId b, std::optional<WeightKey> key) {
  adj_[a].push_back({b, key});
  adj_[b].push_back({a, key});
}

void WorkingGraph::erase_arc(SiteId from, SiteId to) {
  auto& arcs = adj_.at(from);
  auto it = std::find_if(arcs.begin(), arcs.end(), [&](const Arc& a) { return a.to == to; });
  if (it == arcs.end()) throw std::logic_error("working graph: missing arc");
  *it = arcs.back();
  arcs.pop_back();
}

void WorkingGraph::remove_vertex(SiteId v) {
  auto it = adj_.find(v);
  if (it == adj_.end()) return;
  for (const Arc& a : it->second) erase_arc(a.to, v);
  adj_.erase(v);
}

std::size_t WorkingGraph::degree(SiteId v) const {
  auto it = adj_.find(v);
  return it == adj_.end() ? 0 : it->second.size();
}

std::vector<SiteId> WorkingGraph::vertices() const {
  std::vector<SiteId> out;
  out.reserve(adj_.size());
  for (const auto& [v, arcs] : adj_) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

void expand_cluster(const RCForest& rc, ClusterRef c, WorkingGraph& out, CptStats* stats) {
  if (stats) ++stats->visited;
  if (!rc.is_marked(c)) {
    const BoundaryList b = rc.boundary(c);
    for (SiteId s : b) out.add_vertex(s);
    const ClusterKind k = rc.kind(c);
    if (k == ClusterKind::Binary || k == ClusterKind::LeafEdge) out.add_edge(b[0], b[1], rc.weight(c));
    return;
  }
  if (c.tag == ClusterRef::Tag::LeafVertex) {
    out.add_vertex(c.index);
    return;
  }
  const ChildList children = rc.children(c);
  if (stats) stats->marked_with_children += 1 + children.size();
  for (ClusterRef ch : children) expand_cluster(rc, ch, out, stats);
  const BoundaryList boundary = rc.boundary(c);
  out.prune(rc.representative(c),
            [&](SiteId s) { return rc.site_marked(s) || boundary.contains(s); });
}

CompressedPathTree compressed_path_trees(RCForest& rc, std::span<const VertexId> marked,
                                         CptStats* stats) {
  CompressedPathTree cpt;
  if (marked.empty()) return cpt;
  rc.mark(marked);
  std::vector<SiteId> roots;
  for (VertexId v : marked) roots.push_back(rc.root_of(v).index);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

  WorkingGraph g;
  for (SiteId r : roots) expand_cluster(rc, ClusterRef::composite(r), g, stats);
  rc.unmark();

  // Keyless edges only join sites of one owner, so relabeling contracts
  // them away without creating loops or parallel edges.
  for (SiteId s : g.vertices()) {
    cpt.vertices.push_back(rc.owner(s));
    for (const WorkingGraph::Arc& a : g.arcs(s)) {
      if (a.to < s || !a.key) continue;
      VertexId x = rc.owner(s), y = rc.owner(a.to);
      if (x > y) std::swap(x, y);
      cpt.edges.push_back({x, y, *a.key});
    }
  }
  std::sort(cpt.vertices.begin(), cpt.vertices.end());
  cpt.vertices.erase(std::unique(cpt.vertices.begin(), cpt.vertices.end()), cpt.vertices.end());
  std::sort(cpt.edges.begin(), cpt.edges.end(), [](const CptEdge& x, const CptEdge& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  return cpt;
}

}  // namespace bmsf
