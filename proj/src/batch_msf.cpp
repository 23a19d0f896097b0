#include "bmsf/batch_msf.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace bmsf {

std::vector<KeyedEdge> msf_small(std::span<const KeyedEdge> edges) {
  std::unordered_map<VertexId, std::uint32_t> index;
  for (const KeyedEdge& e : edges) {
    index.emplace(e.u, static_cast<std::uint32_t>(index.size()));
    index.emplace(e.v, static_cast<std::uint32_t>(index.size()));
  }
  std::vector<std::uint32_t> parent(index.size());
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<const KeyedEdge*> order;
  order.reserve(edges.size());
  for (const KeyedEdge& e : edges) order.push_back(&e);
  std::sort(order.begin(), order.end(),
            [](const KeyedEdge* a, const KeyedEdge* b) { return a->key < b->key; });
  std::vector<KeyedEdge> out;
  for (const KeyedEdge* e : order) {
    const std::uint32_t a = find(index[e->u]);
    const std::uint32_t b = find(index[e->v]);
    if (a == b) continue;
    parent[a] = b;
    out.push_back(*e);
  }
  return out;
}

InsertResult MSForest::batch_insert(std::span<const KeyedEdge> batch) {
  const std::size_t n = rc_.num_vertices();
  std::unordered_set<EdgeId> ids;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const KeyedEdge& e = batch[i];
    if (e.u >= n || e.v >= n) throw BatchError(i, "endpoint out of range");
    if (rc_.contains_edge(e.id()) || !ids.insert(e.id()).second) throw BatchError(i, "duplicate edge id");
  }
  InsertResult result;
  if (batch.empty()) return result;

  std::vector<VertexId> endpoints;
  for (const KeyedEdge& e : batch) {
    endpoints.push_back(e.u);
    endpoints.push_back(e.v);
  }
  std::sort(endpoints.begin(), endpoints.end());
  endpoints.erase(std::unique(endpoints.begin(), endpoints.end()), endpoints.end());
  const CompressedPathTree cpt = compressed_path_trees(rc_, endpoints);
  result.cpt_edges = cpt.edges.size();

  std::vector<KeyedEdge> small;
  small.reserve(cpt.edges.size() + batch.size());
  for (const CptEdge& e : cpt.edges) small.push_back({e.a, e.b, e.key});
  small.insert(small.end(), batch.begin(), batch.end());
  std::unordered_set<EdgeId> kept;
  for (const KeyedEdge& e : msf_small(small)) kept.insert(e.id());

  for (const CptEdge& e : cpt.edges)
    if (!kept.count(e.origin())) result.evicted.push_back(e.origin());
  std::vector<ForestEdge> links;
  for (const KeyedEdge& e : batch) {
    if (!kept.count(e.id())) continue;
    result.added.push_back(e.id());
    links.push_back({e.u, e.v, e.key});
  }
  rc_.batch_update(result.evicted, links);
  std::sort(result.added.begin(), result.added.end());
  std::sort(result.evicted.begin(), result.evicted.end());
  return result;
}

InsertResult MSForest::batch_insert(std::span<const StreamEdge> batch) {
  std::vector<KeyedEdge> keyed;
  keyed.reserve(batch.size());
  for (const StreamEdge& e : batch) keyed.push_back(keyed_by_weight(e));
  return batch_insert(keyed);
}

void MSForest::batch_delete(std::span<const EdgeId> edges) {
  if (edges.empty()) return;
  rc_.batch_cut(edges);
}

std::vector<KeyedEdge> MSForest::edges() const {
  std::vector<KeyedEdge> out;
  for (const ForestEdge& e : rc_.edges()) out.push_back({e.u, e.v, e.key});
  return out;
}

std::vector<EdgeId> MSForest::edge_ids() const {
  std::vector<EdgeId> out;
  for (const ForestEdge& e : rc_.edges()) out.push_back(e.id());
  return out;
}

}  // namespace bmsf
