#include "bmsf/graph_core.hpp"

namespace bmsf {

void validate_arrival_order(std::span<const StreamEdge> edges) {
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].toa <= edges[i - 1].toa) {
      throw std::invalid_argument("arrival positions must be strictly increasing (edge " +
                                  std::to_string(i) + ")");
    }
  }
}

std::vector<StreamEdge> EdgeStamper::normalize_batch(std::span<const RawEdge> edges) {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].u >= n_ || edges[i].v >= n_) {
      throw BatchError(i, "edge " + std::to_string(i) + " has an endpoint >= n (" +
                              std::to_string(n_) + ")");
    }
  }
  std::vector<StreamEdge> out;
  out.reserve(edges.size());
  for (const RawEdge& e : edges) {
    const Toa toa = next_toa_++;
    if (e.u == e.v) continue;
    out.push_back({e.u, e.v, e.w, toa, toa});
  }
  return out;
}

}  // namespace bmsf
