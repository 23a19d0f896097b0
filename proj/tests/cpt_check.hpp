#ifndef BMSF_CPT_CHECK_HPP
#define BMSF_CPT_CHECK_HPP

#include <set>
#include <string>
#include <vector>

#include "bmsf/oracle.hpp"
#include "bmsf/path_compress.hpp"

namespace bmsf::test {

// Returns an empty string if `cpt` is a valid compressed path tree of
// `forest` for `marked`, otherwise a description of the first violation.
inline std::string check_cpt(std::size_t n, const std::vector<oracle::TreeEdge>& forest,
                             const std::vector<VertexId>& marked, const CompressedPathTree& cpt) {
  std::vector<oracle::TreeEdge> ctree;
  std::vector<std::size_t> deg(n, 0);
  for (const CptEdge& e : cpt.edges) {
    ctree.push_back({e.a, e.b, e.key});
    ++deg[e.a];
    ++deg[e.b];
  }
  oracle::Snapshot s{n, {}};
  for (const CptEdge& e : cpt.edges) s.edges.push_back({e.a, e.b, 0, 0, 0});
  if (oracle::has_cycle_naive(s)) return "cpt has a cycle";
  const std::set<VertexId> mset(marked.begin(), marked.end());
  for (VertexId v : cpt.vertices)
    if (!mset.count(v) && deg[v] <= 2) return "unmarked vertex " + std::to_string(v) + " of degree <= 2";
  for (VertexId v : mset)
    if (!std::binary_search(cpt.vertices.begin(), cpt.vertices.end(), v)) return "marked vertex missing";
  if (cpt.vertices.size() > 2 * mset.size()) return "cpt too large";
  for (VertexId u : mset)
    for (VertexId v : mset) {
      const auto want = oracle::path_max_naive(n, forest, u, v);
      const auto got = oracle::path_max_naive(n, ctree, u, v);
      if (want != got)
        return "path max differs for " + std::to_string(u) + "-" + std::to_string(v);
      oracle::Snapshot f{n, {}};
      for (const auto& e : forest) f.edges.push_back({e.u, e.v, 0, 0, 0});
      if (u != v && oracle::connected_naive(f, u, v) != oracle::connected_naive(s, u, v))
        return "connectivity differs";
    }
  return {};
}

}  // namespace bmsf::test

#endif  // BMSF_CPT_CHECK_HPP
