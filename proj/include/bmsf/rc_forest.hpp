#ifndef BMSF_RC_FOREST_HPP
#define BMSF_RC_FOREST_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bmsf/graph_core.hpp"

namespace bmsf {

// A site is a vertex of the internal degree-3 forest. Sites [0, n) are the
// original vertices; higher ids are dummy sites added by ternarization.
using SiteId = std::uint32_t;
inline constexpr SiteId kNoSite = std::numeric_limits<SiteId>::max();

struct ForestEdge {
  VertexId u = 0;
  VertexId v = 0;
  WeightKey key;

  EdgeId id() const { return key.edge; }
};

// Handle to a node of the RC tree. Leaf vertices and composites share
// the site index: the composite of site s is the cluster represented by s.
struct ClusterRef {
  enum class Tag : std::uint8_t { None, LeafVertex, LeafEdge, Composite };

  Tag tag = Tag::None;
  std::uint32_t index = 0;

  static ClusterRef none() { return {}; }
  static ClusterRef leaf_vertex(SiteId s) { return {Tag::LeafVertex, s}; }
  static ClusterRef leaf_edge(std::uint32_t slot) { return {Tag::LeafEdge, slot}; }
  static ClusterRef composite(SiteId s) { return {Tag::Composite, s}; }

  bool is_none() const { return tag == Tag::None; }
  friend auto operator<=>(const ClusterRef&, const ClusterRef&) = default;
};

enum class ClusterKind : std::uint8_t { LeafVertex, LeafEdge, Unary, Binary, Nullary };

// Fixed-capacity list returned by the constant-time cluster primitives.
template <typename T, std::size_t N>
class SmallList {
 public:
  void push_back(const T& x) { items_[size_++] = x; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const T& operator[](std::size_t i) const { return items_[i]; }
  const T* begin() const { return items_.data(); }
  const T* end() const { return items_.data() + size_; }
  bool contains(const T& x) const {
    for (std::size_t i = 0; i < size_; ++i)
      if (items_[i] == x) return true;
    return false;
  }

 private:
  std::array<T, N> items_{};
  std::size_t size_ = 0;
};

using BoundaryList = SmallList<SiteId, 2>;
using ChildList = SmallList<ClusterRef, 6>;

// Rake-compress tree over a forest of original vertices.
//
// High-degree vertices are expanded into chains of dummy sites joined by
// DUMMY edges so every site has degree <= 3; DUMMY edges carry no key and
// never contribute to path maxima. The tree is contracted in synchronous
// rounds: leaves rake, isolated sites finalize, and a degree-2 site whose
// neighbours are not leaves compresses when its (site, round) coin is heads
// and every degree-2 neighbour's coin is tails. Coins come from a keyed hash,
// so the contraction is a function of the site forest alone; batch updates
// re-run the contraction only for sites whose round state changed.
//
// Queries (path_max, connected, primitives) are const and may run
// concurrently; every mutating call needs exclusive access.
class RCForest {
 public:
  explicit RCForest(std::size_t n, std::uint64_t seed = 0);

  // Throws std::invalid_argument("not a forest") on cyclic input.
  static RCForest build(std::span<const ForestEdge> edges, std::size_t n, std::uint64_t seed);

  // Throws std::invalid_argument("cycle") if the result would not be a forest.
  void batch_link(std::span<const ForestEdge> edges);
  // Throws std::invalid_argument("absent edge") for an unknown EdgeId.
  void batch_cut(std::span<const EdgeId> edges);
  // Cuts then links in one propagation pass. The caller guarantees that the
  // result is a forest; only ids and endpoints are validated.
  void batch_update(std::span<const EdgeId> cuts, std::span<const ForestEdge> links);

  std::optional<WeightKey> path_max(VertexId u, VertexId v) const;
  bool connected(VertexId u, VertexId v) const;

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return edge_slot_.size(); }
  std::size_t num_components() const { return n_ - edge_slot_.size(); }
  bool contains_edge(EdgeId id) const { return edge_slot_.count(id) != 0; }
  std::vector<ForestEdge> edges() const;

  // Marks every cluster that contains one of `vs`. A second call replaces
  // the previous marking.
  void mark(std::span<const VertexId> vs);
  void unmark();
  bool is_marked(ClusterRef c) const;
  bool site_marked(SiteId s) const { return site_marked_[s]; }

  // Constant-time cluster primitives.
  ClusterKind kind(ClusterRef c) const;
  BoundaryList boundary(ClusterRef c) const;
  ChildList children(ClusterRef c) const;
  SiteId representative(ClusterRef c) const;
  // Heaviest keyed edge between the two boundaries of a binary cluster, or
  // nullopt when that path has only DUMMY edges. Throws std::logic_error on
  // clusters that are not binary.
  std::optional<WeightKey> weight(ClusterRef c) const;
  ClusterRef parent(ClusterRef c) const;

  ClusterRef leaf_of(VertexId v) const { return ClusterRef::leaf_vertex(v); }
  ClusterRef root_of(VertexId v) const;
  std::vector<ClusterRef> roots() const;

  // Original vertex a site belongs to.
  VertexId owner(SiteId s) const { return owner_[s]; }
  std::size_t site_capacity() const { return owner_.size(); }
  bool site_alive(SiteId s) const { return s < alive_.size() && alive_[s]; }

  // Diagnostics used by the test suites.
  std::vector<std::string> check_invariants() const;
  // True iff re-running the contraction from scratch on the current site
  // forest reproduces every round state and cluster exactly.
  bool matches_fresh_contraction() const;
  std::size_t height() const;
  std::size_t num_rounds() const;
  std::uint64_t fingerprint() const;
  // Sites whose contraction was recomputed during the last update.
  std::size_t last_update_work() const { return last_work_; }

 private:
  enum class Action : std::uint8_t { None, Rake, Compress, Finalize };
  static constexpr std::uint32_t kPending = std::numeric_limits<std::uint32_t>::max();

  struct Adj {
    SiteId nbr = kNoSite;
    ClusterRef cl;
    friend bool operator==(const Adj&, const Adj&) = default;
  };

  struct RoundState {
    std::array<Adj, 3> adj{};
    std::array<SiteId, 3> unary{};
    std::uint8_t deg = 0;
    std::uint8_t nun = 0;

    void canonicalize();
    friend bool operator==(const RoundState&, const RoundState&) = default;
  };

  struct Composite {
    Action action = Action::None;
    std::uint32_t round = 0;
    std::uint8_t nbin = 0;
    std::uint8_t nun = 0;
    std::array<Adj, 2> bin{};
    std::array<SiteId, 3> unary{};
    std::optional<WeightKey> pathmax;
    ClusterRef parent;
    friend bool operator==(const Composite&, const Composite&) = default;
  };

  struct SiteEdge {
    SiteId a = kNoSite;
    SiteId b = kNoSite;
    std::optional<WeightKey> key;  // nullopt: DUMMY
    ClusterRef parent;
    bool alive = false;
  };

  struct Frame {
    SiteId cluster = kNoSite;
    std::uint8_t nb = 0;
    std::array<SiteId, 2> b{};
    std::array<std::optional<WeightKey>, 2> val{};
    std::optional<WeightKey> at(SiteId s) const;
  };

  // Ternarization.
  SiteId new_site(VertexId owner);
  std::uint32_t new_slot();
  SiteId attach_real_site(VertexId v, std::uint32_t slot);
  void detach_real(std::uint32_t slot, SiteId at);
  void move_real(std::uint32_t slot, SiteId from, SiteId to);
  int chain_degree(SiteId s) const;
  void site_link(std::uint32_t slot);
  void site_cut(std::uint32_t slot);
  void touch(SiteId s);
  void apply(std::span<const EdgeId> cuts, std::span<const ForestEdge> links);

  // Contraction.
  bool coin(SiteId s, std::uint32_t round) const;
  Action decide(SiteId v, std::uint32_t r) const;
  RoundState advance(SiteId v, std::uint32_t r) const;
  void contract(SiteId v, std::uint32_t r);
  void set_parent(ClusterRef child, ClusterRef parent);
  void propagate();
  void refresh_aggregates(const std::vector<SiteId>& touched);
  std::optional<WeightKey> cluster_pathmax(ClusterRef c) const;
  void reset_contraction();
  void check_vertex(VertexId v) const;

  SiteId root_site(SiteId s) const;
  std::vector<Frame> ascend(SiteId s) const;

  std::size_t n_;
  std::uint64_t seed_;

  // Per site.
  std::vector<VertexId> owner_;
  std::vector<char> alive_;
  std::vector<std::uint8_t> real_count_;
  std::vector<std::array<std::uint32_t, 3>> reals_;  // real edge slots attached here
  std::vector<std::uint32_t> chain_pos_;
  std::vector<std::vector<RoundState>> rounds_;
  std::vector<std::uint32_t> death_;
  std::vector<Action> action_;
  std::vector<Composite> comp_;
  std::vector<char> site_marked_;
  std::vector<char> comp_marked_;
  std::vector<SiteId> free_sites_;
  std::vector<SiteId> pending_free_sites_;

  // Per original vertex: chain of sites, chain[0] == v.
  std::vector<std::vector<SiteId>> chain_;

  // Per edge slot (real and DUMMY).
  std::vector<SiteEdge> sedges_;
  std::vector<std::uint32_t> free_slots_;
  std::vector<std::uint32_t> pending_free_slots_;
  std::unordered_map<EdgeId, std::uint32_t> edge_slot_;
  std::vector<std::uint32_t> chain_slot_;  // per site: slot of DUMMY edge to predecessor

  // Propagation scratch.
  std::vector<SiteId> affected_;
  std::vector<std::uint32_t> stamp_a_, stamp_d_, stamp_s_;
  std::uint32_t stamp_ = 0;
  std::vector<VertexId> marked_vertices_;
  std::size_t last_work_ = 0;
};

}  // namespace bmsf

#endif  // BMSF_RC_FOREST_HPP
