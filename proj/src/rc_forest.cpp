#include "bmsf/rc_forest.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace bmsf {

namespace {

std::optional<WeightKey> max_key(const std::optional<WeightKey>& a,
                                 const std::optional<WeightKey>& b) {
  return a < b ? b : a;
}

// Union-find over small dense index spaces, used for cycle validation.
class Dsu {
 public:
  explicit Dsu(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace

void RCForest::RoundState::canonicalize() {
  std::sort(adj.begin(), adj.begin() + deg, [](const Adj& x, const Adj& y) {
    return x.cl != y.cl ? x.cl < y.cl : x.nbr < y.nbr;
  });
  for (std::size_t i = deg; i < adj.size(); ++i) adj[i] = Adj{};
  std::sort(unary.begin(), unary.begin() + nun);
  for (std::size_t i = nun; i < unary.size(); ++i) unary[i] = 0;
}

std::optional<WeightKey> RCForest::Frame::at(SiteId s) const {
  for (std::uint8_t i = 0; i < nb; ++i)
    if (b[i] == s) return val[i];
  throw std::logic_error("rc forest: boundary lookup failed");
}

RCForest::RCForest(std::size_t n, std::uint64_t seed) : n_(n), seed_(seed) {
  if (n >= kNoSite / 4) throw std::invalid_argument("rc forest: too many vertices");
  chain_.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    SiteId s = new_site(static_cast<VertexId>(v));
    chain_[v].push_back(s);
    chain_pos_[s] = 0;
  }
  propagate();
}

RCForest RCForest::build(std::span<const ForestEdge> edges, std::size_t n, std::uint64_t seed) {
  RCForest f(n, seed);
  try {
    f.batch_link(edges);
  } catch (const std::invalid_argument& e) {
    if (std::string(e.what()) == "cycle") throw std::invalid_argument("not a forest");
    throw;
  }
  return f;
}

void RCForest::check_vertex(VertexId v) const {
  if (v >= n_) {
    throw std::invalid_argument("vertex " + std::to_string(v) + " out of range (n = " +
                                std::to_string(n_) + ")");
  }
}

// ---------------------------------------------------------------------------
// Ternarization

SiteId RCForest::new_site(VertexId owner) {
  SiteId s;
  if (!free_sites_.empty()) {
    s = free_sites_.back();
    free_sites_.pop_back();
  } else {
    s = static_cast<SiteId>(owner_.size());
    owner_.emplace_back();
    alive_.emplace_back();
    real_count_.emplace_back();
    reals_.emplace_back();
    chain_pos_.emplace_back();
    rounds_.emplace_back();
    death_.emplace_back();
    action_.emplace_back();
    comp_.emplace_back();
    site_marked_.emplace_back();
    comp_marked_.emplace_back();
    chain_slot_.emplace_back();
    stamp_a_.emplace_back();
    stamp_d_.emplace_back();
    stamp_s_.emplace_back();
  }
  owner_[s] = owner;
  alive_[s] = 1;
  real_count_[s] = 0;
  reals_[s] = {};
  chain_pos_[s] = 0;
  rounds_[s].assign(1, RoundState{});
  death_[s] = kPending;
  action_[s] = Action::None;
  comp_[s] = Composite{};
  site_marked_[s] = 0;
  comp_marked_[s] = 0;
  chain_slot_[s] = 0;
  touch(s);
  return s;
}

std::uint32_t RCForest::new_slot() {
  if (!free_slots_.empty()) {
    std::uint32_t slot = free_slots_.back();
    free_slots_.pop_back();
    return slot;
  }
  sedges_.emplace_back();
  return static_cast<std::uint32_t>(sedges_.size() - 1);
}

int RCForest::chain_degree(SiteId s) const {
  const std::size_t len = chain_[owner_[s]].size();
  if (len == 1) return 0;
  const std::uint32_t pos = chain_pos_[s];
  return (pos == 0 || pos + 1 == len) ? 1 : 2;
}

void RCForest::touch(SiteId s) { affected_.push_back(s); }

void RCForest::site_link(std::uint32_t slot) {
  const SiteEdge& e = sedges_[slot];
  for (auto [x, y] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}}) {
    RoundState& st = rounds_[x][0];
    if (st.deg == 3) throw std::logic_error("rc forest: site degree exceeds 3");
    st.adj[st.deg++] = Adj{y, ClusterRef::leaf_edge(slot)};
    st.canonicalize();
    touch(x);
  }
}

void RCForest::site_cut(std::uint32_t slot) {
  const SiteEdge& e = sedges_[slot];
  for (SiteId x : {e.a, e.b}) {
    RoundState& st = rounds_[x][0];
    auto it = std::find_if(st.adj.begin(), st.adj.begin() + st.deg,
                           [&](const Adj& a) { return a.cl == ClusterRef::leaf_edge(slot); });
    if (it == st.adj.begin() + st.deg) throw std::logic_error("rc forest: cut of unlinked slot");
    *it = st.adj[st.deg - 1];
    --st.deg;
    st.canonicalize();
    touch(x);
  }
}

void RCForest::move_real(std::uint32_t slot, SiteId from, SiteId to) {
  site_cut(slot);
  SiteEdge& e = sedges_[slot];
  (e.a == from ? e.a : e.b) = to;
  auto& rf = reals_[from];
  auto it = std::find(rf.begin(), rf.begin() + real_count_[from], slot);
  *it = rf[real_count_[from] - 1];
  --real_count_[from];
  reals_[to][real_count_[to]++] = slot;
  site_link(slot);
}

// Chain invariant: every chain site except the tail has degree 3, and the
// tail of a chain longer than one holds at least one real edge.
SiteId RCForest::attach_real_site(VertexId v, std::uint32_t slot) {
  auto& ch = chain_[v];
  const SiteId tail = ch.back();
  if (chain_degree(tail) + real_count_[tail] < 3) {
    reals_[tail][real_count_[tail]++] = slot;
    return tail;
  }
  const SiteId x = new_site(v);
  chain_pos_[x] = static_cast<std::uint32_t>(ch.size());
  ch.push_back(x);
  move_real(reals_[tail][real_count_[tail] - 1], tail, x);
  const std::uint32_t d = new_slot();
  sedges_[d] = SiteEdge{tail, x, std::nullopt, ClusterRef::none(), true};
  chain_slot_[x] = d;
  site_link(d);
  reals_[x][real_count_[x]++] = slot;
  return x;
}

void RCForest::detach_real(std::uint32_t slot, SiteId at) {
  auto& ra = reals_[at];
  auto it = std::find(ra.begin(), ra.begin() + real_count_[at], slot);
  if (it == ra.begin() + real_count_[at]) throw std::logic_error("rc forest: detach mismatch");
  *it = ra[real_count_[at] - 1];
  --real_count_[at];

  auto& ch = chain_[owner_[at]];
  if (ch.size() == 1) return;
  const SiteId tail = ch.back();
  if (at != tail) move_real(reals_[tail][real_count_[tail] - 1], tail, at);
  if (real_count_[tail] == 0) {
    const std::uint32_t d = chain_slot_[tail];
    site_cut(d);
    sedges_[d].alive = false;
    pending_free_slots_.push_back(d);
    ch.pop_back();
    alive_[tail] = 0;
    rounds_[tail].clear();
    death_[tail] = kPending;
    comp_[tail] = Composite{};
    pending_free_sites_.push_back(tail);
  }
}

// ---------------------------------------------------------------------------
// Updates

void RCForest::batch_link(std::span<const ForestEdge> edges) {
  std::unordered_map<SiteId, std::uint32_t> index;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ends;
  std::unordered_map<EdgeId, char> seen;
  for (const ForestEdge& e : edges) {
    check_vertex(e.u);
    check_vertex(e.v);
    if (e.u == e.v) throw std::invalid_argument("cycle");
    if (contains_edge(e.id()) || !seen.emplace(e.id(), 1).second)
      throw std::invalid_argument("duplicate edge id " + std::to_string(e.id()));
    auto id_of = [&](VertexId x) {
      return index.emplace(root_site(x), static_cast<std::uint32_t>(index.size())).first->second;
    };
    const std::uint32_t a = id_of(e.u);
    const std::uint32_t b = id_of(e.v);
    ends.emplace_back(a, b);
  }
  Dsu dsu(index.size());
  for (auto [a, b] : ends)
    if (!dsu.unite(a, b)) throw std::invalid_argument("cycle");
  apply({}, edges);
}

void RCForest::batch_cut(std::span<const EdgeId> edges) {
  std::unordered_map<EdgeId, char> seen;
  for (EdgeId id : edges)
    if (!contains_edge(id) || !seen.emplace(id, 1).second) throw std::invalid_argument("absent edge");
  apply(edges, {});
}

void RCForest::batch_update(std::span<const EdgeId> cuts, std::span<const ForestEdge> links) {
  std::unordered_map<EdgeId, char> seen;
  for (EdgeId id : cuts)
    if (!contains_edge(id) || !seen.emplace(id, 1).second) throw std::invalid_argument("absent edge");
  for (const ForestEdge& e : links) {
    check_vertex(e.u);
    check_vertex(e.v);
    if (e.u == e.v) throw std::invalid_argument("cycle");
    if ((contains_edge(e.id()) && !seen.count(e.id())) || !seen.emplace(e.id(), 2).second)
      throw std::invalid_argument("duplicate edge id " + std::to_string(e.id()));
  }
  apply(cuts, links);
}

void RCForest::apply(std::span<const EdgeId> cuts, std::span<const ForestEdge> links) {
  for (EdgeId id : cuts) {
    const std::uint32_t slot = edge_slot_.at(id);
    edge_slot_.erase(id);
    site_cut(slot);
    const SiteId a = sedges_[slot].a;
    const SiteId b = sedges_[slot].b;
    detach_real(slot, a);
    detach_real(slot, b);
    sedges_[slot].alive = false;
    pending_free_slots_.push_back(slot);
  }
  for (const ForestEdge& e : links) {
    const std::uint32_t slot = new_slot();
    sedges_[slot] = SiteEdge{kNoSite, kNoSite, e.key, ClusterRef::none(), true};
    sedges_[slot].a = attach_real_site(e.u, slot);
    sedges_[slot].b = attach_real_site(e.v, slot);
    site_link(slot);
    edge_slot_[e.id()] = slot;
  }
  propagate();
  free_sites_.insert(free_sites_.end(), pending_free_sites_.begin(), pending_free_sites_.end());
  pending_free_sites_.clear();
  free_slots_.insert(free_slots_.end(), pending_free_slots_.begin(), pending_free_slots_.end());
  pending_free_slots_.clear();
}

// ---------------------------------------------------------------------------
// Contraction

bool RCForest::coin(SiteId s, std::uint32_t round) const {
  return (hash_combine(seed_, s, round) & 1u) != 0;
}

RCForest::Action RCForest::decide(SiteId v, std::uint32_t r) const {
  const RoundState& st = rounds_[v][r];
  switch (st.deg) {
    case 0:
      return Action::Finalize;
    case 1: {
      const SiteId u = st.adj[0].nbr;
      if (rounds_[u][r].deg == 1) return v < u ? Action::Rake : Action::None;
      return Action::Rake;
    }
    case 2: {
      for (std::uint8_t i = 0; i < 2; ++i)
        if (rounds_[st.adj[i].nbr][r].deg == 1) return Action::None;
      if (!coin(v, r)) return Action::None;
      for (std::uint8_t i = 0; i < 2; ++i) {
        const SiteId u = st.adj[i].nbr;
        if (rounds_[u][r].deg == 2 && coin(u, r)) return Action::None;
      }
      return Action::Compress;
    }
    default:
      return Action::None;
  }
}

RCForest::RoundState RCForest::advance(SiteId v, std::uint32_t r) const {
  const RoundState& st = rounds_[v][r];
  RoundState next;
  next.unary = st.unary;
  next.nun = st.nun;
  for (std::uint8_t i = 0; i < st.deg; ++i) {
    const Adj& a = st.adj[i];
    const SiteId u = a.nbr;
    if (death_[u] != r) {
      next.adj[next.deg++] = a;
      continue;
    }
    if (action_[u] == Action::Rake) {
      next.unary[next.nun++] = u;
    } else if (action_[u] == Action::Compress) {
      const RoundState& su = rounds_[u][r];
      const Adj& other = su.adj[0].nbr == v ? su.adj[1] : su.adj[0];
      next.adj[next.deg++] = Adj{other.nbr, ClusterRef::composite(u)};
    } else {
      throw std::logic_error("rc forest: neighbour finalized while adjacent");
    }
  }
  next.canonicalize();
  return next;
}

void RCForest::set_parent(ClusterRef child, ClusterRef parent) {
  if (child.tag == ClusterRef::Tag::LeafEdge)
    sedges_[child.index].parent = parent;
  else
    comp_[child.index].parent = parent;
}

void RCForest::contract(SiteId v, std::uint32_t r) {
  const RoundState& st = rounds_[v][r];
  Composite& c = comp_[v];
  c.action = action_[v];
  c.round = r;
  c.nun = st.nun;
  c.unary = st.unary;
  c.nbin = c.action == Action::Rake ? 1 : c.action == Action::Compress ? 2 : 0;
  c.bin = {};
  for (std::uint8_t i = 0; i < c.nbin; ++i) c.bin[i] = st.adj[i];
  if (c.action == Action::Finalize) c.parent = ClusterRef::none();
  const ClusterRef self = ClusterRef::composite(v);
  for (std::uint8_t i = 0; i < c.nbin; ++i) set_parent(c.bin[i].cl, self);
  for (std::uint8_t i = 0; i < c.nun; ++i) set_parent(ClusterRef::composite(c.unary[i]), self);
}

void RCForest::propagate() {
  last_work_ = 0;
  std::vector<SiteId> frontier;
  ++stamp_;
  for (SiteId s : affected_) {
    if (alive_[s] && stamp_a_[s] != stamp_) {
      stamp_a_[s] = stamp_;
      frontier.push_back(s);
    }
  }
  affected_.clear();

  std::vector<SiteId> decided, swept, next, touched;
  for (std::uint32_t r = 0; !frontier.empty(); ++r) {
    // Sites whose decision at round r may differ: the changed sites and
    // their neighbours (decisions read neighbour degrees and coins).
    decided.clear();
    const std::uint32_t sd = ++stamp_;
    auto add_d = [&](SiteId s) {
      if (stamp_d_[s] != sd) {
        stamp_d_[s] = sd;
        decided.push_back(s);
      }
    };
    for (SiteId v : frontier) {
      add_d(v);
      const RoundState& st = rounds_[v][r];
      for (std::uint8_t i = 0; i < st.deg; ++i) add_d(st.adj[i].nbr);
    }
    for (SiteId v : decided) {
      const Action act = decide(v, r);
      if (act != Action::None) {
        death_[v] = r;
        action_[v] = act;
      } else if (death_[v] == r) {
        death_[v] = kPending;
        action_[v] = Action::None;
      }
    }

    // Sites whose round r+1 state may differ.
    swept.clear();
    const std::uint32_t ss = ++stamp_;
    auto add_s = [&](SiteId s) {
      if (stamp_s_[s] != ss) {
        stamp_s_[s] = ss;
        swept.push_back(s);
      }
    };
    for (SiteId v : decided) {
      add_s(v);
      const RoundState& st = rounds_[v][r];
      for (std::uint8_t i = 0; i < st.deg; ++i) add_s(st.adj[i].nbr);
    }

    next.clear();
    for (SiteId v : swept) {
      if (death_[v] == r) {
        contract(v, r);
        rounds_[v].resize(r + 1);
        touched.push_back(v);
        continue;
      }
      RoundState ns = advance(v, r);
      auto& rv = rounds_[v];
      if (rv.size() > r + 1) {
        if (rv[r + 1] == ns) continue;
        rv[r + 1] = ns;
      } else {
        rv.push_back(ns);
      }
      next.push_back(v);
    }
    last_work_ += swept.size();
    frontier.swap(next);
  }
  refresh_aggregates(touched);
}

std::optional<WeightKey> RCForest::cluster_pathmax(ClusterRef c) const {
  if (c.tag == ClusterRef::Tag::LeafEdge) return sedges_[c.index].key;
  return comp_[c.index].pathmax;
}

// Path maxima, processed in round order so children are final before
// their parents.
void RCForest::refresh_aggregates(const std::vector<SiteId>& touched) {
  if (touched.empty()) return;
  std::vector<std::vector<SiteId>> buckets;
  const std::uint32_t sq = ++stamp_;
  auto push = [&](SiteId s) {
    if (stamp_a_[s] == sq) return;
    stamp_a_[s] = sq;
    const std::uint32_t r = comp_[s].round;
    if (buckets.size() <= r) buckets.resize(r + 1);
    buckets[r].push_back(s);
  };
  for (SiteId s : touched) push(s);
  const std::uint32_t forced = ++stamp_;
  for (SiteId s : touched) stamp_d_[s] = forced;

  for (std::size_t r = 0; r < buckets.size(); ++r) {
    for (std::size_t i = 0; i < buckets[r].size(); ++i) {
      const SiteId s = buckets[r][i];
      Composite& c = comp_[s];
      std::optional<WeightKey> pm;
      if (c.action == Action::Compress)
        pm = max_key(cluster_pathmax(c.bin[0].cl), cluster_pathmax(c.bin[1].cl));
      const bool changed = pm != c.pathmax;
      c.pathmax = pm;
      if ((changed || stamp_d_[s] == forced) && c.parent.tag == ClusterRef::Tag::Composite)
        push(c.parent.index);
    }
  }
}

// ---------------------------------------------------------------------------
// Queries

SiteId RCForest::root_site(SiteId s) const {
  while (comp_[s].parent.tag == ClusterRef::Tag::Composite) s = comp_[s].parent.index;
  return s;
}

ClusterRef RCForest::root_of(VertexId v) const {
  check_vertex(v);
  return ClusterRef::composite(root_site(v));
}

std::vector<ClusterRef> RCForest::roots() const {
  std::vector<ClusterRef> out;
  for (SiteId s = 0; s < owner_.size(); ++s)
    if (alive_[s] && comp_[s].action == Action::Finalize) out.push_back(ClusterRef::composite(s));
  return out;
}

bool RCForest::connected(VertexId u, VertexId v) const {
  check_vertex(u);
  check_vertex(v);
  return root_site(u) == root_site(v);
}

// Walks from the composite of s to the root, tracking for each ancestor the
// path maximum from s to each of its boundaries.
std::vector<RCForest::Frame> RCForest::ascend(SiteId s) const {
  std::vector<Frame> frames;
  {
    const Composite& c = comp_[s];
    Frame f;
    f.cluster = s;
    f.nb = c.nbin;
    for (std::uint8_t i = 0; i < c.nbin; ++i) {
      f.b[i] = c.bin[i].nbr;
      f.val[i] = cluster_pathmax(c.bin[i].cl);
    }
    frames.push_back(f);
  }
  SiteId cur = s;
  while (comp_[cur].parent.tag == ClusterRef::Tag::Composite) {
    const SiteId p = comp_[cur].parent.index;
    const Composite& pc = comp_[p];
    const Frame prev = frames.back();
    const std::optional<WeightKey> to_rep = prev.at(p);
    Frame f;
    f.cluster = p;
    f.nb = pc.nbin;
    for (std::uint8_t i = 0; i < pc.nbin; ++i) {
      f.b[i] = pc.bin[i].nbr;
      if (pc.bin[i].cl == ClusterRef::composite(cur))
        f.val[i] = prev.at(pc.bin[i].nbr);
      else
        f.val[i] = max_key(to_rep, cluster_pathmax(pc.bin[i].cl));
    }
    frames.push_back(f);
    cur = p;
  }
  return frames;
}

std::optional<WeightKey> RCForest::path_max(VertexId u, VertexId v) const {
  check_vertex(u);
  check_vertex(v);
  if (u == v) return std::nullopt;
  const auto fu = ascend(u);
  const auto fv = ascend(v);
  if (fu.back().cluster != fv.back().cluster) return std::nullopt;
  std::size_t i = fu.size() - 1;
  std::size_t j = fv.size() - 1;
  while (i > 0 && j > 0 && fu[i - 1].cluster == fv[j - 1].cluster) {
    --i;
    --j;
  }
  const SiteId rep = fu[i].cluster;
  const std::optional<WeightKey> a = i == 0 ? std::nullopt : fu[i - 1].at(rep);
  const std::optional<WeightKey> b = j == 0 ? std::nullopt : fv[j - 1].at(rep);
  return max_key(a, b);
}

std::vector<ForestEdge> RCForest::edges() const {
  std::vector<ForestEdge> out;
  out.reserve(edge_slot_.size());
  for (const auto& [id, slot] : edge_slot_) {
    const SiteEdge& e = sedges_[slot];
    out.push_back({owner_[e.a], owner_[e.b], *e.key});
  }
  std::sort(out.begin(), out.end(),
            [](const ForestEdge& x, const ForestEdge& y) { return x.id() < y.id(); });
  return out;
}

// ---------------------------------------------------------------------------
// Marking and primitives

void RCForest::mark(std::span<const VertexId> vs) {
  unmark();
  for (VertexId v : vs) check_vertex(v);
  for (VertexId v : vs) {
    marked_vertices_.push_back(v);
    site_marked_[v] = 1;
    SiteId c = v;
    while (!comp_marked_[c]) {
      comp_marked_[c] = 1;
      if (comp_[c].parent.tag != ClusterRef::Tag::Composite) break;
      c = comp_[c].parent.index;
    }
  }
}

void RCForest::unmark() {
  for (VertexId v : marked_vertices_) {
    site_marked_[v] = 0;
    SiteId c = v;
    while (comp_marked_[c]) {
      comp_marked_[c] = 0;
      if (comp_[c].parent.tag != ClusterRef::Tag::Composite) break;
      c = comp_[c].parent.index;
    }
  }
  marked_vertices_.clear();
}

bool RCForest::is_marked(ClusterRef c) const {
  switch (c.tag) {
    case ClusterRef::Tag::LeafVertex: return site_marked_[c.index] != 0;
    case ClusterRef::Tag::Composite: return comp_marked_[c.index] != 0;
    default: return false;
  }
}

ClusterKind RCForest::kind(ClusterRef c) const {
  switch (c.tag) {
    case ClusterRef::Tag::LeafVertex: return ClusterKind::LeafVertex;
    case ClusterRef::Tag::LeafEdge: return ClusterKind::LeafEdge;
    case ClusterRef::Tag::Composite:
      switch (comp_[c.index].action) {
        case Action::Rake: return ClusterKind::Unary;
        case Action::Compress: return ClusterKind::Binary;
        case Action::Finalize: return ClusterKind::Nullary;
        default: break;
      }
      break;
    default: break;
  }
  throw std::logic_error("rc forest: kind of invalid cluster");
}

BoundaryList RCForest::boundary(ClusterRef c) const {
  BoundaryList out;
  if (c.tag == ClusterRef::Tag::LeafEdge) {
    out.push_back(sedges_[c.index].a);
    out.push_back(sedges_[c.index].b);
  } else if (c.tag == ClusterRef::Tag::Composite) {
    const Composite& cc = comp_[c.index];
    for (std::uint8_t i = 0; i < cc.nbin; ++i) out.push_back(cc.bin[i].nbr);
  }
  return out;
}

ChildList RCForest::children(ClusterRef c) const {
  ChildList out;
  if (c.tag != ClusterRef::Tag::Composite) return out;
  const Composite& cc = comp_[c.index];
  out.push_back(ClusterRef::leaf_vertex(c.index));
  for (std::uint8_t i = 0; i < cc.nbin; ++i) out.push_back(cc.bin[i].cl);
  for (std::uint8_t i = 0; i < cc.nun; ++i) out.push_back(ClusterRef::composite(cc.unary[i]));
  return out;
}

SiteId RCForest::representative(ClusterRef c) const {
  if (c.tag != ClusterRef::Tag::Composite)
    throw std::logic_error("rc forest: leaf clusters have no representative");
  return c.index;
}

std::optional<WeightKey> RCForest::weight(ClusterRef c) const {
  if (c.tag == ClusterRef::Tag::LeafEdge) return sedges_[c.index].key;
  if (c.tag == ClusterRef::Tag::Composite && comp_[c.index].action == Action::Compress)
    return comp_[c.index].pathmax;
  throw std::logic_error("rc forest: weight() requires a binary cluster");
}

ClusterRef RCForest::parent(ClusterRef c) const {
  switch (c.tag) {
    case ClusterRef::Tag::LeafVertex: return ClusterRef::composite(c.index);
    case ClusterRef::Tag::LeafEdge: return sedges_[c.index].parent;
    case ClusterRef::Tag::Composite: return comp_[c.index].parent;
    default: return ClusterRef::none();
  }
}

// ---------------------------------------------------------------------------
// Diagnostics

std::size_t RCForest::num_rounds() const {
  std::size_t r = 0;
  for (SiteId s = 0; s < owner_.size(); ++s)
    if (alive_[s]) r = std::max<std::size_t>(r, death_[s] + 1);
  return r;
}

std::size_t RCForest::height() const {
  // depth[s]: nodes from composite s up to and including its root.
  std::vector<std::uint32_t> depth(owner_.size(), 0);
  std::vector<SiteId> order;
  for (SiteId s = 0; s < owner_.size(); ++s)
    if (alive_[s]) order.push_back(s);
  std::sort(order.begin(), order.end(),
            [&](SiteId a, SiteId b) { return comp_[a].round > comp_[b].round; });
  std::size_t h = 0;
  for (SiteId s : order) {
    const ClusterRef p = comp_[s].parent;
    depth[s] = p.tag == ClusterRef::Tag::Composite ? depth[p.index] + 1 : 1;
    h = std::max<std::size_t>(h, depth[s] + 1);  // + the leaf-vertex child
  }
  for (const SiteEdge& e : sedges_)
    if (e.alive && e.parent.tag == ClusterRef::Tag::Composite)
      h = std::max<std::size_t>(h, depth[e.parent.index] + 1);
  return h;
}

std::uint64_t RCForest::fingerprint() const {
  std::uint64_t h = mix64(n_);
  auto feed = [&](std::uint64_t x) { h = mix64(h ^ x); };
  for (SiteId s = 0; s < owner_.size(); ++s) {
    if (!alive_[s]) continue;
    const Composite& c = comp_[s];
    feed(s);
    feed(owner_[s]);
    feed(static_cast<std::uint64_t>(c.action));
    feed(c.round);
    feed((static_cast<std::uint64_t>(c.parent.tag) << 32) | c.parent.index);
    for (std::uint8_t i = 0; i < c.nbin; ++i) {
      feed(c.bin[i].nbr);
      feed((static_cast<std::uint64_t>(c.bin[i].cl.tag) << 32) | c.bin[i].cl.index);
    }
    for (std::uint8_t i = 0; i < c.nun; ++i) feed(c.unary[i]);
    if (c.pathmax) feed(c.pathmax->edge);
  }
  return h;
}

void RCForest::reset_contraction() {
  for (SiteId s = 0; s < owner_.size(); ++s) {
    if (!alive_[s]) continue;
    rounds_[s].assign(1, RoundState{});
    death_[s] = kPending;
    action_[s] = Action::None;
    comp_[s] = Composite{};
    touch(s);
  }
  for (std::uint32_t slot = 0; slot < sedges_.size(); ++slot) {
    SiteEdge& e = sedges_[slot];
    if (!e.alive) continue;
    e.parent = ClusterRef::none();
    for (auto [x, y] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}}) {
      RoundState& st = rounds_[x][0];
      st.adj[st.deg++] = Adj{y, ClusterRef::leaf_edge(slot)};
      st.canonicalize();
    }
  }
  propagate();
}

bool RCForest::matches_fresh_contraction() const {
  RCForest fresh(*this);
  fresh.reset_contraction();
  for (SiteId s = 0; s < owner_.size(); ++s) {
    if (!alive_[s]) continue;
    if (rounds_[s] != fresh.rounds_[s] || death_[s] != fresh.death_[s] ||
        action_[s] != fresh.action_[s] || !(comp_[s] == fresh.comp_[s]))
      return false;
  }
  for (std::size_t slot = 0; slot < sedges_.size(); ++slot)
    if (sedges_[slot].alive && sedges_[slot].parent != fresh.sedges_[slot].parent) return false;
  return true;
}

std::vector<std::string> RCForest::check_invariants() const {
  std::vector<std::string> errors;
  auto fail = [&](std::string msg) {
    if (errors.size() < 50) errors.push_back(std::move(msg));
  };
  const std::size_t cap = owner_.size();

  // Site forest shape.
  std::vector<std::vector<std::pair<SiteId, std::uint32_t>>> adj(cap);
  for (std::uint32_t slot = 0; slot < sedges_.size(); ++slot) {
    const SiteEdge& e = sedges_[slot];
    if (!e.alive) continue;
    if (!alive_[e.a] || !alive_[e.b]) fail("edge slot " + std::to_string(slot) + " on dead site");
    const bool same_owner = owner_[e.a] == owner_[e.b];
    if (same_owner == e.key.has_value())
      fail("edge slot " + std::to_string(slot) + ": DUMMY/real mismatch");
    adj[e.a].push_back({e.b, slot});
    adj[e.b].push_back({e.a, slot});
  }
  for (SiteId s = 0; s < cap; ++s)
    if (alive_[s] && adj[s].size() > 3) fail("site " + std::to_string(s) + " has degree > 3");

  // Parent/child consistency.
  std::vector<int> comp_refs(cap, 0);
  std::vector<int> edge_refs(sedges_.size(), 0);
  for (SiteId s = 0; s < cap; ++s) {
    if (!alive_[s]) continue;
    const Composite& c = comp_[s];
    if (c.action == Action::None) {
      fail("site " + std::to_string(s) + " never contracted");
      continue;
    }
    if (rounds_[s].size() != death_[s] + 1u || c.round != death_[s])
      fail("site " + std::to_string(s) + " round bookkeeping");
    const std::size_t expect = c.action == Action::Finalize ? 0 : c.action == Action::Rake ? 1 : 2;
    if (c.nbin != expect) fail("site " + std::to_string(s) + " boundary count does not match kind");
    for (ClusterRef ch : children(ClusterRef::composite(s))) {
      if (ch.tag == ClusterRef::Tag::LeafVertex) {
        if (ch.index != s) fail("composite " + std::to_string(s) + " has foreign vertex leaf");
        continue;
      }
      if (parent(ch) != ClusterRef::composite(s))
        fail("child of composite " + std::to_string(s) + " has wrong parent");
      if (ch.tag == ClusterRef::Tag::LeafEdge)
        ++edge_refs[ch.index];
      else
        ++comp_refs[ch.index];
    }
  }
  for (SiteId s = 0; s < cap; ++s) {
    if (!alive_[s] || comp_[s].action == Action::None) continue;
    const bool root = comp_[s].parent.is_none();
    if (root != (comp_[s].action == Action::Finalize)) fail("root/nullary mismatch at " + std::to_string(s));
    if (comp_refs[s] != (root ? 0 : 1))
      fail("composite " + std::to_string(s) + " appears " + std::to_string(comp_refs[s]) + " times");
  }
  for (std::uint32_t slot = 0; slot < sedges_.size(); ++slot)
    if (sedges_[slot].alive && edge_refs[slot] != 1)
      fail("edge slot " + std::to_string(slot) + " appears " + std::to_string(edge_refs[slot]) + " times");
  if (!errors.empty()) return errors;

  // Leaf sets, true boundaries and boundary algebra, bottom-up by round.
  std::vector<SiteId> order;
  for (SiteId s = 0; s < cap; ++s)
    if (alive_[s]) order.push_back(s);
  std::sort(order.begin(), order.end(),
            [&](SiteId a, SiteId b) { return comp_[a].round < comp_[b].round; });
  std::vector<std::set<SiteId>> sites(cap);
  std::vector<std::set<std::uint32_t>> slots(cap);
  for (SiteId s : order) {
    const ClusterRef self = ClusterRef::composite(s);
    sites[s].insert(s);
    std::size_t expect_sites = 1, expect_slots = 0;
    std::set<SiteId> child_boundary;
    for (ClusterRef ch : children(self)) {
      for (SiteId b : boundary(ch)) child_boundary.insert(b);
      if (ch.tag == ClusterRef::Tag::LeafEdge) {
        slots[s].insert(ch.index);
        ++expect_slots;
      } else if (ch.tag == ClusterRef::Tag::Composite) {
        sites[s].insert(sites[ch.index].begin(), sites[ch.index].end());
        slots[s].insert(slots[ch.index].begin(), slots[ch.index].end());
        expect_sites += sites[ch.index].size();
        expect_slots += slots[ch.index].size();
      }
    }
    if (sites[s].size() != expect_sites || slots[s].size() != expect_slots)
      fail("composite " + std::to_string(s) + " children are not disjoint");
    std::set<SiteId> actual;
    for (std::uint32_t e : slots[s]) {
      if (!sites[s].count(sedges_[e].a)) actual.insert(sedges_[e].a);
      if (!sites[s].count(sedges_[e].b)) actual.insert(sedges_[e].b);
    }
    const BoundaryList bl = boundary(self);
    std::set<SiteId> declared(bl.begin(), bl.end());
    if (actual != declared) fail("composite " + std::to_string(s) + " boundary differs from leaf set");
    std::set<SiteId> allowed = declared;
    allowed.insert(s);
    for (SiteId b : child_boundary)
      if (!allowed.count(b)) fail("composite " + std::to_string(s) + " child boundary escapes");
    for (SiteId b : declared)
      if (!child_boundary.count(b)) fail("composite " + std::to_string(s) + " boundary not from children");
  }

  // Path maxima of binary composites against a walk in the site forest.
  auto brute = [&](SiteId from, SiteId to) {
    std::vector<std::uint32_t> via(cap, UINT32_MAX);
    std::vector<SiteId> prev(cap, kNoSite), stack{from};
    prev[from] = from;
    while (!stack.empty()) {
      SiteId x = stack.back();
      stack.pop_back();
      for (auto [y, slot] : adj[x]) {
        if (prev[y] != kNoSite) continue;
        prev[y] = x;
        via[y] = slot;
        stack.push_back(y);
      }
    }
    std::optional<WeightKey> best;
    for (SiteId x = to; x != from; x = prev[x]) best = max_key(best, sedges_[via[x]].key);
    return best;
  };
  for (SiteId s : order) {
    const Composite& c = comp_[s];
    if (c.action != Action::Compress) continue;
    if (brute(c.bin[0].nbr, c.bin[1].nbr) != c.pathmax)
      fail("composite " + std::to_string(s) + " pathmax is wrong");
  }

  // Roots are in bijection with components.
  std::vector<int> comp_id(cap, -1);
  int ncomp = 0;
  for (SiteId s = 0; s < cap; ++s) {
    if (!alive_[s] || comp_id[s] != -1) continue;
    std::vector<SiteId> stack{s};
    comp_id[s] = ncomp;
    std::size_t count = 0;
    while (!stack.empty()) {
      SiteId x = stack.back();
      stack.pop_back();
      ++count;
      for (auto [y, slot] : adj[x])
        if (comp_id[y] == -1) {
          comp_id[y] = ncomp;
          stack.push_back(y);
        }
    }
    const SiteId r = root_site(s);
    if (sites[r].size() != count || !sites[r].count(s))
      fail("root of site " + std::to_string(s) + " does not cover its component");
    ++ncomp;
  }
  if (roots().size() != static_cast<std::size_t>(ncomp)) fail("root count differs from component count");
  return errors;
}

}  // namespace bmsf
