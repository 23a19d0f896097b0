#include "bmsf/oracle.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>

namespace bmsf::oracle {

namespace {

struct UnionFind {
  std::vector<std::size_t> up;
  explicit UnionFind(std::size_t n) : up(n) {
    for (std::size_t i = 0; i < n; ++i) up[i] = i;
  }
  std::size_t find(std::size_t x) {
    std::size_t r = x;
    while (up[r] != r) r = up[r];
    while (up[x] != r) {
      std::size_t next = up[x];
      up[x] = r;
      x = next;
    }
    return r;
  }
  bool merge(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    up[b] = a;
    return true;
  }
};

std::vector<std::vector<std::pair<VertexId, std::size_t>>> adjacency(const Snapshot& g) {
  std::vector<std::vector<std::pair<VertexId, std::size_t>>> adj(g.n);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    adj[g.edges[i].u].push_back({g.edges[i].v, i});
    adj[g.edges[i].v].push_back({g.edges[i].u, i});
  }
  return adj;
}

std::vector<std::size_t> msf_indices(const Snapshot& g, KeyMode mode) {
  std::vector<std::size_t> order(g.edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto key = [&](std::size_t i) {
    const StreamEdge& e = g.edges[i];
    const std::int64_t w = mode == KeyMode::Weight ? e.w : -static_cast<std::int64_t>(e.toa);
    return std::pair<std::int64_t, std::uint64_t>(w, e.id);
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  UnionFind uf(g.n);
  std::vector<std::size_t> out;
  for (std::size_t i : order)
    if (g.edges[i].u != g.edges[i].v && uf.merge(g.edges[i].u, g.edges[i].v)) out.push_back(i);
  return out;
}

}  // namespace

std::vector<EdgeId> kruskal_msf(const Snapshot& g, KeyMode mode) {
  std::vector<EdgeId> ids;
  for (std::size_t i : msf_indices(g, mode)) ids.push_back(g.edges[i].id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::optional<WeightKey> path_max_naive(std::size_t n, std::span<const TreeEdge> tree, VertexId u,
                                        VertexId v) {
  if (u == v) return std::nullopt;
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < tree.size(); ++i) {
    adj[tree[i].u].push_back(i);
    adj[tree[i].v].push_back(i);
  }
  std::vector<std::ptrdiff_t> via(n, -1);
  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack{u};
  seen[u] = 1;
  while (!stack.empty()) {
    VertexId x = stack.back();
    stack.pop_back();
    for (std::size_t i : adj[x]) {
      VertexId y = tree[i].u == x ? tree[i].v : tree[i].u;
      if (seen[y]) continue;
      seen[y] = 1;
      via[y] = static_cast<std::ptrdiff_t>(i);
      stack.push_back(y);
    }
  }
  if (!seen[v]) return std::nullopt;
  std::optional<WeightKey> best;
  for (VertexId x = v; x != u;) {
    const TreeEdge& e = tree[static_cast<std::size_t>(via[x])];
    if (!best || *best < e.key) best = e.key;
    x = e.u == x ? e.v : e.u;
  }
  return best;
}

bool connected_naive(const Snapshot& g, VertexId u, VertexId v) {
  UnionFind uf(g.n);
  for (const StreamEdge& e : g.edges) uf.merge(e.u, e.v);
  return uf.find(u) == uf.find(v);
}

std::vector<VertexId> component_labels(const Snapshot& g) {
  UnionFind uf(g.n);
  for (const StreamEdge& e : g.edges) uf.merge(e.u, e.v);
  std::vector<VertexId> label(g.n, 0);
  std::vector<VertexId> smallest(g.n, static_cast<VertexId>(g.n));
  for (VertexId v = 0; v < g.n; ++v) smallest[uf.find(v)] = std::min(smallest[uf.find(v)], v);
  for (VertexId v = 0; v < g.n; ++v) label[v] = smallest[uf.find(v)];
  return label;
}

std::size_t components_naive(const Snapshot& g) {
  UnionFind uf(g.n);
  std::size_t count = g.n;
  for (const StreamEdge& e : g.edges)
    if (uf.merge(e.u, e.v)) --count;
  return count;
}

bool bipartite_naive(const Snapshot& g) {
  auto adj = adjacency(g);
  std::vector<int> color(g.n, -1);
  for (VertexId s = 0; s < g.n; ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::queue<VertexId> q;
    q.push(s);
    while (!q.empty()) {
      VertexId x = q.front();
      q.pop();
      for (auto [y, i] : adj[x]) {
        if (color[y] == -1) {
          color[y] = 1 - color[x];
          q.push(y);
        } else if (color[y] == color[x]) {
          return false;
        }
      }
    }
  }
  return true;
}

bool has_cycle_naive(const Snapshot& g) {
  UnionFind uf(g.n);
  for (const StreamEdge& e : g.edges)
    if (!uf.merge(e.u, e.v)) return true;
  return false;
}

std::vector<std::pair<std::uint32_t, std::size_t>> cut_enumerate(const Snapshot& g) {
  if (g.n > 16) throw std::length_error("cut_enumerate: n > 16");
  std::vector<std::pair<std::uint32_t, std::size_t>> out;
  if (g.n < 2) return out;
  const std::uint32_t full = (1u << g.n) - 1;
  for (std::uint32_t s = 1; s < full; s += 2) {
    std::size_t value = 0;
    for (const StreamEdge& e : g.edges)
      if (((s >> e.u) & 1u) != ((s >> e.v) & 1u)) ++value;
    out.push_back({s, value});
  }
  return out;
}

std::size_t maxflow_naive(const Snapshot& g, VertexId u, VertexId v) {
  if (g.edges.size() > 4096) throw std::length_error("maxflow_naive: too many edges");
  if (u == v) throw std::invalid_argument("maxflow_naive: u == v");
  // Each undirected edge is a pair of opposite arcs with capacity 1.
  const std::size_t m = g.edges.size();
  std::vector<int> flow(2 * m, 0);
  std::vector<std::vector<std::size_t>> out(g.n);
  auto tail = [&](std::size_t arc) { return arc % 2 == 0 ? g.edges[arc / 2].u : g.edges[arc / 2].v; };
  auto head = [&](std::size_t arc) { return arc % 2 == 0 ? g.edges[arc / 2].v : g.edges[arc / 2].u; };
  for (std::size_t a = 0; a < 2 * m; ++a) out[tail(a)].push_back(a);
  std::size_t total = 0;
  for (;;) {
    std::vector<std::ptrdiff_t> via(g.n, -1);
    std::vector<char> seen(g.n, 0);
    std::queue<VertexId> q;
    q.push(u);
    seen[u] = 1;
    while (!q.empty() && !seen[v]) {
      VertexId x = q.front();
      q.pop();
      for (std::size_t a : out[x]) {
        // Residual of arc a: 1 - flow[a] + flow[a ^ 1].
        if (1 - flow[a] + flow[a ^ 1] <= 0) continue;
        VertexId y = head(a);
        if (seen[y]) continue;
        seen[y] = 1;
        via[y] = static_cast<std::ptrdiff_t>(a);
        q.push(y);
      }
    }
    if (!seen[v]) break;
    for (VertexId x = v; x != u;) {
      std::size_t a = static_cast<std::size_t>(via[x]);
      if (flow[a ^ 1] > 0)
        --flow[a ^ 1];
      else
        ++flow[a];
      x = tail(a);
    }
    ++total;
  }
  return total;
}

std::int64_t msf_weight_exact(const Snapshot& g) {
  std::int64_t sum = 0;
  for (std::size_t i : msf_indices(g, KeyMode::Weight)) sum += g.edges[i].w;
  return sum;
}

void WindowLog::insert(std::span<const RawEdge> batch) {
  for (const RawEdge& e : batch) {
    if (e.u >= n_ || e.v >= n_) throw std::invalid_argument("WindowLog: vertex out of range");
  }
  for (const RawEdge& e : batch) {
    const std::uint64_t t = next_++;
    if (e.u != e.v) all_.push_back({e.u, e.v, e.w, t, t});
  }
}

void WindowLog::expire(std::uint64_t delta) {
  threshold_ = std::min(next_, threshold_ + delta);
}

Snapshot WindowLog::snapshot() const {
  Snapshot s{n_, {}};
  for (const StreamEdge& e : all_)
    if (e.toa >= threshold_) s.edges.push_back(e);
  return s;
}

}  // namespace bmsf::oracle
