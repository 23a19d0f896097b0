#ifndef BMSF_SLIDING_WINDOW_HPP
#define BMSF_SLIDING_WINDOW_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "bmsf/batch_msf.hpp"
#include "bmsf/graph_core.hpp"

namespace bmsf {

// Arrival counter and window threshold. Every raw edge takes one arrival
// slot; expire(d) moves the threshold past the d oldest unexpired slots.
class WindowCore {
 public:
  explicit WindowCore(std::size_t n) : stamper_(n) {}

  std::vector<StreamEdge> stamp(std::span<const RawEdge> batch) { return stamper_.normalize_batch(batch); }
  void skip(std::uint64_t count) { stamper_.skip(count); }
  // Returns the new threshold.
  Toa expire(std::uint64_t delta);

  Toa threshold() const { return threshold_; }
  Toa next_toa() const { return stamper_.next_toa(); }
  std::size_t num_vertices() const { return stamper_.num_vertices(); }
  bool live(const StreamEdge& e) const { return e.toa >= threshold_; }

 private:
  EdgeStamper stamper_;
  Toa threshold_ = 0;
};

// Forest edges ordered by arrival, split by threshold on expiry.
class OrderedEdgeSet {
 public:
  void insert(const StreamEdge& e);
  void erase(EdgeId id);
  // Removes and returns every edge with toa < threshold, oldest first.
  std::vector<StreamEdge> split_before(Toa threshold);

  bool contains(EdgeId id) const { return by_id_.count(id) != 0; }
  const StreamEdge& at(EdgeId id) const { return by_id_.at(id); }
  std::size_t size() const { return by_id_.size(); }
  bool empty() const { return by_id_.empty(); }
  // Sorted by edge id.
  std::vector<StreamEdge> edges() const;

 private:
  std::set<std::pair<Toa, EdgeId>> order_;
  std::unordered_map<EdgeId, StreamEdge> by_id_;
};

// Window MSF that keeps expired edges and answers connectivity through the
// age of the oldest edge on the forest path.
class LazyWindowForest {
 public:
  LazyWindowForest(std::size_t n, std::uint64_t seed) : msf_(n, seed) {}

  void insert(std::span<const StreamEdge> batch);
  bool connected(VertexId u, VertexId v, Toa threshold) const;
  const MSForest& msf() const { return msf_; }

 private:
  MSForest msf_;
};

// Window MSF holding only unexpired edges.
class EagerWindowForest {
 public:
  struct Update {
    std::vector<StreamEdge> added;
    std::vector<StreamEdge> evicted;
    std::vector<StreamEdge> rejected;  // batch edges not taken
  };

  EagerWindowForest(std::size_t n, std::uint64_t seed) : msf_(n, seed) {}

  Update insert(std::span<const StreamEdge> batch);
  // Returns the expired forest edges that were removed.
  std::vector<StreamEdge> expire_before(Toa threshold);

  std::size_t components() const { return msf_.components(); }
  std::size_t size() const { return live_.size(); }
  bool connected(VertexId u, VertexId v) const { return msf_.connected(u, v); }
  bool contains(EdgeId id) const { return live_.contains(id); }
  std::vector<StreamEdge> edges() const { return live_.edges(); }
  const MSForest& msf() const { return msf_; }

 private:
  MSForest msf_;
  OrderedEdgeSet live_;
};

// k forests F_1..F_k; each passes its evicted and rejected edges on to the
// next. Forests are created on first use.
class CertificateCascade {
 public:
  CertificateCascade(std::size_t n, std::size_t k, std::uint64_t seed);

  void insert(std::span<const StreamEdge> batch);
  void expire_before(Toa threshold);

  // Union of all forests, sorted by edge id.
  std::vector<StreamEdge> certificate() const;
  bool contains(EdgeId id) const;
  std::size_t k() const { return k_; }
  // Edge count of F_i, 1 <= i <= k.
  std::size_t forest_size(std::size_t i) const;
  std::size_t forests_in_use() const { return forests_.size(); }
  const EagerWindowForest* forest(std::size_t i) const;

 private:
  std::size_t n_;
  std::size_t k_;
  std::uint64_t seed_;
  std::vector<std::unique_ptr<EagerWindowForest>> forests_;
};

// Connectivity over the window, answered lazily.
class SwConn {
 public:
  explicit SwConn(std::size_t n, std::uint64_t seed = 0) : core_(n), forest_(n, seed) {}

  void insert(std::span<const RawEdge> batch);
  void expire(std::uint64_t delta) { core_.expire(delta); }
  bool is_connected(VertexId u, VertexId v) const;

  const WindowCore& core() const { return core_; }
  const MSForest& msf() const { return forest_.msf(); }

 private:
  WindowCore core_;
  LazyWindowForest forest_;
};

// Connectivity over the window with expired edges removed eagerly.
class SwConnEager {
 public:
  explicit SwConnEager(std::size_t n, std::uint64_t seed = 0) : core_(n), forest_(n, seed) {}

  void insert(std::span<const RawEdge> batch);
  void expire(std::uint64_t delta);
  bool is_connected(VertexId u, VertexId v) const;
  std::size_t num_components() const { return core_.num_vertices() - forest_.size(); }

  const WindowCore& core() const { return core_; }
  const EagerWindowForest& forest() const { return forest_; }

 private:
  WindowCore core_;
  EagerWindowForest forest_;
};

// Bipartiteness via the double cover: vertex v has copies v and v + n, and
// edge (u, v) with id x becomes (u, v + n) with id 2x and (u + n, v) with id
// 2x + 1. The graph is bipartite iff the cover has twice as many components.
class SwBipartite {
 public:
  explicit SwBipartite(std::size_t n, std::uint64_t seed = 0);

  void insert(std::span<const RawEdge> batch);
  void expire(std::uint64_t delta);
  bool is_bipartite() const { return cover_.components() == 2 * graph_.components(); }

  const WindowCore& core() const { return core_; }
  const EagerWindowForest& graph_forest() const { return graph_; }
  const EagerWindowForest& cover_forest() const { return cover_; }

 private:
  WindowCore core_;
  EagerWindowForest graph_;
  EagerWindowForest cover_;
};

// (1 + eps)-approximate MSF weight from component counts of the threshold
// graphs G_i = {e : w(e) <= (1 + eps)^i}.
class SwApproxMsf {
 public:
  SwApproxMsf(std::size_t n, double epsilon, Weight max_weight, std::uint64_t seed = 0);

  // Returns batch indices whose weight lies outside [1, max_weight]; those
  // edges still take an arrival slot but are not stored.
  std::vector<std::size_t> insert(std::span<const RawEdge> batch);
  void expire(std::uint64_t delta);
  double weight() const;

  std::size_t levels() const { return levels_.size(); }
  double threshold(std::size_t i) const { return thresholds_[i]; }
  const EagerWindowForest& level(std::size_t i) const { return *levels_[i]; }
  const WindowCore& core() const { return core_; }
  double epsilon() const { return epsilon_; }
  Weight max_weight() const { return max_weight_; }

 private:
  WindowCore core_;
  double epsilon_;
  Weight max_weight_;
  std::vector<double> thresholds_;
  std::vector<std::unique_ptr<EagerWindowForest>> levels_;
};

// k-certificate of the window: preserves every cut of value at most k.
class SwKCert {
 public:
  SwKCert(std::size_t n, std::size_t k, std::uint64_t seed = 0) : core_(n), cascade_(n, k, seed) {}

  void insert(std::span<const RawEdge> batch);
  void expire(std::uint64_t delta);
  std::vector<StreamEdge> make_cert() const { return cascade_.certificate(); }

  const WindowCore& core() const { return core_; }
  const CertificateCascade& cascade() const { return cascade_; }

 private:
  WindowCore core_;
  CertificateCascade cascade_;
};

// The window has a cycle iff the second forest of a 2-certificate is nonempty.
class SwCycleFree {
 public:
  explicit SwCycleFree(std::size_t n, std::uint64_t seed = 0) : cert_(n, 2, seed) {}

  void insert(std::span<const RawEdge> batch) { cert_.insert(batch); }
  void expire(std::uint64_t delta) { cert_.expire(delta); }
  bool has_cycle() const { return cert_.cascade().forest_size(2) != 0; }

  const WindowCore& core() const { return cert_.core(); }
  const SwKCert& cert() const { return cert_; }

 private:
  SwKCert cert_;
};

struct SparsifierParams {
  double epsilon = 0.5;
  std::size_t repetitions = 0;  // K; 0 selects ceil(log2 n)
  std::size_t levels = 0;       // L; 0 selects ceil(log2 n)
  double c_k = 1.0;             // k = ceil(c_k * eps^-2 * log2^3 n)
  std::size_t k = 0;            // overrides c_k when nonzero
  double c_p = 1.0;             // p = min(1, c_p * 2^-L(e) * eps^-2 * log2^2 n)
};

struct SparsifierEdge {
  VertexId u = 0;  // u < v
  VertexId v = 0;
  EdgeId id = 0;
  std::uint64_t num = 1;  // weight = num / den
  std::uint64_t den = 1;
};

// Cut sparsifier of the window. Each edge draws geometric levels once per
// repetition for the connectivity ladders G_i^(j), and once more for the
// certificate ladder Q_0 ⊇ Q_1 ⊇ ... ⊇ Q_L.
class SwSparsifier {
 public:
  SwSparsifier(std::size_t n, const SparsifierParams& params, std::uint64_t seed = 0);

  void insert(std::span<const RawEdge> batch);
  void expire(std::uint64_t delta);
  // Sorted by (u, v, id).
  std::vector<SparsifierEdge> sparsify() const;

  // Largest i <= L with u, v connected in G_i^(j) for every j.
  std::size_t level_of(VertexId u, VertexId v) const;
  // Sampling level of edge `id` in repetition j (j == K is the certificate
  // ladder), capped at L.
  std::size_t sample_level(EdgeId id, std::size_t j) const;
  double p_estimate(std::size_t level) const;

  std::size_t repetitions() const { return reps_; }
  std::size_t levels() const { return levels_; }
  std::size_t k() const { return k_; }
  const CertificateCascade& certificate(std::size_t i) const { return *q_[i]; }
  const WindowCore& core() const { return core_; }

 private:
  WindowCore core_;
  SparsifierParams params_;
  std::uint64_t seed_;
  std::size_t reps_;
  std::size_t levels_;
  std::size_t k_;
  double log2n_;
  // ladder_[(i - 1) * reps_ + j] is G_i^(j), 1 <= i <= L.
  std::vector<std::unique_ptr<LazyWindowForest>> ladder_;
  std::vector<std::unique_ptr<CertificateCascade>> q_;  // Q_0..Q_L
};

}  // namespace bmsf

#endif  // BMSF_SLIDING_WINDOW_HPP
