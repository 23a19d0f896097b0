#include "bmsf/sliding_window.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

namespace bmsf {

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt, std::uint64_t index) {
  return hash_combine(seed, salt, index);
}

std::vector<EdgeId> ids_of(const std::vector<StreamEdge>& es) {
  std::vector<EdgeId> out;
  out.reserve(es.size());
  for (const StreamEdge& e : es) out.push_back(e.id);
  return out;
}

}  // namespace

Toa WindowCore::expire(std::uint64_t delta) {
  const Toa next = next_toa();
  threshold_ = delta >= next - threshold_ ? next : threshold_ + delta;
  return threshold_;
}

void OrderedEdgeSet::insert(const StreamEdge& e) {
  if (!by_id_.emplace(e.id, e).second) throw std::invalid_argument("ordered edge set: duplicate id");
  order_.insert({e.toa, e.id});
}

void OrderedEdgeSet::erase(EdgeId id) {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw std::invalid_argument("ordered edge set: absent id");
  order_.erase({it->second.toa, id});
  by_id_.erase(it);
}

std::vector<StreamEdge> OrderedEdgeSet::split_before(Toa threshold) {
  std::vector<StreamEdge> out;
  const auto end = order_.lower_bound({threshold, 0});
  for (auto it = order_.begin(); it != end; ++it) {
    auto node = by_id_.extract(it->second);
    out.push_back(node.mapped());
  }
  order_.erase(order_.begin(), end);
  return out;
}

std::vector<StreamEdge> OrderedEdgeSet::edges() const {
  std::vector<StreamEdge> out;
  out.reserve(by_id_.size());
  for (const auto& [id, e] : by_id_) out.push_back(e);
  std::sort(out.begin(), out.end(), [](const StreamEdge& a, const StreamEdge& b) { return a.id < b.id; });
  return out;
}

void LazyWindowForest::insert(std::span<const StreamEdge> batch) {
  std::vector<KeyedEdge> keyed;
  keyed.reserve(batch.size());
  for (const StreamEdge& e : batch) keyed.push_back(keyed_by_arrival(e));
  msf_.batch_insert(keyed);
}

bool LazyWindowForest::connected(VertexId u, VertexId v, Toa threshold) const {
  if (u == v) return true;
  const auto oldest = msf_.heaviest_on_path(u, v);
  return oldest && static_cast<Toa>(-oldest->weight) >= threshold;
}

EagerWindowForest::Update EagerWindowForest::insert(std::span<const StreamEdge> batch) {
  std::vector<KeyedEdge> keyed;
  keyed.reserve(batch.size());
  std::unordered_map<EdgeId, std::size_t> index;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    keyed.push_back(keyed_by_arrival(batch[i]));
    index.emplace(batch[i].id, i);
  }
  const InsertResult r = msf_.batch_insert(keyed);
  Update up;
  for (EdgeId id : r.evicted) {
    up.evicted.push_back(live_.at(id));
    live_.erase(id);
  }
  std::vector<char> taken(batch.size(), 0);
  for (EdgeId id : r.added) {
    const std::size_t i = index.at(id);
    taken[i] = 1;
    live_.insert(batch[i]);
    up.added.push_back(batch[i]);
  }
  for (std::size_t i = 0; i < batch.size(); ++i)
    if (!taken[i]) up.rejected.push_back(batch[i]);
  return up;
}

std::vector<StreamEdge> EagerWindowForest::expire_before(Toa threshold) {
  std::vector<StreamEdge> expired = live_.split_before(threshold);
  msf_.batch_delete(ids_of(expired));
  return expired;
}

CertificateCascade::CertificateCascade(std::size_t n, std::size_t k, std::uint64_t seed)
    : n_(n), k_(k), seed_(seed) {
  if (k == 0) throw std::invalid_argument("certificate: k must be at least 1");
}

void CertificateCascade::insert(std::span<const StreamEdge> batch) {
  std::vector<StreamEdge> carry(batch.begin(), batch.end());
  for (std::size_t i = 0; i < k_ && !carry.empty(); ++i) {
    if (forests_.size() == i)
      forests_.push_back(std::make_unique<EagerWindowForest>(n_, derive_seed(seed_, 0x6b63, i)));
    EagerWindowForest::Update up = forests_[i]->insert(carry);
    carry = std::move(up.evicted);
    carry.insert(carry.end(), up.rejected.begin(), up.rejected.end());
  }
}

void CertificateCascade::expire_before(Toa threshold) {
  for (auto& f : forests_) f->expire_before(threshold);
}

std::vector<StreamEdge> CertificateCascade::certificate() const {
  std::vector<StreamEdge> out;
  for (const auto& f : forests_) {
    auto es = f->edges();
    out.insert(out.end(), es.begin(), es.end());
  }
  std::sort(out.begin(), out.end(), [](const StreamEdge& a, const StreamEdge& b) { return a.id < b.id; });
  return out;
}

bool CertificateCascade::contains(EdgeId id) const {
  return std::any_of(forests_.begin(), forests_.end(), [&](const auto& f) { return f->contains(id); });
}

std::size_t CertificateCascade::forest_size(std::size_t i) const {
  if (i == 0 || i > k_) throw std::out_of_range("certificate: forest index");
  return i <= forests_.size() ? forests_[i - 1]->size() : 0;
}

const EagerWindowForest* CertificateCascade::forest(std::size_t i) const {
  if (i == 0 || i > k_) throw std::out_of_range("certificate: forest index");
  return i <= forests_.size() ? forests_[i - 1].get() : nullptr;
}

void SwConn::insert(std::span<const RawEdge> batch) { forest_.insert(core_.stamp(batch)); }

bool SwConn::is_connected(VertexId u, VertexId v) const {
  if (u >= core_.num_vertices() || v >= core_.num_vertices())
    throw std::invalid_argument("vertex out of range");
  return forest_.connected(u, v, core_.threshold());
}

void SwConnEager::insert(std::span<const RawEdge> batch) { forest_.insert(core_.stamp(batch)); }

void SwConnEager::expire(std::uint64_t delta) { forest_.expire_before(core_.expire(delta)); }

bool SwConnEager::is_connected(VertexId u, VertexId v) const {
  if (u >= core_.num_vertices() || v >= core_.num_vertices())
    throw std::invalid_argument("vertex out of range");
  return forest_.connected(u, v);
}

SwBipartite::SwBipartite(std::size_t n, std::uint64_t seed)
    : core_(n), graph_(n, derive_seed(seed, 0x6270, 0)), cover_(2 * n, derive_seed(seed, 0x6270, 1)) {}

void SwBipartite::insert(std::span<const RawEdge> batch) {
  const std::vector<StreamEdge> es = core_.stamp(batch);
  const auto n = static_cast<VertexId>(core_.num_vertices());
  std::vector<StreamEdge> doubled;
  doubled.reserve(2 * es.size());
  for (const StreamEdge& e : es) {
    doubled.push_back({e.u, e.v + n, e.w, e.toa, 2 * e.id});
    doubled.push_back({e.u + n, e.v, e.w, e.toa, 2 * e.id + 1});
  }
  graph_.insert(es);
  cover_.insert(doubled);
}

void SwBipartite::expire(std::uint64_t delta) {
  const Toa t = core_.expire(delta);
  graph_.expire_before(t);
  cover_.expire_before(t);
}

SwApproxMsf::SwApproxMsf(std::size_t n, double epsilon, Weight max_weight, std::uint64_t seed)
    : core_(n), epsilon_(epsilon), max_weight_(max_weight) {
  if (!(epsilon > 0)) throw std::invalid_argument("amsf: epsilon must be positive");
  if (max_weight < 1) throw std::invalid_argument("amsf: max weight must be at least 1");
  thresholds_.push_back(1.0);
  while (thresholds_.back() < static_cast<double>(max_weight))
    thresholds_.push_back(thresholds_.back() * (1.0 + epsilon));
  for (std::size_t i = 0; i < thresholds_.size(); ++i)
    levels_.push_back(std::make_unique<EagerWindowForest>(n, derive_seed(seed, 0x616d, i)));
}

std::vector<std::size_t> SwApproxMsf::insert(std::span<const RawEdge> batch) {
  std::vector<std::size_t> rejected;
  for (std::size_t i = 0; i < batch.size(); ++i)
    if (batch[i].w < 1 || batch[i].w > max_weight_) rejected.push_back(i);
  const std::vector<StreamEdge> es = core_.stamp(batch);
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    std::vector<StreamEdge> part;
    for (const StreamEdge& e : es)
      if (e.w >= 1 && e.w <= max_weight_ && static_cast<double>(e.w) <= thresholds_[i]) part.push_back(e);
    if (!part.empty()) levels_[i]->insert(part);
  }
  return rejected;
}

void SwApproxMsf::expire(std::uint64_t delta) {
  const Toa t = core_.expire(delta);
  for (auto& f : levels_) f->expire_before(t);
}

double SwApproxMsf::weight() const {
  const double n = static_cast<double>(core_.num_vertices());
  double total = n - static_cast<double>(levels_[0]->components());
  for (std::size_t i = 1; i < levels_.size(); ++i) {
    const double drop = static_cast<double>(levels_[i - 1]->components()) -
                        static_cast<double>(levels_[i]->components());
    total += drop * thresholds_[i];
  }
  return total;
}

void SwKCert::insert(std::span<const RawEdge> batch) { cascade_.insert(core_.stamp(batch)); }

void SwKCert::expire(std::uint64_t delta) { cascade_.expire_before(core_.expire(delta)); }

SwSparsifier::SwSparsifier(std::size_t n, const SparsifierParams& params, std::uint64_t seed)
    : core_(n), params_(params), seed_(seed) {
  if (!(params.epsilon > 0)) throw std::invalid_argument("sparsifier: epsilon must be positive");
  if (n == 0) throw std::invalid_argument("sparsifier: n must be positive");
  const auto auto_log = static_cast<std::size_t>(std::max(1.0, std::ceil(std::log2(static_cast<double>(n)))));
  log2n_ = std::max(1.0, std::log2(static_cast<double>(n)));
  reps_ = params.repetitions ? params.repetitions : auto_log;
  levels_ = params.levels ? params.levels : auto_log;
  k_ = params.k ? params.k
                : static_cast<std::size_t>(std::ceil(params.c_k * std::pow(log2n_, 3) /
                                                     (params.epsilon * params.epsilon)));
  if (k_ == 0) k_ = 1;
  for (std::size_t i = 1; i <= levels_; ++i)
    for (std::size_t j = 0; j < reps_; ++j)
      ladder_.push_back(std::make_unique<LazyWindowForest>(n, derive_seed(seed, 0x6c61, ladder_.size())));
  for (std::size_t i = 0; i <= levels_; ++i)
    q_.push_back(std::make_unique<CertificateCascade>(n, k_, derive_seed(seed, 0x7163, i)));
}

std::size_t SwSparsifier::sample_level(EdgeId id, std::size_t j) const {
  const std::uint64_t h = hash_combine(seed_, id, j);
  return std::min<std::size_t>(static_cast<std::size_t>(std::countr_one(h)), levels_);
}

void SwSparsifier::insert(std::span<const RawEdge> batch) {
  const std::vector<StreamEdge> es = core_.stamp(batch);
  if (es.empty()) return;
  for (std::size_t j = 0; j < reps_; ++j) {
    std::vector<std::size_t> level(es.size());
    for (std::size_t e = 0; e < es.size(); ++e) level[e] = sample_level(es[e].id, j);
    for (std::size_t i = 1; i <= levels_; ++i) {
      std::vector<StreamEdge> part;
      for (std::size_t e = 0; e < es.size(); ++e)
        if (level[e] >= i) part.push_back(es[e]);
      if (part.empty()) break;
      ladder_[(i - 1) * reps_ + j]->insert(part);
    }
  }
  std::vector<std::size_t> level(es.size());
  for (std::size_t e = 0; e < es.size(); ++e) level[e] = sample_level(es[e].id, reps_);
  for (std::size_t i = 0; i <= levels_; ++i) {
    std::vector<StreamEdge> part;
    for (std::size_t e = 0; e < es.size(); ++e)
      if (level[e] >= i) part.push_back(es[e]);
    if (part.empty()) break;
    q_[i]->insert(part);
  }
}

void SwSparsifier::expire(std::uint64_t delta) {
  const Toa t = core_.expire(delta);
  for (auto& q : q_) q->expire_before(t);
}

std::size_t SwSparsifier::level_of(VertexId u, VertexId v) const {
  for (std::size_t i = 1; i <= levels_; ++i)
    for (std::size_t j = 0; j < reps_; ++j)
      if (!ladder_[(i - 1) * reps_ + j]->connected(u, v, core_.threshold())) return i - 1;
  return levels_;
}

double SwSparsifier::p_estimate(std::size_t level) const {
  const double p = params_.c_p * std::ldexp(1.0, -static_cast<int>(level)) * log2n_ * log2n_ /
                   (params_.epsilon * params_.epsilon);
  return std::min(1.0, p);
}

std::vector<SparsifierEdge> SwSparsifier::sparsify() const {
  std::map<EdgeId, StreamEdge> candidates;
  for (const auto& q : q_)
    for (const StreamEdge& e : q->certificate()) candidates.emplace(e.id, e);
  std::vector<SparsifierEdge> out;
  for (const auto& [id, e] : candidates) {
    const double p = p_estimate(level_of(e.u, e.v));
    // Largest beta <= L with 2^-beta >= p.
    std::size_t beta = 0;
    while (beta < levels_ && std::ldexp(p, static_cast<int>(beta + 1)) <= 1.0) ++beta;
    if (!q_[beta]->contains(id)) continue;
    out.push_back({std::min(e.u, e.v), std::max(e.u, e.v), id, std::uint64_t{1} << beta, 1});
  }
  std::sort(out.begin(), out.end(), [](const SparsifierEdge& a, const SparsifierEdge& b) {
    if (a.u != b.u) return a.u < b.u;
    if (a.v != b.v) return a.v < b.v;
    return a.id < b.id;
  });
  return out;
}

}  // namespace bmsf
