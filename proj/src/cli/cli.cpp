#include "bmsf/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "bmsf/batch_msf.hpp"
#include "bmsf/oracle.hpp"
#include "bmsf/sliding_window.hpp"

namespace bmsf::cli {

namespace {

const std::map<std::string, std::size_t>& query_arity() {
  static const std::map<std::string, std::size_t> arity{
      {"connected", 2}, {"components", 0}, {"bipartite", 0}, {"weight", 0}, {"cert", 0},
      {"hascycle", 0},  {"sparsify", 0},   {"msf", 0},       {"pathmax", 2}};
  return arity;
}

const std::map<std::string, std::vector<std::string>>& structure_queries() {
  static const std::map<std::string, std::vector<std::string>> queries{
      {"msf", {"connected", "components", "weight", "msf", "pathmax"}},
      {"conn", {"connected"}},
      {"conn-eager", {"connected", "components", "msf"}},
      {"bipartite", {"bipartite"}},
      {"amsf", {"weight"}},
      {"kcert", {"cert"}},
      {"cyclefree", {"hascycle"}},
      {"sparsifier", {"sparsify"}}};
  return queries;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

void print_edges(std::ostream& out, std::vector<StreamEdge> es) {
  std::sort(es.begin(), es.end(), [](const StreamEdge& a, const StreamEdge& b) { return a.id < b.id; });
  out << es.size() << '\n';
  for (const StreamEdge& e : es) out << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

std::vector<EdgeId> ids_of(const std::vector<StreamEdge>& es) {
  std::vector<EdgeId> out;
  for (const StreamEdge& e : es) out.push_back(e.id);
  std::sort(out.begin(), out.end());
  return out;
}

std::string diff_ids(const char* what, const std::vector<EdgeId>& got, const std::vector<EdgeId>& want) {
  std::ostringstream s;
  s << what << " differs: got " << got.size() << " edges, oracle " << want.size();
  std::vector<EdgeId> extra, missing;
  std::set_difference(got.begin(), got.end(), want.begin(), want.end(), std::back_inserter(extra));
  std::set_difference(want.begin(), want.end(), got.begin(), got.end(), std::back_inserter(missing));
  if (!extra.empty()) s << "; extra id " << extra.front();
  if (!missing.empty()) s << "; missing id " << missing.front();
  return s.str();
}

// Checks connectivity answers for every vertex pair against component labels.
template <typename Connected>
std::optional<std::string> check_pairs(std::size_t n, const oracle::Snapshot& snap, const Connected& connected) {
  const auto label = oracle::component_labels(snap);
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v)
      if (connected(u, v) != (label[u] == label[v]))
        return "connected " + std::to_string(u) + " " + std::to_string(v) + " differs from oracle";
  return std::nullopt;
}

class Target {
 public:
  virtual ~Target() = default;
  virtual void insert(const std::vector<RawEdge>& batch) = 0;
  virtual bool supports_expire() const { return true; }
  virtual void expire(std::uint64_t delta) = 0;
  virtual void query(const Command& c, std::ostream& out) const = 0;
  virtual std::optional<std::string> check(const oracle::WindowLog& log) const = 0;
};

class MsfTarget : public Target {
 public:
  MsfTarget(std::size_t n, std::uint64_t seed) : stamper_(n), msf_(n, seed) {}

  void insert(const std::vector<RawEdge>& batch) override {
    auto es = stamper_.normalize_batch(batch);
    msf_.batch_insert(std::span<const StreamEdge>(es));
  }
  bool supports_expire() const override { return false; }
  void expire(std::uint64_t) override {}

  void query(const Command& c, std::ostream& out) const override {
    if (c.query == "connected") {
      out << (msf_.connected(c.args[0], c.args[1]) ? "true" : "false") << '\n';
    } else if (c.query == "components") {
      out << msf_.components() << '\n';
    } else if (c.query == "weight") {
      Weight total = 0;
      for (const KeyedEdge& e : msf_.edges()) total += e.key.weight;
      out << total << '\n';
    } else if (c.query == "msf") {
      const auto es = msf_.edges();
      out << es.size() << '\n';
      for (const KeyedEdge& e : es) out << e.u << ' ' << e.v << ' ' << e.key.weight << '\n';
    } else if (c.query == "pathmax") {
      const auto k = msf_.heaviest_on_path(c.args[0], c.args[1]);
      if (k)
        out << k->weight << ' ' << k->edge << '\n';
      else
        out << "none\n";
    }
  }

  std::optional<std::string> check(const oracle::WindowLog& log) const override {
    const auto all = log.history();
    const auto want = oracle::kruskal_msf(all);
    const auto got = msf_.edge_ids();
    if (got != want) return diff_ids("msf", got, want);
    if (msf_.components() != oracle::components_naive(all)) return "component count differs";
    return std::nullopt;
  }

 private:
  EdgeStamper stamper_;
  MSForest msf_;
};

class ConnTarget : public Target {
 public:
  ConnTarget(std::size_t n, std::uint64_t seed) : s_(n, seed) {}
  void insert(const std::vector<RawEdge>& b) override { s_.insert(b); }
  void expire(std::uint64_t d) override { s_.expire(d); }
  void query(const Command& c, std::ostream& out) const override {
    out << (s_.is_connected(c.args[0], c.args[1]) ? "true" : "false") << '\n';
  }
  std::optional<std::string> check(const oracle::WindowLog& log) const override {
    const auto want = oracle::kruskal_msf(log.history(), oracle::KeyMode::Arrival);
    const auto got = s_.msf().edge_ids();
    if (got != want) return diff_ids("lazy forest", got, want);
    return check_pairs(s_.core().num_vertices(), log.snapshot(),
                       [&](VertexId u, VertexId v) { return s_.is_connected(u, v); });
  }

 private:
  SwConn s_;
};

class EagerTarget : public Target {
 public:
  EagerTarget(std::size_t n, std::uint64_t seed) : s_(n, seed) {}
  void insert(const std::vector<RawEdge>& b) override { s_.insert(b); }
  void expire(std::uint64_t d) override { s_.expire(d); }
  void query(const Command& c, std::ostream& out) const override {
    if (c.query == "connected")
      out << (s_.is_connected(c.args[0], c.args[1]) ? "true" : "false") << '\n';
    else if (c.query == "components")
      out << s_.num_components() << '\n';
    else
      print_edges(out, s_.forest().edges());
  }
  std::optional<std::string> check(const oracle::WindowLog& log) const override {
    const auto snap = log.snapshot();
    const auto want = oracle::kruskal_msf(snap, oracle::KeyMode::Arrival);
    const auto got = ids_of(s_.forest().edges());
    if (got != want) return diff_ids("window forest", got, want);
    if (s_.num_components() != oracle::components_naive(snap))
      return "components " + std::to_string(s_.num_components()) + " != oracle " +
             std::to_string(oracle::components_naive(snap));
    return check_pairs(s_.core().num_vertices(), snap,
                       [&](VertexId u, VertexId v) { return s_.is_connected(u, v); });
  }

 private:
  SwConnEager s_;
};

class BipartiteTarget : public Target {
 public:
  BipartiteTarget(std::size_t n, std::uint64_t seed) : s_(n, seed) {}
  void insert(const std::vector<RawEdge>& b) override { s_.insert(b); }
  void expire(std::uint64_t d) override { s_.expire(d); }
  void query(const Command&, std::ostream& out) const override {
    out << (s_.is_bipartite() ? "true" : "false") << '\n';
  }
  std::optional<std::string> check(const oracle::WindowLog& log) const override {
    const auto snap = log.snapshot();
    if (s_.is_bipartite() != oracle::bipartite_naive(snap)) return "bipartite differs from oracle";
    if (s_.graph_forest().components() != oracle::components_naive(snap)) return "component count differs";
    return std::nullopt;
  }

 private:
  SwBipartite s_;
};

class AmsfTarget : public Target {
 public:
  AmsfTarget(std::size_t n, double eps, Weight max_w, std::uint64_t seed) : s_(n, eps, max_w, seed) {}
  void insert(const std::vector<RawEdge>& b) override { s_.insert(b); }
  void expire(std::uint64_t d) override { s_.expire(d); }
  void query(const Command&, std::ostream& out) const override { out << format_double(s_.weight()) << '\n'; }
  std::optional<std::string> check(const oracle::WindowLog& log) const override {
    oracle::Snapshot snap = log.snapshot();
    std::erase_if(snap.edges, [&](const StreamEdge& e) { return e.w < 1 || e.w > s_.max_weight(); });
    const double exact = static_cast<double>(oracle::msf_weight_exact(snap));
    const double est = s_.weight();
    const double tol = 1e-9 * std::max(1.0, exact);
    if (est < exact - tol || est > (1 + s_.epsilon()) * exact + tol)
      return "estimate " + format_double(est) + " outside [" + format_double(exact) + ", " +
             format_double((1 + s_.epsilon()) * exact) + "]";
    return std::nullopt;
  }

 private:
  SwApproxMsf s_;
};

std::optional<std::string> check_cascade(const CertificateCascade& c, const oracle::Snapshot& snap) {
  const std::size_t n = snap.n;
  const auto cert = c.certificate();
  if (cert.size() > c.k() * (n - (n > 0 ? 1 : 0))) return "certificate larger than k(n-1)";
  std::set<EdgeId> live;
  for (const StreamEdge& e : snap.edges) live.insert(e.id);
  for (const StreamEdge& e : cert)
    if (!live.count(e.id)) return "certificate holds expired edge " + std::to_string(e.id);
  const EagerWindowForest* first = c.forest(1);
  const auto got = first ? ids_of(first->edges()) : std::vector<EdgeId>{};
  const auto want = oracle::kruskal_msf(snap, oracle::KeyMode::Arrival);
  if (got != want) return diff_ids("first forest", got, want);
  if (n <= 12) {
    const oracle::Snapshot cs{n, cert};
    const auto full = oracle::cut_enumerate(snap);
    const auto sub = oracle::cut_enumerate(cs);
    for (std::size_t i = 0; i < full.size(); ++i)
      if (std::min(c.k(), full[i].second) != std::min(c.k(), sub[i].second))
        return "cut " + std::to_string(full[i].first) + " not preserved";
  }
  return std::nullopt;
}

class KCertTarget : public Target {
 public:
  KCertTarget(std::size_t n, std::size_t k, std::uint64_t seed) : s_(n, k, seed) {}
  void insert(const std::vector<RawEdge>& b) override { s_.insert(b); }
  void expire(std::uint64_t d) override { s_.expire(d); }
  void query(const Command&, std::ostream& out) const override { print_edges(out, s_.make_cert()); }
  std::optional<std::string> check(const oracle::WindowLog& log) const override {
    return check_cascade(s_.cascade(), log.snapshot());
  }

 private:
  SwKCert s_;
};

class CycleTarget : public Target {
 public:
  CycleTarget(std::size_t n, std::uint64_t seed) : s_(n, seed) {}
  void insert(const std::vector<RawEdge>& b) override { s_.insert(b); }
  void expire(std::uint64_t d) override { s_.expire(d); }
  void query(const Command&, std::ostream& out) const override {
    out << (s_.has_cycle() ? "true" : "false") << '\n';
  }
  std::optional<std::string> check(const oracle::WindowLog& log) const override {
    if (s_.has_cycle() != oracle::has_cycle_naive(log.snapshot())) return "hascycle differs from oracle";
    return std::nullopt;
  }

 private:
  SwCycleFree s_;
};

class SparsifierTarget : public Target {
 public:
  SparsifierTarget(std::size_t n, const SparsifierParams& p, std::uint64_t seed) : s_(n, p, seed) {}
  void insert(const std::vector<RawEdge>& b) override { s_.insert(b); }
  void expire(std::uint64_t d) override { s_.expire(d); }
  void query(const Command&, std::ostream& out) const override {
    const auto es = s_.sparsify();
    out << es.size() << '\n';
    for (const auto& e : es) out << e.u << ' ' << e.v << ' ' << e.num << ' ' << e.den << '\n';
  }
  std::optional<std::string> check(const oracle::WindowLog& log) const override {
    const auto snap = log.snapshot();
    std::set<EdgeId> live;
    for (const StreamEdge& e : snap.edges) live.insert(e.id);
    std::size_t held = 0;
    for (std::size_t i = 0; i <= s_.levels(); ++i) held += s_.certificate(i).certificate().size();
    const auto es = s_.sparsify();
    if (es.size() > held) return "sparsifier larger than its certificates";
    for (const auto& e : es) {
      if (!live.count(e.id)) return "sparsifier emits expired edge " + std::to_string(e.id);
      if (e.den != 1 || (e.num & (e.num - 1)) != 0) return "sparsifier weight is not a power of two";
    }
    return check_cascade(s_.certificate(0), snap);
  }

 private:
  SwSparsifier s_;
};

std::unique_ptr<Target> make_target(const Config& c) {
  if (c.structure == "msf") return std::make_unique<MsfTarget>(c.n, c.seed);
  if (c.structure == "conn") return std::make_unique<ConnTarget>(c.n, c.seed);
  if (c.structure == "conn-eager") return std::make_unique<EagerTarget>(c.n, c.seed);
  if (c.structure == "bipartite") return std::make_unique<BipartiteTarget>(c.n, c.seed);
  if (c.structure == "amsf") return std::make_unique<AmsfTarget>(c.n, c.epsilon, c.max_weight, c.seed);
  if (c.structure == "kcert") return std::make_unique<KCertTarget>(c.n, c.k, c.seed);
  if (c.structure == "cyclefree") return std::make_unique<CycleTarget>(c.n, c.seed);
  SparsifierParams p;
  p.epsilon = c.epsilon;
  p.repetitions = c.sp_repetitions;
  p.levels = c.sp_levels;
  p.c_k = c.sp_c_k;
  p.c_p = c.sp_c_p;
  if (c.k_given) p.k = c.k;
  return std::make_unique<SparsifierTarget>(c.n, p, c.seed);
}

std::uint64_t parse_uint(std::string_view tok, std::size_t line, const char* what) {
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError(line, std::string("expected ") + what + ", got '" + std::string(tok) + "'");
  return x;
}

Weight parse_weight(std::string_view tok, std::size_t line) {
  Weight x = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError(line, "expected integer weight, got '" + std::string(tok) + "'");
  return x;
}

VertexId parse_vertex(std::string_view tok, std::size_t line) {
  const std::uint64_t x = parse_uint(tok, line, "vertex");
  if (x > UINT32_MAX) throw ParseError(line, "vertex too large");
  return static_cast<VertexId>(x);
}

class Driver {
 public:
  Driver(const Config& c, std::ostream& out, std::ostream& err)
      : config_(c), target_(make_target(c)), log_(c.n), out_(out), err_(err) {}

  // Returns a nonzero exit code to stop.
  int step(const Command& c) {
    history_.push_back(c);
    switch (c.kind) {
      case Command::Kind::Insert:
        try {
          target_->insert(c.batch);
        } catch (const BatchError& e) {
          throw ParseError(c.line, "edge " + std::to_string(e.index()) + ": " + e.what());
        }
        log_.insert(c.batch);
        if (config_.check != CheckMode::Never) return do_check(false);
        return kOk;
      case Command::Kind::Expire:
        if (!target_->supports_expire())
          throw ParseError(c.line, "expire is not supported by structure " + config_.structure);
        target_->expire(c.delta);
        log_.expire(c.delta);
        if (config_.check == CheckMode::Op) return do_check(false);
        return kOk;
      case Command::Kind::Query: {
        const auto& allowed = structure_queries().at(config_.structure);
        if (std::find(allowed.begin(), allowed.end(), c.query) == allowed.end())
          throw ParseError(c.line, "query " + c.query + " is not supported by structure " + config_.structure);
        for (std::uint64_t a : c.args)
          if (a >= config_.n) throw ParseError(c.line, "vertex " + std::to_string(a) + " out of range");
        target_->query(c, out_);
        return kOk;
      }
      case Command::Kind::Check:
        return do_check(true);
    }
    return kOk;
  }

 private:
  int do_check(bool explicit_check) {
    const auto failure = target_->check(log_);
    if (!failure) {
      if (explicit_check) out_ << "ok\n";
      return kOk;
    }
    out_ << "check failed: " << *failure << '\n';
    err_ << "# counterexample: " << *failure << '\n';
    for (const Command& h : history_) err_ << format_command(h) << '\n';
    return kCheckFailure;
  }

  Config config_;
  std::unique_ptr<Target> target_;
  oracle::WindowLog log_;
  std::vector<Command> history_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

void validate(const Config& c) {
  if (!structure_queries().count(c.structure)) throw ConfigError("unknown structure '" + c.structure + "'");
  if (c.n == 0) throw ConfigError("--n must be positive");
  if (c.n > (1u << 30)) throw ConfigError("--n too large");
  if ((c.structure == "amsf" || c.structure == "sparsifier") && !(c.epsilon > 0))
    throw ConfigError("--epsilon must be positive");
  if (c.structure == "amsf" && c.max_weight < 1) throw ConfigError("--max-weight must be at least 1");
  if (c.structure == "kcert" && c.k == 0) throw ConfigError("--k must be at least 1");
  if (c.structure == "sparsifier" && (!(c.sp_c_k > 0) || !(c.sp_c_p > 0)))
    throw ConfigError("sparsifier constants must be positive");
}

std::optional<Command> parse_line(std::string_view text, std::size_t line) {
  if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) toks.push_back(text.substr(i, j - i));
    i = j;
  }
  if (toks.empty()) return std::nullopt;
  Command c;
  c.line = line;
  const std::string_view head = toks[0];
  if (head == "insert") {
    c.kind = Command::Kind::Insert;
    if ((toks.size() - 1) % 3 != 0) throw ParseError(line, "insert expects triples 'u v w'");
    for (std::size_t t = 1; t < toks.size(); t += 3)
      c.batch.push_back({parse_vertex(toks[t], line), parse_vertex(toks[t + 1], line), parse_weight(toks[t + 2], line)});
  } else if (head == "expire") {
    c.kind = Command::Kind::Expire;
    if (toks.size() != 2) throw ParseError(line, "expire expects one count");
    c.delta = parse_uint(toks[1], line, "count");
  } else if (head == "query") {
    c.kind = Command::Kind::Query;
    if (toks.size() < 2) throw ParseError(line, "query expects a name");
    c.query = std::string(toks[1]);
    auto it = query_arity().find(c.query);
    if (it == query_arity().end()) throw ParseError(line, "unknown query '" + c.query + "'");
    if (toks.size() - 2 != it->second)
      throw ParseError(line, "query " + c.query + " expects " + std::to_string(it->second) + " arguments");
    for (std::size_t t = 2; t < toks.size(); ++t) c.args.push_back(parse_vertex(toks[t], line));
  } else if (head == "check") {
    c.kind = Command::Kind::Check;
    if (toks.size() != 1) throw ParseError(line, "check takes no arguments");
  } else {
    throw ParseError(line, "unknown command '" + std::string(head) + "'");
  }
  return c;
}

std::string format_command(const Command& c) {
  std::ostringstream s;
  switch (c.kind) {
    case Command::Kind::Insert:
      s << "insert";
      for (const RawEdge& e : c.batch) s << ' ' << e.u << ' ' << e.v << ' ' << e.w;
      break;
    case Command::Kind::Expire:
      s << "expire " << c.delta;
      break;
    case Command::Kind::Query:
      s << "query " << c.query;
      for (auto a : c.args) s << ' ' << a;
      break;
    case Command::Kind::Check:
      s << "check";
      break;
  }
  return s.str();
}

int run_commands(const Config& config, const std::vector<Command>& commands, std::ostream& out,
                 std::ostream& err) {
  try {
    validate(config);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kBadConfig;
  }
  Driver d(config, out, err);
  try {
    for (const Command& c : commands)
      if (int code = d.step(c); code != kOk) return code;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }
  return kOk;
}

int run(const Config& config, std::istream& in, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kBadConfig;
  }
  Driver d(config, out, err);
  std::string text;
  std::size_t line = 0;
  try {
    while (std::getline(in, text)) {
      ++line;
      const auto c = parse_line(text, line);
      if (!c) continue;
      if (int code = d.step(*c); code != kOk) return code;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }
  return kOk;
}

std::vector<Command> generate_stream(const Config& config, std::size_t ops) {
  std::mt19937_64 rng(hash_combine(config.seed, 0x66757a7a, config.n));
  const std::size_t n = config.n;
  const auto& queries = structure_queries().at(config.structure);
  const bool can_expire = config.structure != "msf";
  const Weight max_w = config.structure == "amsf" ? config.max_weight : 64;
  // Small windows keep cycles and cuts interesting on tiny vertex sets.
  const std::uint64_t window = std::max<std::uint64_t>(4, std::min<std::uint64_t>(64, 2 * n));
  std::uint64_t inserted = 0, expired = 0;
  std::vector<Command> out;
  for (std::size_t i = 0; i < ops; ++i) {
    Command c;
    c.line = i + 1;
    const std::uint64_t live = inserted - expired;
    const auto roll = rng() % 10;
    if (roll < 2) {
      c.kind = Command::Kind::Query;
      c.query = queries[rng() % queries.size()];
      for (std::size_t a = 0; a < query_arity().at(c.query); ++a) c.args.push_back(rng() % n);
    } else if (can_expire && live > 0 && (roll < 4 || live > window)) {
      c.kind = Command::Kind::Expire;
      c.delta = 1 + rng() % (live / 2 + 1);
      expired = std::min(inserted, expired + c.delta);
    } else {
      c.kind = Command::Kind::Insert;
      const std::size_t size = 1 + rng() % 6;
      for (std::size_t j = 0; j < size; ++j) {
        const VertexId u = rng() % n;
        const VertexId v = rng() % 30 == 0 ? u : static_cast<VertexId>(rng() % n);
        c.batch.push_back({u, v, std::uniform_int_distribution<Weight>(1, max_w)(rng)});
      }
      inserted += size;
    }
    out.push_back(std::move(c));
  }
  return out;
}

int fuzz(const Config& config, std::size_t ops, std::ostream& out, std::ostream& err) {
  Config checked = config;
  checked.check = CheckMode::Op;
  try {
    validate(checked);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kBadConfig;
  }
  const std::vector<Command> stream = generate_stream(checked, ops);
  std::ostringstream sink;
  const int code = run_commands(checked, stream, out, sink);
  if (code == kOk) {
    out << "fuzz ok: " << ops << " ops\n";
    return kOk;
  }
  if (code != kCheckFailure) {
    err << sink.str();
    return code;
  }
  auto fails = [&](const std::vector<Command>& cs) {
    std::ostringstream o, e;
    return run_commands(checked, cs, o, e) == kCheckFailure;
  };
  const auto minimal = minimize_ops<Command>(stream, fails);
  err << "# minimized failing stream (" << minimal.size() << " of " << stream.size() << " ops)\n";
  for (const Command& c : minimal) err << format_command(c) << '\n';
  return kCheckFailure;
}

}  // namespace bmsf::cli
