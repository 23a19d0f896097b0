#include <algorithm>
#include <functional>
#include <sstream>

#include "bmsf/cli.hpp"
#include "doctest.h"

using namespace bmsf::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_text(const std::string& structure, std::size_t n, const std::string& text,
                Config config = {}) {
  config.structure = structure;
  config.n = n;
  std::istringstream in(text);
  std::ostringstream out, err;
  const int code = run(config, in, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("documented stream examples") {
  CHECK(run_text("conn", 4, "insert 0 1 1\nquery connected 0 1\n").out == "true\n");
  CHECK(run_text("conn", 4, "insert 0 1 1\nexpire 1\nquery connected 0 1\n").out == "false\n");
  CHECK(run_text("cyclefree", 3, "insert 0 1 1 1 2 1 2 0 1\nquery hascycle\n").out == "true\n");
}

TEST_CASE("comments, blank lines and checks") {
  const auto r = run_text("conn-eager", 4, "# header\n\ninsert 0 1 5 # trailing\ncheck\nquery components\n");
  CHECK(r.code == kOk);
  CHECK(r.out == "ok\n3\n");
}

TEST_CASE("queries per structure") {
  CHECK(run_text("msf", 3, "insert 0 1 5 1 2 8 0 2 6\nquery msf\nquery weight\nquery pathmax 0 1\n").out ==
        "2\n0 1 5\n0 2 6\n11\n5 0\n");
  CHECK(run_text("msf", 3, "query pathmax 0 2\n").out == "none\n");
  CHECK(run_text("bipartite", 3, "insert 0 1 1 1 2 1\nquery bipartite\n").out == "true\n");
  CHECK(run_text("amsf", 3, "insert 0 1 1 1 2 1\nquery weight\n").out == "2.000000\n");
  CHECK(run_text("kcert", 3, "insert 0 1 4 1 2 3 2 0 2\nquery cert\n").out == "3\n0 1 4\n1 2 3\n2 0 2\n");
  Config exact;
  exact.sp_c_p = 1e9;
  exact.k = 1000;
  exact.k_given = true;
  CHECK(run_text("sparsifier", 4, "insert 2 1 1 0 3 1 1 2 1\nquery sparsify\n", exact).out ==
        "3\n0 3 1 1\n1 2 1 1\n1 2 1 1\n");
}

TEST_CASE("exit codes") {
  auto parse = run_text("conn", 4, "insert 0 1\n");
  CHECK(parse.code == kParseError);
  CHECK(parse.err.find("line 1") != std::string::npos);
  CHECK(run_text("conn", 4, "frobnicate\n").code == kParseError);
  CHECK(run_text("conn", 4, "insert 0 9 1\n").code == kParseError);
  CHECK(run_text("conn", 4, "query connected 0 9\n").code == kParseError);
  CHECK(run_text("conn", 4, "query hascycle\n").code == kParseError);
  CHECK(run_text("msf", 4, "expire 1\n").code == kParseError);
  CHECK(run_text("nope", 4, "").code == kBadConfig);
  CHECK(run_text("conn", 0, "").code == kBadConfig);
  Config zero;
  zero.k = 0;
  CHECK(run_text("kcert", 4, "", zero).code == kBadConfig);
}

TEST_CASE("parse_line round-trips through format_command") {
  const auto c = parse_line("  insert 1 2 3   4 5 -6 ", 1);
  REQUIRE(c);
  CHECK(format_command(*c) == "insert 1 2 3 4 5 -6");
  CHECK_FALSE(parse_line("   # only a comment", 2));
  CHECK(format_command(*parse_line("query connected 1 2", 3)) == "query connected 1 2");
  CHECK_THROWS_AS(parse_line("expire -1", 4), ParseError);
}

TEST_CASE("fuzz passes and is deterministic") {
  for (const char* s : {"msf", "conn", "conn-eager", "bipartite", "amsf", "kcert", "cyclefree", "sparsifier"}) {
    Config c;
    c.structure = s;
    c.n = 12;
    c.seed = 5;
    c.k = 3;
    std::ostringstream a, b, err;
    CHECK(fuzz(c, 200, a, err) == kOk);
    CHECK(fuzz(c, 200, b, err) == kOk);
    CHECK(a.str() == b.str());
    CHECK(err.str().empty());
  }
}

TEST_CASE("minimize_ops keeps a failing core") {
  std::vector<int> ops;
  for (int i = 0; i < 100; ++i) ops.push_back(i);
  // Fails whenever 17 and 58 are both present, with 17 first.
  std::function<bool(const std::vector<int>&)> fails = [](const std::vector<int>& v) {
    auto a = std::find(v.begin(), v.end(), 17);
    auto b = std::find(v.begin(), v.end(), 58);
    return a != v.end() && b != v.end() && a < b;
  };
  CHECK(minimize_ops(ops, fails) == std::vector<int>{17, 58});
}
