#ifndef BMSF_CLI_HPP
#define BMSF_CLI_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bmsf/graph_core.hpp"

namespace bmsf::cli {

enum ExitCode : int { kOk = 0, kParseError = 1, kCheckFailure = 2, kBadConfig = 3 };

enum class CheckMode { Never, Batch, Op };

struct Config {
  std::string structure;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.5;
  std::size_t k = 2;
  bool k_given = false;
  // Sparsifier: K, L (0 = default) and c_k, plus the sampling constant.
  std::size_t sp_repetitions = 0;
  std::size_t sp_levels = 0;
  double sp_c_k = 1.0;
  double sp_c_p = 1.0;
  Weight max_weight = 64;
  CheckMode check = CheckMode::Never;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Command {
  enum class Kind { Insert, Expire, Query, Check };
  Kind kind = Kind::Check;
  std::vector<RawEdge> batch;
  std::uint64_t delta = 0;
  std::string query;
  std::vector<std::uint64_t> args;
  std::size_t line = 0;
};

// Parses one stream line; nullopt for blank lines and comments.
std::optional<Command> parse_line(std::string_view text, std::size_t line);
std::string format_command(const Command& c);

// Throws ConfigError for unknown structures or invalid parameters.
void validate(const Config& config);

// Feeds a parsed stream to the configured structure. Writes one line per
// query and per check to `out`; errors and counterexamples go to `err`.
int run(const Config& config, std::istream& in, std::ostream& out, std::ostream& err);
int run_commands(const Config& config, const std::vector<Command>& commands, std::ostream& out,
                 std::ostream& err);

// Random interleaved stream for the configured structure.
std::vector<Command> generate_stream(const Config& config, std::size_t ops);

// Runs a generated stream with a check after every operation. On failure,
// writes the minimized failing stream to `err`.
int fuzz(const Config& config, std::size_t ops, std::ostream& out, std::ostream& err);

// Greedy minimization: repeatedly drops chunks, then single items, while
// `fails` still holds.
template <typename T>
std::vector<T> minimize_ops(std::vector<T> items, const std::function<bool(const std::vector<T>&)>& fails) {
  for (std::size_t chunk = items.size() / 2; chunk >= 1; chunk /= 2) {
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t start = 0; start < items.size();) {
        std::vector<T> trial;
        trial.reserve(items.size());
        trial.insert(trial.end(), items.begin(), items.begin() + static_cast<std::ptrdiff_t>(start));
        const std::size_t stop = std::min(items.size(), start + chunk);
        trial.insert(trial.end(), items.begin() + static_cast<std::ptrdiff_t>(stop), items.end());
        if (fails(trial)) {
          items = std::move(trial);
          progress = true;
        } else {
          start += chunk;
        }
      }
    }
  }
  return items;
}

}  // namespace bmsf::cli

#endif  // BMSF_CLI_HPP
