#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bmsf/cli.hpp"

namespace {

bool parse_sparsifier_constants(const std::string& text, bmsf::cli::Config& c) {
  std::istringstream in(text);
  std::string k, l, ck;
  if (!std::getline(in, k, ',') || !std::getline(in, l, ',') || !std::getline(in, ck)) return false;
  try {
    c.sp_repetitions = std::stoul(k);
    c.sp_levels = std::stoul(l);
    c.sp_c_k = std::stod(ck);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace bmsf::cli;
  CLI::App app{"Batch-incremental MSF and sliding-window graph structures"};
  app.require_subcommand(1);

  Config config;
  std::string constants, check = "never", input = "-", output = "-";
  std::size_t ops = 1000;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--structure", config.structure,
                    "msf, conn, conn-eager, bipartite, amsf, kcert, cyclefree, sparsifier")
        ->required();
    sub->add_option("--n", config.n, "number of vertices")->required();
    sub->add_option("--seed", config.seed, "random seed");
    sub->add_option("--epsilon", config.epsilon, "approximation parameter (amsf, sparsifier)");
    sub->add_option("--k", config.k, "certificate order (kcert; sparsifier override)");
    sub->add_option("--sparsifier-constants", constants, "K,L,c_k (0 selects the default)");
    sub->add_option("--sparsifier-cp", config.sp_c_p, "sampling constant of the sparsifier");
    sub->add_option("--max-weight", config.max_weight, "largest accepted weight (amsf)");
  };

  CLI::App* run = app.add_subcommand("run", "process an operation stream");
  add_common(run);
  run->add_option("--check", check, "never, batch or op");
  run->add_option("--input", input, "stream file, - for stdin");
  run->add_option("--output", output, "output file, - for stdout");

  CLI::App* fuzz_cmd = app.add_subcommand("fuzz", "random stream checked against oracles");
  add_common(fuzz_cmd);
  fuzz_cmd->add_option("--ops", ops, "number of operations");
  fuzz_cmd->add_option("--output", output, "output file, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kBadConfig;
  }

  CLI::App* active = run->parsed() ? run : fuzz_cmd;
  config.k_given = active->count("--k") > 0;
  if (!constants.empty() && !parse_sparsifier_constants(constants, config)) {
    std::cerr << "error: --sparsifier-constants expects K,L,c_k\n";
    return kBadConfig;
  }
  if (check == "never")
    config.check = CheckMode::Never;
  else if (check == "batch")
    config.check = CheckMode::Batch;
  else if (check == "op")
    config.check = CheckMode::Op;
  else {
    std::cerr << "error: --check expects never, batch or op\n";
    return kBadConfig;
  }

  std::ofstream out_file;
  if (output != "-") {
    out_file.open(output);
    if (!out_file) {
      std::cerr << "error: cannot open " << output << '\n';
      return kBadConfig;
    }
  }
  std::ostream& out = output == "-" ? std::cout : out_file;

  if (fuzz_cmd->parsed()) return fuzz(config, ops, out, std::cerr);

  if (input == "-") return bmsf::cli::run(config, std::cin, out, std::cerr);
  std::ifstream in(input);
  if (!in) {
    std::cerr << "error: cannot open " << input << '\n';
    return kBadConfig;
  }
  return bmsf::cli::run(config, in, out, std::cerr);
}
