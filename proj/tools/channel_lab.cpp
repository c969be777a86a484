// channel-lab: purity and fidelity analysis of Kraus-form quantum channels.
//
//   channel-lab <analyze|optimize|dfs|qecc|montecarlo> --spec <path>
//               [--out <path>] [--seed <int>] [--samples <int>]
//               [--direction min|max] [--quantity purity|fidelity]
//               [--tol <real>] [--restarts <int>]
//
// Exit codes: 0 ok, 2 parse error, 3 validation error, 4 numerical failure,
// 5 error-correction condition violated (qecc).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "channel_lab/cli/commands.hpp"

namespace cl = channel_lab::cli;

int main(int argc, char** argv) {
  CLI::App app{"Purity and fidelity analysis of quantum channels via channel Hamiltonians",
               "channel-lab"};
  std::string command;
  std::string spec_path;
  std::string out_path;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t restarts = 0;
  std::string direction = "min";
  std::string quantity = "purity";
  double tol = channel_lab::kDefaultTolerance;

  app.add_option("command", command, "analyze | optimize | dfs | qecc | montecarlo")
      ->required()
      ->check(CLI::IsMember({"analyze", "optimize", "dfs", "qecc", "montecarlo"}));
  app.add_option("--spec", spec_path, "channel specification file (JSON)")->required();
  app.add_option("--out", out_path, "write the structured report to this file");
  auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides the spec)");
  auto* samples_opt = app.add_option("--samples", samples, "Monte-Carlo sample count");
  auto* restarts_opt = app.add_option("--restarts", restarts, "optimizer restarts");
  app.add_option("--direction", direction, "optimization direction")
      ->check(CLI::IsMember({"min", "max"}));
  app.add_option("--quantity", quantity, "purity or fidelity")
      ->check(CLI::IsMember({"purity", "fidelity"}));
  app.add_option("--tol", tol, "trace-preservation tolerance for the input channel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cl::kExitParse;
  }

  cl::CommandOptions opts;
  if (seed_opt->count()) opts.seed = seed;
  if (samples_opt->count()) opts.samples = samples;
  if (restarts_opt->count()) opts.restarts = restarts;
  opts.direction = direction == "max" ? cl::Direction::max : cl::Direction::min;
  opts.quantity = quantity == "fidelity" ? channel_lab::Quantity::fidelity
                                         : channel_lab::Quantity::purity;
  opts.tol = tol;

  try {
    const auto spec = cl::load_channel_spec(spec_path);
    const auto result = cl::run_command(command, spec, opts);
    std::cout << result.text;
    if (!out_path.empty()) {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write report to '" << out_path << "'\n";
        return cl::kExitParse;
      }
      out << cl::serialize_report(result.report);
    }
    return result.exit_code;
  } catch (const channel_lab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cl::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cl::kExitNumerical;
  }
}
