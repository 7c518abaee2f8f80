#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlab/scenario.hpp"

namespace {

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument(item);
    values.push_back(v);
  }
  return values;
}

int report(const mlab::RunResult& r) {
  if (!r.message.empty()) {
    std::cerr << "minkowski-lab: " << r.message << '\n';
    return r.exit_code;
  }
  for (const auto& c : r.checks) {
    std::cout << c.file << "  " << c.verdict;
    if (c.exit_code != mlab::kExitPass && !c.note.empty()) std::cout << "  (" << c.note << ')';
    std::cout << '\n';
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minkowski-lab: numerical checks of Minkowski-type integral formulas"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  int threads = 1;
  double tol_scale = 1.0;
  std::string axis;
  std::string values;

  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--config", config, "scenario JSON file")->required();
    sub->add_option("--out", out, "output directory (default: scenario output.dir)");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 1024));
    sub->add_option("--tol-scale", tol_scale, "multiplier applied to every tolerance")
        ->check(CLI::PositiveNumber);
  };
  CLI::App* run = app.add_subcommand("run", "run every check of a scenario");
  add_run_flags(run);
  CLI::App* sweep = app.add_subcommand("sweep", "rerun a scenario over values of one numeric field");
  add_run_flags(sweep);
  sweep->add_option("--axis", axis, "JSON pointer to a numeric scenario field")->required();
  sweep->add_option("--values", values, "comma separated values")->required();
  CLI::App* checks = app.add_subcommand("list-checks", "print the check registry");
  CLI::App* surfaces = app.add_subcommand("list-surfaces", "print the surface zoo");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (e.get_exit_code() != 0) std::cerr << app.help();
    return mlab::kExitUsage;
  }

  try {
    mlab::RunOptions opts;
    opts.threads = threads;
    opts.tol_scale = tol_scale;
    if (*checks) {
      std::cout << mlab::list_checks();
      return 0;
    }
    if (*surfaces) {
      std::cout << mlab::list_surfaces();
      return 0;
    }
    if (*run) return report(mlab::run_file(config, out, opts));
    std::vector<double> vals;
    try {
      vals = parse_values(values);
    } catch (const std::exception&) {
      std::cerr << "minkowski-lab: --values must be a comma separated list of numbers\n";
      return mlab::kExitUsage;
    }
    return report(mlab::sweep_file(config, axis, vals, out, opts));
  } catch (const std::exception& e) {
    std::cerr << "minkowski-lab: " << e.what() << '\n';
    return mlab::kExitFail;
  }
}
