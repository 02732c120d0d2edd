// strichartz_lab <experiment> [--config FILE] [--out DIR] [--seed N] [--print-config]
//
// exit 0: all checks pass, 1: some check failed (outputs still written),
// 2: usage error (nothing written)

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "strichartz/harness.hpp"

namespace h = strichartz::harness;

namespace {

struct Args {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool print_config = false;
};

void print_check(const h::Check& c) {
  std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.criterion << ' ' << c.name << ": " << c.value
            << ' ' << c.relation << ' ' << c.threshold << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments for the sharp one-dimensional Strichartz inequality"};
  app.require_subcommand(1);
  std::map<std::string, Args> args;
  for (const auto& name : h::experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    auto& a = args[name];
    sub->add_option("--config", a.config, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--out", a.out, "output directory (default results/<experiment>)");
    sub->add_option("--seed", a.seed, "overrides the config seed");
    sub->add_flag("--print-config", a.print_config, "print the effective config and exit");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const Args& a = args[name];
  const std::filesystem::path out =
      a.out.empty() ? std::filesystem::path("results") / name : std::filesystem::path(a.out);

  h::ExperimentConfig cfg;
  try {
    if (!a.config.empty()) {
      std::ifstream in(a.config);
      if (!in) throw h::UsageError("cannot read " + a.config);
      cfg = h::parse_config(name, in);
    } else {
      cfg = h::default_config(name);
    }
    if (a.seed) {
      cfg.values["seed"] = std::to_string(*a.seed);
      h::validate(cfg);
    }
    if (std::filesystem::exists(out) && !std::filesystem::is_directory(out)) {
      throw h::UsageError(out.string() + " exists and is not a directory");
    }
  } catch (const h::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }

  if (a.print_config) {
    std::cout << h::serialize(cfg);
    return 0;
  }

  h::ExperimentReport rep;
  try {
    rep = h::run(cfg);
  } catch (const std::invalid_argument& e) {
    // DomainError / StructuralError from a module: the parameters are out of range
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    h::write_outputs(rep, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  std::cout << name << " (" << rep.wall_seconds << " s) -> " << out.string() << '\n';
  for (const auto& c : rep.checks) print_check(c);
  for (const auto& c : rep.runtime_checks) print_check(c);
  for (const auto& w : rep.warnings) std::cout << "warning: " << w << '\n';
  return rep.passed() ? 0 : 1;
}
