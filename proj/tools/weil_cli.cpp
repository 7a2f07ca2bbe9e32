// weilidx: run scenarios through the Weil index engine and the product-formula
// verifiers, or generate seeded scenarios.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "weil/error.hpp"
#include "weil/finite_quadratic.hpp"
#include "weil/scenario.hpp"

namespace {

struct Flags {
  std::optional<int> precision;
  bool json = false;
  std::vector<std::int64_t> places;
  std::optional<std::uint64_t> cap;
  bool no_timing = false;
};

weil::Scenario load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw weil::Error(weil::ErrorKind::Validation, "cannot read " + path);
  weil::json j;
  try {
    j = weil::json::parse(in);
  } catch (const weil::json::parse_error& e) {
    throw weil::Error(weil::ErrorKind::Validation, path + ": malformed JSON: " + e.what());
  }
  return weil::parse_scenario(j);
}

int run_file(const std::string& path, std::initializer_list<weil::ScenarioKind> accepted, const Flags& flags) {
  const auto s = load(path);
  if (accepted.size() != 0 && std::find(accepted.begin(), accepted.end(), s.kind) == accepted.end()) {
    throw weil::Error(weil::ErrorKind::Validation,
                      path + ": scenario kind " + weil::to_string(s.kind) + " does not match this subcommand");
  }
  weil::RunOptions opts;
  opts.precision = flags.precision;
  opts.extra_places = flags.places;
  opts.include_timing = !flags.no_timing;
  const auto r = weil::run_scenario(s, opts);
  if (flags.json) {
    std::cout << r.report.dump(2) << "\n";
  } else {
    if (!s.id.empty()) std::cout << s.id << "\n";
    std::cout << r.text;
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Weil indices and product-formula checks"};
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--precision", flags.precision, "relative precision in uniformizer digits (default 32)");
  app.add_flag("--json", flags.json, "print the machine-readable report");
  app.add_option("--places", flags.places, "extra probe places, comma separated")->delimiter(',');
  app.add_option("--cap", flags.cap, "enumeration cap for finite quotients");
  app.add_flag("--no-timing", flags.no_timing, "omit timing fields from JSON reports");

  std::function<int()> action;
  std::string file;

  auto* weil_cmd = app.add_subcommand("weil", "local or loop Weil index")->require_subcommand(1);
  weil_cmd->add_subcommand("local", "weil-local scenario")->callback([&] {
    action = [&] { return run_file(file, {weil::ScenarioKind::WeilLocal}, flags); };
  })->add_option("scenario", file)->required();
  weil_cmd->add_subcommand("loop", "weil-loop scenario")->callback([&] {
    action = [&] { return run_file(file, {weil::ScenarioKind::WeilLoop}, flags); };
  })->add_option("scenario", file)->required();

  app.add_subcommand("gauss-sum", "gauss-sum scenario")->callback([&] {
    action = [&] { return run_file(file, {weil::ScenarioKind::GaussSum}, flags); };
  })->add_option("scenario", file)->required();

  auto* verify = app.add_subcommand("verify", "product-formula verifiers")->require_subcommand(1);
  verify->add_subcommand("global", "verify-global scenario")->callback([&] {
    action = [&] { return run_file(file, {weil::ScenarioKind::VerifyGlobal}, flags); };
  })->add_option("scenario", file)->required();
  verify->add_subcommand("curve", "verify-curve scenario")->callback([&] {
    action = [&] { return run_file(file, {weil::ScenarioKind::VerifyCurve}, flags); };
  })->add_option("scenario", file)->required();
  verify->add_subcommand("surface", "verify-surface scenario")->callback([&] {
    action = [&] { return run_file(file, {weil::ScenarioKind::VerifySurface}, flags); };
  })->add_option("scenario", file)->required();

  auto* check = app.add_subcommand("check", "finite-group identity checks")->require_subcommand(1);
  check->add_subcommand("finite", "check-finite scenario")->callback([&] {
    action = [&] { return run_file(file, {weil::ScenarioKind::CheckFinite}, flags); };
  })->add_option("scenario", file)->required();

  app.add_subcommand("run", "any scenario, dispatched on its kind")->callback([&] {
    action = [&] { return run_file(file, {}, flags); };
  })->add_option("scenario", file)->required();

  std::string kind, out_dir = ".";
  std::uint64_t seed = 0;
  int count = 1;
  std::int64_t prime = 0;
  auto* gen = app.add_subcommand("generate", "write seeded scenarios");
  gen->add_option("kind", kind, "scenario kind")->required();
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--count", count, "number of scenarios")->check(CLI::NonNegativeNumber);
  gen->add_option("--p", prime, "fix the prime for curve and surface scenarios");
  gen->add_option("--out", out_dir, "output directory");
  gen->callback([&] {
    action = [&] {
      const auto scenarios = weil::generate_scenarios(weil::scenario_kind_from_string(kind), seed, count, prime);
      std::filesystem::create_directories(out_dir);
      for (const auto& s : scenarios) {
        const auto path = std::filesystem::path(out_dir) / (s.id + ".json");
        std::ofstream(path) << weil::to_json(s).dump(2) << "\n";
        std::cout << path.string() << "\n";
      }
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (flags.cap) weil::finite_caps().enumeration = *flags.cap;
    return action();
  } catch (const weil::Error& e) {
    std::cerr << "error (" << weil::to_string(e.kind()) << "): " << e.what() << "\n";
    return weil::exit_code_for(e.kind());
  } catch (const weil::json::exception& e) {
    std::cerr << "error (Validation): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
