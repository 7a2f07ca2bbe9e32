#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "weil/error.hpp"
#include "weil/scenario.hpp"

using namespace weil;

namespace {

const ScenarioKind kAllKinds[] = {ScenarioKind::WeilLocal,    ScenarioKind::WeilLoop,     ScenarioKind::GaussSum,
                                  ScenarioKind::VerifyGlobal, ScenarioKind::VerifyCurve,  ScenarioKind::VerifySurface,
                                  ScenarioKind::CheckFinite};

json without_timing(json j) {
  for (const char* key : {"entries", "spot_checks"}) {
    if (!j.contains(key)) continue;
    for (auto& e : j[key]) e.erase("seconds");
  }
  return j;
}

int error_kind(const json& j) {
  try {
    run_scenario(parse_scenario(j));
  } catch (const Error& e) {
    return static_cast<int>(e.kind());
  }
  return -1;
}

}  // namespace

TEST_CASE("uniform_int stays in range and is reproducible") {
  std::mt19937_64 a(9), b(9);
  for (int i = 0; i < 1000; ++i) {
    const auto x = uniform_int(a, -3, 4);
    CHECK(x >= -3);
    CHECK(x <= 4);
    CHECK(x == uniform_int(b, -3, 4));
  }
}

TEST_CASE("round trip through JSON") {
  for (auto kind : kAllKinds) {
    for (const auto& s : generate_scenarios(kind, 4, 5)) {
      const auto j = to_json(s);
      CAPTURE(j.dump());
      const auto back = parse_scenario(json::parse(j.dump()));
      CHECK(back == s);
      CHECK(to_json(back).dump() == j.dump());
    }
  }
}

TEST_CASE("generation is deterministic") {
  for (auto kind : kAllKinds) {
    const auto a = generate_scenarios(kind, 7, 3), b = generate_scenarios(kind, 7, 3);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(to_json(a[i]).dump() == to_json(b[i]).dump());
  }
  for (const auto& s : generate_scenarios(ScenarioKind::CheckFinite, 1, 10)) CHECK(check_nondegenerate(s.finite.build()));
  const auto surf = generate_scenarios(ScenarioKind::VerifySurface, 2, 1).front();
  CHECK((surf.p == 3 || surf.p == 5 || surf.p == 7));
}

TEST_CASE("reports are reproducible apart from timings") {
  for (auto kind : kAllKinds) {
    for (const auto& s : generate_scenarios(kind, 12, 2)) {
      CAPTURE(to_json(s).dump());
      const auto a = run_scenario(s), b = run_scenario(s);
      CHECK(without_timing(a.report).dump() == without_timing(b.report).dump());
      CHECK(a.exit_code == 0);
    }
  }
}

TEST_CASE("schema validation") {
  const json global = {{"kind", "verify-global"}, {"matrix", {{"1"}}}};
  CHECK(run_scenario(parse_scenario(global)).exit_code == 0);
  CHECK(run_scenario(parse_scenario(global)).report["product"] == 0);

  auto extra = global;
  extra["colour"] = "blue";
  CHECK_THROWS_AS(parse_scenario(extra), Error);
  CHECK_THROWS_AS(parse_scenario(json{{"kind", "verify-everything"}}), Error);
  CHECK_THROWS_AS(parse_scenario(json{{"kind", "verify-global"}, {"matrix", {{"1/0"}}}}), Error);
  CHECK_THROWS_AS(parse_scenario(json{{"kind", "verify-global"}, {"matrix", {{1, 2}}}}), Error);
  CHECK_THROWS_AS(parse_scenario(json{{"kind", "weil-local"}, {"a", 1}}), Error);

  const json ramified = {{"kind", "verify-curve"},
                         {"p", 5},
                         {"omega", {{"factors", json::array({{{"poly", {-25, 0, 1}}, {"exp", 1}}})}}}};
  CHECK(error_kind(ramified) == static_cast<int>(ErrorKind::Unsupported));

  const json degenerate = {{"kind", "verify-global"}, {"matrix", {{1, 1}, {1, 1}}}};
  CHECK(error_kind(degenerate) == static_cast<int>(ErrorKind::Degenerate));
}

TEST_CASE("local scenarios") {
  const json j = {{"kind", "weil-local"},
                  {"field", {{"kind", "padic"}, {"p", 2}}},
                  {"a", 1},
                  {"character", {{"conductor", 0}}}};
  const auto r = run_scenario(parse_scenario(j));
  CHECK(r.report["index"] == 1);

  const json real = {{"kind", "weil-local"}, {"field", {{"kind", "real"}}}, {"a", "-3/2"}};
  CHECK(run_scenario(parse_scenario(real)).report["index"] == 1);

  const json eq = {{"kind", "weil-local"},
                   {"field", {{"kind", "eqchar"}, {"p", 3}, {"poly", {1, 0, 1}}}},
                   {"a", {{"val", -1}, {"digits", {4, 0, 2}}}}};
  CHECK(run_scenario(parse_scenario(eq)).report.contains("window"));
}

TEST_CASE("finite scenarios") {
  const json j = {{"kind", "check-finite"}, {"form", {{"orders", {3}}, {"gram", {{"1/3"}}}}}};
  const auto r = run_scenario(parse_scenario(j));
  CHECK(r.exit_code == 0);
  CHECK(r.report["fourier"].get<bool>());

  const json degenerate = {{"kind", "check-finite"}, {"form", {{"orders", {3}}, {"gram", {{0}}}}}};
  CHECK(run_scenario(parse_scenario(degenerate)).exit_code == 1);

  const json gs = {{"kind", "gauss-sum"}, {"form", {{"orders", {5}}, {"gram", {{"1/5"}}}}}};
  CHECK(run_scenario(parse_scenario(gs)).report["index"] == 0);
}

TEST_CASE("golden reports") {
  namespace fs = std::filesystem;
  const fs::path root(WEIL_EXAMPLES_DIR);
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(root / "scenarios")) {
    CAPTURE(entry.path().string());
    std::ifstream in(entry.path()), gold(root / "reports" / entry.path().filename());
    REQUIRE(gold.good());
    RunOptions opts;
    opts.include_timing = false;
    const auto r = run_scenario(parse_scenario(json::parse(in)), opts);
    CHECK(r.report == json::parse(gold));
    ++seen;
  }
  CHECK(seen >= 10);
}
