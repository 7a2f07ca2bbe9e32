#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "weil/error.hpp"
#include "weil/scenario.hpp"
#include "weil/verifiers.hpp"

using namespace weil;

namespace {

using Q = std::vector<mpq_class>;

QPoly poly(Q c) { return QPoly(std::move(c)); }

FactoredDifferential diff(mpq_class c, std::vector<Factor> f) { return {FactoredRatFunc{std::move(c), std::move(f)}}; }

const PlaceEntry* find_entry(const WeilIndexReport& r, const std::string& place) {
  for (const auto& e : r.entries) {
    if (e.place == place) return &e;
  }
  return nullptr;
}

std::vector<std::string> places(const WeilIndexReport& r) {
  std::vector<std::string> out;
  for (const auto& e : r.entries) out.push_back(e.place);
  return out;
}

bool has_skip(const WeilIndexReport& r, const std::string& prefix, const std::string& why) {
  return std::any_of(r.skipped.begin(), r.skipped.end(),
                     [&](const SkippedPlace& s) { return s.place.rfind(prefix, 0) == 0 && s.justification == why; });
}

std::map<std::string, int> index_map(const WeilIndexReport& r) {
  std::map<std::string, int> out;
  for (const auto& e : r.entries) out[e.place] = e.index.exponent();
  return out;
}

}  // namespace

TEST_CASE("prime factorization") {
  CHECK(prime_factors(1).empty());
  CHECK(prime_factors(-360) == std::vector<std::int64_t>{2, 3, 5});
  CHECK(prime_factors(mpz_class("1000000007")) == std::vector<std::int64_t>{1000000007});
  CHECK_THROWS_AS(prime_factors(0), Error);
}

TEST_CASE("global: small forms") {
  SUBCASE("Q = [1]") {
    const auto r = verify_global({{1}});
    CHECK(places(r) == std::vector<std::string>{"R", "Q_2"});
    CHECK(r.pass);
    CHECK(r.product.is_one());
    // psi_inf(x^2/2) with psi_inf = exp(-2 pi i x) has index zeta_8^-1.
    CHECK(find_entry(r, "R")->index == Mu8(-1));
    CHECK(find_entry(r, "Q_2")->index == Mu8(1));
    CHECK(has_skip(r, "Q_p", "unit-lattice"));
    REQUIRE(r.spot_checks.size() == 2);
    for (const auto& e : r.spot_checks) CHECK(e.index.is_one());
  }
  SUBCASE("Q = [2] with probes") {
    VerifyOptions o;
    o.extra_places = {3, 5, 7, 11, 13};
    const auto r = verify_global({{2}}, o);
    CHECK(r.pass);
    for (const auto& e : r.entries) {
      if (e.place != "R" && e.place != "Q_2") {
        CHECK(e.index.is_one());
        CHECK(e.detail == "probe");
      }
    }
    CHECK(r.entries.size() == 7);
  }
  SUBCASE("hyperbolic plane is trivial everywhere") {
    VerifyOptions o;
    o.extra_places = {3, 5};
    const auto r = verify_global({{1, 0}, {0, -1}}, o);
    CHECK(r.pass);
    for (const auto& e : r.entries) CHECK(e.index.is_one());
  }
  SUBCASE("singular forms are rejected") {
    CHECK_THROWS_AS(verify_global({{1, 2}, {2, 4}}), Error);
  }
  SUBCASE("probe places must be prime") {
    VerifyOptions o;
    o.extra_places = {9};
    CHECK_THROWS_AS(verify_global({{1}}, o), Error);
  }
}

TEST_CASE("global: seeded forms") {
  for (const auto& s : generate_scenarios(ScenarioKind::VerifyGlobal, 11, 25)) {
    CAPTURE(to_json(s).dump());
    VerifyOptions o;
    o.extra_places = s.extra_places;
    const auto r = verify_global(s.matrix, o);
    CHECK(r.pass);
    for (const auto& e : r.entries) {
      if (e.detail == "probe") CHECK(e.index.is_one());
    }
  }
}

TEST_CASE("loop: examples and cross-verifier consistency") {
  const auto one = RationalFunction::constant(1);
  const auto t = RationalFunction::laurent(1, {1});
  SUBCASE("Q = [1], dt: even order everywhere") {
    const auto r = verify_loop({{one}}, one);
    CHECK(r.pass);
    for (const auto& e : r.entries) CHECK(e.index.is_one());
  }
  SUBCASE("Q = [1], t dt and Q = [t], dt reproduce the global report") {
    const auto g = verify_global({{1}});
    const auto a = verify_loop({{one}}, t);
    const auto b = verify_loop({{t}}, one);
    CHECK(a.pass);
    CHECK(b.pass);
    CHECK(index_map(a) == index_map(g));
    CHECK(index_map(b) == index_map(g));
  }
  SUBCASE("seeded loops") {
    for (const auto& s : generate_scenarios(ScenarioKind::WeilLoop, 5, 12)) {
      CAPTURE(to_json(s).dump());
      const auto res = run_scenario(s);
      CHECK(res.exit_code == 0);
      CHECK(res.report["pass"].get<bool>());
    }
  }
}

TEST_CASE("curve: examples") {
  SUBCASE("t dt over Q_5") {
    const auto r = verify_curve(5, diff(1, {{poly({0, 1}), 1}}));
    CHECK(places(r) == std::vector<std::string>{"(t)", "inf"});
    CHECK(r.entries[0].ord == 1);
    CHECK(r.entries[1].ord == -3);
    CHECK(r.pass);
  }
  SUBCASE("dt/(t^2 - 5) over Q_5") {
    const auto r = verify_curve(5, diff(1, {{poly({-5, 0, 1}), -1}}));
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries[0].ord == -1);
    CHECK(r.entries[0].index.is_one());
    CHECK(has_skip(r, "inf", "even-ord"));
    CHECK(r.pass);
  }
  SUBCASE("(t^2 + 1) dt over Q_3") {
    const auto r = verify_curve(3, diff(1, {{poly({1, 0, 1}), 1}}));
    CHECK(places(r) == std::vector<std::string>{"(" + poly({1, 0, 1}).str() + ")"});
    CHECK(r.entries[0].ord == 1);
    CHECK(has_skip(r, "inf (ord -4)", "even-ord"));
    CHECK(r.pass);
  }
  SUBCASE("non-Eisenstein ramified factor") {
    CHECK_THROWS_AS(verify_curve(5, diff(1, {{poly({-25, 0, 1}), 1}})), Error);
  }
}

TEST_CASE("curve: seeded differentials over p = 3, 5, 7") {
  for (std::int64_t p : {3, 5, 7}) {
    for (const auto& s : generate_scenarios(ScenarioKind::VerifyCurve, 100 + static_cast<std::uint64_t>(p), 4, p)) {
      CAPTURE(to_json(s).dump());
      const auto r = verify_curve(s.p, s.omega_curve);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("curve: scaling by a square keeps every index") {
  std::mt19937_64 rng(3);
  for (const auto& s : generate_scenarios(ScenarioKind::VerifyCurve, 17, 4, 5)) {
    CAPTURE(to_json(s).dump());
    const auto base = verify_curve(s.p, s.omega_curve);
    // f = (t - r) / (t^2 + 2): doubling its exponents changes ords by even amounts.
    mpq_class r(uniform_int(rng, 7, 40), uniform_int(rng, 1, 4));
    r.canonicalize();
    FactoredRatFunc f2{4, {{poly({-r, 1}), 2}, {poly({2, 0, 1}), -2}}};
    FactoredDifferential scaled{s.omega_curve.num * f2};
    const auto twisted = verify_curve(s.p, scaled);
    CHECK(twisted.pass);
    for (const auto& e : base.entries) {
      const auto* t = find_entry(twisted, e.place);
      REQUIRE(t != nullptr);
      CHECK((t->ord - e.ord) % 2 == 0);
      CHECK(t->index == e.index);
    }
  }
}

TEST_CASE("curve: skipped points have order 0") {
  const auto base = LocalField::padic(5, 24);
  const auto s = generate_scenarios(ScenarioKind::VerifyCurve, 23, 1, 5).front();
  for (const auto& q : {poly({-3, 1}), poly({2, 0, 1}), poly({5, 5, 0, 1})}) {
    CHECK(ord_at(base, s.omega_curve, ClosedPoint::finite(q)) == 0);
  }
}

TEST_CASE("surface: examples") {
  SurfaceDifferential w;
  w.p = 5;
  SUBCASE("dt") {
    const auto r = verify_surface(w, 0);
    CHECK(r.entries.empty());
    CHECK(r.pass);
  }
  SUBCASE("5 dt") {
    w.p_power = 1;
    const auto r = verify_surface(w, 0);
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries[0].place == "y_p");
    CHECK(r.entries[0].index.is_one());
    CHECK(r.pass);
  }
  SUBCASE("5 (t - 5) dt") {
    w.p_power = 1;
    w.factors = {{poly({-5, 1}), 1}};
    const auto r = verify_surface(w, 0);
    REQUIRE(r.entries.size() == 2);
    CHECK(r.entries[0].ord == 1);
    CHECK(r.entries[1].ord == 1);
    CHECK(r.pass);
  }
  SUBCASE("p = 2 is flagged") {
    w.p = 2;
    w.factors = {{poly({-2, 1}), 1}};
    const auto r = verify_surface(w, 0);
    CHECK(r.experimental);
    CHECK(has_skip(r, "y_p", "char-2-not-computed"));
    // Without the fiber factor the product does not close: Q_2 with a = 1 gives zeta_8.
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries[0].index == Mu8(1));
    CHECK_FALSE(r.pass);
  }
}

TEST_CASE("surface: seeded scenarios") {
  for (std::int64_t p : {3, 5, 7}) {
    for (const auto& s : generate_scenarios(ScenarioKind::VerifySurface, 200 + static_cast<std::uint64_t>(p), 6, p)) {
      CAPTURE(to_json(s).dump());
      const auto r = verify_surface(s.omega_surface, s.c_psi);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("surface: skipped curves are trivial") {
  const auto s = generate_scenarios(ScenarioKind::VerifySurface, 31, 1, 7).front();
  for (const auto& q : {poly({-14, 1}), poly({21, 0, 1}), poly({7, 0, 0, 1})}) {
    bool listed = false;
    for (const auto& f : s.omega_surface.factors) listed = listed || f.poly == q;
    if (listed) continue;
    const auto d = surface_data(s.omega_surface, FormalCurve::poly_curve(q));
    CHECK(d.ord == 0);
    CHECK(weil_index_2dlocal(d, s.c_psi).is_one());
  }
}
