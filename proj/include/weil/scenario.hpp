#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "weil/finite_quadratic.hpp"
#include "weil/laurent_residue.hpp"
#include "weil/local_field.hpp"
#include "weil/verifiers.hpp"

namespace weil {

using json = nlohmann::ordered_json;

enum class ScenarioKind { WeilLocal, WeilLoop, GaussSum, VerifyGlobal, VerifyCurve, VerifySurface, CheckFinite };

const char* to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& s);

/// {"kind": "padic" | "unramified" | "eisenstein" | "eqchar" | "real" | "complex",
///  "p": p, "poly": [...]}. eqchar polys are residue moduli over F_p.
struct FieldDescriptor {
  FieldKind kind = FieldKind::PAdic;
  std::int64_t p = 0;
  std::vector<mpq_class> poly;

  LocalField build(int precision) const;
  friend bool operator==(const FieldDescriptor&, const FieldDescriptor&) = default;
};

/// Coefficient a of psi(a x^2 / 2): either an exact rational, or {"val": k,
/// "digits": [...]} meaning p^k sum d_i theta^i (u^k sum d_i u^i over F_q((u)), with
/// d_i indexing F_q elements).
struct ElementSpec {
  std::optional<mpq_class> rational;
  std::int64_t val = 0;
  std::vector<std::int64_t> digits;

  LocalFieldElement build(const LocalField& f) const;
  friend bool operator==(const ElementSpec&, const ElementSpec&) = default;
};

struct CharacterSpec {
  std::int64_t conductor = 0;
  int sign = 0;  // 0: the field's standard sign

  AdditiveCharacter build(const LocalField& f) const;
  friend bool operator==(const CharacterSpec&, const CharacterSpec&) = default;
};

/// sum_i coeffs[i] t^(min_order + i).
struct LaurentSpec {
  int min_order = 0;
  std::vector<mpq_class> coeffs;

  RationalFunction build() const { return RationalFunction::laurent(min_order, coeffs); }
  friend bool operator==(const LaurentSpec&, const LaurentSpec&) = default;
};

struct FiniteCharSpec {
  std::vector<std::int64_t> orders;
  RationalMatrix gram;

  FiniteQuadraticChar build() const { return FiniteQuadraticChar(FiniteAbelianGroup(orders), gram); }
  friend bool operator==(const FiniteCharSpec&, const FiniteCharSpec&) = default;
};

struct Scenario {
  std::string id;
  ScenarioKind kind = ScenarioKind::CheckFinite;
  int precision = kDefaultPrecision;
  std::uint64_t seed = 0;

  // weil-local, weil-loop
  FieldDescriptor field;
  CharacterSpec character;
  ElementSpec a;
  std::vector<std::vector<LaurentSpec>> loop_matrix;
  LaurentSpec omega_loop;
  // gauss-sum, check-finite
  FiniteCharSpec finite;
  // verify-global
  RationalMatrix matrix;
  std::vector<std::int64_t> extra_places;
  // verify-curve, verify-surface
  std::int64_t p = 0;
  FactoredDifferential omega_curve;
  SurfaceDifferential omega_surface;
  std::int64_t c_psi = 0;

  friend bool operator==(const Scenario& a, const Scenario& b);
};

/// Validates the schema (unknown fields are rejected) and builds a Scenario.
Scenario parse_scenario(const json& j);
json to_json(const Scenario& s);

json to_json(Mu8 m);
json to_json(const CycInt& c);
json to_json(const WeilIndexReport& r, bool include_timing = true);

struct RunResult {
  json report;
  int exit_code = 0;  // 0 pass, 1 verification failure
  std::string text;   // human-readable table
};

struct RunOptions {
  std::optional<int> precision;
  std::vector<std::int64_t> extra_places;
  bool include_timing = true;
};

/// Runs a scenario. Library errors propagate as weil::Error.
RunResult run_scenario(const Scenario& s, const RunOptions& opts = {});

/// Uniform integer in [lo, hi] by rejection, identical across standard libraries.
std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);

/// Deterministic scenarios satisfying the engine preconditions. p = 0 draws p
/// from {3, 5, 7} where a prime applies.
std::vector<Scenario> generate_scenarios(ScenarioKind kind, std::uint64_t seed, int count, std::int64_t p = 0);

}  // namespace weil
