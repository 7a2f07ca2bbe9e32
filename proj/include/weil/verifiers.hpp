#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weil/cyclotomic.hpp"
#include "weil/finite_quadratic.hpp"
#include "weil/laurent_residue.hpp"
#include "weil/rational_function.hpp"
#include "weil/weil_engine.hpp"

namespace weil {

struct PlaceEntry {
  std::string place;
  Mu8 index;
  /// Parity datum when one applies (ord at the point, or the t-order of b), else 0.
  std::int64_t ord = 0;
  std::string detail;
  double seconds = 0;  // informational only
};

struct SkippedPlace {
  std::string place;
  std::string justification;  // "even-ord" or "unit-lattice"
};

struct WeilIndexReport {
  std::string scenario_id;
  std::vector<PlaceEntry> entries;
  std::vector<SkippedPlace> skipped;
  /// Places outside the computed set re-run through the engine; each must be 1.
  std::vector<PlaceEntry> spot_checks;
  Mu8 product;
  bool pass = false;
  bool experimental = false;

  /// Sets product and pass from the entries and spot checks.
  void finalize();
};

struct VerifyOptions {
  int precision = kDefaultPrecision;
  std::vector<std::int64_t> extra_places;
  /// Number of unlisted primes re-run to audit the skip justification.
  int spot_checks = 2;
};

/// Distinct prime factors of a nonzero integer, ascending.
std::vector<std::int64_t> prime_factors(const mpz_class& n);

WeilIndexReport verify_global(const RationalMatrix& q, const VerifyOptions& opts = {});
WeilIndexReport verify_loop(const Matrix<RationalFunction>& q, const RationalFunction& w,
                            const VerifyOptions& opts = {});
WeilIndexReport verify_curve(std::int64_t p, const FactoredDifferential& omega, const VerifyOptions& opts = {});
WeilIndexReport verify_surface(const SurfaceDifferential& omega, std::int64_t c_psi,
                               const VerifyOptions& opts = {});

}  // namespace weil
