#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "weil/local_field.hpp"
#include "weil/rational_function.hpp"

namespace weil {

/// A monic irreducible polynomial over Q with a nonzero exponent.
struct Factor {
  QPoly poly;
  int exp = 0;
};

/// constant * prod P_j^(e_j). The P_j are monic and pairwise distinct; each must be
/// irreducible over Q_p, which the supported point kinds certify.
struct FactoredRatFunc {
  mpq_class constant = 1;
  std::vector<Factor> factors;

  /// Structural checks (monic, distinct, nonzero exponents, nonzero constant).
  void validate() const;
  RationalFunction to_rational_function() const;
  friend FactoredRatFunc operator*(const FactoredRatFunc& a, const FactoredRatFunc& b);
};

/// omega = num * dt.
struct FactoredDifferential {
  FactoredRatFunc num;
};

struct ClosedPoint {
  bool infinity = false;
  QPoly poly;  // monic irreducible, when finite

  static ClosedPoint finite(QPoly p) { return {false, std::move(p)}; }
  static ClosedPoint at_infinity() { return {true, {}}; }
  std::string str() const;
};

/// The residue field Q_p[x]/(P) of a finite point: Q_p for linear P, an unramified
/// field when P is p-integral and irreducible mod p, an Eisenstein field when P is
/// Eisenstein. Anything else is unsupported.
LocalField point_field(const LocalField& base, const QPoly& poly);

struct LaurentExpansion {
  ClosedPoint point;
  LocalField field;  // k_v
  std::int64_t ord = 0;
  std::vector<LocalFieldElement> coeffs;  // from t_v^ord upward
};

/// Expansion of omega in k_v((t_v)) dt_v. t_v = P(t) at finite points, s = 1/t at
/// infinity. base must be Q_p.
LaurentExpansion expand_at(const LocalField& base, const FactoredDifferential& omega, const ClosedPoint& v,
                           int terms = 4);
std::int64_t ord_at(const LocalField& base, const FactoredDifferential& omega, const ClosedPoint& v);
LocalFieldElement leading_coeff(const LocalField& base, const FactoredDifferential& omega, const ClosedPoint& v);
/// Tr_{k_v/Q_p} of the t_v^-1 coefficient of f * omega.
LocalFieldElement residue_at(const LocalField& base, const FactoredRatFunc& f, const FactoredDifferential& omega,
                             const ClosedPoint& v);
/// The factor points followed by infinity.
std::vector<ClosedPoint> support(const FactoredDifferential& omega);

/// omega = p^a * u(t) * prod P_j^(e_j) dt on Spec Z_p[[t]]. u is a polynomial with
/// p-integral coefficients and unit constant term; each P_j is t - alpha with
/// v_p(alpha) >= 1 or an Eisenstein polynomial.
struct SurfaceDifferential {
  std::int64_t p = 0;
  std::int64_t p_power = 0;
  std::vector<mpq_class> unit_series{1};
  std::vector<Factor> factors;

  void validate() const;
};

/// The fiber y_p, or the curve cut out by a distinguished polynomial.
struct FormalCurve {
  bool fiber = true;
  QPoly poly;

  static FormalCurve fiber_curve() { return {true, {}}; }
  static FormalCurve poly_curve(QPoly p) { return {false, std::move(p)}; }
  std::string str() const;
};

/// ord and leading coefficient along a formal curve: in F_p((t)) for the fiber, in
/// K_P = Q_p[x]/(P) for a polynomial curve.
struct FormalCurveData {
  FormalCurve curve;
  std::int64_t ord = 0;
  LocalFieldElement leading;
};

FormalCurveData surface_data(const SurfaceDifferential& omega, const FormalCurve& y,
                             int precision = kDefaultPrecision);

}  // namespace weil
