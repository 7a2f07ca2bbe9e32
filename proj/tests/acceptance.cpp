// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <mpfr.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "weil/error.hpp"
#include "weil/finite_quadratic.hpp"
#include "weil/laurent_residue.hpp"
#include "weil/scenario.hpp"
#include "weil/verifiers.hpp"
#include "weil/weil_engine.hpp"

using namespace weil;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int number;
  std::string name;
  double limit_seconds;  // 0: no limit
  std::function<Outcome()> run;
};

// Criterion 1: Fourier identity on 200 generated characters, |A| <= 343.
Outcome fourier_identity() {
  int ok = 0;
  std::uint64_t largest = 0;
  std::set<std::int64_t> primes;
  const auto scenarios = generate_scenarios(ScenarioKind::CheckFinite, 1001, 200);
  for (const auto& s : scenarios) {
    const auto h = s.finite.build();
    largest = std::max(largest, h.group().size());
    const std::int64_t d = h.group().orders()[0];
    for (std::int64_t q : {2, 3, 5, 7}) {
      if (d % q == 0) primes.insert(q);
    }
    if (h.group().size() <= 343 && fourier_identity_check(h)) ++ok;
  }
  std::ostringstream d;
  d << ok << "/200 characters, max |A| = " << largest << ", " << primes.size() << " residue primes";
  return {ok == 200 && primes.size() == 4, d.str()};
}

// Criterion 2: SL2 relations with lambda equal to the Gauss sum, 50 characters with |A| <= 64.
Outcome sl2_relations() {
  int ok = 0, seen = 0;
  for (std::uint64_t seed = 2002; seen < 50; ++seed) {
    for (const auto& s : generate_scenarios(ScenarioKind::CheckFinite, seed, 20)) {
      const auto h = s.finite.build();
      if (h.group().size() > 64 || seen == 50) continue;
      ++seen;
      const auto r = sl2_relation_check(h);
      const auto g = gauss_sum(h);
      const std::uint64_t n = std::lcm(r.scalar.order(), g.order());
      if (r.pass4 && r.pass3 && r.full_matrices && equal(r.scalar, g, n)) ++ok;
    }
  }
  return {ok == 50, std::to_string(ok) + "/50 characters satisfy S^4 = |A|^2 and (TS)^3 = G(h) S^2"};
}

// Criterion 3: F_p quotient index against a direct 128-bit complex sum.
//
// h(x) = exp(2 pi i u x^2 / (2p)) on Z/p, i.e. psi_p(a x^2 / 2) with a = u/p. The
// oracle sums exp(2 pi i k / p) with k = u * inv(2) * x^2 mod p in MPFR and snaps
// the phase of sum / sqrt(p) to the nearest multiple of pi/4 when the certified
// error radius leaves no other candidate.
bool direct_sum_index(std::int64_t p, std::int64_t u, int& out) {
  const mpfr_prec_t prec = 128;
  mpfr_t re, im, s, c, t, pi;
  for (auto* x : {&re, &im, &s, &c, &t, &pi}) mpfr_init2(*x, prec);
  mpfr_set_zero(re, 1);
  mpfr_set_zero(im, 1);
  mpfr_const_pi(pi, MPFR_RNDN);
  const std::int64_t half = (p + 1) / 2;
  for (std::int64_t x = 0; x < p; ++x) {
    const std::int64_t k = (u % p + p) % p * half % p * (x * x % p) % p;
    mpfr_mul_si(t, pi, 2 * k, MPFR_RNDN);
    mpfr_div_si(t, t, p, MPFR_RNDN);
    mpfr_sin_cos(s, c, t, MPFR_RNDN);
    mpfr_add(re, re, c, MPFR_RNDN);
    mpfr_add(im, im, s, MPFR_RNDN);
  }
  const double r = mpfr_get_d(re, MPFR_RNDN), i = mpfr_get_d(im, MPFR_RNDN);
  for (auto* x : {&re, &im, &s, &c, &t, &pi}) mpfr_clear(*x);
  // Each term carries a few ulps at 128 bits; the double conversion adds 2^-52
  // relative. Both are far inside the pi/8 separation between mu_8 candidates.
  const double radius = static_cast<double>(p) * std::ldexp(1.0, -120) + 4 * std::ldexp(std::sqrt(double(p)), -52);
  const double modulus = std::hypot(r, i);
  if (std::abs(modulus * modulus - static_cast<double>(p)) > 1e-6 * static_cast<double>(p)) return false;
  const double angle = std::atan2(i, r);
  const double k = std::round(angle / (M_PI / 4));
  const double angular_error = radius / modulus;
  if (std::abs(angle - k * M_PI / 4) + angular_error >= M_PI / 8) return false;
  out = (static_cast<int>(k) % 8 + 8) % 8;
  return true;
}

Outcome gauss_sum_law() {
  int ok = 0, total = 0;
  std::string first_bad;
  for (std::int64_t p = 3; p <= 50; p += 2) {
    if (!fp::is_prime(p)) continue;
    const auto psi = AdditiveCharacter::standard(LocalField::padic(p));
    for (std::int64_t u = 1; u < p; ++u) {
      ++total;
      int oracle = -1;
      const bool certified = direct_sum_index(p, u, oracle);
      const Mu8 engine = weil_index(psi, mpq_class(u, p));
      if (certified && engine.exponent() == oracle) {
        ++ok;
      } else if (first_bad.empty()) {
        first_bad = " (first mismatch p=" + std::to_string(p) + ", u=" + std::to_string(u) + ")";
      }
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " (p, unit) pairs" + first_bad};
}

QuadraticCharDescriptor descriptor(const Scenario& s) {
  const auto f = s.field.build(s.precision);
  return {s.a.build(f), s.character.build(f)};
}

std::string field_class(const Scenario& s) {
  if (s.field.kind == FieldKind::Eisenstein) return "eisenstein";
  if (s.field.kind == FieldKind::Unramified) return "unramified";
  if (s.field.kind == FieldKind::EqChar) return "eqchar";
  return s.field.p == 2 ? "Q_2" : "Q_p";
}

// Criterion 4: the index is the same at every admissible lattice exponent.
Outcome lattice_invariance() {
  int ok = 0, comparisons = 0;
  std::map<std::string, int> classes;
  for (const auto& s : generate_scenarios(ScenarioKind::WeilLocal, 4004, 100)) {
    const auto h = descriptor(s);
    const auto w = lattice_window(h);
    const Mu8 ref = weil_index_local(h);
    bool same = true;
    for (std::int64_t d = w.d_low; d <= w.d_high; ++d) {
      same = same && weil_index_local_at(h, d) == ref;
      ++comparisons;
    }
    ok += same;
    ++classes[field_class(s)];
    if (s.field.p == 2) ++classes["p=2"];
  }
  std::ostringstream d;
  d << ok << "/100 configurations, " << comparisons << " lattice exponents;";
  for (const auto& [k, n] : classes) d << " " << k << ":" << n;
  const bool coverage = classes["p=2"] > 0 && classes["eisenstein"] > 0 && classes["unramified"] > 0;
  return {ok == 100 && coverage, d.str()};
}

// Criterion 5: certified self-dual configurations give 1 through the quotient route.
Outcome self_dual() {
  int found = 0, ok = 0, deeper = 0;
  for (std::uint64_t seed = 5005; found < 100 && seed < 5100; ++seed) {
    for (const auto& s : generate_scenarios(ScenarioKind::WeilLocal, seed, 40)) {
      if (found == 100) break;
      const auto h = descriptor(s);
      const auto w = lattice_window(h);
      if (!w.self_dual) continue;
      ++found;
      bool good = weil_index_local_at(h, w.d_high).is_one();
      if (w.d_low < w.d_high) {
        good = good && weil_index_local_at(h, w.d_high - 1).is_one();
        ++deeper;
      }
      ok += good;
    }
  }
  return {found == 100 && ok == 100, std::to_string(ok) + "/" + std::to_string(found) +
                                         " self-dual configurations, " + std::to_string(deeper) +
                                         " also checked on a nontrivial quotient"};
}

// Criterion 6: global product formula.
Outcome global_formula() {
  int ok = 0, nondiagonal = 0, n = 0;
  for (const auto& s : generate_scenarios(ScenarioKind::VerifyGlobal, 6006, 25)) {
    ++n;
    VerifyOptions o;
    o.extra_places = s.extra_places;
    const auto r = verify_global(s.matrix, o);
    bool diagonal = true;
    for (std::size_t i = 0; i < s.matrix.size(); ++i) {
      for (std::size_t j = 0; j < s.matrix.size(); ++j) diagonal = diagonal && (i == j || s.matrix[i][j] == 0);
    }
    nondiagonal += !diagonal;
    ok += r.pass && s.extra_places.size() == 10;
  }
  return {ok == n && nondiagonal > 0,
          std::to_string(ok) + "/" + std::to_string(n) + " forms (" + std::to_string(nondiagonal) + " non-diagonal)"};
}

// Criterion 7: loop product formula, plus the cross-verifier check.
Outcome loop_formula() {
  int ok = 0, n = 0;
  for (const auto& s : generate_scenarios(ScenarioKind::WeilLoop, 7007, 12)) {
    ++n;
    ok += run_scenario(s).exit_code == 0;
  }
  const auto one = RationalFunction::constant(1), t = RationalFunction::laurent(1, {1});
  const auto g = verify_global({{1}});
  const auto l = verify_loop({{one}}, t);
  std::multiset<int> a, b;
  for (const auto& e : g.entries) a.insert(e.index.exponent());
  for (const auto& e : l.entries) b.insert(e.index.exponent());
  const bool cross = a == b && l.pass;
  return {ok == n && cross, std::to_string(ok) + "/" + std::to_string(n) +
                                " loop scenarios; cross-check against global [1]: " + (cross ? "same" : "DIFFERENT")};
}

// Criterion 8: curve product formula with rational, unramified, Eisenstein points and infinity.
Outcome curve_formula() {
  int ok = 0, n = 0;
  for (std::int64_t p : {3, 5, 7}) {
    const auto base = LocalField::padic(p);
    for (const auto& s : generate_scenarios(ScenarioKind::VerifyCurve, 8008, 10, p)) {
      ++n;
      std::set<FieldKind> kinds;
      for (const auto& f : s.omega_curve.num.factors) kinds.insert(point_field(base, f.poly).kind());
      const bool mixed = kinds.count(FieldKind::PAdic) && kinds.count(FieldKind::Unramified) &&
                         kinds.count(FieldKind::Eisenstein);
      ok += mixed && verify_curve(p, s.omega_curve).pass;
    }
  }
  return {ok == n && n == 30, std::to_string(ok) + "/" + std::to_string(n) + " differentials over p = 3, 5, 7"};
}

// Criterion 9: surface product formula.
Outcome surface_formula() {
  int ok = 0, n = 0;
  std::set<std::int64_t> cpsi;
  bool p_power = false, unit = false, linear = false, eisenstein = false;
  for (std::int64_t p : {3, 5, 7}) {
    for (const auto& s : generate_scenarios(ScenarioKind::VerifySurface, 9009, 6, p)) {
      ++n;
      cpsi.insert(s.c_psi);
      p_power = p_power || s.omega_surface.p_power != 0;
      unit = unit || s.omega_surface.unit_series.size() > 1;
      for (const auto& f : s.omega_surface.factors) (f.poly.degree() == 1 ? linear : eisenstein) = true;
      ok += verify_surface(s.omega_surface, s.c_psi).pass;
    }
  }
  const bool coverage = cpsi.size() == 3 && p_power && unit && linear && eisenstein;
  std::string c = " c_psi {";
  for (auto x : cpsi) c += " " + std::to_string(x);
  c += " }";
  c += p_power ? ", p-power" : "";
  c += unit ? ", unit series" : "";
  c += linear ? ", linear" : "";
  c += eisenstein ? ", Eisenstein" : "";
  return {ok == n && coverage, std::to_string(ok) + "/" + std::to_string(n) + " scenarios; coverage" + c};
}

// Criterion 10: residues of a differential on P^1 sum to zero at the default precision.
Outcome residue_theorem() {
  int ok = 0, n = 0;
  std::int64_t worst_margin = std::numeric_limits<std::int64_t>::max();
  for (std::int64_t p : {3, 5, 7}) {
    const auto base = LocalField::padic(p);
    const int count = p == 7 ? 16 : 17;
    for (const auto& s : generate_scenarios(ScenarioKind::VerifyCurve, 10010, count, p)) {
      ++n;
      auto total = LocalFieldElement::zero(base);
      std::int64_t smallest = std::numeric_limits<std::int64_t>::max();
      bool any = false;
      for (const auto& v : support(s.omega_curve)) {
        const auto r = residue_at(base, FactoredRatFunc{}, s.omega_curve, v);
        total = total + r;
        if (!r.is_zero()) smallest = std::min(smallest, r.valuation()), any = true;
      }
      const bool zero = total.is_zero();
      if (any) worst_margin = std::min(worst_margin, total.abs_precision() - smallest);
      ok += zero;
    }
  }
  return {ok == n && n == 50, std::to_string(ok) + "/" + std::to_string(n) +
                                  " differentials; smallest cancellation depth below the residues: " +
                                  std::to_string(worst_margin) + " digits"};
}

// Criterion 11: weil_index_arch(R, a) against regularized Fresnel quadrature.
//
// I(eps) = int exp(-eps x^2) exp(2 pi i sign a x^2 / 2) dx by the trapezoid rule on
// [-L, L]. The tail beyond L is at most exp(-eps L^2) / (eps L); the discretization
// error is estimated by step halving; regularization moves the phase by at most
// atan(eps / (pi |a|)) / 2. A match needs the nearest multiple of pi/4 to be the
// only one within the combined radius.
Outcome arch_closed_form() {
  int ok = 0, n = 0;
  double worst_quadrature = 0, worst_radius = 0;
  const double eps = 1e-3;
  for (int sign : {-1, 1}) {
    for (double a : {1.0, -1.0, 3.0, -0.5}) {
      ++n;
      const double L = std::sqrt(40.0 / eps);
      auto trapezoid = [&](double h) {
        const long steps = static_cast<long>(std::ceil(L / h));
        std::complex<double> acc = 0;
        for (long k = -steps; k <= steps; ++k) {
          const double x = static_cast<double>(k) * h;
          acc += std::exp(std::complex<double>(-eps * x * x, M_PI * sign * a * x * x));
        }
        return acc * h;
      };
      const double h = 0.25 / (std::abs(a) * L);
      const auto coarse = trapezoid(2 * h), fine = trapezoid(h);
      const double quadrature = std::abs(fine - coarse) + std::exp(-eps * L * L) / (eps * L);
      worst_quadrature = std::max(worst_quadrature, quadrature);
      const double bias = 0.5 * std::atan(eps / (M_PI * std::abs(a)));
      const double radius = quadrature / std::abs(fine) + bias;
      worst_radius = std::max(worst_radius, radius);
      const double angle = std::arg(fine);
      const double k = std::round(angle / (M_PI / 4));
      const bool unique = std::abs(angle - k * M_PI / 4) + radius < M_PI / 8;
      const Mu8 engine = weil_index_arch(LocalField::real(), mpq_class(a), sign);
      ok += unique && quadrature < 1e-6 && engine == Mu8(static_cast<int>(k));
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/%d (a, sign) pairs; quadrature error <= %.1e, phase radius <= %.1e", ok, n,
                worst_quadrature, worst_radius);
  return {ok == n, buf};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "finite Fourier identity", 10, fourier_identity},
      {2, "SL2 relations, lambda = Gauss sum", 30, sl2_relations},
      {3, "F_p Gauss-sum law vs 128-bit direct sum", 0, gauss_sum_law},
      {4, "lattice invariance", 60, lattice_invariance},
      {5, "self-dual criterion", 0, self_dual},
      {6, "global product formula", 10, global_formula},
      {7, "loop product formula", 0, loop_formula},
      {8, "curve product formula", 60, curve_formula},
      {9, "surface product formula", 60, surface_formula},
      {10, "residue theorem", 0, residue_theorem},
      {11, "archimedean closed form vs Fresnel quadrature", 0, arch_closed_form},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.limit_seconds == 0 || secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("[%s] %2d %s: %s (%.2f s", pass ? "PASS" : "FAIL", c.number, c.name.c_str(), o.detail.c_str(), secs);
    if (c.limit_seconds > 0) std::printf(", limit %.0f s", c.limit_seconds);
    std::printf(")\n");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
