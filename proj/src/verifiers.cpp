#include "weil/verifiers.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "weil/error.hpp"

namespace weil {

namespace {

template <class F>
PlaceEntry timed(std::string place, F&& compute) {
  const auto start = std::chrono::steady_clock::now();
  PlaceEntry e;
  e.place = std::move(place);
  compute(e);
  e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return e;
}

std::string qp_name(std::int64_t p) { return "Q_" + std::to_string(p); }

void add_denominator_primes(std::set<std::int64_t>& out, const mpq_class& x) {
  for (auto p : prime_factors(x.get_num())) out.insert(p);
  for (auto p : prime_factors(x.get_den())) out.insert(p);
}

void check_extra(const std::vector<std::int64_t>& extra) {
  for (auto p : extra) {
    if (!fp::is_prime(p)) throw Error(ErrorKind::Validation, "probe place " + std::to_string(p) + " is not prime");
  }
}

/// The first `count` primes outside `used`.
std::vector<std::int64_t> unlisted_primes(const std::set<std::int64_t>& used, int count) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 3; static_cast<int>(out.size()) < count; p += 2) {
    if (fp::is_prime(p) && !used.count(p)) out.push_back(p);
  }
  return out;
}

}  // namespace

void WeilIndexReport::finalize() {
  product = Mu8(0);
  for (const auto& e : entries) product *= e.index;
  pass = product.is_one();
  for (const auto& e : spot_checks) pass = pass && e.index.is_one();
}

std::vector<std::int64_t> prime_factors(const mpz_class& n) {
  mpz_class m = abs(n);
  if (m == 0) throw Error(ErrorKind::Degenerate, "prime factors of zero");
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p <= 1'000'000 && mpz_class(p) * p <= m; ++p) {
    if (m % p != 0) continue;
    out.push_back(p);
    while (m % p == 0) m /= p;
  }
  if (m > 1) {
    if (mpz_probab_prime_p(m.get_mpz_t(), 30) == 0 || !m.fits_slong_p()) {
      throw Error(ErrorKind::Size, "cannot factor " + m.get_str() + " within the trial-division bound");
    }
    out.push_back(m.get_si());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

WeilIndexReport verify_global(const RationalMatrix& q, const VerifyOptions& opts) {
  check_extra(opts.extra_places);
  const auto diag = diagonalize_symmetric(q);
  WeilIndexReport r;
  // Outside 2, det and the denominators, Q is in GL_n of the integers with unit
  // conductor, so O^n is self-dual.
  std::set<std::int64_t> bad{2};
  mpq_class det = 1;
  for (const auto& d : diag.diagonal) det *= d;
  add_denominator_primes(bad, det);
  for (const auto& row : q) {
    for (const auto& x : row) add_denominator_primes(bad, mpq_class(x.get_den()));
  }
  std::set<std::int64_t> places = bad;
  places.insert(opts.extra_places.begin(), opts.extra_places.end());

  r.entries.push_back(timed("R", [&](PlaceEntry& e) {
    e.index = weil_index_form(AdditiveCharacter::standard(LocalField::real()), q);
  }));
  for (auto p : places) {
    r.entries.push_back(timed(qp_name(p), [&](PlaceEntry& e) {
      e.index = weil_index_form(AdditiveCharacter::standard(LocalField::padic(p, opts.precision)), q);
      if (!bad.count(p)) e.detail = "probe";
    }));
  }
  r.skipped.push_back({"Q_p, p not in {2} u primes(det) u primes(denominators)", "unit-lattice"});
  for (auto p : unlisted_primes(places, opts.spot_checks)) {
    r.spot_checks.push_back(timed(qp_name(p), [&](PlaceEntry& e) {
      e.index = weil_index_form(AdditiveCharacter::standard(LocalField::padic(p, opts.precision)), q);
      e.detail = "unit-lattice";
    }));
  }
  r.finalize();
  return r;
}

WeilIndexReport verify_loop(const Matrix<RationalFunction>& q, const RationalFunction& w, const VerifyOptions& opts) {
  check_extra(opts.extra_places);
  if (w.is_zero()) throw Error(ErrorKind::Degenerate, "loop differential is zero");
  const auto diag = diagonalize_symmetric(q);
  WeilIndexReport r;
  // Each diagonal entry reduces to psi_v(b_0 x^2 / 2), b = d w; at odd p prime to
  // b_0 that is a unit coefficient on a self-dual lattice.
  std::set<std::int64_t> bad{2};
  for (const auto& d : diag.diagonal) add_denominator_primes(bad, (d * w).leading());
  std::set<std::int64_t> places = bad;
  places.insert(opts.extra_places.begin(), opts.extra_places.end());

  auto run = [&](const AdditiveCharacter& psi) { return weil_index_loop_form(psi, q, w); };
  r.entries.push_back(timed("R", [&](PlaceEntry& e) { e.index = run(AdditiveCharacter::standard(LocalField::real())); }));
  for (auto p : places) {
    r.entries.push_back(timed(qp_name(p), [&](PlaceEntry& e) {
      e.index = run(AdditiveCharacter::standard(LocalField::padic(p, opts.precision)));
      if (!bad.count(p)) e.detail = "probe";
    }));
  }
  r.skipped.push_back({"Q_p, p not in {2} u primes(leading coefficients)", "unit-lattice"});
  for (auto p : unlisted_primes(places, opts.spot_checks)) {
    r.spot_checks.push_back(timed(qp_name(p), [&](PlaceEntry& e) {
      e.index = run(AdditiveCharacter::standard(LocalField::padic(p, opts.precision)));
      e.detail = "unit-lattice";
    }));
  }
  r.finalize();
  return r;
}

WeilIndexReport verify_curve(std::int64_t p, const FactoredDifferential& omega, const VerifyOptions& opts) {
  if (!fp::is_prime(p)) throw Error(ErrorKind::Validation, std::to_string(p) + " is not prime");
  omega.num.validate();
  const auto base = LocalField::padic(p, opts.precision);
  WeilIndexReport r;
  for (const auto& v : support(omega)) {
    const auto e = timed(v.str(), [&](PlaceEntry& entry) {
      const auto x = expand_at(base, omega, v, 1);
      entry.ord = x.ord;
      entry.detail = x.field.str();
      if (x.ord % 2 != 0) entry.index = weil_index_local({x.coeffs[0], AdditiveCharacter{x.field, 0, 1}});
    });
    if (e.ord % 2 == 0) r.skipped.push_back({e.place + " (ord " + std::to_string(e.ord) + ")", "even-ord"});
    else r.entries.push_back(e);
  }
  r.skipped.push_back({"closed points off the support (ord 0)", "even-ord"});
  r.finalize();
  return r;
}

WeilIndexReport verify_surface(const SurfaceDifferential& omega, std::int64_t c_psi, const VerifyOptions& opts) {
  omega.validate();
  WeilIndexReport r;
  r.experimental = omega.p == 2;
  std::vector<FormalCurve> curves{FormalCurve::fiber_curve()};
  for (const auto& f : omega.factors) curves.push_back(FormalCurve::poly_curve(f.poly));
  for (const auto& y : curves) {
    if (y.fiber && omega.p == 2) {
      // psi(a x^2 / 2) has no meaning over F_2((t)), so the fiber factor is left out
      // and the product is reported as computed.
      const auto data = surface_data(omega, y, opts.precision);
      r.skipped.push_back({y.str() + " (ord " + std::to_string(data.ord) + ")", "char-2-not-computed"});
      continue;
    }
    const auto e = timed(y.str(), [&](PlaceEntry& entry) {
      const auto data = surface_data(omega, y, opts.precision);
      entry.ord = data.ord;
      entry.detail = data.leading.field().str();
      entry.index = weil_index_2dlocal(data, c_psi);
    });
    const bool even = y.fiber ? (e.ord - c_psi) % 2 == 0 : e.ord % 2 == 0;
    if (even) {
      r.skipped.push_back({e.place + " (ord " + std::to_string(e.ord) + ")", "even-ord"});
    } else {
      r.entries.push_back(e);
    }
  }
  r.skipped.push_back({"distinguished polynomials off the support (ord 0)", "even-ord"});
  r.finalize();
  return r;
}

}  // namespace weil
