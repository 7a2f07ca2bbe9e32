#include <doctest.h>

#include <random>

#include "weil/laurent_residue.hpp"

using weil::ClosedPoint;
using weil::Factor;
using weil::FactoredDifferential;
using weil::FactoredRatFunc;
using weil::LocalField;
using weil::LocalFieldElement;
using weil::QPoly;

namespace {

using Q = std::vector<mpq_class>;

QPoly poly(Q c) { return QPoly(std::move(c)); }

FactoredDifferential diff(mpq_class c, std::vector<Factor> f) { return {FactoredRatFunc{std::move(c), std::move(f)}}; }

// f(r + s) by Horner over Q[s].
QPoly taylor_shift(const QPoly& f, const mpq_class& r) {
  QPoly acc;
  const QPoly x = poly({r, 1});
  for (std::size_t i = f.coeffs().size(); i-- > 0;) acc = acc * x + QPoly::constant(f.coeffs()[i]);
  return acc;
}

// Laurent coefficients of num/den at s = 0 from s^ord upward, by long division over Q.
std::vector<mpq_class> rational_laurent(const QPoly& num, const QPoly& den, std::size_t n, int& ord) {
  const int a = num.order(), b = den.order();
  ord = a - b;
  std::vector<mpq_class> nu, de;
  for (std::size_t i = static_cast<std::size_t>(a); i < static_cast<std::size_t>(a) + n; ++i) nu.push_back(num[i]);
  for (std::size_t i = static_cast<std::size_t>(b); i < static_cast<std::size_t>(b) + n; ++i) de.push_back(den[i]);
  std::vector<mpq_class> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    mpq_class acc = nu[k];
    for (std::size_t i = 1; i <= k; ++i) acc -= de[i] * out[k - i];
    out[k] = acc / de[0];
  }
  return out;
}

mpq_class rnd(std::mt19937_64& rng, int h) {
  mpq_class r(static_cast<long>(rng() % (2 * h + 1)) - h, static_cast<long>(rng() % 4) + 1);
  r.canonicalize();
  return r;
}

// Random differential over Q_p whose support mixes rational, unramified and
// Eisenstein points.
FactoredDifferential random_differential(std::mt19937_64& rng, long p) {
  std::vector<Factor> fs;
  auto exp = [&] {
    int e = 0;
    while (e == 0) e = static_cast<int>(rng() % 5) - 2;
    return e;
  };
  const int linear = 1 + static_cast<int>(rng() % 3);
  while (static_cast<int>(fs.size()) < linear) {
    const QPoly f = poly({rnd(rng, 10), 1});
    bool dup = false;
    for (const auto& g : fs) dup = dup || g.poly == f;
    if (!dup) fs.push_back({f, exp()});
  }
  // x^2 + b x + c irreducible mod p.
  for (;;) {
    const long b = static_cast<long>(rng() % static_cast<std::uint64_t>(p));
    const long c = static_cast<long>(rng() % static_cast<std::uint64_t>(p));
    bool root = false;
    for (long x = 0; x < p; ++x) root = root || (x * x + b * x + c) % p == 0;
    if (!root) {
      fs.push_back({poly({c + p * static_cast<long>(rng() % 3), b, 1}), exp()});
      break;
    }
  }
  const long u = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(p - 1));
  if (rng() % 2) fs.push_back({poly({-p * u, p * static_cast<long>(rng() % 3), 1}), exp()});
  else fs.push_back({poly({p * u, 0, p * static_cast<long>(rng() % 2), 1}), exp()});
  mpq_class c = rnd(rng, 20);
  if (c == 0) c = 1;
  return diff(c, std::move(fs));
}

}  // namespace

TEST_CASE("expansions at rational points and infinity") {
  const auto q5 = LocalField::padic(5);
  const auto t_dt = diff(1, {{poly({0, 1}), 1}});
  const auto e0 = weil::expand_at(q5, t_dt, ClosedPoint::finite(poly({0, 1})));
  CHECK(e0.ord == 1);
  CHECK(e0.coeffs[0].agrees_with(LocalFieldElement::one(q5)));
  CHECK(e0.coeffs[1].is_zero());
  const auto ei = weil::expand_at(q5, t_dt, ClosedPoint::at_infinity());
  CHECK(ei.ord == -3);
  CHECK(ei.coeffs[0].agrees_with(LocalFieldElement::from_int(q5, -1)));
  const auto q3 = LocalField::padic(3);
  const auto sq = diff(1, {{poly({-1, 1}), 2}});
  CHECK(weil::ord_at(q3, sq, ClosedPoint::finite(poly({-1, 1}))) == 2);
  CHECK(weil::leading_coeff(q3, sq, ClosedPoint::finite(poly({-1, 1}))).agrees_with(LocalFieldElement::one(q3)));
}

TEST_CASE("expansion at an Eisenstein point") {
  const auto q5 = LocalField::padic(5);
  const QPoly P = poly({-5, 0, 1});
  const auto w = diff(1, {{P, -1}});
  const auto e = weil::expand_at(q5, w, ClosedPoint::finite(P), 3);
  CHECK(e.ord == -1);
  const auto th = LocalFieldElement::uniformizer(e.field);
  // t = theta (1 + s/5)^(1/2), so dt/P = theta (1/10 - s/100 + 3 s^2/2000) ds / s.
  CHECK(e.coeffs[0].agrees_with((LocalFieldElement::from_int(e.field, 2) * th).inverse()));
  CHECK(e.coeffs[1].agrees_with(th * LocalFieldElement::from_rational(e.field, mpq_class(-1, 100))));
  CHECK(e.coeffs[2].agrees_with(th * LocalFieldElement::from_rational(e.field, mpq_class(3, 2000))));
  CHECK(weil::ord_at(q5, w, ClosedPoint::at_infinity()) == 0);
  CHECK(weil::leading_coeff(q5, w, ClosedPoint::at_infinity()).agrees_with(LocalFieldElement::from_int(q5, -1)));
  CHECK(weil::residue_at(q5, {}, w, ClosedPoint::finite(P)).is_zero());
}

TEST_CASE("residues of dt/t") {
  const auto q7 = LocalField::padic(7);
  const auto w = diff(1, {{poly({0, 1}), -1}});
  CHECK(weil::residue_at(q7, {}, w, ClosedPoint::finite(poly({0, 1}))).agrees_with(LocalFieldElement::one(q7)));
  CHECK(weil::residue_at(q7, {}, w, ClosedPoint::at_infinity()).agrees_with(LocalFieldElement::from_int(q7, -1)));
}

TEST_CASE("expansions at rational points against exact division over Q") {
  std::mt19937_64 rng(61);
  for (long p : {3L, 5L, 7L}) {
    const auto base = LocalField::padic(p);
    for (int trial = 0; trial < 10; ++trial) {
      const auto w = random_differential(rng, p);
      const auto rf = w.num.to_rational_function();
      for (const auto& f : w.num.factors) {
        if (f.poly.degree() != 1) continue;
        const mpq_class r = -f.poly[0];
        int ord = 0;
        const auto oracle = rational_laurent(taylor_shift(rf.num(), r), taylor_shift(rf.den(), r), 4, ord);
        const auto e = weil::expand_at(base, w, ClosedPoint::finite(f.poly), 4);
        CHECK(e.ord == ord);
        for (std::size_t i = 0; i < 4; ++i) {
          CHECK(e.coeffs[i].agrees_with(LocalFieldElement::from_rational(base, oracle[i])));
        }
      }
    }
  }
}

TEST_CASE("residue theorem on P^1") {
  std::mt19937_64 rng(71);
  for (long p : {3L, 5L, 7L}) {
    const auto base = LocalField::padic(p);
    for (int trial = 0; trial < 12; ++trial) {
      const auto w = random_differential(rng, p);
      auto total = LocalFieldElement::zero(base);
      std::int64_t vmin = INT64_MAX;
      for (const auto& v : weil::support(w)) {
        const auto r = weil::residue_at(base, {}, w, v);
        if (!r.is_zero()) vmin = std::min(vmin, r.valuation());
        total = total + r;
      }
      CAPTURE(w.num.to_rational_function().str());
      CAPTURE(total.abs_precision());
      CHECK(total.is_zero());
      // The cancellation is certified to at least 4 digits below the largest residue.
      if (vmin != INT64_MAX) CHECK(total.abs_precision() >= vmin + 4);
    }
  }
}

TEST_CASE("ord is additive") {
  std::mt19937_64 rng(81);
  const auto base = LocalField::padic(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_differential(rng, 5);
    const auto b = random_differential(rng, 5);
    const FactoredDifferential ab{a.num * b.num};
    for (const auto& v : weil::support(ab)) {
      // b as a function: its dt contributes -2 at infinity only.
      const auto ob = weil::ord_at(base, b, v) + (v.infinity ? 2 : 0);
      CHECK(weil::ord_at(base, ab, v) == weil::ord_at(base, a, v) + ob);
    }
  }
}

TEST_CASE("point kinds") {
  const auto q3 = LocalField::padic(3);
  CHECK(weil::point_field(q3, poly({1, 0, 1})).kind() == weil::FieldKind::Unramified);
  CHECK(weil::point_field(q3, poly({3, 0, 1})).kind() == weil::FieldKind::Eisenstein);
  CHECK(weil::point_field(q3, poly({mpq_class(1, 3), 1})).kind() == weil::FieldKind::PAdic);
  try {
    weil::point_field(q3, poly({9, 0, 1}));  // x^2 + 9: ramified but not Eisenstein
    FAIL("expected an unsupported point");
  } catch (const weil::Error& e) {
    CHECK(e.kind() == weil::ErrorKind::Unsupported);
  }
  CHECK_THROWS_AS(weil::expand_at(q3, diff(1, {{poly({1, 1}), 1}, {poly({1, 1}), 2}}), ClosedPoint::at_infinity()),
                  weil::Error);
}

TEST_CASE("surface data") {
  const auto fiber = weil::FormalCurve::fiber_curve();
  weil::SurfaceDifferential w{5, 1, {1}, {}};
  auto y = weil::surface_data(w, fiber);
  CHECK(y.ord == 1);
  CHECK(y.leading.agrees_with(LocalFieldElement::one(y.leading.field())));

  weil::SurfaceDifferential lin{5, 0, {1}, {{poly({-5, 1}), 1}}};
  y = weil::surface_data(lin, weil::FormalCurve::poly_curve(poly({-5, 1})));
  CHECK(y.ord == 1);
  CHECK(y.leading.agrees_with(LocalFieldElement::one(y.leading.field())));

  weil::SurfaceDifferential eis{5, 0, {1}, {{poly({-5, 0, 1}), 1}}};
  y = weil::surface_data(eis, fiber);
  CHECK(y.ord == 0);
  const auto u = LocalFieldElement::uniformizer(y.leading.field());
  CHECK(y.leading.agrees_with(u * u));

  // p^2 (1 + 3t) (t - 5)^-1 dt along t^2 - 5: leading 25 (1 + 3 theta) / ((theta - 5) 2 theta).
  weil::SurfaceDifferential mix{5, 2, {1, 3}, {{poly({-5, 1}), -1}, {poly({-5, 0, 1}), 1}}};
  y = weil::surface_data(mix, weil::FormalCurve::poly_curve(poly({-5, 0, 1})));
  CHECK(y.ord == 1);
  const auto& k = y.leading.field();
  const auto th = LocalFieldElement::uniformizer(k);
  const auto one = LocalFieldElement::one(k);
  const auto expect = LocalFieldElement::from_int(k, 25) * (one + LocalFieldElement::from_int(k, 3) * th) /
                      ((th - LocalFieldElement::from_int(k, 5)) * LocalFieldElement::from_int(k, 2) * th);
  CHECK(y.leading.agrees_with(expect));

  CHECK_THROWS_AS(weil::surface_data({5, 0, {5}, {}}, fiber), weil::Error);
  CHECK_THROWS_AS(weil::surface_data({5, 0, {1}, {{poly({-1, 1}), 1}}}, fiber), weil::Error);
  CHECK_THROWS_AS(weil::surface_data({5, 0, {1}, {{poly({25, 0, 1}), 1}}}, fiber), weil::Error);
}
