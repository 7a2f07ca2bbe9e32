#include "weil/laurent_residue.hpp"

#include "weil/error.hpp"

namespace weil {

namespace {

using Series = std::vector<LocalFieldElement>;

// v_p of a rational; INT64_MAX for zero.
std::int64_t vp(const mpq_class& x, std::int64_t p) {
  if (x == 0) return INT64_MAX;
  std::int64_t v = 0;
  mpz_class n = x.get_num(), d = x.get_den();
  const mpz_class pp = p;
  while (n % pp == 0) n /= pp, ++v;
  while (d % pp == 0) d /= pp, --v;
  return v;
}

std::int64_t reduce_mod_p(const mpq_class& x, std::int64_t p) {
  const mpz_class pp = p;
  mpz_class n = x.get_num() % pp, d = x.get_den() % pp;
  const auto ni = fp::mod(n.get_si(), p), di = fp::mod(d.get_si(), p);
  return fp::mod(ni * fp::inv(di, p), p);
}

bool is_monic(const QPoly& f) { return !f.is_zero() && f.lead() == 1; }

bool is_eisenstein(const QPoly& f, std::int64_t p) {
  const int n = f.degree();
  if (n < 1 || !is_monic(f)) return false;
  for (int i = 0; i < n; ++i) {
    if (vp(f[static_cast<std::size_t>(i)], p) < 1) return false;
  }
  return vp(f[0], p) == 1;
}

bool is_distinguished(const QPoly& f, std::int64_t p) {
  const int n = f.degree();
  if (n < 1 || !is_monic(f)) return false;
  for (int i = 0; i < n; ++i) {
    if (vp(f[static_cast<std::size_t>(i)], p) < 1) return false;
  }
  return true;
}

LocalFieldElement embed(const LocalField& k, const mpq_class& x) { return LocalFieldElement::from_rational(k, x); }

Series series_mul(const Series& a, const Series& b, std::size_t n) {
  const auto& f = a[0].field();
  Series r(n, LocalFieldElement::zero(f));
  for (std::size_t i = 0; i < n && i < a.size(); ++i) {
    for (std::size_t j = 0; i + j < n && j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  }
  return r;
}

Series series_inv(const Series& a, std::size_t n) {
  const auto& f = a[0].field();
  if (a[0].is_zero()) throw Error(ErrorKind::Precision, "series constant term vanishes to the working precision");
  const auto a0inv = a[0].inverse();
  Series r(n, LocalFieldElement::zero(f));
  r[0] = a0inv;
  for (std::size_t k = 1; k < n; ++k) {
    auto acc = LocalFieldElement::zero(f);
    for (std::size_t i = 1; i <= k && i < a.size(); ++i) acc = acc + a[i] * r[k - i];
    r[k] = -(acc * a0inv);
  }
  return r;
}

Series series_pow(const Series& a, int e, std::size_t n) {
  const auto& f = a[0].field();
  Series base = e < 0 ? series_inv(a, n) : a;
  base.resize(n, LocalFieldElement::zero(f));
  Series r(n, LocalFieldElement::zero(f));
  r[0] = LocalFieldElement::one(f);
  for (int k = 0; k < std::abs(e); ++k) r = series_mul(r, base, n);
  return r;
}

/// g(T(s)) for g over Q.
Series compose(const QPoly& g, const Series& t, std::size_t n) {
  const auto& f = t[0].field();
  Series acc(n, LocalFieldElement::zero(f));
  for (std::size_t i = g.coeffs().size(); i-- > 0;) {
    acc = series_mul(acc, t, n);
    acc[0] = acc[0] + embed(f, g.coeffs()[i]);
  }
  return acc;
}

Series derivative(const Series& a) {
  const auto& f = a[0].field();
  Series r;
  for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * embed(f, mpq_class(static_cast<long>(i))));
  if (r.empty()) r.push_back(LocalFieldElement::zero(f));
  return r;
}

/// T(s) with T(0) = theta and P(T(s)) = s, to n terms, by Newton iteration.
Series newton_parametrization(const QPoly& P, const LocalFieldElement& theta, std::size_t n) {
  const auto& f = theta.field();
  Series t(n, LocalFieldElement::zero(f));
  t[0] = theta;
  const QPoly dP = P.derivative();
  for (std::size_t correct = 1; correct < n; correct *= 2) {
    Series resid = compose(P, t, n);
    if (n > 1) resid[1] = resid[1] - LocalFieldElement::one(f);
    const Series step = series_mul(resid, series_inv(compose(dP, t, n), n), n);
    for (std::size_t i = 0; i < n; ++i) t[i] = t[i] - step[i];
  }
  return t;
}

LocalFieldElement root_of(const LocalField& k, const QPoly& P) {
  if (P.degree() == 1) return embed(k, -P[0]);
  if (k.kind() == FieldKind::Eisenstein) return LocalFieldElement::uniformizer(k);
  return LocalFieldElement::generator(k);
}

/// Coefficients of c * u(T) * prod_(others) Q(T)^e * T'(s) in k_v[[s]], n terms.
Series finite_series(const LocalField& k, const QPoly& P, const LocalFieldElement& c, const QPoly& u,
                     const std::vector<Factor>& others, std::size_t n) {
  const Series t = newton_parametrization(P, root_of(k, P), n + 1);
  Series s = derivative(t);
  s.resize(n, LocalFieldElement::zero(k));
  for (auto& x : s) x = x * c;
  if (!(u == QPoly::constant(1))) s = series_mul(s, compose(u, t, n), n);
  for (const auto& q : others) s = series_mul(s, series_pow(compose(q.poly, t, n), q.exp, n), n);
  return s;
}

void check_leading(const Series& s, const std::string& where) {
  if (s.empty() || s[0].is_zero()) {
    throw Error(ErrorKind::Precision, "leading coefficient at " + where + " vanishes to the working precision");
  }
}

int exponent_of(const std::vector<Factor>& fs, const QPoly& P, std::vector<Factor>* others) {
  int e = 0;
  for (const auto& f : fs) {
    if (f.poly == P) e = f.exp;
    else if (others) others->push_back(f);
  }
  return e;
}

}  // namespace

void FactoredRatFunc::validate() const {
  if (constant == 0) throw Error(ErrorKind::Validation, "factored function with zero constant");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& f = factors[i];
    if (f.poly.degree() < 1 || !is_monic(f.poly)) {
      throw Error(ErrorKind::Validation, "factor " + f.poly.str() + " is not monic of positive degree");
    }
    if (f.exp == 0) throw Error(ErrorKind::Validation, "factor " + f.poly.str() + " has exponent 0");
    for (std::size_t j = 0; j < i; ++j) {
      if (factors[j].poly == f.poly) throw Error(ErrorKind::Validation, "repeated factor " + f.poly.str());
    }
  }
}

RationalFunction FactoredRatFunc::to_rational_function() const {
  RationalFunction r = RationalFunction::constant(constant);
  for (const auto& f : factors) {
    for (int k = 0; k < std::abs(f.exp); ++k) r = f.exp > 0 ? r * RationalFunction(f.poly) : r / RationalFunction(f.poly);
  }
  return r;
}

FactoredRatFunc operator*(const FactoredRatFunc& a, const FactoredRatFunc& b) {
  FactoredRatFunc r{a.constant * b.constant, a.factors};
  for (const auto& f : b.factors) {
    bool merged = false;
    for (auto& g : r.factors) {
      if (g.poly == f.poly) {
        g.exp += f.exp;
        merged = true;
      }
    }
    if (!merged) r.factors.push_back(f);
  }
  std::erase_if(r.factors, [](const Factor& f) { return f.exp == 0; });
  return r;
}

std::string ClosedPoint::str() const { return infinity ? "inf" : "(" + poly.str() + ")"; }

std::string FormalCurve::str() const { return fiber ? "y_p" : "y_(" + poly.str() + ")"; }

LocalField point_field(const LocalField& base, const QPoly& P) {
  if (base.kind() != FieldKind::PAdic) throw Error(ErrorKind::Unsupported, "closed points are supported over Q_p only");
  const std::int64_t p = base.p();
  if (!is_monic(P) || P.degree() < 1) throw Error(ErrorKind::Validation, "point polynomial must be monic");
  if (P.degree() == 1) return LocalField::padic(p, base.precision());
  bool integral = true;
  for (const auto& c : P.coeffs()) integral = integral && vp(c, p) >= 0;
  if (integral) {
    FpPoly red;
    for (const auto& c : P.coeffs()) red.push_back(reduce_mod_p(c, p));
    if (fp::is_irreducible(red, p)) return LocalField::unramified(p, P.coeffs(), base.precision());
  }
  if (is_eisenstein(P, p)) return LocalField::eisenstein(p, P.coeffs(), base.precision());
  throw Error(ErrorKind::Unsupported, "point " + P.str() + " over Q_" + std::to_string(p) +
                                          " is neither linear, unramified nor Eisenstein");
}

std::vector<ClosedPoint> support(const FactoredDifferential& omega) {
  std::vector<ClosedPoint> out;
  for (const auto& f : omega.num.factors) out.push_back(ClosedPoint::finite(f.poly));
  out.push_back(ClosedPoint::at_infinity());
  return out;
}

LaurentExpansion expand_at(const LocalField& base, const FactoredDifferential& omega, const ClosedPoint& v,
                           int terms) {
  omega.num.validate();
  if (base.kind() != FieldKind::PAdic) throw Error(ErrorKind::Unsupported, "expansions are supported over Q_p only");
  if (terms < 1) throw Error(ErrorKind::Validation, "expansion needs at least one term");
  const auto n = static_cast<std::size_t>(terms);
  const auto& num = omega.num;
  LaurentExpansion out{v, base, 0, {}};
  if (v.infinity) {
    // s = 1/t: Q(1/s) = s^(-deg Q) rev(Q)(s) with rev(Q)(0) = 1, and dt = -s^-2 ds.
    std::int64_t deg = 0;
    Series s(n, LocalFieldElement::zero(base));
    s[0] = embed(base, -num.constant);
    for (const auto& f : num.factors) {
      deg += static_cast<std::int64_t>(f.poly.degree()) * f.exp;
      const QPoly r = f.poly.reversed();
      Series rev;
      for (const auto& c : r.coeffs()) rev.push_back(embed(base, c));
      s = series_mul(s, series_pow(rev, f.exp, n), n);
    }
    out.ord = -deg - 2;
    out.coeffs = std::move(s);
  } else {
    const LocalField k = point_field(base, v.poly);
    std::vector<Factor> others;
    out.field = k;
    out.ord = exponent_of(num.factors, v.poly, &others);
    out.coeffs = finite_series(k, v.poly, embed(k, num.constant), QPoly::constant(1), others, n);
  }
  check_leading(out.coeffs, v.str());
  return out;
}

std::int64_t ord_at(const LocalField& base, const FactoredDifferential& omega, const ClosedPoint& v) {
  return expand_at(base, omega, v, 1).ord;
}

LocalFieldElement leading_coeff(const LocalField& base, const FactoredDifferential& omega, const ClosedPoint& v) {
  return expand_at(base, omega, v, 1).coeffs[0];
}

LocalFieldElement residue_at(const LocalField& base, const FactoredRatFunc& f, const FactoredDifferential& omega,
                             const ClosedPoint& v) {
  const FactoredDifferential fw{f * omega.num};
  fw.num.validate();
  std::int64_t ord = 0;
  if (v.infinity) {
    for (const auto& g : fw.num.factors) ord -= static_cast<std::int64_t>(g.poly.degree()) * g.exp;
    ord -= 2;
  } else {
    ord = exponent_of(fw.num.factors, v.poly, nullptr);
  }
  if (ord >= 0) return LocalFieldElement::zero(LocalField::padic(base.p(), base.precision()));
  const auto e = expand_at(base, fw, v, static_cast<int>(-ord));
  const auto& c = e.coeffs[static_cast<std::size_t>(-1 - ord)];
  if (e.field.kind() == FieldKind::PAdic) return c;
  return c.trace_to_base();
}

void SurfaceDifferential::validate() const {
  if (!fp::is_prime(p)) throw Error(ErrorKind::Validation, "surface prime " + std::to_string(p) + " is not prime");
  if (unit_series.empty() || vp(unit_series[0], p) != 0) {
    throw Error(ErrorKind::Validation, "unit series must have a p-adic unit constant term");
  }
  for (const auto& c : unit_series) {
    if (vp(c, p) < 0) throw Error(ErrorKind::Validation, "unit series coefficients must be p-integral");
  }
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& f = factors[i];
    if (f.exp == 0) throw Error(ErrorKind::Validation, "factor " + f.poly.str() + " has exponent 0");
    if (!is_distinguished(f.poly, p)) {
      throw Error(ErrorKind::Validation, "factor " + f.poly.str() + " is not a distinguished polynomial");
    }
    if (f.poly.degree() > 1 && !is_eisenstein(f.poly, p)) {
      throw Error(ErrorKind::Unsupported, "distinguished factor " + f.poly.str() + " is neither linear nor Eisenstein");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (factors[j].poly == f.poly) throw Error(ErrorKind::Validation, "repeated factor " + f.poly.str());
    }
  }
}

FormalCurveData surface_data(const SurfaceDifferential& omega, const FormalCurve& y, int precision) {
  omega.validate();
  const std::int64_t p = omega.p;
  FormalCurveData out{y, 0, {}};
  if (y.fiber) {
    // Distinguished polynomials reduce to t^l and units to units, so only p^a
    // contributes to the fiber order.
    const auto k = LocalField::eqchar(p, {}, precision);
    std::int64_t shift = 0;
    for (const auto& f : omega.factors) shift += static_cast<std::int64_t>(f.poly.degree()) * f.exp;
    std::vector<FqElem> s;
    for (const auto& c : omega.unit_series) s.push_back(FqElem{reduce_mod_p(c, p)});
    out.ord = omega.p_power;
    out.leading = LocalFieldElement::from_series(k, shift, std::move(s), LocalFieldElement::kExact);
    return out;
  }
  if (!is_distinguished(y.poly, p) || (y.poly.degree() > 1 && !is_eisenstein(y.poly, p))) {
    throw Error(ErrorKind::Unsupported, "formal curve " + y.poly.str() + " is neither linear nor Eisenstein");
  }
  const LocalField k = point_field(LocalField::padic(p, precision), y.poly);
  std::vector<Factor> others;
  out.ord = exponent_of(omega.factors, y.poly, &others);
  mpq_class pa = 1;
  for (std::int64_t i = 0; i < std::abs(omega.p_power); ++i) pa *= p;
  if (omega.p_power < 0) pa = 1 / pa;
  const auto s = finite_series(k, y.poly, embed(k, pa), QPoly(omega.unit_series), others, 1);
  check_leading(s, y.str());
  out.leading = s[0];
  return out;
}

}  // namespace weil
