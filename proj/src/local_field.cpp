#include "weil/local_field.hpp"

#include <algorithm>
#include <sstream>

namespace weil {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// v_p of a nonzero integer.
std::int64_t vp(const mpz_class& z, std::int64_t p) {
  mpz_class rest;
  return static_cast<std::int64_t>(
      mpz_remove(rest.get_mpz_t(), z.get_mpz_t(), mpz_class(static_cast<long>(p)).get_mpz_t()));
}

std::int64_t vp(const mpq_class& q, std::int64_t p) { return vp(q.get_num(), p) - vp(q.get_den(), p); }

mpz_class pmod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

// A p-integral rational as an integer mod m = p^k.
mpz_class padic_integer(const mpq_class& q, std::int64_t p, const mpz_class& m) {
  if (q.get_den() % p == 0) {
    throw Error(ErrorKind::Validation, "coefficient " + q.get_str() + " is not " + std::to_string(p) + "-integral");
  }
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), q.get_den_mpz_t(), m.get_mpz_t());
  return pmod(q.get_num() * inv, m);
}

std::string poly_str(const std::vector<mpq_class>& poly, const char* var) {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = poly.size(); i-- > 0;) {
    const mpq_class& c = poly[i];
    if (c == 0) continue;
    mpq_class a = abs(c);
    if (!first) out << (c < 0 ? "-" : "+");
    else if (c < 0) out << "-";
    if (i == 0 || a != 1) out << a.get_str();
    if (i > 0) out << var;
    if (i > 1) out << "^" << i;
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

}  // namespace

const char* to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::PAdic: return "padic";
    case FieldKind::Unramified: return "unramified";
    case FieldKind::Eisenstein: return "eisenstein";
    case FieldKind::EqChar: return "eqchar";
    case FieldKind::Real: return "real";
    case FieldKind::Complex: return "complex";
  }
  return "?";
}

struct LocalField::Impl {
  FieldKind kind = FieldKind::PAdic;
  std::int64_t p = 2;
  int e = 1, f = 1, n = 1;
  int precision = kDefaultPrecision;
  int working = 0;
  mpz_class pm = 1;
  std::vector<mpz_class> p_pows;
  FiniteField residue{2};
  std::vector<mpq_class> poly_q;
  std::vector<mpz_class> poly;
  std::vector<mpz_class> traces;
  std::vector<mpz_class> p_over_pi;
  int delta = 0;

  void set_working(int digits) {
    working = digits;
    p_pows.resize(static_cast<std::size_t>(working) + 1);
    p_pows[0] = 1;
    for (int i = 1; i <= working; ++i) p_pows[i] = p_pows[i - 1] * static_cast<long>(p);
    pm = p_pows[working];
  }

  // Power sums of the roots of poly, mod pm.
  void compute_traces() {
    traces.assign(n, 0);
    traces[0] = n;
    for (int k = 1; k < n; ++k) {
      mpz_class s = k * poly[n - k];
      for (int i = 1; i < k; ++i) s += poly[n - i] * traces[k - i];
      traces[k] = pmod(-s, pm);
    }
  }
};

namespace {

void check_prime(std::int64_t p) {
  if (!fp::is_prime(p)) throw Error(ErrorKind::Validation, std::to_string(p) + " is not prime");
  if (p > (std::int64_t{1} << 62)) throw Error(ErrorKind::Unsupported, "prime too large");
}

void check_precision(int precision) {
  if (precision < 1 || precision > 4096) throw Error(ErrorKind::Validation, "precision out of range");
}

}  // namespace

LocalField::LocalField() {
  static const LocalField placeholder = padic(2);
  impl_ = placeholder.impl_;
}

LocalField LocalField::padic(std::int64_t p, int precision) {
  check_prime(p);
  check_precision(precision);
  auto impl = std::make_shared<Impl>();
  impl->kind = FieldKind::PAdic;
  impl->p = p;
  impl->precision = precision;
  impl->set_working(precision + 8);
  impl->residue = FiniteField(p);
  impl->poly = {0, 1};
  impl->compute_traces();
  return LocalField(std::move(impl));
}

LocalField LocalField::unramified(std::int64_t p, const std::vector<mpq_class>& poly, int precision) {
  check_prime(p);
  check_precision(precision);
  if (poly.size() < 2 || poly.back() != 1) {
    throw Error(ErrorKind::Validation, "unramified defining polynomial must be monic of positive degree");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = FieldKind::Unramified;
  impl->p = p;
  impl->precision = precision;
  impl->n = impl->f = static_cast<int>(poly.size()) - 1;
  impl->set_working(precision + 8);
  impl->poly_q = poly;
  FpPoly reduced;
  for (const auto& c : poly) {
    impl->poly.push_back(padic_integer(c, p, impl->pm));
    reduced.push_back(mpz_class(impl->poly.back() % static_cast<long>(p)).get_si());
  }
  try {
    impl->residue = FiniteField(p, reduced);
  } catch (const Error&) {
    throw Error(ErrorKind::Unsupported,
                "polynomial " + poly_str(poly, "x") + " is not irreducible mod " + std::to_string(p));
  }
  impl->compute_traces();
  return LocalField(std::move(impl));
}

LocalField LocalField::eisenstein(std::int64_t p, const std::vector<mpq_class>& poly, int precision) {
  check_prime(p);
  check_precision(precision);
  if (poly.size() < 2 || poly.back() != 1) {
    throw Error(ErrorKind::Validation, "Eisenstein polynomial must be monic of positive degree");
  }
  const int e = static_cast<int>(poly.size()) - 1;
  for (int i = 0; i < e; ++i) {
    if (poly[i] == 0 && i > 0) continue;
    const auto v = poly[i] == 0 ? 0 : vp(poly[i], p);
    if (v < 1 || (i == 0 && v != 1)) {
      throw Error(ErrorKind::Unsupported, "polynomial " + poly_str(poly, "t") + " is not Eisenstein at " +
                                              std::to_string(p));
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = FieldKind::Eisenstein;
  impl->p = p;
  impl->precision = precision;
  impl->n = impl->e = e;
  impl->set_working((precision + e - 1) / e + e + 8);
  impl->poly_q = poly;
  impl->residue = FiniteField(p);
  for (const auto& c : poly) impl->poly.push_back(padic_integer(c, p, impl->pm));
  impl->compute_traces();
  // pi (sum_{i>=1} a_i pi^(i-1)) = -a_0, so p/pi = -(a_0/p)^-1 sum_{i>=1} a_i pi^(i-1).
  const mpz_class eps_inv = padic_integer(mpq_class(1) / (poly[0] / static_cast<long>(p)), p, impl->pm);
  impl->p_over_pi.assign(e, 0);
  for (int i = 1; i <= e; ++i) impl->p_over_pi[i - 1] = pmod(-eps_inv * impl->poly[i], impl->pm);
  // Different: v(P'(pi)).
  LocalField tmp(impl);
  std::vector<mpz_class> deriv(e, 0);
  for (int i = 1; i <= e; ++i) deriv[i - 1] = pmod(i * impl->poly[i], impl->pm);
  impl->delta = static_cast<int>(
      LocalFieldElement::from_coords(tmp, 0, deriv, LocalFieldElement::kExact).valuation());
  return LocalField(std::move(impl));
}

LocalField LocalField::eqchar(std::int64_t p, const FpPoly& residue_modulus, int precision) {
  check_prime(p);
  check_precision(precision);
  auto impl = std::make_shared<Impl>();
  impl->kind = FieldKind::EqChar;
  impl->p = p;
  impl->precision = precision;
  impl->residue = residue_modulus.empty() ? FiniteField(p) : FiniteField(p, residue_modulus);
  impl->f = impl->residue.degree();
  impl->set_working(1);
  return LocalField(std::move(impl));
}

LocalField LocalField::real() {
  auto impl = std::make_shared<Impl>();
  impl->kind = FieldKind::Real;
  impl->p = 0;
  return LocalField(std::move(impl));
}

LocalField LocalField::complex() {
  auto impl = std::make_shared<Impl>();
  impl->kind = FieldKind::Complex;
  impl->p = 0;
  return LocalField(std::move(impl));
}

FieldKind LocalField::kind() const { return impl_->kind; }
bool LocalField::is_archimedean() const {
  return impl_->kind == FieldKind::Real || impl_->kind == FieldKind::Complex;
}
bool LocalField::is_padic() const {
  return impl_->kind == FieldKind::PAdic || impl_->kind == FieldKind::Unramified ||
         impl_->kind == FieldKind::Eisenstein;
}
std::int64_t LocalField::p() const { return impl_->p; }
int LocalField::ramification() const { return impl_->e; }
int LocalField::residue_degree() const { return impl_->f; }
int LocalField::degree() const { return impl_->n; }
int LocalField::precision() const { return impl_->precision; }
int LocalField::working_digits() const { return impl_->working; }
const mpz_class& LocalField::working_modulus() const { return impl_->pm; }
const mpz_class& LocalField::p_power(int k) const { return impl_->p_pows.at(static_cast<std::size_t>(k)); }
const FiniteField& LocalField::residue_field() const {
  if (is_archimedean()) throw Error(ErrorKind::Domain, "archimedean fields have no residue field");
  return impl_->residue;
}
const std::vector<mpq_class>& LocalField::defining_polynomial() const { return impl_->poly_q; }
const std::vector<mpz_class>& LocalField::modulus() const { return impl_->poly; }
const std::vector<mpz_class>& LocalField::power_traces() const { return impl_->traces; }
const std::vector<mpz_class>& LocalField::p_over_pi() const { return impl_->p_over_pi; }

int LocalField::different_valuation() const {
  switch (impl_->kind) {
    case FieldKind::PAdic:
    case FieldKind::Unramified: return 0;
    case FieldKind::Eisenstein: return impl_->delta;
    default: throw Error(ErrorKind::Unsupported, "different of a non-p-adic field");
  }
}

int different_valuation(const LocalField& field) { return field.different_valuation(); }

bool operator==(const LocalField& a, const LocalField& b) {
  if (a.impl_ == b.impl_) return true;
  return a.impl_->kind == b.impl_->kind && a.impl_->p == b.impl_->p && a.impl_->poly_q == b.impl_->poly_q &&
         a.impl_->precision == b.impl_->precision &&
         (a.impl_->kind != FieldKind::EqChar || a.impl_->residue.modulus() == b.impl_->residue.modulus());
}

std::string LocalField::str() const {
  const auto& d = *impl_;
  const std::string p = std::to_string(d.p);
  switch (d.kind) {
    case FieldKind::PAdic: return "Q_" + p;
    case FieldKind::Unramified: return "Q_" + p + "[x]/(" + poly_str(d.poly_q, "x") + ")";
    case FieldKind::Eisenstein: return "Q_" + p + "[t]/(" + poly_str(d.poly_q, "t") + ")";
    case FieldKind::EqChar: return "F_" + std::to_string(d.residue.size()) + "((u))";
    case FieldKind::Real: return "R";
    case FieldKind::Complex: return "C";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Elements

namespace {

// Product of coordinate vectors modulo the defining polynomial and p^working.
std::vector<mpz_class> mulmod(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                              const LocalField& f) {
  const std::size_t n = static_cast<std::size_t>(f.degree());
  const auto& P = f.modulus();
  std::vector<mpz_class> r(2 * n - 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) r[i + j] += a[i] * b[j];
  }
  for (std::size_t i = 2 * n - 1; i-- > n;) {
    if (r[i] == 0) continue;
    const mpz_class c = r[i];
    for (std::size_t j = 0; j < n; ++j) r[i - n + j] -= c * P[j];
    r[i] = 0;
  }
  r.resize(n);
  for (auto& c : r) c = pmod(c, f.working_modulus());
  return r;
}

// Coordinates of theta.
std::vector<mpz_class> theta_coords(const LocalField& f) {
  const std::size_t n = static_cast<std::size_t>(f.degree());
  std::vector<mpz_class> t(n, 0);
  if (n >= 2) {
    t[1] = 1;
  } else {
    t[0] = pmod(-f.modulus()[0], f.working_modulus());
  }
  return t;
}

// v_pi of a coordinate vector; -1 when all coordinates vanish.
std::int64_t coord_valuation(const std::vector<mpz_class>& w, const LocalField& f) {
  const bool eis = f.kind() == FieldKind::Eisenstein;
  const std::int64_t e = f.ramification();
  std::int64_t best = -1;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0) continue;
    const std::int64_t v = e * vp(w[i], f.p()) + (eis ? static_cast<std::int64_t>(i) : 0);
    if (best < 0 || v < best) best = v;
  }
  return best;
}

}  // namespace

LocalFieldElement::LocalFieldElement() { w_.assign(1, 0); }

LocalFieldElement LocalFieldElement::zero(const LocalField& f) {
  LocalFieldElement x;
  x.field_ = f;
  x.abs_ = kExact;
  if (f.is_padic()) x.w_.assign(static_cast<std::size_t>(f.degree()), 0);
  else x.w_.clear();
  return x;
}

LocalFieldElement LocalFieldElement::one(const LocalField& f) { return from_rational(f, 1); }

LocalFieldElement LocalFieldElement::from_rational(const LocalField& f, const mpq_class& value) {
  mpq_class r = value;
  r.canonicalize();
  LocalFieldElement x = zero(f);
  if (f.is_archimedean()) {
    x.re_ = r;
    return x;
  }
  if (r == 0) return x;
  const std::int64_t p = f.p();
  if (f.kind() == FieldKind::EqChar) {
    if (r.get_den() % p == 0) {
      throw Error(ErrorKind::Domain, "rational " + r.get_str() + " has no image in characteristic " + std::to_string(p));
    }
    const std::int64_t c = padic_integer(r, p, mpz_class(static_cast<long>(p))).get_si();
    return from_series(f, 0, {f.residue_field().from_int(c)}, kExact);
  }
  const std::int64_t j = vp(r, p);
  mpq_class unit = r;
  mpz_class pj;
  mpz_ui_pow_ui(pj.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::abs(j)));
  if (j > 0) unit /= pj;
  else unit *= pj;
  std::vector<mpz_class> w(static_cast<std::size_t>(f.degree()), 0);
  w[0] = padic_integer(unit, p, f.working_modulus());
  return from_coords(f, j, std::move(w), kExact);
}

LocalFieldElement LocalFieldElement::from_coords(const LocalField& f, std::int64_t k, std::vector<mpz_class> w,
                                                 std::int64_t abs_prec) {
  if (!f.is_padic()) throw Error(ErrorKind::Validation, "coordinates given for a non-p-adic field");
  if (w.size() > static_cast<std::size_t>(f.degree())) throw Error(ErrorKind::Validation, "too many coordinates");
  LocalFieldElement x;
  x.field_ = f;
  x.k_ = k;
  x.w_ = std::move(w);
  x.w_.resize(static_cast<std::size_t>(f.degree()), 0);
  x.abs_ = abs_prec;
  x.normalize();
  return x;
}

LocalFieldElement LocalFieldElement::from_series(const LocalField& f, std::int64_t k, std::vector<FqElem> s,
                                                 std::int64_t abs_prec) {
  if (f.kind() != FieldKind::EqChar) throw Error(ErrorKind::Validation, "series given for a p-adic field");
  LocalFieldElement x;
  x.field_ = f;
  x.w_.clear();
  x.k_ = k;
  x.s_ = std::move(s);
  for (auto& c : x.s_) {
    c.resize(static_cast<std::size_t>(f.residue_field().degree()), 0);
    for (auto& d : c) d = fp::mod(d, f.p());
  }
  x.abs_ = abs_prec;
  x.normalize();
  return x;
}

LocalFieldElement LocalFieldElement::from_complex(const LocalField& f, const mpq_class& re, const mpq_class& im) {
  if (f.kind() != FieldKind::Complex) throw Error(ErrorKind::Validation, "complex value for a non-complex field");
  LocalFieldElement x = zero(f);
  x.re_ = re;
  x.im_ = im;
  return x;
}

LocalFieldElement LocalFieldElement::uniformizer(const LocalField& f) {
  switch (f.kind()) {
    case FieldKind::PAdic:
    case FieldKind::Unramified: {
      std::vector<mpz_class> w(static_cast<std::size_t>(f.degree()), 0);
      w[0] = 1;
      return from_coords(f, 1, std::move(w), kExact);
    }
    case FieldKind::Eisenstein: return from_coords(f, 0, theta_coords(f), kExact);
    case FieldKind::EqChar: return from_series(f, 1, {f.residue_field().one()}, kExact);
    default: throw Error(ErrorKind::Domain, "archimedean fields have no uniformizer");
  }
}

LocalFieldElement LocalFieldElement::generator(const LocalField& f) {
  if (f.is_padic()) return from_coords(f, 0, theta_coords(f), kExact);
  if (f.kind() == FieldKind::EqChar) {
    const auto& F = f.residue_field();
    FqElem x = F.degree() >= 2 ? F.basis(1) : F.zero();
    return from_series(f, 0, {x}, kExact);
  }
  throw Error(ErrorKind::Domain, "archimedean fields have no generator");
}

LocalFieldElement LocalFieldElement::lift(const LocalField& f, const FqElem& r) {
  if (f.kind() == FieldKind::EqChar) return from_series(f, 0, {r}, kExact);
  if (!f.is_padic()) throw Error(ErrorKind::Domain, "archimedean fields have no residue field");
  std::vector<mpz_class> w(static_cast<std::size_t>(f.degree()), 0);
  if (f.kind() == FieldKind::Unramified) {
    for (std::size_t i = 0; i < r.size(); ++i) w[i] = static_cast<long>(r[i]);
  } else {
    w[0] = static_cast<long>(r[0]);
  }
  return from_coords(f, 0, std::move(w), kExact);
}

void LocalFieldElement::normalize() {
  if (field_.is_padic()) normalize_padic();
  else if (field_.kind() == FieldKind::EqChar) normalize_series();
}

void LocalFieldElement::normalize_padic() {
  const auto& f = field_;
  const std::int64_t e = f.ramification();
  const bool eis = f.kind() == FieldKind::Eisenstein;
  for (auto& c : w_) c = pmod(c, f.working_modulus());
  const std::int64_t vw = coord_valuation(w_, f);
  auto make_zero = [&] {
    k_ = 0;
    for (auto& c : w_) c = 0;
  };
  if (vw < 0) {
    make_zero();
    return;
  }
  const std::int64_t v = e * k_ + vw;
  if (v >= abs_) {
    make_zero();
    return;
  }
  abs_ = std::min(abs_, v + f.precision());
  const int working = f.working_digits();
  for (std::size_t i = 0; i < w_.size(); ++i) {
    const std::int64_t t = ceil_div(abs_ - e * k_ - (eis ? static_cast<std::int64_t>(i) : 0), e);
    if (t <= 0) w_[i] = 0;
    else if (t < working) w_[i] = pmod(w_[i], f.p_power(static_cast<int>(t)));
  }
  // Pull common factors of p into k.
  std::int64_t common = -1;
  for (const auto& c : w_) {
    if (c == 0) continue;
    const std::int64_t v_c = vp(c, f.p());
    if (common < 0 || v_c < common) common = v_c;
  }
  if (common > 0) {
    const mpz_class& pc = f.p_power(static_cast<int>(common));
    for (auto& c : w_) c /= pc;
    k_ += common;
  }
}

void LocalFieldElement::normalize_series() {
  const auto& F = field_.residue_field();
  std::size_t lead = 0;
  while (lead < s_.size() && F.is_zero(s_[lead])) ++lead;
  if (lead == s_.size()) {
    s_.clear();
    k_ = 0;
    return;
  }
  k_ += static_cast<std::int64_t>(lead);
  s_.erase(s_.begin(), s_.begin() + static_cast<std::ptrdiff_t>(lead));
  if (k_ >= abs_) {
    s_.clear();
    k_ = 0;
    return;
  }
  abs_ = std::min(abs_, k_ + field_.precision());
  s_.resize(static_cast<std::size_t>(abs_ - k_), F.zero());
}

bool LocalFieldElement::is_zero() const {
  if (field_.is_archimedean()) return re_ == 0 && im_ == 0;
  if (field_.kind() == FieldKind::EqChar) return s_.empty();
  for (const auto& c : w_) {
    if (c != 0) return false;
  }
  return true;
}

bool LocalFieldElement::is_exact_zero() const {
  if (field_.is_archimedean()) return is_zero();
  return is_zero() && abs_ >= kExact / 2;
}

std::int64_t LocalFieldElement::valuation() const {
  if (field_.is_archimedean()) throw Error(ErrorKind::Domain, "valuation on an archimedean field");
  if (is_zero()) return abs_;
  if (field_.kind() == FieldKind::EqChar) return k_;
  return field_.ramification() * k_ + coord_valuation(w_, field_);
}

std::int64_t LocalFieldElement::rel_precision() const {
  if (is_zero()) return 0;
  return abs_ - valuation();
}

void LocalFieldElement::require_same_field(const LocalFieldElement& o) const {
  if (!(field_ == o.field_)) {
    throw Error(ErrorKind::Validation, "field mismatch: " + field_.str() + " vs " + o.field_.str());
  }
}

LocalFieldElement LocalFieldElement::operator-() const {
  LocalFieldElement r = *this;
  if (field_.is_archimedean()) {
    r.re_ = -re_;
    r.im_ = -im_;
    return r;
  }
  if (field_.kind() == FieldKind::EqChar) {
    for (auto& c : r.s_) c = field_.residue_field().neg(c);
    return r;
  }
  for (auto& c : r.w_) c = -c;
  r.normalize();
  return r;
}

LocalFieldElement operator+(const LocalFieldElement& a, const LocalFieldElement& b) {
  a.require_same_field(b);
  const auto& f = a.field_;
  if (f.is_archimedean()) {
    LocalFieldElement r = a;
    r.re_ += b.re_;
    r.im_ += b.im_;
    return r;
  }
  if (a.is_exact_zero()) return b;
  if (b.is_exact_zero()) return a;
  LocalFieldElement r;
  r.field_ = f;
  r.abs_ = std::min(a.abs_, b.abs_);
  if (f.kind() == FieldKind::EqChar) {
    const auto& F = f.residue_field();
    const std::int64_t ka = a.is_zero() ? r.abs_ : a.k_;
    const std::int64_t kb = b.is_zero() ? r.abs_ : b.k_;
    r.k_ = std::min(ka, kb);
    r.w_.clear();
    if (r.k_ >= r.abs_) {
      r.k_ = 0;
      return r;
    }
    r.s_.assign(static_cast<std::size_t>(r.abs_ - r.k_), F.zero());
    for (std::size_t i = 0; i < a.s_.size(); ++i) {
      const std::int64_t idx = a.k_ + static_cast<std::int64_t>(i) - r.k_;
      if (idx < static_cast<std::int64_t>(r.s_.size())) r.s_[idx] = F.add(r.s_[idx], a.s_[i]);
    }
    for (std::size_t i = 0; i < b.s_.size(); ++i) {
      const std::int64_t idx = b.k_ + static_cast<std::int64_t>(i) - r.k_;
      if (idx < static_cast<std::int64_t>(r.s_.size())) r.s_[idx] = F.add(r.s_[idx], b.s_[i]);
    }
    r.normalize();
    return r;
  }
  const std::int64_t ka = a.is_zero() ? b.k_ : a.k_;
  const std::int64_t kb = b.is_zero() ? a.k_ : b.k_;
  r.k_ = std::min(ka, kb);
  r.w_.assign(a.w_.size(), 0);
  auto shift_pow = [&](std::int64_t d) {
    if (d <= f.working_digits()) return f.p_power(static_cast<int>(d));
    mpz_class x;
    mpz_ui_pow_ui(x.get_mpz_t(), static_cast<unsigned long>(f.p()), static_cast<unsigned long>(d));
    return x;
  };
  const mpz_class sa = shift_pow(ka - r.k_), sb = shift_pow(kb - r.k_);
  for (std::size_t i = 0; i < r.w_.size(); ++i) r.w_[i] = a.w_[i] * sa + b.w_[i] * sb;
  r.normalize();
  return r;
}

LocalFieldElement operator-(const LocalFieldElement& a, const LocalFieldElement& b) { return a + (-b); }

LocalFieldElement operator*(const LocalFieldElement& a, const LocalFieldElement& b) {
  a.require_same_field(b);
  const auto& f = a.field_;
  if (f.is_archimedean()) {
    LocalFieldElement r = a;
    r.re_ = a.re_ * b.re_ - a.im_ * b.im_;
    r.im_ = a.re_ * b.im_ + a.im_ * b.re_;
    return r;
  }
  if (a.is_exact_zero() || b.is_exact_zero()) return LocalFieldElement::zero(f);
  if (a.is_zero() || b.is_zero()) {
    LocalFieldElement r = LocalFieldElement::zero(f);
    if (a.is_zero() && b.is_zero()) r.abs_ = a.abs_ + b.abs_;
    else if (a.is_zero()) r.abs_ = a.abs_ + b.valuation();
    else r.abs_ = b.abs_ + a.valuation();
    return r;
  }
  LocalFieldElement r;
  r.field_ = f;
  r.k_ = a.k_ + b.k_;
  r.abs_ = std::min(a.abs_ + b.valuation(), b.abs_ + a.valuation());
  if (f.kind() == FieldKind::EqChar) {
    const auto& F = f.residue_field();
    r.w_.clear();
    const std::size_t len = static_cast<std::size_t>(r.abs_ - r.k_);
    r.s_.assign(len, F.zero());
    for (std::size_t i = 0; i < a.s_.size() && i < len; ++i) {
      for (std::size_t j = 0; j < b.s_.size() && i + j < len; ++j) {
        r.s_[i + j] = F.add(r.s_[i + j], F.mul(a.s_[i], b.s_[j]));
      }
    }
    r.normalize();
    return r;
  }
  r.w_ = mulmod(a.w_, b.w_, f);
  r.normalize();
  return r;
}

LocalFieldElement LocalFieldElement::unit_inverse() const {
  // *this has k = 0 and unit coordinates.
  const auto& f = field_;
  const auto& F = f.residue_field();
  std::vector<mpz_class> y(w_.size(), 0);
  if (f.kind() == FieldKind::Unramified) {
    FqElem r(static_cast<std::size_t>(F.degree()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = mpz_class(w_[i] % static_cast<long>(f.p())).get_si();
    const FqElem ri = F.inv(r);
    for (std::size_t i = 0; i < ri.size(); ++i) y[i] = static_cast<long>(ri[i]);
  } else {
    y[0] = static_cast<long>(fp::inv(mpz_class(w_[0] % static_cast<long>(f.p())).get_si(), f.p()));
  }
  std::vector<mpz_class> two(w_.size(), 0);
  two[0] = 2;
  for (int prec = 1; prec < f.working_digits(); prec *= 2) {
    std::vector<mpz_class> uy = mulmod(w_, y, f);
    for (std::size_t i = 0; i < uy.size(); ++i) uy[i] = two[i] - uy[i];
    y = mulmod(y, uy, f);
  }
  LocalFieldElement r;
  r.field_ = f;
  r.k_ = 0;
  r.w_ = std::move(y);
  r.abs_ = abs_;
  return r;
}

LocalFieldElement LocalFieldElement::inverse() const {
  const auto& f = field_;
  if (f.is_archimedean()) {
    const mpq_class n = re_ * re_ + im_ * im_;
    if (n == 0) throw Error(ErrorKind::Domain, "inverse of zero");
    LocalFieldElement r = *this;
    r.re_ = re_ / n;
    r.im_ = -im_ / n;
    return r;
  }
  if (is_zero()) {
    throw Error(ErrorKind::Precision, "inverse of an element that is zero to precision " + std::to_string(abs_));
  }
  const std::int64_t v = valuation();
  if (f.kind() == FieldKind::EqChar) {
    const auto& F = f.residue_field();
    const std::size_t len = s_.size();
    std::vector<FqElem> t(len, F.zero());
    const FqElem inv0 = F.inv(s_[0]);
    t[0] = inv0;
    for (std::size_t n = 1; n < len; ++n) {
      FqElem acc = F.zero();
      for (std::size_t j = 1; j <= n; ++j) acc = F.add(acc, F.mul(s_[j], t[n - j]));
      t[n] = F.neg(F.mul(inv0, acc));
    }
    return from_series(f, -k_, std::move(t), abs_ - 2 * v);
  }
  // w = pi^vw u with u a unit; w^-1 = p^-vw (p/pi)^vw u^-1.
  const std::int64_t vw = coord_valuation(w_, f);
  std::vector<mpz_class> z = w_;
  std::vector<mpz_class> ppi_pow(w_.size(), 0);
  ppi_pow[0] = 1;
  for (std::int64_t i = 0; i < vw; ++i) ppi_pow = mulmod(ppi_pow, f.p_over_pi(), f);
  if (vw > 0) {
    z = mulmod(z, ppi_pow, f);
    const mpz_class& pv = f.p_power(static_cast<int>(vw));
    for (auto& c : z) c /= pv;
  }
  LocalFieldElement u;
  u.field_ = f;
  u.k_ = 0;
  u.w_ = std::move(z);
  u.abs_ = abs_;
  const LocalFieldElement ui = u.unit_inverse();
  return from_coords(f, -k_ - vw, mulmod(ppi_pow, ui.w_, f), abs_ - 2 * v);
}

LocalFieldElement operator/(const LocalFieldElement& a, const LocalFieldElement& b) { return a * b.inverse(); }

LocalFieldElement LocalFieldElement::pow(std::int64_t n) const {
  if (n < 0) return inverse().pow(-n);
  LocalFieldElement result = one(field_), base = *this;
  while (n) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

LocalFieldElement LocalFieldElement::shift(std::int64_t j) const {
  const auto& f = field_;
  if (f.is_archimedean()) throw Error(ErrorKind::Domain, "shift on an archimedean field");
  if (is_exact_zero()) return *this;
  LocalFieldElement r = *this;
  r.abs_ = abs_ + j;
  if (is_zero()) return r;
  if (f.kind() != FieldKind::Eisenstein) {
    r.k_ += j;
    r.normalize();
    return r;
  }
  if (j >= 0) {
    const auto t = theta_coords(f);
    for (std::int64_t i = 0; i < j; ++i) r.w_ = mulmod(r.w_, t, f);
  } else {
    for (std::int64_t i = 0; i < -j; ++i) r.w_ = mulmod(r.w_, f.p_over_pi(), f);
    r.k_ += j;
  }
  r.normalize();
  return r;
}

LocalFieldElement LocalFieldElement::truncate(std::int64_t a) const {
  if (field_.is_archimedean()) return *this;
  LocalFieldElement r = *this;
  r.abs_ = std::min(abs_, a);
  r.normalize();
  return r;
}

FqElem LocalFieldElement::residue() const {
  const auto& f = field_;
  const auto& F = f.residue_field();
  if (is_zero()) {
    if (abs_ < 1) throw Error(ErrorKind::Precision, "residue of an element known only modulo pi^" + std::to_string(abs_));
    return F.zero();
  }
  const std::int64_t v = valuation();
  if (v < 0) throw Error(ErrorKind::Domain, "residue of an element of negative valuation " + std::to_string(v));
  if (v > 0) return F.zero();
  if (f.kind() == FieldKind::EqChar) return s_[0];
  FqElem r = F.zero();
  const long p = static_cast<long>(f.p());
  if (f.kind() == FieldKind::Unramified) {
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = mpz_class(w_[i] % p).get_si();
  } else {
    r[0] = mpz_class(w_[0] % p).get_si();
  }
  return r;
}

LocalFieldElement LocalFieldElement::trace_to_base() const {
  const auto& f = field_;
  if (!f.is_padic()) throw Error(ErrorKind::Unsupported, "trace is only defined for p-adic fields");
  const LocalField base = f.kind() == FieldKind::PAdic ? f : LocalField::padic(f.p(), f.precision());
  if (is_exact_zero()) return zero(base);
  const std::int64_t e = f.ramification();
  const std::int64_t abs_base = floor_div(abs_ + f.different_valuation(), e);
  if (is_zero()) {
    LocalFieldElement z = zero(base);
    z.abs_ = abs_base;
    return z;
  }
  mpz_class t = 0;
  for (std::size_t i = 0; i < w_.size(); ++i) t += w_[i] * f.power_traces()[i];
  return from_coords(base, k_, {t}, std::min(abs_base, k_ + f.working_digits()));
}

std::vector<FqElem> LocalFieldElement::digits(std::size_t count) const {
  std::vector<FqElem> out;
  if (is_zero()) return out;
  LocalFieldElement y = shift(-valuation());
  while (out.size() < count && y.abs_precision() > 0) {
    const FqElem d = y.residue();
    out.push_back(d);
    y = (y - lift(field_, d)).shift(-1);
  }
  return out;
}

std::string LocalFieldElement::str() const {
  if (field_.is_archimedean()) {
    if (field_.kind() == FieldKind::Real) return re_.get_str();
    return re_.get_str() + "+" + im_.get_str() + "i";
  }
  std::ostringstream out;
  if (is_zero()) {
    if (is_exact_zero()) return "0";
    out << "O(pi^" << abs_ << ")";
    return out.str();
  }
  const auto& F = field_.residue_field();
  out << "pi^" << valuation() << "*(";
  const auto d = digits(8);
  for (std::size_t i = 0; i < d.size(); ++i) out << (i ? " " : "") << F.str(d[i]);
  if (static_cast<std::int64_t>(d.size()) < rel_precision()) out << " ...";
  out << ") + O(pi^" << abs_ << ")";
  return out.str();
}

// ---------------------------------------------------------------------------
// Characters

AdditiveCharacter AdditiveCharacter::standard(const LocalField& f) {
  return AdditiveCharacter{f, 0, f.is_archimedean() ? -1 : 1};
}

std::int64_t AdditiveCharacter::conductor() const {
  if (field.is_padic()) return field.ramification() * base_conductor - field.different_valuation();
  if (field.kind() == FieldKind::EqChar) return base_conductor;
  return 0;
}

mpq_class char_exponent(const AdditiveCharacter& psi, const LocalFieldElement& x) {
  const auto& f = psi.field;
  if (!(x.field() == f)) throw Error(ErrorKind::Validation, "character and element live in different fields");
  const std::int64_t p = f.p();
  if (f.is_archimedean()) {
    throw Error(ErrorKind::Unsupported, "archimedean characters are not evaluated pointwise");
  }
  const std::int64_t c = psi.base_conductor;
  if (f.kind() == FieldKind::EqChar) {
    if (x.abs_precision() < c) {
      throw Error(ErrorKind::Precision, "character needs the u^" + std::to_string(c - 1) +
                                            " coefficient; element known modulo u^" + std::to_string(x.abs_precision()));
    }
    if (x.is_zero()) return 0;
    const std::int64_t idx = c - 1 - x.p_shift();
    if (idx < 0 || idx >= static_cast<std::int64_t>(x.series().size())) return 0;
    const std::int64_t t = f.residue_field().trace(x.series()[static_cast<std::size_t>(idx)]);
    mpq_class r(fp::mod(psi.sign * t, p), p);
    r.canonicalize();
    return r;
  }
  const LocalFieldElement t = x.trace_to_base();
  if (t.abs_precision() < c) {
    throw Error(ErrorKind::Precision, "character needs the trace modulo p^" + std::to_string(c) +
                                          "; known only modulo p^" + std::to_string(t.abs_precision()) + " in " +
                                          f.str());
  }
  if (t.is_zero()) return 0;
  const std::int64_t k = t.p_shift();
  if (k >= c) return 0;
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(c - k));
  mpq_class r(pmod(psi.sign * t.coords()[0], den), den);
  r.canonicalize();
  return r;
}

CycInt eval_char(const AdditiveCharacter& psi, const LocalFieldElement& x) {
  const mpq_class r = char_exponent(psi, x);
  const mpz_class& den = r.get_den();
  if (!den.fits_ulong_p() || den.get_ui() > cyclotomic_order_cap()) {
    throw Error(ErrorKind::Size, "character value has order " + den.get_str() + " beyond the cyclotomic cap");
  }
  return CycInt::root(den.get_ui(), r.get_num().get_si());
}

bool is_square_unit(const LocalFieldElement& a) {
  const auto& f = a.field();
  if (f.kind() == FieldKind::Real) return a.real_part() > 0;
  if (f.kind() == FieldKind::Complex) return true;
  if (a.is_zero() || a.valuation() != 0) throw Error(ErrorKind::Domain, "is_square_unit needs a unit");
  if (f.p() != 2) return f.residue_field().is_square(a.residue());
  if (f.kind() != FieldKind::PAdic) throw Error(ErrorKind::Unsupported, "square test in 2-adic extensions");
  if (a.abs_precision() < 3) throw Error(ErrorKind::Precision, "square test in Q_2 needs the unit mod 8");
  return a.coords()[0] % 8 == 1;
}

}  // namespace weil
