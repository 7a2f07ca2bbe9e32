#include "weil/rational_function.hpp"

#include <sstream>

#include "weil/error.hpp"

namespace weil {

QPoly::QPoly(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) {
  for (auto& c : c_) c.canonicalize();
  trim();
}

QPoly QPoly::monomial(int k, const mpq_class& c) {
  std::vector<mpq_class> v(static_cast<std::size_t>(k) + 1, mpq_class(0));
  v[static_cast<std::size_t>(k)] = c;
  return QPoly(std::move(v));
}

void QPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

int QPoly::order() const {
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] != 0) return static_cast<int>(i);
  }
  throw Error(ErrorKind::Degenerate, "order of the zero polynomial");
}

QPoly QPoly::operator-() const {
  QPoly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

QPoly operator+(const QPoly& a, const QPoly& b) {
  std::vector<mpq_class> r(std::max(a.c_.size(), b.c_.size()), mpq_class(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
  return QPoly(std::move(r));
}

QPoly operator-(const QPoly& a, const QPoly& b) { return a + (-b); }

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpq_class> r(a.c_.size() + b.c_.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return QPoly(std::move(r));
}

void QPoly::divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
  if (b.is_zero()) throw Error(ErrorKind::Domain, "polynomial division by zero");
  std::vector<mpq_class> rem = a.c_;
  std::vector<mpq_class> quo(a.c_.size() >= b.c_.size() ? a.c_.size() - b.c_.size() + 1 : 0, mpq_class(0));
  for (std::size_t i = rem.size(); i-- >= b.c_.size() && i < rem.size();) {
    if (rem[i] == 0) continue;
    const mpq_class f = rem[i] / b.c_.back();
    const std::size_t shift = i - (b.c_.size() - 1);
    quo[shift] = f;
    for (std::size_t j = 0; j < b.c_.size(); ++j) rem[shift + j] -= f * b.c_[j];
  }
  q = QPoly(std::move(quo));
  r = QPoly(std::move(rem));
}

QPoly QPoly::gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    QPoly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return a.is_zero() ? a : a.monic();
}

QPoly QPoly::monic() const {
  if (is_zero()) return *this;
  QPoly r = *this;
  const mpq_class l = lead();
  for (auto& c : r.c_) c /= l;
  return r;
}

QPoly QPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<mpq_class> r(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<long>(i);
  return QPoly(std::move(r));
}

mpq_class QPoly::eval(const mpq_class& x) const {
  mpq_class acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

QPoly QPoly::reversed() const {
  std::vector<mpq_class> r(c_.rbegin(), c_.rend());
  return QPoly(std::move(r));
}

std::string QPoly::str(const char* var) const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    const mpq_class a = abs(c_[i]);
    if (!first) out << (c_[i] < 0 ? " - " : " + ");
    else if (c_[i] < 0) out << "-";
    if (i == 0 || a != 1) out << a.get_str();
    if (i > 0) out << var;
    if (i > 1) out << "^" << i;
    first = false;
  }
  return out.str();
}

RationalFunction::RationalFunction(QPoly num) : num_(std::move(num)), den_(QPoly::constant(1)) {}

RationalFunction::RationalFunction(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error(ErrorKind::Domain, "rational function with zero denominator");
  normalize();
}

RationalFunction RationalFunction::laurent(int min_order, const std::vector<mpq_class>& coeffs) {
  QPoly body(coeffs);
  if (min_order >= 0) return RationalFunction(QPoly::monomial(min_order) * body);
  return RationalFunction(body, QPoly::monomial(-min_order));
}

void RationalFunction::normalize() {
  if (num_.is_zero()) {
    den_ = QPoly::constant(1);
    return;
  }
  const QPoly g = QPoly::gcd(num_, den_);
  QPoly q, r;
  QPoly::divmod(num_, g, q, r);
  num_ = q;
  QPoly::divmod(den_, g, q, r);
  den_ = q;
  const mpq_class l = den_.lead();
  num_ = num_ * QPoly::constant(1 / l);
  den_ = den_.monic();
}

int RationalFunction::order() const { return num_.order() - den_.order(); }

mpq_class RationalFunction::leading() const {
  return num_[static_cast<std::size_t>(num_.order())] / den_[static_cast<std::size_t>(den_.order())];
}

RationalFunction RationalFunction::operator-() const { return RationalFunction(-num_, den_); }

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw Error(ErrorKind::Domain, "division by the zero rational function");
  return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

std::string RationalFunction::str() const {
  if (den_ == QPoly::constant(1)) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

}  // namespace weil
