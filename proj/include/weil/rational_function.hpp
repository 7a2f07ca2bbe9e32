#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

namespace weil {

/// Polynomial over Q, coefficients low to high, no trailing zeros.
class QPoly {
 public:
  QPoly() = default;
  QPoly(std::vector<mpq_class> coeffs);  // NOLINT(google-explicit-constructor)
  static QPoly constant(const mpq_class& c) { return QPoly(std::vector<mpq_class>{c}); }
  /// t^k.
  static QPoly monomial(int k, const mpq_class& c = 1);

  const std::vector<mpq_class>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const mpq_class& lead() const { return c_.back(); }
  /// Index of the lowest nonzero coefficient (t-adic order); requires nonzero.
  int order() const;
  mpq_class operator[](std::size_t i) const { return i < c_.size() ? c_[i] : mpq_class(0); }

  QPoly operator-() const;
  friend QPoly operator+(const QPoly& a, const QPoly& b);
  friend QPoly operator-(const QPoly& a, const QPoly& b);
  friend QPoly operator*(const QPoly& a, const QPoly& b);
  friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }

  /// Quotient and remainder by a nonzero divisor.
  static void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r);
  /// Monic gcd (zero if both are zero).
  static QPoly gcd(QPoly a, QPoly b);
  QPoly monic() const;
  QPoly derivative() const;
  mpq_class eval(const mpq_class& x) const;
  /// t^deg * f(1/t).
  QPoly reversed() const;

  std::string str(const char* var = "t") const;

 private:
  void trim();
  std::vector<mpq_class> c_;
};

/// Element of Q(t) as num/den with den monic and gcd(num, den) = 1.
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(QPoly::constant(1)) {}
  RationalFunction(QPoly num);  // NOLINT(google-explicit-constructor)
  RationalFunction(QPoly num, QPoly den);
  static RationalFunction constant(const mpq_class& c) { return RationalFunction(QPoly::constant(c)); }
  /// sum_i coeffs[i] t^(min_order + i).
  static RationalFunction laurent(int min_order, const std::vector<mpq_class>& coeffs);

  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  /// t-adic order at t = 0; requires nonzero.
  int order() const;
  /// Leading coefficient of the expansion at t = 0.
  mpq_class leading() const;

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  std::string str() const;

 private:
  void normalize();
  QPoly num_, den_;
};

}  // namespace weil
