#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <mpfr.h>

#include "weil/error.hpp"

namespace weil {

/// An 8th root of unity zeta_8^exponent, zeta_8 = exp(2 pi i / 8).
class Mu8 {
 public:
  constexpr Mu8() = default;
  constexpr explicit Mu8(int exponent) : exp_(((exponent % 8) + 8) % 8) {}

  constexpr int exponent() const { return exp_; }
  constexpr bool is_one() const { return exp_ == 0; }
  constexpr Mu8 inverse() const { return Mu8(-exp_); }

  friend constexpr Mu8 operator*(Mu8 a, Mu8 b) { return Mu8(a.exp_ + b.exp_); }
  Mu8& operator*=(Mu8 o) { return *this = *this * o; }
  friend constexpr bool operator==(Mu8 a, Mu8 b) = default;

  /// "1", "z8", "z8^k".
  std::string str() const;

 private:
  int exp_ = 0;
};

/// Upper bound on cyclotomic orders accepted by CycInt (default 2^20).
std::uint64_t cyclotomic_order_cap();
void set_cyclotomic_order_cap(std::uint64_t cap);

/// Coefficients of the N-th cyclotomic polynomial, low to high. Cached.
const std::vector<mpz_class>& cyclotomic_polynomial(std::uint64_t n);

/// Euler's totient.
std::uint64_t euler_phi(std::uint64_t n);

/// An element sum_i c_i zeta_N^i of Z[zeta_N], stored modulo x^N - 1.
///
/// Arithmetic works on the (non-unique) x^N - 1 representative; equality and
/// canonical() reduce modulo the N-th cyclotomic polynomial.
class CycInt {
 public:
  CycInt() : CycInt(1) {}
  explicit CycInt(std::uint64_t order);

  static CycInt integer(std::uint64_t order, const mpz_class& value);
  /// zeta_order^k.
  static CycInt root(std::uint64_t order, std::int64_t k);
  /// Coefficient i is counts[i]; counts.size() is the order.
  static CycInt from_counts(std::span<const std::int64_t> counts);

  std::uint64_t order() const { return coeffs_.size(); }
  const std::vector<mpz_class>& coeffs() const { return coeffs_; }

  /// Image under Z[zeta_N] -> Z[zeta_M], zeta_N -> zeta_M^(M/N). Requires N | M.
  CycInt embed(std::uint64_t new_order) const;

  CycInt conj() const;
  /// Multiply by zeta_N^k.
  CycInt rotate(std::int64_t k) const;

  CycInt& operator+=(const CycInt& o);
  CycInt& operator-=(const CycInt& o);
  CycInt& operator*=(const mpz_class& s);
  friend CycInt operator+(CycInt a, const CycInt& b) { return a += b; }
  friend CycInt operator-(CycInt a, const CycInt& b) { return a -= b; }
  friend CycInt operator*(const CycInt& a, const CycInt& b);
  friend CycInt operator*(CycInt a, const mpz_class& s) { return a *= s; }
  CycInt operator-() const;

  /// Canonical coordinates in the power basis 1, zeta, ..., zeta^(phi(N)-1).
  std::vector<mpz_class> canonical() const;
  bool is_zero() const;
  /// Some integer n with this == n, if one exists.
  bool as_integer(mpz_class& out) const;

  friend bool operator==(const CycInt& a, const CycInt& b);

  std::string str() const;

 private:
  std::vector<mpz_class> coeffs_;
};

/// Sum/difference/product in the common order `common`, which both orders divide.
CycInt add(const CycInt& a, const CycInt& b, std::uint64_t common);
CycInt mul(const CycInt& a, const CycInt& b, std::uint64_t common);
bool equal(const CycInt& a, const CycInt& b, std::uint64_t common);

/// Whether the integer coefficient vector (length N) vanishes modulo Phi_N.
/// int64 fast path with overflow fallback.
bool is_zero_mod_cyclotomic(std::span<const std::int64_t> coeffs);

/// RAII holder for an MPFR value.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 64);
  BigFloat(const BigFloat& o);
  BigFloat& operator=(const BigFloat& o);
  BigFloat(BigFloat&& o) noexcept;
  BigFloat& operator=(BigFloat&& o) noexcept;
  ~BigFloat();

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

/// A disc {z : |z - (re + i im)| <= radius}.
struct ComplexInterval {
  BigFloat re, im, radius;
  explicit ComplexInterval(mpfr_prec_t prec) : re(prec), im(prec), radius(prec) {}
};

/// Certified enclosure of the image of a under zeta_N -> exp(2 pi i / N).
ComplexInterval embed_complex(const CycInt& a, int precision_bits);

/// The unique gamma in mu_8 with s = sqrt(m) * gamma.
Mu8 recognize_scaled_mu8(const CycInt& s, const mpz_class& m);

}  // namespace weil
