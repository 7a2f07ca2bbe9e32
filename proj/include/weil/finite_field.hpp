#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weil/error.hpp"

namespace weil {

/// Polynomials over F_p as coefficient vectors, low to high, entries in [0, p).
using FpPoly = std::vector<std::int64_t>;

namespace fp {

std::int64_t mod(std::int64_t a, std::int64_t p);
std::int64_t inv(std::int64_t a, std::int64_t p);
std::int64_t pow(std::int64_t a, std::uint64_t e, std::int64_t p);
bool is_prime(std::int64_t n);

void trim(FpPoly& a);
FpPoly add(const FpPoly& a, const FpPoly& b, std::int64_t p);
FpPoly sub(const FpPoly& a, const FpPoly& b, std::int64_t p);
FpPoly mul(const FpPoly& a, const FpPoly& b, std::int64_t p);
/// Remainder of a modulo a nonzero polynomial m.
FpPoly rem(const FpPoly& a, const FpPoly& m, std::int64_t p);
FpPoly gcd(FpPoly a, FpPoly b, std::int64_t p);
/// x^(p^k) mod m.
FpPoly frobenius_power(std::uint64_t k, const FpPoly& m, std::int64_t p);
/// Rabin's test.
bool is_irreducible(const FpPoly& g, std::int64_t p);

}  // namespace fp

/// Element of F_q = F_p[x]/(g), coordinates in the power basis of x.
using FqElem = std::vector<std::int64_t>;

class FiniteField {
 public:
  /// F_p.
  explicit FiniteField(std::int64_t p);
  /// F_p[x]/(g), g monic and irreducible mod p (checked).
  FiniteField(std::int64_t p, FpPoly g);

  std::int64_t characteristic() const { return p_; }
  int degree() const { return static_cast<int>(g_.size()) - 1; }
  std::uint64_t size() const { return q_; }
  const FpPoly& modulus() const { return g_; }

  FqElem zero() const { return FqElem(degree(), 0); }
  FqElem one() const { return from_int(1); }
  FqElem from_int(std::int64_t a) const;
  /// x^i, the i-th power-basis element.
  FqElem basis(int i) const;
  /// Element number `index` in base-p digit order; index < q.
  FqElem element(std::uint64_t index) const;

  bool is_zero(const FqElem& a) const;
  FqElem add(const FqElem& a, const FqElem& b) const;
  FqElem sub(const FqElem& a, const FqElem& b) const;
  FqElem neg(const FqElem& a) const;
  FqElem mul(const FqElem& a, const FqElem& b) const;
  FqElem scale(const FqElem& a, std::int64_t s) const;
  FqElem inv(const FqElem& a) const;
  FqElem pow(const FqElem& a, std::uint64_t e) const;
  /// Tr_{F_q/F_p}.
  std::int64_t trace(const FqElem& a) const;
  /// Euler's criterion, odd p only. Zero counts as a square.
  bool is_square(const FqElem& a) const;

  std::string str(const FqElem& a) const;

 private:
  std::int64_t p_;
  FpPoly g_;
  std::uint64_t q_;
  std::vector<std::int64_t> basis_traces_;
};

}  // namespace weil
