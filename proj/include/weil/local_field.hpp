#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "weil/cyclotomic.hpp"
#include "weil/finite_field.hpp"

namespace weil {

enum class FieldKind { PAdic, Unramified, Eisenstein, EqChar, Real, Complex };

const char* to_string(FieldKind kind);

/// Default relative precision, in uniformizer digits.
inline constexpr int kDefaultPrecision = 32;

/// A local field descriptor. Cheap to copy; the defining data is shared.
///
/// p-adic kinds are Z_p[theta]/(P) with theta the power-basis generator: theta = 0
/// (trivially) for Q_p, a lift of a generator of F_q for unramified fields, and the
/// uniformizer for Eisenstein fields.
class LocalField {
 public:
  LocalField();  // Q_2 placeholder so containers can default-construct

  static LocalField padic(std::int64_t p, int precision = kDefaultPrecision);
  /// poly: monic, p-integral, irreducible modulo p. Coefficients low to high.
  static LocalField unramified(std::int64_t p, const std::vector<mpq_class>& poly,
                               int precision = kDefaultPrecision);
  /// poly: t^e + a_1 t^(e-1) + ... + a_e with v_p(a_i) >= 1 and v_p(a_e) = 1.
  static LocalField eisenstein(std::int64_t p, const std::vector<mpq_class>& poly,
                               int precision = kDefaultPrecision);
  /// F_q((u)), F_q = F_p[x]/(residue_modulus); an empty modulus means F_p.
  static LocalField eqchar(std::int64_t p, const FpPoly& residue_modulus = {},
                           int precision = kDefaultPrecision);
  static LocalField real();
  static LocalField complex();

  FieldKind kind() const;
  bool is_archimedean() const;
  bool is_padic() const;  // PAdic, Unramified or Eisenstein
  std::int64_t p() const;
  int ramification() const;      // e
  int residue_degree() const;    // f
  int degree() const;            // [F : Q_p] for p-adic kinds, 1 otherwise
  int precision() const;         // relative precision cap, uniformizer digits
  /// p-adic digits carried by coordinates (exceeds precision / e with slack).
  int working_digits() const;
  const mpz_class& working_modulus() const;  // p^working_digits
  /// p^k for 0 <= k <= working_digits.
  const mpz_class& p_power(int k) const;
  const FiniteField& residue_field() const;
  /// Defining polynomial as given (rational coefficients), empty for Q_p / archimedean.
  const std::vector<mpq_class>& defining_polynomial() const;
  /// Defining polynomial reduced to integers mod p^working_digits (monic, size n+1).
  const std::vector<mpz_class>& modulus() const;
  /// Tr(theta^i) mod p^working_digits, i < n.
  const std::vector<mpz_class>& power_traces() const;
  /// p / pi as a coordinate vector (Eisenstein only).
  const std::vector<mpz_class>& p_over_pi() const;
  /// Exponent of the different, in uniformizer units.
  int different_valuation() const;

  /// Same kind, prime, polynomial and precision.
  friend bool operator==(const LocalField& a, const LocalField& b);

  /// Short human-readable name, e.g. "Q_5", "Q_5(t^2-5)", "F_3((u))", "R".
  std::string str() const;

  struct Impl;

 private:
  explicit LocalField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

int different_valuation(const LocalField& field);

/// Element of a local field.
///
/// p-adic kinds: p^k * sum_i w_i theta^i with integer coordinates, known modulo
/// pi^A (A = absolute precision, in uniformizer units). Equal characteristic:
/// u^k * sum_i s_i u^i, known modulo u^A. Archimedean: exact rationals.
class LocalFieldElement {
 public:
  LocalFieldElement();
  static LocalFieldElement zero(const LocalField& f);  // exact zero
  static LocalFieldElement one(const LocalField& f);
  static LocalFieldElement from_rational(const LocalField& f, const mpq_class& r);
  static LocalFieldElement from_int(const LocalField& f, long n) { return from_rational(f, mpq_class(n)); }
  /// p^k * sum w_i theta^i modulo pi^abs_prec (p-adic kinds).
  static LocalFieldElement from_coords(const LocalField& f, std::int64_t k, std::vector<mpz_class> w,
                                       std::int64_t abs_prec);
  /// u^k * sum s_i u^i modulo u^abs_prec (equal characteristic).
  static LocalFieldElement from_series(const LocalField& f, std::int64_t k, std::vector<FqElem> s,
                                       std::int64_t abs_prec);
  /// Complex number re + i im.
  static LocalFieldElement from_complex(const LocalField& f, const mpq_class& re, const mpq_class& im);
  static LocalFieldElement uniformizer(const LocalField& f);
  /// theta (p-adic kinds) or the residue generator x viewed as a constant (F_q((u))).
  static LocalFieldElement generator(const LocalField& f);
  /// Naive lift of a residue-field element: coordinates in [0, p).
  static LocalFieldElement lift(const LocalField& f, const FqElem& r);

  const LocalField& field() const { return field_; }

  /// Zero to the known precision (always true for exact zero).
  bool is_zero() const;
  bool is_exact_zero() const;
  /// Valuation in uniformizer units; the absolute precision for zero.
  std::int64_t valuation() const;
  std::int64_t abs_precision() const { return abs_; }
  std::int64_t rel_precision() const;

  LocalFieldElement operator-() const;
  friend LocalFieldElement operator+(const LocalFieldElement& a, const LocalFieldElement& b);
  friend LocalFieldElement operator-(const LocalFieldElement& a, const LocalFieldElement& b);
  friend LocalFieldElement operator*(const LocalFieldElement& a, const LocalFieldElement& b);
  friend LocalFieldElement operator/(const LocalFieldElement& a, const LocalFieldElement& b);
  LocalFieldElement inverse() const;
  LocalFieldElement pow(std::int64_t n) const;
  /// Multiply by uniformizer^j.
  LocalFieldElement shift(std::int64_t j) const;
  /// Lower the absolute precision to at most a.
  LocalFieldElement truncate(std::int64_t a) const;

  /// Known-equal up to the lesser precision.
  bool agrees_with(const LocalFieldElement& o) const { return (*this - o).is_zero(); }

  /// Residue class; requires valuation >= 0.
  FqElem residue() const;
  /// Tr down to Q_p (p-adic kinds).
  LocalFieldElement trace_to_base() const;
  /// The first `count` digits from the valuation upward, in naive representatives.
  std::vector<FqElem> digits(std::size_t count) const;

  // Representation access.
  std::int64_t p_shift() const { return k_; }
  const std::vector<mpz_class>& coords() const { return w_; }
  const std::vector<FqElem>& series() const { return s_; }
  const mpq_class& real_part() const { return re_; }
  const mpq_class& imag_part() const { return im_; }

  std::string str() const;

  static constexpr std::int64_t kExact = INT64_MAX / 4;

 private:
  void normalize();
  void normalize_padic();
  void normalize_series();
  void require_same_field(const LocalFieldElement& o) const;
  LocalFieldElement unit_inverse() const;

  LocalField field_;
  std::int64_t k_ = 0;
  std::vector<mpz_class> w_;
  std::vector<FqElem> s_;
  std::int64_t abs_ = kExact;
  mpq_class re_, im_;
};

/// exp(2 pi i * sign * {p^-c Tr x}_p) for p-adic kinds; zeta_p^(sign * Tr(a_(c-1)))
/// for F_q((u)); exp(2 pi i * sign * x) for R and C.
struct AdditiveCharacter {
  LocalField field;
  std::int64_t base_conductor = 0;
  int sign = 1;

  /// Q_p-style fields: sign +1, conductor 0. R, C: sign -1.
  static AdditiveCharacter standard(const LocalField& f);
  /// Largest ideal pi^c O on which the character is trivial, as c.
  std::int64_t conductor() const;
};

/// r in [0, 1) with psi(x) = exp(2 pi i r). Errors with ErrorKind::Precision when
/// the digits of x below the conductor are unknown. Non-archimedean only.
mpq_class char_exponent(const AdditiveCharacter& psi, const LocalFieldElement& x);
CycInt eval_char(const AdditiveCharacter& psi, const LocalFieldElement& x);

/// Whether a unit is a square. Odd residue characteristic, or Q_2.
bool is_square_unit(const LocalFieldElement& a);

}  // namespace weil
