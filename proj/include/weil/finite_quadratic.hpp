#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "weil/cyclotomic.hpp"

namespace weil {

using RationalMatrix = std::vector<std::vector<mpq_class>>;

/// Z/d_1 x ... x Z/d_r. Elements are vectors with entry i reduced mod d_i.
class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() = default;
  explicit FiniteAbelianGroup(std::vector<std::int64_t> cyclic_orders);

  const std::vector<std::int64_t>& orders() const { return orders_; }
  std::size_t rank() const { return orders_.size(); }
  /// |A|, saturating at UINT64_MAX.
  std::uint64_t size() const { return size_; }
  /// lcm of the d_i.
  std::int64_t exponent() const { return exponent_; }

  /// Mixed-radix coordinates of the element with linear index `index`.
  std::vector<std::int64_t> element(std::uint64_t index) const;
  std::uint64_t index_of(const std::vector<std::int64_t>& x) const;

 private:
  std::vector<std::int64_t> orders_;
  std::uint64_t size_ = 1;
  std::int64_t exponent_ = 1;
};

/// h(x) = exp(2 pi i x^T G x) on a finite abelian group.
class FiniteQuadraticChar {
 public:
  /// Throws ErrorKind::WellDefinedness unless h is constant on cosets of the
  /// relation lattice, and ErrorKind::Validation on shape errors.
  FiniteQuadraticChar(FiniteAbelianGroup group, RationalMatrix gram);

  const FiniteAbelianGroup& group() const { return group_; }
  const RationalMatrix& gram() const { return gram_; }
  /// Least N with every value of h (and of its bicharacter) in mu_N.
  std::int64_t value_order() const { return order_; }

  /// Exponent e with h(x) = zeta_N^e.
  std::int64_t value_exponent(const std::vector<std::int64_t>& x) const;
  /// Exponent e with h(x+y) h(x)^-1 h(y)^-1 = exp(2 pi i 2 x^T G y) = zeta_N^e.
  std::int64_t pairing_exponent(const std::vector<std::int64_t>& x,
                                const std::vector<std::int64_t>& y) const;
  /// rho(y) in A* = A, coordinates (d_i * (2 G y)_i) mod d_i.
  std::vector<std::int64_t> rho(const std::vector<std::int64_t>& y) const;

  /// x -> conj(h(x)).
  FiniteQuadraticChar conjugate() const;
  /// Orthogonal sum on A_1 x A_2.
  static FiniteQuadraticChar orthogonal_sum(const FiniteQuadraticChar& a,
                                            const FiniteQuadraticChar& b);
  /// Pullback along the endomorphism x -> alpha x (alpha integer r x r, columns
  /// are the images of the generators).
  FiniteQuadraticChar pullback(const std::vector<std::vector<std::int64_t>>& alpha) const;

 private:
  FiniteAbelianGroup group_;
  RationalMatrix gram_;
  std::int64_t order_ = 1;
  std::vector<std::int64_t> diag_;  // N * G_ii mod N
  std::vector<std::vector<std::int64_t>> cross_;  // N * 2 G_ij mod N
};

/// Enumeration caps. Gauss sums: |A| <= 2e6; matrix relation checks: |A| <= 512.
struct FiniteCaps {
  std::uint64_t enumeration = 2'000'000;
  std::uint64_t matrix = 512;
};
FiniteCaps& finite_caps();

/// rho: A -> A* bijective, decided by Smith normal form of 2G against the
/// relation lattice.
bool check_nondegenerate(const FiniteQuadraticChar& h);
/// Same decision by enumerating the kernel of the pairing.
bool nondegenerate_by_enumeration(const FiniteQuadraticChar& h);

/// Diagonal of the Smith normal form of an integer matrix.
std::vector<mpz_class> smith_diagonal(std::vector<std::vector<mpz_class>> m);

/// sum_x h(x) in Z[zeta_N], N = value_order().
CycInt gauss_sum(const FiniteQuadraticChar& h);

/// Closed form on (Z/p)^r, p odd: (det(pG) / p) eps_p^r, eps_p = 1 or i as p = 1 or
/// 3 mod 4. nullopt for other groups.
std::optional<Mu8> weil_index_elementary(const FiniteQuadraticChar& h);
/// weil_index_finite switches to the closed form above this group order.
inline constexpr std::uint64_t kElementaryThreshold = 2048;

Mu8 weil_index_finite(const FiniteQuadraticChar& h);

/// For every x* in A*: (sum_x h(x) <x, x*>) * h(x* rho^-1) == gauss_sum(h).
bool fourier_identity_check(const FiniteQuadraticChar& h);

struct Sl2Result {
  CycInt scalar;
  bool pass4 = false;
  bool pass3 = false;
  /// False when the relations were checked on seeded random vectors instead of
  /// full matrices.
  bool full_matrices = true;
};

/// T = diag(h(x)), S f(x) = sum_y f(y) <y, -x rho>. Checks S^4 = |A|^2 and
/// (TS)^3 = lambda S^2, returning lambda.
Sl2Result sl2_relation_check(const FiniteQuadraticChar& h);

}  // namespace weil
