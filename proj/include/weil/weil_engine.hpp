#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "weil/cyclotomic.hpp"
#include "weil/finite_quadratic.hpp"
#include "weil/laurent_residue.hpp"
#include "weil/local_field.hpp"
#include "weil/rational_function.hpp"

namespace weil {

/// h(x) = psi(a x^2 / 2) on the field of psi.
struct QuadraticCharDescriptor {
  LocalFieldElement a;
  AdditiveCharacter psi;

  const LocalField& field() const { return psi.field; }
};

/// Admissible lattice exponents d for U = pi^d O, d_low <= d <= d_high. d_high is
/// the largest admissible exponent; self_dual when U is its own dual there.
struct LatticeWindow {
  std::int64_t d_low = 0;
  std::int64_t d_high = 0;
  bool self_dual = false;
};

/// d_low is the smallest d whose quotient has at most max_quotient elements.
LatticeWindow lattice_window(const QuadraticCharDescriptor& h, std::uint64_t max_quotient = 4096);
/// h on pi^d O / pi^(c-m-d) O. d must be admissible.
FiniteQuadraticChar lattice_quotient(const QuadraticCharDescriptor& h, std::int64_t d);
/// Index through the quotient at a given admissible d (no self-dual shortcut).
Mu8 weil_index_local_at(const QuadraticCharDescriptor& h, std::int64_t d);
/// Index at the largest admissible d; 1 when that lattice is self-dual.
Mu8 weil_index_local(const QuadraticCharDescriptor& h);

/// psi(x) = exp(2 pi i sign x) on R or C; h(x) = psi(a x^2 / 2).
Mu8 weil_index_arch(const LocalField& place, const mpq_class& a, int sign = -1);

/// Any place: dispatches to the archimedean closed form or the lattice reduction.
Mu8 weil_index(const AdditiveCharacter& psi, const mpq_class& a);

template <class T>
using Matrix = std::vector<std::vector<T>>;

/// M^T Q M = diag(diagonal); basis holds M.
template <class T>
struct Diagonalization {
  std::vector<T> diagonal;
  Matrix<T> basis;
};

Diagonalization<mpq_class> diagonalize_symmetric(const RationalMatrix& q);
/// Pivots on minimal valuation.
Diagonalization<LocalFieldElement> diagonalize_symmetric(const Matrix<LocalFieldElement>& q);
/// Pivots on minimal t-order.
Diagonalization<RationalFunction> diagonalize_symmetric(const Matrix<RationalFunction>& q);

/// h(x) = psi(x Q x^T / 2).
Mu8 weil_index_form(const AdditiveCharacter& psi, const RationalMatrix& q);
Mu8 weil_index_form(const AdditiveCharacter& psi, const Matrix<LocalFieldElement>& q);

/// h(x) = psi(Res(a x^2 w dt) / 2) on k((t)), psi on k.
Mu8 weil_index_loop(const AdditiveCharacter& psi, const RationalFunction& a, const RationalFunction& w);
Mu8 weil_index_loop_form(const AdditiveCharacter& psi, const Matrix<RationalFunction>& q, const RationalFunction& w);

/// Index at a formal curve of Spec Z_p[[t]], psi on Q_p of conductor c_psi.
Mu8 weil_index_2dlocal(const FormalCurveData& y, std::int64_t c_psi);

}  // namespace weil
