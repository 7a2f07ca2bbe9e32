#include "weil/weil_engine.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "weil/error.hpp"

namespace weil {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

void check_descriptor(const QuadraticCharDescriptor& h) {
  const auto& f = h.field();
  if (!f.is_padic() && f.kind() != FieldKind::EqChar) {
    throw Error(ErrorKind::Domain, "lattice reduction needs a non-archimedean field");
  }
  if (!(h.a.field() == f)) throw Error(ErrorKind::Validation, "coefficient and character live in different fields");
  if (h.a.is_exact_zero()) throw Error(ErrorKind::Degenerate, "quadratic character with a = 0");
  if (h.a.is_zero()) throw Error(ErrorKind::Precision, "coefficient a is zero to the working precision");
}

/// Z_p-basis of O (F_p-basis of F_q for F_q((u))).
std::vector<LocalFieldElement> integral_basis(const LocalField& f) {
  std::vector<LocalFieldElement> out;
  switch (f.kind()) {
    case FieldKind::PAdic: out.push_back(LocalFieldElement::one(f)); break;
    case FieldKind::Unramified: {
      const auto theta = LocalFieldElement::generator(f);
      auto x = LocalFieldElement::one(f);
      for (int i = 0; i < f.degree(); ++i, x = x * theta) out.push_back(x);
      break;
    }
    case FieldKind::Eisenstein:
      for (int i = 0; i < f.degree(); ++i) out.push_back(LocalFieldElement::one(f).shift(i));
      break;
    case FieldKind::EqChar: {
      const auto& F = f.residue_field();
      for (int i = 0; i < F.degree(); ++i) out.push_back(LocalFieldElement::lift(f, F.basis(i)));
      break;
    }
    default: throw Error(ErrorKind::Domain, "no integral basis at an archimedean place");
  }
  return out;
}

/// v(a/2) without dividing in characteristic 2.
struct Halved {
  LocalFieldElement b;  // a / 2
  std::int64_t m;       // v(a)
};

Halved halve(const QuadraticCharDescriptor& h) {
  const auto& f = h.field();
  if (f.kind() == FieldKind::EqChar && f.p() == 2) {
    throw Error(ErrorKind::Unsupported, "psi(a x^2 / 2) is undefined in characteristic 2");
  }
  return {h.a * LocalFieldElement::from_rational(f, mpq_class(1, 2)), h.a.valuation()};
}

/// h trivial on pi^j O, checked on generators. Only meaningful when pi^j O is
/// isotropic for the pairing, where h restricts to a character.
bool trivial_on(const QuadraticCharDescriptor& h, const Halved& hv, std::int64_t j) {
  const auto& f = h.field();
  const std::int64_t c = h.psi.conductor();
  const auto basis = integral_basis(f);
  if (f.kind() == FieldKind::EqChar) {
    // b u^(2(j+l)) lies in u^c O once m + 2(j + l) >= c.
    for (std::int64_t l = 0; hv.m + 2 * (j + l) < c; ++l) {
      for (const auto& beta : basis) {
        const auto g = beta.shift(j + l);
        if (char_exponent(h.psi, hv.b * g * g) != 0) return false;
      }
    }
    return true;
  }
  for (const auto& beta : basis) {
    const auto g = beta.shift(j);
    if (char_exponent(h.psi, hv.b * g * g) != 0) return false;
  }
  return true;
}

std::int64_t largest_admissible(const QuadraticCharDescriptor& h, const Halved& hv) {
  const std::int64_t c = h.psi.conductor();
  std::int64_t d = floor_div(c - hv.m, 2);
  while (!trivial_on(h, hv, c - hv.m - d)) --d;
  return d;
}

/// q^k, saturating.
std::uint64_t quotient_size(std::uint64_t q, std::int64_t k) {
  std::uint64_t s = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    if (s > std::numeric_limits<std::uint64_t>::max() / q) return std::numeric_limits<std::uint64_t>::max();
    s *= q;
  }
  return s;
}

std::uint64_t residue_size(const LocalField& f) {
  std::uint64_t q = 1;
  for (int i = 0; i < f.residue_degree(); ++i) q *= static_cast<std::uint64_t>(f.p());
  return q;
}

std::int64_t sign_of(const mpq_class& x) { return sgn(x); }

}  // namespace

LatticeWindow lattice_window(const QuadraticCharDescriptor& h, std::uint64_t max_quotient) {
  check_descriptor(h);
  const auto hv = halve(h);
  const std::int64_t c = h.psi.conductor();
  LatticeWindow w;
  w.d_high = largest_admissible(h, hv);
  w.self_dual = (c - hv.m == 2 * w.d_high);
  const std::uint64_t q = residue_size(h.field());
  w.d_low = w.d_high;
  while (quotient_size(q, c - hv.m - 2 * (w.d_low - 1)) <= max_quotient) --w.d_low;
  return w;
}

FiniteQuadraticChar lattice_quotient(const QuadraticCharDescriptor& h, std::int64_t d) {
  check_descriptor(h);
  const auto hv = halve(h);
  const auto& f = h.field();
  const std::int64_t c = h.psi.conductor();
  const std::int64_t k = c - hv.m - 2 * d;
  if (k < 0) throw Error(ErrorKind::Domain, "lattice exponent above the self-dual bound");
  if (!trivial_on(h, hv, c - hv.m - d)) throw Error(ErrorKind::Domain, "h is not trivial on the dual lattice");

  std::vector<LocalFieldElement> gens;
  std::vector<std::int64_t> orders;
  const auto p = f.p();
  auto p_pow = [p](std::int64_t n) {
    std::int64_t r = 1;
    for (std::int64_t i = 0; i < n; ++i) r *= p;
    return r;
  };
  const auto basis = integral_basis(f);
  switch (f.kind()) {
    case FieldKind::PAdic:
    case FieldKind::Unramified:
      if (k > 0) {
        for (const auto& beta : basis) {
          gens.push_back(beta.shift(d));
          orders.push_back(p_pow(k));
        }
      }
      break;
    case FieldKind::Eisenstein: {
      const std::int64_t e = f.ramification();
      for (std::int64_t j = 0; j < e; ++j) {
        const std::int64_t n = k > j ? (k - j + e - 1) / e : 0;
        if (n == 0) continue;
        gens.push_back(LocalFieldElement::one(f).shift(d + j));
        orders.push_back(p_pow(n));
      }
      break;
    }
    case FieldKind::EqChar:
      for (std::int64_t l = 0; l < k; ++l) {
        for (const auto& beta : basis) {
          gens.push_back(beta.shift(d + l));
          orders.push_back(p);
        }
      }
      break;
    default: break;
  }
  // Elementary quotients in odd characteristic have a closed-form index, so the
  // enumeration cap does not bind them.
  const bool elementary = p != 2 && std::all_of(orders.begin(), orders.end(), [p](auto o) { return o == p; });
  const std::uint64_t size = quotient_size(residue_size(f), k);
  if (size > finite_caps().enumeration && !elementary) {
    throw Error(ErrorKind::Size, "lattice quotient of size " + std::to_string(size) + " over " + f.str() +
                                     " exceeds the enumeration cap");
  }

  const std::size_t r = gens.size();
  RationalMatrix gram(r, std::vector<mpq_class>(r, mpq_class(0)));
  for (std::size_t i = 0; i < r; ++i) {
    gram[i][i] = char_exponent(h.psi, hv.b * gens[i] * gens[i]);
    for (std::size_t j = i + 1; j < r; ++j) {
      mpq_class g = char_exponent(h.psi, h.a * gens[i] * gens[j]) / 2;
      g.canonicalize();
      gram[i][j] = gram[j][i] = g;
    }
  }
  return FiniteQuadraticChar(FiniteAbelianGroup(orders), std::move(gram));
}

Mu8 weil_index_local_at(const QuadraticCharDescriptor& h, std::int64_t d) {
  return weil_index_finite(lattice_quotient(h, d));
}

Mu8 weil_index_local(const QuadraticCharDescriptor& h) {
  check_descriptor(h);
  const auto hv = halve(h);
  const std::int64_t d = largest_admissible(h, hv);
  if (h.psi.conductor() - hv.m == 2 * d) return Mu8(0);
  return weil_index_local_at(h, d);
}

Mu8 weil_index_arch(const LocalField& place, const mpq_class& a, int sign) {
  if (a == 0) throw Error(ErrorKind::Degenerate, "archimedean quadratic character with a = 0");
  switch (place.kind()) {
    case FieldKind::Real: return Mu8(static_cast<int>(sign_of(a) * (sign < 0 ? -1 : 1)));
    case FieldKind::Complex: return Mu8(0);
    default: throw Error(ErrorKind::Domain, "archimedean closed form at a non-archimedean place");
  }
}

Mu8 weil_index(const AdditiveCharacter& psi, const mpq_class& a) {
  if (psi.field.is_archimedean()) return weil_index_arch(psi.field, a, psi.sign);
  if (a == 0) throw Error(ErrorKind::Degenerate, "quadratic character with a = 0");
  return weil_index_local({LocalFieldElement::from_rational(psi.field, a), psi});
}

namespace {

struct RationalOps {
  mpq_class zero() const { return 0; }
  mpq_class one() const { return 1; }
  bool is_zero(const mpq_class& x) const { return x == 0; }
  bool uncertain(const mpq_class&) const { return false; }
  bool equal(const mpq_class& x, const mpq_class& y) const { return x == y; }
  std::int64_t score(const mpq_class&) const { return 0; }
};

struct LocalOps {
  LocalField f;
  LocalFieldElement zero() const { return LocalFieldElement::zero(f); }
  LocalFieldElement one() const { return LocalFieldElement::one(f); }
  bool is_zero(const LocalFieldElement& x) const { return x.is_zero(); }
  bool uncertain(const LocalFieldElement& x) const { return x.is_zero() && !x.is_exact_zero(); }
  bool equal(const LocalFieldElement& x, const LocalFieldElement& y) const { return x.agrees_with(y); }
  std::int64_t score(const LocalFieldElement& x) const { return f.is_archimedean() ? 0 : x.valuation(); }
};

struct FunctionOps {
  RationalFunction zero() const { return {}; }
  RationalFunction one() const { return RationalFunction::constant(1); }
  bool is_zero(const RationalFunction& x) const { return x.is_zero(); }
  bool uncertain(const RationalFunction&) const { return false; }
  bool equal(const RationalFunction& x, const RationalFunction& y) const { return x == y; }
  std::int64_t score(const RationalFunction& x) const { return x.order(); }
};

template <class T, class Ops>
Diagonalization<T> diagonalize(Matrix<T> a, const Ops& ops) {
  const std::size_t n = a.size();
  for (const auto& row : a) {
    if (row.size() != n) throw Error(ErrorKind::Validation, "matrix is not square");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!ops.equal(a[i][j], a[j][i])) throw Error(ErrorKind::Validation, "matrix is not symmetric");
    }
  }
  Matrix<T> m(n, std::vector<T>(n, ops.zero()));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = ops.one();

  auto add_to = [&](std::size_t i, std::size_t j, const T& f) {  // x_i <- x_i + f x_j
    for (std::size_t k = 0; k < n; ++k) a[i][k] = a[i][k] + f * a[j][k];
    for (std::size_t k = 0; k < n; ++k) a[k][i] = a[k][i] + f * a[k][j];
    for (std::size_t k = 0; k < n; ++k) m[k][i] = m[k][i] + f * m[k][j];
  };
  auto swap = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap(a[i], a[j]);
    for (auto& row : a) std::swap(row[i], row[j]);
    for (auto& row : m) std::swap(row[i], row[j]);
  };

  for (std::size_t t = 0; t < n; ++t) {
    std::optional<std::size_t> pivot;
    std::int64_t best = 0;
    for (std::size_t i = t; i < n; ++i) {
      if (ops.is_zero(a[i][i])) continue;
      const auto s = ops.score(a[i][i]);
      if (!pivot || s < best) pivot = i, best = s;
    }
    if (!pivot) {
      std::optional<std::pair<std::size_t, std::size_t>> off;
      for (std::size_t i = t; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (ops.is_zero(a[i][j])) continue;
          const auto s = ops.score(a[i][j]);
          if (!off || s < best) off = std::make_pair(i, j), best = s;
        }
      }
      if (!off) {
        for (std::size_t i = t; i < n; ++i) {
          for (std::size_t j = t; j < n; ++j) {
            if (ops.uncertain(a[i][j])) {
              throw Error(ErrorKind::Precision, "pivot indistinguishable from zero at the working precision");
            }
          }
        }
        throw Error(ErrorKind::Degenerate, "singular symmetric matrix");
      }
      add_to(off->first, off->second, ops.one());
      pivot = off->first;
    }
    swap(*pivot, t);
    for (std::size_t j = t + 1; j < n; ++j) {
      if (ops.is_zero(a[j][t])) continue;
      const T f = a[j][t] / a[t][t];
      add_to(j, t, T(ops.zero() - f));
      a[j][t] = ops.zero();
      a[t][j] = ops.zero();
    }
  }
  Diagonalization<T> out;
  for (std::size_t i = 0; i < n; ++i) out.diagonal.push_back(a[i][i]);
  out.basis = std::move(m);
  return out;
}

}  // namespace

Diagonalization<mpq_class> diagonalize_symmetric(const RationalMatrix& q) {
  RationalMatrix c = q;
  for (auto& row : c) {
    for (auto& x : row) x.canonicalize();
  }
  return diagonalize(std::move(c), RationalOps{});
}

Diagonalization<LocalFieldElement> diagonalize_symmetric(const Matrix<LocalFieldElement>& q) {
  if (q.empty()) return {};
  return diagonalize(q, LocalOps{q[0][0].field()});
}

Diagonalization<RationalFunction> diagonalize_symmetric(const Matrix<RationalFunction>& q) {
  return diagonalize(q, FunctionOps{});
}

Mu8 weil_index_form(const AdditiveCharacter& psi, const RationalMatrix& q) {
  Mu8 out;
  for (const auto& d : diagonalize_symmetric(q).diagonal) out *= weil_index(psi, d);
  return out;
}

Mu8 weil_index_form(const AdditiveCharacter& psi, const Matrix<LocalFieldElement>& q) {
  Mu8 out;
  for (const auto& d : diagonalize_symmetric(q).diagonal) {
    if (psi.field.is_archimedean()) {
      if (d.imag_part() != 0 && psi.field.kind() == FieldKind::Real) {
        throw Error(ErrorKind::Validation, "complex entry in a real form");
      }
      out *= weil_index_arch(psi.field, psi.field.kind() == FieldKind::Real ? d.real_part() : mpq_class(1), psi.sign);
    } else {
      out *= weil_index_local({d, psi});
    }
  }
  return out;
}

Mu8 weil_index_loop(const AdditiveCharacter& psi, const RationalFunction& a, const RationalFunction& w) {
  const RationalFunction b = a * w;
  if (b.is_zero()) throw Error(ErrorKind::Degenerate, "loop character with a w = 0");
  // The residue pairing makes t^d k[[t]] dual to t^(-ord b - d) k[[t]]: a self-dual
  // t-lattice exists iff ord b is even. Otherwise one k-line survives, carrying
  // psi(b_0 x^2 / 2).
  if (b.order() % 2 == 0) return Mu8(0);
  return weil_index(psi, b.leading());
}

Mu8 weil_index_loop_form(const AdditiveCharacter& psi, const Matrix<RationalFunction>& q, const RationalFunction& w) {
  Mu8 out;
  for (const auto& d : diagonalize_symmetric(q).diagonal) out *= weil_index_loop(psi, d, w);
  return out;
}

Mu8 weil_index_2dlocal(const FormalCurveData& y, std::int64_t c_psi) {
  const auto& f = y.leading.field();
  if (y.curve.fiber) {
    if ((y.ord - c_psi) % 2 == 0) return Mu8(0);
    if (f.kind() != FieldKind::EqChar) throw Error(ErrorKind::Validation, "fiber data must live in F_p((t))");
    // psi_p(x) = psi_0(-a_(-1)).
    return weil_index_local({y.leading, AdditiveCharacter{f, 0, -1}});
  }
  if (y.ord % 2 == 0) return Mu8(0);
  if (!f.is_padic()) throw Error(ErrorKind::Validation, "curve data must live in a p-adic field");
  return weil_index_local({y.leading, AdditiveCharacter{f, c_psi, 1}});
}

}  // namespace weil
