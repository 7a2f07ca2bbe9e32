#include "weil/finite_field.hpp"

#include <gmpxx.h>

#include <sstream>
#include <string>

namespace weil {

namespace fp {

std::int64_t mod(std::int64_t a, std::int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}

std::int64_t pow(std::int64_t a, std::uint64_t e, std::int64_t p) {
  __int128 result = 1 % p, base = mod(a, p);
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::int64_t>(result);
}

std::int64_t inv(std::int64_t a, std::int64_t p) {
  // Extended Euclid; p need not be prime as long as gcd(a, p) = 1.
  std::int64_t old_r = mod(a, p), r = p, old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw Error(ErrorKind::Domain, "element is not invertible mod " + std::to_string(p));
  return mod(old_s, p);
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  // GMP's test is deterministic below 2^64.
  const mpz_class z(std::to_string(n));
  return mpz_probab_prime_p(z.get_mpz_t(), 25) != 0;
}

void trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

FpPoly add(const FpPoly& a, const FpPoly& b, std::int64_t p) {
  FpPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = mod(r[i] + b[i], p);
  trim(r);
  return r;
}

FpPoly sub(const FpPoly& a, const FpPoly& b, std::int64_t p) {
  FpPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = mod(r[i] - b[i], p);
  trim(r);
  return r;
}

FpPoly mul(const FpPoly& a, const FpPoly& b, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = static_cast<std::int64_t>((static_cast<__int128>(a[i]) * b[j] + r[i + j]) % p);
    }
  }
  trim(r);
  return r;
}

FpPoly rem(const FpPoly& a, const FpPoly& m, std::int64_t p) {
  FpPoly r = a;
  trim(r);
  FpPoly mm = m;
  trim(mm);
  if (mm.empty()) throw Error(ErrorKind::Domain, "polynomial division by zero");
  const std::int64_t lead_inv = inv(mm.back(), p);
  while (r.size() >= mm.size()) {
    const std::int64_t c = static_cast<std::int64_t>(static_cast<__int128>(r.back()) * lead_inv % p);
    const std::size_t shift = r.size() - mm.size();
    for (std::size_t i = 0; i < mm.size(); ++i) {
      r[shift + i] = mod(r[shift + i] - static_cast<std::int64_t>(static_cast<__int128>(c) * mm[i] % p), p);
    }
    trim(r);
  }
  return r;
}

FpPoly gcd(FpPoly a, FpPoly b, std::int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    FpPoly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const std::int64_t li = inv(a.back(), p);
    for (auto& c : a) c = static_cast<std::int64_t>(static_cast<__int128>(c) * li % p);
  }
  return a;
}

namespace {

FpPoly powmod(FpPoly base, std::uint64_t e, const FpPoly& m, std::int64_t p) {
  FpPoly result{1};
  base = rem(base, m, p);
  while (e) {
    if (e & 1) result = rem(mul(result, base, p), m, p);
    base = rem(mul(base, base, p), m, p);
    e >>= 1;
  }
  return result;
}

}  // namespace

FpPoly frobenius_power(std::uint64_t k, const FpPoly& m, std::int64_t p) {
  FpPoly x = rem(FpPoly{0, 1}, m, p);
  for (std::uint64_t i = 0; i < k; ++i) x = powmod(x, static_cast<std::uint64_t>(p), m, p);
  return x;
}

bool is_irreducible(const FpPoly& g, std::int64_t p) {
  FpPoly m = g;
  trim(m);
  if (m.size() < 2) return false;
  const auto n = static_cast<std::uint64_t>(m.size() - 1);
  if (n == 1) return true;
  const FpPoly x{0, 1};
  if (!sub(frobenius_power(n, m, p), rem(x, m, p), p).empty()) return false;
  std::uint64_t rest = n;
  for (std::uint64_t r = 2; r <= rest; ++r) {
    if (rest % r != 0) continue;
    while (rest % r == 0) rest /= r;
    const FpPoly h = sub(frobenius_power(n / r, m, p), rem(x, m, p), p);
    if (gcd(h, m, p).size() != 1) return false;
  }
  return true;
}

}  // namespace fp

FiniteField::FiniteField(std::int64_t p) : FiniteField(p, FpPoly{0, 1}) {}

FiniteField::FiniteField(std::int64_t p, FpPoly g) : p_(p), g_(std::move(g)) {
  if (!fp::is_prime(p_)) throw Error(ErrorKind::Validation, std::to_string(p_) + " is not prime");
  for (auto& c : g_) c = fp::mod(c, p_);
  fp::trim(g_);
  if (g_.size() < 2 || g_.back() != 1) {
    throw Error(ErrorKind::Validation, "finite field modulus must be monic of positive degree");
  }
  if (!fp::is_irreducible(g_, p_)) {
    throw Error(ErrorKind::Validation, "finite field modulus is reducible mod " + std::to_string(p_));
  }
  q_ = 1;
  for (int i = 0; i < degree(); ++i) {
    if (q_ > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(p_)) {
      throw Error(ErrorKind::Size, "residue field too large");
    }
    q_ *= static_cast<std::uint64_t>(p_);
  }
  // Power sums of the roots of g by Newton's identities.
  const int n = degree();
  basis_traces_.assign(n, 0);
  basis_traces_[0] = fp::mod(n, p_);
  for (int k = 1; k < n; ++k) {
    __int128 s = static_cast<__int128>(k) * g_[n - k];
    for (int i = 1; i < k; ++i) s += static_cast<__int128>(g_[n - i]) * basis_traces_[k - i];
    basis_traces_[k] = fp::mod(static_cast<std::int64_t>(-(s % p_)), p_);
  }
}

FqElem FiniteField::from_int(std::int64_t a) const {
  FqElem r = zero();
  r[0] = fp::mod(a, p_);
  return r;
}

FqElem FiniteField::basis(int i) const {
  FqElem r = zero();
  r[i] = 1;
  return r;
}

FqElem FiniteField::element(std::uint64_t index) const {
  FqElem r = zero();
  for (int i = 0; i < degree(); ++i) {
    r[i] = static_cast<std::int64_t>(index % static_cast<std::uint64_t>(p_));
    index /= static_cast<std::uint64_t>(p_);
  }
  return r;
}

bool FiniteField::is_zero(const FqElem& a) const {
  for (auto c : a) {
    if (c != 0) return false;
  }
  return true;
}

FqElem FiniteField::add(const FqElem& a, const FqElem& b) const {
  FqElem r(degree());
  for (int i = 0; i < degree(); ++i) r[i] = fp::mod(a[i] + b[i], p_);
  return r;
}

FqElem FiniteField::sub(const FqElem& a, const FqElem& b) const {
  FqElem r(degree());
  for (int i = 0; i < degree(); ++i) r[i] = fp::mod(a[i] - b[i], p_);
  return r;
}

FqElem FiniteField::neg(const FqElem& a) const { return sub(zero(), a); }

FqElem FiniteField::scale(const FqElem& a, std::int64_t s) const {
  FqElem r(degree());
  s = fp::mod(s, p_);
  for (int i = 0; i < degree(); ++i) r[i] = static_cast<std::int64_t>(static_cast<__int128>(a[i]) * s % p_);
  return r;
}

FqElem FiniteField::mul(const FqElem& a, const FqElem& b) const {
  FpPoly pa(a.begin(), a.end()), pb(b.begin(), b.end());
  fp::trim(pa);
  fp::trim(pb);
  FpPoly r = fp::rem(fp::mul(pa, pb, p_), g_, p_);
  r.resize(degree(), 0);
  return r;
}

FqElem FiniteField::inv(const FqElem& a) const {
  if (is_zero(a)) throw Error(ErrorKind::Domain, "inverse of zero in F_q");
  return pow(a, q_ - 2);
}

FqElem FiniteField::pow(const FqElem& a, std::uint64_t e) const {
  FqElem result = one(), base = a;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

std::int64_t FiniteField::trace(const FqElem& a) const {
  __int128 s = 0;
  for (int i = 0; i < degree(); ++i) s += static_cast<__int128>(a[i]) * basis_traces_[i];
  return static_cast<std::int64_t>(s % p_);
}

bool FiniteField::is_square(const FqElem& a) const {
  if (p_ == 2) throw Error(ErrorKind::Unsupported, "square test in characteristic 2");
  if (is_zero(a)) return true;
  const FqElem r = pow(a, (q_ - 1) / 2);
  return r == one();
}

std::string FiniteField::str(const FqElem& a) const {
  if (degree() == 1) return std::to_string(a[0]);
  std::ostringstream out;
  out << '[';
  for (int i = 0; i < degree(); ++i) out << (i ? "," : "") << a[i];
  out << ']';
  return out.str();
}

}  // namespace weil
