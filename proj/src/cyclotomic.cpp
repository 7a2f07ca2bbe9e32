#include "weil/cyclotomic.hpp"

#include <atomic>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace weil {

namespace {

std::atomic<std::uint64_t> g_order_cap{std::uint64_t{1} << 20};

void check_order(std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::Domain, "cyclotomic order must be positive");
  if (n > g_order_cap.load()) {
    throw Error(ErrorKind::Size, "cyclotomic order " + std::to_string(n) +
                                     " exceeds cap " + std::to_string(g_order_cap.load()));
  }
}

int moebius(std::uint64_t n) {
  int mu = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  if (n > 1) mu = -mu;
  return mu;
}

// Multiply by (x^d - 1).
void mul_xd_minus_one(std::vector<mpz_class>& a, std::uint64_t d) {
  std::vector<mpz_class> r(a.size() + d);
  for (std::size_t i = 0; i < a.size(); ++i) {
    r[i + d] += a[i];
    r[i] -= a[i];
  }
  a = std::move(r);
}

// Exact division by (x^d - 1).
void div_xd_minus_one(std::vector<mpz_class>& a, std::uint64_t d) {
  const std::size_t qlen = a.size() - d;
  std::vector<mpz_class> q(qlen);
  for (std::size_t j = qlen; j-- > 0;) {
    q[j] = a[j + d];
    if (j + d < qlen) q[j] += q[j + d];
  }
  a = std::move(q);
}

struct SparseTerm {
  std::size_t index;
  mpz_class coeff;
  std::int64_t small;
  bool fits;
};

struct CycloData {
  std::vector<mpz_class> poly;
  std::vector<SparseTerm> lower;  // nonzero terms below the leading one
};

const CycloData& cyclo_data(std::uint64_t n) {
  static std::mutex mu;
  static std::map<std::uint64_t, CycloData> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<mpz_class> poly{1};
  std::vector<std::uint64_t> negative;
  for (std::uint64_t d = 1; d <= n; ++d) {
    if (n % d) continue;
    int mu_v = moebius(n / d);
    if (mu_v == 1) mul_xd_minus_one(poly, d);
    if (mu_v == -1) negative.push_back(d);
  }
  for (auto d : negative) div_xd_minus_one(poly, d);
  // The product formula yields Phi_n up to sign for n = 1.
  if (poly.back() < 0) {
    for (auto& c : poly) c = -c;
  }
  CycloData data;
  data.poly = poly;
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
    if (poly[i] != 0) {
      SparseTerm t{i, poly[i], 0, poly[i].fits_slong_p()};
      if (t.fits) t.small = poly[i].get_si();
      data.lower.push_back(t);
    }
  }
  return cache.emplace(n, std::move(data)).first->second;
}

// Reduce modulo Phi_n; returns false on int64 overflow.
bool reduce_small(std::vector<std::int64_t>& a, const CycloData& cd) {
  const std::size_t deg = cd.poly.size() - 1;
  for (const auto& t : cd.lower) {
    if (!t.fits) return false;
  }
  for (std::size_t i = a.size(); i-- > deg;) {
    const std::int64_t c = a[i];
    if (c == 0) continue;
    for (const auto& t : cd.lower) {
      std::int64_t prod;
      if (__builtin_mul_overflow(c, t.small, &prod)) return false;
      std::int64_t& dst = a[i - deg + t.index];
      if (__builtin_sub_overflow(dst, prod, &dst)) return false;
    }
    a[i] = 0;
  }
  a.resize(deg);
  return true;
}

void reduce_big(std::vector<mpz_class>& a, const CycloData& cd) {
  const std::size_t deg = cd.poly.size() - 1;
  for (std::size_t i = a.size(); i-- > deg;) {
    if (a[i] == 0) continue;
    const mpz_class c = a[i];
    for (const auto& t : cd.lower) a[i - deg + t.index] -= c * t.coeff;
    a[i] = 0;
  }
  a.resize(deg);
}

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) { return std::lcm(a, b); }

}  // namespace

std::string Mu8::str() const {
  if (exp_ == 0) return "1";
  if (exp_ == 1) return "z8";
  return "z8^" + std::to_string(exp_);
}

std::uint64_t cyclotomic_order_cap() { return g_order_cap.load(); }
void set_cyclotomic_order_cap(std::uint64_t cap) { g_order_cap.store(cap); }

const std::vector<mpz_class>& cyclotomic_polynomial(std::uint64_t n) {
  check_order(n);
  return cyclo_data(n).poly;
}

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t result = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

CycInt::CycInt(std::uint64_t order) {
  check_order(order);
  coeffs_.assign(order, mpz_class(0));
}

CycInt CycInt::integer(std::uint64_t order, const mpz_class& value) {
  CycInt r(order);
  r.coeffs_[0] = value;
  return r;
}

CycInt CycInt::root(std::uint64_t order, std::int64_t k) {
  CycInt r(order);
  const auto n = static_cast<std::int64_t>(order);
  r.coeffs_[static_cast<std::size_t>(((k % n) + n) % n)] = 1;
  return r;
}

CycInt CycInt::from_counts(std::span<const std::int64_t> counts) {
  CycInt r(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] != 0) r.coeffs_[i] = static_cast<long>(counts[i]);
  }
  return r;
}

CycInt CycInt::embed(std::uint64_t new_order) const {
  const std::uint64_t n = order();
  if (new_order % n != 0) {
    throw Error(ErrorKind::OrderMismatch, "cannot embed order " + std::to_string(n) +
                                              " into order " + std::to_string(new_order));
  }
  if (new_order == n) return *this;
  CycInt r(new_order);
  const std::uint64_t step = new_order / n;
  for (std::uint64_t i = 0; i < n; ++i) r.coeffs_[i * step] = coeffs_[i];
  return r;
}

CycInt CycInt::conj() const {
  const std::size_t n = coeffs_.size();
  CycInt r(n);
  r.coeffs_[0] = coeffs_[0];
  for (std::size_t i = 1; i < n; ++i) r.coeffs_[n - i] = coeffs_[i];
  return r;
}

CycInt CycInt::rotate(std::int64_t k) const {
  const auto n = static_cast<std::int64_t>(coeffs_.size());
  const std::int64_t s = ((k % n) + n) % n;
  CycInt r(coeffs_.size());
  for (std::int64_t i = 0; i < n; ++i) r.coeffs_[static_cast<std::size_t>((i + s) % n)] = coeffs_[i];
  return r;
}

CycInt& CycInt::operator+=(const CycInt& o) {
  if (o.order() != order()) {
    throw Error(ErrorKind::OrderMismatch, "order mismatch: " + std::to_string(order()) + " vs " +
                                              std::to_string(o.order()));
  }
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

CycInt& CycInt::operator-=(const CycInt& o) {
  if (o.order() != order()) {
    throw Error(ErrorKind::OrderMismatch, "order mismatch: " + std::to_string(order()) + " vs " +
                                              std::to_string(o.order()));
  }
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

CycInt& CycInt::operator*=(const mpz_class& s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

CycInt operator*(const CycInt& a, const CycInt& b) {
  if (a.order() != b.order()) {
    throw Error(ErrorKind::OrderMismatch, "order mismatch: " + std::to_string(a.order()) +
                                              " vs " + std::to_string(b.order()));
  }
  const std::size_t n = a.coeffs_.size();
  CycInt r(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (b.coeffs_[j] == 0) continue;
      std::size_t k = i + j;
      if (k >= n) k -= n;
      r.coeffs_[k] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return r;
}

CycInt CycInt::operator-() const {
  CycInt r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

std::vector<mpz_class> CycInt::canonical() const {
  const CycloData& cd = cyclo_data(order());
  bool small = true;
  for (const auto& c : coeffs_) {
    if (!c.fits_slong_p()) {
      small = false;
      break;
    }
  }
  if (small) {
    std::vector<std::int64_t> a(coeffs_.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = coeffs_[i].get_si();
    if (reduce_small(a, cd)) {
      std::vector<mpz_class> out(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out[i] = static_cast<long>(a[i]);
      return out;
    }
  }
  std::vector<mpz_class> a = coeffs_;
  reduce_big(a, cd);
  return a;
}

bool CycInt::is_zero() const {
  for (const auto& c : canonical()) {
    if (c != 0) return false;
  }
  return true;
}

bool CycInt::as_integer(mpz_class& out) const {
  const auto c = canonical();
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i] != 0) return false;
  }
  out = c.empty() ? mpz_class(0) : c[0];
  return true;
}

bool operator==(const CycInt& a, const CycInt& b) { return (a - b).is_zero(); }

std::string CycInt::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << coeffs_[i].get_str();
    } else {
      if (coeffs_[i] != 1) os << coeffs_[i].get_str() << "*";
      os << "z" << order() << "^" << i;
    }
  }
  if (first) os << "0";
  return os.str();
}

CycInt add(const CycInt& a, const CycInt& b, std::uint64_t common) {
  return a.embed(common) + b.embed(common);
}

CycInt mul(const CycInt& a, const CycInt& b, std::uint64_t common) {
  return a.embed(common) * b.embed(common);
}

bool equal(const CycInt& a, const CycInt& b, std::uint64_t common) {
  return a.embed(common) == b.embed(common);
}

bool is_zero_mod_cyclotomic(std::span<const std::int64_t> coeffs) {
  const CycloData& cd = cyclo_data(coeffs.size());
  std::vector<std::int64_t> a(coeffs.begin(), coeffs.end());
  if (reduce_small(a, cd)) {
    for (auto c : a) {
      if (c != 0) return false;
    }
    return true;
  }
  std::vector<mpz_class> big(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) big[i] = static_cast<long>(coeffs[i]);
  reduce_big(big, cd);
  for (const auto& c : big) {
    if (c != 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

BigFloat::BigFloat(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
BigFloat::BigFloat(const BigFloat& o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}
BigFloat& BigFloat::operator=(const BigFloat& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}
BigFloat::BigFloat(BigFloat&& o) noexcept {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_swap(v_, o.v_);
}
BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}
BigFloat::~BigFloat() { mpfr_clear(v_); }

ComplexInterval embed_complex(const CycInt& a, int precision_bits) {
  if (precision_bits < 16) {
    throw Error(ErrorKind::Domain, "embed_complex needs at least 16 bits of precision");
  }
  const auto prec = static_cast<mpfr_prec_t>(precision_bits);
  ComplexInterval out(prec);
  const std::uint64_t n = a.order();

  BigFloat angle(prec), c(prec), s(prec), term(prec), coef(prec), two_pi(prec);
  mpfr_const_pi(two_pi.get(), MPFR_RNDN);
  mpfr_mul_ui(two_pi.get(), two_pi.get(), 2, MPFR_RNDN);

  mpz_class abs_sum = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const mpz_class& ci = a.coeffs()[i];
    if (ci == 0) continue;
    abs_sum += abs(ci);
    mpfr_mul_ui(angle.get(), two_pi.get(), i, MPFR_RNDN);
    mpfr_div_ui(angle.get(), angle.get(), n, MPFR_RNDN);
    mpfr_sin_cos(s.get(), c.get(), angle.get(), MPFR_RNDN);
    mpfr_set_z(coef.get(), ci.get_mpz_t(), MPFR_RNDN);
    mpfr_mul(term.get(), c.get(), coef.get(), MPFR_RNDN);
    mpfr_add(out.re.get(), out.re.get(), term.get(), MPFR_RNDN);
    mpfr_mul(term.get(), s.get(), coef.get(), MPFR_RNDN);
    mpfr_add(out.im.get(), out.im.get(), term.get(), MPFR_RNDN);
  }
  // Every rounded quantity carries relative error <= 2^-prec; the angle picks up
  // at most three roundings (scaled by 2 pi < 8) and each coefficient, product and
  // partial sum one more. Per component the error is below
  // sum|c_i| * (n + 32) * 2^-prec; the disc radius doubles that.
  if (abs_sum == 0) {
    mpfr_set_zero(out.radius.get(), 1);
    return out;
  }
  mpz_class bound = abs_sum * (mpz_class(static_cast<unsigned long>(n)) + 32) * 2;
  mpfr_set_z(out.radius.get(), bound.get_mpz_t(), MPFR_RNDU);
  mpfr_mul_2si(out.radius.get(), out.radius.get(), -static_cast<long>(prec), MPFR_RNDU);
  return out;
}

Mu8 recognize_scaled_mu8(const CycInt& s, const mpz_class& m) {
  if (m < 1) throw Error(ErrorKind::Domain, "recognize_scaled_mu8 needs m >= 1");
  const std::uint64_t order = lcm_u64(s.order(), 8);
  const CycInt se = s.embed(order);

  if (!(se * se.conj() == CycInt::integer(order, m))) {
    throw Error(ErrorKind::Degenerate,
                "|s|^2 != " + m.get_str() + " (degenerate character); s = " + s.str());
  }
  const CycInt sq = se * se;
  int quarter = -1;
  for (int j = 0; j < 4; ++j) {
    CycInt target = CycInt::root(order, static_cast<std::int64_t>(order / 4) * j);
    target *= m;
    if (sq == target) {
      quarter = j;
      break;
    }
  }
  if (quarter < 0) {
    throw Error(ErrorKind::NotWeilIndex, "s^2 is not m times a 4th root of unity; s = " + s.str());
  }

  // gamma is zeta_8^quarter or its negative. Project s onto that direction; the
  // true projection is +-sqrt(m) and |sqrt(m)| >= 1, so any certified error
  // below 1/2 separates the two.
  for (int bits = 64; bits <= 8192; bits *= 2) {
    const auto prec = static_cast<mpfr_prec_t>(bits);
    ComplexInterval z = embed_complex(se, bits);
    BigFloat ang(prec), c(prec), sn(prec), proj(prec), t(prec), err(prec);
    mpfr_const_pi(ang.get(), MPFR_RNDN);
    mpfr_mul_si(ang.get(), ang.get(), quarter, MPFR_RNDN);
    mpfr_div_ui(ang.get(), ang.get(), 4, MPFR_RNDN);
    mpfr_sin_cos(sn.get(), c.get(), ang.get(), MPFR_RNDN);
    mpfr_mul(proj.get(), z.re.get(), c.get(), MPFR_RNDN);
    mpfr_mul(t.get(), z.im.get(), sn.get(), MPFR_RNDN);
    mpfr_add(proj.get(), proj.get(), t.get(), MPFR_RNDN);
    // Projection error: interval radius plus a few roundings of quantities <= |s|+r.
    mpfr_set_ui(err.get(), 1, MPFR_RNDU);
    mpfr_mul_2si(err.get(), err.get(), -(bits - 8), MPFR_RNDU);
    mpfr_set_z(t.get(), m.get_mpz_t(), MPFR_RNDU);
    mpfr_sqrt(t.get(), t.get(), MPFR_RNDU);
    mpfr_add_ui(t.get(), t.get(), 1, MPFR_RNDU);
    mpfr_mul(err.get(), err.get(), t.get(), MPFR_RNDU);
    mpfr_add(err.get(), err.get(), z.radius.get(), MPFR_RNDU);
    mpfr_abs(t.get(), proj.get(), MPFR_RNDD);
    mpfr_sub(t.get(), t.get(), err.get(), MPFR_RNDD);
    if (mpfr_cmp_d(t.get(), 0.5) > 0) {
      return mpfr_sgn(proj.get()) > 0 ? Mu8(quarter) : Mu8(quarter + 4);
    }
  }
  throw Error(ErrorKind::Precision, "could not separate the two square-root candidates");
}

}  // namespace weil
