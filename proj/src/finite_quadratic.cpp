#include "weil/finite_quadratic.hpp"

#include "weil/finite_field.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

namespace weil {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t n) {
  a %= n;
  return a < 0 ? a + n : a;
}

std::int64_t mod128(__int128 a, std::int64_t n) {
  a %= n;
  if (a < 0) a += n;
  return static_cast<std::int64_t>(a);
}

std::int64_t to_int64(const mpz_class& z, const char* what) {
  if (!z.fits_slong_p()) throw Error(ErrorKind::Size, std::string(what) + " does not fit in 64 bits");
  return z.get_si();
}

mpz_class lcm(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

mpz_class gcd(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

bool is_integer(const mpq_class& q) { return q.get_den() == 1; }

void require_nondegenerate(const FiniteQuadraticChar& h) {
  if (!check_nondegenerate(h)) {
    throw Error(ErrorKind::Degenerate, "quadratic character is degenerate (rho not injective)");
  }
}

}  // namespace

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::int64_t> cyclic_orders)
    : orders_(std::move(cyclic_orders)) {
  size_ = 1;
  exponent_ = 1;
  for (auto d : orders_) {
    if (d < 1) throw Error(ErrorKind::Validation, "cyclic orders must be positive");
    if (size_ > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(d)) {
      size_ = std::numeric_limits<std::uint64_t>::max();
    } else if (size_ != std::numeric_limits<std::uint64_t>::max()) {
      size_ *= static_cast<std::uint64_t>(d);
    }
    exponent_ = std::lcm(exponent_, d);
  }
}

std::vector<std::int64_t> FiniteAbelianGroup::element(std::uint64_t index) const {
  std::vector<std::int64_t> x(orders_.size());
  for (std::size_t i = orders_.size(); i-- > 0;) {
    const auto d = static_cast<std::uint64_t>(orders_[i]);
    x[i] = static_cast<std::int64_t>(index % d);
    index /= d;
  }
  return x;
}

std::uint64_t FiniteAbelianGroup::index_of(const std::vector<std::int64_t>& x) const {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    idx = idx * static_cast<std::uint64_t>(orders_[i]) +
          static_cast<std::uint64_t>(mod(x[i], orders_[i]));
  }
  return idx;
}

FiniteQuadraticChar::FiniteQuadraticChar(FiniteAbelianGroup group, RationalMatrix gram)
    : group_(std::move(group)), gram_(std::move(gram)) {
  const std::size_t r = group_.rank();
  if (gram_.size() != r) throw Error(ErrorKind::Validation, "gram matrix must be r x r");
  for (auto& row : gram_) {
    if (row.size() != r) throw Error(ErrorKind::Validation, "gram matrix must be r x r");
    for (auto& v : row) v.canonicalize();
  }
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (gram_[i][j] != gram_[j][i]) throw Error(ErrorKind::Validation, "gram matrix must be symmetric");
    }
  }
  const auto& d = group_.orders();
  for (std::size_t i = 0; i < r; ++i) {
    const mpq_class di(static_cast<long>(d[i]));
    if (!is_integer(mpq_class(di * di * gram_[i][i]))) {
      throw Error(ErrorKind::WellDefinedness,
                  "h is not well defined: d_i^2 G_ii not integral at i = " + std::to_string(i));
    }
    for (std::size_t j = 0; j < r; ++j) {
      if (!is_integer(mpq_class(2 * di * gram_[i][j]))) {
        throw Error(ErrorKind::WellDefinedness, "h is not well defined: 2 d_i G_ij not integral at (" +
                                                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  mpz_class n = 1;
  for (std::size_t i = 0; i < r; ++i) {
    n = lcm(n, gram_[i][i].get_den());
    for (std::size_t j = 0; j < r; ++j) {
      if (i != j) n = lcm(n, mpq_class(2 * gram_[i][j]).get_den());
    }
  }
  order_ = to_int64(n, "value order");
  diag_.assign(r, 0);
  cross_.assign(r, std::vector<std::int64_t>(r, 0));
  for (std::size_t i = 0; i < r; ++i) {
    mpq_class v = n * gram_[i][i];
    diag_[i] = mod(to_int64(mpz_class(v.get_num() % n), "gram entry"), order_);
    for (std::size_t j = 0; j < r; ++j) {
      mpq_class w = 2 * n * gram_[i][j];
      cross_[i][j] = mod(to_int64(mpz_class(w.get_num() % n), "gram entry"), order_);
    }
  }
}

std::int64_t FiniteQuadraticChar::value_exponent(const std::vector<std::int64_t>& x) const {
  __int128 acc = 0;
  const std::size_t r = diag_.size();
  for (std::size_t i = 0; i < r; ++i) {
    acc += static_cast<__int128>(diag_[i]) * x[i] % order_ * x[i];
    for (std::size_t j = i + 1; j < r; ++j) {
      acc += static_cast<__int128>(cross_[i][j]) * x[i] % order_ * x[j];
    }
    acc %= order_;
  }
  return mod128(acc, order_);
}

std::int64_t FiniteQuadraticChar::pairing_exponent(const std::vector<std::int64_t>& x,
                                                   const std::vector<std::int64_t>& y) const {
  __int128 acc = 0;
  const std::size_t r = diag_.size();
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      acc += static_cast<__int128>(cross_[i][j]) * x[i] % order_ * y[j];
    }
    acc %= order_;
  }
  return mod128(acc, order_);
}

std::vector<std::int64_t> FiniteQuadraticChar::rho(const std::vector<std::int64_t>& y) const {
  const auto& d = group_.orders();
  const std::size_t r = d.size();
  std::vector<std::int64_t> out(r);
  for (std::size_t i = 0; i < r; ++i) {
    mpq_class acc = 0;
    for (std::size_t j = 0; j < r; ++j) acc += 2 * gram_[i][j] * static_cast<long>(y[j]);
    acc *= static_cast<long>(d[i]);
    acc.canonicalize();
    out[i] = mod(to_int64(mpz_class(acc.get_num() % d[i]), "rho"), d[i]);
  }
  return out;
}

FiniteQuadraticChar FiniteQuadraticChar::conjugate() const {
  RationalMatrix g = gram_;
  for (auto& row : g) {
    for (auto& v : row) v = -v;
  }
  return FiniteQuadraticChar(group_, std::move(g));
}

FiniteQuadraticChar FiniteQuadraticChar::orthogonal_sum(const FiniteQuadraticChar& a,
                                                        const FiniteQuadraticChar& b) {
  std::vector<std::int64_t> orders = a.group_.orders();
  orders.insert(orders.end(), b.group_.orders().begin(), b.group_.orders().end());
  const std::size_t ra = a.group_.rank();
  const std::size_t r = orders.size();
  RationalMatrix g(r, std::vector<mpq_class>(r, mpq_class(0)));
  for (std::size_t i = 0; i < ra; ++i) {
    for (std::size_t j = 0; j < ra; ++j) g[i][j] = a.gram_[i][j];
  }
  for (std::size_t i = ra; i < r; ++i) {
    for (std::size_t j = ra; j < r; ++j) g[i][j] = b.gram_[i - ra][j - ra];
  }
  return FiniteQuadraticChar(FiniteAbelianGroup(std::move(orders)), std::move(g));
}

FiniteQuadraticChar FiniteQuadraticChar::pullback(
    const std::vector<std::vector<std::int64_t>>& alpha) const {
  const std::size_t r = group_.rank();
  const auto& d = group_.orders();
  if (alpha.size() != r) throw Error(ErrorKind::Validation, "alpha must be r x r");
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t i = 0; i < r; ++i) {
      if (alpha[i].size() != r) throw Error(ErrorKind::Validation, "alpha must be r x r");
      // d_j e_j must map to 0.
      if (static_cast<__int128>(alpha[i][j]) * d[j] % d[i] != 0) {
        throw Error(ErrorKind::Validation, "alpha is not a homomorphism of the group");
      }
    }
  }
  RationalMatrix g(r, std::vector<mpq_class>(r, mpq_class(0)));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      mpq_class acc = 0;
      for (std::size_t k = 0; k < r; ++k) {
        for (std::size_t l = 0; l < r; ++l) {
          acc += static_cast<long>(alpha[k][i]) * gram_[k][l] * static_cast<long>(alpha[l][j]);
        }
      }
      g[i][j] = acc;
    }
  }
  return FiniteQuadraticChar(group_, std::move(g));
}

FiniteCaps& finite_caps() {
  static FiniteCaps caps;
  return caps;
}

std::vector<mpz_class> smith_diagonal(std::vector<std::vector<mpz_class>> m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  const std::size_t n = std::min(rows, cols);
  std::vector<mpz_class> diag;
  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t pr = rows, pc = cols;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (m[i][j] != 0 && (pr == rows || abs(m[i][j]) < abs(m[pr][pc]))) {
            pr = i;
            pc = j;
          }
        }
      }
      if (pr == rows) {
        for (std::size_t k = t; k < n; ++k) diag.emplace_back(0);
        goto done;
      }
      std::swap(m[t], m[pr]);
      for (auto& row : m) std::swap(row[t], row[pc]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), m[i][t].get_mpz_t(), m[t][t].get_mpz_t());
        for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
        if (m[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), m[t][j].get_mpz_t(), m[t][t].get_mpz_t());
        for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
        if (m[t][j] != 0) clean = false;
      }
      if (clean) break;
    }
    diag.push_back(abs(m[t][t]));
  }
done:
  // Enforce the divisibility chain.
  for (std::size_t i = 0; i < diag.size(); ++i) {
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      const mpz_class g = gcd(diag[i], diag[j]);
      const mpz_class l = (g == 0) ? mpz_class(0) : mpz_class(diag[i] / g * diag[j]);
      diag[i] = g;
      diag[j] = l;
    }
  }
  return diag;
}

bool check_nondegenerate(const FiniteQuadraticChar& h) {
  const auto& g = h.gram();
  const auto& d = h.group().orders();
  const std::size_t r = d.size();
  if (r == 0) return true;
  // x is in ker rho iff (2 G x)_i is integral for all i, i.e. M x = 0 mod L with
  // M = L * 2G integral.
  mpz_class l = 1;
  for (const auto& row : g) {
    for (const auto& v : row) l = lcm(l, mpq_class(2 * v).get_den());
  }
  std::vector<std::vector<mpz_class>> m(r, std::vector<mpz_class>(r));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      mpq_class v = 2 * l * g[i][j];
      v.canonicalize();
      m[i][j] = v.get_num();
    }
  }
  // [Z^r : ker] = |image of M in (Z/L)^r| = prod L / gcd(s_i, L).
  mpz_class index = 1;
  for (const auto& s : smith_diagonal(m)) index *= l / gcd(s, l);
  mpz_class size = 1;
  for (auto di : d) size *= static_cast<long>(di);
  return index == size;
}

bool nondegenerate_by_enumeration(const FiniteQuadraticChar& h) {
  const auto& grp = h.group();
  if (grp.size() > finite_caps().enumeration) {
    throw Error(ErrorKind::Size, "group too large to enumerate");
  }
  const auto& g = h.gram();
  const std::size_t r = grp.rank();
  for (std::uint64_t idx = 1; idx < grp.size(); ++idx) {
    const auto x = grp.element(idx);
    bool in_kernel = true;
    for (std::size_t i = 0; i < r && in_kernel; ++i) {
      mpq_class acc = 0;
      for (std::size_t j = 0; j < r; ++j) acc += 2 * g[i][j] * static_cast<long>(x[j]);
      acc.canonicalize();
      in_kernel = acc.get_den() == 1;
    }
    if (in_kernel) return false;
  }
  return true;
}

CycInt gauss_sum(const FiniteQuadraticChar& h) {
  const auto& grp = h.group();
  if (grp.size() > finite_caps().enumeration) {
    throw Error(ErrorKind::Size, "|A| = " + std::to_string(grp.size()) + " exceeds enumeration cap " +
                                     std::to_string(finite_caps().enumeration));
  }
  std::vector<std::int64_t> counts(static_cast<std::size_t>(h.value_order()), 0);
  std::vector<std::int64_t> x(grp.rank(), 0);
  for (std::uint64_t idx = 0; idx < grp.size(); ++idx) {
    ++counts[static_cast<std::size_t>(h.value_exponent(x))];
    for (std::size_t i = grp.rank(); i-- > 0;) {
      if (++x[i] < grp.orders()[i]) break;
      x[i] = 0;
    }
  }
  return CycInt::from_counts(counts);
}

std::optional<Mu8> weil_index_elementary(const FiniteQuadraticChar& h) {
  const auto& orders = h.group().orders();
  if (orders.empty()) return std::nullopt;
  const std::int64_t p = orders[0];
  if (p == 2 || !fp::is_prime(p) || std::any_of(orders.begin(), orders.end(), [&](auto d) { return d != p; })) {
    return std::nullopt;
  }
  // h(x) = zeta_p^(x^T S x) with S = p G over F_p (well-definedness puts p G_ii and
  // 2 p G_ij in Z). Diagonalizing S gives prod_i (s_i / p) g_p, g_p = eps_p sqrt(p).
  const std::size_t r = orders.size();
  const std::int64_t half = fp::inv(2, p);
  std::vector<std::vector<std::int64_t>> s(r, std::vector<std::int64_t>(r));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      mpq_class x = h.gram()[i][j] * p * (i == j ? 1 : 2);
      x.canonicalize();
      const mpz_class num = x.get_num() % p, den = x.get_den() % p;
      const std::int64_t v = fp::mod(num.get_si(), p) * static_cast<__int128>(fp::inv(den.get_si(), p)) % p;
      s[i][j] = i == j ? v : static_cast<std::int64_t>(static_cast<__int128>(v) * half % p);
    }
  }
  __int128 det = 1;
  for (std::size_t c = 0; c < r; ++c) {
    std::size_t piv = c;
    while (piv < r && s[piv][c] == 0) ++piv;
    if (piv == r) throw Error(ErrorKind::Degenerate, "quadratic character is degenerate");
    if (piv != c) std::swap(s[piv], s[c]), det = p - det;
    det = det * s[c][c] % p;
    const std::int64_t ic = fp::inv(s[c][c], p);
    for (std::size_t i = c + 1; i < r; ++i) {
      const __int128 f = static_cast<__int128>(s[i][c]) * ic % p;
      for (std::size_t j = c; j < r; ++j) s[i][j] = fp::mod(static_cast<std::int64_t>((s[i][j] - f * s[c][j]) % p), p);
    }
  }
  const bool square = fp::pow(static_cast<std::int64_t>(det), static_cast<std::uint64_t>(p - 1) / 2, p) == 1;
  const int eps = p % 4 == 1 ? 0 : 2;
  return Mu8((square ? 0 : 4) + eps * static_cast<int>(r % 4));
}

Mu8 weil_index_finite(const FiniteQuadraticChar& h) {
  if (h.group().size() > kElementaryThreshold) {
    if (auto fast = weil_index_elementary(h)) return *fast;
  }
  require_nondegenerate(h);
  return recognize_scaled_mu8(gauss_sum(h), mpz_class(static_cast<unsigned long>(h.group().size())));
}

bool fourier_identity_check(const FiniteQuadraticChar& h) {
  require_nondegenerate(h);
  const auto& grp = h.group();
  if (grp.size() > finite_caps().enumeration) {
    throw Error(ErrorKind::Size, "group too large for the Fourier identity check");
  }
  const auto size = static_cast<std::size_t>(grp.size());
  const std::int64_t n = h.value_order();
  const std::int64_t m = std::lcm(n, grp.exponent());
  const std::int64_t scale_h = m / n;
  const std::size_t r = grp.rank();

  std::vector<std::vector<std::int64_t>> elems(size);
  std::vector<std::int64_t> hx(size);
  for (std::size_t i = 0; i < size; ++i) {
    elems[i] = grp.element(i);
    hx[i] = h.value_exponent(elems[i]) * scale_h % m;
  }
  std::vector<std::int64_t> pair_scale(r);
  for (std::size_t i = 0; i < r; ++i) pair_scale[i] = m / grp.orders()[i];

  // rho^-1 as a table on A* = A.
  std::vector<std::size_t> rho_inv(size, size);
  for (std::size_t y = 0; y < size; ++y) {
    const auto xi = static_cast<std::size_t>(grp.index_of(h.rho(elems[y])));
    if (rho_inv[xi] != size) throw Error(ErrorKind::Degenerate, "rho is not injective");
    rho_inv[xi] = y;
  }

  std::vector<std::int64_t> gauss(static_cast<std::size_t>(m), 0);
  for (std::size_t x = 0; x < size; ++x) ++gauss[static_cast<std::size_t>(hx[x])];

  std::vector<std::int64_t> counts(static_cast<std::size_t>(m));
  for (std::size_t xi = 0; xi < size; ++xi) {
    std::fill(counts.begin(), counts.end(), 0);
    const auto& xs = elems[xi];
    const std::int64_t shift = hx[rho_inv[xi]];
    for (std::size_t x = 0; x < size; ++x) {
      std::int64_t e = hx[x] + shift;
      for (std::size_t i = 0; i < r; ++i) e += elems[x][i] * xs[i] % grp.orders()[i] * pair_scale[i];
      ++counts[static_cast<std::size_t>(e % m)];
    }
    for (std::size_t k = 0; k < counts.size(); ++k) counts[k] -= gauss[k];
    if (!is_zero_mod_cyclotomic(counts)) return false;
  }
  return true;
}

namespace {

// Square matrices whose entries are elements of Z[zeta_N] stored as N int64
// coefficients each.
struct PolyMatrix {
  std::size_t dim = 0;
  std::size_t n = 0;
  std::vector<std::int64_t> data;
  PolyMatrix(std::size_t d, std::size_t order) : dim(d), n(order), data(d * d * order, 0) {}
  std::int64_t* entry(std::size_t x, std::size_t y) { return data.data() + (x * dim + y) * n; }
  const std::int64_t* entry(std::size_t x, std::size_t y) const { return data.data() + (x * dim + y) * n; }
};

// Entries zeta_N^e, stored as exponents.
using MonomialMatrix = std::vector<std::vector<std::int64_t>>;

PolyMatrix mono_times_mono(const MonomialMatrix& a, const MonomialMatrix& b, std::size_t n) {
  const std::size_t dim = a.size();
  PolyMatrix r(dim, n);
  const auto nn = static_cast<std::int64_t>(n);
  for (std::size_t x = 0; x < dim; ++x) {
    for (std::size_t k = 0; k < dim; ++k) {
      const std::int64_t ak = a[x][k];
      for (std::size_t y = 0; y < dim; ++y) ++r.entry(x, y)[(ak + b[k][y]) % nn];
    }
  }
  return r;
}

PolyMatrix poly_times_mono(const PolyMatrix& a, const MonomialMatrix& b) {
  const std::size_t dim = a.dim, n = a.n;
  PolyMatrix r(dim, n);
  for (std::size_t x = 0; x < dim; ++x) {
    for (std::size_t k = 0; k < dim; ++k) {
      const std::int64_t* src = a.entry(x, k);
      for (std::size_t y = 0; y < dim; ++y) {
        std::int64_t* dst = r.entry(x, y);
        const auto shift = static_cast<std::size_t>(b[k][y]);
        for (std::size_t c = 0; c < n; ++c) {
          if (src[c] == 0) continue;
          std::size_t t = c + shift;
          if (t >= n) t -= n;
          dst[t] += src[c];
        }
      }
    }
  }
  return r;
}

// Multiply two length-n cyclic polynomials into out (accumulating with sign).
void cyclic_mul_acc(const std::vector<std::int64_t>& a, const std::int64_t* b, std::size_t n,
                    std::vector<std::int64_t>& out, std::int64_t sign) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (b[j] == 0) continue;
      std::size_t k = (i + j) % n;
      out[k] += sign * a[i] * b[j];
    }
  }
}

using PolyVector = std::vector<std::vector<std::int64_t>>;

PolyVector apply_mono(const MonomialMatrix& m, const PolyVector& v, std::size_t n) {
  const std::size_t dim = m.size();
  PolyVector r(dim, std::vector<std::int64_t>(n, 0));
  for (std::size_t x = 0; x < dim; ++x) {
    for (std::size_t y = 0; y < dim; ++y) {
      const auto shift = static_cast<std::size_t>(m[x][y]);
      for (std::size_t c = 0; c < n; ++c) {
        if (v[y][c] == 0) continue;
        r[x][(c + shift) % n] += v[y][c];
      }
    }
  }
  return r;
}

void apply_diag(const std::vector<std::int64_t>& t, PolyVector& v, std::size_t n) {
  for (std::size_t x = 0; x < v.size(); ++x) {
    std::vector<std::int64_t> rot(n, 0);
    for (std::size_t c = 0; c < n; ++c) rot[(c + static_cast<std::size_t>(t[x])) % n] = v[x][c];
    v[x] = std::move(rot);
  }
}

CycInt extract_lambda(const std::vector<std::int64_t>& entry00, std::uint64_t size, std::size_t n) {
  CycInt raw = CycInt::from_counts(entry00);
  const auto canon = raw.canonical();
  CycInt lambda(n);
  const mpz_class denom(static_cast<unsigned long>(size));
  std::vector<mpz_class> coeffs(n, mpz_class(0));
  for (std::size_t i = 0; i < canon.size(); ++i) {
    if (canon[i] % denom != 0) {
      throw Error(ErrorKind::RelationViolation,
                  "(TS)^3 is not a scalar multiple of S^2: entry (0,0) not divisible by |A|");
    }
    coeffs[i] = canon[i] / denom;
  }
  std::vector<std::int64_t> small(n, 0);
  for (std::size_t i = 0; i < n; ++i) small[i] = to_int64(coeffs[i], "lambda coefficient");
  return CycInt::from_counts(small);
}

}  // namespace

Sl2Result sl2_relation_check(const FiniteQuadraticChar& h) {
  require_nondegenerate(h);
  const auto& grp = h.group();
  const auto n = static_cast<std::size_t>(h.value_order());
  const std::uint64_t size = grp.size();
  constexpr std::uint64_t kFullMatrixEntries = std::uint64_t{1} << 22;
  constexpr std::uint64_t kSpotCheckWork = std::uint64_t{1} << 31;
  if (size > 1'000'000 || size * size > kSpotCheckWork / n) {
    throw Error(ErrorKind::Size, "|A| = " + std::to_string(size) + " too large for relation checks");
  }
  const auto dim = static_cast<std::size_t>(size);
  const auto nn = static_cast<std::int64_t>(n);

  std::vector<std::vector<std::int64_t>> elems(dim);
  std::vector<std::int64_t> t(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    elems[i] = grp.element(i);
    t[i] = h.value_exponent(elems[i]);
  }
  MonomialMatrix s(dim, std::vector<std::int64_t>(dim));
  MonomialMatrix ts(dim, std::vector<std::int64_t>(dim));
  for (std::size_t x = 0; x < dim; ++x) {
    for (std::size_t y = 0; y < dim; ++y) {
      s[x][y] = mod(-h.pairing_exponent(elems[y], elems[x]), nn);
      ts[x][y] = (t[x] + s[x][y]) % nn;
    }
  }

  Sl2Result result;
  const mpz_class sq(static_cast<unsigned long>(size * size));
  const bool full = size <= finite_caps().matrix && size * size * n <= kFullMatrixEntries;
  result.full_matrices = full;

  if (full) {
    const PolyMatrix ts2 = mono_times_mono(ts, ts, n);
    const PolyMatrix ts3 = poly_times_mono(ts2, ts);
    const PolyMatrix s2 = mono_times_mono(s, s, n);
    const PolyMatrix s4 = poly_times_mono(poly_times_mono(s2, s), s);

    bool pass4 = true;
    std::vector<std::int64_t> buf(n);
    for (std::size_t x = 0; x < dim && pass4; ++x) {
      for (std::size_t y = 0; y < dim && pass4; ++y) {
        std::copy(s4.entry(x, y), s4.entry(x, y) + n, buf.begin());
        if (x == y) buf[0] -= static_cast<std::int64_t>(size * size);
        pass4 = is_zero_mod_cyclotomic(buf);
      }
    }
    result.pass4 = pass4;

    std::vector<std::int64_t> e00(ts3.entry(0, 0), ts3.entry(0, 0) + n);
    result.scalar = extract_lambda(e00, size, n);
    std::vector<std::int64_t> lam(n);
    for (std::size_t i = 0; i < n; ++i) lam[i] = result.scalar.coeffs()[i].get_si();

    bool pass3 = true;
    for (std::size_t x = 0; x < dim && pass3; ++x) {
      for (std::size_t y = 0; y < dim && pass3; ++y) {
        std::vector<std::int64_t> diff(ts3.entry(x, y), ts3.entry(x, y) + n);
        cyclic_mul_acc(lam, s2.entry(x, y), n, diff, -1);
        pass3 = is_zero_mod_cyclotomic(diff);
      }
    }
    result.pass3 = pass3;
    if (!pass3) throw Error(ErrorKind::RelationViolation, "(TS)^3 != lambda S^2");
    return result;
  }

  // Spot checks on e_0 and seeded random vectors.
  auto ts_apply = [&](PolyVector v) {
    v = apply_mono(s, v, n);
    apply_diag(t, v, n);
    return v;
  };
  PolyVector e0(dim, std::vector<std::int64_t>(n, 0));
  e0[0][0] = 1;
  PolyVector w = ts_apply(ts_apply(ts_apply(e0)));
  result.scalar = extract_lambda(w[0], size, n);
  std::vector<std::int64_t> lam(n);
  for (std::size_t i = 0; i < n; ++i) lam[i] = result.scalar.coeffs()[i].get_si();

  std::mt19937_64 rng(0x5eed);
  bool pass3 = true, pass4 = true;
  for (int trial = 0; trial < 3; ++trial) {
    PolyVector v(dim, std::vector<std::int64_t>(n, 0));
    for (auto& entry : v) entry[rng() % n] = static_cast<std::int64_t>(rng() % 5) - 2;
    const PolyVector lhs3 = ts_apply(ts_apply(ts_apply(v)));
    const PolyVector s2v = apply_mono(s, apply_mono(s, v, n), n);
    const PolyVector s4v = apply_mono(s, apply_mono(s, s2v, n), n);
    for (std::size_t x = 0; x < dim; ++x) {
      std::vector<std::int64_t> diff = lhs3[x];
      cyclic_mul_acc(lam, s2v[x].data(), n, diff, -1);
      if (!is_zero_mod_cyclotomic(diff)) pass3 = false;
      std::vector<std::int64_t> d4 = s4v[x];
      for (std::size_t c = 0; c < n; ++c) d4[c] -= static_cast<std::int64_t>(size * size) * v[x][c];
      if (!is_zero_mod_cyclotomic(d4)) pass4 = false;
    }
  }
  result.pass3 = pass3;
  result.pass4 = pass4;
  if (!pass3) throw Error(ErrorKind::RelationViolation, "(TS)^3 != lambda S^2 on a test vector");
  (void)sq;
  return result;
}

}  // namespace weil
