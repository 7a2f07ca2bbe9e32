#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "weil/finite_quadratic.hpp"

using weil::CycInt;
using weil::FiniteAbelianGroup;
using weil::FiniteQuadraticChar;
using weil::Mu8;
using weil::RationalMatrix;

namespace {

FiniteQuadraticChar make(std::vector<std::int64_t> orders, RationalMatrix g) {
  return FiniteQuadraticChar(FiniteAbelianGroup(std::move(orders)), std::move(g));
}

// Direct floating evaluation of sum_x exp(2 pi i x^T G x).
std::complex<double> float_gauss(const FiniteQuadraticChar& h) {
  std::complex<double> acc = 0;
  const auto& g = h.gram();
  for (std::uint64_t i = 0; i < h.group().size(); ++i) {
    const auto x = h.group().element(i);
    mpq_class q = 0;
    for (std::size_t a = 0; a < x.size(); ++a) {
      for (std::size_t b = 0; b < x.size(); ++b) q += g[a][b] * static_cast<long>(x[a] * x[b]);
    }
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    q -= fl;
    acc += std::polar(1.0, 2 * M_PI * q.get_d());
  }
  return acc;
}

Mu8 float_index(const FiniteQuadraticChar& h) {
  const auto z = float_gauss(h) / std::sqrt(static_cast<double>(h.group().size()));
  const int k = static_cast<int>(std::lround(std::arg(z) / (M_PI / 4)));
  return Mu8(k);
}

std::complex<double> eval(const CycInt& a) {
  std::complex<double> acc = 0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    acc += a.coeffs()[i].get_d() *
           std::polar(1.0, 2 * M_PI * static_cast<double>(i) / static_cast<double>(a.order()));
  }
  return acc;
}

// Random well-defined characters on p-groups.
FiniteQuadraticChar random_char(std::mt19937_64& rng, std::int64_t p, int max_rank, std::int64_t max_size) {
  for (;;) {
    const int r = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_rank));
    std::vector<std::int64_t> d(r);
    std::int64_t size = 1;
    for (auto& di : d) {
      di = p;
      while (rng() % 2 && di * p * size <= max_size) di *= p;
      size *= di;
    }
    if (size > max_size) continue;
    RationalMatrix g(r, std::vector<mpq_class>(r, mpq_class(0)));
    for (int i = 0; i < r; ++i) {
      const long den = p == 2 ? 2 * d[i] : d[i];
      g[i][i] = mpq_class(static_cast<long>(rng() % static_cast<std::uint64_t>(den)), den);
      for (int j = 0; j < i; ++j) {
        const long den2 = 2 * std::gcd(d[i], d[j]);
        g[i][j] = g[j][i] = mpq_class(static_cast<long>(rng() % static_cast<std::uint64_t>(den2)), den2);
      }
    }
    for (auto& row : g) {
      for (auto& v : row) v.canonicalize();
    }
    auto h = make(d, g);
    if (weil::check_nondegenerate(h)) return h;
  }
}

}  // namespace

TEST_CASE("Z/3 with G = 1/3") {
  const auto h = make({3}, {{mpq_class(1, 3)}});
  CHECK(h.value_order() == 3);
  const CycInt expected = CycInt::integer(3, 1) + CycInt::root(3, 1) * CycInt::integer(3, 2);
  CHECK(weil::gauss_sum(h) == expected);
  CHECK(weil::weil_index_finite(h) == Mu8(2));
  CHECK(weil::fourier_identity_check(h));
}

TEST_CASE("Z/2 with G = 1/4") {
  const auto h = make({2}, {{mpq_class(1, 4)}});
  CHECK(h.value_order() == 4);
  CHECK(weil::weil_index_finite(h) == Mu8(1));
  const auto r = weil::sl2_relation_check(h);
  CHECK(r.pass3);
  CHECK(r.pass4);
  CHECK(r.full_matrices);
  CHECK(r.scalar == CycInt::integer(4, 1) + CycInt::root(4, 1));
}

TEST_CASE("trivial group") {
  const auto h = make({}, {});
  CHECK(weil::gauss_sum(h) == CycInt::integer(1, 1));
  CHECK(weil::weil_index_finite(h) == Mu8(0));
  CHECK(weil::sl2_relation_check(h).pass3);
}

TEST_CASE("ill-defined and degenerate inputs") {
  try {
    make({3}, {{mpq_class(1, 9)}});
    FAIL("expected ill-defined");
  } catch (const weil::Error& e) {
    CHECK(e.kind() == weil::ErrorKind::WellDefinedness);
  }
  // Z/2 with G = 1/2: h is well defined, but 2G is integral so rho = 0.
  const auto h = make({2}, {{mpq_class(1, 2)}});
  CHECK_FALSE(weil::check_nondegenerate(h));
  try {
    weil::weil_index_finite(h);
    FAIL("expected degenerate");
  } catch (const weil::Error& e) {
    CHECK(e.kind() == weil::ErrorKind::Degenerate);
  }
  CHECK_THROWS_AS(make({3, 3}, {{mpq_class(1, 3), 0}, {1, mpq_class(1, 3)}}), weil::Error);
}

TEST_CASE("Smith normal form") {
  using M = std::vector<std::vector<mpz_class>>;
  const auto d = weil::smith_diagonal(M{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  CHECK(d == std::vector<mpz_class>{2, 6, 12});
  CHECK(weil::smith_diagonal(M{{0, 0}, {0, 0}}) == std::vector<mpz_class>{0, 0});
}

TEST_CASE("structural nondegeneracy agrees with enumeration") {
  std::mt19937_64 rng(3);
  for (std::int64_t p : {2, 3, 5}) {
    for (int trial = 0; trial < 60; ++trial) {
      const int r = 1 + static_cast<int>(rng() % 3);
      std::vector<std::int64_t> d(r);
      for (auto& di : d) di = p * (rng() % 2 ? p : 1);
      RationalMatrix g(r, std::vector<mpq_class>(r, mpq_class(0)));
      for (int i = 0; i < r; ++i) {
        const long den = p == 2 ? 2 * d[i] : d[i];
        g[i][i] = mpq_class(static_cast<long>(rng() % static_cast<std::uint64_t>(den)), den);
        for (int j = 0; j < i; ++j) {
          const long den2 = 2 * std::gcd(d[i], d[j]);
          g[i][j] = g[j][i] = mpq_class(static_cast<long>(rng() % static_cast<std::uint64_t>(den2)), den2);
        }
      }
      for (auto& row : g) {
        for (auto& v : row) v.canonicalize();
      }
      const auto h = make(d, g);
      CHECK(weil::check_nondegenerate(h) == weil::nondegenerate_by_enumeration(h));
    }
  }
}

TEST_CASE("gauss sums and indices agree with floating evaluation") {
  std::mt19937_64 rng(5);
  for (std::int64_t p : {2, 3, 5, 7}) {
    for (int trial = 0; trial < 15; ++trial) {
      const auto h = random_char(rng, p, 3, 400);
      CHECK(std::abs(eval(weil::gauss_sum(h)) - float_gauss(h)) < 1e-6);
      CHECK(weil::weil_index_finite(h) == float_index(h));
    }
  }
}

TEST_CASE("index is multiplicative, conjugation inverts, automorphisms preserve") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const std::int64_t p = trial % 2 ? 3 : 2;
    const auto a = random_char(rng, p, 2, 64);
    const auto b = random_char(rng, 5, 1, 25);
    const auto sum = FiniteQuadraticChar::orthogonal_sum(a, b);
    CHECK(weil::weil_index_finite(sum) == weil::weil_index_finite(a) * weil::weil_index_finite(b));
    CHECK(weil::weil_index_finite(a.conjugate()) == weil::weil_index_finite(a).inverse());
  }
  // x -> 2x on Z/9 and a shear on Z/3 x Z/3.
  const auto h = make({9}, {{mpq_class(4, 9)}});
  CHECK(weil::weil_index_finite(h.pullback({{2}})) == weil::weil_index_finite(h));
  const auto k = make({3, 3}, {{mpq_class(1, 3), mpq_class(1, 6)}, {mpq_class(1, 6), mpq_class(2, 3)}});
  CHECK(weil::weil_index_finite(k.pullback({{1, 1}, {0, 1}})) == weil::weil_index_finite(k));
  CHECK_THROWS_AS(h.pullback({{1}}).pullback({{1, 0}}), weil::Error);
}

TEST_CASE("Fourier identity and SL2 relations on random characters") {
  std::mt19937_64 rng(13);
  for (std::int64_t p : {2, 3, 5}) {
    for (int trial = 0; trial < 6; ++trial) {
      const auto h = random_char(rng, p, 2, 64);
      CHECK(weil::fourier_identity_check(h));
      const auto r = weil::sl2_relation_check(h);
      CHECK(r.pass3);
      CHECK(r.pass4);
      CHECK(r.scalar == weil::gauss_sum(h));
    }
  }
}

TEST_CASE("SL2 spot checks above the matrix cap") {
  const auto saved = weil::finite_caps().matrix;
  weil::finite_caps().matrix = 4;
  const auto h = make({5, 5}, {{mpq_class(1, 5), mpq_class(1, 10)}, {mpq_class(1, 10), mpq_class(2, 5)}});
  const auto r = weil::sl2_relation_check(h);
  weil::finite_caps().matrix = saved;
  CHECK_FALSE(r.full_matrices);
  CHECK(r.pass3);
  CHECK(r.pass4);
  CHECK(r.scalar == weil::gauss_sum(h));
}

TEST_CASE("size cap") {
  const auto saved = weil::finite_caps().enumeration;
  weil::finite_caps().enumeration = 10;
  const auto h = make({11}, {{mpq_class(1, 11)}});
  try {
    weil::gauss_sum(h);
    FAIL("expected size error");
  } catch (const weil::Error& e) {
    CHECK(e.kind() == weil::ErrorKind::Size);
  }
  weil::finite_caps().enumeration = saved;
}

TEST_CASE("closed form on elementary groups matches the gauss sum") {
  std::mt19937_64 rng(21);
  for (std::int64_t p : {3, 5, 7, 11, 13}) {
    int done = 0;
    while (done < 12) {
      const auto h = random_char(rng, p, 3, 1400);
      const auto& d = h.group().orders();
      if (std::any_of(d.begin(), d.end(), [p](auto x) { return x != p; })) {
        CHECK_FALSE(weil::weil_index_elementary(h).has_value());
        continue;
      }
      REQUIRE(weil::weil_index_elementary(h).has_value());
      CHECK(*weil::weil_index_elementary(h) == weil::weil_index_finite(h));
      ++done;
    }
  }
  CHECK_FALSE(weil::weil_index_elementary(make({2}, {{mpq_class(1, 4)}})).has_value());
  // Above the switch-over the closed form is used; compare with floating sums.
  for (std::int64_t p : {10007, 10009}) {
    for (long a : {1, 2, 3, 5}) {
      const auto h = make({p}, {{mpq_class(a, p)}});
      CHECK(weil::weil_index_finite(h) == float_index(h));
    }
  }
}
