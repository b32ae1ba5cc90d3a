#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <random>
#include <sstream>

#include "cubicvd/eisenstein.hpp"

using namespace cubicvd;

namespace {

// Independent oracle: trial-division primality, no shared sieve code.
bool is_prime_slow(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Independent oracle: odd-only sieve.
std::vector<std::uint64_t> odd_sieve(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (n >= 2) out.push_back(2);
  std::vector<bool> comp((n + 1) / 2 + 1, false);
  for (std::uint64_t i = 3; i <= n; i += 2) {
    if (comp[i / 2]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= n; j += 2 * i) comp[j / 2] = true;
  }
  return out;
}

std::uint64_t splitting_rule_count(std::uint64_t X) {
  std::uint64_t count = 0;
  for (auto p : odd_sieve(X)) {
    if (p == 3) ++count;
    else if (p % 3 == 1) count += 2;
    else if (p * p <= X) ++count;
  }
  return count;
}

// Squarefree by brute force: no non-unit d with d^2 | c.
bool squarefree_brute(EisensteinInt c) {
  const Int n = c.norm();
  const Int r = static_cast<Int>(std::sqrt(std::sqrt(double(n)))) + 2;
  for (Int a = -2 * r; a <= 2 * r; ++a)
    for (Int b = -2 * r; b <= 2 * r; ++b) {
      EisensteinInt d{a, b};
      const Int dn = d.norm();
      if (dn <= 1 || dn * dn > n) continue;
      if (divides(d * d, c)) return false;
    }
  return true;
}

}  // namespace

TEST(EisensteinInt, NormExamples) {
  EXPECT_EQ(norm({1, 0}), 1);
  EXPECT_EQ(norm({1, -1}), 3);
  EXPECT_EQ(norm({10, 9}), 91);
  EXPECT_EQ(norm({0, 0}), 0);
}

TEST(EisensteinInt, UnitsFormAGroup) {
  for (const auto& u : kUnits) {
    EXPECT_EQ(u.norm(), 1);
    for (const auto& v : kUnits) EXPECT_TRUE((u * v).is_unit());
  }
  EXPECT_EQ(EisensteinInt::omega() * EisensteinInt::omega() * EisensteinInt::omega(), EisensteinInt::one());
}

TEST(EisensteinInt, NormIsMultiplicative) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Int> d(-100000, 100000);
  for (int i = 0; i < 10000; ++i) {
    EisensteinInt x{d(rng), d(rng)}, y{d(rng), d(rng)};
    EXPECT_EQ((x * y).wide_norm(), x.wide_norm() * y.wide_norm());
    EXPECT_EQ(x * y, y * x);
    EisensteinInt z{d(rng) / 100, d(rng) / 100};
    EXPECT_EQ((x * y) * z, x * (y * z));
  }
}

TEST(EisensteinInt, ComplexEmbeddingMatchesArithmetic) {
  EisensteinInt x{3, -7}, y{-2, 5};
  auto p = (x * y).to_complex();
  auto q = x.to_complex() * y.to_complex();
  EXPECT_NEAR(std::abs(p - q), 0.0, 1e-12);
  EXPECT_NEAR(std::norm(x.to_complex()), double(x.norm()), 1e-12);
  EXPECT_NEAR(std::abs(x.conj().to_complex() - std::conj(x.to_complex())), 0.0, 1e-12);
}

TEST(EisensteinInt, DivisionRemainderIsSmaller) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<Int> d(-5000, 5000);
  for (int i = 0; i < 5000; ++i) {
    EisensteinInt x{d(rng), d(rng)}, y{d(rng), d(rng)};
    if (y.is_zero()) continue;
    auto [q, r] = divmod(x, y);
    EXPECT_EQ(y * q + r, x);
    EXPECT_LT(r.norm(), y.norm());
  }
  EXPECT_THROW(divmod({1, 1}, {0, 0}), DomainError);
}

TEST(EisensteinInt, OverflowFailsLoudly) {
  EisensteinInt big{Int(1) << 62, Int(1) << 62};
  EXPECT_THROW(big * big, std::overflow_error);
}

TEST(EisensteinInt, NormalizePicksPositiveLexicographicallyLeast) {
  EXPECT_EQ(normalize({1, -1}), (EisensteinInt{1, -1}));
  EXPECT_EQ(normalize({-2, -1}), (EisensteinInt{1, -1}));
  EXPECT_EQ(normalize({0, 5}), (EisensteinInt{5, 0}));
  for (Int a = -6; a <= 6; ++a)
    for (Int b = -6; b <= 6; ++b) {
      EisensteinInt z{a, b};
      if (z.is_zero()) continue;
      EisensteinInt n = normalize(z);
      EXPECT_GT(n.a, 0);
      EXPECT_TRUE(associates(n, z));
      for (const auto& u : kUnits) {
        auto c = u * z;
        if (c.a > 0) { EXPECT_LE(n, c); }
      }
    }
}

TEST(PrimeIdeals, SmallBounds) {
  EXPECT_TRUE(enumerate_prime_ideals(2).empty());
  auto p20 = enumerate_prime_ideals(20);
  std::vector<Int> norms;
  for (const auto& p : p20) norms.push_back(p.norm);
  EXPECT_EQ(norms, (std::vector<Int>{3, 4, 7, 7, 13, 13, 19, 19}));
  EXPECT_EQ(p20[0].splitting, Splitting::ramified);
  EXPECT_EQ(p20[0].generator, (EisensteinInt{1, -1}));
  EXPECT_EQ(p20[1].generator, (EisensteinInt{2, 0}));
}

TEST(PrimeIdeals, CountAt100MatchesRationalSieve) {
  std::uint64_t expected = 1;
  for (std::uint64_t p = 2; p <= 10; ++p)
    if (is_prime_slow(p) && p % 3 == 2) ++expected;
  for (std::uint64_t p = 2; p <= 100; ++p)
    if (is_prime_slow(p) && p % 3 == 1) expected += 2;
  EXPECT_EQ(enumerate_prime_ideals(100).size(), expected);
}

TEST(PrimeIdeals, CountsUpToMillionMatchSplittingRules) {
  for (std::uint64_t X : {3ull, 4ull, 1000ull, 65536ull, 1000000ull}) {
    EXPECT_EQ(enumerate_prime_ideals(X).size(), splitting_rule_count(X)) << X;
    EXPECT_EQ(prime_ideal_count(X), splitting_rule_count(X)) << X;
  }
}

TEST(PrimeIdeals, RecordInvariants) {
  auto primes = enumerate_prime_ideals(20000);
  EXPECT_TRUE(std::is_sorted(primes.begin(), primes.end(), ideal_order));
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const auto& p = primes[i];
    EXPECT_EQ(p.generator.norm(), p.norm);
    EXPECT_EQ(normalize(p.generator), p.generator);
    EXPECT_TRUE(is_prime_slow(std::uint64_t(p.rational_prime)));
    switch (p.splitting) {
      case Splitting::ramified: EXPECT_EQ(p.norm, 3); EXPECT_EQ(p.rational_prime, 3); break;
      case Splitting::inert:
        EXPECT_EQ(p.rational_prime % 3, 2);
        EXPECT_EQ(p.norm, p.rational_prime * p.rational_prime);
        break;
      case Splitting::split:
        EXPECT_EQ(p.rational_prime % 3, 1);
        EXPECT_EQ(p.norm, p.rational_prime);
        break;
    }
    if (i > 0) { EXPECT_FALSE(associates(primes[i - 1].generator, p.generator)); }
  }
}

TEST(PrimeIdeals, SegmentedNormTableMatchesFullEnumeration) {
  auto full = enumerate_prime_ideals(50000);
  std::map<Int, int> expected;
  for (const auto& p : full)
    if (p.norm >= 1234) ++expected[p.norm];
  std::map<Int, int> got;
  for (const auto& pn : prime_norms_in(1234, 50000)) got[Int(pn.norm)] += pn.count;
  EXPECT_EQ(got, expected);
}

TEST(Factorization, Examples) {
  auto f10 = factor({10, 0});
  ASSERT_EQ(f10.factors.size(), 2u);
  EXPECT_EQ(f10.factors[0].prime, inert_prime(2));
  EXPECT_EQ(f10.factors[1].prime, inert_prime(5));
  EXPECT_EQ(f10.factors[0].exponent, 1);

  auto f3 = factor({3, 0});
  ASSERT_EQ(f3.factors.size(), 1u);
  EXPECT_EQ(f3.factors[0].prime, ramified_prime());
  EXPECT_EQ(f3.factors[0].exponent, 2);
  EXPECT_FALSE(f3.squarefree());

  auto f = factor({1, -1});
  ASSERT_EQ(f.factors.size(), 1u);
  EXPECT_EQ(f.factors[0].exponent, 1);
  EXPECT_EQ(f.factors[0].prime.norm, 3);

  EXPECT_THROW(factor({0, 0}), ValidationError);
  EXPECT_THROW(factor({0, 1}), ValidationError);
}

TEST(Factorization, ReassemblesUpToUnit) {
  const auto primes = primes_up_to(200);
  for (Int a = -50; a <= 50; ++a)
    for (Int b = -50; b <= 50; ++b) {
      EisensteinInt z{a, b};
      if (z.is_zero() || z.is_unit()) continue;
      auto f = factor(z, primes);
      EXPECT_TRUE(associates(f.reassemble(), z)) << z;
      Int n = 1;
      for (const auto& x : f.factors)
        for (int e = 0; e < x.exponent; ++e) n *= x.prime.norm;
      EXPECT_EQ(n, z.norm());
    }
}

TEST(Family, EmptyBelowSeventyThree) {
  EXPECT_TRUE(enumerate_family(50).empty());
  EXPECT_TRUE(enumerate_family(72).empty());
  auto f = enumerate_family(73);
  ASSERT_EQ(f.size(), 2u);
  bool has = std::any_of(f.begin(), f.end(), [](const auto& e) { return e.c == EisensteinInt{1, 9}; });
  EXPECT_TRUE(has);
  for (const auto& e : f) EXPECT_EQ(e.norm, 73);
}

TEST(Family, MatchesBruteForceScan) {
  const Int Y = 10000;
  auto fam = enumerate_family(Y);
  std::vector<EisensteinInt> got;
  for (const auto& e : fam) {
    got.push_back(e.c);
    EXPECT_NE(e.c, EisensteinInt::one());
    EXPECT_TRUE(congruent_one_mod_nine(e.c));
    EXPECT_TRUE(e.factorization.squarefree());
    EXPECT_EQ(e.c.norm(), e.norm);
  }
  EXPECT_TRUE(std::is_sorted(fam.begin(), fam.end(), family_order));
  std::vector<EisensteinInt> brute;
  for (Int a = -200; a <= 200; ++a)
    for (Int b = -200; b <= 200; ++b) {
      EisensteinInt c{a, b};
      if (c == EisensteinInt::one() || c.norm() > Y) continue;
      if ((a - 1) % 9 != 0 || b % 9 != 0) continue;
      if (squarefree_brute(c)) brute.push_back(c);
    }
  std::sort(got.begin(), got.end());
  std::sort(brute.begin(), brute.end());
  EXPECT_EQ(got, brute);
}

TEST(Family, ClosedUnderConjugation) {
  auto fam = enumerate_family(20000);
  std::vector<EisensteinInt> cs;
  for (const auto& e : fam) cs.push_back(e.c);
  std::sort(cs.begin(), cs.end());
  for (const auto& c : cs) EXPECT_TRUE(std::binary_search(cs.begin(), cs.end(), c.conj()));
}

TEST(Ideals, SmallBounds) {
  auto primes = enumerate_prime_ideals(100);
  auto one = collect_ideals(primes, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].norm, 1u);
  EXPECT_TRUE(one[0].factors.empty());

  auto four = collect_ideals(primes, 4);
  std::vector<std::uint64_t> norms;
  for (const auto& r : four) norms.push_back(r.norm);
  std::sort(norms.begin(), norms.end());
  EXPECT_EQ(norms, (std::vector<std::uint64_t>{1, 3, 4}));
}

TEST(Ideals, CountMatchesLatticePoints) {
  auto primes = enumerate_prime_ideals(5000);
  for (Int X : {10, 100, 5000}) {
    Int lattice = 0;
    const Int r = static_cast<Int>(std::sqrt(double(X)) * 1.2) + 2;
    for (Int a = -r; a <= r; ++a)
      for (Int b = -r; b <= r; ++b) {
        Int n = EisensteinInt{a, b}.norm();
        if (n > 0 && n <= X) ++lattice;
      }
    EXPECT_EQ(lattice % 6, 0);
    EXPECT_EQ(collect_ideals(primes, std::uint64_t(X)).size(), std::size_t(lattice / 6)) << X;
  }
}

TEST(Ideals, ExactlyOnceAndNormsConsistent) {
  auto primes = enumerate_prime_ideals(3000);
  std::set<std::vector<std::pair<std::size_t, int>>> seen;
  enumerate_ideals(std::span<const PrimeIdealRec>(primes), 3000, [&](const IdealView& v) {
    std::uint64_t n = 1;
    std::vector<std::pair<std::size_t, int>> key;
    for (const auto& f : v.factors) {
      for (int e = 0; e < f.exponent; ++e) n *= std::uint64_t(primes[f.prime_index].norm);
      key.emplace_back(f.prime_index, f.exponent);
    }
    EXPECT_EQ(n, v.norm);
    EXPECT_LE(v.norm, 3000u);
    EXPECT_TRUE(seen.insert(key).second);
  });
}

TEST(Csv, ExactIntegerColumns) {
  auto primes = enumerate_prime_ideals(7);
  std::ostringstream os;
  write_prime_ideal_csv(os, primes);
  EXPECT_EQ(os.str(), "a,b,norm,splitting,rational_prime\n1,-1,3,ramified,3\n2,0,4,inert,2\n"
                      "1,-2,7,split,7\n1,3,7,split,7\n");
  std::ostringstream fs;
  write_family_csv(fs, enumerate_family(73));
  EXPECT_EQ(fs.str(), "a,b,norm\n-8,-9,73\n1,9,73\n");
}
