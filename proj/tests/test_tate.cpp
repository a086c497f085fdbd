#include <gtest/gtest.h>

#include <random>
#include <set>

#include "iwlab/tate.hpp"

using namespace iwlab;

namespace {

int log_p(std::size_t n, u64 p) {
  int k = 0;
  while (n > 1) {
    n /= p;
    ++k;
  }
  return k;
}

// |Ĥ^0| and |Ĥ^1| by listing Ker and Im over every element.
std::pair<int, int> brute_force_orders(const FModule& M) {
  const auto& G = M.group();
  const PGroupHom s = M.s(), N = M.norm();
  std::size_t ker_s = 0, ker_n = 0;
  std::set<Vec> im_s, im_n;
  G.for_each_element([&](const Vec& x) {
    Vec sx = s.apply(x), nx = N.apply(x);
    if (vec_is_zero(sx)) ++ker_s;
    if (vec_is_zero(nx)) ++ker_n;
    im_s.insert(sx);
    im_n.insert(nx);
  });
  return {log_p(ker_s / im_n.size(), G.p()), log_p(ker_n / im_s.size(), G.p())};
}

}  // namespace

TEST(Tate, TrivialActionExamples) {
  const PrimeContext c(3, 6);
  FModule M = trivial_fmodule(FinitePGroup(c, {1}));
  EXPECT_EQ(h_hat_0(M).factors(), (std::vector<int>{1}));
  EXPECT_EQ(h_hat_1(M).factors(), (std::vector<int>{1}));
  // Z/9 with trivial action: Ĥ^0 = Z/9 / 3 = Z/3, Ĥ^1 = (Z/9)[3] = Z/3.
  FModule M9 = trivial_fmodule(FinitePGroup(c, {2}));
  EXPECT_EQ(h_hat_0(M9).order_exp(), 1);
  EXPECT_EQ(h_hat_1(M9).order_exp(), 1);
}

TEST(Tate, RejectsBadAction) {
  const PrimeContext c(3, 4);
  ResidueMatrix a(1, 1);
  a(0, 0) = 2;  // 2^3 = 8 ≠ 1 mod 3
  EXPECT_THROW(FModule(FinitePGroup(c, {1}), a), Error);
}

TEST(Tate, InducedModulesAreCohomologicallyTrivial) {
  for (u64 p : {3u, 5u}) {
    const PrimeContext c(p, 6);
    for (const auto& base : std::vector<std::vector<int>>{{1}, {2}, {2, 1}, {3}}) {
      FModule M = induced_fmodule(c, base);
      EXPECT_TRUE(h_hat_0(M).is_trivial());
      EXPECT_TRUE(h_hat_1(M).is_trivial());
    }
  }
}

TEST(Tate, AgreesWithEnumerationOnSmallModules) {
  std::mt19937_64 rng(51);
  const PrimeContext c(3, 8);
  int checked = 0;
  for (int t = 0; t < 300 && checked < 60; ++t) {
    FModule M = random_fmodule(c, rng, 2, 2, 3);
    if (M.group().order_exp() > 4) continue;
    ++checked;
    auto [h0, h1] = brute_force_orders(M);
    EXPECT_EQ(h_hat_0(M).order_exp(), h0);
    EXPECT_EQ(h_hat_1(M).order_exp(), h1);
  }
  EXPECT_GE(checked, 30);
}

TEST(Tate, HerbrandQuotientAndPTorsion) {
  for (u64 p : {3u, 5u, 7u}) {
    std::mt19937_64 rng(52 + p);
    const PrimeContext c(p, 8);
    for (int t = 0; t < 100; ++t) {
      FModule M = random_fmodule(c, rng, 3, 2, 2);
      FinitePGroup H0 = h_hat_0(M), H1 = h_hat_1(M);
      EXPECT_EQ(H0.order_exp(), H1.order_exp()) << M.group().to_string();
      EXPECT_LE(H0.exponent_exp(), 1);
      EXPECT_LE(H1.exponent_exp(), 1);
    }
  }
}

TEST(Tate, InducedOperatorOnQuotient) {
  const PrimeContext c(3, 4);
  // Z^2 / (3e1, 3e2, e1 − e2) ≅ Z/3, swap acts trivially.
  ResidueMatrix R(2, 3);
  R(0, 0) = 3;
  R(1, 1) = 3;
  R(0, 2) = 1;
  R(1, 2) = c.from_signed(-1);
  Subquotient q(c, 2, R, std::nullopt, ResidueMatrix(2, 0));
  ResidueMatrix swap(2, 2);
  swap(0, 1) = 1;
  swap(1, 0) = 1;
  ResidueMatrix m = induced_operator(q, swap);
  ASSERT_EQ(q.exponents(), (std::vector<int>{1}));
  EXPECT_EQ(m(0, 0) % 3, 1u);
}
