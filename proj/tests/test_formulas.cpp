#include <gtest/gtest.h>

#include <random>

#include "iwlab/formulas.hpp"

using namespace iwlab;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InternalInvariant;
}

}  // namespace

TEST(Formulas, KidaExamples) {
  EXPECT_EQ(kida_lambda_minus({3, 0, 1, 5}), 0);
  EXPECT_EQ(kida_lambda_minus({3, 1, 2, 3}), 6);
  EXPECT_EQ(kida_lambda_minus({5, 2, 3, 1}), 12);
  EXPECT_EQ(code_of([] { (void)kida_lambda_minus({0, 1, 1, 1}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { (void)kida_lambda_minus({3, -1, 1, 1}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { (void)kida_lambda_minus({INT64_MAX, 2, 1, 0}); }), ErrorCode::InvalidArgument);
}

// Additive in λ⁻(K) and in (e − 1)·half_degree separately.
TEST(Formulas, KidaSuperposition) {
  std::mt19937_64 rng(91);
  for (int t = 0; t < 1000; ++t) {
    const std::int64_t deg = 1 + rng() % 50, l1 = rng() % 100, l2 = rng() % 100, e = 1 + rng() % 10,
                       h1 = rng() % 40, h2 = rng() % 40;
    EXPECT_EQ(kida_lambda_minus({deg, l1 + l2, e, h1}), kida_lambda_minus({deg, l1, e, h1}) + deg * l2);
    EXPECT_EQ(kida_lambda_minus({deg, l1, e, h1 + h2}) - kida_lambda_minus({deg, l1, e, h1}),
              kida_lambda_minus({deg, 0, e, h2}));
    EXPECT_EQ(kida_lambda_minus({deg, l1, 1, h1}), deg * l1);
  }
}

TEST(Formulas, HasseExamples) {
  EXPECT_EQ(hasse_norm_defect_exponent({3, 3, 1, 3}), 27);
  EXPECT_EQ(hasse_norm_defect_exponent({5, 2, 2, 4}), 4);
  EXPECT_EQ(code_of([] { (void)hasse_norm_defect_exponent({3, 1, 2, 1}); }), ErrorCode::LevelOrder);
  EXPECT_EQ(code_of([] { (void)hasse_norm_defect_exponent({4, 3, 1, 1}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { (void)hasse_norm_defect_exponent({3, 3, 1, 0}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { (void)hasse_norm_defect_exponent({3, 100, 0, 1}); }), ErrorCode::InvalidArgument);
}

TEST(Formulas, HasseGrowsByPPerLevel) {
  for (std::int64_t p : {3, 5, 7})
    for (std::int64_t N = 0; N <= 3; ++N)
      for (std::int64_t n = N; n <= N + 8; ++n)
        for (std::int64_t d = 1; d <= 4; ++d) {
          EXPECT_EQ(hasse_norm_defect_exponent({p, n + 1, N, d}), p * hasse_norm_defect_exponent({p, n, N, d}));
          EXPECT_EQ(hasse_norm_defect_exponent({p, n, N, d}), d * hasse_norm_defect_exponent({p, n, N, 1}));
        }
}

TEST(Formulas, RankBookkeeping) {
  EXPECT_EQ(omega_rank({2, 0}), 3);
  EXPECT_EQ(m_plus_rank({2, 0}), 1);
  for (std::int64_t r2 = 0; r2 <= 10; ++r2)
    for (std::int64_t d = 0; d <= 5; ++d) {
      EXPECT_EQ(omega_rank({r2, d}) - m_plus_rank({r2, d}), r2);
      EXPECT_EQ(m_plus_rank({r2, d + 1}), m_plus_rank({r2, d}) + 1);
    }
  EXPECT_EQ(code_of([] { (void)omega_rank({-1, 0}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { (void)m_plus_rank({0, -1}); }), ErrorCode::InvalidArgument);
}
