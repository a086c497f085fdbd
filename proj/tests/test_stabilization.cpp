#include <gtest/gtest.h>

#include <random>

#include "gen.hpp"
#include "iwlab/stabilization.hpp"

using namespace iwlab;

namespace {

LambdaElt L(const PrimeContext& c, std::vector<long long> v) { return LambdaElt::from_signed(c, v); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InternalInvariant;
}

}  // namespace

TEST(Stabilization, StableFrom) {
  using detail::stable_from;
  EXPECT_EQ(stable_from(std::vector<int>{1, 2, 2}, 1), std::optional<int>(2));
  EXPECT_EQ(stable_from(std::vector<int>{2, 2, 2}, 1), std::optional<int>(1));
  EXPECT_EQ(stable_from(std::vector<int>{1, 2}, 1), std::nullopt);
  EXPECT_EQ(stable_from(std::vector<int>{3}, 1), std::nullopt);
}

TEST(Stabilization, LambdaTowerExample) {
  const PrimeContext c(3, 10);
  GluedModule tp(c, {}, {{L(c, {-3, 1}), 1}});
  auto r = detect(build_tower(tp, {}, 1, 5));
  EXPECT_FALSE(r.criterion1_level.has_value());
  EXPECT_EQ(r.criterion2_level, std::optional<int>(1));
  EXPECT_EQ(r.criterion3_level, std::optional<int>(1));
  EXPECT_FALSE(r.X_finite);
  EXPECT_TRUE(r.mu_zero);
  EXPECT_TRUE(r.H_stable);
  EXPECT_EQ(r.stabilization_index, std::optional<int>(1));
  EXPECT_EQ(r.visibility_index, std::optional<int>(1));
}

TEST(Stabilization, MuTowerExample) {
  const PrimeContext c(3, 10);
  GluedModule mu(c, {1}, {});
  auto r = detect(build_tower(mu, {}, 1, 4));
  EXPECT_FALSE(r.criterion1_level.has_value());
  EXPECT_FALSE(r.criterion2_level.has_value());
  EXPECT_EQ(r.criterion3_level, std::optional<int>(1));
  EXPECT_FALSE(r.mu_zero);
  EXPECT_FALSE(r.m_index.has_value());
  EXPECT_FALSE(r.stabilization_index.has_value());
}

TEST(Stabilization, FiniteModuleExample) {
  const PrimeContext c(3, 10);
  GluedModule fin(c, {}, {}, {{1, LambdaElt::T(c)}});
  auto r = detect(build_tower(fin, {}, 1, 4));
  EXPECT_EQ(r.criterion1_level, std::optional<int>(1));
  EXPECT_TRUE(r.X_finite);
  EXPECT_TRUE(r.mu_zero);
  EXPECT_EQ(r.stabilization_index, std::optional<int>(1));
}

TEST(Stabilization, NeedsTwoLevels) {
  const PrimeContext c(3, 8);
  GluedModule mu(c, {1}, {});
  EXPECT_EQ(code_of([&] { (void)detect(build_tower(mu, {}, 2, 2)); }), ErrorCode::InvalidArgument);
}

TEST(Stabilization, PostFireViolationIsReported) {
  const PrimeContext c(3, 10);
  GluedModule fin(c, {}, {}, {{1, LambdaElt::T(c)}});
  GluedModule other(c, {}, {}, {{2, LambdaElt::T(c)}});
  Tower tw = build_tower(fin, {}, 1, 3);
  tw.levels[2] = finite_level(other, {}, 3);
  EXPECT_EQ(code_of([&] { (void)detect(tw); }), ErrorCode::PostFireViolation);
}

TEST(Stabilization, VisibilityExamples) {
  const PrimeContext c(3, 10);
  GluedModule tp(c, {}, {{L(c, {-3, 1}), 1}});
  Tower tw = build_tower(tp, SubmoduleSpec{{tp.generator(0)}}, 0, 4);
  EXPECT_TRUE(tw.group(0).is_trivial());
  EXPECT_EQ(visibility_index(tw, SubmoduleSpec{{tp.generator(0)}}, IdealChoice::Maximal), 1);
  EXPECT_EQ(visibility_index(tw, SubmoduleSpec{}, IdealChoice::Maximal), 0);
  for (auto I : {IdealChoice::P, IdealChoice::T})
    EXPECT_LE(visibility_index(tw, SubmoduleSpec{{tp.generator(0)}}, I), 4);
}

// μ > 0 makes the p-rank grow at every step; fired criteria hold on all later levels.
TEST(Stabilization, RandomTowersRespectCriteria) {
  std::mt19937_64 rng(81);
  const PrimeContext c(3, 14);
  int built = 0;
  for (int t = 0; t < 25; ++t) {
    std::vector<int> mu;
    if (t % 2) mu.push_back(1);
    std::vector<GluedModule::LambdaSpec> lam{{gen::distinguished(c, rng, 2), 1}};
    std::vector<GluedModule::FiniteSpec> fin;
    if (t % 3 == 0) fin.push_back({1, LambdaElt::T(c)});
    GluedModule X(c, mu, lam, fin);
    std::optional<Tower> tw;
    try {
      tw = build_tower(X, {}, 1, 3);
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::InfiniteQuotient);
      continue;
    }
    ++built;
    StabilizationReport r;
    ASSERT_NO_THROW(r = detect(*tw));
    if (!mu.empty()) {
      EXPECT_FALSE(r.criterion2_level.has_value());
    }
    if (r.criterion1_level && !tw->group(*r.criterion1_level).is_trivial()) {
      ASSERT_TRUE(r.criterion2_level.has_value());
      EXPECT_LE(*r.criterion2_level, *r.criterion1_level);
    }
    if (r.stabilization_index) {
      EXPECT_GE(*r.stabilization_index, *r.f_index);
      EXPECT_GE(*r.stabilization_index, *r.m_index);
    }
  }
  EXPECT_GT(built, 10);
}
