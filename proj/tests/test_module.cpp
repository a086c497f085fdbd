#include <gtest/gtest.h>

#include <random>
#include <set>

#include "gen.hpp"
#include "iwlab/module.hpp"

using namespace iwlab;

namespace {

LambdaElt L(const PrimeContext& c, std::vector<long long> v) { return LambdaElt::from_signed(c, v); }

// Λ/3 ⊕ Λ/T glued along (1,1) with J = (3, T).
GluedModule small_glued(const PrimeContext& c) {
  GluedModule::LambdaSpec t{LambdaElt::T(c), 1};
  ModuleElement g{{LambdaElt::one(c), LambdaElt::one(c)}};
  return GluedModule(c, {1}, {t}, {}, {g}, 1);
}

// With J = (p, T) every factor contributes F_p to P/JP, read off from the constant term.
using Fp = std::vector<u64>;

Fp reduce_pt(const GluedModule& A, const ModuleElement& x) {
  Fp v;
  for (const auto& c : A.canonical(x).comps) v.push_back(c.coeff(0) % A.ctx().p());
  return v;
}

std::set<Fp> fp_span(u64 p, std::size_t n, const std::vector<Fp>& gens) {
  std::set<Fp> S{Fp(n, 0)};
  for (const auto& g : gens) {
    std::set<Fp> next;
    for (const auto& s : S)
      for (u64 k = 0; k < p; ++k) {
        Fp v = s;
        for (std::size_t i = 0; i < n; ++i) v[i] = (v[i] + k * g[i]) % p;
        next.insert(v);
      }
    S = std::move(next);
  }
  return S;
}

struct PtOracle {
  std::set<Fp> W, D;
};

PtOracle pt_oracle(const GluedModule& A, const std::vector<ModuleElement>& glue) {
  const u64 p = A.ctx().p();
  const std::size_t n = A.size();
  std::vector<Fp> g;
  for (const auto& x : glue) g.push_back(reduce_pt(A, x));
  PtOracle o{fp_span(p, n, g), {}};
  std::vector<Fp> wl, wm;
  for (const auto& w : o.W) {
    bool mu0 = true, lam0 = true;
    for (std::size_t f = 0; f < n; ++f) {
      if (w[f] == 0) continue;
      if (A.factors()[f].kind == FactorKind::Mu) mu0 = false;
      if (A.factors()[f].kind == FactorKind::Lambda) lam0 = false;
    }
    if (mu0) wl.push_back(w);
    if (lam0) wm.push_back(w);
  }
  for (const auto& a : wl)
    for (const auto& b : wm) {
      Fp v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = (a[i] + b[i]) % p;
      o.D.insert(v);
    }
  return o;
}

ModuleElement random_element(const GluedModule& A, std::mt19937_64& rng) {
  ModuleElement x = A.zero();
  for (auto& c : x.comps) c = gen::poly(A.ctx(), rng, 3);
  return A.canonical(x);
}

}  // namespace

TEST(Module, RejectsBadFactors) {
  const PrimeContext c(3, 6);
  EXPECT_THROW(GluedModule(c, {0}, {}), Error);
  EXPECT_THROW(GluedModule(c, {}, {{L(c, {1, 1}), 1}}), Error);
  EXPECT_THROW(GluedModule(c, {}, {{LambdaElt::T(c), 0}}), Error);
  EXPECT_THROW(GluedModule(c, {}, {}, {{1, LambdaElt::one(c)}}), Error);
  EXPECT_THROW(GluedModule(c, {1}, {}, {}, {}, -1), Error);
}

TEST(Module, CanonicalReduction) {
  const PrimeContext c(3, 6);
  GluedModule A = GluedModule::elementary(c, {2}, {{L(c, {-3, 1}), 2}});
  ModuleElement x = A.element({L(c, {10, 0, 0, 1}), L(c, {0, 0, 0, 0, 1})});
  EXPECT_EQ(x.comps[0], L(c, {1, 0, 0, 1}));
  EXPECT_LT(x.comps[1].degree(), 2);
  EXPECT_TRUE(A.is_full());
  EXPECT_EQ(A.exponent_bound(), 2);
}

TEST(Module, SmallGluedExample) {
  const PrimeContext c(3, 6);
  GluedModule A = small_glued(c);
  const ModuleElement g = A.element({LambdaElt::one(c), LambdaElt::one(c)});
  EXPECT_TRUE(A.contains(g));
  EXPECT_FALSE(A.contains(A.generator(0)));
  EXPECT_FALSE(A.contains(A.generator(1)));
  EXPECT_TRUE(A.contains(A.element({LambdaElt::T(c), L(c, {3})})));
  EXPECT_EQ(A.W_group().factors(), (std::vector<int>{1}));
  EXPECT_EQ(A.exponent_bound(), 1);

  auto cl = classify_element(A, g);
  EXPECT_EQ(cl.type, ElementType::Indecomposed);
  EXPECT_FALSE(cl.in_D);
  EXPECT_STREQ(element_type_name(cl.type), "indecomposed-candidate");
  auto od = L_and_D_orders(A, g);
  EXPECT_EQ(od.ell, 1);
  EXPECT_EQ(od.delta, 1);

  const ModuleElement m = A.element({LambdaElt::T(c), LambdaElt(c)});
  EXPECT_EQ(classify_element(A, m).type, ElementType::Mu);
  EXPECT_TRUE(A.in_M(m));
  EXPECT_EQ(essential_order(A, m), 1);
  EXPECT_EQ(A.order_exp(m), std::optional<int>(1));
  EXPECT_FALSE(A.order_exp(A.element({LambdaElt(c), L(c, {3})})).has_value());
  EXPECT_THROW((void)essential_order(A, g), Error);
  EXPECT_THROW((void)L_and_D_orders(A, A.generator(0)), Error);

  auto rep = check_decomposition_bound(A);
  EXPECT_TRUE(rep.exhaustive);
  EXPECT_EQ(rep.elements_checked, 3u);
  EXPECT_EQ(rep.counterexamples, 0u);
}

TEST(Module, MembershipAndDecomposabilityAgreeWithResidueOracle) {
  std::mt19937_64 rng(61);
  for (u64 p : {3u, 5u}) {
    const PrimeContext c(p, 6);
    for (int t = 0; t < 40; ++t) {
      std::vector<int> mu(1 + rng() % 2);
      for (auto& e : mu) e = 1 + static_cast<int>(rng() % 2);
      std::vector<GluedModule::LambdaSpec> lam;
      for (std::size_t k = 1 + rng() % 2; k > 0; --k) lam.push_back({gen::distinguished(c, rng, 2), 1});
      std::vector<GluedModule::FiniteSpec> fin;
      if (rng() % 2) fin.push_back({1 + static_cast<int>(rng() % 2), gen::distinguished(c, rng, 1)});
      const std::size_t n = mu.size() + lam.size() + fin.size();
      std::vector<ModuleElement> glue(1 + rng() % 2);
      for (auto& g : glue) {
        g.comps.clear();
        for (std::size_t f = 0; f < n; ++f) g.comps.push_back(LambdaElt::constant(c, rng() % p));
      }
      GluedModule A(c, mu, lam, fin, glue, 1);
      PtOracle o = pt_oracle(A, glue);
      for (int s = 0; s < 40; ++s) {
        ModuleElement x = random_element(A, rng);
        Fp r = reduce_pt(A, x);
        ASSERT_EQ(A.contains(x), o.W.count(r) > 0);
        if (A.contains(x)) {
          EXPECT_EQ(A.in_D(x), o.D.count(r) > 0);
          EXPECT_EQ(classify_element(A, x).in_D, A.in_D(x));
        }
      }
    }
  }
}

TEST(Module, SubmoduleGeneratorsLieWhereClaimed) {
  std::mt19937_64 rng(62);
  const PrimeContext c(3, 8);
  for (int t = 0; t < 30; ++t) {
    std::vector<GluedModule::LambdaSpec> lam{{gen::distinguished(c, rng, 3), 1}};
    std::vector<GluedModule::FiniteSpec> fin;
    if (t % 3 == 0) fin.push_back({1, LambdaElt::T(c)});
    ModuleElement g;
    g.comps.push_back(LambdaElt::one(c));
    g.comps.push_back(gen::poly(c, rng, 2));
    if (!fin.empty()) g.comps.push_back(LambdaElt::constant(c, rng() % 3));
    const int cond = 1 + static_cast<int>(rng() % 3);
    GluedModule A(c, {1 + static_cast<int>(rng() % 2)}, lam, fin, {g}, cond);
    auto lmfd = submodules_LMFD(A);
    for (const auto& x : lmfd.L.generators) EXPECT_TRUE(A.in_L(x));
    for (const auto& x : lmfd.M.generators) EXPECT_TRUE(A.in_M(x));
    for (const auto& x : lmfd.F.generators) {
      EXPECT_TRUE(A.in_L(x));
      EXPECT_TRUE(A.in_M(x));
    }
    for (const auto& x : lmfd.D.generators) EXPECT_TRUE(A.in_D(x));
    for (const auto& x : lmfd.M.generators) {
      auto k = A.order_exp(x);
      ASSERT_TRUE(k.has_value());
      EXPECT_LE(*k, A.exponent_bound());
    }
    // G·A ⊆ M for the product of the λ moduli.
    const LambdaElt G = mu_annihilator_witness(A);
    for (const auto& x : A.generators()) EXPECT_TRUE(A.in_M(A.mul(G, x)));
    // A is a Λ-module and contains J·P.
    for (const auto& x : A.generators()) {
      EXPECT_TRUE(A.contains(x));
      EXPECT_TRUE(A.contains(A.mul(gen::poly(c, rng, 3), x)));
    }
    // p^ℓ x ∈ L, p^δ x ∈ D, and L ⊆ D forces δ <= ℓ.
    for (const auto& x : A.generators()) {
      auto od = L_and_D_orders(A, x);
      EXPECT_LE(od.delta, od.ell);
      EXPECT_TRUE(A.in_L(A.scale(x, c.p_power(od.ell))));
      EXPECT_TRUE(A.in_D(A.scale(x, c.p_power(od.delta))));
    }
  }
}

TEST(Module, DecompositionBoundFrozenCounterexample) {
  const PrimeContext c(3, 8);
  ModuleElement g{{LambdaElt::one(c), LambdaElt::one(c)}};
  GluedModule A(c, {1}, {{L(c, {-3, 0, 0, 1}), 1}}, {}, {g}, 3);
  EXPECT_EQ(A.exponent_bound(), 1);
  EXPECT_EQ(A.W_group().factors(), (std::vector<int>{1, 1, 1}));
  auto rep = check_decomposition_bound(A);
  EXPECT_EQ(rep.B, 1);
  EXPECT_EQ(rep.elements_checked, 27u);
  EXPECT_EQ(rep.counterexamples, 18u);
  EXPECT_EQ(rep.first_failure, "p^0*T^2");
  ASSERT_TRUE(rep.first_counterexample.has_value());
  EXPECT_FALSE(A.in_D(A.mul(LambdaElt::monomial(c, 2), *rep.first_counterexample)));
}

TEST(Module, FullModulesDecompose) {
  std::mt19937_64 rng(63);
  const PrimeContext c(3, 8);
  for (int t = 0; t < 20; ++t) {
    GluedModule A = GluedModule::elementary(c, {1 + static_cast<int>(rng() % 3)}, {{gen::distinguished(c, rng, 3), 1}});
    for (int s = 0; s < 20; ++s) {
      ModuleElement x = random_element(A, rng);
      EXPECT_TRUE(A.contains(x));
      EXPECT_TRUE(A.in_D(x));
    }
    EXPECT_EQ(check_decomposition_bound(A).counterexamples, 0u);
  }
}
