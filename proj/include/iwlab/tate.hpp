#pragma once

// Tate cohomology of a finite abelian p-group with an action of a cyclic group of order p.
// Conventions: Ĥ^0 = Ker(s)/Im(𝒩), Ĥ^1 = Ker(𝒩)/Im(s), with s = ν − 1 and 𝒩 = Σ ν^i.

#include <algorithm>
#include <random>
#include <vector>

#include "iwlab/errors.hpp"
#include "iwlab/matrix.hpp"
#include "iwlab/pgroup.hpp"

namespace iwlab {

/// Matrix of the operator induced on ambient/span(R) by `op`, in the quotient's coordinates.
/// span(R) must be stable under `op`.
inline ResidueMatrix induced_operator(const Subquotient& q, const ResidueMatrix& op) {
  const auto& ctx = q.ctx();
  const std::size_t r = q.exponents().size();
  ResidueMatrix m(r, r);
  for (std::size_t j = 0; j < r; ++j) {
    auto y = q.classify(mat_vec(ctx, op, q.section(j)));
    require(y.has_value(), ErrorCode::InternalInvariant, "operator image left the presented subgroup");
    for (std::size_t i = 0; i < r; ++i) m(i, j) = (*y)[i];
  }
  return m;
}

class FModule {
 public:
  FModule(FinitePGroup group, const ResidueMatrix& action) : g_(std::move(group)), nu_(g_, g_, action) {
    PGroupHom acc = PGroupHom::identity(g_);
    for (u64 i = 0; i < g_.p(); ++i) acc = nu_.compose(acc);
    require(acc == PGroupHom::identity(g_), ErrorCode::InvalidArgument, "action does not satisfy nu^p = 1");
  }

  const FinitePGroup& group() const noexcept { return g_; }
  const PGroupHom& action() const noexcept { return nu_; }

  PGroupHom s() const {
    ResidueMatrix m = nu_.matrix();
    for (std::size_t i = 0; i < g_.rank(); ++i) m(i, i) = (m(i, i) + g_.modulus(i) - 1) % g_.modulus(i);
    return PGroupHom(g_, g_, m);
  }

  PGroupHom norm() const {
    PGroupHom acc = PGroupHom::identity(g_), power = PGroupHom::identity(g_);
    for (u64 i = 1; i < g_.p(); ++i) {
      power = nu_.compose(power);
      acc = acc + power;
    }
    return acc;
  }

 private:
  FinitePGroup g_;
  PGroupHom nu_;
};

inline FinitePGroup h_hat_0(const FModule& M) {
  return SubgroupView(M.group(), kernel_generators(M.s()), image_generators(M.norm())).group();
}

inline FinitePGroup h_hat_1(const FModule& M) {
  return SubgroupView(M.group(), kernel_generators(M.norm()), image_generators(M.s())).group();
}

inline FModule trivial_fmodule(const FinitePGroup& G) { return FModule(G, ResidueMatrix::identity(G.rank())); }

/// (⊕ Z/p^{a_i}) ⊗ Z[F]: each factor repeated p times, ν shifting cyclically within a block.
inline FModule induced_fmodule(const PrimeContext& ctx, std::vector<int> base) {
  std::sort(base.begin(), base.end(), std::greater<>());
  base.erase(std::remove(base.begin(), base.end(), 0), base.end());
  const std::size_t p = ctx.p();
  std::vector<int> exps;
  for (int a : base)
    for (std::size_t i = 0; i < p; ++i) exps.push_back(a);
  ResidueMatrix nu(exps.size(), exps.size());
  for (std::size_t b = 0; b < base.size(); ++b)
    for (std::size_t i = 0; i < p; ++i) nu(b * p + (i + 1) % p, b * p + i) = 1;
  return FModule(FinitePGroup(ctx, exps), nu);
}

/// Quotient of `copies` copies of (Z/p^a)[F] by the F-span of `relations` random vectors.
inline FModule random_fmodule(const PrimeContext& ctx, std::mt19937_64& rng, int max_exp = 3, int max_copies = 2,
                              int max_relations = 2) {
  const std::size_t p = ctx.p();
  const int a = 1 + static_cast<int>(rng() % max_exp);
  const std::size_t copies = 1 + rng() % max_copies;
  const std::size_t D = copies * p;
  const PrimeContext w(p, a + 2);
  ResidueMatrix shift(D, D);
  for (std::size_t b = 0; b < copies; ++b)
    for (std::size_t i = 0; i < p; ++i) shift(b * p + (i + 1) % p, b * p + i) = 1;

  std::vector<Vec> rel;
  for (std::size_t i = 0; i < D; ++i) {
    Vec e(D, 0);
    e[i] = w.p_power(a);
    rel.push_back(e);
  }
  const int nrel = static_cast<int>(rng() % (max_relations + 1));
  const u64 mod_a = w.p_power(a);
  for (int k = 0; k < nrel; ++k) {
    Vec v(D);
    for (auto& x : v) {
      if (rng() % 4 == 0) {
        x = rng() % mod_a;
      } else {
        u64 bit = rng() % 2;
        x = bit * w.p_power(static_cast<int>(rng() % a));
      }
    }
    for (std::size_t i = 0; i < p; ++i) {
      rel.push_back(v);
      v = mat_vec(w, shift, v);
    }
  }
  Subquotient q(w, D, ResidueMatrix::from_columns(D, rel), std::nullopt, ResidueMatrix(D, 0));
  return FModule(FinitePGroup(ctx, q.exponents()), induced_operator(q, shift));
}

}  // namespace iwlab
