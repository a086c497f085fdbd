#pragma once

// Random instance generators shared by the property tests.

#include <random>
#include <vector>

#include "iwlab/iwlab.hpp"

namespace gen {

using namespace iwlab;

inline u64 residue(const PrimeContext& ctx, std::mt19937_64& rng) { return rng() % ctx.modulus(); }

inline LambdaElt poly(const PrimeContext& ctx, std::mt19937_64& rng, int max_deg) {
  std::vector<u64> c(static_cast<std::size_t>(rng() % (max_deg + 1)) + 1);
  for (auto& x : c) x = residue(ctx, rng);
  return LambdaElt(ctx, c);
}

/// Random distinguished polynomial of degree in [1, max_deg].
inline LambdaElt distinguished(const PrimeContext& ctx, std::mt19937_64& rng, int max_deg) {
  const std::size_t d = 1 + rng() % max_deg;
  std::vector<u64> c(d + 1);
  for (std::size_t i = 0; i < d; ++i) c[i] = ctx.mul(ctx.p(), residue(ctx, rng));
  c[d] = 1;
  return LambdaElt(ctx, c);
}

/// Nonzero at precision, with a random p-power content below K.
inline LambdaElt nonzero(const PrimeContext& ctx, std::mt19937_64& rng, int max_deg) {
  for (;;) {
    LambdaElt f = poly(ctx, rng, max_deg);
    const int mu = static_cast<int>(rng() % ctx.K());
    f = f.scaled(ctx.p_power(mu));
    if (!f.is_zero()) return f;
  }
}

inline std::vector<int> exponents(std::mt19937_64& rng, int max_rank, int max_exp) {
  std::vector<int> a(1 + rng() % max_rank);
  for (auto& x : a) x = 1 + static_cast<int>(rng() % max_exp);
  std::sort(a.begin(), a.end(), std::greater<>());
  return a;
}

}  // namespace gen
