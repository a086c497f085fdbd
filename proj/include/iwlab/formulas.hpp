#pragma once

// Closed-form bookkeeping identities: the Kida instance for a degree-p shift, the
// Hasse norm-defect exponent, and the Z_p-ranks governed by the Leopoldt defect.

#include <cstdint>
#include <limits>
#include <string>

#include "iwlab/errors.hpp"

namespace iwlab {

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  require(!__builtin_mul_overflow(a, b, &r), ErrorCode::InvalidArgument, "integer overflow");
  return r;
}
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  require(!__builtin_add_overflow(a, b, &r), ErrorCode::InvalidArgument, "integer overflow");
  return r;
}

}  // namespace detail

struct KidaInput {
  std::int64_t degree;  // [L:K]
  std::int64_t lambda_minus_K;
  std::int64_t ram_e;
  std::int64_t half_degree;  // [K_j:Q]/2
};

/// [L:K]·λ⁻(K) + (e − 1)·half_degree
inline std::int64_t kida_lambda_minus(const KidaInput& in) {
  require(in.degree >= 1 && in.ram_e >= 1 && in.half_degree >= 0 && in.lambda_minus_K >= 0,
          ErrorCode::InvalidArgument, "Kida input must be nonnegative with degree, e >= 1");
  return detail::checked_add(detail::checked_mul(in.degree, in.lambda_minus_K),
                             detail::checked_mul(in.ram_e - 1, in.half_degree));
}

struct NormDefectInput {
  std::int64_t p;
  std::int64_t n;
  std::int64_t N;
  std::int64_t d;
};

/// p^{n−N}·d; the defect group has order p to this power.
inline std::int64_t hasse_norm_defect_exponent(const NormDefectInput& in) {
  require(in.p >= 3 && in.p % 2 == 1, ErrorCode::InvalidArgument, "p must be an odd prime");
  require(in.d >= 1, ErrorCode::InvalidArgument, "d must be >= 1");
  if (in.n < in.N)
    fail(ErrorCode::LevelOrder, "n = " + std::to_string(in.n) + " is below N = " + std::to_string(in.N));
  std::int64_t r = in.d;
  for (std::int64_t i = 0; i < in.n - in.N; ++i) r = detail::checked_mul(r, in.p);
  return r;
}

struct RankBookkeeping {
  std::int64_t r2;
  std::int64_t defect;
};

inline std::int64_t omega_rank(const RankBookkeeping& in) {
  require(in.r2 >= 0 && in.defect >= 0, ErrorCode::InvalidArgument, "r2 and defect must be nonnegative");
  return detail::checked_add(detail::checked_add(in.r2, 1), in.defect);
}

inline std::int64_t m_plus_rank(const RankBookkeeping& in) {
  require(in.r2 >= 0 && in.defect >= 0, ErrorCode::InvalidArgument, "r2 and defect must be nonnegative");
  return detail::checked_add(in.defect, 1);
}

}  // namespace iwlab
