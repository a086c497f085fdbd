#pragma once

// Arithmetic in Z/p^K standing in for Z_p at a fixed working precision.

#include <cstdint>
#include <limits>
#include <string>

#include "iwlab/errors.hpp"

namespace iwlab {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Odd prime p together with the working precision K; residues live in [0, p^K).
class PrimeContext {
 public:
  PrimeContext(u64 p, int K) : p_(p), K_(K) {
    require(p >= 3 && is_prime(p), ErrorCode::InvalidArgument, "p must be an odd prime, got " + std::to_string(p));
    require(K >= 1, ErrorCode::InvalidArgument, "precision K must be >= 1");
    u64 m = 1;
    for (int i = 0; i < K; ++i) {
      require(m <= (u64{1} << 62) / p, ErrorCode::InvalidArgument,
              "p^K exceeds 2^62 (p=" + std::to_string(p) + ", K=" + std::to_string(K) + ")");
      m *= p;
    }
    mod_ = m;
  }

  u64 p() const noexcept { return p_; }
  int K() const noexcept { return K_; }
  u64 modulus() const noexcept { return mod_; }

  /// Same prime, different precision.
  PrimeContext with_precision(int K) const { return PrimeContext(p_, K); }

  u64 reduce(u64 x) const noexcept { return x % mod_; }
  u64 from_signed(long long x) const noexcept {
    long long m = static_cast<long long>(mod_);
    long long r = x % m;
    return static_cast<u64>(r < 0 ? r + m : r);
  }

  u64 add(u64 a, u64 b) const noexcept {
    u64 s = a + b;
    return s >= mod_ ? s - mod_ : s;
  }
  u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + mod_ - b; }
  u64 neg(u64 a) const noexcept { return a == 0 ? 0 : mod_ - a; }
  u64 mul(u64 a, u64 b) const noexcept { return static_cast<u64>((static_cast<u128>(a) * b) % mod_); }

  u64 pow(u64 base, u64 e) const noexcept {
    u64 result = 1 % mod_;
    base %= mod_;
    while (e > 0) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }

  /// p^e mod p^K (0 once e >= K).
  u64 p_power(int e) const noexcept {
    if (e >= K_) return 0;
    u64 r = 1;
    for (int i = 0; i < e; ++i) r *= p_;
    return r;
  }

  /// Largest v <= K with p^v | a; valuation(0) = K.
  int valuation(u64 a) const noexcept {
    a %= mod_;
    if (a == 0) return K_;
    int v = 0;
    while (a % p_ == 0) {
      a /= p_;
      ++v;
    }
    return v;
  }

  bool is_unit(u64 a) const noexcept { return a % p_ != 0; }

  /// Inverse of a unit modulo p^K.
  u64 inverse(u64 a) const {
    a %= mod_;
    require(is_unit(a), ErrorCode::NonUnit, "residue " + std::to_string(a) + " is not a unit mod p");
    // Extended Euclid on signed 128-bit to avoid overflow.
    __int128 r0 = static_cast<__int128>(mod_), r1 = static_cast<__int128>(a);
    __int128 t0 = 0, t1 = 1;
    while (r1 != 0) {
      __int128 q = r0 / r1;
      __int128 tmp = r0 - q * r1;
      r0 = r1;
      r1 = tmp;
      tmp = t0 - q * t1;
      t0 = t1;
      t1 = tmp;
    }
    __int128 m = static_cast<__int128>(mod_);
    t0 %= m;
    if (t0 < 0) t0 += m;
    return static_cast<u64>(t0);
  }

  /// For a = p^v * u with v = valuation(a) < K, returns u mod p^(K-v) lifted to [0, p^K).
  u64 unit_part(u64 a) const noexcept {
    a %= mod_;
    if (a == 0) return 0;
    while (a % p_ == 0) a /= p_;
    return a;
  }

  /// Exact division a / p^v, assuming p^v | a; result is only meaningful mod p^(K-v).
  u64 div_p_power(u64 a, int v) const noexcept {
    for (int i = 0; i < v; ++i) a /= p_;
    return a;
  }

  friend bool operator==(const PrimeContext& a, const PrimeContext& b) noexcept {
    return a.p_ == b.p_ && a.K_ == b.K_;
  }

 private:
  u64 p_;
  int K_;
  u64 mod_ = 1;
};

/// A p-adic integer known modulo p^K.
class PAdicInt {
 public:
  PAdicInt(const PrimeContext& ctx, u64 value) : ctx_(ctx), value_(ctx.reduce(value)) {}
  static PAdicInt from_signed(const PrimeContext& ctx, long long v) { return PAdicInt(ctx, ctx.from_signed(v)); }

  const PrimeContext& ctx() const noexcept { return ctx_; }
  u64 value() const noexcept { return value_; }

  int valuation() const noexcept { return ctx_.valuation(value_); }
  bool is_unit() const noexcept { return ctx_.is_unit(value_); }
  bool is_zero() const noexcept { return value_ == 0; }

  PAdicInt invert() const { return PAdicInt(ctx_, ctx_.inverse(value_)); }
  PAdicInt pow(u64 e) const { return PAdicInt(ctx_, ctx_.pow(value_, e)); }

  /// Unit u with *this = p^valuation * u (u = 0 for the zero element).
  PAdicInt unit_part() const { return PAdicInt(ctx_, ctx_.unit_part(value_)); }

  friend PAdicInt operator+(const PAdicInt& a, const PAdicInt& b) { return {a.ctx_, a.ctx_.add(a.value_, b.value_)}; }
  friend PAdicInt operator-(const PAdicInt& a, const PAdicInt& b) { return {a.ctx_, a.ctx_.sub(a.value_, b.value_)}; }
  friend PAdicInt operator*(const PAdicInt& a, const PAdicInt& b) { return {a.ctx_, a.ctx_.mul(a.value_, b.value_)}; }
  PAdicInt operator-() const { return {ctx_, ctx_.neg(value_)}; }

  friend bool operator==(const PAdicInt& a, const PAdicInt& b) noexcept {
    return a.ctx_ == b.ctx_ && a.value_ == b.value_;
  }

 private:
  PrimeContext ctx_;
  u64 value_;
};

inline int valuation(const PAdicInt& x) { return x.valuation(); }
inline PAdicInt invert(const PAdicInt& x) { return x.invert(); }
inline PAdicInt pow_ctx(const PAdicInt& x, u64 e) { return x.pow(e); }

}  // namespace iwlab
