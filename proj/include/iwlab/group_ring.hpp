#pragma once

// R = Z/p^K[s] / ((1+s)^p − 1), the group ring of a cyclic group of order p with s = ν − 1.

#include <vector>

#include "iwlab/errors.hpp"
#include "iwlab/padic.hpp"

namespace iwlab {

class GroupRingElt {
 public:
  explicit GroupRingElt(const PrimeContext& ctx) : ctx_(ctx), c_(ctx.p(), 0) {}
  GroupRingElt(const PrimeContext& ctx, std::vector<u64> coeffs) : ctx_(ctx), c_(std::move(coeffs)) {
    c_ = reduce(ctx_, std::move(c_));
  }

  static GroupRingElt s(const PrimeContext& ctx) {
    std::vector<u64> c(ctx.p() > 1 ? 2 : 1, 0);
    c[1] = 1;
    return GroupRingElt(ctx, c);
  }
  static GroupRingElt constant(const PrimeContext& ctx, u64 a) { return GroupRingElt(ctx, {a}); }

  const PrimeContext& ctx() const noexcept { return ctx_; }
  /// Coefficients of 1, s, ..., s^{p-1}.
  const std::vector<u64>& coeffs() const noexcept { return c_; }
  u64 coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
  bool is_zero() const noexcept {
    for (u64 x : c_)
      if (x) return false;
    return true;
  }

  friend GroupRingElt operator+(const GroupRingElt& a, const GroupRingElt& b) {
    GroupRingElt r(a.ctx_);
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.ctx_.add(a.c_[i], b.c_[i]);
    return r;
  }
  friend GroupRingElt operator-(const GroupRingElt& a, const GroupRingElt& b) {
    GroupRingElt r(a.ctx_);
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.ctx_.sub(a.c_[i], b.c_[i]);
    return r;
  }
  friend GroupRingElt operator*(const GroupRingElt& a, const GroupRingElt& b) {
    const auto& ctx = a.ctx_;
    std::vector<u64> prod(2 * ctx.p() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (!a.c_[i]) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        if (b.c_[j]) prod[i + j] = ctx.add(prod[i + j], ctx.mul(a.c_[i], b.c_[j]));
    }
    return GroupRingElt(ctx, std::move(prod));
  }
  GroupRingElt scaled(u64 k) const {
    GroupRingElt r(*this);
    for (auto& x : r.c_) x = ctx_.mul(x, k);
    return r;
  }

  friend bool operator==(const GroupRingElt& a, const GroupRingElt& b) { return a.ctx_ == b.ctx_ && a.c_ == b.c_; }

  /// Coefficients of (1+s)^p − 1 below s^p, i.e. s^p ≡ −Σ_{i<p} binom(p,i) s^i.
  static std::vector<u64> relation_tail(const PrimeContext& ctx) {
    const u64 p = ctx.p();
    // Pascal's triangle mod p^K up to row p.
    std::vector<u64> row{1};
    for (u64 n = 1; n <= p; ++n) {
      std::vector<u64> next(n + 1, 1);
      for (u64 i = 1; i < n; ++i) next[i] = ctx.add(row[i - 1], row[i]);
      row = std::move(next);
    }
    row.resize(p);
    row[0] = 0;
    return row;
  }

 private:
  static std::vector<u64> reduce(const PrimeContext& ctx, std::vector<u64> c) {
    const std::size_t p = ctx.p();
    for (auto& x : c) x = ctx.reduce(x);
    if (c.size() > p) {
      auto tail = relation_tail(ctx);
      for (std::size_t k = c.size() - 1; k >= p; --k) {
        u64 lead = c[k];
        if (!lead) continue;
        c[k] = 0;
        for (std::size_t i = 1; i < p; ++i)
          if (tail[i]) c[k - p + i] = ctx.sub(c[k - p + i], ctx.mul(lead, tail[i]));
      }
    }
    c.resize(p, 0);
    return c;
  }

  PrimeContext ctx_;
  std::vector<u64> c_;
};

/// 𝒩 = Σ_{i<p} (1+s)^i.
inline GroupRingElt algebraic_norm(const PrimeContext& ctx) {
  GroupRingElt one = GroupRingElt::constant(ctx, 1);
  GroupRingElt nu = one + GroupRingElt::s(ctx);
  GroupRingElt acc(ctx), term = one;
  for (u64 i = 0; i < ctx.p(); ++i) {
    acc = acc + term;
    term = term * nu;
  }
  return acc;
}

struct NormDecomposition {
  GroupRingElt u;  // 𝒩 = p·u(s) + s^{p-1}
  GroupRingElt f;  // 𝒩 = p + s·f(s)
};

inline NormDecomposition norm_decomposition(const PrimeContext& ctx) {
  require(ctx.K() >= 2, ErrorCode::InvalidArgument, "dividing the norm by p needs precision K >= 2");
  const GroupRingElt N = algebraic_norm(ctx);
  const u64 p = ctx.p();
  std::vector<u64> uc(p, 0), fc(p, 0);
  for (u64 i = 0; i + 1 < p; ++i) {
    u64 c = N.coeff(i);
    require(ctx.valuation(c) >= 1, ErrorCode::InternalInvariant, "norm coefficient below s^{p-1} not divisible by p");
    uc[i] = ctx.div_p_power(c, 1);
  }
  require(N.coeff(p - 1) == 1, ErrorCode::InternalInvariant, "norm is not monic in s");
  require(ctx.is_unit(uc[0]), ErrorCode::InternalInvariant, "u(0) is not a unit");
  require(N.coeff(0) == ctx.reduce(p), ErrorCode::InternalInvariant, "norm constant term differs from p");
  for (u64 i = 1; i < p; ++i) fc[i - 1] = N.coeff(i);
  return {GroupRingElt(ctx, uc), GroupRingElt(ctx, fc)};
}

}  // namespace iwlab
