#pragma once

// Truncated arithmetic in Λ = Z_p[[T]]: polynomials over Z/p^K, the ω_n / ν_{n,m}
// family, Euclidean division by monic polynomials and Weierstrass preparation.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "iwlab/errors.hpp"
#include "iwlab/padic.hpp"

namespace iwlab {

class LambdaElt {
 public:
  explicit LambdaElt(const PrimeContext& ctx) : ctx_(ctx) {}
  LambdaElt(const PrimeContext& ctx, std::vector<u64> coeffs) : ctx_(ctx), c_(std::move(coeffs)) {
    for (auto& x : c_) x = ctx_.reduce(x);
    trim();
  }

  static LambdaElt from_signed(const PrimeContext& ctx, const std::vector<long long>& coeffs) {
    std::vector<u64> c;
    c.reserve(coeffs.size());
    for (long long x : coeffs) c.push_back(ctx.from_signed(x));
    return LambdaElt(ctx, std::move(c));
  }
  static LambdaElt constant(const PrimeContext& ctx, u64 a) { return LambdaElt(ctx, std::vector<u64>{a}); }
  static LambdaElt one(const PrimeContext& ctx) { return constant(ctx, 1); }
  /// c·T^k
  static LambdaElt monomial(const PrimeContext& ctx, std::size_t k, u64 c = 1) {
    std::vector<u64> v(k + 1, 0);
    v[k] = c;
    return LambdaElt(ctx, std::move(v));
  }
  static LambdaElt T(const PrimeContext& ctx) { return monomial(ctx, 1); }

  const PrimeContext& ctx() const noexcept { return ctx_; }
  const std::vector<u64>& coeffs() const noexcept { return c_; }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  u64 coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
  u64 leading() const noexcept { return c_.empty() ? 0 : c_.back(); }
  u64 at_zero() const noexcept { return coeff(0); }

  /// Minimal coefficient valuation (K for the zero element).
  int content_valuation() const noexcept {
    int v = ctx_.K();
    for (u64 x : c_) v = std::min(v, ctx_.valuation(x));
    return v;
  }

  bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }

  bool is_distinguished() const noexcept {
    if (!is_monic()) return false;
    for (std::size_t i = 0; i + 1 < c_.size(); ++i)
      if (ctx_.is_unit(c_[i])) return false;
    return true;
  }

  /// Same residues read at another precision (reduced, or lifted as integers).
  LambdaElt at_precision(const PrimeContext& other) const { return LambdaElt(other, c_); }

  LambdaElt& operator+=(const LambdaElt& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = ctx_.add(c_[i], o.c_[i]);
    trim();
    return *this;
  }
  LambdaElt& operator-=(const LambdaElt& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = ctx_.sub(c_[i], o.c_[i]);
    trim();
    return *this;
  }
  friend LambdaElt operator+(LambdaElt a, const LambdaElt& b) { return a += b; }
  friend LambdaElt operator-(LambdaElt a, const LambdaElt& b) { return a -= b; }
  LambdaElt operator-() const {
    LambdaElt r(ctx_);
    return r -= *this;
  }

  friend LambdaElt operator*(const LambdaElt& a, const LambdaElt& b) {
    if (a.is_zero() || b.is_zero()) return LambdaElt(a.ctx_);
    const auto& ctx = a.ctx_;
    std::vector<u64> r(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        if (b.c_[j]) r[i + j] = ctx.add(r[i + j], ctx.mul(a.c_[i], b.c_[j]));
    }
    return LambdaElt(ctx, std::move(r));
  }
  LambdaElt scaled(u64 s) const {
    std::vector<u64> r(c_);
    for (auto& x : r) x = ctx_.mul(x, s);
    return LambdaElt(ctx_, std::move(r));
  }
  /// Multiplication by T^k.
  LambdaElt shifted(std::size_t k) const {
    if (is_zero()) return *this;
    std::vector<u64> r(k, 0);
    r.insert(r.end(), c_.begin(), c_.end());
    return LambdaElt(ctx_, std::move(r));
  }
  LambdaElt pow(u64 e) const {
    LambdaElt result = one(ctx_), base = *this;
    while (e) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  /// Coefficients reduced mod p^e (still stored at precision K).
  LambdaElt mod_p_power(int e) const {
    u64 m = ctx_.p_power(e);
    if (m == 0) return *this;
    std::vector<u64> r(c_);
    for (auto& x : r) x %= m;
    return LambdaElt(ctx_, std::move(r));
  }

  /// True iff every coefficient is divisible by p^e.
  bool divisible_by_p_power(int e) const {
    for (u64 x : c_)
      if (ctx_.valuation(x) < e) return false;
    return true;
  }

  friend bool operator==(const LambdaElt& a, const LambdaElt& b) { return a.ctx_ == b.ctx_ && a.c_ == b.c_; }

  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(c_[i]);
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  PrimeContext ctx_;
  std::vector<u64> c_;
};

inline u64 default_degree_cap(u64 p) {
  u64 c = 1;
  for (int i = 0; i < 8; ++i) c *= p;
  return c;
}

/// p^n, or 0 if it exceeds `cap`.
inline u64 level_degree(u64 p, int n, u64 cap) {
  u64 d = 1;
  for (int i = 0; i < n; ++i) {
    if (d > cap / p) return 0;
    d *= p;
  }
  return d <= cap ? d : 0;
}

/// ω_n = (1+T)^{p^n} − 1.
inline LambdaElt omega(const PrimeContext& ctx, int n, u64 degree_cap = 0) {
  require(n >= 0, ErrorCode::InvalidArgument, "level must be nonnegative");
  if (degree_cap == 0) degree_cap = default_degree_cap(ctx.p());
  const u64 N = level_degree(ctx.p(), n, degree_cap);
  require(N != 0, ErrorCode::LevelTooLarge,
          "p^" + std::to_string(n) + " exceeds the degree cap " + std::to_string(degree_cap));
  // Binomial coefficients tracked as p^v * unit.
  std::vector<u64> c(N + 1, 0);
  int v = 0;
  u64 unit = 1;
  for (u64 i = 1; i <= N; ++i) {
    u64 num = N - i + 1, den = i;
    while (num % ctx.p() == 0) { num /= ctx.p(); ++v; }
    while (den % ctx.p() == 0) { den /= ctx.p(); --v; }
    unit = ctx.mul(unit, ctx.reduce(num));
    unit = ctx.mul(unit, ctx.inverse(ctx.reduce(den)));
    c[i] = v >= ctx.K() ? 0 : ctx.mul(ctx.p_power(v), unit);
  }
  return LambdaElt(ctx, std::move(c));
}

struct DivResult {
  LambdaElt q, r;
};

/// f = q·g + r with deg r < deg g; g must have a unit leading coefficient.
inline DivResult divide(const LambdaElt& f, const LambdaElt& g) {
  const auto& ctx = f.ctx();
  require(!g.is_zero(), ErrorCode::NotMonic, "division by zero polynomial");
  require(ctx.is_unit(g.leading()), ErrorCode::NotMonic, "leading coefficient " + std::to_string(g.leading()) + " is not a unit");
  const u64 linv = g.leading() == 1 ? 1 : ctx.inverse(g.leading());
  const int dg = g.degree();
  std::vector<u64> r = f.coeffs();
  if (static_cast<int>(r.size()) <= dg) return {LambdaElt(ctx), f};
  std::vector<u64> q(r.size() - dg, 0);
  const auto& gc = g.coeffs();
  for (int i = static_cast<int>(r.size()) - 1; i >= dg; --i) {
    u64 lead = r[i];
    if (lead == 0) continue;
    u64 t = ctx.mul(lead, linv);
    q[i - dg] = t;
    for (int j = 0; j <= dg; ++j)
      if (gc[j]) r[i - dg + j] = ctx.sub(r[i - dg + j], ctx.mul(t, gc[j]));
  }
  r.resize(dg);
  return {LambdaElt(ctx, std::move(q)), LambdaElt(ctx, std::move(r))};
}

/// Remainder of f modulo a polynomial with unit leading coefficient.
inline LambdaElt reduce_mod(const LambdaElt& f, const LambdaElt& g) {
  if (f.degree() < g.degree()) return f;
  return divide(f, g).r;
}

/// ν_{n,m} = ω_n / ω_m.
inline LambdaElt nu(const PrimeContext& ctx, int n, int m, u64 degree_cap = 0) {
  require(0 <= m && m < n, ErrorCode::InvalidArgument, "nu requires 0 <= m < n");
  auto d = divide(omega(ctx, n, degree_cap), omega(ctx, m, degree_cap));
  require(d.r.is_zero(), ErrorCode::InternalInvariant, "omega_m does not divide omega_n");
  return d.q;
}

struct WeierstrassForm {
  int mu_exp = 0;
  LambdaElt distinguished;
  LambdaElt unit;
};

/// f = p^μ · unit · distinguished with distinguished monic and unit(0) a unit.
inline WeierstrassForm weierstrass_prepare(const LambdaElt& f) {
  const auto& ctx = f.ctx();
  const int mu = f.content_valuation();
  require(mu < ctx.K(), ErrorCode::ZeroAtPrecision, "all coefficients vanish mod p^" + std::to_string(ctx.K()));
  const PrimeContext w = ctx.with_precision(ctx.K() - mu);
  const u64 p = ctx.p();

  std::vector<u64> fc;
  for (u64 x : f.coeffs()) fc.push_back(ctx.div_p_power(x, mu));
  LambdaElt fp(w, fc);
  std::size_t d = 0;
  while (!w.is_unit(fp.coeff(d))) ++d;

  if (d == 0) return {mu, LambdaElt::one(ctx), fp.at_precision(ctx)};

  // Bezout mod p: s·T^d + t·h0 = 1 with t = h0^{-1} mod T^d.
  const PrimeContext f1(p, 1);
  LambdaElt f_modp = fp.at_precision(f1);
  std::vector<u64> h0c(f_modp.coeffs().begin() + static_cast<long>(d), f_modp.coeffs().end());
  LambdaElt h0(f1, h0c);
  std::vector<u64> tc(d, 0);
  {
    u64 inv0 = f1.inverse(h0.coeff(0));
    for (std::size_t i = 0; i < d; ++i) {
      u64 acc = i == 0 ? 1 : 0;
      for (std::size_t j = 1; j <= i; ++j) acc = f1.sub(acc, f1.mul(h0.coeff(j), tc[i - j]));
      tc[i] = f1.mul(acc, inv0);
    }
  }
  LambdaElt t(f1, tc);
  LambdaElt s = divide(LambdaElt::one(f1) - t * h0, LambdaElt::monomial(f1, d)).q;
  const LambdaElt Td1 = LambdaElt::monomial(f1, d);

  LambdaElt P = LambdaElt::monomial(w, d);
  LambdaElt u = h0.at_precision(w);
  for (int k = 1; k < w.K(); ++k) {
    LambdaElt err = fp - P * u;
    require(err.divisible_by_p_power(k), ErrorCode::InternalInvariant, "Hensel step lost congruence");
    std::vector<u64> ec;
    for (u64 x : err.coeffs()) ec.push_back(w.div_p_power(x, k));
    LambdaElt e(f1, ec);
    auto qr = divide(e * t, Td1);
    LambdaElt dP = qr.r;
    LambdaElt du = e * s + qr.q * h0;
    u64 pk = w.p_power(k);
    P += dP.at_precision(w).scaled(pk);
    u += du.at_precision(w).scaled(pk);
  }
  auto qr = divide(fp, P);
  require(qr.r.is_zero(), ErrorCode::InternalInvariant, "distinguished factor does not divide");
  return {mu, P.at_precision(ctx), qr.q.at_precision(ctx)};
}

/// f ∈ (h, p^B): the remainder of f by h vanishes mod p^B.
inline bool membership_in(const LambdaElt& h, int B, const LambdaElt& f) {
  require(h.is_distinguished(), ErrorCode::InvalidArgument, "h must be distinguished");
  require(B >= 0 && B <= f.ctx().K(), ErrorCode::InvalidArgument, "B must lie in [0, K]");
  return reduce_mod(f, h).divisible_by_p_power(B);
}

/// Largest level n with p^n within the cap.
inline int max_level_for_cap(u64 p, u64 degree_cap) {
  int n = 0;
  while (level_degree(p, n + 1, degree_cap) != 0) ++n;
  return n;
}

/// Least m in [1, m_max] with ν_{m,0} ∈ (h, p^B); m_max < 0 means the largest level the cap allows.
inline int min_level_for_membership(const LambdaElt& h, int B, int m_max = -1, u64 degree_cap = 0) {
  const auto& ctx = h.ctx();
  if (degree_cap == 0) degree_cap = default_degree_cap(ctx.p());
  if (m_max < 0) m_max = max_level_for_cap(ctx.p(), degree_cap);
  for (int m = 1; m <= m_max; ++m)
    if (membership_in(h, B, nu(ctx, m, 0, degree_cap))) return m;
  fail(ErrorCode::NotFoundWithinCap, "no level m <= " + std::to_string(m_max) + " puts nu_{m,0} in (h, p^B)");
}

struct NmmResult {
  int M = 0;
  LambdaElt Q;
  bool verified = false;
};

/// Least M with ν_{2M,0} ≡ Q·f·ω_M mod p^B; the result is re-checked by multiplication.
inline NmmResult nmm_congruence_search(const LambdaElt& f, int B, int M_max = -1, u64 degree_cap = 0) {
  const auto& ctx = f.ctx();
  require(f.is_distinguished(), ErrorCode::InvalidArgument, "f must be distinguished");
  require(B >= 0 && B <= ctx.K(), ErrorCode::InvalidArgument, "B must lie in [0, K]");
  if (degree_cap == 0) degree_cap = default_degree_cap(ctx.p());
  const int cap_level = max_level_for_cap(ctx.p(), degree_cap) / 2;
  if (M_max < 0 || M_max > cap_level) M_max = cap_level;
  for (int M = 1; M <= M_max; ++M) {
    LambdaElt target = nu(ctx, 2 * M, 0, degree_cap);
    LambdaElt g = f * omega(ctx, M, degree_cap);
    auto qr = divide(target, g);
    if (!qr.r.divisible_by_p_power(B)) continue;
    NmmResult res{M, qr.q, false};
    res.verified = (target - qr.q * g).divisible_by_p_power(B);
    require(res.verified, ErrorCode::InternalInvariant, "nmm reconstruction failed");
    return res;
  }
  fail(ErrorCode::NotFoundWithinCap, "no M <= " + std::to_string(M_max) + " satisfies the congruence");
}

}  // namespace iwlab
