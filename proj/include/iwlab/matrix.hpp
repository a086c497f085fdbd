#pragma once

// Dense matrices over Z/p^K, Smith reduction over the chain ring, and
// presentations of finite quotients (Z/p^K)^D / span(relations).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "iwlab/errors.hpp"
#include "iwlab/padic.hpp"

namespace iwlab {

using Vec = std::vector<u64>;

/// Row-major residue matrix; the ring is supplied by the caller's PrimeContext.
class ResidueMatrix {
 public:
  ResidueMatrix() = default;
  ResidueMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static ResidueMatrix identity(std::size_t n) {
    ResidueMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  /// Matrix whose columns are the given vectors (all of length `rows`).
  static ResidueMatrix from_columns(std::size_t rows, const std::vector<Vec>& cols) {
    ResidueMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      require(cols[j].size() == rows, ErrorCode::InternalInvariant, "column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  u64& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * cols_ + j]; }
  u64 operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * cols_ + j]; }

  u64* row(std::size_t i) noexcept { return a_.data() + i * cols_; }
  const u64* row(std::size_t i) const noexcept { return a_.data() + i * cols_; }

  Vec column(std::size_t j) const {
    Vec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  std::vector<Vec> columns() const {
    std::vector<Vec> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  /// Horizontal concatenation [*this | other].
  ResidueMatrix hcat(const ResidueMatrix& other) const {
    std::size_t r = rows_ == 0 && cols_ == 0 ? other.rows_ : rows_;
    require(other.cols_ == 0 || other.rows_ == r, ErrorCode::InternalInvariant, "hcat row mismatch");
    ResidueMatrix m(r, cols_ + other.cols_);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
      for (std::size_t j = 0; j < other.cols_; ++j) m(i, cols_ + j) = other(i, j);
    }
    return m;
  }

  friend bool operator==(const ResidueMatrix& x, const ResidueMatrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<u64> a_;
};

inline ResidueMatrix mat_mul(const PrimeContext& ctx, const ResidueMatrix& A, const ResidueMatrix& B) {
  require(A.cols() == B.rows(), ErrorCode::InternalInvariant, "mat_mul shape mismatch");
  ResidueMatrix C(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t k = 0; k < A.cols(); ++k) {
      u64 a = A(i, k);
      if (a == 0) continue;
      const u64* br = B.row(k);
      u64* cr = C.row(i);
      for (std::size_t j = 0; j < B.cols(); ++j)
        if (br[j]) cr[j] = ctx.add(cr[j], ctx.mul(a, br[j]));
    }
  return C;
}

inline Vec mat_vec(const PrimeContext& ctx, const ResidueMatrix& A, const Vec& x) {
  require(A.cols() == x.size(), ErrorCode::InternalInvariant, "mat_vec shape mismatch");
  Vec y(A.rows(), 0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const u64* r = A.row(i);
    u64 s = 0;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (r[j] && x[j]) s = ctx.add(s, ctx.mul(r[j], x[j]));
    y[i] = s;
  }
  return y;
}

inline Vec vec_add(const PrimeContext& ctx, Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = ctx.add(a[i], b[i]);
  return a;
}
inline Vec vec_sub(const PrimeContext& ctx, Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = ctx.sub(a[i], b[i]);
  return a;
}
inline Vec vec_scale(const PrimeContext& ctx, Vec a, u64 c) {
  for (auto& x : a) x = ctx.mul(x, c);
  return a;
}
inline bool vec_is_zero(const Vec& a) {
  return std::all_of(a.begin(), a.end(), [](u64 x) { return x == 0; });
}

/// U * M * V = diag(p^{vals[0]}, ..., p^{vals[rank-1]}, 0, ...), vals nondecreasing.
struct SmithForm {
  std::size_t rows = 0, cols = 0;
  std::vector<int> vals;
  ResidueMatrix U, Uinv;  // rows x rows, empty when not tracked
  ResidueMatrix Vtop;     // leading v_rows rows of V, empty when not tracked

  std::size_t rank() const noexcept { return vals.size(); }
};

/// Smith reduction over the chain ring Z/p^K by minimal-valuation pivoting.
/// `track_u` keeps U and U^{-1}; `v_rows` keeps that many leading rows of V.
inline SmithForm smith(const PrimeContext& ctx, ResidueMatrix M, bool track_u = false, std::size_t v_rows = 0) {
  const std::size_t R = M.rows(), C = M.cols();
  const int K = ctx.K();
  const u64 p = ctx.p();
  SmithForm sf;
  sf.rows = R;
  sf.cols = C;
  if (track_u) {
    sf.U = ResidueMatrix::identity(R);
    sf.Uinv = ResidueMatrix::identity(R);
  }
  v_rows = std::min(v_rows, C);
  if (v_rows > 0) {
    sf.Vtop = ResidueMatrix(v_rows, C);
    for (std::size_t i = 0; i < v_rows; ++i) sf.Vtop(i, i) = 1;
  }

  int floor_v = 0;
  for (std::size_t t = 0; t < std::min(R, C); ++t) {
    std::size_t pi = R, pj = C;
    int best = K;
    for (std::size_t i = t; i < R && best > floor_v; ++i) {
      const u64* r = M.row(i);
      for (std::size_t j = t; j < C; ++j) {
        if (r[j] == 0) continue;
        int v = (r[j] % p != 0) ? 0 : ctx.valuation(r[j]);
        if (v < best) {
          best = v;
          pi = i;
          pj = j;
          if (v == floor_v) break;
        }
      }
    }
    if (best >= K) break;
    floor_v = best;

    if (pi != t) {
      for (std::size_t j = 0; j < C; ++j) std::swap(M(t, j), M(pi, j));
      if (track_u) {
        for (std::size_t j = 0; j < R; ++j) std::swap(sf.U(t, j), sf.U(pi, j));
        for (std::size_t i = 0; i < R; ++i) std::swap(sf.Uinv(i, t), sf.Uinv(i, pi));
      }
    }
    if (pj != t) {
      for (std::size_t i = 0; i < R; ++i) std::swap(M(i, t), M(i, pj));
      for (std::size_t i = 0; i < v_rows; ++i) std::swap(sf.Vtop(i, t), sf.Vtop(i, pj));
    }

    const u64 unit = ctx.unit_part(M(t, t));
    if (unit != 1) {
      const u64 w = ctx.inverse(unit);
      u64* rt = M.row(t);
      for (std::size_t j = t; j < C; ++j)
        if (rt[j]) rt[j] = ctx.mul(rt[j], w);
      if (track_u) {
        u64* ut = sf.U.row(t);
        for (std::size_t j = 0; j < R; ++j)
          if (ut[j]) ut[j] = ctx.mul(ut[j], w);
        for (std::size_t i = 0; i < R; ++i)
          if (sf.Uinv(i, t)) sf.Uinv(i, t) = ctx.mul(sf.Uinv(i, t), unit);
      }
    }

    // Clear column t below the pivot.
    const u64* rt = M.row(t);
    for (std::size_t i = t + 1; i < R; ++i) {
      u64 b = M(i, t);
      if (b == 0) continue;
      u64 q = ctx.div_p_power(b, best);
      u64* ri = M.row(i);
      for (std::size_t j = t; j < C; ++j)
        if (rt[j]) ri[j] = ctx.sub(ri[j], ctx.mul(q, rt[j]));
      if (track_u) {
        const u64* ut = sf.U.row(t);
        u64* ui = sf.U.row(i);
        for (std::size_t j = 0; j < R; ++j)
          if (ut[j]) ui[j] = ctx.sub(ui[j], ctx.mul(q, ut[j]));
        for (std::size_t k = 0; k < R; ++k) {
          u64 x = sf.Uinv(k, i);
          if (x) sf.Uinv(k, t) = ctx.add(sf.Uinv(k, t), ctx.mul(q, x));
        }
      }
    }
    // Clear row t right of the pivot; only V sees the column operations.
    for (std::size_t j = t + 1; j < C; ++j) {
      u64 b = M(t, j);
      if (b == 0) continue;
      u64 q = ctx.div_p_power(b, best);
      M(t, j) = 0;
      for (std::size_t i = 0; i < v_rows; ++i) {
        u64 x = sf.Vtop(i, t);
        if (x) sf.Vtop(i, j) = ctx.sub(sf.Vtop(i, j), ctx.mul(q, x));
      }
    }
    sf.vals.push_back(best);
  }
  return sf;
}

/// Valuations of the invariant factors of the column span (no transforms).
inline std::vector<int> smith_valuations(const PrimeContext& ctx, const ResidueMatrix& M) {
  return smith(ctx, M).vals;
}

/// Leading v_rows coordinates of some x with M x = b, if one exists.
/// Requires the form to carry U and at least the needed rows of V.
inline std::optional<Vec> smith_solve(const PrimeContext& ctx, const SmithForm& sf, const Vec& b) {
  Vec c = mat_vec(ctx, sf.U, b);
  const std::size_t rk = sf.rank();
  Vec w(sf.cols, 0);
  for (std::size_t i = 0; i < sf.rows; ++i) {
    if (i < rk) {
      if (c[i] != 0 && ctx.valuation(c[i]) < sf.vals[i]) return std::nullopt;
      w[i] = ctx.div_p_power(c[i], sf.vals[i]);
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return mat_vec(ctx, sf.Vtop, w);
}

/// Leading coordinates (tracked rows of V) of a generating set of ker M.
inline std::vector<Vec> smith_kernel(const PrimeContext& ctx, const SmithForm& sf) {
  std::vector<Vec> out;
  const std::size_t vr = sf.Vtop.rows();
  for (std::size_t i = 0; i < sf.cols; ++i) {
    u64 scale = 1;
    if (i < sf.rank()) {
      if (sf.vals[i] == 0) continue;
      scale = ctx.p_power(ctx.K() - sf.vals[i]);
    }
    Vec v(vr);
    for (std::size_t r = 0; r < vr; ++r) v[r] = ctx.mul(sf.Vtop(r, i), scale);
    if (!vec_is_zero(v)) out.push_back(std::move(v));
  }
  return out;
}

/// A finite group S / (S ∩ span(R ∪ U)) inside the ambient (Z/p^K)^dim / span(R),
/// with coordinates in invariant-factor form (exponents nonincreasing).
class Subquotient {
 public:
  /// S absent means the whole ambient.
  Subquotient(const PrimeContext& ctx, std::size_t dim, const ResidueMatrix& R,
              const std::optional<ResidueMatrix>& S, const ResidueMatrix& U)
      : ctx_(ctx), dim_(dim) {
    ResidueMatrix RU = with_rows(R).hcat(with_rows(U));
    if (!S) {
      direct_ = true;
      init_from_lattice(RU, dim, std::nullopt);
      return;
    }
    {
      auto vals = smith_valuations(ctx, RU);
      require(vals.size() == dim && (vals.empty() || vals.back() < ctx.K()), ErrorCode::PrecisionExhausted,
              "ambient quotient is not finite below precision p^" + std::to_string(ctx.K()));
    }
    gens_ = *S;
    g_ = S->cols();
    ResidueMatrix M = with_rows(*S).hcat(RU);
    solver_ = smith(ctx, M, true, g_);
    auto ker = smith_kernel(ctx, solver_);
    ResidueMatrix K0 = ResidueMatrix::from_columns(g_, ker);
    init_from_lattice(K0, g_, gens_);
  }

  const PrimeContext& ctx() const noexcept { return ctx_; }
  std::size_t ambient_dim() const noexcept { return dim_; }
  const std::vector<int>& exponents() const noexcept { return exps_; }

  /// Class of an ambient vector, or nullopt if it is not in S + span(R ∪ U).
  std::optional<Vec> classify(const Vec& x) const {
    Vec z;
    if (direct_) {
      z = x;
    } else {
      auto sol = smith_solve(ctx_, solver_, x);
      if (!sol) return std::nullopt;
      z = std::move(*sol);
    }
    Vec y = mat_vec(ctx_, coord_, z);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] %= ctx_.p_power(exps_[i]);
    return y;
  }

  bool contains(const Vec& x) const { return direct_ || smith_solve(ctx_, solver_, x).has_value(); }

  /// Ambient representative of invariant-factor generator i.
  const Vec& section(std::size_t i) const { return sections_[i]; }
  const std::vector<Vec>& sections() const noexcept { return sections_; }

  /// Ambient representative of the element with the given coordinates.
  Vec lift(const Vec& coords) const {
    Vec x(dim_, 0);
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (coords[i]) x = vec_add(ctx_, std::move(x), vec_scale(ctx_, sections_[i], coords[i]));
    return x;
  }

 private:
  ResidueMatrix with_rows(const ResidueMatrix& m) const {
    if (m.rows() == dim_) return m;
    require(m.cols() == 0, ErrorCode::InternalInvariant, "matrix row count differs from ambient dimension");
    return ResidueMatrix(dim_, 0);
  }

  void init_from_lattice(const ResidueMatrix& L, std::size_t n, const std::optional<ResidueMatrix>& gens) {
    SmithForm sf = smith(ctx_, L, true, 0);
    require(sf.rank() == n && (sf.vals.empty() || sf.vals.back() < ctx_.K()), ErrorCode::PrecisionExhausted,
            "quotient is not finite below precision p^" + std::to_string(ctx_.K()));
    coord_ = ResidueMatrix(0, n);
    std::vector<Vec> rows;
    for (std::size_t k = n; k-- > 0;) {
      if (sf.vals[k] == 0) continue;
      exps_.push_back(sf.vals[k]);
      Vec r(sf.U.row(k), sf.U.row(k) + n);
      rows.push_back(std::move(r));
      Vec s = sf.Uinv.column(k);
      sections_.push_back(gens ? mat_vec(ctx_, *gens, s) : s);
    }
    coord_ = ResidueMatrix(rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < n; ++j) coord_(i, j) = rows[i][j];
  }

  PrimeContext ctx_;
  std::size_t dim_;
  bool direct_ = false;
  std::size_t g_ = 0;
  ResidueMatrix gens_;
  SmithForm solver_;
  ResidueMatrix coord_;
  std::vector<int> exps_;
  std::vector<Vec> sections_;
};

/// Membership in span(columns) over Z/p^K, decided from the Smith form.
class SpanMembership {
 public:
  SpanMembership(const PrimeContext& ctx, const ResidueMatrix& cols) : ctx_(ctx), sf_(smith(ctx, cols, true, 0)) {}

  bool contains(const Vec& b) const {
    Vec c = mat_vec(ctx_, sf_.U, b);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0) continue;
      if (i >= sf_.rank() || ctx_.valuation(c[i]) < sf_.vals[i]) return false;
    }
    return true;
  }

 private:
  PrimeContext ctx_;
  SmithForm sf_;
};

/// Generators of span(S1) ∩ (span(S2) + span(R)) as combinations of S1.
inline std::vector<Vec> intersect_spans(const PrimeContext& ctx, std::size_t dim, const std::vector<Vec>& S1,
                                        const std::vector<Vec>& S2, const ResidueMatrix& R) {
  if (S1.empty()) return {};
  ResidueMatrix A = ResidueMatrix::from_columns(dim, S1);
  ResidueMatrix M = A.hcat(S2.empty() ? ResidueMatrix(dim, 0) : ResidueMatrix::from_columns(dim, S2));
  if (R.cols() > 0) M = M.hcat(R);
  SmithForm sf = smith(ctx, M, false, S1.size());
  std::vector<Vec> out;
  for (const auto& z : smith_kernel(ctx, sf)) {
    Vec v = mat_vec(ctx, A, z);
    if (!vec_is_zero(v)) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace iwlab
