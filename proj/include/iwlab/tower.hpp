#pragma once

// Finite levels X_n = A / (ω_n A + ν_{n,0} Y) of a glued module, the norm and lift maps
// between consecutive levels, growth fitting, and the element-level checks on towers.

#include <algorithm>
#include <atomic>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "iwlab/errors.hpp"
#include "iwlab/lambda.hpp"
#include "iwlab/matrix.hpp"
#include "iwlab/module.hpp"
#include "iwlab/pgroup.hpp"
#include "iwlab/tate.hpp"

namespace iwlab {

struct Level {
  int n = 0;
  Ambient amb;
  std::shared_ptr<Subquotient> sq;
  FinitePGroup group;
  ResidueMatrix t_action;  // action of T in group coordinates

  PGroupHom t_hom() const { return PGroupHom(group, group, t_action); }

  /// Coordinates of an element of A, or nullopt if it does not lie in A.
  std::optional<Vec> coords(const ModuleElement& x) const { return sq->classify(amb.embed(x)); }
  Vec coords_of_vec(const Vec& v) const {
    auto c = sq->classify(v);
    require(c.has_value(), ErrorCode::InternalInvariant, "vector left the presented level");
    return *c;
  }
};

namespace detail {

inline ResidueMatrix cols_or_empty(std::size_t rows, const std::vector<Vec>& cols) {
  return cols.empty() ? ResidueMatrix(rows, 0) : ResidueMatrix::from_columns(rows, cols);
}

inline std::vector<Vec> y_vectors(const Ambient& amb, const SubmoduleSpec& Y, const LambdaElt& factor) {
  std::vector<Vec> out;
  for (const auto& y : Y.generators) out.push_back(amb.multiply(factor, amb.embed(y)));
  return out;
}

inline std::vector<Vec> glue_closure(const GluedModule& X, const Ambient& amb) {
  std::vector<Vec> g;
  for (const auto& e : X.glue()) g.push_back(amb.embed(e));
  return amb.t_closure(g);
}

inline std::vector<Vec> times(const Ambient& amb, const LambdaElt& f, const std::vector<Vec>& vs) {
  std::vector<Vec> out;
  for (const auto& v : vs) out.push_back(amb.multiply(f, v));
  return out;
}

}  // namespace detail

/// X_n as an explicit presentation. Raises InfiniteQuotient when ω_n A + ν_{n,0} Y has infinite index
/// (or needs more digits than the working precision provides).
inline Level finite_level(const GluedModule& X, const SubmoduleSpec& Y, int n, u64 degree_cap = 0) {
  require(n >= 0, ErrorCode::InvalidArgument, "level must be nonnegative");
  const auto& ctx = X.ctx();
  for (const auto& y : Y.generators)
    require(X.contains(y), ErrorCode::InvalidArgument, "Y generator does not lie in the module");
  const LambdaElt w = omega(ctx, n, degree_cap);
  const LambdaElt nv = n == 0 ? LambdaElt::one(ctx) : nu(ctx, n, 0, degree_cap);
  Level L{n, X.ambient(w), nullptr, FinitePGroup::trivial(ctx), {}};
  const std::size_t D = L.amb.D;
  auto yv = detail::y_vectors(L.amb, Y, nv);
  try {
    if (X.is_full()) {
      L.sq = std::make_shared<Subquotient>(ctx, D, L.amb.R, std::nullopt, detail::cols_or_empty(D, yv));
    } else {
      auto U = detail::times(L.amb, w, detail::glue_closure(X, L.amb));
      U.insert(U.end(), yv.begin(), yv.end());
      L.sq = std::make_shared<Subquotient>(ctx, D, L.amb.R, detail::cols_or_empty(D, X.image_generators(L.amb)),
                                           detail::cols_or_empty(D, U));
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PrecisionExhausted) throw;
    fail(ErrorCode::InfiniteQuotient, "level " + std::to_string(n) + ": quotient is not finite below p^" +
                                          std::to_string(ctx.K()));
  }
  L.group = FinitePGroup(ctx, L.sq->exponents());
  L.t_action = induced_operator(*L.sq, L.amb.operator_matrix(LambdaElt::T(ctx)));
  return L;
}

struct Tower {
  GluedModule module;
  SubmoduleSpec y;
  int n_min = 0, n_max = 0;
  u64 degree_cap = 0;
  std::vector<Level> levels;
  std::vector<PGroupHom> norm_maps;  // norm_maps[i]: X_{n_min+i+1} → X_{n_min+i}
  std::vector<PGroupHom> lift_maps;  // lift_maps[i]: X_{n_min+i} → X_{n_min+i+1}

  const Level& level(int n) const {
    require(n >= n_min && n <= n_max, ErrorCode::InvalidArgument,
            "level " + std::to_string(n) + " outside computed range " + std::to_string(n_min) + ".." +
                std::to_string(n_max));
    return levels[static_cast<std::size_t>(n - n_min)];
  }
  const FinitePGroup& group(int n) const { return level(n).group; }
  const PGroupHom& norm_map(int n) const { return norm_maps[static_cast<std::size_t>(n - n_min)]; }
  const PGroupHom& lift_map(int n) const { return lift_maps[static_cast<std::size_t>(n - n_min)]; }

  /// Projection X_from → X_to for from ≥ to.
  PGroupHom projection(int from, int to) const {
    require(from >= to, ErrorCode::LevelOrder, "projection needs from >= to");
    PGroupHom h = PGroupHom::identity(group(from));
    for (int m = from; m > to; --m) h = norm_map(m - 1).compose(h);
    return h;
  }
  /// ι_{from,to} = multiplication by ν_{to,from}, for from ≤ to.
  PGroupHom lift(int from, int to) const {
    require(from <= to, ErrorCode::LevelOrder, "lift needs from <= to");
    PGroupHom h = PGroupHom::identity(group(from));
    for (int m = from; m < to; ++m) h = lift_map(m).compose(h);
    return h;
  }

  Vec element_at(const ModuleElement& x, int n) const {
    auto c = level(n).coords(module.canonical(x));
    require(c.has_value(), ErrorCode::InvalidArgument, "element does not lie in the module");
    return *c;
  }
};

namespace detail {

inline PGroupHom norm_between(const Level& hi, const Level& lo) {
  ResidueMatrix m(lo.group.rank(), hi.group.rank());
  for (std::size_t j = 0; j < hi.group.rank(); ++j) {
    Vec v = lo.amb.embed(hi.amb.extract(hi.sq->section(j)));
    Vec c = lo.coords_of_vec(v);
    for (std::size_t i = 0; i < c.size(); ++i) m(i, j) = c[i];
  }
  return PGroupHom(hi.group, lo.group, m);
}

inline PGroupHom lift_between(const Level& lo, const Level& hi, const LambdaElt& nv) {
  ResidueMatrix m(hi.group.rank(), lo.group.rank());
  for (std::size_t j = 0; j < lo.group.rank(); ++j) {
    Vec v = hi.amb.multiply(nv, hi.amb.embed(lo.amb.extract(lo.sq->section(j))));
    Vec c = hi.coords_of_vec(v);
    for (std::size_t i = 0; i < c.size(); ++i) m(i, j) = c[i];
  }
  return PGroupHom(lo.group, hi.group, m);
}

}  // namespace detail

/// Levels are computed independently on up to `threads` workers; assembly is in level order.
inline Tower build_tower(const GluedModule& X, const SubmoduleSpec& Y, int n_min, int n_max, unsigned threads = 1,
                         u64 degree_cap = 0) {
  require(n_min >= 0 && n_min <= n_max, ErrorCode::InvalidArgument, "level range must satisfy 0 <= n_min <= n_max");
  const auto& ctx = X.ctx();
  const std::size_t count = static_cast<std::size_t>(n_max - n_min + 1);
  std::vector<std::optional<Level>> slots(count);
  std::vector<std::optional<Error>> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        slots[i] = finite_level(X, Y, n_min + static_cast<int>(i), degree_cap);
      } catch (const Error& e) {
        errors[i] = e;
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) throw *e;

  Tower tw{X, Y, n_min, n_max, degree_cap, {}, {}, {}};
  for (auto& s : slots) tw.levels.push_back(std::move(*s));
  for (int n = n_min; n < n_max; ++n) {
    const Level& lo = tw.level(n);
    const Level& hi = tw.level(n + 1);
    const LambdaElt nv = nu(ctx, n + 1, n, degree_cap);
    PGroupHom N = detail::norm_between(hi, lo);
    PGroupHom I = detail::lift_between(lo, hi, nv);
    PGroupHom expect(lo.group, lo.group, induced_operator(*lo.sq, lo.amb.operator_matrix(nv)));
    require(N.compose(I) == expect, ErrorCode::InternalInvariant,
            "norm o lift differs from nu_{n+1,n} at level " + std::to_string(n));
    tw.norm_maps.push_back(std::move(N));
    tw.lift_maps.push_back(std::move(I));
  }
  return tw;
}

struct GrowthFit {
  long long mu = 0, lambda = 0, nu = 0;
  int n0_fit = 0;
};

/// Exact integer solution of log_p|X_n| = μ p^n + λ n + ν on the last three levels.
inline GrowthFit fit_invariants(const std::vector<int>& levels, const std::vector<long long>& log_sizes, u64 p) {
  require(levels.size() == log_sizes.size() && levels.size() >= 3, ErrorCode::InvalidArgument,
          "fitting needs at least 3 levels");
  for (std::size_t i = 1; i < levels.size(); ++i)
    require(levels[i] == levels[i - 1] + 1, ErrorCode::InvalidArgument, "fitting needs consecutive levels");
  auto ppow = [p](int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= static_cast<long long>(p);
    return r;
  };
  const std::size_t k = levels.size();
  const int n = levels[k - 1];
  const long long s0 = log_sizes[k - 3], s1 = log_sizes[k - 2], s2 = log_sizes[k - 1];
  const long long d1 = s1 - s0, d2 = s2 - s1;
  const long long denom = ppow(n - 2) * static_cast<long long>((p - 1) * (p - 1));
  const long long num = d2 - d1;
  if (num < 0 || num % denom != 0) fail(ErrorCode::NoExactFit, "no integer mu fits the last three levels");
  GrowthFit g;
  g.mu = num / denom;
  g.lambda = d1 - g.mu * (ppow(n - 1) - ppow(n - 2));
  if (g.lambda < 0) fail(ErrorCode::NoExactFit, "fitted lambda is negative");
  g.nu = s2 - g.mu * ppow(n) - g.lambda * n;
  g.n0_fit = n;
  for (std::size_t i = k; i-- > 0;) {
    if (g.mu * ppow(levels[i]) + g.lambda * levels[i] + g.nu != log_sizes[i]) break;
    g.n0_fit = levels[i];
  }
  return g;
}

inline GrowthFit fit_invariants(const Tower& tw) {
  std::vector<int> lv;
  std::vector<long long> sz;
  for (const auto& L : tw.levels) {
    lv.push_back(L.n);
    sz.push_back(L.group.order_exp());
  }
  return fit_invariants(lv, sz, tw.module.ctx().p());
}

/// Generators (level coordinates) of the Λ-span of the given vectors.
inline std::vector<Vec> lambda_span(const Level& L, std::vector<Vec> gens) {
  const PGroupHom T = L.t_hom();
  std::vector<Vec> out;
  for (auto& g : gens) {
    Vec v = L.group.reduce(std::move(g));
    for (std::size_t j = 0; j <= L.group.rank() && !vec_is_zero(v); ++j) {
      out.push_back(v);
      v = T.apply(v);
    }
  }
  return out;
}

/// Image of the Λ-submodule generated by `spec` in X_n.
inline SubgroupView image_subgroup(const Tower& tw, int n, const SubmoduleSpec& spec) {
  const Level& L = tw.level(n);
  std::vector<Vec> gens;
  for (const auto& x : spec.generators) gens.push_back(tw.element_at(x, n));
  return SubgroupView(L.group, lambda_span(L, gens));
}

/// d_n(x, z) = p-rk Λ(x_n − z_n).
inline int distance(const Tower& tw, const ModuleElement& x, const ModuleElement& z, int n) {
  const Level& L = tw.level(n);
  Vec d = L.group.add(tw.element_at(x, n), L.group.neg(tw.element_at(z, n)));
  return subgroup(L.group, lambda_span(L, {d})).p_rank();
}

/// V_n = X_n / T X_n.
inline FinitePGroup coinvariants(const Level& L) { return quotient(L.group, image_generators(L.t_hom())); }
/// X_n[T].
inline FinitePGroup t_kernel(const Level& L) { return kernel(L.t_hom()); }

struct H1Report {
  FinitePGroup group;
  std::optional<FinitePGroup> stable_target;  // Y/(Y ∩ TX), when that quotient is finite
  bool equals_stable = false;
};

/// Y/(Y ∩ TX) = (Y + TX)/TX, computed in P/(T·J·P).
inline std::optional<FinitePGroup> h1_stable_target(const GluedModule& X, const SubmoduleSpec& Y) {
  const auto& ctx = X.ctx();
  const Ambient amb = X.ambient(LambdaElt::T(ctx));
  const std::size_t D = amb.D;
  auto TG = detail::times(amb, LambdaElt::T(ctx), X.image_generators(amb));
  auto S = TG;
  auto yv = detail::y_vectors(amb, Y, LambdaElt::one(ctx));
  S.insert(S.end(), yv.begin(), yv.end());
  try {
    Subquotient q(ctx, D, amb.R, detail::cols_or_empty(D, S), detail::cols_or_empty(D, TG));
    return FinitePGroup(ctx, q.exponents());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PrecisionExhausted) throw;
    return std::nullopt;
  }
}

/// Y_n / ω_n X = (ω_n X + ν_{n,0} Y) / ω_n X.
inline H1Report h1_iwasawa(const GluedModule& X, const SubmoduleSpec& Y, int n, u64 degree_cap = 0) {
  const auto& ctx = X.ctx();
  const LambdaElt w = omega(ctx, n, degree_cap);
  const LambdaElt nv = n == 0 ? LambdaElt::one(ctx) : nu(ctx, n, 0, degree_cap);
  const Ambient amb = X.ambient(w);
  const std::size_t D = amb.D;
  auto U = detail::times(amb, w, X.image_generators(amb));
  auto S = U;
  auto yv = detail::y_vectors(amb, Y, nv);
  S.insert(S.end(), yv.begin(), yv.end());
  H1Report rep{FinitePGroup::trivial(ctx), std::nullopt, false};
  try {
    Subquotient q(ctx, D, amb.R, detail::cols_or_empty(D, S), detail::cols_or_empty(D, U));
    rep.group = FinitePGroup(ctx, q.exponents());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PrecisionExhausted) throw;
    fail(ErrorCode::InfiniteQuotient, "level " + std::to_string(n) + ": Y_n/omega_n X is not finite below p^" +
                                          std::to_string(ctx.K()));
  }
  rep.stable_target = h1_stable_target(X, Y);
  rep.equals_stable = rep.stable_target && *rep.stable_target == rep.group;
  return rep;
}

/// Y ⊆ TX, tested generator by generator in P/(T·J·P).
inline bool property_f_check(const GluedModule& X, const SubmoduleSpec& Y) {
  const auto& ctx = X.ctx();
  const Ambient amb = X.ambient(LambdaElt::T(ctx));
  auto TG = detail::times(amb, LambdaElt::T(ctx), X.image_generators(amb));
  ResidueMatrix M = detail::cols_or_empty(amb.D, TG).hcat(amb.R);
  SpanMembership in_TX(ctx, M);
  return std::all_of(Y.generators.begin(), Y.generators.end(),
                     [&](const ModuleElement& y) { return in_TX.contains(amb.embed(X.canonical(y))); });
}

struct LiftGrowthReport {
  int n = 0;
  std::vector<int> ks;
  std::vector<bool> holds;  // holds[i]: ι_{n,n+k}(x_n) = p^k x_{n+k}, k = ks[i]
  bool all() const { return std::all_of(holds.begin(), holds.end(), [](bool b) { return b; }); }
};

inline LiftGrowthReport check_lift_growth(const Tower& tw, const ModuleElement& x, int n) {
  LiftGrowthReport r;
  r.n = n;
  const Vec xn = tw.element_at(x, n);
  for (int m = n + 1; m <= tw.n_max; ++m) {
    const FinitePGroup& G = tw.group(m);
    Vec lhs = tw.lift(n, m).apply(xn);
    u64 pk = 1;
    for (int i = n; i < m; ++i) pk *= tw.module.ctx().p();
    Vec rhs = G.scale(tw.element_at(x, m), pk);
    r.ks.push_back(m - n);
    r.holds.push_back(lhs == rhs);
  }
  return r;
}

/// N/ι transition data between X_n and X_{n+1}.
inline TransitionReport check_transition_at(const Tower& tw, int n, u64 cap = 100000, u64 samples = 10000,
                                            u64 seed = 1) {
  return check_transition_lemma(tw.group(n), tw.group(n + 1), tw.norm_map(n), tw.lift_map(n), cap, samples, seed);
}

/// Least level n0 from which sexp(L_n) ≥ p^4 and p-rk(L_n) is constant on the computed range.
inline std::optional<int> kstab_index(const Tower& tw) {
  const SubmoduleSpec Lspec{tw.module.l_generators()};
  std::vector<FinitePGroup> Ls;
  for (int n = tw.n_min; n <= tw.n_max; ++n) Ls.push_back(image_subgroup(tw, n, Lspec).group());
  std::optional<int> best;
  for (int n = tw.n_max; n >= tw.n_min; --n) {
    const auto& G = Ls[static_cast<std::size_t>(n - tw.n_min)];
    if (G.is_trivial() || G.subexponent_exp() < 4) break;
    if (n < tw.n_max && G.p_rank() != Ls[static_cast<std::size_t>(n + 1 - tw.n_min)].p_rank()) break;
    best = n;
  }
  return best;
}

struct DownReport {
  int n = 0, n0 = 0;
  bool socle_in_lift = false;     // L_{n+2}[p^2] ⊆ ι_{n,n+2}(L_n)
  bool omega_kills_lambda = false;  // ω_n ω_{n0} x_{n+1} = 0 for the λ-generators x
};

inline DownReport check_down(const Tower& tw, int n, int n0) {
  require(n + 2 <= tw.n_max, ErrorCode::InvalidArgument, "down check needs level n+2");
  const auto& ctx = tw.module.ctx();
  DownReport r;
  r.n = n;
  r.n0 = n0;
  const SubmoduleSpec Lspec{tw.module.l_generators()};
  SubgroupView Ln = image_subgroup(tw, n, Lspec), Ln2 = image_subgroup(tw, n + 2, Lspec);
  const FinitePGroup& G2 = tw.group(n + 2);
  const PGroupHom iota = tw.lift(n, n + 2);
  std::vector<Vec> img;
  for (const auto& g : Ln.generators()) img.push_back(iota.apply(g));
  SubgroupView I(G2, img);
  // L_{n+2}[p^2] is the kernel of p^2 restricted to L_{n+2}.
  const FinitePGroup& LG = Ln2.group();
  PGroupHom p2(LG, LG, [&] {
    ResidueMatrix m(LG.rank(), LG.rank());
    for (std::size_t i = 0; i < LG.rank(); ++i) m(i, i) = ctx.p() * ctx.p();
    return m;
  }());
  r.socle_in_lift = true;
  for (const auto& z : kernel_generators(p2)) {
    Vec v = G2.zero();
    for (std::size_t i = 0; i < z.size(); ++i) v = G2.add(v, G2.scale(Ln2.generator(i), z[i]));
    if (!I.contains(v)) r.socle_in_lift = false;
  }
  const Level& L1 = tw.level(n + 1);
  const LambdaElt op = omega(ctx, n, tw.degree_cap) * omega(ctx, n0, tw.degree_cap);
  const ResidueMatrix opm = induced_operator(*L1.sq, L1.amb.operator_matrix(op));
  const PGroupHom opg(L1.group, L1.group, opm);
  r.omega_kills_lambda = true;
  for (const auto& x : tw.module.l_generators())
    if (!vec_is_zero(opg.apply(tw.element_at(x, n + 1)))) r.omega_kills_lambda = false;
  return r;
}

}  // namespace iwlab
