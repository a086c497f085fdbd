#pragma once

// Stabilization criteria on consecutive tower levels, the per-submodule stability
// indices, and the visibility index.

#include <optional>
#include <string>
#include <vector>

#include "iwlab/errors.hpp"
#include "iwlab/module.hpp"
#include "iwlab/pgroup.hpp"
#include "iwlab/tower.hpp"

namespace iwlab {

enum class IdealChoice { Maximal, P, T };

struct StabilizationReport {
  std::optional<int> criterion1_level;  // X_n ≅ X_{n+1} via the norm map
  std::optional<int> criterion2_level;  // p-rk(X_n) = p-rk(X_{n+1}) > 0
  std::optional<int> criterion3_level;  // V_n ≅ V_{n+1} ≠ 0
  bool X_finite = false, mu_zero = false, H_stable = false;
  // Least level from which the image of F, the p-rank of L, V_n, and the image of M
  // stay constant on every later computed level.
  std::optional<int> f_index, l_index, h_index, m_index;
  std::optional<int> stabilization_index;
  std::optional<int> visibility_index;  // of A itself w.r.t. the maximal ideal
};

namespace detail {

/// Least n < top with value(n) == value(m) for every computed m ≥ n.
template <class T>
std::optional<int> stable_from(const std::vector<T>& vals, int n_min) {
  if (vals.size() < 2) return std::nullopt;
  std::size_t i = vals.size() - 1;
  while (i > 0 && vals[i - 1] == vals.back()) --i;
  if (i == vals.size() - 1) return std::nullopt;
  return n_min + static_cast<int>(i);
}

}  // namespace detail

/// Visibility of C with respect to I: least computed k such that every x ∈ C with x_k = 0
/// lies in I·C, tested on the images in the top level.
inline int visibility_index(const Tower& tw, const SubmoduleSpec& C, IdealChoice I) {
  const int top = tw.n_max;
  const Level& Lt = tw.level(top);
  std::vector<Vec> cgens;
  for (const auto& x : C.generators) cgens.push_back(tw.element_at(x, top));
  if (std::all_of(cgens.begin(), cgens.end(), [](const Vec& v) { return vec_is_zero(v); })) return tw.n_min;
  const std::vector<Vec> Cspan = lambda_span(Lt, cgens);
  SubgroupView Ctop(Lt.group, Cspan);

  const PGroupHom T = Lt.t_hom();
  std::vector<Vec> icg;
  for (const auto& v : Cspan) {
    if (I != IdealChoice::T) icg.push_back(Lt.group.scale(v, tw.module.ctx().p()));
    if (I != IdealChoice::P) icg.push_back(T.apply(v));
  }
  SubgroupView IC(Lt.group, icg);

  const FinitePGroup& G = Ctop.group();
  for (int k = tw.n_min; k <= top; ++k) {
    const PGroupHom proj = tw.projection(top, k);
    const FinitePGroup& Gk = tw.group(k);
    ResidueMatrix m(Gk.rank(), G.rank());
    for (std::size_t j = 0; j < G.rank(); ++j) {
      Vec y = proj.apply(Ctop.generator(j));
      for (std::size_t i = 0; i < y.size(); ++i) m(i, j) = y[i];
    }
    const PGroupHom restricted(G, Gk, m);
    bool ok = true;
    for (const auto& z : kernel_generators(restricted)) {
      Vec v = Lt.group.zero();
      for (std::size_t i = 0; i < z.size(); ++i) v = Lt.group.add(v, Lt.group.scale(Ctop.generator(i), z[i]));
      if (!IC.contains(v)) {
        ok = false;
        break;
      }
    }
    if (ok) return k;
  }
  fail(ErrorCode::NotVisibleWithinRange, "no computed level up to " + std::to_string(top) + " sees C outside IC");
}

/// Scans consecutive levels bottom-up; every fired criterion is then checked on all later levels.
inline StabilizationReport detect(const Tower& tw) {
  require(tw.n_max > tw.n_min, ErrorCode::InvalidArgument, "stabilization needs at least two levels");
  StabilizationReport r;
  std::vector<FinitePGroup> V, Tker;
  for (const auto& L : tw.levels) {
    V.push_back(coinvariants(L));
    Tker.push_back(t_kernel(L));
  }
  auto idx = [&](int n) { return static_cast<std::size_t>(n - tw.n_min); };
  for (int n = tw.n_min; n < tw.n_max; ++n) {
    const auto& Xn = tw.group(n);
    const auto& Xn1 = tw.group(n + 1);
    if (!r.criterion1_level && Xn == Xn1 && is_surjective(tw.norm_map(n))) r.criterion1_level = n;
    if (!r.criterion2_level && Xn.p_rank() == Xn1.p_rank() && Xn.p_rank() > 0) r.criterion2_level = n;
    if (!r.criterion3_level && V[idx(n)] == V[idx(n + 1)] && !V[idx(n)].is_trivial()) r.criterion3_level = n;
  }
  if (auto n = r.criterion1_level) {
    r.X_finite = true;
    for (int m = *n + 1; m <= tw.n_max; ++m)
      if (!(tw.group(m) == tw.group(*n)))
        fail(ErrorCode::PostFireViolation, "criterion 1 fired at " + std::to_string(*n) + " but X_" +
                                               std::to_string(m) + " = " + tw.group(m).to_string());
  }
  if (auto n = r.criterion2_level) {
    r.mu_zero = true;
    for (int m = *n + 1; m <= tw.n_max; ++m)
      if (tw.group(m).p_rank() != tw.group(*n).p_rank())
        fail(ErrorCode::PostFireViolation, "criterion 2 fired at " + std::to_string(*n) + " but p-rank at " +
                                               std::to_string(m) + " is " + std::to_string(tw.group(m).p_rank()));
  }
  if (auto n = r.criterion3_level) {
    r.H_stable = true;
    for (int m = *n + 1; m <= tw.n_max; ++m)
      if (!(V[idx(m)] == V[idx(*n)]) || Tker[idx(m)].order_exp() != V[idx(m)].order_exp())
        fail(ErrorCode::PostFireViolation, "criterion 3 fired at " + std::to_string(*n) +
                                               " but V_" + std::to_string(m) + " = " + V[idx(m)].to_string());
  }

  const SubmoduleSpec F{tw.module.f_generators()}, L{tw.module.l_generators()}, M{tw.module.m_generators()};
  std::vector<FinitePGroup> Fs, Ms;
  std::vector<int> Lranks;
  for (int n = tw.n_min; n <= tw.n_max; ++n) {
    Fs.push_back(image_subgroup(tw, n, F).group());
    Ms.push_back(image_subgroup(tw, n, M).group());
    Lranks.push_back(image_subgroup(tw, n, L).group().p_rank());
  }
  r.f_index = detail::stable_from(Fs, tw.n_min);
  r.l_index = detail::stable_from(Lranks, tw.n_min);
  r.h_index = detail::stable_from(V, tw.n_min);
  r.m_index = detail::stable_from(Ms, tw.n_min);
  if (r.f_index && r.l_index && r.h_index && r.m_index)
    r.stabilization_index = std::max({*r.f_index, *r.l_index, *r.h_index, *r.m_index});
  try {
    r.visibility_index = visibility_index(tw, SubmoduleSpec{tw.module.generators()}, IdealChoice::Maximal);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotVisibleWithinRange) throw;
  }
  return r;
}

}  // namespace iwlab
