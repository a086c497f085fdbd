#pragma once

// Λ-modules A ⊆ P = ℰ ⊕ C with ℰ = ⊕Λ/(p^{e_i}) ⊕ ⊕Λ/(f_j^{k_j}) elementary and
// C = ⊕Λ/(p^{a_l}, h_l) finite. A is generated by explicit glue elements together with
// J·P, J = (p^c, T^c); c = 0 gives A = P. Membership questions about A and its
// submodules L, M, F, D are decided in the finite module Q = P/JP.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "iwlab/errors.hpp"
#include "iwlab/lambda.hpp"
#include "iwlab/matrix.hpp"
#include "iwlab/pgroup.hpp"

namespace iwlab {

enum class FactorKind { Mu, Lambda, Finite };

struct Factor {
  FactorKind kind;
  int exp;         // e for Λ/(p^e), a for Λ/(p^a, h)
  LambdaElt base;  // f for Λ/(f^k), h for Λ/(p^a, h), 1 otherwise
  int mult;        // k for Λ/(f^k)
  LambdaElt poly;  // f^k, h, or 1
};

struct ModuleElement {
  std::vector<LambdaElt> comps;

  friend bool operator==(const ModuleElement& a, const ModuleElement& b) { return a.comps == b.comps; }
};

/// Generators of a Λ-submodule (Y in towers is read as the Z_p-span of its generators).
struct SubmoduleSpec {
  std::vector<ModuleElement> generators;
};

/// Finite presentation of P / (π·J·P) on the residue bases of the factors.
struct Ambient {
  PrimeContext ctx;
  std::vector<std::size_t> offset, dim;
  std::vector<LambdaElt> modulus;
  std::vector<int> coeff_exp;  // coefficient exponent bound per factor, 0 = none
  std::size_t D = 0;
  ResidueMatrix R;

  Vec embed(const ModuleElement& x) const {
    Vec v(D, 0);
    for (std::size_t f = 0; f < dim.size(); ++f) {
      if (dim[f] == 0) continue;
      LambdaElt r = reduce_mod(x.comps[f], modulus[f]);
      for (std::size_t i = 0; i < dim[f]; ++i) v[offset[f] + i] = r.coeff(i);
    }
    return v;
  }

  ModuleElement extract(const Vec& v) const {
    ModuleElement x;
    for (std::size_t f = 0; f < dim.size(); ++f) {
      std::vector<u64> c(v.begin() + static_cast<long>(offset[f]), v.begin() + static_cast<long>(offset[f] + dim[f]));
      LambdaElt e(ctx, std::move(c));
      x.comps.push_back(coeff_exp[f] ? e.mod_p_power(coeff_exp[f]) : e);
    }
    return x;
  }

  Vec multiply(const LambdaElt& lam, const Vec& v) const {
    Vec out(D, 0);
    for (std::size_t f = 0; f < dim.size(); ++f) {
      if (dim[f] == 0) continue;
      std::vector<u64> c(v.begin() + static_cast<long>(offset[f]), v.begin() + static_cast<long>(offset[f] + dim[f]));
      LambdaElt r = reduce_mod(LambdaElt(ctx, std::move(c)) * lam, modulus[f]);
      for (std::size_t i = 0; i < dim[f]; ++i) out[offset[f] + i] = r.coeff(i);
    }
    return out;
  }

  ResidueMatrix operator_matrix(const LambdaElt& lam) const {
    ResidueMatrix m(D, D);
    for (std::size_t j = 0; j < D; ++j) {
      Vec e(D, 0);
      e[j] = 1;
      Vec y = multiply(lam, e);
      for (std::size_t i = 0; i < D; ++i) m(i, j) = y[i];
    }
    return m;
  }

  /// x, Tx, ..., T^{D-1}x for each x: the Z_p-span of the result is the Λ-span.
  std::vector<Vec> t_closure(const std::vector<Vec>& gens) const {
    std::vector<Vec> out;
    const LambdaElt T = LambdaElt::T(ctx);
    for (const auto& g : gens) {
      Vec v = g;
      for (std::size_t j = 0; j < D && !vec_is_zero(v); ++j) {
        out.push_back(v);
        v = multiply(T, v);
      }
    }
    return out;
  }

  std::vector<Vec> block_basis(std::size_t f) const {
    std::vector<Vec> out;
    for (std::size_t i = 0; i < dim[f]; ++i) {
      Vec e(D, 0);
      e[offset[f] + i] = 1;
      out.push_back(e);
    }
    return out;
  }
};

enum class ElementType { Finite, Mu, Lambda, Indecomposed };

inline const char* element_type_name(ElementType t) {
  switch (t) {
    case ElementType::Finite: return "finite-type";
    case ElementType::Mu: return "mu-type";
    case ElementType::Lambda: return "lambda-type";
    case ElementType::Indecomposed: return "indecomposed-candidate";
  }
  return "unknown";
}

struct Classification {
  ElementType type;
  ModuleElement mu_part, lambda_part, finite_part;
  bool in_D = false;
};

struct LMFD {
  SubmoduleSpec L, M, F, D;
};

class GluedModule {
 public:
  struct LambdaSpec {
    LambdaElt f;
    int k = 1;
  };
  struct FiniteSpec {
    int a;
    LambdaElt h;
  };

  GluedModule(const PrimeContext& ctx, std::vector<int> mu, std::vector<LambdaSpec> lambda,
              std::vector<FiniteSpec> finite = {}, std::vector<ModuleElement> glue = {}, int conductor = 0)
      : ctx_(ctx), c_(conductor) {
    require(conductor >= 0, ErrorCode::InvalidArgument, "conductor must be nonnegative");
    const LambdaElt one = LambdaElt::one(ctx);
    for (int e : mu) {
      require(e >= 1, ErrorCode::InvalidArgument, "mu exponent must be >= 1");
      factors_.push_back({FactorKind::Mu, e, one, 1, one});
    }
    for (auto& l : lambda) {
      require(l.f.degree() >= 1 && l.f.is_distinguished(), ErrorCode::InvalidArgument,
              "lambda factor " + l.f.to_string() + " is not a nonconstant distinguished polynomial");
      require(l.k >= 1, ErrorCode::InvalidArgument, "multiplicity must be >= 1");
      factors_.push_back({FactorKind::Lambda, 0, l.f, l.k, l.f.pow(static_cast<u64>(l.k))});
    }
    for (auto& fi : finite) {
      require(fi.a >= 1, ErrorCode::InvalidArgument, "finite factor exponent must be >= 1");
      require(fi.h.degree() >= 1 && fi.h.is_distinguished(), ErrorCode::InvalidArgument,
              "finite factor polynomial must be nonconstant and distinguished");
      factors_.push_back({FactorKind::Finite, fi.a, fi.h, 1, fi.h});
    }
    for (auto& g : glue) glue_.push_back(canonical(g));
    build_quotient_data();
  }

  static GluedModule elementary(const PrimeContext& ctx, std::vector<int> mu, std::vector<LambdaSpec> lambda) {
    return GluedModule(ctx, std::move(mu), std::move(lambda));
  }

  const PrimeContext& ctx() const noexcept { return ctx_; }
  const std::vector<Factor>& factors() const noexcept { return factors_; }
  std::size_t size() const noexcept { return factors_.size(); }
  int conductor() const noexcept { return c_; }
  const std::vector<ModuleElement>& glue() const noexcept { return glue_; }
  /// A = P: no conductor ideal in play.
  bool is_full() const noexcept { return c_ == 0; }
  bool has_finite_part() const noexcept {
    return std::any_of(factors_.begin(), factors_.end(), [](const Factor& f) { return f.kind == FactorKind::Finite; });
  }

  ModuleElement canonical(const ModuleElement& x) const {
    require(x.comps.size() == factors_.size(), ErrorCode::InvalidArgument,
            "element has " + std::to_string(x.comps.size()) + " components, module has " +
                std::to_string(factors_.size()));
    ModuleElement y;
    for (std::size_t f = 0; f < factors_.size(); ++f) {
      const auto& F = factors_[f];
      LambdaElt c = x.comps[f].at_precision(ctx_);
      switch (F.kind) {
        case FactorKind::Mu: c = c.mod_p_power(F.exp); break;
        case FactorKind::Lambda: c = reduce_mod(c, F.poly); break;
        case FactorKind::Finite: c = reduce_mod(c, F.poly).mod_p_power(F.exp); break;
      }
      y.comps.push_back(std::move(c));
    }
    return y;
  }

  ModuleElement element(std::vector<LambdaElt> comps) const { return canonical(ModuleElement{std::move(comps)}); }
  ModuleElement zero() const { return ModuleElement{std::vector<LambdaElt>(factors_.size(), LambdaElt(ctx_))}; }
  ModuleElement generator(std::size_t f) const {
    ModuleElement x = zero();
    x.comps[f] = LambdaElt::one(ctx_);
    return canonical(x);
  }
  ModuleElement add(const ModuleElement& a, const ModuleElement& b) const {
    ModuleElement r = a;
    for (std::size_t f = 0; f < r.comps.size(); ++f) r.comps[f] += b.comps[f];
    return canonical(r);
  }
  ModuleElement sub(const ModuleElement& a, const ModuleElement& b) const {
    ModuleElement r = a;
    for (std::size_t f = 0; f < r.comps.size(); ++f) r.comps[f] -= b.comps[f];
    return canonical(r);
  }
  ModuleElement mul(const LambdaElt& lam, const ModuleElement& a) const {
    ModuleElement r = a;
    for (auto& c : r.comps) c = c * lam;
    return canonical(r);
  }
  ModuleElement scale(const ModuleElement& a, u64 k) const { return mul(LambdaElt::constant(ctx_, k), a); }

  bool is_zero(const ModuleElement& x) const {
    return std::all_of(x.comps.begin(), x.comps.end(), [](const LambdaElt& c) { return c.is_zero(); });
  }

  /// Ambient P/(π·J·P) with π monic.
  Ambient ambient(const LambdaElt& pi) const {
    require(pi.is_monic(), ErrorCode::InternalInvariant, "level modulus must be monic");
    Ambient amb{ctx_, {}, {}, {}, {}, 0, {}};
    amb.R = ResidueMatrix();
    std::vector<Vec> rel_local;
    std::vector<std::pair<std::size_t, Vec>> rels;  // (factor, local vector)
    const LambdaElt Tc = LambdaElt::monomial(ctx_, static_cast<std::size_t>(c_));
    const u64 pc = ctx_.p_power(c_);
    for (std::size_t f = 0; f < factors_.size(); ++f) {
      const auto& F = factors_[f];
      LambdaElt mod = F.kind == FactorKind::Mu ? pi * Tc : F.poly;
      const std::size_t d = static_cast<std::size_t>(mod.degree());
      amb.offset.push_back(amb.D);
      amb.dim.push_back(d);
      amb.modulus.push_back(mod);
      amb.coeff_exp.push_back(F.kind == FactorKind::Lambda ? 0 : F.exp);
      amb.D += d;
      auto local = [&](const LambdaElt& poly) {
        LambdaElt r = reduce_mod(poly, mod);
        Vec v(d, 0);
        for (std::size_t i = 0; i < d; ++i) v[i] = r.coeff(i);
        return v;
      };
      if (F.kind != FactorKind::Lambda)
        for (std::size_t i = 0; i < d; ++i) {
          Vec v(d, 0);
          v[i] = ctx_.p_power(F.exp);
          rels.emplace_back(f, v);
        }
      if (F.kind == FactorKind::Mu) {
        for (int a = 0; a < c_; ++a) rels.emplace_back(f, local((pi * LambdaElt::monomial(ctx_, a)).scaled(pc)));
      } else {
        for (std::size_t a = 0; a < d; ++a) {
          LambdaElt base = pi * LambdaElt::monomial(ctx_, a);
          rels.emplace_back(f, local(base.scaled(pc)));
          if (c_ > 0) rels.emplace_back(f, local(base * Tc));
        }
      }
    }
    amb.R = ResidueMatrix(amb.D, rels.size());
    for (std::size_t j = 0; j < rels.size(); ++j) {
      const auto& [f, v] = rels[j];
      for (std::size_t i = 0; i < v.size(); ++i) amb.R(amb.offset[f] + i, j) = v[i];
    }
    return amb;
  }

  /// Z_p-generators of the image of A in an ambient: T-closure of the glue plus J·P.
  std::vector<Vec> image_generators(const Ambient& amb) const {
    std::vector<Vec> glue_vecs;
    for (const auto& g : glue_) glue_vecs.push_back(amb.embed(g));
    std::vector<Vec> out = amb.t_closure(glue_vecs);
    const LambdaElt Tc = LambdaElt::monomial(ctx_, static_cast<std::size_t>(c_));
    for (std::size_t f = 0; f < factors_.size(); ++f)
      for (auto& b : amb.block_basis(f)) {
        if (c_ == 0) {
          out.push_back(b);
          continue;
        }
        out.push_back(vec_scale(ctx_, b, ctx_.p_power(c_)));
        out.push_back(amb.multiply(Tc, b));
      }
    return out;
  }

  /// Λ-generators of A.
  std::vector<ModuleElement> generators() const {
    std::vector<ModuleElement> out = glue_;
    for (std::size_t f = 0; f < factors_.size(); ++f) {
      if (c_ == 0) {
        out.push_back(generator(f));
        continue;
      }
      out.push_back(scale(generator(f), ctx_.p_power(c_)));
      out.push_back(mul(LambdaElt::monomial(ctx_, static_cast<std::size_t>(c_)), generator(f)));
    }
    return out;
  }

  /// The finite module Q = P/JP and the image W of A in it.
  const Ambient& Q() const noexcept { return q_; }
  const std::vector<Vec>& W_generators() const noexcept { return w_gens_; }
  const FinitePGroup& W_group() const noexcept { return w_group_; }

  bool contains(const ModuleElement& x) const { return in_A_->contains(q_.embed(canonical(x))); }

  /// Decomposable: x = y + z with y ∈ L, z ∈ M.
  bool in_D(const ModuleElement& x) const {
    ModuleElement lam = project(canonical(x), FactorKind::Lambda);
    return in_W_plus_C_->contains(q_.embed(lam));
  }
  bool in_L(const ModuleElement& x) const { return contains(x) && is_zero(project(canonical(x), FactorKind::Mu)); }
  bool in_M(const ModuleElement& x) const { return contains(x) && is_zero(project(canonical(x), FactorKind::Lambda)); }
  bool in_F(const ModuleElement& x) const { return in_L(x) && in_M(x); }

  /// Keeps only the components of the given kind.
  ModuleElement project(const ModuleElement& x, FactorKind kind) const {
    ModuleElement y = x;
    for (std::size_t f = 0; f < factors_.size(); ++f)
      if (factors_[f].kind != kind) y.comps[f] = LambdaElt(ctx_);
    return y;
  }

  /// log_p ord(x), or nullopt when Λ-torsion-free components make the order infinite.
  std::optional<int> order_exp(const ModuleElement& x0) const {
    ModuleElement x = canonical(x0);
    int k = 0;
    for (std::size_t f = 0; f < factors_.size(); ++f) {
      const auto& c = x.comps[f];
      if (c.is_zero()) continue;
      if (factors_[f].kind == FactorKind::Lambda) return std::nullopt;
      k = std::max(k, factors_[f].exp - c.content_valuation());
    }
    return k;
  }

  /// log_p of the exponent of M(A), the Z_p-torsion submodule.
  int exponent_bound() const { return b_; }

  std::vector<ModuleElement> lift_all(const std::vector<Vec>& qvecs, FactorKind drop1, std::optional<FactorKind> drop2) const {
    std::vector<ModuleElement> out;
    for (const auto& v : qvecs) {
      ModuleElement x = canonical(q_.extract(v));
      for (std::size_t f = 0; f < factors_.size(); ++f)
        if (factors_[f].kind == drop1 || (drop2 && factors_[f].kind == *drop2)) x.comps[f] = LambdaElt(ctx_);
      if (!is_zero(x)) out.push_back(std::move(x));
    }
    return out;
  }

  /// J·e_f generators of the factors of the given kinds.
  std::vector<ModuleElement> conductor_generators(std::initializer_list<FactorKind> kinds) const {
    std::vector<ModuleElement> out;
    for (std::size_t f = 0; f < factors_.size(); ++f) {
      if (std::find(kinds.begin(), kinds.end(), factors_[f].kind) == kinds.end()) continue;
      if (c_ == 0) {
        out.push_back(generator(f));
      } else {
        out.push_back(scale(generator(f), ctx_.p_power(c_)));
        out.push_back(mul(LambdaElt::monomial(ctx_, static_cast<std::size_t>(c_)), generator(f)));
      }
    }
    return out;
  }

  /// Q-vectors spanning W ∩ (the blocks of the given kinds).
  std::vector<Vec> w_intersect_blocks(std::initializer_list<FactorKind> kinds) const {
    std::vector<Vec> blocks;
    for (std::size_t f = 0; f < factors_.size(); ++f)
      if (std::find(kinds.begin(), kinds.end(), factors_[f].kind) != kinds.end())
        for (auto& b : q_.block_basis(f)) blocks.push_back(b);
    return intersect_spans(ctx_, q_.D, w_gens_, blocks, q_.R);
  }

 private:
  void build_quotient_data() {
    q_ = ambient(LambdaElt::one(ctx_));
    std::vector<Vec> glue_vecs;
    for (const auto& g : glue_) glue_vecs.push_back(q_.embed(g));
    w_gens_ = q_.t_closure(glue_vecs);
    if (q_.D > 0) {
      Subquotient amb(ctx_, q_.D, q_.R, std::nullopt, ResidueMatrix(q_.D, 0));
      (void)amb;  // throws when the precision cannot represent Q
    }
    {
      ResidueMatrix S = w_gens_.empty() ? ResidueMatrix(q_.D, 0) : ResidueMatrix::from_columns(q_.D, w_gens_);
      Subquotient w(ctx_, q_.D, q_.R, S, ResidueMatrix(q_.D, 0));
      w_group_ = FinitePGroup(ctx_, w.exponents());
      w_sections_ = w.sections();
    }
    ResidueMatrix WR = (w_gens_.empty() ? ResidueMatrix(q_.D, 0) : ResidueMatrix::from_columns(q_.D, w_gens_)).hcat(q_.R);
    in_A_.emplace(ctx_, WR);
    std::vector<Vec> cb;
    for (std::size_t f = 0; f < factors_.size(); ++f)
      if (factors_[f].kind == FactorKind::Finite)
        for (auto& b : q_.block_basis(f)) cb.push_back(b);
    ResidueMatrix WCR = cb.empty() ? WR : WR.hcat(ResidueMatrix::from_columns(q_.D, cb));
    in_W_plus_C_.emplace(ctx_, WCR);

    b_ = 0;
    for (std::size_t f = 0; f < factors_.size(); ++f)
      if (factors_[f].kind == FactorKind::Mu) b_ = std::max(b_, factors_[f].exp);
    for (const auto& g : m_generators())
      if (auto k = order_exp(g)) b_ = std::max(b_, *k);
  }

 public:
  /// Λ-generators of M(A) = A ∩ (ℰ_μ ⊕ C).
  std::vector<ModuleElement> m_generators() const {
    auto out = conductor_generators({FactorKind::Mu, FactorKind::Finite});
    auto lifts = lift_all(w_intersect_blocks({FactorKind::Mu, FactorKind::Finite}), FactorKind::Lambda, std::nullopt);
    out.insert(out.end(), lifts.begin(), lifts.end());
    return out;
  }
  /// Λ-generators of L(A) = A ∩ (ℰ_λ ⊕ C).
  std::vector<ModuleElement> l_generators() const {
    auto out = conductor_generators({FactorKind::Lambda, FactorKind::Finite});
    auto lifts = lift_all(w_intersect_blocks({FactorKind::Lambda, FactorKind::Finite}), FactorKind::Mu, std::nullopt);
    out.insert(out.end(), lifts.begin(), lifts.end());
    return out;
  }
  /// Λ-generators of F(A) = A ∩ C.
  std::vector<ModuleElement> f_generators() const {
    auto out = conductor_generators({FactorKind::Finite});
    auto lifts = lift_all(w_intersect_blocks({FactorKind::Finite}), FactorKind::Mu, FactorKind::Lambda);
    out.insert(out.end(), lifts.begin(), lifts.end());
    return out;
  }

  /// Ambient representative in Q of invariant-factor generator i of W.
  const std::vector<Vec>& W_sections() const noexcept { return w_sections_; }

 private:
  PrimeContext ctx_;
  int c_;
  std::vector<Factor> factors_;
  std::vector<ModuleElement> glue_;
  Ambient q_{ctx_, {}, {}, {}, {}, 0, {}};
  std::vector<Vec> w_gens_;
  FinitePGroup w_group_{ctx_, {}};
  std::vector<Vec> w_sections_;
  std::optional<SpanMembership> in_A_, in_W_plus_C_;
  int b_ = 0;
};

inline Classification classify_element(const GluedModule& A, const ModuleElement& x0) {
  ModuleElement x = A.canonical(x0);
  Classification c{ElementType::Finite, A.project(x, FactorKind::Mu), A.project(x, FactorKind::Lambda),
                   A.project(x, FactorKind::Finite), false};
  const bool mu = !A.is_zero(c.mu_part), lam = !A.is_zero(c.lambda_part);
  c.type = mu && lam ? ElementType::Indecomposed : mu ? ElementType::Mu : lam ? ElementType::Lambda : ElementType::Finite;
  c.in_D = A.in_D(x);
  return c;
}

inline LMFD submodules_LMFD(const GluedModule& A) {
  LMFD r;
  r.L.generators = A.l_generators();
  r.M.generators = A.m_generators();
  r.F.generators = A.f_generators();
  r.D.generators = r.L.generators;
  r.D.generators.insert(r.D.generators.end(), r.M.generators.begin(), r.M.generators.end());
  return r;
}

struct LDOrders {
  int ell = 0;
  int delta = 0;
};

/// ℓ(x) = min j with p^j x ∈ L and δ(x) = min k with p^k x ∈ D, searched up to the exponent bound.
inline LDOrders L_and_D_orders(const GluedModule& A, const ModuleElement& x0, std::optional<int> bound = std::nullopt) {
  ModuleElement x = A.canonical(x0);
  require(A.contains(x), ErrorCode::InvalidArgument, "element does not lie in the module");
  const int B = bound.value_or(A.exponent_bound());
  LDOrders r;
  bool found_l = false, found_d = false;
  ModuleElement y = x;
  for (int j = 0; j <= B && !(found_l && found_d); ++j) {
    if (!found_d && A.in_D(y)) { r.delta = j; found_d = true; }
    if (!found_l && A.in_L(y)) { r.ell = j; found_l = true; }
    y = A.scale(y, A.ctx().p());
  }
  require(found_l && found_d, ErrorCode::SearchExhausted,
          "p^k x not decomposed for k <= " + std::to_string(B));
  return r;
}

/// log_p of ess.ord(x) = ord(T^j x) for large j, for x of μ- or finite type.
inline int essential_order(const GluedModule& A, const ModuleElement& x0) {
  ModuleElement x = A.canonical(x0);
  require(A.is_zero(A.project(x, FactorKind::Lambda)), ErrorCode::InvalidArgument,
          "essential order needs an element of mu- or finite type");
  return *A.order_exp(A.project(x, FactorKind::Mu));
}

/// A polynomial G with G·A ⊆ M: the product of the λ-factor moduli f_j^{k_j}.
inline LambdaElt mu_annihilator_witness(const GluedModule& A) {
  LambdaElt G = LambdaElt::one(A.ctx());
  for (const auto& f : A.factors())
    if (f.kind == FactorKind::Lambda) G = G * f.poly;
  return G;
}

struct DecompositionReport {
  int B = 0;
  std::size_t elements_checked = 0;
  bool exhaustive = false;
  std::size_t counterexamples = 0;
  std::size_t maximal_ideal_failures = 0;
  std::size_t omega_failures = 0;
  std::optional<ModuleElement> first_counterexample;
  std::string first_failure;
};

/// Checks 𝔐^{2B} x ⊆ D and ω_B x ∈ D for x ranging over A modulo J·P (which lies in D),
/// so an exhaustive run over W decides the inclusion for all of A.
inline DecompositionReport check_decomposition_bound(const GluedModule& A, std::optional<int> bound = std::nullopt,
                                                     u64 enumeration_cap = 100000, u64 degree_cap = 0) {
  DecompositionReport rep;
  rep.B = bound.value_or(A.exponent_bound());
  const auto& ctx = A.ctx();
  const auto& Q = A.Q();
  const int B = rep.B;

  std::vector<std::pair<std::string, LambdaElt>> tests;
  for (int i = 0; i <= 2 * B; ++i)
    tests.emplace_back("p^" + std::to_string(i) + "*T^" + std::to_string(2 * B - i),
                       LambdaElt::monomial(ctx, static_cast<std::size_t>(2 * B - i), ctx.p_power(i)));
  tests.emplace_back("omega_" + std::to_string(B), omega(ctx, B, degree_cap));

  const FinitePGroup& W = A.W_group();
  u64 size = 1;
  bool small = true;
  for (int e = 0; e < W.order_exp() && small; ++e) {
    size *= W.p();
    small = size <= enumeration_cap;
  }
  require(small, ErrorCode::EnumerationCapExceeded,
          "W has more than " + std::to_string(enumeration_cap) + " elements");
  rep.exhaustive = true;
  const auto& sections = A.W_sections();
  W.for_each_element([&](const Vec& coords) {
    Vec v(Q.D, 0);
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (coords[i]) v = vec_add(ctx, std::move(v), vec_scale(ctx, sections[i], coords[i]));
    ModuleElement x = A.canonical(Q.extract(v));
    ++rep.elements_checked;
    bool bad = false;
    for (std::size_t t = 0; t < tests.size(); ++t) {
      if (A.in_D(A.mul(tests[t].second, x))) continue;
      bad = true;
      if (t + 1 == tests.size()) ++rep.omega_failures;
      else ++rep.maximal_ideal_failures;
      if (rep.first_failure.empty()) {
        rep.first_failure = tests[t].first;
        rep.first_counterexample = x;
      }
    }
    if (bad) ++rep.counterexamples;
  });
  return rep;
}

}  // namespace iwlab
