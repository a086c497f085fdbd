#pragma once

// Finite abelian p-groups ⊕ Z/p^{a_i} in invariant-factor form and their homomorphisms.

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "iwlab/errors.hpp"
#include "iwlab/matrix.hpp"
#include "iwlab/padic.hpp"

namespace iwlab {

class FinitePGroup {
 public:
  /// Factors are sorted nonincreasing; zero exponents are dropped.
  FinitePGroup(const PrimeContext& ctx, std::vector<int> factors) : ctx_(ctx), a_(std::move(factors)) {
    for (int a : a_) require(a >= 0, ErrorCode::InvalidArgument, "negative exponent in group factors");
    a_.erase(std::remove(a_.begin(), a_.end(), 0), a_.end());
    std::sort(a_.begin(), a_.end(), std::greater<>());
  }
  static FinitePGroup trivial(const PrimeContext& ctx) { return FinitePGroup(ctx, {}); }

  const PrimeContext& ctx() const noexcept { return ctx_; }
  u64 p() const noexcept { return ctx_.p(); }
  const std::vector<int>& factors() const noexcept { return a_; }
  std::size_t rank() const noexcept { return a_.size(); }
  int p_rank() const noexcept { return static_cast<int>(a_.size()); }
  int exponent_exp() const noexcept { return a_.empty() ? 0 : a_.front(); }
  int subexponent_exp() const noexcept { return a_.empty() ? 0 : a_.back(); }
  int order_exp() const noexcept { return std::accumulate(a_.begin(), a_.end(), 0); }
  bool is_trivial() const noexcept { return a_.empty(); }

  /// Precision at which all computations in this group are exact.
  PrimeContext working_ctx(int extra_exp = 0) const {
    return PrimeContext(p(), std::max(exponent_exp(), extra_exp) + 2);
  }
  u64 modulus(std::size_t i) const { return pow_u(a_[i]); }
  u64 pow_u(int e) const {
    u64 r = 1;
    for (int i = 0; i < e; ++i) r *= p();
    return r;
  }

  Vec reduce(Vec x) const {
    require(x.size() == a_.size(), ErrorCode::InvalidArgument, "coordinate count differs from group rank");
    for (std::size_t i = 0; i < x.size(); ++i) x[i] %= modulus(i);
    return x;
  }
  Vec zero() const { return Vec(a_.size(), 0); }
  Vec add(const Vec& x, const Vec& y) const {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = (x[i] + y[i]) % modulus(i);
    return r;
  }
  Vec scale(const Vec& x, u64 c) const {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      r[i] = static_cast<u64>((static_cast<u128>(x[i]) * (c % modulus(i))) % modulus(i));
    return r;
  }
  Vec neg(const Vec& x) const {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] == 0 ? 0 : modulus(i) - x[i];
    return r;
  }

  /// log_p of the order of x.
  int order_exp_of(const Vec& x) const {
    int k = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      u64 v = x[i] % modulus(i);
      if (v == 0) continue;
      int val = 0;
      while (v % p() == 0) { v /= p(); ++val; }
      k = std::max(k, a_[i] - val);
    }
    return k;
  }

  /// diag(p^{a_i}) over the given precision.
  ResidueMatrix relations(const PrimeContext& w) const {
    ResidueMatrix R(a_.size(), a_.size());
    for (std::size_t i = 0; i < a_.size(); ++i) R(i, i) = w.p_power(a_[i]);
    return R;
  }

  /// Calls fn on every element in lexicographic coordinate order.
  template <class Fn>
  void for_each_element(Fn&& fn) const {
    Vec x(a_.size(), 0);
    while (true) {
      fn(static_cast<const Vec&>(x));
      std::size_t i = 0;
      for (; i < x.size(); ++i) {
        if (++x[i] < modulus(i)) break;
        x[i] = 0;
      }
      if (i == x.size()) return;
    }
  }

  friend bool operator==(const FinitePGroup& x, const FinitePGroup& y) { return x.p() == y.p() && x.a_ == y.a_; }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < a_.size(); ++i) s += (i ? "," : "") + std::to_string(a_[i]);
    return s + "]";
  }

 private:
  PrimeContext ctx_;
  std::vector<int> a_;
};

struct GroupElement {
  FinitePGroup group;
  Vec coords;

  GroupElement(FinitePGroup g, Vec c) : group(std::move(g)), coords(group.reduce(std::move(c))) {}
};

struct GroupInvariants {
  int p_rank = 0;
  u64 exponent = 1;
  u64 subexponent = 1;
  int order_exponent = 0;
};

inline GroupInvariants group_invariants(const FinitePGroup& G) {
  return {G.p_rank(), G.pow_u(G.exponent_exp()), G.pow_u(G.subexponent_exp()), G.order_exp()};
}

/// Minimal p^k with p^k x = 0.
inline u64 element_order(const GroupElement& x) { return x.group.pow_u(x.group.order_exp_of(x.coords)); }

/// Invariant factors of (Z/p^K)^rank / span(columns of relations).
inline FinitePGroup smith_normal_form(const PrimeContext& ctx, const ResidueMatrix& relations, std::size_t rank) {
  Subquotient q(ctx, rank, relations, std::nullopt, ResidueMatrix(rank, 0));
  return FinitePGroup(ctx, q.exponents());
}

class PGroupHom {
 public:
  /// Column j is the image of domain generator j in codomain coordinates.
  PGroupHom(FinitePGroup domain, FinitePGroup codomain, ResidueMatrix matrix)
      : dom_(std::move(domain)), cod_(std::move(codomain)), m_(std::move(matrix)) {
    require(m_.rows() == cod_.rank() && m_.cols() == dom_.rank(), ErrorCode::InvalidArgument,
            "hom matrix shape must be codomain rank x domain rank");
    for (std::size_t i = 0; i < m_.rows(); ++i)
      for (std::size_t j = 0; j < m_.cols(); ++j) {
        m_(i, j) %= cod_.modulus(i);
        u64 v = m_(i, j);
        if (v == 0) continue;
        int val = 0;
        while (v % cod_.p() == 0) { v /= cod_.p(); ++val; }
        require(val + dom_.factors()[j] >= cod_.factors()[i], ErrorCode::InvalidArgument,
                "hom is not well defined on generator " + std::to_string(j));
      }
  }

  const FinitePGroup& domain() const noexcept { return dom_; }
  const FinitePGroup& codomain() const noexcept { return cod_; }
  const ResidueMatrix& matrix() const noexcept { return m_; }

  Vec apply(const Vec& x) const {
    Vec y(cod_.rank(), 0);
    for (std::size_t i = 0; i < cod_.rank(); ++i) {
      u64 mod = cod_.modulus(i);
      u128 s = 0;
      for (std::size_t j = 0; j < dom_.rank(); ++j) s = (s + static_cast<u128>(m_(i, j)) * (x[j] % mod)) % mod;
      y[i] = static_cast<u64>(s);
    }
    return y;
  }
  GroupElement apply(const GroupElement& x) const { return GroupElement(cod_, apply(x.coords)); }

  /// this ∘ other
  PGroupHom compose(const PGroupHom& other) const {
    require(other.cod_ == dom_, ErrorCode::InvalidArgument, "composition of incompatible homs");
    ResidueMatrix c(cod_.rank(), other.dom_.rank());
    for (std::size_t j = 0; j < other.dom_.rank(); ++j) {
      Vec y = apply(other.apply(unit_vec(other.dom_.rank(), j)));
      for (std::size_t i = 0; i < y.size(); ++i) c(i, j) = y[i];
    }
    return PGroupHom(other.dom_, cod_, c);
  }

  PGroupHom operator+(const PGroupHom& o) const {
    ResidueMatrix c(m_.rows(), m_.cols());
    for (std::size_t i = 0; i < m_.rows(); ++i)
      for (std::size_t j = 0; j < m_.cols(); ++j) c(i, j) = (m_(i, j) + o.m_(i, j)) % cod_.modulus(i);
    return PGroupHom(dom_, cod_, c);
  }

  static PGroupHom identity(const FinitePGroup& G) { return PGroupHom(G, G, ResidueMatrix::identity(G.rank())); }
  static PGroupHom scalar(const FinitePGroup& G, u64 c) {
    ResidueMatrix m(G.rank(), G.rank());
    for (std::size_t i = 0; i < G.rank(); ++i) m(i, i) = c % G.modulus(i);
    return PGroupHom(G, G, m);
  }

  static Vec unit_vec(std::size_t n, std::size_t j) {
    Vec e(n, 0);
    e[j] = 1;
    return e;
  }

  friend bool operator==(const PGroupHom& a, const PGroupHom& b) {
    return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.m_ == b.m_;
  }

 private:
  FinitePGroup dom_, cod_;
  ResidueMatrix m_;
};

/// A subgroup (or subquotient) of a finite p-group with coordinates.
class SubgroupView {
 public:
  /// The subquotient <S> / (<S> ∩ <U>) of G.
  SubgroupView(const FinitePGroup& G, const std::vector<Vec>& S, const std::vector<Vec>& U = {})
      : ambient_(G), w_(G.working_ctx()), sq_(make(G, w_, S, U)), group_(G.ctx(), sq_.exponents()) {}

  const FinitePGroup& ambient() const noexcept { return ambient_; }
  const FinitePGroup& group() const noexcept { return group_; }

  bool contains(const Vec& x) const { return sq_.contains(x); }
  std::optional<Vec> coordinates(const Vec& x) const { return sq_.classify(x); }
  /// Representative in the ambient group of invariant-factor generator i.
  Vec generator(std::size_t i) const { return ambient_.reduce(sq_.section(i)); }
  std::vector<Vec> generators() const {
    std::vector<Vec> out;
    for (std::size_t i = 0; i < group_.rank(); ++i) out.push_back(generator(i));
    return out;
  }

 private:
  static Subquotient make(const FinitePGroup& G, const PrimeContext& w, const std::vector<Vec>& S,
                          const std::vector<Vec>& U) {
    const std::size_t r = G.rank();
    ResidueMatrix Sm = S.empty() ? ResidueMatrix(r, 0) : ResidueMatrix::from_columns(r, S);
    ResidueMatrix Um = U.empty() ? ResidueMatrix(r, 0) : ResidueMatrix::from_columns(r, U);
    return Subquotient(w, r, G.relations(w), Sm, Um);
  }

  FinitePGroup ambient_;
  PrimeContext w_;
  Subquotient sq_;
  FinitePGroup group_;
};

inline FinitePGroup subgroup(const FinitePGroup& G, const std::vector<Vec>& gens) { return SubgroupView(G, gens).group(); }

/// G / <gens>
inline FinitePGroup quotient(const FinitePGroup& G, const std::vector<Vec>& gens) {
  const PrimeContext w = G.working_ctx();
  ResidueMatrix R = G.relations(w);
  if (!gens.empty()) R = R.hcat(ResidueMatrix::from_columns(G.rank(), gens));
  return FinitePGroup(G.ctx(), Subquotient(w, G.rank(), R, std::nullopt, ResidueMatrix(G.rank(), 0)).exponents());
}

inline std::vector<Vec> image_generators(const PGroupHom& h) { return h.matrix().columns(); }

inline FinitePGroup image(const PGroupHom& h) { return subgroup(h.codomain(), image_generators(h)); }

/// Generators (domain coordinates) of ker h.
inline std::vector<Vec> kernel_generators(const PGroupHom& h) {
  const auto& A = h.domain();
  const auto& B = h.codomain();
  const PrimeContext w = PrimeContext(A.p(), std::max(A.exponent_exp(), B.exponent_exp()) + 2);
  ResidueMatrix M = h.matrix().hcat(B.relations(w));
  if (M.rows() == 0) {
    std::vector<Vec> all;
    for (std::size_t j = 0; j < A.rank(); ++j) all.push_back(PGroupHom::unit_vec(A.rank(), j));
    return all;
  }
  SmithForm sf = smith(w, M, false, A.rank());
  std::vector<Vec> out;
  for (auto& z : smith_kernel(w, sf)) {
    Vec r = A.reduce(z);
    if (!vec_is_zero(r)) out.push_back(std::move(r));
  }
  return out;
}

inline FinitePGroup kernel(const PGroupHom& h) { return subgroup(h.domain(), kernel_generators(h)); }

inline bool is_surjective(const PGroupHom& h) { return image(h).order_exp() == h.codomain().order_exp(); }

/// X[p]
inline std::vector<Vec> socle_generators(const FinitePGroup& G) {
  std::vector<Vec> out;
  for (std::size_t i = 0; i < G.rank(); ++i) {
    Vec e(G.rank(), 0);
    e[i] = G.pow_u(G.factors()[i] - 1);
    out.push_back(e);
  }
  return out;
}

/// pX
inline std::vector<Vec> p_multiple_generators(const FinitePGroup& G) {
  std::vector<Vec> out;
  for (std::size_t i = 0; i < G.rank(); ++i) {
    Vec e(G.rank(), 0);
    e[i] = G.p() % G.modulus(i);
    out.push_back(e);
  }
  return out;
}

struct TransitionReport {
  bool n_surjective = false;
  bool equal_p_ranks = false;
  bool order_ratio = false;
  bool n_iota_is_p = false;
  bool hypotheses_hold = false;

  bool conclusion_A = false;

  bool sexp_above_p = false;
  bool image_equals_pB = false;
  bool socle_equals_ker_N = false;
  bool ker_N_in_image = false;
  bool rank_preserving = false;
  bool order_identity = false;
  bool conclusion_B = false;

  bool exhaustive = false;
  std::size_t elements_checked = 0;
  std::optional<Vec> counterexample;
};

/// Checks the hypotheses and conclusions for N: B -> A, ι: A -> B.
/// The order identity ord(x) = p·ord(ι(Nx)) is tested on nonzero x, over all of B when
/// |B| <= enumeration_cap and otherwise on `samples` random elements.
inline TransitionReport check_transition_lemma(const FinitePGroup& A, const FinitePGroup& B, const PGroupHom& N,
                                               const PGroupHom& iota, u64 enumeration_cap = 100000,
                                               std::size_t samples = 10000, u64 seed = 1) {
  require(N.domain() == B && N.codomain() == A && iota.domain() == A && iota.codomain() == B,
          ErrorCode::InvalidArgument, "N must map B to A and iota A to B");
  TransitionReport rep;
  rep.n_surjective = is_surjective(N);
  rep.equal_p_ranks = A.p_rank() == B.p_rank();
  rep.order_ratio = B.order_exp() - A.order_exp() == B.p_rank();
  rep.n_iota_is_p = N.compose(iota) == PGroupHom::scalar(A, A.p());
  rep.hypotheses_hold = rep.n_surjective && rep.equal_p_ranks && rep.order_ratio && rep.n_iota_is_p;

  const SubgroupView pB(B, p_multiple_generators(B));
  const auto iota_gens = image_generators(iota);
  rep.conclusion_A = std::all_of(iota_gens.begin(), iota_gens.end(), [&](const Vec& v) { return pB.contains(v); });

  rep.sexp_above_p = A.subexponent_exp() > 1;
  if (!rep.sexp_above_p) return rep;

  const SubgroupView iotaA(B, iota_gens);
  rep.image_equals_pB = rep.conclusion_A && iotaA.group().order_exp() == pB.group().order_exp();
  const auto kerN = kernel_generators(N);
  const int kerN_order = subgroup(B, kerN).order_exp();
  const bool ker_killed_by_p =
      std::all_of(kerN.begin(), kerN.end(), [&](const Vec& v) { return B.order_exp_of(v) <= 1; });
  rep.socle_equals_ker_N = ker_killed_by_p && kerN_order == B.p_rank();
  rep.ker_N_in_image = std::all_of(kerN.begin(), kerN.end(), [&](const Vec& v) { return iotaA.contains(v); });
  rep.rank_preserving = iotaA.group().p_rank() == A.p_rank();

  const PGroupHom nu = iota.compose(N);
  auto check = [&](const Vec& x) {
    if (rep.counterexample) return;
    int ox = B.order_exp_of(x);
    if (ox == 0) return;
    ++rep.elements_checked;
    if (ox != B.order_exp_of(nu.apply(x)) + 1) rep.counterexample = x;
  };
  bool small = true;
  u64 size = 1;
  for (int e = 0; e < B.order_exp() && small; ++e) {
    size *= B.p();
    small = size <= enumeration_cap;
  }
  if (small) {
    rep.exhaustive = true;
    B.for_each_element(check);
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
      Vec x(B.rank());
      for (std::size_t i = 0; i < B.rank(); ++i) x[i] = rng() % B.modulus(i);
      check(x);
    }
  }
  rep.order_identity = !rep.counterexample.has_value();
  rep.conclusion_B = rep.image_equals_pB && rep.socle_equals_ker_N && rep.ker_N_in_image && rep.rank_preserving &&
                     rep.order_identity;
  return rep;
}

/// The standard pair for A = ⊕Z/p^{a_i}, B = ⊕Z/p^{a_i+1}: N reduces, ι multiplies by p.
struct TransitionPair {
  FinitePGroup A, B;
  PGroupHom N, iota;
};

inline TransitionPair standard_transition_pair(const PrimeContext& ctx, const std::vector<int>& a) {
  std::vector<int> b(a);
  for (auto& x : b) ++x;
  FinitePGroup A(ctx, a), B(ctx, b);
  ResidueMatrix n = ResidueMatrix::identity(A.rank());
  ResidueMatrix i(B.rank(), A.rank());
  for (std::size_t k = 0; k < A.rank(); ++k) i(k, k) = ctx.p();
  return {A, B, PGroupHom(B, A, n), PGroupHom(A, B, i)};
}

struct Automorphism {
  PGroupHom fwd, inv;
};

/// Random automorphism as a product of unit scalings and transvections e_j -> e_j + c·p^k e_i.
inline Automorphism random_automorphism(const FinitePGroup& G, std::mt19937_64& rng, int steps = 8) {
  PGroupHom f = PGroupHom::identity(G), g = PGroupHom::identity(G);
  const std::size_t r = G.rank();
  if (r == 0) return {f, g};
  for (int s = 0; s < steps; ++s) {
    ResidueMatrix e = ResidueMatrix::identity(r), einv = ResidueMatrix::identity(r);
    std::size_t i = rng() % r, j = rng() % r;
    if (i == j || rng() % 3 == 0) {
      u64 u;
      do u = rng() % G.modulus(i);
      while (u % G.p() == 0);
      e(i, i) = u;
      einv(i, i) = PrimeContext(G.p(), G.factors()[i]).inverse(u);
    } else {
      int k = std::max(0, G.factors()[i] - G.factors()[j]);
      u64 c = (rng() % G.modulus(i)) * G.pow_u(k) % G.modulus(i);
      e(i, j) = c;
      einv(i, j) = c == 0 ? 0 : G.modulus(i) - c;
    }
    PGroupHom E(G, G, e), Einv(G, G, einv);
    f = E.compose(f);
    g = g.compose(Einv);
  }
  return {f, g};
}

/// Standard pair conjugated by random automorphisms of A and B, with ι optionally
/// perturbed by a random map A -> ker N.
inline TransitionPair random_transition_pair(const PrimeContext& ctx, const std::vector<int>& a, std::mt19937_64& rng,
                                             bool perturb = true) {
  TransitionPair std_pair = standard_transition_pair(ctx, a);
  const auto& A = std_pair.A;
  const auto& B = std_pair.B;
  Automorphism alpha = random_automorphism(A, rng), beta = random_automorphism(B, rng);
  PGroupHom N = alpha.fwd.compose(std_pair.N).compose(beta.inv);
  PGroupHom iota = beta.fwd.compose(std_pair.iota).compose(alpha.inv);
  if (perturb) {
    auto ker = kernel_generators(N);
    ResidueMatrix k(B.rank(), A.rank());
    for (std::size_t j = 0; j < A.rank(); ++j) {
      Vec acc = B.zero();
      for (const auto& v : ker) acc = B.add(acc, B.scale(v, rng() % B.p()));
      for (std::size_t i = 0; i < B.rank(); ++i) k(i, j) = acc[i];
    }
    iota = iota + PGroupHom(A, B, k);
  }
  return {A, B, N, iota};
}

}  // namespace iwlab
