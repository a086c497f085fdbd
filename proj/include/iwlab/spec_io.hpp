#pragma once

// JSON module-spec files for the command line tool. Needs nlohmann/json on the include path.
//
//   {
//     "p": 3, "precision": 8, "degree_cap": 6561,
//     "mu_factors": [1, 2],
//     "lambda_factors": [[-3, 1], {"poly": [3, 0, 1], "multiplicity": 2}],
//     "finite_factors": [{"exp": 1, "poly": [0, 1]}],
//     "conductor": 0,
//     "glue": [[[1], [1, 1]]],
//     "Y": [[[0], [1]]],
//     "levels": [1, 5]
//   }
//
// Polynomials are coefficient lists, constant term first; entries may be negative and are
// read mod p^precision. An element lists one polynomial (or a bare integer) per factor in
// the order mu, lambda, finite.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "iwlab/errors.hpp"
#include "iwlab/lambda.hpp"
#include "iwlab/module.hpp"
#include "iwlab/padic.hpp"
#include "iwlab/pgroup.hpp"

namespace iwlab {

using Json = nlohmann::json;

/// Parse or validation failure, with the 1-based line where it was detected (0 if unknown).
class SpecError : public std::runtime_error {
 public:
  SpecError(int line, const std::string& what) : std::runtime_error(what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct SpecDocument {
  std::string text;
  Json root;

  int line_of(const std::string& key) const {
    const std::string needle = "\"" + key + "\"";
    const auto pos = text.find(needle);
    if (pos == std::string::npos) return 0;
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
  }
  [[noreturn]] void reject(const std::string& key, const std::string& what) const {
    throw SpecError(line_of(key), key.empty() ? what : key + ": " + what);
  }
  void only_keys(std::initializer_list<const char*> allowed) const {
    if (!root.is_object()) throw SpecError(1, "top level must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = root.begin(); it != root.end(); ++it)
      if (!ok.count(it.key())) reject(it.key(), "unknown key");
  }
  const Json& need(const std::string& key) const {
    if (!root.contains(key)) throw SpecError(0, "missing key " + key);
    return root.at(key);
  }
  long long integer(const std::string& key, const Json& v) const {
    if (!v.is_number_integer()) reject(key, "expected an integer");
    return v.get<long long>();
  }
  long long integer(const std::string& key) const { return integer(key, need(key)); }
  long long integer_or(const std::string& key, long long dflt) const {
    return root.contains(key) ? integer(key, root.at(key)) : dflt;
  }
};

inline SpecDocument parse_spec_text(const std::string& text) {
  SpecDocument doc{text, {}};
  try {
    doc.root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const long long byte = static_cast<long long>(e.byte);
    const auto end = text.begin() + std::min<long long>(byte, static_cast<long long>(text.size()));
    throw SpecError(1 + static_cast<int>(std::count(text.begin(), end, '\n')), e.what());
  }
  return doc;
}

inline SpecDocument read_spec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError(0, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_text(ss.str());
}

inline u64 degree_cap_for(u64 p, std::optional<long long> from_spec) {
  if (from_spec) return static_cast<u64>(*from_spec);
  if (const char* env = std::getenv("IWLAB_DEGREE_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    throw SpecError(0, "IWLAB_DEGREE_CAP must be a positive integer");
  }
  return default_degree_cap(p);
}

struct ModuleSpec {
  u64 p = 3;
  int K = 1;
  u64 degree_cap = 0;
  std::vector<int> mu;
  std::vector<std::pair<std::vector<long long>, int>> lambda;
  std::vector<std::pair<int, std::vector<long long>>> finite;
  int conductor = 0;
  std::vector<std::vector<std::vector<long long>>> glue, Y;
  int n_min = 1, n_max = 1;

  PrimeContext ctx() const { return PrimeContext(p, K); }
  std::size_t factor_count() const { return mu.size() + lambda.size() + finite.size(); }
};

namespace detail {

inline std::vector<long long> poly_of(const SpecDocument& d, const std::string& key, const Json& v, long long bound) {
  std::vector<long long> out;
  if (v.is_number_integer()) {
    out.push_back(v.get<long long>());
  } else if (v.is_array()) {
    for (const auto& c : v) out.push_back(d.integer(key, c));
  } else {
    d.reject(key, "expected a coefficient list");
  }
  for (long long c : out)
    if (c <= -bound || c >= bound) d.reject(key, "coefficient " + std::to_string(c) + " outside (-p^K, p^K)");
  return out;
}

inline std::vector<std::vector<std::vector<long long>>> elements_of(const SpecDocument& d, const std::string& key,
                                                                    std::size_t factors, long long bound) {
  std::vector<std::vector<std::vector<long long>>> out;
  if (!d.root.contains(key)) return out;
  const Json& v = d.root.at(key);
  if (!v.is_array()) d.reject(key, "expected a list of elements");
  for (const auto& e : v) {
    if (!e.is_array() || e.size() != factors)
      d.reject(key, "each element needs one component per factor (" + std::to_string(factors) + ")");
    std::vector<std::vector<long long>> comps;
    for (const auto& c : e) comps.push_back(poly_of(d, key, c, bound));
    out.push_back(std::move(comps));
  }
  return out;
}

}  // namespace detail

inline ModuleSpec module_spec_from(const SpecDocument& d) {
  d.only_keys({"p", "precision", "degree_cap", "mu_factors", "lambda_factors", "finite_factors", "conductor", "glue",
               "Y", "levels"});
  ModuleSpec s;
  const long long p = d.integer("p");
  if (p < 3 || p % 2 == 0 || !is_prime(static_cast<u64>(p))) d.reject("p", "must be an odd prime");
  s.p = static_cast<u64>(p);
  const long long K = d.integer("precision");
  if (K < 1) d.reject("precision", "must be >= 1");
  s.K = static_cast<int>(K);
  try {
    (void)s.ctx();
  } catch (const Error& e) {
    d.reject("precision", e.detail());
  }
  const long long bound = static_cast<long long>(s.ctx().modulus());
  std::optional<long long> cap;
  if (d.root.contains("degree_cap")) {
    cap = d.integer("degree_cap");
    if (*cap < 1) d.reject("degree_cap", "must be positive");
  }
  s.degree_cap = degree_cap_for(s.p, cap);

  if (d.root.contains("mu_factors")) {
    const Json& v = d.root.at("mu_factors");
    if (!v.is_array()) d.reject("mu_factors", "expected a list of exponents");
    for (const auto& e : v) {
      long long x = d.integer("mu_factors", e);
      if (x < 1) d.reject("mu_factors", "exponents must be >= 1");
      s.mu.push_back(static_cast<int>(x));
    }
  }
  if (d.root.contains("lambda_factors")) {
    const Json& v = d.root.at("lambda_factors");
    if (!v.is_array()) d.reject("lambda_factors", "expected a list of polynomials");
    for (const auto& e : v) {
      if (e.is_object()) {
        for (auto it = e.begin(); it != e.end(); ++it)
          if (it.key() != "poly" && it.key() != "multiplicity") d.reject("lambda_factors", "unknown key " + it.key());
        if (!e.contains("poly")) d.reject("lambda_factors", "missing poly");
        long long k = e.contains("multiplicity") ? d.integer("lambda_factors", e.at("multiplicity")) : 1;
        if (k < 1) d.reject("lambda_factors", "multiplicity must be >= 1");
        s.lambda.emplace_back(detail::poly_of(d, "lambda_factors", e.at("poly"), bound), static_cast<int>(k));
      } else {
        s.lambda.emplace_back(detail::poly_of(d, "lambda_factors", e, bound), 1);
      }
      if (!LambdaElt::from_signed(s.ctx(), s.lambda.back().first).is_distinguished() ||
          LambdaElt::from_signed(s.ctx(), s.lambda.back().first).degree() < 1)
        d.reject("lambda_factors", "polynomial is not a nonconstant distinguished polynomial");
    }
  }
  if (d.root.contains("finite_factors")) {
    const Json& v = d.root.at("finite_factors");
    if (!v.is_array()) d.reject("finite_factors", "expected a list of {exp, poly}");
    for (const auto& e : v) {
      if (!e.is_object() || !e.contains("exp") || !e.contains("poly") || e.size() != 2)
        d.reject("finite_factors", "each entry is {\"exp\": a, \"poly\": h}");
      long long a = d.integer("finite_factors", e.at("exp"));
      if (a < 1) d.reject("finite_factors", "exp must be >= 1");
      auto h = detail::poly_of(d, "finite_factors", e.at("poly"), bound);
      auto hl = LambdaElt::from_signed(s.ctx(), h);
      if (!hl.is_distinguished() || hl.degree() < 1)
        d.reject("finite_factors", "polynomial is not a nonconstant distinguished polynomial");
      s.finite.emplace_back(static_cast<int>(a), std::move(h));
    }
  }
  s.conductor = static_cast<int>(d.integer_or("conductor", 0));
  if (s.conductor < 0) d.reject("conductor", "must be >= 0");
  s.glue = detail::elements_of(d, "glue", s.factor_count(), bound);
  s.Y = detail::elements_of(d, "Y", s.factor_count(), bound);
  if (!s.glue.empty() && s.conductor == 0) d.reject("glue", "glue needs a positive conductor");
  if (d.root.contains("levels")) {
    const Json& v = d.root.at("levels");
    if (!v.is_array() || v.size() != 2) d.reject("levels", "expected [n_min, n_max]");
    s.n_min = static_cast<int>(d.integer("levels", v[0]));
    s.n_max = static_cast<int>(d.integer("levels", v[1]));
    if (s.n_min < 0 || s.n_min > s.n_max) d.reject("levels", "need 0 <= n_min <= n_max");
  }
  return s;
}

inline ModuleElement element_from(const PrimeContext& ctx, const std::vector<std::vector<long long>>& comps) {
  ModuleElement x;
  for (const auto& c : comps) x.comps.push_back(LambdaElt::from_signed(ctx, c));
  return x;
}

inline GluedModule module_from(const ModuleSpec& s) {
  const PrimeContext ctx = s.ctx();
  std::vector<GluedModule::LambdaSpec> lam;
  for (const auto& [f, k] : s.lambda) lam.push_back({LambdaElt::from_signed(ctx, f), k});
  std::vector<GluedModule::FiniteSpec> fin;
  for (const auto& [a, h] : s.finite) fin.push_back({a, LambdaElt::from_signed(ctx, h)});
  std::vector<ModuleElement> glue;
  for (const auto& g : s.glue) glue.push_back(element_from(ctx, g));
  return GluedModule(ctx, s.mu, lam, fin, glue, s.conductor);
}

inline SubmoduleSpec y_from(const ModuleSpec& s) {
  SubmoduleSpec Y;
  for (const auto& y : s.Y) Y.generators.push_back(element_from(s.ctx(), y));
  return Y;
}

/// Precision headroom: K ≥ B + n_max + 2 with B the exponent bound of the module.
inline void validate_precision(const ModuleSpec& s, const GluedModule& X) {
  const int need = X.exponent_bound() + s.n_max + 2;
  if (s.K < need)
    throw SpecError(0, "precision " + std::to_string(s.K) + " is below B + n_max + 2 = " + std::to_string(need));
}

namespace detail {

inline ResidueMatrix matrix_from(const SpecDocument& d, const std::string& key, const Json& v, std::size_t rows,
                                 std::size_t cols, u64 mod) {
  if (!v.is_array() || v.size() != rows) d.reject(key, "expected " + std::to_string(rows) + " rows");
  ResidueMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols) d.reject(key, "expected " + std::to_string(cols) + " columns");
    for (std::size_t j = 0; j < cols; ++j) {
      long long x = d.integer(key, v[i][j]);
      long long r = x % static_cast<long long>(mod);
      m(i, j) = static_cast<u64>(r < 0 ? r + static_cast<long long>(mod) : r);
    }
  }
  return m;
}

inline std::vector<int> exps_from(const SpecDocument& d, const std::string& key) {
  const Json& v = d.need(key);
  if (!v.is_array()) d.reject(key, "expected a list of exponents");
  std::vector<int> out;
  for (const auto& e : v) {
    long long x = d.integer(key, e);
    if (x < 1) d.reject(key, "exponents must be >= 1");
    out.push_back(static_cast<int>(x));
  }
  if (!std::is_sorted(out.begin(), out.end(), std::greater<>()))
    d.reject(key, "exponents must be nonincreasing (invariant-factor order)");
  return out;
}

inline PrimeContext ctx_for(const SpecDocument& d, int top_exp) {
  const long long p = d.integer("p");
  if (p < 3 || p % 2 == 0 || !is_prime(static_cast<u64>(p))) d.reject("p", "must be an odd prime");
  try {
    return PrimeContext(static_cast<u64>(p), std::max(1, top_exp) + 2);
  } catch (const Error& e) {
    d.reject("p", e.detail());
  }
}

}  // namespace detail

/// {"p": 3, "factors": [1], "action": [[1]]}; the action matrix sends generator j to column j.
inline FinitePGroup group_and_action(const SpecDocument& d, ResidueMatrix& action) {
  d.only_keys({"p", "factors", "action"});
  auto exps = detail::exps_from(d, "factors");
  const PrimeContext ctx = detail::ctx_for(d, exps.empty() ? 1 : exps.front());
  FinitePGroup G(ctx, exps);
  action = detail::matrix_from(d, "action", d.need("action"), G.rank(), G.rank(), ctx.modulus());
  return G;
}

struct TransitionSpec {
  FinitePGroup A, B;
  PGroupHom N, iota;
  u64 cap = 100000, samples = 10000, seed = 1;
};

/// {"p": 3, "A": [2, 2], "B": [3, 3], "N": [[..]], "iota": [[..]]} or {"p", "A", "standard": true}.
inline TransitionSpec transition_spec_from(const SpecDocument& d) {
  d.only_keys({"p", "A", "B", "N", "iota", "standard", "cap", "samples", "seed"});
  auto a = detail::exps_from(d, "A");
  const bool standard = d.root.contains("standard") && d.root.at("standard").is_boolean() && d.root.at("standard").get<bool>();
  std::vector<int> b;
  if (standard) {
    for (int x : a) b.push_back(x + 1);
  } else {
    b = detail::exps_from(d, "B");
  }
  const int top = std::max(a.empty() ? 1 : a.front(), b.empty() ? 1 : b.front());
  const PrimeContext ctx = detail::ctx_for(d, top);
  auto cnt = [&](const char* k, long long dflt) {
    long long v = d.integer_or(k, dflt);
    if (v < 1) d.reject(k, "must be positive");
    return static_cast<u64>(v);
  };
  if (standard) {
    auto pr = standard_transition_pair(ctx, a);
    return {pr.A, pr.B, pr.N, pr.iota, cnt("cap", 100000), cnt("samples", 10000), cnt("seed", 1)};
  }
  FinitePGroup A(ctx, a), B(ctx, b);
  try {
    PGroupHom N(B, A, detail::matrix_from(d, "N", d.need("N"), A.rank(), B.rank(), ctx.modulus()));
    PGroupHom iota(A, B, detail::matrix_from(d, "iota", d.need("iota"), B.rank(), A.rank(), ctx.modulus()));
    return {A, B, N, iota, cnt("cap", 100000), cnt("samples", 10000), cnt("seed", 1)};
  } catch (const Error& e) {
    d.reject("N", e.detail());
  }
}

}  // namespace iwlab
