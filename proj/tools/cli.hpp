#pragma once

// Command line front end. run_cli writes reports to `out`, one-line failures to `err`,
// and returns the process exit code.

#include <algorithm>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "iwlab/iwlab.hpp"
#include "iwlab/spec_io.hpp"

namespace iwlab::cli {

enum Exit : int {
  Ok = 0,
  Other = 1,
  Parse = 2,
  Infinite = 3,
  NoFit = 4,
  PostFire = 5,
  NotFound = 6,
  CheckFailed = 7,
};

inline int exit_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::NotMonic:
    case ErrorCode::LevelTooLarge:
    case ErrorCode::LevelOrder: return Parse;
    case ErrorCode::InfiniteQuotient:
    case ErrorCode::PrecisionExhausted: return Infinite;
    case ErrorCode::NoExactFit: return NoFit;
    case ErrorCode::PostFireViolation: return PostFire;
    case ErrorCode::NotFoundWithinCap: return NotFound;
    default: return Other;
  }
}

inline std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

inline std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : "none"; }
inline const char* bstr(bool b) { return b ? "true" : "false"; }

/// "0,1,-3" → coefficients.
inline std::vector<long long> parse_coeffs(const std::string& s) {
  std::vector<long long> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw SpecError(0, "bad coefficient '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw SpecError(0, "empty coefficient list");
  return out;
}

/// "A..B" → (A, B).
inline std::pair<int, int> parse_levels(const std::string& s) {
  const auto pos = s.find("..");
  if (pos == std::string::npos) throw SpecError(0, "--levels expects A..B");
  try {
    std::size_t u1 = 0, u2 = 0;
    const std::string a = s.substr(0, pos), b = s.substr(pos + 2);
    int lo = std::stoi(a, &u1), hi = std::stoi(b, &u2);
    if (u1 != a.size() || u2 != b.size() || lo < 0 || lo > hi) throw SpecError(0, "");
    return {lo, hi};
  } catch (const std::exception&) {
    throw SpecError(0, "--levels expects A..B with 0 <= A <= B");
  }
}

/// Order p^k as a decimal integer, or "p^k" when it does not fit in 64 bits.
inline std::string order_string(u64 p, int k) {
  unsigned __int128 v = 1;
  for (int i = 0; i < k; ++i) {
    v *= p;
    if (v > static_cast<unsigned __int128>(UINT64_MAX)) return std::to_string(p) + "^" + std::to_string(k);
  }
  return std::to_string(static_cast<u64>(v));
}

/// FNV-1a over the little-endian coefficient bytes.
inline std::string digest(const LambdaElt& f) {
  u64 h = 1469598103934665603ull;
  for (u64 c : f.coeffs())
    for (int b = 0; b < 8; ++b) {
      h ^= (c >> (8 * b)) & 0xff;
      h *= 1099511628211ull;
    }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

struct TowerArgs {
  std::string spec;
  std::string levels;
  unsigned threads = 1;
  bool pretty = false;
};

struct Loaded {
  ModuleSpec spec;
  GluedModule module;
  SubmoduleSpec Y;
};

inline Loaded load_tower_spec(const TowerArgs& a) {
  const SpecDocument doc = read_spec_file(a.spec);
  ModuleSpec s = module_spec_from(doc);
  if (!a.levels.empty()) std::tie(s.n_min, s.n_max) = parse_levels(a.levels);
  GluedModule X = module_from(s);
  validate_precision(s, X);
  return {s, X, y_from(s)};
}

inline Tower tower_of(const Loaded& l, unsigned threads) {
  return build_tower(l.module, l.Y, l.spec.n_min, l.spec.n_max, threads, l.spec.degree_cap);
}

inline void write_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows, bool pretty) {
  if (!pretty) {
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "\t" : "") << r[i];
      out << '\n';
    }
    return;
  }
  std::vector<std::size_t> w;
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (w.size() <= i) w.push_back(0);
      w[i] = std::max(w[i], r[i].size());
    }
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      out << (i ? "  " : "") << r[i];
      if (i + 1 < r.size()) out << std::string(w[i] - r[i].size(), ' ');
    }
    out << '\n';
  }
}

inline int cmd_simulate(const TowerArgs& a, std::ostream& out) {
  const Loaded l = load_tower_spec(a);
  const Tower tw = tower_of(l, a.threads);
  std::vector<std::vector<std::string>> rows{{"n", "log_p_size", "p_rank", "exponent_exp", "subexponent_exp"}};
  for (const auto& L : tw.levels)
    rows.push_back({std::to_string(L.n), std::to_string(L.group.order_exp()), std::to_string(L.group.p_rank()),
                    std::to_string(L.group.exponent_exp()), std::to_string(L.group.subexponent_exp())});
  write_table(out, rows, a.pretty);
  return Ok;
}

inline int cmd_fit(const TowerArgs& a, std::ostream& out) {
  const Loaded l = load_tower_spec(a);
  const GrowthFit f = fit_invariants(tower_of(l, a.threads));
  out << "mu=" << f.mu << "\nlambda=" << f.lambda << "\nnu=" << f.nu << "\nn0_fit=" << f.n0_fit << '\n';
  return Ok;
}

inline int cmd_stabilize(const TowerArgs& a, std::ostream& out) {
  const Loaded l = load_tower_spec(a);
  const StabilizationReport r = detect(tower_of(l, a.threads));
  out << "criterion1_level=" << opt(r.criterion1_level) << '\n'
      << "criterion2_level=" << opt(r.criterion2_level) << '\n'
      << "criterion3_level=" << opt(r.criterion3_level) << '\n'
      << "X_finite=" << bstr(r.X_finite) << '\n'
      << "mu_zero=" << bstr(r.mu_zero) << '\n'
      << "H_stable=" << bstr(r.H_stable) << '\n'
      << "f_index=" << opt(r.f_index) << '\n'
      << "l_index=" << opt(r.l_index) << '\n'
      << "h_index=" << opt(r.h_index) << '\n'
      << "m_index=" << opt(r.m_index) << '\n'
      << "stabilization_index=" << opt(r.stabilization_index) << '\n'
      << "visibility_index=" << opt(r.visibility_index) << '\n';
  return Ok;
}

struct SearchArgs {
  long long p = 3;
  int K = 0;
  int B = 1;
  std::string h, f;
  bool find_min = false;
  int m = -1;
  int m_max = -1;
};

inline PrimeContext search_ctx(const SearchArgs& a) {
  if (a.p < 3 || a.p % 2 == 0 || !is_prime(static_cast<u64>(a.p))) throw SpecError(0, "--p must be an odd prime");
  if (a.B < 0) throw SpecError(0, "--B must be >= 0");
  const int K = a.K > 0 ? a.K : std::max(1, a.B + 2);
  if (K < a.B) throw SpecError(0, "--K must be at least --B");
  return PrimeContext(static_cast<u64>(a.p), K);
}

inline LambdaElt distinguished_arg(const PrimeContext& ctx, const std::string& s, const char* flag) {
  LambdaElt f = LambdaElt::from_signed(ctx, parse_coeffs(s));
  if (!f.is_distinguished()) throw SpecError(0, std::string(flag) + " must be a distinguished polynomial");
  return f;
}

inline int cmd_membership(const SearchArgs& a, std::ostream& out) {
  const PrimeContext ctx = search_ctx(a);
  const u64 cap = degree_cap_for(ctx.p(), std::nullopt);
  if (a.h.empty()) throw SpecError(0, "--h is required");
  const LambdaElt h = distinguished_arg(ctx, a.h, "--h");
  if (a.find_min) {
    out << "m=" << min_level_for_membership(h, a.B, a.m_max, cap) << '\n';
    return Ok;
  }
  if (!a.f.empty()) {
    out << "member=" << bstr(membership_in(h, a.B, LambdaElt::from_signed(ctx, parse_coeffs(a.f)))) << '\n';
    return Ok;
  }
  if (a.m < 1) throw SpecError(0, "give --find-min, --f, or --m");
  out << "m=" << a.m << "\nmember=" << bstr(membership_in(h, a.B, nu(ctx, a.m, 0, cap))) << '\n';
  return Ok;
}

inline int cmd_nmm(const SearchArgs& a, std::ostream& out) {
  const PrimeContext ctx = search_ctx(a);
  const u64 cap = degree_cap_for(ctx.p(), std::nullopt);
  if (a.f.empty()) throw SpecError(0, "--f is required");
  const LambdaElt f = distinguished_arg(ctx, a.f, "--f");
  const NmmResult r = nmm_congruence_search(f, a.B, a.m_max, cap);
  out << "M=" << r.M << "\nQ_degree=" << r.Q.degree() << "\nQ_digest=" << digest(r.Q)
      << "\nverified=" << bstr(r.verified) << '\n';
  return Ok;
}

inline int cmd_cohomology(const std::string& path, std::ostream& out) {
  const SpecDocument doc = read_spec_file(path);
  ResidueMatrix action;
  const FinitePGroup G = group_and_action(doc, action);
  FModule M = [&] {
    try {
      return FModule(G, action);
    } catch (const Error& e) {
      throw SpecError(doc.line_of("action"), "action: " + e.detail());
    }
  }();
  const FinitePGroup h0 = h_hat_0(M), h1 = h_hat_1(M);
  const bool equal = h0.order_exp() == h1.order_exp();
  const bool killed = h0.exponent_exp() <= 1 && h1.exponent_exp() <= 1;
  out << "h0=" << order_string(G.p(), h0.order_exp()) << "\nh1=" << order_string(G.p(), h1.order_exp())
      << "\nh0_invariants=" << h0.to_string() << "\nh1_invariants=" << h1.to_string()
      << "\nherbrand_equal=" << bstr(equal) << "\nkilled_by_p=" << bstr(killed) << '\n';
  return equal && killed ? Ok : CheckFailed;
}

inline int cmd_check_ab(const std::string& path, std::ostream& out) {
  const SpecDocument doc = read_spec_file(path);
  const TransitionSpec t = transition_spec_from(doc);
  const TransitionReport r = check_transition_lemma(t.A, t.B, t.N, t.iota, t.cap, t.samples, t.seed);
  out << "A=" << t.A.to_string() << "\nB=" << t.B.to_string() << "\nn_surjective=" << bstr(r.n_surjective)
      << "\nequal_p_ranks=" << bstr(r.equal_p_ranks) << "\norder_ratio=" << bstr(r.order_ratio)
      << "\nn_iota_is_p=" << bstr(r.n_iota_is_p) << "\nhypotheses_hold=" << bstr(r.hypotheses_hold)
      << "\nconclusion_A=" << bstr(r.conclusion_A) << "\nsexp_above_p=" << bstr(r.sexp_above_p)
      << "\nimage_equals_pB=" << bstr(r.image_equals_pB) << "\nsocle_equals_ker_N=" << bstr(r.socle_equals_ker_N)
      << "\nker_N_in_image=" << bstr(r.ker_N_in_image) << "\nrank_preserving=" << bstr(r.rank_preserving)
      << "\norder_identity=" << bstr(r.order_identity) << "\nconclusion_B=" << bstr(r.conclusion_B)
      << "\nexhaustive=" << bstr(r.exhaustive) << "\nelements_checked=" << r.elements_checked << '\n';
  if (!r.hypotheses_hold) return Ok;
  const bool ok = r.conclusion_A && (!r.sexp_above_p || r.conclusion_B);
  return ok ? Ok : CheckFailed;
}

struct FormulaArgs {
  long long degree = 0, lambda_minus = 0, e = 0, half_degree = 0;
  long long p = 3, n = 0, N = 0, d = 0;
  long long r2 = 0, defect = 0;
};

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iwasawa module towers, growth invariants and stabilization"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");
  app.set_help_all_flag("--help-all");

  TowerArgs ta;
  auto add_tower = [&](const char* name, const char* desc) {
    auto* c = app.add_subcommand(name, desc);
    c->add_option("--spec", ta.spec, "module spec file")->required();
    c->add_option("--levels", ta.levels, "level range A..B, overriding the spec");
    c->add_option("--threads", ta.threads, "worker threads for level computation")->check(CLI::Range(1u, 256u));
    c->add_flag("--pretty", ta.pretty, "aligned columns instead of TSV");
    return c;
  };
  auto* sim = add_tower("simulate", "per-level invariants as TSV");
  auto* fit = add_tower("fit", "fit mu, lambda, nu to the last three levels");
  auto* stab = add_tower("stabilize", "stabilization criteria and indices");

  SearchArgs sa;
  auto add_search = [&](CLI::App* c) {
    c->add_option("--p", sa.p, "odd prime")->capture_default_str();
    c->add_option("--K", sa.K, "working precision (default B + 2)");
    c->add_option("--B", sa.B, "exponent bound")->required();
  };
  auto* mem = app.add_subcommand("membership", "nu_{m,0} in (h, p^B)");
  add_search(mem);
  mem->add_option("--h", sa.h, "distinguished polynomial, constant first, comma separated")->required();
  mem->add_flag("--find-min", sa.find_min, "least level m with membership");
  mem->add_option("--m", sa.m, "test this level");
  mem->add_option("--f", sa.f, "test this polynomial instead of nu_{m,0}");
  mem->add_option("--m-max", sa.m_max, "search cap on m");
  auto* nmm = app.add_subcommand("nmm", "least M with nu_{2M,0} = Q f omega_M mod p^B");
  add_search(nmm);
  nmm->add_option("--f", sa.f, "distinguished polynomial")->required();
  nmm->add_option("--M-max", sa.m_max, "search cap on M");

  std::string cpath;
  auto* coh = app.add_subcommand("cohomology", "Tate cohomology of a group with an order-p action");
  coh->add_option("--spec", cpath, "group/action spec file")->required();
  auto* ab = app.add_subcommand("check-ab", "check the N/iota transition conclusions");
  ab->add_option("--spec", cpath, "transition spec file")->required();

  FormulaArgs fa;
  auto* form = app.add_subcommand("formulas", "closed-form bookkeeping identities");
  form->require_subcommand(1);
  auto* kida = form->add_subcommand("kida", "[L:K] lambda^-(K) + (e-1) half_degree");
  kida->add_option("--degree", fa.degree)->required();
  kida->add_option("--lambda-minus", fa.lambda_minus)->required();
  kida->add_option("--e", fa.e)->required();
  kida->add_option("--half-degree", fa.half_degree)->required();
  auto* hasse = form->add_subcommand("hasse", "norm defect exponent p^(n-N) d");
  hasse->add_option("--p", fa.p)->required();
  hasse->add_option("--n", fa.n)->required();
  hasse->add_option("--N", fa.N)->required();
  hasse->add_option("--d", fa.d)->required();
  auto* ranks = form->add_subcommand("ranks", "r2 + 1 + defect and defect + 1");
  ranks->add_option("--r2", fa.r2)->required();
  ranks->add_option("--defect", fa.defect)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return Ok;
  } catch (const CLI::ParseError& e) {
    err << "error=Usage detail=" << one_line(e.what()) << '\n';
    return Parse;
  }

  try {
    if (*sim) return cmd_simulate(ta, out);
    if (*fit) return cmd_fit(ta, out);
    if (*stab) return cmd_stabilize(ta, out);
    if (*mem) return cmd_membership(sa, out);
    if (*nmm) return cmd_nmm(sa, out);
    if (*coh) return cmd_cohomology(cpath, out);
    if (*ab) return cmd_check_ab(cpath, out);
    if (*kida) {
      out << "lambda_minus_L=" << kida_lambda_minus({fa.degree, fa.lambda_minus, fa.e, fa.half_degree}) << '\n';
      return Ok;
    }
    if (*hasse) {
      const auto k = hasse_norm_defect_exponent({fa.p, fa.n, fa.N, fa.d});
      out << "exponent=" << k << '\n';
      return Ok;
    }
    if (*ranks) {
      out << "omega_rank=" << omega_rank({fa.r2, fa.defect}) << "\nm_plus_rank=" << m_plus_rank({fa.r2, fa.defect})
          << '\n';
      return Ok;
    }
  } catch (const SpecError& e) {
    err << "error=Spec line=" << e.line() << " detail=" << one_line(e.what()) << '\n';
    return Parse;
  } catch (const Error& e) {
    err << "error=" << error_name(e.code()) << " detail=" << one_line(e.detail()) << '\n';
    return exit_for(e.code());
  } catch (const std::exception& e) {
    err << "error=Internal detail=" << one_line(e.what()) << '\n';
    return Other;
  }
  return Other;
}

}  // namespace iwlab::cli
