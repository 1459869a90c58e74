#include "zetares/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "zetares/error.hpp"
#include "zetares/extreme.hpp"
#include "zetares/gcd_sums.hpp"
#include "zetares/primes.hpp"
#include "zetares/resonance.hpp"
#include "zetares/resonator.hpp"
#include "zetares/zeta.hpp"

#ifndef ZETARES_VERSION
#define ZETARES_VERSION "0.0.0"
#endif

namespace zr {

std::string version() { return ZETARES_VERSION; }

namespace {

std::string q17(quad x) { return to_string_q(x, 17); }

double get_real(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    char* end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (!s.empty() && end == s.c_str() + s.size()) return d;
  }
  throw InvalidArgument("config field '" + key + "' must be a real number, got " + v.dump());
}

std::int64_t get_integer(const json& v, const std::string& key) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  double d = 0;
  bool ok = false;
  if (v.is_number_float()) {
    d = v.get<double>();
    ok = true;
  } else if (v.is_string()) {
    const std::string s = v.get<std::string>();
    std::int64_t i = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
    if (ec == std::errc() && p == s.data() + s.size()) return i;
    char* end = nullptr;
    d = std::strtod(s.c_str(), &end);
    ok = !s.empty() && end == s.c_str() + s.size();
  }
  if (ok && std::isfinite(d) && d == std::floor(d) && std::fabs(d) <= 9007199254740992.0) {
    return static_cast<std::int64_t>(d);
  }
  throw InvalidArgument("config field '" + key + "' must be an integer, got " + v.dump());
}

std::uint64_t get_unsigned(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    std::uint64_t u = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), u);
    if (ec == std::errc() && p == s.data() + s.size()) return u;
  }
  const std::int64_t i = get_integer(v, key);
  if (i < 0) throw InvalidArgument("config field '" + key + "' must be non-negative, got " + v.dump());
  return static_cast<std::uint64_t>(i);
}

int get_int(const json& v, const std::string& key) {
  const std::int64_t i = get_integer(v, key);
  if (i < -(1LL << 31) || i >= (1LL << 31)) throw InvalidArgument("config field '" + key + "' is out of range");
  return static_cast<int>(i);
}

std::string get_string(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  throw InvalidArgument("config field '" + key + "' must be a string, got " + v.dump());
}

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
  if (!v) return;
  if constexpr (std::is_same_v<T, double>) {
    j[key] = fmt17(*v);
  } else {
    j[key] = *v;
  }
}

template <class T>
void over(std::optional<T>& dst, const std::optional<T>& src) {
  if (src) dst = src;
}

template <class T>
const T& need(const std::optional<T>& v, const char* key, const std::string& command) {
  if (!v) throw InvalidArgument(command + " requires '" + key + "'");
  return *v;
}

BuildOptions build_options(const ExperimentConfig& c) {
  BuildOptions o;
  if (c.caps.max_exact_M) o.max_exact_M = *c.caps.max_exact_M;
  if (c.caps.max_elements) o.max_elements = *c.caps.max_elements;
  return o;
}

// M from the config, else from T and alpha.
int resolve_M(const ExperimentConfig& c) {
  if (c.M) return *c.M;
  return choose_M(need(c.T, "T", c.command), need(c.alpha, "alpha", c.command));
}

// T from the config, else 2^{M/(2 alpha - 1)}.
double resolve_T(const ExperimentConfig& c, int M) {
  if (c.T) return *c.T;
  return std::exp2(static_cast<double>(M) / (2 * need(c.alpha, "alpha", c.command) - 1));
}

RChoice resolve_R(const ExperimentConfig& c, int M, RunReport& rep) {
  RChoice r;
  if (c.R) {
    r.R = *c.R;
    r.effective_R = std::max(*c.R, 1);
    r.clamped = *c.R < 1;
  } else {
    r = choose_R(M, need(c.alpha, "alpha", c.command));
  }
  rep.flags["R_clamped"] = r.clamped;
  rep.outputs["R"] = r.R;
  rep.outputs["effective_R"] = r.effective_R;
  return r;
}

void add_check(RunReport& rep, std::string name, bool passed, std::string detail = {}) {
  rep.checks.push_back({std::move(name), passed, std::move(detail)});
}

PlotGrid grid_of(std::vector<std::string> columns) {
  PlotGrid g;
  g.columns = std::move(columns);
  return g;
}

bool want_grid(const ExperimentConfig& c) { return c.csv.has_value(); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InvalidArgument("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw InvalidArgument("failed writing '" + path + "'");
}

// ---- construct

void run_construct(const ExperimentConfig& c, RunReport& rep) {
  const int M = resolve_M(c);
  const MultiplicativeSet B = build_B(M, build_options(c));
  rep.outputs["M"] = M;
  rep.outputs["N"] = B.N();
  std::optional<RepresentativeSet> D;
  if (c.T) {
    D = build_D(B, *c.T);
    rep.outputs["T"] = fmt17(*c.T);
    rep.outputs["K"] = D->K();
    rep.outputs["multi_element_buckets"] = D->multi_element_buckets;
    rep.outputs["largest_bucket"] = D->largest_bucket;
    const WindowReport w = verify_bucket_windows(B, *D);
    add_check(rep, "bucket_windows", w.violations.empty(),
              std::to_string(w.violations.size()) + " of " + std::to_string(w.checked) + " outside [d, d(1+1/T))");
    const RatioReport r = verify_representative_ratios(*D);
    rep.outputs["ratio_min_log_margin"] = q17(r.min_log_margin);
    add_check(rep, "representative_ratios", true, std::to_string(r.checked_pairs) + " pairs");
  }
  if (c.set_out) {
    write_text(*c.set_out, construction_to_json(B, D ? &*D : nullptr, c.alpha).dump(2) + "\n");
    rep.outputs["set_out"] = *c.set_out;
  }
  if (want_grid(c)) {
    if (D) {
      PlotGrid g = grid_of({"index", "bits", "exact_value", "log_value", "bucket"});
      for (std::size_t k = 0; k < D->K(); ++k) {
        const auto& d = D->elements[k];
        g.rows.push_back({std::to_string(k), d.exponents.to_string(), d.exact().get_str(), q17(d.log_value),
                          to_string_u128(D->buckets[k])});
      }
      rep.grid = std::move(g);
    } else {
      PlotGrid g = grid_of({"index", "bits", "exact_value", "log_value"});
      for (std::size_t i = 0; i < B.N(); ++i) {
        const auto& b = B.elements[i];
        g.rows.push_back({std::to_string(i), b.exponents.to_string(), b.exact().get_str(), q17(b.log_value)});
      }
      rep.grid = std::move(g);
    }
  }
}

// ---- gcd sums and the binomial chain

void chain_into(const ExperimentConfig& c, int M, RunReport& rep) {
  const ChainReport ch = lemma1_chain_check(M, *c.alpha);
  rep.outputs["chain"] = to_json(ch);
  rep.flags["R_clamped"] = ch.R_clamped;
  if (!ch.R_clamped) {
    add_check(rep, "stirling_links", ch.stirling_links_hold());
  }
  if (ch.lhs_above_binomial) add_check(rep, "restricted_sum_above_binomial", *ch.lhs_above_binomial);
  rep.flags["margin_nonnegative"] = ch.margin_nonnegative;
  rep.flags["final_link"] = ch.link_final;
}

void term_floor_into(const MultiplicativeSet& B, std::size_t k, int R, RunReport& rep) {
  const TermFloorReport f = verify_restricted_term_bounds(B, k, R);
  json j;
  j["terms"] = f.terms;
  j["primes_below_bound"] = f.primes_below_bound;
  j["floor_violations"] = f.floor_violations;
  j["ceiling_violations"] = f.ceiling_violations;
  j["min_log_margin"] = q17(f.min_log_margin);
  rep.outputs["term_bounds"] = j;
  if (f.primes_below_bound) add_check(rep, "term_floor", f.floor_violations == 0);
  add_check(rep, "term_ceiling", f.ceiling_violations == 0);
}

void run_gcd_sum(const ExperimentConfig& c, RunReport& rep) {
  const double alpha = *c.alpha;
  const int M = resolve_M(c);
  const std::string mode = c.mode.value_or("product");
  rep.outputs["M"] = M;
  rep.outputs["mode"] = mode;
  const double row = gcd_sum_row_product(M, alpha);
  const quad log_row = log_gcd_sum_row_product(M, alpha);
  const double N = std::ldexp(1.0, M);
  if (mode == "product") {
    rep.outputs["row_product"] = fmt17(row);
    rep.outputs["log_row_product"] = q17(log_row);
    rep.outputs["total"] = fmt17(N * row);
    return;
  }
  if (mode == "chain") {
    chain_into(c, M, rep);
    return;
  }
  const MultiplicativeSet B = build_B(M, build_options(c));
  GcdSumOptions go;
  if (c.caps.max_elements) go.max_elements = *c.caps.max_elements;
  if (mode == "bruteforce" || mode == "compare") {
    const double brute = gcd_sum_bruteforce(B, alpha, go);
    rep.outputs["bruteforce"] = fmt17(brute);
    if (mode == "compare") {
      const double expect = N * row;
      const double rel = std::fabs(brute - expect) / expect;
      rep.outputs["product_total"] = fmt17(expect);
      rep.outputs["relative_difference"] = fmt17(rel);
      add_check(rep, "bruteforce_equals_product", rel <= 1e-9, "relative difference " + fmt17(rel));
    }
    return;
  }
  if (mode == "restricted") {
    const RChoice r = resolve_R(c, M, rep);
    const std::size_t k = static_cast<std::size_t>(c.k.value_or(0));
    if (k >= B.N()) throw InvalidArgument("k must be < 2^M = " + std::to_string(B.N()));
    RestrictedOptions ro;
    const RestrictedSum s = gcd_sum_distance_restricted(B, k, r.effective_R, alpha, ro);
    rep.outputs["k"] = k;
    rep.outputs["restricted_sum"] = fmt17(s.value);
    rep.outputs["terms"] = s.terms;
    rep.outputs["min_term"] = fmt17(s.min_term);
    rep.outputs["max_term"] = fmt17(s.max_term);
    const RestrictedSum bf = gcd_sum_distance_restricted_bruteforce(B, k, r.effective_R, alpha);
    const double rel = s.value == 0 ? std::fabs(bf.value) : std::fabs(bf.value - s.value) / s.value;
    add_check(rep, "restricted_matches_scan", bf.terms == s.terms && rel <= 1e-12,
              std::to_string(bf.terms) + " terms, relative difference " + fmt17(rel));
    term_floor_into(B, k, r.effective_R, rep);
    return;
  }
  throw InvalidArgument("unknown gcd-sum mode '" + mode + "'");
}

// ---- lemma-check

void run_lemma(const ExperimentConfig& c, RunReport& rep) {
  const double alpha = *c.alpha;
  const int M = resolve_M(c);
  const double T = resolve_T(c, M);
  const std::string lemma = *c.lemma;
  rep.outputs["lemma"] = lemma;
  rep.outputs["M"] = M;
  rep.outputs["T"] = fmt17(T);

  if (lemma == "1") {
    chain_into(c, M, rep);
    const RChoice r = resolve_R(c, M, rep);
    if (M <= 16) {
      const MultiplicativeSet B = build_B(M, build_options(c));
      term_floor_into(B, static_cast<std::size_t>(c.k.value_or(0)), r.effective_R, rep);
    }
    return;
  }
  if (lemma == "3" || lemma == "4") {
    const WeightedKernel kernel = make_kernel(T, alpha);
    const std::uint64_t n = c.points.value_or(10000);
    const double lo = 1 / T;
    const double hi = lemma == "3" ? 1 / kernel.breakpoint : 1e3;
    if (!(hi > lo)) throw DomainError("empty frequency range (" + fmt17(lo) + ", " + fmt17(hi) + "]");
    std::optional<PlotGrid> g;
    if (want_grid(c)) g = grid_of({"a", "weighted_integral"});
    double worst = lemma == "3" ? 1e300 : 0;
    double worst_a = lo;
    for (std::uint64_t i = 0; i < n; ++i) {
      // (lo, hi] for positivity, [lo, hi] for the 7/a bound.
      const double e = lemma == "3" ? static_cast<double>(i + 1) / static_cast<double>(n)
                                    : (n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1));
      const double a = i + 1 == n ? hi : lo * std::pow(hi / lo, e);
      const double w = weighted_cos_integral(a, kernel);
      const double v = lemma == "3" ? w : std::fabs(w) * a / 7;
      if (lemma == "3" ? v < worst : v > worst) {
        worst = v;
        worst_a = a;
      }
      if (g) g->rows.push_back({fmt17(a), fmt17(w)});
    }
    rep.outputs["points"] = n;
    rep.outputs["a_min"] = fmt17(lo);
    rep.outputs["a_max"] = fmt17(hi);
    rep.outputs["worst_a"] = fmt17(worst_a);
    if (lemma == "3") {
      rep.outputs["min_weighted_integral"] = fmt17(worst);
      add_check(rep, "weighted_integral_nonnegative", worst >= -1e-12 * T, "min " + fmt17(worst));
    } else {
      rep.outputs["max_ratio_to_7_over_a"] = fmt17(worst);
      add_check(rep, "weighted_integral_below_7_over_a", worst <= 1, "max |W| a / 7 = " + fmt17(worst));
      const TailOptions to;
      if (T <= to.max_T) {
        const ResonatorInteger one = make_resonator_integer(ExponentVector(1, 0));
        const TailReport tr = type3_tail_sum(one, one, alpha, T, to);
        rep.outputs["tail_sum"] = fmt17(tr.value);
        rep.outputs["tail_terms"] = tr.terms;
        rep.outputs["tail_normalized"] = fmt17(tr.normalized);
      }
      rep.flags["tail_computed"] = T <= to.max_T;
    }
    rep.grid = std::move(g);
    return;
  }

  const MultiplicativeSet B = build_B(M, build_options(c));
  if (lemma == "1a") {
    const RChoice r = resolve_R(c, M, rep);
    SeparationOptions so;
    if (c.caps.max_pairs) so.max_pairs = *c.caps.max_pairs;
    const PairSeparationReport s = verify_pair_separation(B, r.effective_R, T, so);
    std::map<std::string, std::uint64_t> kinds{
        {"denominator-bound", 0}, {"same-bucket", 0}, {"ratio-below-sqrtT-window", 0}};
    for (const auto& v : s.violations) ++kinds[v.kind];
    rep.outputs["checked_pairs"] = s.checked_pairs;
    rep.outputs["log_denominator_bound"] = q17(s.log_denominator_bound);
    rep.outputs["max_denominator"] = to_string_u128(s.max_denominator);
    rep.outputs["min_log_ratio"] = q17(s.min_log_ratio);
    json vk = json::object();
    for (const auto& [kind, n] : kinds) vk[kind] = n;
    rep.outputs["violations"] = vk;
    rep.flags["chain_applies"] = s.chain_applies;
    rep.flags["chain_link_cube"] = s.chain_link_cube;
    add_check(rep, "reduced_denominator_bound", kinds["denominator-bound"] == 0);
    if (s.chain_applies) {
      add_check(rep, "separated_buckets", kinds["same-bucket"] == 0 && kinds["ratio-below-sqrtT-window"] == 0);
    }
    if (want_grid(c)) {
      PlotGrid g = grid_of({"k", "l", "kind"});
      for (const auto& v : s.violations) g.rows.push_back({std::to_string(v.k), std::to_string(v.l), v.kind});
      rep.grid = std::move(g);
    }
    return;
  }
  const RepresentativeSet D = build_D(B, T);
  rep.outputs["K"] = D.K();
  if (lemma == "1b") {
    const WindowReport w = verify_bucket_windows(B, D);
    rep.outputs["checked"] = w.checked;
    rep.outputs["violations"] = w.violations.size();
    add_check(rep, "bucket_windows", w.violations.empty());
    return;
  }
  if (lemma == "1c") {
    const RatioReport r = verify_representative_ratios(D);
    rep.outputs["checked_pairs"] = r.checked_pairs;
    rep.outputs["violations"] = 0;
    rep.outputs["min_log_margin"] = q17(r.min_log_margin);
    rep.outputs["certified_high_precision"] = r.certified_high_precision;
    add_check(rep, "representative_ratios", true);
    return;
  }
  if (lemma == "2") {
    const RChoice r = resolve_R(c, M, rep);
    const ResonantPairReport p = resonant_pair_check(B, D, alpha, T, r.effective_R);
    rep.outputs["quadruples"] = p.quadruples;
    rep.outputs["total_contribution"] = fmt17(p.total_contribution);
    rep.outputs["total_bound"] = fmt17(p.total_bound);
    add_check(rep, "exact_resonance", p.all_exact);
    add_check(rep, "type1_window", p.all_type1);
    add_check(rep, "distinct_targets", p.all_distinct);
    add_check(rep, "type1_lower_bound", p.all_bounds);
    if (want_grid(c)) {
      PlotGrid g = grid_of({"k", "quadruples", "contribution", "bound"});
      for (const auto& e : p.entries) {
        g.rows.push_back({std::to_string(e.k), std::to_string(e.quadruples), fmt17(e.contribution), fmt17(e.bound)});
      }
      rep.grid = std::move(g);
    }
    return;
  }
  throw InvalidArgument("unknown lemma '" + lemma + "'");
}

// ---- zeta

ZetaSample zeta_at(const ExperimentConfig& c, ZetaMethod m, double t) {
  const double alpha = *c.alpha;
  switch (m) {
    case ZetaMethod::reference: {
      ReferenceOptions ro;
      return zeta_reference(alpha, t, c.digits.value_or(20), ro);
    }
    case ZetaMethod::corrected:
      return zeta_corrected(alpha, t, c.x.value_or(std::max(2 * std::fabs(t), 100.0)));
    case ZetaMethod::truncated:
      return zeta_truncated(alpha, t, need(c.T, "T", "zeta --method truncated"));
  }
  throw InvalidArgument("unknown method");
}

void run_zeta(const ExperimentConfig& c, RunReport& rep) {
  const ZetaMethod m = parse_zeta_method(c.method.value_or("reference"));
  rep.outputs["alpha"] = fmt17(*c.alpha);
  rep.outputs["method"] = to_string(m);
  if (c.t_start) {
    const double a = *c.t_start;
    const double b = need(c.t_stop, "t_stop", c.command);
    const std::uint64_t n = need(c.points, "points", c.command);
    const double h = n > 1 ? (b - a) / static_cast<double>(n - 1) : 0;
    std::optional<PlotGrid> g;
    if (want_grid(c)) g = grid_of({"t", "re", "im", "modulus", "method"});
    double best = -1;
    double best_t = a;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double t = i + 1 == n && n > 1 ? b : a + static_cast<double>(i) * h;
      const ZetaSample z = zeta_at(c, m, t);
      const double mod = std::abs(z.value);
      if (mod > best) {
        best = mod;
        best_t = t;
      }
      if (g) g->rows.push_back({fmt17(t), fmt17(z.value.real()), fmt17(z.value.imag()), fmt17(mod), to_string(m)});
    }
    rep.outputs["points"] = n;
    rep.outputs["max_modulus"] = fmt17(best);
    rep.outputs["t_at_max"] = fmt17(best_t);
    rep.grid = std::move(g);
    return;
  }
  const double t = need(c.t, "t", c.command);
  const ZetaSample z = zeta_at(c, m, t);
  rep.outputs["t"] = fmt17(t);
  rep.outputs["re"] = fmt17(z.value.real());
  rep.outputs["im"] = fmt17(z.value.imag());
  rep.outputs["modulus"] = fmt17(std::abs(z.value));
  rep.outputs["est_error"] = fmt17(z.est_error);
}

// ---- resonate

void run_resonate(const ExperimentConfig& c, RunReport& rep) {
  const double alpha = *c.alpha;
  const double T = *c.T;
  const int M = resolve_M(c);
  const RChoice r = resolve_R(c, M, rep);
  const MultiplicativeSet B = build_B(M, build_options(c));
  const RepresentativeSet D = build_D(B, T);
  const std::uint64_t mn = c.mn_limit.value_or(static_cast<std::uint64_t>(std::floor(T)));

  DecompositionOptions dopt;
  if (c.caps.max_operations) dopt.max_operations = *c.caps.max_operations;
  const ResonanceDecomposition dec = frequency_decomposition(D, alpha, T, mn, dopt);
  const ResonantPairReport pairs = resonant_pair_check(B, D, alpha, T, r.effective_R);
  SquareIntegralOptions so;
  if (c.caps.max_pairs) so.max_pairs = *c.caps.max_pairs;
  const SquareIntegralReport sq = square_integral_report(D, T, so);

  json params;
  params["alpha"] = fmt17(alpha);
  params["T"] = fmt17(T);
  params["M"] = M;
  params["R"] = r.effective_R;
  params["K"] = D.K();
  params["mn_limit"] = mn;
  rep.outputs["params"] = params;
  rep.outputs["type1_sum"] = fmt17(dec.type1_sum);
  rep.outputs["type2_sum"] = fmt17(dec.type2_sum);
  rep.outputs["type3_sum"] = fmt17(dec.type3_sum);
  rep.outputs["total"] = fmt17(dec.total);
  rep.outputs["class_counts"] = json::array({dec.count[0], dec.count[1], dec.count[2]});
  json rp;
  rp["R"] = pairs.R;
  rp["quadruples"] = pairs.quadruples;
  rp["all_exact"] = pairs.all_exact;
  rp["all_type1"] = pairs.all_type1;
  rp["all_distinct"] = pairs.all_distinct;
  rp["all_bounds"] = pairs.all_bounds;
  rp["total_contribution"] = fmt17(pairs.total_contribution);
  rp["total_bound"] = fmt17(pairs.total_bound);
  rep.outputs["resonant_pair_report"] = rp;
  json si;
  si["closed_form"] = fmt17(sq.closed_form);
  si["triangle_bound"] = fmt17(sq.triangle_bound);
  si["l2_bound"] = fmt17(sq.l2_bound);
  rep.outputs["square_integral"] = si;
  rep.outputs["l2_bound_ratio"] = fmt17(sq.l2_bound_ratio);

  const double parts = dec.type1_sum + dec.type2_sum + dec.type3_sum;
  const double scale = std::fabs(dec.type1_sum) + std::fabs(dec.type2_sum) + std::fabs(dec.type3_sum);
  add_check(rep, "partition", std::fabs(parts - dec.total) <= 1e-6 * scale,
            "classes " + fmt17(parts) + " vs total " + fmt17(dec.total));
  add_check(rep, "type2_nonnegative", dec.type2_sum >= -1e-12 * T * static_cast<double>(std::max<std::uint64_t>(1, dec.count[1])));
  add_check(rep, "exact_resonance", pairs.all_exact);
  add_check(rep, "type1_window", pairs.all_type1);
  rep.flags["type1_lower_bound"] = pairs.all_bounds;

  if (want_grid(c)) {
    PlotGrid g = grid_of({"class", "sum"});
    g.rows = {{"type1", fmt17(dec.type1_sum)},
              {"type2", fmt17(dec.type2_sum)},
              {"type3", fmt17(dec.type3_sum)},
              {"total", fmt17(dec.total)}};
    rep.grid = std::move(g);
  }
}

// ---- search and measure

void run_search(const ExperimentConfig& c, RunReport& rep) {
  SearchOptions so;
  if (c.caps.max_T) so.max_T = *c.caps.max_T;
  so.keep_grid = want_grid(c);
  const SearchResult s = search_max(*c.alpha, *c.T, c.step.value_or(0.05), c.refine.value_or(30), so);
  rep.outputs["alpha"] = fmt17(s.alpha);
  rep.outputs["T"] = fmt17(s.T);
  rep.outputs["grid_step"] = fmt17(s.grid_step);
  rep.outputs["refinement_depth"] = s.refinement_depth;
  rep.outputs["grid_points"] = s.grid_points;
  rep.outputs["t_star"] = fmt17(s.t_star);
  rep.outputs["max_modulus"] = fmt17(s.max_modulus);
  rep.outputs["coarse_max"] = fmt17(s.coarse_max);
  rep.outputs["theorem1_bound"] = fmt17(s.theorem1_bound);
  rep.outputs["region"] = s.region;
  rep.flags["exceeded"] = s.exceeded;
  add_check(rep, "bound_exceeded", s.exceeded, fmt17(s.max_modulus) + " vs " + fmt17(s.theorem1_bound));
  add_check(rep, "refinement_monotone", s.max_modulus >= s.coarse_max);
  if (so.keep_grid) {
    PlotGrid g = grid_of({"t", "modulus"});
    g.rows.reserve(s.grid.size());
    for (const auto& p : s.grid) g.rows.push_back({fmt17(p.t), fmt17(p.modulus)});
    rep.grid = std::move(g);
  }
}

void run_measure(const ExperimentConfig& c, RunReport& rep) {
  MeasureOptions mo;
  if (c.caps.max_T) mo.max_T = *c.caps.max_T;
  mo.keep_samples = want_grid(c);
  const MeasureReport m = measure_estimate(*c.alpha, *c.tau, *c.T, *c.samples, c.seed.value_or(0), mo);
  rep.outputs["alpha"] = fmt17(m.alpha);
  rep.outputs["tau"] = fmt17(m.tau);
  rep.outputs["T"] = fmt17(m.T);
  rep.outputs["samples"] = m.samples;
  rep.outputs["seed"] = m.seed;
  rep.outputs["strata"] = m.strata;
  rep.outputs["above"] = m.above;
  rep.outputs["threshold"] = fmt17(m.threshold);
  rep.outputs["sampled_fraction"] = fmt17(m.sampled_fraction);
  rep.outputs["estimated_measure"] = fmt17(m.estimated_measure);
  rep.outputs["standard_error"] = fmt17(m.standard_error);
  rep.outputs["theorem2_floor"] = fmt17(m.theorem2_floor);
  rep.outputs["beta"] = fmt17(m.beta);
  rep.outputs["floor_exponent"] = fmt17(m.floor_exponent);
  add_check(rep, "measure_above_floor", m.estimated_measure >= m.theorem2_floor,
            fmt17(m.estimated_measure) + " vs " + fmt17(m.theorem2_floor));
  if (mo.keep_samples) {
    PlotGrid g = grid_of({"t", "modulus", "above_threshold"});
    g.rows.reserve(m.per_sample.size());
    for (const auto& p : m.per_sample) g.rows.push_back({fmt17(p.t), fmt17(p.modulus), p.above ? "1" : "0"});
    rep.grid = std::move(g);
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

// ---- config

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  if (!doc.is_object()) throw InvalidArgument("config must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, v] : doc.items()) {
    if (key == "command") c.command = get_string(v, key);
    else if (key == "alpha") c.alpha = get_real(v, key);
    else if (key == "T") c.T = get_real(v, key);
    else if (key == "tau") c.tau = get_real(v, key);
    else if (key == "M") c.M = get_int(v, key);
    else if (key == "R") c.R = get_int(v, key);
    else if (key == "k") c.k = get_unsigned(v, key);
    else if (key == "x") c.x = get_real(v, key);
    else if (key == "t") c.t = get_real(v, key);
    else if (key == "t_start") c.t_start = get_real(v, key);
    else if (key == "t_stop") c.t_stop = get_real(v, key);
    else if (key == "points") c.points = get_unsigned(v, key);
    else if (key == "step") c.step = get_real(v, key);
    else if (key == "refine") c.refine = get_int(v, key);
    else if (key == "digits") c.digits = get_int(v, key);
    else if (key == "method") c.method = get_string(v, key);
    else if (key == "mode") c.mode = get_string(v, key);
    else if (key == "lemma") c.lemma = v.is_number_integer() ? std::to_string(v.get<int>()) : get_string(v, key);
    else if (key == "mn_limit") c.mn_limit = get_unsigned(v, key);
    else if (key == "samples") c.samples = get_unsigned(v, key);
    else if (key == "seed") c.seed = get_unsigned(v, key);
    else if (key == "threads") c.threads = get_int(v, key);
    else if (key == "out") c.out = get_string(v, key);
    else if (key == "csv") c.csv = get_string(v, key);
    else if (key == "set_out") c.set_out = get_string(v, key);
    else if (key == "caps") {
      if (!v.is_object()) throw InvalidArgument("config field 'caps' must be an object");
      for (const auto& [ck, cv] : v.items()) {
        const std::string name = "caps." + ck;
        if (ck == "max_exact_M") c.caps.max_exact_M = get_int(cv, name);
        else if (ck == "max_elements") c.caps.max_elements = get_unsigned(cv, name);
        else if (ck == "max_pairs") c.caps.max_pairs = get_unsigned(cv, name);
        else if (ck == "max_operations") c.caps.max_operations = get_real(cv, name);
        else if (ck == "max_T") c.caps.max_T = get_real(cv, name);
        else throw InvalidArgument("unknown config key '" + name + "'");
      }
    } else {
      throw InvalidArgument("unknown config key '" + key + "'");
    }
  }
  return c;
}

json ExperimentConfig::to_json() const {
  json j;
  j["command"] = command;
  put(j, "alpha", alpha);
  put(j, "T", T);
  put(j, "tau", tau);
  put(j, "M", M);
  put(j, "R", R);
  put(j, "k", k);
  put(j, "x", x);
  put(j, "t", t);
  put(j, "t_start", t_start);
  put(j, "t_stop", t_stop);
  put(j, "points", points);
  put(j, "step", step);
  put(j, "refine", refine);
  put(j, "digits", digits);
  put(j, "method", method);
  put(j, "mode", mode);
  put(j, "lemma", lemma);
  put(j, "mn_limit", mn_limit);
  put(j, "samples", samples);
  put(j, "seed", seed);
  put(j, "threads", threads);
  put(j, "out", out);
  put(j, "csv", csv);
  put(j, "set_out", set_out);
  json cj = json::object();
  put(cj, "max_exact_M", caps.max_exact_M);
  put(cj, "max_elements", caps.max_elements);
  put(cj, "max_pairs", caps.max_pairs);
  put(cj, "max_operations", caps.max_operations);
  put(cj, "max_T", caps.max_T);
  if (!cj.empty()) j["caps"] = cj;
  return j;
}

void ExperimentConfig::merge(const ExperimentConfig& f) {
  if (!f.command.empty()) command = f.command;
  over(alpha, f.alpha);
  over(T, f.T);
  over(tau, f.tau);
  over(M, f.M);
  over(R, f.R);
  over(k, f.k);
  over(x, f.x);
  over(t, f.t);
  over(t_start, f.t_start);
  over(t_stop, f.t_stop);
  over(points, f.points);
  over(step, f.step);
  over(refine, f.refine);
  over(digits, f.digits);
  over(method, f.method);
  over(mode, f.mode);
  over(lemma, f.lemma);
  over(mn_limit, f.mn_limit);
  over(samples, f.samples);
  over(seed, f.seed);
  over(threads, f.threads);
  over(out, f.out);
  over(csv, f.csv);
  over(set_out, f.set_out);
  over(caps.max_exact_M, f.caps.max_exact_M);
  over(caps.max_elements, f.caps.max_elements);
  over(caps.max_pairs, f.caps.max_pairs);
  over(caps.max_operations, f.caps.max_operations);
  over(caps.max_T, f.caps.max_T);
}

void validate(const ExperimentConfig& c) {
  const auto& cmds = experiment_commands();
  if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end()) {
    throw InvalidArgument("command must be one of construct, gcd-sum, lemma-check, zeta, resonate, search, measure; got '" +
                          c.command + "'");
  }
  const std::string& cmd = c.command;
  auto finite = [](const std::optional<double>& v, const char* key) {
    if (v && !std::isfinite(*v)) throw InvalidArgument(std::string(key) + " must be finite");
  };
  finite(c.alpha, "alpha");
  finite(c.T, "T");
  finite(c.tau, "tau");
  finite(c.t, "t");
  finite(c.t_start, "t_start");
  finite(c.t_stop, "t_stop");
  finite(c.x, "x");
  finite(c.step, "step");
  if (c.alpha && !(*c.alpha > 0.5 && *c.alpha < 1)) {
    throw InvalidArgument("alpha must lie in the open interval (1/2, 1), got " + fmt17(*c.alpha));
  }
  if (c.T && !(*c.T > 1)) throw InvalidArgument("T must be > 1, got " + fmt17(*c.T));
  if (c.tau && !(*c.tau > 0)) throw InvalidArgument("tau must be > 0, got " + fmt17(*c.tau));
  if (c.tau && c.alpha && !(*c.tau < tau_limit(*c.alpha))) {
    throw InvalidArgument("tau must satisfy tau < (2 alpha - 1)^(1-alpha)/6 = " + fmt17(tau_limit(*c.alpha)) +
                          ", got " + fmt17(*c.tau));
  }
  if (c.M && (*c.M < 1 || *c.M > kMaxPrimes)) {
    throw InvalidArgument("M must lie in [1, " + std::to_string(kMaxPrimes) + "], got " + std::to_string(*c.M));
  }
  if (c.R && (*c.R < 0 || (c.M && *c.R > *c.M))) throw InvalidArgument("R must lie in [0, M]");
  if (c.points && *c.points < 1) throw InvalidArgument("points must be >= 1");
  if (c.step && !(*c.step > 0 && *c.step <= 0.1)) throw InvalidArgument("step must lie in (0, 0.1]");
  if (c.refine && *c.refine < 0) throw InvalidArgument("refine must be >= 0");
  if (c.digits && (*c.digits < 1 || *c.digits > 30)) throw InvalidArgument("digits must lie in [1, 30]");
  if (c.x && !(*c.x >= 2)) throw InvalidArgument("x must be >= 2");
  if (c.samples && *c.samples < 1) throw InvalidArgument("samples must be >= 1");
  if (c.threads && *c.threads < 1) throw InvalidArgument("threads must be >= 1");
  if (c.mn_limit && *c.mn_limit < 1) throw InvalidArgument("mn_limit must be >= 1");
  if (c.method) parse_zeta_method(*c.method);
  if (c.mode) {
    static const std::vector<std::string> modes{"bruteforce", "product", "restricted", "chain", "compare"};
    if (std::find(modes.begin(), modes.end(), *c.mode) == modes.end()) {
      throw InvalidArgument("mode must be one of bruteforce, product, restricted, chain, compare; got '" + *c.mode + "'");
    }
  }
  if (c.lemma) {
    static const std::vector<std::string> lemmas{"1", "1a", "1b", "1c", "2", "3", "4"};
    if (std::find(lemmas.begin(), lemmas.end(), *c.lemma) == lemmas.end()) {
      throw InvalidArgument("lemma must be one of 1, 1a, 1b, 1c, 2, 3, 4; got '" + *c.lemma + "'");
    }
  }
  if (c.caps.max_exact_M && *c.caps.max_exact_M < 1) throw InvalidArgument("caps.max_exact_M must be >= 1");
  if (c.caps.max_T && !(*c.caps.max_T > 0)) throw InvalidArgument("caps.max_T must be > 0");
  if (c.caps.max_operations && !(*c.caps.max_operations > 0)) throw InvalidArgument("caps.max_operations must be > 0");

  auto require = [&](bool present, const char* key) {
    if (!present) throw InvalidArgument(cmd + " requires '" + key + "'");
  };
  auto require_M_or_T = [&]() {
    if (!c.M && !c.T) throw InvalidArgument(cmd + " requires 'M' or 'T'");
  };
  if (cmd == "construct") {
    if (!c.M) {
      require(c.T.has_value(), "M' or 'T");
      require(c.alpha.has_value(), "alpha");
    }
  } else if (cmd == "gcd-sum") {
    require(c.alpha.has_value(), "alpha");
    require_M_or_T();
  } else if (cmd == "lemma-check") {
    require(c.lemma.has_value(), "lemma");
    require(c.alpha.has_value(), "alpha");
    require_M_or_T();
  } else if (cmd == "zeta") {
    require(c.alpha.has_value(), "alpha");
    if (c.t_start || c.t_stop) {
      require(c.t_start.has_value(), "t_start");
      require(c.t_stop.has_value(), "t_stop");
      require(c.points.has_value(), "points");
      if (!(*c.t_stop >= *c.t_start)) throw InvalidArgument("t_stop must be >= t_start");
    } else {
      require(c.t.has_value(), "t");
    }
    if (c.method == "truncated") require(c.T.has_value(), "T");
  } else if (cmd == "resonate") {
    require(c.alpha.has_value(), "alpha");
    require(c.T.has_value(), "T");
  } else if (cmd == "search") {
    require(c.alpha.has_value(), "alpha");
    require(c.T.has_value(), "T");
  } else if (cmd == "measure") {
    require(c.alpha.has_value(), "alpha");
    require(c.tau.has_value(), "tau");
    require(c.T.has_value(), "T");
    require(c.samples.has_value(), "samples");
  }
}

// ---- report

bool RunReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

json RunReport::to_json() const {
  json j;
  j["command"] = command;
  j["version"] = version;
  j["wall_time_seconds"] = wall_time_seconds;
  j["config"] = config;
  json cs = json::array();
  for (const auto& c : checks) cs.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = cs;
  j["all_passed"] = all_passed();
  j["outputs"] = outputs;
  j["flags"] = flags;
  if (grid) j["grid"] = {{"columns", grid->columns}, {"rows", grid->rows}};
  return j;
}

RunReport RunReport::from_json(const json& doc) {
  try {
    RunReport r;
    r.command = doc.at("command").get<std::string>();
    r.version = doc.at("version").get<std::string>();
    r.wall_time_seconds = doc.at("wall_time_seconds").get<std::string>();
    r.config = doc.at("config");
    for (const auto& c : doc.at("checks")) {
      r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(), c.at("detail").get<std::string>()});
    }
    r.outputs = doc.at("outputs");
    r.flags = doc.at("flags");
    if (doc.contains("grid")) {
      PlotGrid g;
      g.columns = doc.at("grid").at("columns").get<std::vector<std::string>>();
      g.rows = doc.at("grid").at("rows").get<std::vector<std::vector<std::string>>>();
      r.grid = std::move(g);
    }
    return r;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed run report: ") + e.what());
  }
}

RunReport run(const ExperimentConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  RunReport rep;
  rep.command = config.command;
  rep.version = version();
  rep.config = config.to_json();
  const std::string& cmd = config.command;
  if (cmd == "construct") run_construct(config, rep);
  else if (cmd == "gcd-sum") run_gcd_sum(config, rep);
  else if (cmd == "lemma-check") run_lemma(config, rep);
  else if (cmd == "zeta") run_zeta(config, rep);
  else if (cmd == "resonate") run_resonate(config, rep);
  else if (cmd == "search") run_search(config, rep);
  else if (cmd == "measure") run_measure(config, rep);
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
  rep.wall_time_seconds = fmt17(dt.count());
  return rep;
}

std::string plot_data_csv(const RunReport& report) {
  if (!report.grid) throw InvalidArgument("report for '" + report.command + "' carries no grid-valued output");
  std::string s;
  const auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) s += ',';
      s += csv_field(fields[i]);
    }
    s += '\n';
  };
  line(report.grid->columns);
  for (const auto& row : report.grid->rows) line(row);
  return s;
}

void emit_plot_data(const RunReport& report, const std::string& path) { write_text(path, plot_data_csv(report)); }

RunOutcome execute(const ExperimentConfig& config) {
  RunOutcome o;
  try {
#ifdef _OPENMP
    if (config.threads) omp_set_num_threads(*config.threads);
#endif
    RunReport rep = run(config);
    if (config.out) write_text(*config.out, rep.to_json().dump(2) + "\n");
    if (config.csv) emit_plot_data(rep, *config.csv);
    if (!rep.all_passed()) {
      o.exit_code = 1;
      std::string failed;
      for (const auto& c : rep.checks) {
        if (!c.passed) failed += (failed.empty() ? "" : ", ") + c.name + (c.detail.empty() ? "" : " (" + c.detail + ")");
      }
      o.message = "failed checks: " + failed;
    }
    o.report = std::move(rep);
  } catch (const InvalidArgument& e) {
    o.exit_code = 2;
    o.message = e.what();
  } catch (const DomainError& e) {
    o.exit_code = 2;
    o.message = e.what();
  } catch (const json::exception& e) {
    o.exit_code = 2;
    o.message = e.what();
  } catch (const ResourceRefusal& e) {
    o.exit_code = 3;
    o.message = e.what();
  } catch (const InvariantViolation& e) {
    o.exit_code = 1;
    o.message = e.what();
  } catch (const std::exception& e) {
    o.exit_code = 1;
    o.message = e.what();
  }
  return o;
}

}  // namespace zr
