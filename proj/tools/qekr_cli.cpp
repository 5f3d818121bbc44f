// qekr: reproducible experiments on the sigma-biased measure of the subspace
// lattice. Every subcommand writes one JSON document (or a CSV projection)
// whose header echoes the resolved configuration.
//
// Exit codes: 0 ok, 2 usage or invalid parameters, 3 cap exceeded,
// 4 a verified invariant failed.

#include "qekr/certificate.hpp"
#include "qekr/families.hpp"
#include "qekr/measure.hpp"
#include "qekr/report.hpp"
#include "qekr/version.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace qekr;

constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;
constexpr int kExitInvariant = 4;

struct RunConfig {
  std::optional<unsigned> precision;
  unsigned threads = 1;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  std::size_t max_vertices = 400;
  std::size_t max_optima = 64;
  std::optional<double> time_budget;
  std::string format = "json";
  std::string output;

  unsigned bits(unsigned fallback = kDefaultPrecisionBits) const { return precision.value_or(fallback); }

  SearchConfig search() const {
    SearchConfig cfg;
    cfg.max_vertices = max_vertices;
    cfg.max_optima_reported = max_optima;
    cfg.threads = threads;
    cfg.time_budget = time_budget;
    cfg.enumeration_cap = enumeration_cap;
    return cfg;
  }
};

struct CsvTable {
  std::string mode;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Outcome {
  Json params = Json::object();
  Json result;
  std::map<std::string, bool> checks;
  std::optional<CsvTable> csv;

  bool ok() const {
    for (const auto& [name, passed] : checks) {
      if (!passed) return false;
    }
    return true;
  }
};

Json config_json(const RunConfig& cfg, unsigned bits) {
  Json out;
  out["precision"] = bits;
  out["threads"] = cfg.threads;
  out["enumeration_cap"] = cfg.enumeration_cap;
  out["max_vertices"] = cfg.max_vertices;
  out["max_optima"] = cfg.max_optima;
  out["time_budget"] = cfg.time_budget ? Json(*cfg.time_budget) : Json(nullptr);
  out["format"] = cfg.format;
  return out;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void emit(const std::string& command, const RunConfig& cfg, unsigned bits, const Outcome& out) {
  std::ostringstream text;
  if (cfg.format == "csv") {
    const CsvTable& table = *out.csv;
    text << "# qekr " << kVersion << " " << command << " csv-schema " << kCsvSchema << "\n";
    text << "# config " << config_json(cfg, bits).dump() << "\n";
    text << "# params " << out.params.dump() << "\n";
    text << "# mode " << table.mode << "\n";
    text << "# ok " << (out.ok() ? "true" : "false") << "\n";
    text << join(table.columns, ',') << "\n";
    for (const auto& row : table.rows) text << join(row, ',') << "\n";
  } else {
    Json doc;
    doc["qekr"] = kVersion;
    doc["command"] = command;
    doc["config"] = config_json(cfg, bits);
    doc["params"] = out.params;
    doc["result"] = out.result;
    Json checks = Json::object();
    for (const auto& [name, passed] : out.checks) checks[name] = passed;
    doc["checks"] = std::move(checks);
    doc["ok"] = out.ok();
    text << doc.dump(2) << "\n";
  }
  if (cfg.output.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) throw Error(ErrorKind::Domain, "cannot open output file " + cfg.output);
    file << text.str();
  }
}

Rational parse_exact(const std::string& name, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const Error&) {
    throw Error(ErrorKind::Domain, name + " is not a rational number: " + text);
  }
}

bool enumerable(int n, int q, const RunConfig& cfg) {
  return n <= 64 && count_all(n, q) <= cfg.enumeration_cap;
}

std::vector<int> n_grid(int lo, int hi, int step) {
  if (step < 1 || lo < 1 || hi < lo) throw Error(ErrorKind::Domain, "need 1 <= n-min <= n-max and n-step >= 1");
  std::vector<int> out;
  for (int n = lo; n <= hi; n += step) out.push_back(n);
  return out;
}

bool strictly_decreasing(const std::vector<Real>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

bool strictly_increasing(const std::vector<Real>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

constexpr unsigned kCsvDigits = 25;

// --- measure ---

struct MeasureArgs {
  int q = 2;
  int n = 0;
  std::string sigma;
  std::string theta;
  int t = 1;
};

template <class T>
Json value_json(const T& v) {
  return scalar_json(Scalar(v));
}

template <class T>
bool agrees(const T& a, const T& b, unsigned bits) {
  if constexpr (std::is_same_v<T, Rational>) {
    return a == b;
  } else {
    return close_relative(a, b, real_tolerance(bits));
  }
}

template <class T>
void measure_body(const MeasureContext<T>& ctx, const MeasureArgs& a, const RunConfig& cfg, unsigned bits,
                  Outcome& out) {
  out.result["context"] = context_json(ctx);
  T total = from_int<T>(0);
  for (const auto& m : ctx.layer_mass) total += m;
  out.result["layer_mass_sum"] = value_json(total);
  out.checks["layer_masses_sum_to_one"] = agrees(total, from_int<T>(1), bits);

  Json stars = Json::array();
  for (int t = 0; t <= ctx.n; ++t) {
    stars.push_back(Json{{"t", t}, {"closed", value_json(measure_star_closed(ctx, t))}});
  }
  out.result["star_closed"] = std::move(stars);

  if (a.t >= 1 && a.t <= ctx.n && enumerable(ctx.n, ctx.q, cfg)) {
    const Family star = star_family(ctx.n, ctx.q, a.t, std::nullopt, cfg.enumeration_cap);
    const Family top = top_family(ctx.n, ctx.q, a.t, cfg.enumeration_cap);
    const T star_enum = measure_family(ctx, star);
    const T star_closed = measure_star_closed(ctx, a.t);
    out.result["named_families"] = Json{
        {"t", a.t},
        {"star", {{"size", star.size()}, {"measure", value_json(star_enum)}}},
        {"top", {{"size", top.size()}, {"measure", value_json(measure_family(ctx, top))}}},
    };
    out.checks["star_closed_matches_enumeration"] = agrees(star_enum, star_closed, bits);
    out.checks["star_t_intersecting"] = is_t_intersecting(star, a.t);
    out.checks["top_t_intersecting"] = is_t_intersecting(top, a.t);
  } else {
    out.result["named_families"] = nullptr;
  }
}

Outcome cmd_measure(const MeasureArgs& a, const RunConfig& cfg, unsigned bits) {
  Outcome out;
  out.params = Json{{"q", a.q}, {"n", a.n}, {"t", a.t}};
  if (!a.sigma.empty() && !a.theta.empty()) throw Error(ErrorKind::Domain, "give --sigma or --theta, not both");
  if (a.sigma.empty() && a.theta.empty()) throw Error(ErrorKind::Domain, "one of --sigma or --theta is required");
  if (!a.sigma.empty()) {
    const Rational sigma = parse_exact("sigma", a.sigma);
    out.params["sigma"] = to_string(sigma);
    measure_body(make_context(a.q, a.n, sigma), a, cfg, bits, out);
    return out;
  }
  const Scalar theta = Scalar(parse_exact("theta", a.theta));
  out.params["theta"] = to_string(theta);
  const Scalar sigma = sigma_theta(theta, a.n, a.q, bits);
  if (const auto* exact = std::get_if<Rational>(&sigma)) {
    measure_body(make_context(a.q, a.n, *exact), a, cfg, bits, out);
  } else {
    measure_body(make_theta_context(theta, a.n, a.q, bits), a, cfg, bits, out);
  }
  if (a.t >= 0 && a.t <= a.n) {
    PrecisionScope scope(bits);
    const Real product = measure_star_product_form(theta, a.n, a.q, a.t, bits);
    const Real closed = to_real(visit_scalar(sigma, [&](const auto& s) {
      return measure_star_closed(make_context(a.q, a.n, s), a.t);
    }));
    out.result["star_product_form"] = real_json(product);
    out.checks["star_product_form_matches_closed"] = close_relative(product, closed, real_tolerance(bits));
  }
  return out;
}

// --- enumerate ---

struct EnumerateArgs {
  int n = 3;
  int q = 2;
  std::optional<int> k;
  bool hex = false;
};

Outcome cmd_enumerate(const EnumerateArgs& a, const RunConfig& cfg) {
  Outcome out;
  out.params = Json{{"n", a.n}, {"q", a.q}, {"k", a.k ? Json(*a.k) : Json(nullptr)}, {"hex", a.hex}};
  if (a.n < 0) throw Error(ErrorKind::Domain, "n must be nonnegative");
  if (a.k && (*a.k < 0 || *a.k > a.n)) throw Error(ErrorKind::Domain, "k must lie in [0, n]");
  const int lo = a.k.value_or(0);
  const int hi = a.k.value_or(a.n);
  Json layers = Json::array();
  CsvTable table{"exact", {"k", "count", "gaussian", "match"}, {}};
  BigInt total = 0;
  bool all_match = true;
  for (int k = lo; k <= hi; ++k) {
    const auto members = enumerate_grassmannian(a.n, k, a.q, cfg.enumeration_cap);
    const BigInt expected = gaussian_count(a.n, k, a.q);
    const bool match = BigInt(members.size()) == expected;
    all_match = all_match && match;
    total += members.size();
    Json layer{{"k", k}, {"count", members.size()}, {"gaussian", bigint_json(expected)}, {"match", match}};
    if (a.hex) {
      Json hex = Json::array();
      for (const auto& s : members) hex.push_back(s.hex());
      layer["members"] = std::move(hex);
    }
    layers.push_back(std::move(layer));
    table.rows.push_back({std::to_string(k), std::to_string(members.size()), expected.str(), match ? "true" : "false"});
  }
  out.result = Json{{"mode", "exact"}, {"layers", std::move(layers)}, {"total", bigint_json(total)}};
  out.checks["counts_match_gaussian"] = all_match;
  out.csv = std::move(table);
  return out;
}

// --- search ---

struct SearchArgs {
  int n = 3;
  int q = 2;
  std::string sigma;
  int t = 1;
};

bool verify_optima(const SearchResult& r, const ExactContext& ctx) {
  for (const auto& f : r.optima) {
    if (!is_t_intersecting(f, r.t) || measure_family(ctx, f) != r.optimum) return false;
  }
  return true;
}

Outcome cmd_search(const SearchArgs& a, const RunConfig& cfg) {
  Outcome out;
  const Rational sigma = parse_exact("sigma", a.sigma);
  out.params = Json{{"n", a.n}, {"q", a.q}, {"sigma", to_string(sigma)}, {"t", a.t}};
  const ExactContext ctx = make_context(a.q, a.n, sigma);
  const SearchResult r = max_measure_t_intersecting(ctx, a.t, cfg.search());
  out.result = search_json(r);
  if (a.t <= a.n) out.result["star_measure"] = rational_json(measure_star_closed(ctx, a.t));
  out.checks["optima_verified"] = verify_optima(r, ctx);
  if (r.complete && a.t <= a.n) out.checks["optimum_at_least_star"] = r.optimum >= measure_star_closed(ctx, a.t);
  return out;
}

// --- certify ---

struct CertifyArgs {
  int n = 3;
  int q = 2;
  std::string sigma;
  bool full = false;
  std::size_t max_points = kDefaultFullCertificatePoints;
};

Outcome cmd_certify(const CertifyArgs& a, const RunConfig& cfg) {
  Outcome out;
  const Rational sigma = parse_exact("sigma", a.sigma);
  out.params = Json{{"n", a.n}, {"q", a.q}, {"sigma", to_string(sigma)}, {"full", a.full}};
  const CertificateBundle b = certify(a.n, sigma, a.q);
  out.result = certificate_json(b);
  out.checks["f_formula_matches_similarity"] = b.f_formula_matches;
  out.checks["f_properties"] = b.f_checks.all();
  out.checks["shift_identity"] = b.spectrum.shift_identity;
  out.checks["block_eigenvalues"] = b.spectrum.block_eigenvalues;
  out.checks["condition_matches_threshold"] = b.condition == (sigma <= b.threshold);
  out.checks["psd_iff_condition"] = b.min_eigenvalue_nonnegative == b.condition;
  if (!a.full) return out;

  const FullCertificate c = build_full_certificate(a.n, a.q, sigma, a.max_points);
  Json full = full_certificate_json(c);
  const Family star = star_family(a.n, a.q, 1, std::nullopt, cfg.enumeration_cap);
  const DualityGap gap = weak_duality_check(c, star);
  full["point_star_duality"] = duality_json(gap);
  full["hoffman"] = hoffman_json(hoffman_pipeline(c));
  out.checks["full_spectrum_matches_blocks"] = c.spectrum_deviation < 1e-9;
  out.checks["full_support_disjoint_pairs"] = c.support_violation == 0.0;
  out.checks["full_psd_matches_exact"] = c.psd == b.min_eigenvalue_nonnegative;
  out.checks["point_star_duality_gap"] = std::abs(gap.gap) < 1e-9;
  if (sigma < b.threshold) {
    const KernelReport k = kernel_analysis(c, {star});
    full["kernel"] = kernel_json(k);
    out.checks["kernel_dimension"] = k.kernel_dimension == k.expected_dimension;
    out.checks["kernel_spanned_by_construction"] = k.spans_kernel;
  } else {
    full["kernel"] = nullptr;
  }
  out.result["full"] = std::move(full);
  return out;
}

// --- tails ---

struct TailsArgs {
  std::string kind = "above-half";
  std::string theta = "0.3";
  int t = 1;
  int q = 2;
  int n_min = 10;
  int n_max = 40;
  int n_step = 2;
  std::string delta;
};

Outcome cmd_tails(const TailsArgs& a, const RunConfig&, unsigned bits) {
  Outcome out;
  const Scalar theta = Scalar(parse_exact("theta", a.theta));
  if (a.kind != "above-half" && a.kind != "below-middle" && a.kind != "above-shifted") {
    throw Error(ErrorKind::Domain, "kind must be above-half, below-middle or above-shifted");
  }
  PrecisionScope scope(bits);
  Real delta = a.delta.empty() ? default_lower_tail_delta(theta, bits) : Real(parse_exact("delta", a.delta));
  out.params = Json{{"kind", a.kind}, {"theta", to_string(theta)}, {"t", a.t},     {"q", a.q},
                    {"n_min", a.n_min}, {"n_max", a.n_max},          {"n_step", a.n_step}};
  if (a.kind == "below-middle") out.params["delta"] = real_json(delta);

  const std::string mode = "real@" + std::to_string(bits);
  CsvTable table{mode, {"n", "raw_tail", "normalizer", "normalized"}, {}};
  Json rows = Json::array();
  std::vector<Real> normalized;
  bool monotone_all = true;
  for (int n : n_grid(a.n_min, a.n_max, a.n_step)) {
    TailReport r = a.kind == "above-half"     ? tail_above_half(theta, n, a.q, a.t, bits)
                   : a.kind == "below-middle" ? tail_below_middle(theta, n, a.q, a.t, delta, bits)
                                              : tail_above_shifted(theta, n, a.q, a.t, bits);
    const MonotoneProfile profile = monotone_profile(make_theta_context(theta, n, a.q, bits), theta, a.t);
    monotone_all = monotone_all && profile.holds;
    Json row = tail_json(r);
    row["monotone"] = monotone_json(profile);
    rows.push_back(std::move(row));
    table.rows.push_back({std::to_string(n), r.tail.str(kCsvDigits), r.normalizer.str(kCsvDigits),
                          r.normalized.str(kCsvDigits)});
    normalized.push_back(r.normalized);
  }
  const bool decreasing = strictly_decreasing(normalized);
  const bool decays = normalized.front().is_zero() ||
                      normalized.back() < Real(Rational(1, 1000)) * normalized.front();
  out.result = Json{{"mode", mode}, {"rows", std::move(rows)}};
  out.checks["strictly_decreasing"] = decreasing;
  out.checks["final_below_1e-3_initial"] = decays;
  out.checks["monotone_profile_holds"] = monotone_all;
  out.csv = std::move(table);
  return out;
}

// --- limits ---

struct LimitsArgs {
  std::string family = "top";
  std::string theta = "0.75";
  std::string theta2;
  int t = 1;
  int q = 2;
  int n_min = 10;
  int n_max = 40;
  int n_step = 2;
};

Outcome cmd_limits(const LimitsArgs& a, const RunConfig&, unsigned bits) {
  Outcome out;
  if (a.family != "top" && a.family != "star" && a.family != "pair") {
    throw Error(ErrorKind::Domain, "family must be top, star or pair");
  }
  const Rational theta_q = parse_exact("theta", a.theta);
  const Scalar theta = Scalar(theta_q);
  const Rational theta2_q = a.theta2.empty() ? theta_q : parse_exact("theta2", a.theta2);
  const Scalar theta2 = Scalar(theta2_q);
  out.params = Json{{"family", a.family}, {"theta", to_string(theta_q)}, {"t", a.t},         {"q", a.q},
                    {"n_min", a.n_min},   {"n_max", a.n_max},            {"n_step", a.n_step}};
  if (a.family == "pair") out.params["theta2"] = to_string(theta2_q);
  if (a.t < 1) throw Error(ErrorKind::Domain, "t must be at least 1");

  PrecisionScope scope(bits);
  const Real qr(static_cast<long>(a.q));
  Real limit(1L);
  if (a.family == "star") limit = pow(qr, Real(-(1 - theta_q) * a.t));
  if (a.family == "pair") limit = pow(qr, Real(-(2 - theta_q - theta2_q) * a.t));

  const std::string mode = "real@" + std::to_string(bits);
  CsvTable table{mode, {"n", "measure", "nth_root", "limit", "deviation"}, {}};
  Json rows = Json::array();
  std::vector<Real> roots;
  std::vector<Real> deviations;
  bool top_intersecting = true;
  for (int n : n_grid(a.n_min, a.n_max, a.n_step)) {
    Real measure;
    Real root;
    if (a.family == "top") {
      const RealContext ctx = make_theta_context(theta, n, a.q, bits);
      measure = Real(0L);
      for (int k = 0; k <= n; ++k) {
        if (2 * k >= n + a.t) measure += ctx.layer_mass[k];
      }
      root = pow(measure, Real(Rational(1, n)));
      if (n <= 5 && count_all(n, a.q) <= 2000) top_intersecting = top_intersecting && is_t_intersecting(top_family(n, a.q, a.t), a.t);
    } else if (a.family == "star") {
      measure = measure_star_product_form(theta, n, a.q, a.t, bits);
      root = pow(measure, Real(Rational(1, n)));
    } else {
      root = g_lower_bound(theta, theta2, n, a.q, a.t, bits);
      measure = measure_star_product_form(theta, n, a.q, a.t, bits) *
                measure_star_product_form(theta2, n, a.q, a.t, bits);
    }
    const Real deviation = abs(root - limit);
    rows.push_back(Json{{"n", n},
                        {"measure", real_json(measure)},
                        {"nth_root", real_json(root)},
                        {"limit", real_json(limit)},
                        {"deviation", real_json(deviation)}});
    table.rows.push_back({std::to_string(n), measure.str(kCsvDigits), root.str(kCsvDigits), limit.str(kCsvDigits),
                          deviation.str(kCsvDigits)});
    roots.push_back(root);
    deviations.push_back(deviation);
  }
  out.result = Json{{"mode", mode}, {"rows", std::move(rows)}};
  out.checks["deviation_strictly_decreasing"] = strictly_decreasing(deviations);
  if (a.family == "top") {
    out.checks["nth_root_strictly_increasing"] = strictly_increasing(roots);
    out.checks["top_family_t_intersecting"] = top_intersecting;
  }
  out.csv = std::move(table);
  return out;
}

// --- moments ---

struct MomentsArgs {
  std::string theta = "0.5";
  int n = 4;
  int q = 2;
};

Outcome cmd_moments(const MomentsArgs& a, const RunConfig&, unsigned bits) {
  Outcome out;
  const Scalar theta = Scalar(parse_exact("theta", a.theta));
  out.params = Json{{"theta", to_string(theta)}, {"n", a.n}, {"q", a.q}};
  const MomentReport r = moments(theta, a.n, a.q, bits);
  out.result = moments_json(r);
  out.checks["closed_forms_match_direct_sums"] = r.closed_matches_direct;
  return out;
}

// --- conjecture ---

struct ConjectureArgs {
  std::string p = "0.3";
  int q = 2;
  int t = 1;
  int n_min = 2;
  int n_max = 4;
};

Outcome cmd_conjecture(const ConjectureArgs& a, const RunConfig& cfg, unsigned bits) {
  Outcome out;
  const Scalar p = Scalar(parse_exact("p", a.p));
  out.params = Json{{"p", to_string(p)}, {"q", a.q}, {"t", a.t}, {"n_min", a.n_min}, {"n_max", a.n_max}};
  PrecisionScope scope(bits);
  CsvTable table{"exact",
                 {"n", "sigma", "optimum", "star_bound", "ratio", "complete", "optima_count", "point_star_optima"},
                 {}};
  Json rows = Json::array();
  bool verified = true;
  for (int n : n_grid(a.n_min, a.n_max, 1)) {
    const Scalar s = sigma_conjecture(p, n, a.q, bits);
    const Rational sigma = is_exact(s) ? std::get<Rational>(s) : to_rational(std::get<Real>(s));
    const ExactContext ctx = make_context(a.q, n, sigma);
    const SearchResult r = max_measure_t_intersecting(ctx, a.t, cfg.search());
    verified = verified && verify_optima(r, ctx);
    const Rational bound = measure_star_closed(ctx, a.t);
    const Rational ratio = r.optimum / bound;
    std::size_t stars = 0;
    for (const auto& f : r.optima) stars += point_star_center(f, a.t).has_value() ? 1 : 0;
    rows.push_back(Json{{"n", n},
                        {"sigma_source", scalar_json(s)},
                        {"sigma", rational_json(sigma)},
                        {"optimum", rational_json(r.optimum)},
                        {"star_bound", rational_json(bound)},
                        {"ratio", rational_json(ratio)},
                        {"ratio_decimal", Real(ratio).str(kCsvDigits)},
                        {"complete", r.complete},
                        {"optima_count", r.optima_count},
                        {"point_star_optima", stars},
                        {"explored_nodes", r.explored_nodes}});
    table.rows.push_back({std::to_string(n), to_string(sigma), to_string(r.optimum), to_string(bound),
                          to_string(ratio), r.complete ? "true" : "false", std::to_string(r.optima_count),
                          std::to_string(stars)});
  }
  out.result = Json{{"mode", "exact"}, {"rows", std::move(rows)}};
  out.checks["optima_verified"] = verified;
  out.csv = std::move(table);
  return out;
}

// --- counterexample ---

struct CounterexampleArgs {
  bool subspace = false;
  bool subset = false;
  int l = 3;
  int q = 2;
  int k = 2;
  int n = 34;
  std::optional<int> subset_l;
};

Outcome cmd_counterexample(const CounterexampleArgs& a, const RunConfig& cfg) {
  Outcome out;
  const bool both = !a.subspace && !a.subset;
  const int subset_l = a.subset_l.value_or(a.subset ? a.l : 18);
  out.result = Json{{"mode", "exact"}};
  if (a.subspace || both) {
    out.params["subspace"] = Json{{"l", a.l}, {"q", a.q}};
    const SubspacePairReport r = subspace_pair_counterexample(a.l, a.q, cfg.enumeration_cap);
    Json j = subspace_pair_json(r);
    j["comparison"] = r.product.str() + (r.exceeds ? " > " : " <= ") + r.ekr_product.str();
    j["uniform_bound_oracle"] = oracle_json(uniform_bound_oracle(r.u, r.w, 1));
    out.result["subspace"] = std::move(j);
    out.checks["subspace_cross_intersecting"] = r.cross_intersecting;
    out.checks["subspace_product_exceeds"] = r.exceeds;
  }
  if (a.subset || both) {
    out.params["subset"] = Json{{"k", a.k}, {"l", subset_l}, {"n", a.n}};
    const SubsetCheckReport r = subset_counterexample_check(a.k, subset_l, a.n);
    Json j = subset_check_json(r);
    j["comparison"] = r.lhs.str() + (r.strict_inequality ? " > " : " <= ") + r.rhs.str();
    j["product_comparison"] = r.product.str() + (r.product_exceeds ? " > " : " <= ") + r.ekr_product.str();
    out.result["subset"] = std::move(j);
  }
  return out;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CapExceeded:
      return kExitCap;
    case ErrorKind::Invariant:
      return kExitInvariant;
    case ErrorKind::Domain:
    case ErrorKind::Budget:
      break;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qekr: the sigma-biased measure on subspaces of F_q^n, its intersecting families, and the dual "
               "certificate for the sharp bound sigma/(1+sigma)."};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--precision", cfg.precision, "MPFR precision in bits for real-mode values (default 256; 512 for tails)")
      ->envname("QEKR_PRECISION")
      ->check(CLI::Range(32u, 1u << 16));
  app.add_option("--threads", cfg.threads, "worker threads for the exact search")
      ->envname("QEKR_THREADS")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  app.add_option("--enum-cap", cfg.enumeration_cap, "largest number of subspaces any enumeration may produce")
      ->envname("QEKR_ENUM_CAP")
      ->capture_default_str();
  app.add_option("--max-vertices", cfg.max_vertices, "vertex cap for the exact search")
      ->envname("QEKR_MAX_VERTICES")
      ->capture_default_str();
  app.add_option("--max-optima", cfg.max_optima, "optimal families reported by the search")->capture_default_str();
  app.add_option("--time-budget", cfg.time_budget, "search wall-clock budget in seconds (incomplete result when hit)");
  app.add_option("--format", cfg.format, "json (canonical) or csv (tabular commands only)")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--output,-o", cfg.output, "write the report to a file instead of stdout");

  MeasureArgs measure_args;
  auto* measure = app.add_subcommand("measure", "layer distribution, star and top-family measures");
  measure->add_option("--q", measure_args.q, "field order")->capture_default_str();
  measure->add_option("--n", measure_args.n, "ambient dimension")->required();
  measure->add_option("--sigma", measure_args.sigma, "bias, exact rational (a/b or decimal)");
  measure->add_option("--theta", measure_args.theta, "use sigma = q^{-(1-theta)n}");
  measure->add_option("--t", measure_args.t, "star dimension for the named families")->capture_default_str();

  EnumerateArgs enumerate_args;
  auto* enumerate = app.add_subcommand("enumerate", "enumerate subspaces and compare with Gaussian binomials");
  enumerate->add_option("--n", enumerate_args.n, "ambient dimension")->required();
  enumerate->add_option("--q", enumerate_args.q, "field order")->capture_default_str();
  enumerate->add_option("--k", enumerate_args.k, "single layer");
  enumerate->add_flag("--hex", enumerate_args.hex, "list members as hex RREF rows");

  SearchArgs search_args;
  auto* search = app.add_subcommand("search", "exact maximum-measure t-intersecting family");
  search->add_option("--n", search_args.n, "ambient dimension")->required();
  search->add_option("--q", search_args.q, "field order")->capture_default_str();
  search->add_option("--sigma", search_args.sigma, "bias, exact rational")->required();
  search->add_option("--t", search_args.t, "intersection parameter")->capture_default_str();

  CertifyArgs certify_args;
  auto* certify_cmd = app.add_subcommand("certify", "exact dual certificate; --full assembles S' numerically");
  certify_cmd->add_option("--n", certify_args.n, "ambient dimension")->required();
  certify_cmd->add_option("--q", certify_args.q, "field order")->capture_default_str();
  certify_cmd->add_option("--sigma", certify_args.sigma, "bias, exact rational")->required();
  certify_cmd->add_flag("--full", certify_args.full, "assemble the full matrix over all subspaces");
  certify_cmd->add_option("--max-points", certify_args.max_points, "subspace cap for --full")->capture_default_str();

  TailsArgs tails_args;
  auto* tails = app.add_subcommand("tails", "normalized layer-distribution tails over an n grid");
  tails->add_option("--kind", tails_args.kind,
                    "above-half (k > n/2), below-middle (k < (n+t)/2) or above-shifted (k > (n-t-1)/2)")
      ->capture_default_str();
  tails->add_option("--theta", tails_args.theta, "theta in (0,1)")->capture_default_str();
  tails->add_option("--t", tails_args.t, "intersection parameter")->capture_default_str();
  tails->add_option("--q", tails_args.q, "field order")->capture_default_str();
  tails->add_option("--n-min", tails_args.n_min)->capture_default_str();
  tails->add_option("--n-max", tails_args.n_max)->capture_default_str();
  tails->add_option("--n-step", tails_args.n_step)->capture_default_str();
  tails->add_option("--delta", tails_args.delta, "exponent for below-middle (default (theta-1/2)^2/4)");

  LimitsArgs limits_args;
  auto* limits = app.add_subcommand("limits", "n-th roots of family measures against their limits");
  limits->add_option("--family", limits_args.family, "top, star or pair")->capture_default_str();
  limits->add_option("--theta", limits_args.theta, "theta in (0,1)")->capture_default_str();
  limits->add_option("--theta2", limits_args.theta2, "second theta for --family pair (default theta)");
  limits->add_option("--t", limits_args.t, "intersection parameter")->capture_default_str();
  limits->add_option("--q", limits_args.q, "field order")->capture_default_str();
  limits->add_option("--n-min", limits_args.n_min)->capture_default_str();
  limits->add_option("--n-max", limits_args.n_max)->capture_default_str();
  limits->add_option("--n-step", limits_args.n_step)->capture_default_str();

  MomentsArgs moments_args;
  auto* moments_cmd = app.add_subcommand("moments", "moments of X = q^{k - theta n}, closed form and direct sum");
  moments_cmd->add_option("--theta", moments_args.theta, "theta in (0,1)")->capture_default_str();
  moments_cmd->add_option("--n", moments_args.n)->capture_default_str();
  moments_cmd->add_option("--q", moments_args.q)->capture_default_str();

  ConjectureArgs conjecture_args;
  auto* conjecture = app.add_subcommand("conjecture", "search optimum against sigma/(1+sigma) at sigma = [pn]/([n]-[pn])");
  conjecture->add_option("--p", conjecture_args.p, "p in (0,1)")->capture_default_str();
  conjecture->add_option("--q", conjecture_args.q)->capture_default_str();
  conjecture->add_option("--t", conjecture_args.t)->capture_default_str();
  conjecture->add_option("--n-min", conjecture_args.n_min)->capture_default_str();
  conjecture->add_option("--n-max", conjecture_args.n_max)->capture_default_str();

  CounterexampleArgs cx_args;
  auto* cx = app.add_subcommand("counterexample", "cross-intersecting pairs beating the product bound when n = k + l");
  cx->add_flag("--subspace", cx_args.subspace, "lines in a plane against l-spaces through it (k = 1)");
  cx->add_flag("--subset", cx_args.subset, "binomial arithmetic for subsets");
  cx->add_option("--l", cx_args.l, "l for the subspace pair (and for --subset when given alone)")->capture_default_str();
  cx->add_option("--q", cx_args.q)->capture_default_str();
  cx->add_option("--k", cx_args.k, "subset k")->capture_default_str();
  cx->add_option("--n", cx_args.n, "subset n")->capture_default_str();
  cx->add_option("--subset-l", cx_args.subset_l, "subset l (default 18)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const bool tabular = command == "tails" || command == "limits" || command == "conjecture" || command == "enumerate";
  try {
    if (cfg.format == "csv" && !tabular) {
      throw Error(ErrorKind::Domain, "csv output is available for tails, limits, conjecture and enumerate");
    }
    const unsigned bits = cfg.bits(command == "tails" ? kTailPrecisionBits : kDefaultPrecisionBits);
    Outcome out;
    if (sub == measure) out = cmd_measure(measure_args, cfg, bits);
    else if (sub == enumerate) out = cmd_enumerate(enumerate_args, cfg);
    else if (sub == search) out = cmd_search(search_args, cfg);
    else if (sub == certify_cmd) out = cmd_certify(certify_args, cfg);
    else if (sub == tails) out = cmd_tails(tails_args, cfg, bits);
    else if (sub == limits) out = cmd_limits(limits_args, cfg, bits);
    else if (sub == moments_cmd) out = cmd_moments(moments_args, cfg, bits);
    else if (sub == conjecture) out = cmd_conjecture(conjecture_args, cfg, bits);
    else out = cmd_counterexample(cx_args, cfg);
    emit(command, cfg, bits, out);
    return out.ok() ? 0 : kExitInvariant;
  } catch (const Error& e) {
    std::cerr << "qekr " << command << ": error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "qekr " << command << ": error: " << e.what() << "\n";
    return kExitUsage;
  }
}
