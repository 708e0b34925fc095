#include "commands.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "output.hpp"
#include "srtlab/criteria.hpp"
#include "srtlab/errors.hpp"
#include "srtlab/montecarlo.hpp"
#include "srtlab/renewal.hpp"
#include "srtlab/srt_diag.hpp"

namespace srtlab::cli {

namespace fs = std::filesystem;

namespace {

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

SlowlyVarying make_L(const LawConfig& c) {
  if (c.L == "log_power") return SlowlyVarying::log_power(c.beta);
  if (c.L == "reciprocal_log") return SlowlyVarying::reciprocal_log();
  return SlowlyVarying::constant();
}

json base_summary(const LatticeLaw& F) {
  json s = {{"family", F.family()},
            {"h", F.h()},
            {"p", F.p()},
            {"q", F.q()},
            {"two_sided", F.two_sided()},
            {"table_lo", F.table_lo()},
            {"table_hi", F.table_hi()},
            {"atoms", F.atoms().size()},
            {"total_mass", F.total_mass()},
            {"hash", hex(F.content_hash())}};
  if (F.tail_index()) {
    const TailIndexFunction& A = F.A();
    s["alpha"] = A.alpha();
    s["A"] = json::parse(A.serialize());
    json tail = json::array();
    for (int e : {10, 20, 30}) {
      const double x = std::exp2(e);
      json row = {{"x", x}, {"right", A(x) * mass_interval(F, x, INFINITY) / F.p()}};
      if (F.q() > 0.0) row["left"] = A(x) * mass_interval(F, -INFINITY, -x) / F.q();
      tail.push_back(row);
    }
    s["tail_ratio"] = tail;
  }
  return s;
}

json clusters_summary(const CounterexampleLaw& C) {
  json sizes = json::array();
  for (const Cluster& c : C.clusters) sizes.push_back({{"n", c.n}, {"x_n", c.x_n}, {"points", c.index.size()}});
  return {{"n0", C.n0},       {"c1", C.c1},         {"c2", C.c2},
          {"clusters", C.clusters.size()}, {"cluster_sizes", sizes},
          {"min_gap", C.min_gap}, {"max_rounding", C.max_rounding}};
}

fs::path out_path(const ExperimentConfig& c, const std::string& name) { return fs::path(c.out) / name; }

const TailIndexFunction& need_A(const LatticeLaw& F, const char* what) {
  if (!F.tail_index()) throw InvariantError(std::string(what) + " needs a law with a tail index function");
  return F.A();
}

std::vector<double> dyadic_up_to(double lo, double hi) {
  std::vector<double> xs;
  for (double x = lo; x <= hi; x *= 2.0) xs.push_back(x);
  if (xs.empty() || xs.back() < hi) xs.push_back(hi);
  return xs;
}

bool decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1]) && !(v[i] == 0.0 && v[i - 1] == 0.0)) return false;
  return true;
}

// renewal cache -----------------------------------------------------------

fs::path cache_file(const ExperimentConfig& c, const LatticeLaw& F, const std::string& method, std::int64_t n_max) {
  std::string name = "renewal-" + hex(F.content_hash()) + "-K" + std::to_string(c.renewal.K) + "-" + method;
  if (n_max > 0) name += "-n" + std::to_string(n_max);
  return fs::path(c.cache) / (name + ".csv");
}

void save_table(const fs::path& path, const RenewalTable& t) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write cache file '" + tmp.string() + "'");
    json header = {{"format", "srtlab-renewal/1"},    {"h", t.h},         {"K", t.K},
                   {"method", to_string(t.method)}, {"law_hash", hex(t.law_hash)}, {"n_max", t.n_max},
                   {"c_sup", t.c_sup},              {"clamped_count", t.ledger.clamped_count},
                   {"max_clamped", t.ledger.max_clamped}, {"fft_products", t.ledger.fft_products}};
    out << header.dump() << "\nk,u,U,truncation_error\n";
    for (std::int64_t k = 0; k <= t.K; ++k) {
      const auto i = static_cast<std::size_t>(k);
      out << k << ',' << fmt(t.u[i]) << ',' << fmt(t.cumulative[i]) << ','
          << fmt(t.truncation_error.empty() ? 0.0 : t.truncation_error[i]) << '\n';
    }
  }
  fs::rename(tmp, path);
}

std::optional<RenewalTable> load_table(const fs::path& path, const LatticeLaw& F, std::int64_t K) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string line;
  if (!std::getline(in, line)) return std::nullopt;
  const json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || header.value("format", "") != "srtlab-renewal/1" ||
      header.value("law_hash", "") != hex(F.content_hash()) || header.value("K", std::int64_t{-1}) != K)
    return std::nullopt;
  if (!std::getline(in, line) || line != "k,u,U,truncation_error") return std::nullopt;
  RenewalTable t;
  t.h = header.at("h").get<double>();
  t.K = K;
  t.method = renewal_method_from_string(header.at("method").get<std::string>());
  t.law_hash = F.content_hash();
  t.n_max = header.at("n_max").get<std::int64_t>();
  t.c_sup = header.at("c_sup").get<double>();
  t.ledger.clamped_count = header.at("clamped_count").get<std::uint64_t>();
  t.ledger.max_clamped = header.at("max_clamped").get<double>();
  t.ledger.fft_products = header.at("fft_products").get<std::uint64_t>();
  std::vector<double> trunc;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string k, u, U, e;
    if (!std::getline(row, k, ',') || !std::getline(row, u, ',') || !std::getline(row, U, ',') ||
        !std::getline(row, e))
      return std::nullopt;
    t.u.push_back(std::stod(u));
    t.cumulative.push_back(std::stod(U));
    trunc.push_back(std::stod(e));
  }
  if (t.u.size() != static_cast<std::size_t>(K + 1)) return std::nullopt;
  if (F.two_sided()) t.truncation_error = std::move(trunc);
  return t;
}

// criteria ----------------------------------------------------------------

json grid_verdict(const CriterionGrid& g) {
  json rows = json::array();
  for (std::size_t i = 0; i < g.eta.size(); ++i)
    rows.push_back({{"eta", g.eta[i]}, {"slope", g.fits[i].slope}, {"r_squared", g.fits[i].r_squared}});
  json v = {{"criterion", g.criterion},
            {"verdict", to_string(g.trend)},
            {"rows", rows},
            {"halving_rates", g.halving_rates},
            {"csv", "criterion_" + g.criterion + ".csv"}};
  if (g.T) v["T"] = *g.T;
  return v;
}

void grid_csv(const fs::path& path, const CriterionGrid& g) {
  CsvWriter w(path, {"eta", "x", "Q"});
  for (std::size_t i = 0; i < g.eta.size(); ++i)
    for (std::size_t j = 0; j < g.x.size(); ++j) {
      w << g.eta[i] << g.x[j] << g.Q[i][j];
      w.end_row();
    }
}

void grid_svg(const fs::path& path, const CriterionGrid& g) {
  std::vector<Series> s;
  for (std::size_t i = 0; i < g.eta.size(); ++i) s.push_back({"eta=" + fmt(g.eta[i]), g.x, g.Q[i]});
  write_svg_chart(path, {g.criterion, "x", "Q", true, true}, s);
}

}  // namespace

ResolvedLaw resolve_law(const LawConfig& c) {
  if (c.family == "pareto") {
    const TailIndexFunction A(c.alpha, make_L(c));
    LatticeLaw F = c.table_len > 0 ? make_pareto_lattice(A, c.h, c.table_len) : make_pareto_lattice(A, c.h);
    json s = base_summary(F);
    return {std::move(F), std::move(s)};
  }
  if (c.family == "uao") {
    UaoLaw U = make_uao_family(uao_preset_spec(c.alpha, c.n_max > 0 ? c.n_max : 50));
    json s = base_summary(U.law);
    s["n0"] = U.n0;
    s["c1"] = U.c1;
    s["c2"] = U.c2;
    s["selected"] = U.selected;
    s["spike_weight"] = U.spike_weight;
    return {std::move(U.law), std::move(s)};
  }
  if (c.family == "twosided" || c.family == "half") {
    CounterexampleLaw C = c.family == "twosided"
                              ? make_twosided_counterexample(c.alpha, c.grid_h > 0 ? c.grid_h : 1.0, c.n_max)
                              : make_half_counterexample(c.grid_h > 0 ? c.grid_h : 0.5, c.n_max);
    json s = base_summary(C.law);
    s.update(clusters_summary(C));
    return {std::move(C.law), std::move(s)};
  }
  if (c.family == "smooth") {
    SmoothLaw S = make_smooth_family(c.alpha, c.eps, c.h);
    json s = base_summary(S.law);
    s["eps"] = S.eps;
    s["target_exponent"] = S.target_exponent;
    s["fitted_exponent"] = S.fitted_exponent;
    s["witnessed_C"] = S.witnessed_C;
    return {std::move(S.law), std::move(s)};
  }
  std::ifstream in(c.path, std::ios::binary);
  if (!in) throw ConfigError("cannot open law file '" + c.path + "'");
  LatticeLaw F = read_law(in);
  json s = base_summary(F);
  return {std::move(F), std::move(s)};
}

json cmd_dist_build(const ExperimentConfig& config, std::ostream& log) {
  const ResolvedLaw R = resolve_law(config.law);
  fs::create_directories(config.out);
  {
    std::ofstream out(out_path(config, "law.csv"), std::ios::binary | std::ios::trunc);
    write_law(R.law, out);
  }
  const json sidecar = {{"command", "dist-build"}, {"config", to_json(config)}, {"law", R.summary}};
  write_json(out_path(config, "law.json"), sidecar);
  log << "law " << R.summary["family"].get<std::string>() << " h=" << R.law.h() << " p=" << R.law.p()
      << " q=" << R.law.q() << " hash=" << R.summary["hash"].get<std::string>() << '\n';
  if (R.summary.contains("clusters")) log << "clusters " << R.summary["clusters"] << '\n';
  if (R.summary.contains("tail_ratio"))
    for (const auto& row : R.summary["tail_ratio"]) log << "A(x)P(X>x)/p at x=" << row["x"] << ": " << row["right"] << '\n';
  return sidecar;
}

json cmd_renewal(const ExperimentConfig& config, std::ostream& log) {
  const RenewalConfig& rc = config.renewal;
  if (rc.K > rc.max_K)
    throw BudgetError("renewal K=" + std::to_string(rc.K) + " exceeds the budget max_K=" + std::to_string(rc.max_K));
  const ResolvedLaw R = resolve_law(config.law);
  const LatticeLaw& F = R.law;

  std::string method = rc.method;
  std::int64_t n_max = 0;
  if (F.two_sided()) {
    method = "walk-sum";
    n_max = rc.n_max > 0 ? rc.n_max
                         : static_cast<std::int64_t>(std::ceil(4.0 * need_A(F, "renewal")(static_cast<double>(rc.K) * F.h())));
  }
  const fs::path cpath = cache_file(config, F, method, n_max);
  std::optional<RenewalTable> table = load_table(cpath, F, rc.K);
  const bool hit = table.has_value();
  if (!hit) {
    if (F.two_sided()) {
      TwoSidedOptions o;
      o.tolerance = rc.tolerance;
      table = renewal_measure_twosided(F, rc.K, n_max, o);
    } else {
      table = renewal_measure_onesided(F, rc.K, renewal_method_from_string(method));
    }
    save_table(cpath, *table);
    // reload so hits and misses read the same text
    table = load_table(cpath, F, rc.K);
    if (!table) throw InvariantError("renewal cache file did not round-trip: " + cpath.string());
  }
  const RenewalTable& t = *table;

  {
    CsvWriter w(out_path(config, "renewal_table.csv"), {"k", "x", "u", "U"});
    for (std::int64_t k = 0; k <= t.K; ++k) {
      w << k << static_cast<double>(k) * t.h << t.u[static_cast<std::size_t>(k)] << t.U(k);
      w.end_row();
    }
  }

  json ratios = json::array();
  if (F.tail_index()) {
    std::vector<double> xs = rc.x_list.empty() ? dyadic_up_to(F.h(), static_cast<double>(t.K) * F.h()) : rc.x_list;
    Series local{"local", {}, {}}, integrated{"integrated", {}, {}};
    CsvWriter w(out_path(config, "renewal_ratios.csv"), {"x", "U_point", "U_cumulative", "local_ratio", "integrated_ratio"});
    for (double x0 : xs) {
      const std::int64_t k = F.floor_index(x0);
      if (k < 1 || k > t.K) continue;
      const double x = static_cast<double>(k) * F.h();
      const double lr = srt_ratio(F, t, x), ir = integrated_ratio(F, t, x);
      w << x << t.at(k) << t.U(k) << lr << ir;
      w.end_row();
      ratios.push_back({{"x", x}, {"local_ratio", lr}, {"integrated_ratio", ir}});
      local.x.push_back(x), local.y.push_back(lr);
      integrated.x.push_back(x), integrated.y.push_back(ir);
    }
    if (config.svg)
      write_svg_chart(out_path(config, "renewal_ratios.svg"), {"renewal ratios", "x", "ratio", true, false},
                      {local, integrated});
  }

  json sidecar = {{"command", "renewal"},
                  {"config", to_json(config)},
                  {"law", R.summary},
                  {"K", t.K},
                  {"method", method},
                  {"cache_hit", hit},
                  {"cache_file", cpath.string()},
                  {"ledger", {{"clamped_count", t.ledger.clamped_count}, {"max_clamped", t.ledger.max_clamped}}},
                  {"ratios", ratios}};
  if (F.two_sided()) {
    sidecar["n_max"] = t.n_max;
    sidecar["c_sup"] = t.c_sup;
    sidecar["max_truncation_error"] =
        t.truncation_error.empty() ? 0.0 : *std::max_element(t.truncation_error.begin(), t.truncation_error.end());
  }
  write_json(out_path(config, "renewal.json"), sidecar);
  log << "renewal K=" << t.K << " method=" << method << (hit ? " (cache hit)" : " (computed)") << '\n';
  if (!ratios.empty())
    log << "x=" << ratios.back()["x"] << " local=" << ratios.back()["local_ratio"]
        << " integrated=" << ratios.back()["integrated_ratio"] << '\n';
  return sidecar;
}

json cmd_criteria(const ExperimentConfig& config, std::ostream& log) {
  const ResolvedLaw R = resolve_law(config.law);
  const LatticeLaw& F = R.law;
  const CriteriaConfig& cc = config.criteria;
  const std::vector<double> eta = config.grid.eta_list.empty() ? default_eta_list() : config.grid.eta_list;
  const std::vector<double> xs = config.grid.x_list.empty() ? default_x_list() : config.grid.x_list;
  GridOptions go;
  go.T = cc.T;
  go.threads = config.threads;

  json verdicts = json::array();
  for (const std::string& name : cc.select) {
    if (name == "half") {
      const HalfConditionReport r = half_condition(need_A(F, "half"), cc.half_x_max);
      CsvWriter w(out_path(config, "criterion_half.csv"), {"x", "ratio"});
      for (std::size_t i = 0; i < r.x.size(); ++i) {
        w << r.x[i] << r.ratio[i];
        w.end_row();
      }
      if (config.svg)
        write_svg_chart(out_path(config, "criterion_half.svg"), {"half condition", "x", "L*/L", true, false},
                        {{"L*/L", r.x, r.ratio}});
      verdicts.push_back({{"criterion", "half"},
                          {"verdict", to_string(r.growth)},
                          {"sup", r.sup},
                          {"witnessed_x", r.witnessed_x},
                          {"holds_on_range", r.holds_on_range},
                          {"csv", "criterion_half.csv"}});
    } else if (name == "smoothness") {
      const SmoothnessReport r = smoothness_exponent(F, xs, cc.eps);
      const char* v = r.inconclusive ? "inconclusive" : (r.certified && !r.residual_flag ? "certified" : "not_certified");
      verdicts.push_back({{"criterion", "smoothness"},
                          {"verdict", v},
                          {"fitted_exponent", r.fitted_exponent},
                          {"target_exponent", r.target_exponent},
                          {"witnessed_C", r.witnessed_C},
                          {"r_squared", r.r_squared},
                          {"max_residual", r.max_residual},
                          {"worst_x", r.worst_x},
                          {"worst_s", r.worst_s}});
    } else {
      const CriterionGrid g = evaluate_grid(F, criterion_kind_from_string(name), eta, xs, go);
      grid_csv(out_path(config, "criterion_" + g.criterion + ".csv"), g);
      if (config.svg) grid_svg(out_path(config, "criterion_" + g.criterion + ".svg"), g);
      verdicts.push_back(grid_verdict(g));
    }
    log << verdicts.back()["criterion"].get<std::string>() << ": " << verdicts.back()["verdict"].get<std::string>()
        << '\n';
  }

  const json sidecar = {{"schema", "srtlab-verdicts/1"},
                        {"command", "criteria"},
                        {"config", to_json(config)},
                        {"law", R.summary},
                        {"eta_list", eta},
                        {"x_list", xs},
                        {"verdicts", verdicts}};
  write_json(out_path(config, "verdicts.json"), sidecar);
  return sidecar;
}

json cmd_probe(const ExperimentConfig& config, std::ostream& log) {
  const ResolvedLaw R = resolve_law(config.law);
  const LatticeLaw& F = R.law;
  const ProbeConfig& pc = config.probe;
  json result = {{"kind", pc.kind}};

  if (pc.kind == "necessity") {
    std::vector<double> xs = pc.x_list;
    if (xs.empty())
      for (int e = 12; e <= 18; ++e) xs.push_back(std::exp2(e));
    const NecessityReport r = necessity_probe(F, xs, pc.w, pc.m_max);
    CsvWriter w(out_path(config, "probe_necessity.csv"), {"m", "x", "value"});
    std::vector<Series> series;
    json trends = json::array();
    for (std::size_t m = 0; m < r.series.size(); ++m) {
      for (std::size_t j = 0; j < r.x.size(); ++j) {
        w << static_cast<std::int64_t>(m + 1) << r.x[j] << r.series[m][j];
        w.end_row();
      }
      series.push_back({"m=" + std::to_string(m + 1), r.x, r.series[m]});
      trends.push_back(to_string(r.trend[m]));
    }
    if (config.svg)
      write_svg_chart(out_path(config, "probe_necessity.svg"), {"necessity probe", "x", "value", true, false}, series);
    result["w"] = r.w;
    result["trend"] = trends;
    log << "necessity w=" << r.w << " trend(m=1)=" << trends[0].get<std::string>() << '\n';
  } else {
    std::vector<double> deltas = config.grid.delta_list;
    std::sort(deltas.begin(), deltas.end(), std::greater<>());
    std::vector<double> values;
    for (double d : deltas)
      values.push_back(pc.kind == "lemma41" ? lemma41_probe(F, d, pc.x, pc.ell, pc.m) : lemma42_probe(F, d, pc.x, pc.ell));
    CsvWriter w(out_path(config, "probe_" + pc.kind + ".csv"), {"delta", "value"});
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      w << deltas[i] << values[i];
      w.end_row();
    }
    if (config.svg)
      write_svg_chart(out_path(config, "probe_" + pc.kind + ".svg"), {pc.kind + " probe", "delta", "value", true, false},
                      {{pc.kind, deltas, values}});
    result["x"] = pc.x;
    result["ell"] = pc.ell;
    if (pc.kind == "lemma41") result["m"] = pc.m;
    result["delta"] = deltas;
    result["value"] = values;
    result["decreasing_in_delta"] = decreasing(values);
    log << pc.kind << " x=" << pc.x << " decreasing as delta shrinks: " << (decreasing(values) ? "yes" : "no") << '\n';
  }

  const json sidecar = {{"command", "probe"}, {"config", to_json(config)}, {"law", R.summary}, {"probe", result}};
  write_json(out_path(config, "probe_" + pc.kind + ".json"), sidecar);
  return sidecar;
}

json cmd_mc(const ExperimentConfig& config, std::ostream& log) {
  const ResolvedLaw R = resolve_law(config.law);
  const LatticeLaw& F = R.law;
  const McConfig& mc = config.mc;
  McOptions o;
  o.batches = mc.batches;
  o.threads = config.threads;

  McEstimate e;
  std::optional<double> exact;
  if (mc.target == "renewal") {
    e = mc_renewal_estimate(F, mc.x, mc.w, mc.walks, config.seed, o);
    const std::int64_t k = F.floor_index(mc.x);
    if (F.one_sided() && k >= 0 && k <= (std::int64_t{1} << 20)) {
      const RenewalTable t = renewal_measure_onesided(F, k);
      const std::int64_t k0 = F.floor_index(mc.x - mc.w);
      exact = t.U(k) - (k0 >= 0 ? t.U(k0) : 0.0);
    }
  } else {
    const double xi = mc.xi ? *mc.xi : big_jump_params(need_A(F, "mc event").alpha()).xi(
                                           F.A().inverse(static_cast<double>(mc.n)), mc.x);
    e = mc_event_probability(F, mc.n, mc.x, mc.k, xi, mc.walks, config.seed, o);
    if (F.one_sided()) {
      const BigJumpDecomposition d = bigjump_decomposition(F, mc.n, mc.x, std::max(mc.k, 0), xi);
      exact = mc.k < 0 ? d.total : d.component[static_cast<std::size_t>(mc.k)];
    }
  }

  {
    CsvWriter w(out_path(config, "mc.csv"), {"target", "estimate", "stderr", "n_walks", "seed", "batches", "zero_hits",
                                             "upper_bound", "cap_bias", "exact"});
    w << e.target << e.estimate << e.stderr_ << e.n_walks << std::to_string(e.seed) << static_cast<std::int64_t>(e.batches)
      << std::string(e.zero_hits ? "1" : "0") << e.upper_bound << e.cap_bias << (exact ? *exact : NAN);
    w.end_row();
  }
  json est = {{"target", e.target},
              {"estimate", e.estimate},
              {"stderr", e.stderr_},
              {"n_walks", e.n_walks},
              {"seed", e.seed},
              {"batches", e.batches},
              {"zero_hits", e.zero_hits},
              {"cap_bias", e.cap_bias}};
  est["upper_bound"] = std::isnan(e.upper_bound) ? json(nullptr) : json(e.upper_bound);
  if (exact) {
    est["exact"] = *exact;
    est["covers_exact"] = e.covers(*exact);
  }
  const json sidecar = {{"command", "mc"}, {"config", to_json(config)}, {"law", R.summary}, {"estimate", est}};
  write_json(out_path(config, "mc.json"), sidecar);
  log << e.target << ": " << e.estimate << " +- " << e.stderr_ << " (" << e.n_walks << " walks, seed " << e.seed << ")";
  if (exact) log << " exact " << *exact;
  log << '\n';
  return sidecar;
}

json cmd_report(const ExperimentConfig& config, std::ostream& log) {
  const fs::path dir(config.out);
  if (!fs::is_directory(dir)) throw ConfigError("output directory '" + config.out + "' does not exist");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".json" && entry.path().filename() != "report.json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  json sources = json::object();
  CsvWriter w(out_path(config, "report.csv"), {"source", "key", "value"});
  auto row = [&](const std::string& src, const std::string& key, const std::string& value) {
    w << src << key << value;
    w.end_row();
    log << src << "  " << key << " = " << value << '\n';
  };
  for (const fs::path& p : files) {
    std::ifstream in(p);
    const json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw InvariantError("report input '" + p.string() + "' is not valid JSON");
    const std::string src = p.filename().string();
    sources[src] = j;
    const std::string cmd = j.value("command", "");
    if (j.contains("law")) row(src, "law.hash", j["law"].value("hash", ""));
    if (cmd == "criteria")
      for (const auto& v : j["verdicts"]) row(src, v["criterion"].get<std::string>(), v["verdict"].get<std::string>());
    if (cmd == "renewal" && !j["ratios"].empty()) {
      const auto& last = j["ratios"].back();
      row(src, "integrated_ratio@" + fmt(last["x"].get<double>()), fmt(last["integrated_ratio"].get<double>()));
      row(src, "local_ratio@" + fmt(last["x"].get<double>()), fmt(last["local_ratio"].get<double>()));
    }
    if (cmd == "probe" && j["probe"].contains("decreasing_in_delta"))
      row(src, j["probe"]["kind"].get<std::string>() + ".decreasing_in_delta",
          j["probe"]["decreasing_in_delta"].get<bool>() ? "true" : "false");
    if (cmd == "probe" && j["probe"].contains("trend"))
      row(src, "necessity.trend", j["probe"]["trend"][0].get<std::string>());
    if (cmd == "mc")
      row(src, "estimate", fmt(j["estimate"]["estimate"].get<double>()) + " +- " +
                               fmt(j["estimate"]["stderr"].get<double>()));
  }
  const json report = {{"command", "report"}, {"sources", sources}};
  write_json(out_path(config, "report.json"), report);
  return report;
}

}  // namespace srtlab::cli
