#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "srtlab/errors.hpp"

namespace srtlab::cli {

namespace {

// Reads the members of one JSON object and rejects any key it was not asked for.
class StrictObject {
 public:
  StrictObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  template <class T>
  void get(const std::string& key, T& dst) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      dst = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where(key) + " has the wrong type");
    }
  }

  void get(const std::string& key, std::optional<double>& dst) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) return;
    if (!it->is_number()) throw ConfigError(where(key) + " has the wrong type");
    dst = it->get<double>();
  }

  const json* child(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.contains(k)) throw ConfigError("unknown key " + where(k));
  }

  std::string where(const std::string& key = "") const {
    const std::string p = key.empty() ? path_ : (path_.empty() ? key : path_ + "." + key);
    return "'" + (p.empty() ? std::string("<root>") : p) + "'";
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void require_one_of(const std::string& v, std::initializer_list<const char*> allowed, const std::string& key) {
  for (const char* a : allowed)
    if (v == a) return;
  throw ConfigError("'" + key + "' has unsupported value '" + v + "'");
}

void require_positive(const std::vector<double>& v, const std::string& key) {
  for (double x : v) require(x > 0.0, "'" + key + "' entries must be positive");
}

LawConfig parse_law(const json& j) {
  LawConfig c;
  StrictObject o(j, "law");
  o.get("family", c.family);
  o.get("alpha", c.alpha);
  o.get("L", c.L);
  o.get("beta", c.beta);
  o.get("h", c.h);
  o.get("table_len", c.table_len);
  o.get("grid_h", c.grid_h);
  o.get("n_max", c.n_max);
  o.get("eps", c.eps);
  o.get("path", c.path);
  o.finish();
  require_one_of(c.family, {"pareto", "uao", "twosided", "half", "smooth", "file"}, "law.family");
  require_one_of(c.L, {"constant", "log_power", "reciprocal_log"}, "law.L");
  require(c.alpha > 0.0 && c.alpha < 1.0, "'law.alpha' must lie in (0, 1)");
  require(c.h > 0.0, "'law.h' must be positive");
  require(c.table_len >= 0, "'law.table_len' must be nonnegative");
  require(c.grid_h >= 0.0, "'law.grid_h' must be nonnegative");
  require(c.n_max >= 0, "'law.n_max' must be nonnegative");
  require(c.family != "file" || !c.path.empty(), "'law.path' is required for family 'file'");
  return c;
}

RenewalConfig parse_renewal(const json& j) {
  RenewalConfig c;
  StrictObject o(j, "renewal");
  o.get("K", c.K);
  o.get("method", c.method);
  o.get("n_max", c.n_max);
  o.get("tolerance", c.tolerance);
  o.get("max_K", c.max_K);
  o.get("x_list", c.x_list);
  o.finish();
  require(c.K >= 1, "'renewal.K' must be positive");
  require(c.n_max >= 0, "'renewal.n_max' must be nonnegative");
  require(c.tolerance > 0.0, "'renewal.tolerance' must be positive");
  require_one_of(c.method, {"recursion", "series-reciprocal", "walk-sum"}, "renewal.method");
  require_positive(c.x_list, "renewal.x_list");
  return c;
}

GridConfig parse_grid(const json& j) {
  GridConfig c;
  StrictObject o(j, "grid");
  o.get("eta_list", c.eta_list);
  o.get("x_list", c.x_list);
  o.get("delta_list", c.delta_list);
  o.finish();
  require_positive(c.eta_list, "grid.eta_list");
  require_positive(c.x_list, "grid.x_list");
  require_positive(c.delta_list, "grid.delta_list");
  return c;
}

CriteriaConfig parse_criteria(const json& j) {
  CriteriaConfig c;
  StrictObject o(j, "criteria");
  o.get("select", c.select);
  o.get("T", c.T);
  o.get("eps", c.eps);
  o.get("half_x_max", c.half_x_max);
  o.finish();
  for (const auto& s : c.select)
    require_one_of(s, {"doney", "chi", "ns-density", "ns-interval", "ns-twosided", "half", "smoothness"},
                   "criteria.select");
  require(c.T >= 0.0, "'criteria.T' must be nonnegative");
  require(c.eps > 0.0, "'criteria.eps' must be positive");
  require(c.half_x_max >= 2.0, "'criteria.half_x_max' must be at least 2");
  return c;
}

ProbeConfig parse_probe(const json& j) {
  ProbeConfig c;
  StrictObject o(j, "probe");
  o.get("kind", c.kind);
  o.get("x", c.x);
  o.get("ell", c.ell);
  o.get("m", c.m);
  o.get("w", c.w);
  o.get("m_max", c.m_max);
  o.get("x_list", c.x_list);
  o.finish();
  require_one_of(c.kind, {"lemma41", "lemma42", "necessity"}, "probe.kind");
  require(c.x > 0.0, "'probe.x' must be positive");
  require(c.m_max >= 1, "'probe.m_max' must be at least 1");
  require_positive(c.x_list, "probe.x_list");
  return c;
}

McConfig parse_mc(const json& j) {
  McConfig c;
  StrictObject o(j, "mc");
  o.get("target", c.target);
  o.get("x", c.x);
  o.get("w", c.w);
  o.get("n", c.n);
  o.get("k", c.k);
  o.get("xi", c.xi);
  o.get("walks", c.walks);
  o.get("batches", c.batches);
  o.finish();
  require_one_of(c.target, {"renewal", "event"}, "mc.target");
  require(c.walks >= 1, "'mc.walks' must be positive");
  require(c.batches >= 16, "'mc.batches' must be at least 16");
  require(c.n >= 1, "'mc.n' must be positive");
  return c;
}

json pareto_preset(double alpha, int ell) {
  return {{"law", {{"family", "pareto"}, {"alpha", alpha}, {"h", 1.0}}},
          {"renewal", {{"K", 100000}}},
          {"probe", {{"kind", "lemma41"}, {"ell", ell}, {"m", 1}}},
          {"mc", {{"target", "renewal"}, {"x", 1024.0}}}};
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"pareto-0.3", "pareto-0.4", "pareto-0.5", "pareto-0.7", "uao-0.5", "twosided-0.25", "half"};
}

json preset(const std::string& name) {
  if (name == "pareto-0.3") return pareto_preset(0.3, 2);
  if (name == "pareto-0.4") {
    json j = pareto_preset(0.4, 1);
    j["probe"] = {{"kind", "lemma42"}, {"ell", 1}};
    return j;
  }
  if (name == "pareto-0.5") return pareto_preset(0.5, 1);
  if (name == "pareto-0.7") return pareto_preset(0.7, 0);
  if (name == "uao-0.5")
    return {{"law", {{"family", "uao"}, {"alpha", 0.5}, {"n_max", 50}}},
            {"renewal", {{"K", 1 << 18}}},
            {"criteria", {{"select", {"doney", "ns-density", "ns-interval"}}}},
            {"probe", {{"kind", "necessity"}, {"m_max", 1}}}};
  if (name == "twosided-0.25")
    return {{"law", {{"family", "twosided"}, {"alpha", 0.25}, {"grid_h", 1.0}}},
            {"renewal", {{"K", 4096}, {"n_max", 64}, {"tolerance", 1.0}}},
            {"criteria", {{"select", {"ns-density", "ns-twosided"}}}},
            {"probe", {{"kind", "necessity"}, {"m_max", 2}}},
            {"mc", {{"target", "event"}, {"n", 4}, {"x", 4096.0}, {"walks", 50000}}}};
  if (name == "half")
    return {{"law", {{"family", "half"}, {"alpha", 0.5}, {"grid_h", 0.5}}},
            {"criteria", {{"select", {"half"}}}},
            {"probe", {{"kind", "necessity"}, {"m_max", 1}}}};
  std::string names;
  for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
  throw ConfigError("unknown preset '" + name + "' (available: " + names + ")");
}

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  StrictObject o(j, "");
  if (const json* v = o.child("law")) c.law = parse_law(*v);
  if (const json* v = o.child("renewal")) c.renewal = parse_renewal(*v);
  if (const json* v = o.child("grid")) c.grid = parse_grid(*v);
  if (const json* v = o.child("criteria")) c.criteria = parse_criteria(*v);
  if (const json* v = o.child("probe")) c.probe = parse_probe(*v);
  if (const json* v = o.child("mc")) c.mc = parse_mc(*v);
  o.get("out", c.out);
  o.get("cache", c.cache);
  o.get("seed", c.seed);
  o.get("threads", c.threads);
  o.get("svg", c.svg);
  o.finish();
  return c;
}

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str(), nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

json to_json(const ExperimentConfig& c) {
  json law = {{"family", c.law.family}, {"alpha", c.law.alpha}, {"L", c.law.L},          {"beta", c.law.beta},
              {"h", c.law.h},           {"table_len", c.law.table_len}, {"grid_h", c.law.grid_h},
              {"n_max", c.law.n_max},   {"eps", c.law.eps},     {"path", c.law.path}};
  json mc = {{"target", c.mc.target}, {"x", c.mc.x}, {"w", c.mc.w}, {"n", c.mc.n}, {"k", c.mc.k},
             {"walks", c.mc.walks}, {"batches", c.mc.batches}};
  mc["xi"] = c.mc.xi ? json(*c.mc.xi) : json(nullptr);
  return {{"law", law},
          {"renewal",
           {{"K", c.renewal.K},
            {"method", c.renewal.method},
            {"n_max", c.renewal.n_max},
            {"tolerance", c.renewal.tolerance},
            {"max_K", c.renewal.max_K},
            {"x_list", c.renewal.x_list}}},
          {"grid", {{"eta_list", c.grid.eta_list}, {"x_list", c.grid.x_list}, {"delta_list", c.grid.delta_list}}},
          {"criteria",
           {{"select", c.criteria.select},
            {"T", c.criteria.T},
            {"eps", c.criteria.eps},
            {"half_x_max", c.criteria.half_x_max}}},
          {"probe",
           {{"kind", c.probe.kind},
            {"x", c.probe.x},
            {"ell", c.probe.ell},
            {"m", c.probe.m},
            {"w", c.probe.w},
            {"m_max", c.probe.m_max},
            {"x_list", c.probe.x_list}}},
          {"mc", mc},
          {"out", c.out},
          {"cache", c.cache},
          {"seed", c.seed},
          {"threads", c.threads},
          {"svg", c.svg}};
}

}  // namespace srtlab::cli
