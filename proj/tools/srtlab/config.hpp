#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace srtlab::cli {

using nlohmann::json;

struct LawConfig {
  std::string family = "pareto";   // pareto | uao | twosided | half | smooth | file
  double alpha = 0.5;
  std::string L = "constant";      // constant | log_power | reciprocal_log
  double beta = 0.0;               // log_power exponent
  double h = 1.0;
  std::int64_t table_len = 0;      // 0 selects the library default
  double grid_h = 0.0;             // 0 selects the family default
  int n_max = 0;
  double eps = 0.1;                // smooth family
  std::string path;                // file family
};

struct RenewalConfig {
  std::int64_t K = 1 << 16;
  std::string method = "series-reciprocal";
  std::int64_t n_max = 0;          // two-sided walk cap; 0 selects 4 A(K h)
  double tolerance = 1e-3;
  std::int64_t max_K = std::int64_t{1} << 24;
  std::vector<double> x_list;      // empty selects powers of two up to K h
};

struct GridConfig {
  std::vector<double> eta_list;
  std::vector<double> x_list;
  std::vector<double> delta_list{0.4, 0.2, 0.1, 0.05};
};

struct CriteriaConfig {
  std::vector<std::string> select{"doney", "chi", "ns-density", "ns-interval", "ns-twosided"};
  double T = 1.0;
  double eps = 0.1;                // smoothness target slack
  double half_x_max = 1e12;
};

struct ProbeConfig {
  std::string kind = "lemma41";    // lemma41 | lemma42 | necessity
  double x = 16384.0;
  int ell = 0;
  int m = 1;
  double w = 1.0;
  int m_max = 2;
  std::vector<double> x_list;      // necessity; empty selects 2^12 .. 2^18
};

struct McConfig {
  std::string target = "renewal";  // renewal | event
  double x = 1024.0;
  double w = 1.0;
  std::int64_t n = 4;
  int k = -1;
  std::optional<double> xi;
  std::int64_t walks = 100000;
  int batches = 32;
};

struct ExperimentConfig {
  LawConfig law;
  RenewalConfig renewal;
  GridConfig grid;
  CriteriaConfig criteria;
  ProbeConfig probe;
  McConfig mc;
  std::string out = "srtlab-out";
  std::string cache = ".srtlab-cache";
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool svg = false;
};

/// Names accepted by --preset.
std::vector<std::string> preset_names();
json preset(const std::string& name);

/// Strict parse: unknown keys, wrong types and out-of-range values raise ConfigError.
ExperimentConfig parse_config(const json& j);
json read_config_file(const std::string& path);

/// Fully defaulted configuration as JSON, recorded next to every output.
json to_json(const ExperimentConfig& c);

}  // namespace srtlab::cli
