#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "srtlab/errors.hpp"
#include "srtlab/lattice_law.hpp"

namespace srtlab {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_law(const LatticeLaw& F, std::ostream& out) {
  json header = {{"format", "srtlab-law/1"},
                 {"family", F.family()},
                 {"spec", json::parse(F.spec_json())},
                 {"h", F.h()},
                 {"p", F.p()},
                 {"q", F.q()},
                 {"two_sided", F.two_sided()},
                 {"table_lo", F.table_lo()},
                 {"table_hi", F.table_hi()},
                 {"atoms", F.atoms().size()},
                 {"hash", hex64(F.content_hash())}};
  if (F.tail_index()) header["A"] = json::parse(F.A().serialize());
  out << header.dump() << '\n' << "k,pmf\n";
  const auto table = F.table();
  for (std::size_t i = 0; i < table.size(); ++i)
    out << F.table_lo() + static_cast<std::int64_t>(i) << ',' << fmt17(table[i]) << '\n';
  for (const auto& [k, m] : F.atoms()) out << k << ',' << fmt17(m) << '\n';
}

LatticeLaw build_law_from_spec(const std::string& spec_json) {
  json spec;
  try {
    spec = json::parse(spec_json);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("law spec is not valid JSON: ") + e.what());
  }
  const std::string family = spec.value("family", "");
  const std::string part = spec.value("part", "");
  auto pick = [&](const CounterexampleLaw& c) -> LatticeLaw {
    if (part == "symmetric") return *c.symmetric_part;
    if (part == "clusters") return *c.cluster_part;
    return c.law;
  };
  if (family == "pareto")
    return make_pareto_lattice(TailIndexFunction::deserialize(spec.at("A").dump()), spec.at("h").get<double>(),
                               spec.at("table_len").get<std::int64_t>());
  if (family == "uao") {
    UaoSpec u{TailIndexFunction::deserialize(spec.at("A").dump()), spec.at("z").get<std::vector<double>>(),
              spec.at("eps").get<std::vector<double>>()};
    return make_uao_family(u).law;
  }
  if (family == "twosided")
    return pick(make_twosided_counterexample(spec.at("alpha").get<double>(), spec.at("grid_h").get<double>(),
                                             spec.at("n_max").get<int>()));
  if (family == "half")
    return pick(make_half_counterexample(spec.at("grid_h").get<double>(), spec.at("n_max").get<int>()));
  if (family == "smooth")
    return make_smooth_family(spec.at("alpha").get<double>(), spec.at("eps").get<double>(), spec.at("h").get<double>())
        .law;
  throw ConfigError("no builder for law family '" + family + "'");
}

LatticeLaw read_law(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("law file is empty");
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("law header is not valid JSON: ") + e.what());
  }
  if (header.value("format", "") != "srtlab-law/1") throw ConfigError("unknown law file format");
  if (!std::getline(in, line) || line != "k,pmf") throw ConfigError("law payload must start with 'k,pmf'");

  const std::int64_t lo = header.at("table_lo").get<std::int64_t>();
  const std::int64_t hi = header.at("table_hi").get<std::int64_t>();
  std::vector<double> table(static_cast<std::size_t>(hi - lo + 1), 0.0);
  std::vector<std::pair<std::int64_t, double>> atoms;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("malformed law row: " + line);
    std::int64_t k = 0;
    auto r = std::from_chars(line.data(), line.data() + comma, k);
    if (r.ec != std::errc()) throw ConfigError("malformed lattice index: " + line);
    const double v = std::stod(line.substr(comma + 1));
    if (k >= lo && k <= hi)
      table[static_cast<std::size_t>(k - lo)] = v;
    else
      atoms.emplace_back(k, v);
    ++rows;
  }
  if (rows != table.size() + header.at("atoms").get<std::size_t>()) throw InvariantError("law payload row count mismatch");

  const std::string expected = header.at("hash").get<std::string>();
  const std::string family = header.at("family").get<std::string>();
  if (family != "custom") {
    LatticeLaw law = build_law_from_spec(header.at("spec").dump());
    if (hex64(law.content_hash()) != expected) throw InvariantError("law hash mismatch on read: " + expected);
    return law;
  }
  LatticeLaw::Builder b(header.at("h").get<double>());
  b.table(lo, std::move(table)).family("custom", header.at("spec").dump());
  for (const auto& [k, m] : atoms) b.atom(k, m);
  if (header.contains("A")) b.tail_index(TailIndexFunction::deserialize(header.at("A").dump()));
  b.tail_constants(header.at("p").get<double>(), header.at("q").get<double>());
  LatticeLaw law = b.build();
  if (hex64(law.content_hash()) != expected) throw InvariantError("law hash mismatch on read: " + expected);
  return law;
}

}  // namespace srtlab
