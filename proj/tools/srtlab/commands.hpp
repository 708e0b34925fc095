#pragma once

#include <iosfwd>

#include "config.hpp"
#include "srtlab/lattice_law.hpp"

namespace srtlab::cli {

struct ResolvedLaw {
  LatticeLaw law;
  json summary;  // invariant report: constants, hash, family extras
};

ResolvedLaw resolve_law(const LawConfig& c);

/// Each command writes CSV and JSON files under config.out, prints a short
/// summary to `log` and returns the JSON sidecar it wrote.
json cmd_dist_build(const ExperimentConfig& config, std::ostream& log);
json cmd_renewal(const ExperimentConfig& config, std::ostream& log);
json cmd_criteria(const ExperimentConfig& config, std::ostream& log);
json cmd_probe(const ExperimentConfig& config, std::ostream& log);
json cmd_mc(const ExperimentConfig& config, std::ostream& log);
/// Collects the JSON sidecars found in config.out into report.json and report.csv.
json cmd_report(const ExperimentConfig& config, std::ostream& log);

}  // namespace srtlab::cli
