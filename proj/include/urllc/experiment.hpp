#pragma once

#include "urllc/engine.hpp"
#include "urllc/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace urllc {

/// Seed of replication r; replication 0 runs on the base seed itself.
std::uint64_t replication_seed(std::uint64_t seed, int replication);

struct ExperimentResult
{
  std::vector<RunMetrics> runs; ///< ordered by scheme (compare), then replication
  Summary summary;
};

/// Runs the replications concurrently and merges them in replication order.
std::vector<RunMetrics> run_replications(const Scenario& s, std::uint64_t seed, int replications, bool rrc_log = false);

ExperimentResult run_experiment(const Scenario& s, std::uint64_t seed, int replications, bool rrc_log = false);

/// Runs every scheme on the same deployment and arrival realizations.
ExperimentResult compare(const Scenario& s,
                         std::span<const Scheme> schemes,
                         std::uint64_t seed,
                         int replications,
                         bool rrc_log = false);

struct NumerologyGainRow
{
  std::string label;
  double baseline_se = 1.0;
  double optimized_se = 1.0;
};

/// Single-population and two-population rows of the numerology-gain figure.
std::vector<NumerologyGainRow> numerology_gains(const NumerologyStudy& study);

void write_trace(std::ostream& out, const std::vector<RunMetrics>& runs);
void write_metrics(std::ostream& out, const Summary& summary);
void write_cdf(std::ostream& out, const Summary& summary);
void write_dimensioning(std::ostream& out, const std::vector<RunMetrics>& runs);
void write_rrc_log(std::ostream& out, const std::vector<RunMetrics>& runs);
std::string summary_json(const Scenario& s, std::uint64_t seed, const ExperimentResult& result);

/// Writes trace.csv, metrics.csv, cdf.csv, dimensioning.csv and summary.json
/// (plus rrc.csv when requested) into dir.
void write_outputs(const std::filesystem::path& dir,
                   const Scenario& s,
                   std::uint64_t seed,
                   const ExperimentResult& result,
                   bool rrc_log = false);

} // namespace urllc
