#include "urllc/experiment.hpp"

#include "urllc/rng.hpp"

#include <future>

namespace urllc {

std::uint64_t replication_seed(std::uint64_t seed, int replication)
{
  if (replication == 0)
    return seed;
  return stream_key(seed, Stream::Replication, static_cast<std::uint64_t>(replication));
}

std::vector<RunMetrics> run_replications(const Scenario& s, std::uint64_t seed, int replications, bool rrc_log)
{
  std::vector<std::future<RunMetrics>> jobs;
  for (int r = 0; r < replications; ++r) {
    jobs.push_back(std::async(std::launch::async, [&s, seed, r, rrc_log] {
      return run(s, replication_seed(seed, r), RunOptions{r, rrc_log});
    }));
  }
  std::vector<RunMetrics> out;
  out.reserve(jobs.size());
  for (auto& j : jobs)
    out.push_back(j.get());
  return out;
}

ExperimentResult run_experiment(const Scenario& s, std::uint64_t seed, int replications, bool rrc_log)
{
  ExperimentResult r;
  r.runs = run_replications(s, seed, replications, rrc_log);
  r.summary = summarize(r.runs);
  return r;
}

ExperimentResult compare(const Scenario& s,
                         std::span<const Scheme> schemes,
                         std::uint64_t seed,
                         int replications,
                         bool rrc_log)
{
  ExperimentResult r;
  for (Scheme scheme : schemes) {
    Scenario variant = s;
    for (auto& p : variant.populations)
      p.scheme = scheme;
    auto runs = run_replications(variant, seed, replications, rrc_log);
    for (auto& m : runs)
      r.runs.push_back(std::move(m));
  }
  r.summary = summarize(r.runs);
  return r;
}

std::vector<NumerologyGainRow> numerology_gains(const NumerologyStudy& study)
{
  const UserPopulationMix single[] = {{1.0, study.low_delay_spread_s}};
  const UserPopulationMix mixed[] = {{1.0 - study.high_share, study.low_delay_spread_s},
                                     {study.high_share, study.high_delay_spread_s}};
  return {
    {"single", 1.0, numerology_gain(single, study.coherence_s, study.latency_budget_s, study.baseline_overhead)},
    {"mixed", 1.0, numerology_gain(mixed, study.coherence_s, study.latency_budget_s, study.baseline_overhead)},
  };
}

} // namespace urllc
