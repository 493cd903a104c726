// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include "../oracles/oracles.hpp"

#include "urllc/engine.hpp"
#include "urllc/errors.hpp"
#include "urllc/experiment.hpp"
#include "urllc/radio.hpp"
#include "urllc/rrc.hpp"
#include "urllc/rrm.hpp"
#include "urllc/scenario.hpp"

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

using namespace urllc;

namespace {

const std::filesystem::path kConfigs = URLLC_CONFIG_DIR;

struct Verdict
{
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what)
  {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double elapsed_s(std::chrono::steady_clock::time_point since)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

const SeriesSummary* series(const Summary& s, Scheme scheme)
{
  for (const auto& x : s.series)
    if (x.scheme == scheme)
      return &x;
  return nullptr;
}

Verdict four_way_overhead()
{
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const SimTime t_min = SimTime::from_ms(0.2);
  const SimTime budget = SimTime::from_ms(2);
  const auto tl = protocol_timeline(Protocol::FourWay, t_min, SimTime{});
  v.require(tl.pre_data_delay == SimTime::from_ms(1.6), "pre-data delay " + format_seconds(tl.pre_data_delay));
  v.require(tl.pre_data_delay.ns() * 5 >= budget.ns() * 4, "share of budget below 80%");
  v.require(elapsed_s(t0) < 1.0, "runtime");
  v.note("pre-data delay " + format_seconds(tl.pre_data_delay) + " s = "
         + fmt("%.0f", 100.0 * tl.pre_data_delay.seconds() / budget.seconds()) + "% of 2 ms");
  return v;
}

Verdict grant_free_latency()
{
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = load_scenario(kConfigs / "gangnam_like_small.cfg");
  const auto m = run(s, s.seed);
  const SimTime deadline = SimTime::from_ms(2);

  std::size_t delivered = 0, late = 0;
  for (const auto& r : m.packets) {
    if (r.outcome != Outcome::Delivered)
      continue;
    ++delivered;
    late += r.latency > deadline;
  }
  v.require(delivered > 0, "no delivered packets");
  v.require(late == 0, std::to_string(late) + " delivered packets above 2 ms");

  SimTime worst;
  for (const auto& sc : m.plan.subchannels) {
    const SimTime bound = s.frame.t_min + sc.slot + sc.max_propagation + decode_delay(s.frame.t_min, sc.cls.size_bits());
    worst = std::max(worst, bound);
    v.require(bound < deadline, "subchannel " + std::to_string(sc.subchannel_id) + " bound " + format_seconds(bound));
  }
  const double secs = elapsed_s(t0);
  v.require(secs < 120.0, "runtime");
  v.note(std::to_string(delivered) + "/" + std::to_string(m.packets.size()) + " delivered, max bound "
         + format_seconds(worst) + " s, " + fmt("%.1f s", secs));
  return v;
}

Verdict reliability()
{
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  auto s = load_scenario(kConfigs / "gangnam_like_small.cfg");
  // Enough horizon for a million packets.
  const double per_second = static_cast<double>(s.total_users()) * s.populations.front().cls.rate;
  s.horizon = SimTime::from_seconds(std::ceil(1.02e6 / per_second));
  const auto m = run(s, s.seed);

  std::vector<bool> dimensioned(m.plan.subchannels.size());
  double eps_target = 0.0;
  for (const auto& sc : m.plan.subchannels) {
    dimensioned[static_cast<std::size_t>(sc.subchannel_id)] = sc.dimensioned;
    if (!sc.dimensioned)
      continue;
    eps_target = std::max(eps_target, sc.cls.failure_budget());
    v.require(sc.dim.eps_total() <= sc.cls.failure_budget(),
              "subchannel " + std::to_string(sc.subchannel_id) + " analytic " + fmt("%.3g", sc.dim.eps_total()));
  }

  std::size_t n = 0, failed = 0;
  for (const auto& r : m.packets) {
    if (!dimensioned[static_cast<std::size_t>(r.subchannel_id)])
      continue;
    ++n;
    failed += r.outcome != Outcome::Delivered;
  }
  v.require(n >= 1'000'000, "only " + std::to_string(n) + " packets");
  const double rate = n ? static_cast<double>(failed) / static_cast<double>(n) : 1.0;
  const double sigma = std::sqrt(eps_target * (1.0 - eps_target) / static_cast<double>(std::max<std::size_t>(n, 1)));
  v.require(rate <= eps_target + 3.0 * sigma, "empirical rate " + fmt("%.3g", rate));
  const double secs = elapsed_s(t0);
  v.require(secs < 600.0, "runtime");
  v.note(std::to_string(failed) + " failures in " + std::to_string(n) + " packets, rate " + fmt("%.3g", rate)
         + " <= " + fmt("%.3g", eps_target + 3.0 * sigma) + ", " + fmt("%.1f s", secs));
  return v;
}

Verdict protocol_ordering()
{
  Verdict v;
  const auto poisson = load_scenario(kConfigs / "gangnam_like_small.cfg");
  const auto periodic = load_scenario(kConfigs / "gangnam_like_small_periodic.cfg");
  const Scheme three[] = {Scheme::GFMA, Scheme::FGMA, Scheme::FourWay};
  const Scheme two[] = {Scheme::FGMASps, Scheme::GFMA};
  int ok_seeds = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto a = compare(poisson, three, seed, 1);
    const auto b = compare(periodic, two, seed, 1);
    const auto* gf = series(a.summary, Scheme::GFMA);
    const auto* fg = series(a.summary, Scheme::FGMA);
    const auto* fw = series(a.summary, Scheme::FourWay);
    const auto* sps = series(b.summary, Scheme::FGMASps);
    const auto* gf_periodic = series(b.summary, Scheme::GFMA);
    if (!gf || !fg || !fw || !sps || !gf_periodic) {
      v.require(false, "missing series");
      return v;
    }
    const std::string tag = "seed " + std::to_string(seed) + ": ";
    bool ok = true;
    auto need = [&](bool c, const std::string& what) {
      ok = ok && c;
      v.require(c, tag + what);
    };
    need(sps->spectral_efficiency > gf_periodic->spectral_efficiency, "SE(SPS) > SE(GFMA) on periodic traffic");
    need(sps->spectral_efficiency > gf->spectral_efficiency, "SE(SPS) > SE(GFMA) on Poisson traffic");
    need(gf->spectral_efficiency > fw->spectral_efficiency, "SE(GFMA) > SE(FourWay)");
    need(gf->p99 < fg->p99, "p99 GFMA < FGMA");
    need(fg->p99 < fw->p99, "p99 FGMA < FourWay");
    ok_seeds += ok;
    if (seed == 1)
      v.note("seed 1 SE SPS " + fmt("%.2f", sps->spectral_efficiency) + " / GFMA " + fmt("%.2f", gf->spectral_efficiency)
             + " / FourWay " + fmt("%.2f", fw->spectral_efficiency) + ", p99 ms " + fmt("%.4f", gf->p99.ms()) + " < "
             + fmt("%.4f", fg->p99.ms()) + " < " + fmt("%.4f", fw->p99.ms()));
  }
  v.note(std::to_string(ok_seeds) + "/5 seeds");
  return v;
}

Verdict dimensioning_oracles()
{
  Verdict v;
  int cases = 0, mismatches = 0;
  for (int g = 1; g <= 20; ++g)
    for (int qi = 1; qi <= 20; ++qi)
      for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-5 / 3, 1e-6, 1e-7}) {
        const double q = qi / 100.0;
        ++cases;
        if (provisioned_users(g, q, eps) != oracle::m_star(g, q, eps))
          ++mismatches;
      }
  v.require(mismatches == 0, std::to_string(mismatches) + " m* mismatches");

  Rng rng(stream_key(5, Stream::Placement));
  const std::vector<double> grid{0.5e6, 1e6, 2e6, 4e6, 8e6, 16e6, 32e6, 64e6, 128e6};
  int w_mismatch = 0, feasible = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int g = 1 + static_cast<int>(rng.uniform() * 8);
    std::vector<GroupMember> group;
    std::vector<oracle::Member> members;
    for (int k = 0; k < g; ++k) {
      const double beta = std::pow(10.0, rng.uniform(-1.5, 0.5));
      const double power = std::pow(10.0, rng.uniform(0.0, 2.0));
      group.push_back({static_cast<std::uint32_t>(k), beta, power});
      members.push_back({beta, power});
    }
    LinkInputs link;
    link.antennas = 16 << static_cast<int>(rng.uniform() * 4);
    link.slot = SimTime::from_ms(0.2 * (1 + static_cast<int>(rng.uniform() * 4)));
    link.overhead = rng.uniform(0.05, 0.3);
    link.w_grid_hz = grid;
    TrafficClass cls;
    cls.burst_bytes = 50 + static_cast<std::uint64_t>(rng.uniform() * 4000);
    cls.reliability = 1.0 - std::pow(10.0, -rng.uniform(3.0, 7.0));

    const auto expected = oracle::w_sweep(members, link.antennas, link.slot.seconds(), link.overhead, 1.0,
                                          cls.size_bits(), cls.failure_budget(), grid);
    std::optional<double> got;
    try {
      got = dimension_fgma(group, cls, link).bandwidth_hz;
    } catch (const Infeasible&) {
    }
    feasible += expected.has_value();
    w_mismatch += got != expected;
  }
  v.require(w_mismatch == 0, std::to_string(w_mismatch) + " W* mismatches");
  v.note(std::to_string(cases) + " m* cases, 100 W* instances (" + std::to_string(feasible) + " feasible), all equal");
  return v;
}

Verdict sinr_scaling()
{
  Verdict v;
  Rng rng(stream_key(6, Stream::Placement));
  double min_margin = 1e300;
  for (int c = 0; c < 20; ++c) {
    const int k = 1 + static_cast<int>(rng.uniform() * 4);
    const int m = 16 << static_cast<int>(rng.uniform() * 3);
    std::vector<oracle::Member> users;
    std::vector<Interferer> others;
    for (int i = 0; i < k; ++i) {
      users.push_back({std::pow(10.0, rng.uniform(-2.5, 0.0)), std::pow(10.0, rng.uniform(-0.5, 0.5))});
      if (i > 0)
        others.push_back({users.back().power, users.back().beta});
    }
    const auto& u = users.front();
    const double alpha = pilot_quality(k, u.power, u.beta);
    const double g = effective_sinr(m, u.power, u.beta, alpha, others);
    const double g2 = effective_sinr(2 * m, u.power, u.beta, alpha, others);
    v.require(g2 == 2.0 * g, "doubling M in configuration " + std::to_string(c));

    const double rate = oracle::mrc_ergodic_rate(m, users, k, 1.0, 100000, 1000 + static_cast<std::uint64_t>(c));
    const double bound = std::log2(1.0 + g);
    v.require(rate >= bound, "configuration " + std::to_string(c) + " rate " + fmt("%.4f", rate) + " < "
                               + fmt("%.4f", bound));
    min_margin = std::min(min_margin, rate - bound);
  }
  v.note("20 configurations, 1e5 draws each, smallest margin " + fmt("%.4f", min_margin) + " bit/s/Hz");
  return v;
}

Verdict finite_blocklength()
{
  Verdict v;
  std::vector<std::uint64_t> ns, bs;
  std::vector<double> gs;
  for (int i = 0; i < 10; ++i) {
    ns.push_back(static_cast<std::uint64_t>(std::llround(50.0 * std::pow(2.0, i))));
    bs.push_back(static_cast<std::uint64_t>(std::llround(20.0 * std::pow(2.0, i))));
    gs.push_back(0.05 * std::pow(2.0, i));
  }
  int violations = 0;
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j)
      for (std::size_t k = 0; k < 10; ++k) {
        const double e = decode_error(ns[i], bs[j], gs[k]);
        if (i + 1 < 10 && decode_error(ns[i + 1], bs[j], gs[k]) > e)
          ++violations;
        if (j + 1 < 10 && decode_error(ns[i], bs[j + 1], gs[k]) < e)
          ++violations;
        if (k + 1 < 10 && decode_error(ns[i], bs[j], gs[k + 1]) > e)
          ++violations;
      }
  v.require(violations == 0, std::to_string(violations) + " monotonicity violations");

  const double eps = decode_error(1000, 1000, 1.0);
  const long double l2e = 1.0L / std::log(2.0L);
  const long double x = (0.5L * std::log2(1000.0L)) / std::sqrt(1000.0L * 0.75L * l2e * l2e);
  const double ref = static_cast<double>(oracle::q_simpson(x));
  v.require(std::abs(eps - ref) <= 1e-3, "spot value " + fmt("%.6f", eps) + " vs " + fmt("%.6f", ref));
  v.note("1000-point grid monotone, eps(1000, 1000, 1) = " + fmt("%.6f", eps) + ", oracle " + fmt("%.6f", ref));
  return v;
}

Verdict numerology()
{
  Verdict v;
  const NumerologyStudy study;
  double single = 0.0, mixed = 0.0;
  for (const auto& r : numerology_gains(study)) {
    if (r.label == "single")
      single = r.optimized_se / r.baseline_se;
    if (r.label == "mixed")
      mixed = r.optimized_se / r.baseline_se;
  }
  v.require(mixed >= 1.15, "two-population ratio " + fmt("%.4f", mixed));
  v.require(std::abs(single - 1.24) <= 0.01, "single-population ratio " + fmt("%.4f", single) + " not 1.24 +/- 0.01");
  v.note("two-population " + fmt("%.4f", mixed) + ", single-population " + fmt("%.4f", single));
  return v;
}

std::string slurp(const std::filesystem::path& p)
{
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Verdict determinism()
{
  Verdict v;
  const auto s = load_scenario(kConfigs / "gangnam_like_small.cfg");
  const Scheme schemes[] = {Scheme::GFMA, Scheme::FGMA, Scheme::FourWay};
  const auto root = std::filesystem::temp_directory_path() / ("urllc_acceptance_" + std::to_string(::getpid()));
  for (const char* d : {"a", "b"})
    write_outputs(root / d, s, 7, compare(s, schemes, 7, 2));
  std::size_t bytes = 0;
  for (const char* f : {"trace.csv", "metrics.csv", "cdf.csv"}) {
    const auto a = slurp(root / "a" / f);
    const auto b = slurp(root / "b" / f);
    v.require(!a.empty() && a == b, std::string(f) + " differs");
    bytes += a.size();
  }
  std::filesystem::remove_all(root);
  v.note("trace, metrics and CDF identical (" + std::to_string(bytes) + " bytes)");
  return v;
}

} // namespace

int main()
{
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
    {"four-way pre-data overhead", four_way_overhead},
    {"grant-free latency", grant_free_latency},
    {"reliability dimensioning", reliability},
    {"protocol ordering", protocol_ordering},
    {"dimensioning oracles", dimensioning_oracles},
    {"SINR scaling", sinr_scaling},
    {"finite-blocklength model", finite_blocklength},
    {"numerology gain", numerology},
    {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    failed += !v.pass;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
