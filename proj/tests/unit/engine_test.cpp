#include "urllc/engine.hpp"
#include "urllc/errors.hpp"
#include "urllc/experiment.hpp"
#include "urllc/scenario.hpp"

#include <doctest.h>

#include <map>
#include <sstream>

using namespace urllc;

namespace {

Scenario small(const char* protocol, const char* extra = "")
{
  std::string text = R"(
[scenario]
horizon_s = 0.5
[deployment]
base_stations = 2
area_m = 400
antennas = 64
[rrm]
w_grid_mhz = 1, 2, 4, 8, 16, 32, 64, 128
k_max = 16
[population u]
class = 7
users = 60
rate = 100
burst_bytes = 8000
protocol = )";
  text += protocol;
  text += "\n";
  text += extra;
  return validate(text);
}

} // namespace

TEST_CASE("event order")
{
  const Event a{SimTime::from_ns(5), EventKind::SlotBoundary, 9};
  const Event b{SimTime::from_ns(5), EventKind::TxComplete, 1};
  const Event c{SimTime::from_ns(4), EventKind::GrantIssued, 0};
  CHECK(event_before(c, a));
  CHECK(event_before(a, b));
  CHECK_FALSE(event_before(b, a));
  const Event d{SimTime::from_ns(5), EventKind::SlotBoundary, 10};
  CHECK(event_before(a, d));
}

TEST_CASE("decode delay and worst case")
{
  const SimTime t = SimTime::from_ms(0.2);
  CHECK(decode_delay(t, 64000) == t);
  CHECK(decode_delay(t, 50'000'000'000ULL) == SimTime::from_seconds(1));
  CHECK(propagation_delay(500) == SimTime::from_ns(1668));
  CHECK(worst_case_latency(Scheme::GFMA, t, t, SimTime{}, t) == SimTime::from_ms(0.6));
  CHECK(worst_case_latency(Scheme::FourWay, t, t, SimTime{}, t) == SimTime::from_ms(2.2));
}

TEST_CASE("every packet is accounted for and latencies decompose")
{
  for (const char* p : {"GFMA", "FGMA", "FourWay"}) {
    CAPTURE(p);
    const auto s = small(p);
    const auto m = run(s, 3);
    REQUIRE_FALSE(m.packets.empty());
    std::map<Outcome, std::size_t> by;
    for (const auto& r : m.packets) {
      ++by[r.outcome];
      CHECK(r.latency == r.components.total());
      CHECK(r.components.alignment < s.frame.t_min);
      if (r.outcome == Outcome::Delivered)
        CHECK(r.arrival + r.latency <= r.deadline);
    }
    std::size_t total = 0;
    for (const auto& [o, n] : by)
      total += n;
    CHECK(total == m.packets.size());
  }
}

TEST_CASE("four-way packets miss a 2 ms deadline")
{
  const auto m = run(small("FourWay"), 1);
  for (const auto& r : m.packets) {
    CHECK(r.outcome != Outcome::Delivered);
    CHECK(r.components.handshake >= SimTime::from_ms(1.6));
  }
}

TEST_CASE("grant-free latency")
{
  const auto s = small("GFMA");
  const auto m = run(s, 2);
  for (const auto& sc : m.plan.subchannels) {
    CHECK(sc.meets_deadline);
    CHECK(sc.dim.eps_total() <= sc.cls.failure_budget());
  }
  for (const auto& r : m.packets) {
    CHECK(r.components.handshake == SimTime{});
    CHECK(r.latency <= SimTime::from_ms(2));
  }
}

TEST_CASE("runs are deterministic")
{
  const auto s = small("FGMA");
  std::ostringstream a, b;
  write_trace(a, {run(s, 42)});
  write_trace(b, {run(s, 42)});
  CHECK(a.str() == b.str());
  std::ostringstream c;
  write_trace(c, {run(s, 43)});
  CHECK(a.str() != c.str());
}

TEST_CASE("comparison uses common arrivals")
{
  const auto s = small("GFMA");
  const Scheme schemes[] = {Scheme::GFMA, Scheme::FGMA, Scheme::FourWay};
  const auto r = compare(s, schemes, 5, 1);
  REQUIRE(r.runs.size() == 3);
  REQUIRE(r.summary.series.size() == 3);
  const auto& base = r.runs[0].packets;
  for (const auto& other : r.runs) {
    REQUIRE(other.packets.size() == base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(other.packets[i].arrival == base[i].arrival);
      CHECK(other.packets[i].components.alignment == base[i].components.alignment);
    }
  }
}

TEST_CASE("semi-persistent grants beat per-packet grants on periodic traffic")
{
  auto make = [](const char* protocol) {
    std::string text = R"(
[scenario]
horizon_s = 0.5
[deployment]
base_stations = 2
area_m = 400
[rrm]
w_grid_mhz = 1, 2, 4, 8, 16, 32, 64, 128
k_max = 16
[population u]
class = 3
users = 40
arrival = Periodic
rate = 100
aligned = true
reliability = 0.99999
latency_ms = 2
burst_bytes = 8000
protocol = )";
    return validate(text + protocol + "\n");
  };
  const auto sps = run_experiment(make("FGMA-SPS"), 4, 1);
  const auto fgma = run_experiment(make("FGMA"), 4, 1);
  int sps_handshakes = 0, fgma_handshakes = 0;
  for (const auto& u : sps.runs[0].usage)
    sps_handshakes += u.handshakes;
  for (const auto& u : fgma.runs[0].usage)
    fgma_handshakes += u.handshakes;
  CHECK(sps_handshakes <= 40);
  CHECK(fgma_handshakes >= 10 * 40);
  CHECK(sps.summary.series[0].spectral_efficiency >= fgma.summary.series[0].spectral_efficiency);
}

TEST_CASE("summaries")
{
  const std::vector<SimTime> v{SimTime::from_ns(1), SimTime::from_ns(2), SimTime::from_ns(3), SimTime::from_ns(4)};
  CHECK(quantile(v, 0.5) == SimTime::from_ns(2));
  CHECK(quantile(v, 1.0) == SimTime::from_ns(4));
  CHECK(quantile(v, 0.01) == SimTime::from_ns(1));

  RunMetrics m;
  m.horizon = SimTime::from_seconds(1);
  for (std::uint64_t i = 0; i < 5; ++i) {
    PacketRecord r;
    r.packet_id = i;
    r.latency = SimTime::from_ms(1);
    r.size_bits = 8;
    m.packets.push_back(r);
  }
  const auto s = summarize({m});
  REQUIRE(s.series.size() == 1);
  CHECK(s.series[0].reliability == 1.0);
  CHECK(s.series[0].cdf.size() == static_cast<std::size_t>(kCdfPoints));
  for (auto x : s.series[0].cdf)
    CHECK(x == SimTime::from_ms(1));

  const auto empty = summarize({RunMetrics{}});
  for (const auto& x : empty.series) {
    CHECK(x.spectral_efficiency == 0.0);
    CHECK(x.cdf.empty());
  }
}

TEST_CASE("an invalid scenario is refused")
{
  auto s = small("GFMA");
  s.frame.t_min = SimTime{};
  CHECK_THROWS_AS(run(s, 1), ScenarioInvalid);
}
