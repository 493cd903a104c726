#include "urllc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>

namespace urllc {

std::string format_seconds(SimTime t)
{
  const std::int64_t ns = t.ns();
  const std::uint64_t mag = ns < 0 ? static_cast<std::uint64_t>(-(ns + 1)) + 1 : static_cast<std::uint64_t>(ns);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%s%llu.%09llu", ns < 0 ? "-" : "", static_cast<unsigned long long>(mag / 1'000'000'000ULL),
                static_cast<unsigned long long>(mag % 1'000'000'000ULL));
  return buf;
}

SimTime quantile(const std::vector<SimTime>& sorted, double q)
{
  if (sorted.empty())
    return SimTime{};
  const double n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

Summary summarize(const std::vector<RunMetrics>& runs, int cdf_points)
{
  using Key = std::tuple<Scheme, int>;
  struct Acc
  {
    SeriesSummary s;
    std::vector<SimTime> latencies;
  };
  std::map<Key, Acc> acc;

  for (const auto& run : runs) {
    for (const auto& r : run.packets) {
      auto& a = acc[{r.scheme, r.class_id}];
      a.s.scheme = r.scheme;
      a.s.class_id = r.class_id;
      ++a.s.packets;
      a.latencies.push_back(r.latency);
      switch (r.outcome) {
        case Outcome::Delivered: ++a.s.delivered; break;
        case Outcome::DeadlineMiss: ++a.s.deadline_miss; break;
        case Outcome::DecodeFail: ++a.s.decode_fail; break;
        case Outcome::DetectFail: ++a.s.detect_fail; break;
        case Outcome::Overflow: ++a.s.overflow; break;
      }
      if (r.outcome == Outcome::Delivered)
        a.s.goodput_bits += static_cast<double>(r.size_bits);
    }
    for (const auto& u : run.usage) {
      auto& a = acc[{u.scheme, u.class_id}];
      a.s.scheme = u.scheme;
      a.s.class_id = u.class_id;
      a.s.bandwidth_time += u.bandwidth_time;
    }
  }

  std::map<Scheme, std::set<int>> classes_of;
  for (const auto& [k, a] : acc)
    classes_of[std::get<0>(k)].insert(std::get<1>(k));

  Summary out;
  for (auto& [k, a] : acc) {
    auto& s = a.s;
    s.label = std::string(to_string(s.scheme));
    if (classes_of[s.scheme].size() > 1)
      s.label += "/c" + std::to_string(s.class_id);
    s.reliability = s.packets == 0 ? 0.0 : static_cast<double>(s.delivered) / static_cast<double>(s.packets);
    s.spectral_efficiency = s.bandwidth_time > 0.0 ? s.goodput_bits / s.bandwidth_time : 0.0;
    std::sort(a.latencies.begin(), a.latencies.end());
    s.p5 = quantile(a.latencies, 0.05);
    s.p50 = quantile(a.latencies, 0.50);
    s.p95 = quantile(a.latencies, 0.95);
    s.p99 = quantile(a.latencies, 0.99);
    s.p999 = quantile(a.latencies, 0.999);
    if (!a.latencies.empty()) {
      const std::size_t n = a.latencies.size();
      const auto pts = static_cast<std::size_t>(cdf_points);
      for (std::size_t i = 1; i <= pts; ++i) {
        const std::size_t rank = std::max<std::size_t>(1, (i * n + pts - 1) / pts);
        s.cdf.push_back(a.latencies[rank - 1]);
      }
    }
    out.series.push_back(std::move(s));
  }

  using CellKey = std::tuple<int, Scheme>;
  std::map<CellKey, std::pair<double, double>> cell_se;
  std::map<CellKey, std::pair<double, int>> cell_bw; ///< summed bandwidth, runs present
  for (const auto& run : runs) {
    std::map<CellKey, double> bw;
    for (const auto& u : run.usage) {
      auto& c = cell_se[{u.bs_id, u.scheme}];
      c.first += u.goodput_bits;
      c.second += u.bandwidth_time;
      bw[{u.bs_id, u.scheme}] += u.bandwidth_hz;
    }
    for (const auto& [k, w] : bw) {
      cell_bw[k].first += w;
      ++cell_bw[k].second;
    }
  }
  for (const auto& [k, v] : cell_se) {
    CellSummary c;
    c.bs_id = std::get<0>(k);
    c.scheme = std::get<1>(k);
    c.spectral_efficiency = v.second > 0.0 ? v.first / v.second : 0.0;
    c.bandwidth_hz = cell_bw[k].first / cell_bw[k].second;
    out.cells.push_back(c);
  }
  return out;
}

} // namespace urllc
