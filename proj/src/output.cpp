#include "urllc/experiment.hpp"

#include "urllc/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

namespace urllc {

namespace {

std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

} // namespace

void write_trace(std::ostream& out, const std::vector<RunMetrics>& runs)
{
  out << "packet_id,replication,user_id,bs_id,class,ma_kind,arrival_s,alignment_s,handshake_s,queueing_s,"
         "transmission_s,propagation_s,decode_s,outcome,latency_s\n";
  for (const auto& run : runs) {
    for (const auto& r : run.packets) {
      const auto& c = r.components;
      out << r.packet_id << ',' << r.replication << ',' << r.user_id << ',' << r.bs_id << ',' << r.class_id << ','
          << to_string(r.scheme) << ',' << format_seconds(r.arrival) << ',' << format_seconds(c.alignment) << ','
          << format_seconds(c.handshake) << ',' << format_seconds(c.queueing) << ',' << format_seconds(c.transmission)
          << ',' << format_seconds(c.propagation) << ',' << format_seconds(c.decode) << ',' << to_string(r.outcome)
          << ',' << format_seconds(r.latency) << '\n';
    }
  }
}

void write_metrics(std::ostream& out, const Summary& summary)
{
  out << "series,ma_kind,class,packets,delivered,deadline_miss,decode_fail,detect_fail,overflow,reliability,"
         "p5_s,p50_s,p95_s,p99_s,p999_s,goodput_bits,bandwidth_time_hz_s,se_bps_per_hz\n";
  for (const auto& s : summary.series) {
    out << s.label << ',' << to_string(s.scheme) << ',' << s.class_id << ',' << s.packets << ',' << s.delivered << ','
        << s.deadline_miss << ',' << s.decode_fail << ',' << s.detect_fail << ',' << s.overflow << ','
        << num(s.reliability) << ',' << format_seconds(s.p5) << ',' << format_seconds(s.p50) << ','
        << format_seconds(s.p95) << ',' << format_seconds(s.p99) << ',' << format_seconds(s.p999) << ','
        << num(s.goodput_bits) << ',' << num(s.bandwidth_time) << ',' << num(s.spectral_efficiency) << '\n';
  }
}

void write_cdf(std::ostream& out, const Summary& summary)
{
  out << "series,quantile,latency_s\n";
  for (const auto& s : summary.series) {
    const auto n = s.cdf.size();
    for (std::size_t i = 0; i < n; ++i)
      out << s.label << ',' << num(static_cast<double>(i + 1) / static_cast<double>(n)) << ','
          << format_seconds(s.cdf[i]) << '\n';
  }
}

void write_dimensioning(std::ostream& out, const std::vector<RunMetrics>& runs)
{
  out << "replication,subchannel_id,bs_id,scheme,ma_kind,class,G,m_star,tau_p,tau_pre,n_d,W_hz,T_s,q,"
         "eps_overflow,eps_detect,eps_decode,eps_target,worst_case_latency_s,meets_deadline,dimensioned\n";
  for (const auto& run : runs) {
    for (const auto& sc : run.plan.subchannels) {
      const auto& d = sc.dim;
      out << run.replication << ',' << sc.subchannel_id << ',' << sc.bs_id << ',' << to_string(sc.scheme) << ','
          << to_string(d.ma_kind) << ',' << sc.cls.class_id << ',' << d.group_size << ',' << d.provisioned_users << ','
          << d.pilot_symbols << ',' << d.preamble_symbols << ',' << d.data_symbols << ',' << num(d.bandwidth_hz) << ','
          << format_seconds(sc.slot) << ',' << num(d.activation_probability) << ',' << num(d.eps_overflow) << ','
          << num(d.eps_detect) << ',' << num(d.eps_decode) << ',' << num(sc.cls.failure_budget()) << ','
          << format_seconds(sc.worst_case) << ',' << (sc.meets_deadline ? 1 : 0) << ',' << (sc.dimensioned ? 1 : 0)
          << '\n';
    }
  }
}

void write_rrc_log(std::ostream& out, const std::vector<RunMetrics>& runs)
{
  out << "replication,time_s,user_id,event,from,to\n";
  for (const auto& run : runs)
    for (const auto& e : run.rrc_log)
      out << run.replication << ',' << format_seconds(e.time) << ',' << e.user_id << ',' << to_string(e.event) << ','
          << to_string(e.from) << ',' << to_string(e.to) << '\n';
}

std::string summary_json(const Scenario& s, std::uint64_t seed, const ExperimentResult& result)
{
  using nlohmann::ordered_json;
  ordered_json j;
  j["scenario"] = s.name;
  j["seed"] = seed;
  j["replications"] = s.replications;
  j["horizon_s"] = s.horizon.seconds();
  j["deadline_ms"] = s.max_latency().ms();

  ordered_json series = ordered_json::array();
  for (const auto& x : result.summary.series) {
    series.push_back({
      {"label", x.label},
      {"ma_kind", std::string(to_string(x.scheme))},
      {"class", x.class_id},
      {"packets", x.packets},
      {"reliability", x.reliability},
      {"p5_ms", x.p5.ms()},
      {"p50_ms", x.p50.ms()},
      {"p95_ms", x.p95.ms()},
      {"p99_ms", x.p99.ms()},
      {"p999_ms", x.p999.ms()},
      {"spectral_efficiency", x.spectral_efficiency},
    });
  }
  j["series"] = series;

  ordered_json cells = ordered_json::array();
  for (const auto& c : result.summary.cells)
    cells.push_back({{"bs_id", c.bs_id},
                     {"ma_kind", std::string(to_string(c.scheme))},
                     {"bandwidth_hz", c.bandwidth_hz},
                     {"spectral_efficiency", c.spectral_efficiency}});
  j["cells"] = cells;

  ordered_json gains = ordered_json::array();
  for (const auto& g : numerology_gains(s.numerology))
    gains.push_back({{"label", g.label},
                     {"baseline_se", g.baseline_se},
                     {"optimized_se", g.optimized_se},
                     {"ratio", g.optimized_se / g.baseline_se}});
  j["numerology_gain"] = {{"baseline_overhead", s.numerology.baseline_overhead}, {"mixes", gains}};
  return j.dump(2) + "\n";
}

void write_outputs(const std::filesystem::path& dir,
                   const Scenario& s,
                   std::uint64_t seed,
                   const ExperimentResult& result,
                   bool rrc_log)
{
  std::filesystem::create_directories(dir);
  auto open = [&dir](const char* name) {
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    if (!f)
      throw Error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("trace.csv");
    write_trace(f, result.runs);
  }
  {
    auto f = open("metrics.csv");
    write_metrics(f, result.summary);
  }
  {
    auto f = open("cdf.csv");
    write_cdf(f, result.summary);
  }
  {
    auto f = open("dimensioning.csv");
    write_dimensioning(f, result.runs);
  }
  {
    auto f = open("summary.json");
    f << summary_json(s, seed, result);
  }
  if (rrc_log) {
    auto f = open("rrc.csv");
    write_rrc_log(f, result.runs);
  }
}

} // namespace urllc
