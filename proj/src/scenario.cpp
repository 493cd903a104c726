#include "urllc/scenario.hpp"

#include "urllc/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace urllc {

std::string_view to_string(Scheme s)
{
  switch (s) {
    case Scheme::FourWay: return "FourWay";
    case Scheme::FGMA: return "FGMA";
    case Scheme::FGMASps: return "FGMA-SPS";
    case Scheme::GFMA: return "GFMA";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view s)
{
  if (s == "FourWay" || s == "4way" || s == "LTE")
    return Scheme::FourWay;
  if (s == "FGMA")
    return Scheme::FGMA;
  if (s == "FGMA-SPS" || s == "SPS")
    return Scheme::FGMASps;
  if (s == "GFMA")
    return Scheme::GFMA;
  return std::nullopt;
}

Protocol protocol_of(Scheme s)
{
  switch (s) {
    case Scheme::FourWay: return Protocol::FourWay;
    case Scheme::GFMA: return Protocol::GFMA;
    case Scheme::FGMA:
    case Scheme::FGMASps: break;
  }
  return Protocol::FGMA;
}

std::size_t Scenario::total_users() const
{
  std::size_t n = 0;
  for (const auto& p : populations)
    n += p.users;
  return n;
}

SimTime Scenario::max_latency() const
{
  SimTime m;
  for (const auto& p : populations)
    m = std::max(m, p.cls.air_latency);
  return m;
}

double Scenario::overhead() const
{
  if (!frame.auto_numerology)
    return frame.cp_overhead;
  SimTime budget = populations.empty() ? SimTime::from_ms(2) : populations.front().cls.air_latency;
  for (const auto& p : populations)
    budget = std::min(budget, p.cls.air_latency);
  return select_numerology(frame.delay_spread_s, frame.coherence_s, budget.seconds()).total_overhead();
}

namespace {

struct Entry
{
  std::string value;
  int line = 0;
  int column = 0; ///< column of the value
};

struct Section
{
  std::string kind; ///< "scenario", "population", ...
  std::string name; ///< population name
  int line = 0;
  std::map<std::string, Entry> entries;
};

std::string_view trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<Section> parse_sections(std::string_view text)
{
  std::vector<Section> sections;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos)
      nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    if (auto hash = raw.find_first_of("#;"); hash != std::string_view::npos)
      raw = raw.substr(0, hash);
    const auto body = trim(raw);
    if (body.empty())
      continue;
    const int indent = static_cast<int>(raw.find(body.front())) + 1;

    if (body.front() == '[') {
      if (body.back() != ']')
        throw ParseError(line_no, indent + static_cast<int>(body.size()), "expected ']' to close section header");
      const auto inner = trim(body.substr(1, body.size() - 2));
      if (inner.empty())
        throw ParseError(line_no, indent + 1, "empty section name");
      Section s;
      s.line = line_no;
      const auto space = inner.find_first_of(" \t");
      s.kind = std::string(inner.substr(0, space));
      if (space != std::string_view::npos)
        s.name = std::string(trim(inner.substr(space)));
      sections.push_back(std::move(s));
      continue;
    }

    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(line_no, indent, "expected 'key = value'");
    const auto key = trim(body.substr(0, eq));
    if (key.empty())
      throw ParseError(line_no, indent, "missing key before '='");
    if (sections.empty())
      throw ParseError(line_no, indent, "key '" + std::string(key) + "' appears before any section");
    const auto value = trim(body.substr(eq + 1));
    const int value_col = value.empty() ? indent + static_cast<int>(eq) + 1
                                        : static_cast<int>(raw.find(value, static_cast<std::size_t>(indent - 1) + eq)) + 1;
    auto& entries = sections.back().entries;
    if (entries.contains(std::string(key)))
      throw ParseError(line_no, indent, "duplicate key '" + std::string(key) + "'");
    entries.emplace(std::string(key), Entry{std::string(value), line_no, value_col});
  }
  return sections;
}

double to_double(const Entry& e)
{
  double v = 0.0;
  const auto* b = e.value.data();
  const auto* end = b + e.value.size();
  auto [p, ec] = std::from_chars(b, end, v);
  if (ec != std::errc{} || p != end || !std::isfinite(v))
    throw ParseError(e.line, e.column, "expected a number, got '" + e.value + "'");
  return v;
}

long long to_int(const Entry& e)
{
  long long v = 0;
  const auto* b = e.value.data();
  const auto* end = b + e.value.size();
  auto [p, ec] = std::from_chars(b, end, v);
  if (ec != std::errc{} || p != end)
    throw ParseError(e.line, e.column, "expected an integer, got '" + e.value + "'");
  return v;
}

bool to_bool(const Entry& e)
{
  if (e.value == "true" || e.value == "yes" || e.value == "1")
    return true;
  if (e.value == "false" || e.value == "no" || e.value == "0")
    return false;
  throw ParseError(e.line, e.column, "expected true or false, got '" + e.value + "'");
}

std::vector<double> to_list(const Entry& e)
{
  std::vector<double> out;
  std::string item;
  std::stringstream ss(e.value);
  while (std::getline(ss, item, ',')) {
    Entry sub = e;
    sub.value = std::string(trim(item));
    out.push_back(to_double(sub));
  }
  return out;
}

/// Hands out entries of one section and remembers which ones were read.
class Reader
{
public:
  Reader(const Section& s, std::vector<std::string>& violations)
    : m_s{s}
    , m_violations{violations}
  {}

  const Entry* get(const std::string& key)
  {
    m_used.insert(key);
    auto it = m_s.entries.find(key);
    return it == m_s.entries.end() ? nullptr : &it->second;
  }

  template <typename F>
  void with(const std::string& key, F&& f)
  {
    if (const Entry* e = get(key))
      f(*e);
  }

  void report_unknown(const std::string& where)
  {
    for (const auto& [k, e] : m_s.entries)
      if (!m_used.contains(k))
        m_violations.push_back(where + "." + k + ": unknown key (line " + std::to_string(e.line) + ")");
  }

private:
  const Section& m_s;
  std::vector<std::string>& m_violations;
  std::set<std::string> m_used;
};

Population read_population(const Section& sec, Reader& r, std::vector<std::string>& v)
{
  const std::string where = "population " + sec.name;
  Population p;
  p.name = sec.name;
  if (p.name.empty())
    v.push_back("population section at line " + std::to_string(sec.line) + " needs a name");

  const Entry* cls = r.get("class");
  const Entry* pre = r.get("preset");
  std::optional<int> fixed_class;
  bool resolved = false;

  if (cls != nullptr && pre != nullptr) {
    v.push_back(where + ": give either class or preset, not both");
  } else if (cls != nullptr) {
    const auto id = to_int(*cls);
    if (id < 1 || id > 8) {
      v.push_back(where + ".class: " + std::to_string(id) + " outside 1..8");
    } else {
      p.cls = canonical_class(static_cast<int>(id));
      fixed_class = static_cast<int>(id);
      resolved = true;
    }
  } else if (pre != nullptr) {
    const auto slash = pre->value.find('/');
    const auto uc = parse_use_case(pre->value.substr(0, slash));
    const auto mt = slash == std::string::npos ? std::nullopt : parse_media_type(pre->value.substr(slash + 1));
    if (!uc || !mt) {
      v.push_back(where + ".preset: '" + pre->value + "' is not UseCase/Type");
    } else {
      PresetOptions opt;
      r.with("variant", [&](const Entry& e) {
        if (e.value == "compressed")
          opt.compressed = true;
        else if (e.value != "uncompressed")
          v.push_back(where + ".variant: expected compressed or uncompressed");
      });
      r.with("point", [&](const Entry& e) {
        if (auto pt = parse_range_point(e.value))
          opt.point = *pt;
        else
          v.push_back(where + ".point: expected low, mid or high");
      });
      r.with("regime", [&](const Entry& e) { opt.latency_regime = static_cast<std::size_t>(std::max(0LL, to_int(e))); });
      try {
        p.cls = preset(*uc, *mt, opt);
        resolved = true;
      } catch (const UnknownPreset& ex) {
        v.push_back(where + ".preset: " + ex.what());
      }
    }
  } else {
    v.push_back(where + ": needs class or preset");
  }

  r.with("users", [&](const Entry& e) {
    const auto n = to_int(e);
    if (n < 0)
      v.push_back(where + ".users: must be non-negative");
    else
      p.users = static_cast<std::size_t>(n);
  });
  r.with("protocol", [&](const Entry& e) {
    if (auto s = parse_scheme(e.value))
      p.scheme = *s;
    else
      v.push_back(where + ".protocol: '" + e.value + "' is not FourWay, FGMA, FGMA-SPS or GFMA");
  });
  r.with("aligned", [&](const Entry& e) { p.aligned = to_bool(e); });
  r.with("ge_p_on_off", [&](const Entry& e) { p.cls.ge.p_on_off = to_double(e); });
  r.with("ge_p_off_on", [&](const Entry& e) { p.cls.ge.p_off_on = to_double(e); });

  const Entry* rate = r.get("rate");
  const Entry* arrival = r.get("arrival");
  const Entry* reliability = r.get("reliability");
  const Entry* latency = r.get("latency_ms");
  const Entry* burst = r.get("burst_bytes");
  if (!resolved)
    return p;

  bool arrival_changed = false;
  if (arrival != nullptr) {
    if (auto m = parse_arrival_model(arrival->value)) {
      arrival_changed = *m != p.cls.arrival;
      p.cls.arrival = *m;
    } else {
      v.push_back(where + ".arrival: '" + arrival->value + "' is not Periodic, GilbertElliot or EventPoisson");
    }
  }
  if (reliability != nullptr)
    p.cls.reliability = to_double(*reliability);
  if (latency != nullptr)
    p.cls.air_latency = SimTime::from_ms(to_double(*latency));
  if (burst != nullptr) {
    const auto b = to_int(*burst);
    if (b <= 0)
      v.push_back(where + ".burst_bytes: must be positive");
    else
      p.cls.burst_bytes = static_cast<std::uint64_t>(b);
  }

  if (!(p.cls.reliability > 0.0 && p.cls.reliability < 1.0))
    v.push_back(where + ".reliability: must lie in (0, 1)");
  if (p.cls.air_latency <= SimTime{})
    v.push_back(where + ".latency_ms: must be positive");
  if (!(p.cls.ge.p_on_off > 0.0 && p.cls.ge.p_on_off < 1.0) || !(p.cls.ge.p_off_on > 0.0 && p.cls.ge.p_off_on < 1.0))
    v.push_back(where + ": Gilbert-Elliot transition probabilities must lie in (0, 1)");

  if (fixed_class) {
    const auto& row = class_row(*fixed_class);
    if (!row.reliability.contains(p.cls.reliability, 1e-10))
      v.push_back(where + ".reliability: outside the range of class " + std::to_string(*fixed_class));
    if (!row.latency_s.contains(p.cls.air_latency.seconds(), 1e-10))
      v.push_back(where + ".latency_ms: outside the range of class " + std::to_string(*fixed_class));
    if (!row.burst_bytes.contains(static_cast<double>(p.cls.burst_bytes), 1e-9))
      v.push_back(where + ".burst_bytes: outside the range of class " + std::to_string(*fixed_class));
    if (row.arrival(p.cls.arrival) == nullptr) {
      v.push_back(where + ".arrival: class " + std::to_string(*fixed_class) + " has no "
                  + std::string(to_string(p.cls.arrival)) + " arrivals");
      return p;
    }
    if (rate != nullptr)
      p.cls.rate = clamp_rate(*fixed_class, p.cls.arrival, to_double(*rate));
    else if (arrival_changed)
      p.cls.rate = default_rate(*fixed_class, p.cls.arrival);
  } else {
    if (rate != nullptr)
      p.cls.rate = to_double(*rate);
    try {
      p.cls.class_id = classify(p.cls.reliability, p.cls.air_latency.seconds(), static_cast<double>(p.cls.burst_bytes),
                                p.cls.arrival);
      if (rate != nullptr)
        p.cls.rate = clamp_rate(p.cls.class_id, p.cls.arrival, p.cls.rate);
    } catch (const NoMatchingClass& ex) {
      v.push_back(where + ": " + ex.what());
    }
  }
  if (!(p.cls.rate > 0.0))
    v.push_back(where + ".rate: must be positive");

  if (p.aligned && p.cls.arrival != ArrivalModel::Periodic)
    v.push_back(where + ".aligned: only periodic arrivals can be aligned");
  if (p.scheme == Scheme::FGMASps && !(p.cls.arrival == ArrivalModel::Periodic && p.aligned))
    v.push_back(where + ".protocol: FGMA-SPS needs periodic arrivals with aligned = true");
  return p;
}

} // namespace

std::vector<std::string> check(const Scenario& s)
{
  std::vector<std::string> v;
  if (s.frame.t_min <= SimTime{})
    v.push_back("frame.t_min_ms: must be positive");
  if (!(s.frame.cp_overhead >= 0.0 && s.frame.cp_overhead < 1.0))
    v.push_back("frame.cp_overhead: must lie in [0, 1)");
  if (!(s.frame.carrier_bandwidth_hz > 0.0))
    v.push_back("frame.carrier_bandwidth_mhz: must be positive");
  if (s.replications < 1)
    v.push_back("scenario.replications: must be at least 1");
  if (s.horizon <= s.max_latency() * 10)
    v.push_back("scenario.horizon_s: must exceed 10 x the largest latency bound ("
                + std::to_string((s.max_latency() * 10).seconds()) + " s)");
  if (s.deployment.base_stations < 1)
    v.push_back("deployment.base_stations: must be at least 1");
  if (s.deployment.antennas < 1)
    v.push_back("deployment.antennas: must be at least 1");
  if (!(s.deployment.area_m > 0.0))
    v.push_back("deployment.area_m: must be positive");
  if (s.rrm.w_grid_hz.empty())
    v.push_back("rrm.w_grid_mhz: must not be empty");
  for (std::size_t i = 0; i < s.rrm.w_grid_hz.size(); ++i) {
    if (!(s.rrm.w_grid_hz[i] > 0.0) || (i > 0 && s.rrm.w_grid_hz[i] <= s.rrm.w_grid_hz[i - 1])) {
      v.push_back("rrm.w_grid_mhz: must be positive and strictly ascending");
      break;
    }
  }
  if (s.rrm.k_max < 1)
    v.push_back("rrm.k_max: must be at least 1");
  if (s.rrm.preamble_pool < 1)
    v.push_back("rrm.preamble_pool: must be at least 1");
  if (!(s.rrm.detection.c0 > 0.0))
    v.push_back("rrm.detect_c0: must be positive");
  try {
    s.rrm.split.validate();
  } catch (const InvalidSplit& ex) {
    v.push_back(std::string("rrm.eps_split: ") + ex.what());
  }
  for (const auto& p : s.populations)
    if (p.cls.class_id < 1 || p.cls.class_id > 8)
      v.push_back("population " + p.name + ": class " + std::to_string(p.cls.class_id) + " outside 1..8");
  if (s.frame.auto_numerology) {
    try {
      (void)s.overhead();
    } catch (const NoFeasibleNumerology& ex) {
      v.push_back(std::string("frame.numerology: ") + ex.what());
    }
  }
  return v;
}

Scenario validate(std::string_view text, const std::filesystem::path& base_dir)
{
  const auto sections = parse_sections(text);
  Scenario s;
  std::vector<std::string> v;
  std::set<std::string> seen;
  std::set<std::string> population_names;

  for (const auto& sec : sections) {
    Reader r(sec, v);
    const std::string where = sec.kind;
    if (sec.kind != "population") {
      if (seen.contains(sec.kind))
        v.push_back("[" + sec.kind + "] appears more than once (line " + std::to_string(sec.line) + ")");
      seen.insert(sec.kind);
    }

    if (sec.kind == "scenario") {
      r.with("name", [&](const Entry& e) { s.name = e.value; });
      r.with("horizon_s", [&](const Entry& e) { s.horizon = SimTime::from_seconds(to_double(e)); });
      r.with("replications", [&](const Entry& e) { s.replications = static_cast<int>(to_int(e)); });
      r.with("seed", [&](const Entry& e) { s.seed = static_cast<std::uint64_t>(to_int(e)); });
    } else if (sec.kind == "deployment") {
      auto& d = s.deployment;
      r.with("base_stations", [&](const Entry& e) { d.base_stations = static_cast<int>(to_int(e)); });
      r.with("layout", [&](const Entry& e) {
        if (e.value == "grid")
          d.layout = BsLayout::Grid;
        else if (e.value == "random")
          d.layout = BsLayout::Random;
        else
          v.push_back("deployment.layout: expected grid or random");
      });
      r.with("area_m", [&](const Entry& e) { d.area_m = to_double(e); });
      r.with("antennas", [&](const Entry& e) { d.antennas = static_cast<int>(to_int(e)); });
      r.with("p_max_db", [&](const Entry& e) { d.p_max_db = to_double(e); });
      r.with("shadowing_db", [&](const Entry& e) { d.shadowing_db = to_double(e); });
      r.with("bs_height_m", [&](const Entry& e) { d.bs_height_m = to_double(e); });
      r.with("ue_height_m", [&](const Entry& e) { d.ue_height_m = to_double(e); });
      r.with("pathloss_csv", [&](const Entry& e) {
        std::filesystem::path p = e.value;
        s.pathloss_csv = p.is_relative() ? base_dir / p : p;
      });
    } else if (sec.kind == "frame") {
      auto& f = s.frame;
      r.with("t_min_ms", [&](const Entry& e) { f.t_min = SimTime::from_ms(to_double(e)); });
      r.with("cp_overhead", [&](const Entry& e) { f.cp_overhead = to_double(e); });
      r.with("numerology", [&](const Entry& e) {
        if (e.value == "auto")
          f.auto_numerology = true;
        else if (e.value != "fixed")
          v.push_back("frame.numerology: expected fixed or auto");
      });
      r.with("delay_spread_us", [&](const Entry& e) { f.delay_spread_s = to_double(e) * 1e-6; });
      r.with("coherence_ms", [&](const Entry& e) { f.coherence_s = to_double(e) * 1e-3; });
      r.with("carrier_bandwidth_mhz", [&](const Entry& e) { f.carrier_bandwidth_hz = to_double(e) * 1e6; });
    } else if (sec.kind == "rrm") {
      auto& m = s.rrm;
      r.with("w_grid_mhz", [&](const Entry& e) {
        m.w_grid_hz.clear();
        for (double w : to_list(e))
          m.w_grid_hz.push_back(w * 1e6);
      });
      r.with("k_max", [&](const Entry& e) { m.k_max = static_cast<int>(to_int(e)); });
      r.with("rx_snr_target_db", [&](const Entry& e) { m.rx_snr_target_db = to_double(e); });
      r.with("pilot_power_ratio", [&](const Entry& e) { m.pilot_power_ratio = to_double(e); });
      r.with("group_window_db", [&](const Entry& e) { m.group_window_db = to_double(e); });
      r.with("eps_split", [&](const Entry& e) {
        const auto parts = to_list(e);
        if (parts.size() != 3)
          v.push_back("rrm.eps_split: expected overflow, detect, decode fractions");
        else
          m.split = {parts[0], parts[1], parts[2]};
      });
      r.with("detect_c0", [&](const Entry& e) { m.detection.c0 = to_double(e); });
      r.with("preamble_pool", [&](const Entry& e) { m.preamble_pool = static_cast<std::size_t>(std::max(0LL, to_int(e))); });
    } else if (sec.kind == "numerology") {
      auto& n = s.numerology;
      r.with("low_delay_spread_us", [&](const Entry& e) { n.low_delay_spread_s = to_double(e) * 1e-6; });
      r.with("high_delay_spread_us", [&](const Entry& e) { n.high_delay_spread_s = to_double(e) * 1e-6; });
      r.with("high_share", [&](const Entry& e) { n.high_share = to_double(e); });
      r.with("coherence_ms", [&](const Entry& e) { n.coherence_s = to_double(e) * 1e-3; });
      r.with("latency_budget_ms", [&](const Entry& e) { n.latency_budget_s = to_double(e) * 1e-3; });
      r.with("baseline_overhead", [&](const Entry& e) { n.baseline_overhead = to_double(e); });
    } else if (sec.kind == "population") {
      auto p = read_population(sec, r, v);
      if (!p.name.empty() && !population_names.insert(p.name).second)
        v.push_back("population " + p.name + ": defined more than once");
      s.populations.push_back(std::move(p));
    } else {
      v.push_back("[" + sec.kind + "] is not a known section (line " + std::to_string(sec.line) + ")");
      continue;
    }
    r.report_unknown(sec.kind == "population" ? "population " + sec.name : where);
  }

  for (auto& msg : check(s))
    v.push_back(std::move(msg));
  if (!v.empty())
    throw ValidationError(std::move(v));
  return s;
}

Scenario load_scenario(const std::filesystem::path& file)
{
  std::ifstream in(file);
  if (!in)
    throw ScenarioInvalid("cannot open " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return validate(ss.str(), file.parent_path());
}

} // namespace urllc
