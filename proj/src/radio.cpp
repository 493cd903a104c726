#include "urllc/radio.hpp"

#include "urllc/errors.hpp"
#include "urllc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace urllc {

double distance(const Position& a, const Position& b)
{
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

LinkGain pathloss_gain(double distance_m, double shadowing_db)
{
  const double d = std::max(distance_m, 1.0);
  const double pl_db = 128.1 + 37.6 * std::log10(d / 1000.0) + shadowing_db;
  return LinkGain{std::min(1.0, std::pow(10.0, -pl_db / 10.0)), d};
}

Deployment::Deployment(std::vector<BaseStation> base_stations,
                       std::vector<UserEquipment> users,
                       std::vector<std::vector<LinkGain>> gains)
  : m_bs{std::move(base_stations)}
  , m_users{std::move(users)}
  , m_gains{std::move(gains)}
{
  if (m_bs.empty())
    throw DimensionMismatch("deployment needs at least one base station");
  if (m_gains.size() != m_users.size())
    throw DimensionMismatch("gain matrix rows do not match user count");
  for (const auto& row : m_gains)
    if (row.size() != m_bs.size())
      throw DimensionMismatch("gain matrix columns do not match base station count");
  associate_nearest();
}

void Deployment::associate_nearest()
{
  m_serving.assign(m_users.size(), 0);
  for (std::size_t u = 0; u < m_users.size(); ++u) {
    std::size_t best = 0;
    double best_d = distance(m_users[u].position, m_bs[0].position);
    for (std::size_t b = 1; b < m_bs.size(); ++b) {
      const double d = distance(m_users[u].position, m_bs[b].position);
      if (d < best_d || (d == best_d && m_bs[b].bs_id < m_bs[best].bs_id)) {
        best = b;
        best_d = d;
      }
    }
    m_serving[u] = best;
  }
}

void Deployment::apply_gain_table(const std::vector<int>& bs_ids, const std::vector<std::vector<double>>& table)
{
  // Columns are matched by bs_id, not by position.
  std::vector<std::size_t> column_of(m_bs.size());
  for (std::size_t b = 0; b < m_bs.size(); ++b) {
    auto it = std::find(bs_ids.begin(), bs_ids.end(), m_bs[b].bs_id);
    if (it == bs_ids.end())
      throw DimensionMismatch("pathloss table has no column for bs_id " + std::to_string(m_bs[b].bs_id));
    column_of[b] = static_cast<std::size_t>(it - bs_ids.begin());
  }
  for (std::size_t u = 0; u < m_users.size(); ++u) {
    std::size_t best = 0;
    for (std::size_t b = 0; b < m_bs.size(); ++b) {
      m_gains[u][b].beta = table[u][column_of[b]];
      const double g = m_gains[u][b].beta;
      const double g_best = m_gains[u][best].beta;
      if (g > g_best || (g == g_best && m_bs[b].bs_id < m_bs[best].bs_id))
        best = b;
    }
    m_serving[u] = best;
  }
}

Deployment make_deployment(const DeploymentSpec& spec, std::size_t user_count, std::uint64_t seed)
{
  std::vector<BaseStation> bs;
  bs.reserve(static_cast<std::size_t>(spec.base_stations));
  Rng placement{stream_key(seed, Stream::Placement, 0)};
  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(spec.base_stations))));
  const int rows = (spec.base_stations + cols - 1) / cols;
  for (int i = 0; i < spec.base_stations; ++i) {
    BaseStation b;
    b.bs_id = i;
    b.antennas = spec.antennas;
    if (spec.layout == BsLayout::Grid) {
      const double w = spec.area_m / cols;
      const double h = spec.area_m / rows;
      b.position = {(i % cols + 0.5) * w, (i / cols + 0.5) * h, spec.bs_height_m};
    } else {
      b.position = {placement.uniform(0, spec.area_m), placement.uniform(0, spec.area_m), spec.bs_height_m};
    }
    bs.push_back(b);
  }

  std::vector<UserEquipment> users;
  users.reserve(user_count);
  Rng ue_rng{stream_key(seed, Stream::Placement, 1)};
  const double p_max = std::pow(10.0, spec.p_max_db / 10.0);
  for (std::size_t u = 0; u < user_count; ++u) {
    UserEquipment ue;
    ue.user_id = static_cast<std::uint32_t>(u);
    ue.position = {ue_rng.uniform(0, spec.area_m), ue_rng.uniform(0, spec.area_m), spec.ue_height_m};
    ue.p_max = p_max;
    users.push_back(ue);
  }

  std::vector<std::vector<LinkGain>> gains(user_count, std::vector<LinkGain>(bs.size()));
  for (std::size_t u = 0; u < user_count; ++u) {
    for (std::size_t b = 0; b < bs.size(); ++b) {
      Rng shadow{stream_key(seed, Stream::Shadowing, u, b)};
      const double s = spec.shadowing_db > 0 ? shadow.normal(0.0, spec.shadowing_db) : 0.0;
      gains[u][b] = pathloss_gain(distance(users[u].position, bs[b].position), s);
    }
  }
  return Deployment{std::move(bs), std::move(users), std::move(gains)};
}

PathlossTable read_pathloss_table(std::istream& in)
{
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      cells.push_back(cell);
    return cells;
  };

  PathlossTable t;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    const auto cells = split(line);
    try {
      if (t.bs_ids.empty()) {
        for (const auto& c : cells)
          t.bs_ids.push_back(std::stoi(c));
      } else {
        std::vector<double> row;
        for (const auto& c : cells)
          row.push_back(std::stod(c));
        t.gains.push_back(std::move(row));
      }
    } catch (const std::logic_error&) {
      throw ParseError(line_no, 1, "non-numeric cell in pathloss table");
    }
  }
  if (t.bs_ids.empty())
    throw ParseError(1, 1, "pathloss table needs a header row of bs_ids");
  return t;
}

void load_pathloss_matrix(Deployment& deployment, const PathlossTable& table)
{
  if (table.gains.size() != deployment.users().size() || table.bs_ids.size() != deployment.base_stations().size())
    throw DimensionMismatch("pathloss table is " + std::to_string(table.gains.size()) + "x"
                            + std::to_string(table.bs_ids.size()) + ", deployment has "
                            + std::to_string(deployment.users().size()) + " users and "
                            + std::to_string(deployment.base_stations().size()) + " base stations");
  for (std::size_t u = 0; u < table.gains.size(); ++u) {
    if (table.gains[u].size() != table.bs_ids.size())
      throw DimensionMismatch("pathloss row " + std::to_string(u) + " has " + std::to_string(table.gains[u].size())
                              + " columns");
    for (double g : table.gains[u])
      if (!(g > 0.0) || g > 1.0)
        throw NonPositiveGain("pathloss row " + std::to_string(u) + " has gain outside (0, 1]");
  }
  deployment.apply_gain_table(table.bs_ids, table.gains);
}

double pilot_quality(double pilot_symbols, double pilot_power, double beta)
{
  const double snr = pilot_symbols * pilot_power * beta;
  return snr / (1.0 + snr);
}

double effective_sinr(int antennas, double power, double beta, double alpha, std::span<const Interferer> cochannel)
{
  double interference = 0.0;
  for (const auto& i : cochannel)
    interference += i.power * i.beta;
  const double rx = power * beta;
  return antennas * alpha * rx / (1.0 + interference + rx);
}

double q_function(double x)
{
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double decode_error(std::uint64_t symbols, std::uint64_t bits, double sinr)
{
  if (bits == 0)
    return 0.0;
  if (!(sinr > 0.0) || symbols == 0)
    return 1.0;
  const double n = static_cast<double>(symbols);
  const double b = static_cast<double>(bits);
  const double capacity = std::log2(1.0 + sinr);
  const double log2e = std::numbers::log2e;
  const double dispersion = (1.0 - 1.0 / ((1.0 + sinr) * (1.0 + sinr))) * log2e * log2e;
  // The log2(n)/2 correction is capped at the payload size; below that the
  // approximation stops being monotone in n and sinr.
  const double correction = std::min(0.5 * std::log2(n), b);
  const double arg = (n * capacity - b + correction) / std::sqrt(n * dispersion);
  return std::clamp(q_function(arg), 0.0, 1.0);
}

} // namespace urllc
