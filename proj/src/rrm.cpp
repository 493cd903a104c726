#include "urllc/rrm.hpp"

#include "urllc/errors.hpp"
#include "urllc/radio.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/poisson.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace urllc {

PowerAllocation power_control(std::span<const PowerRequest> users, double rx_target)
{
  PowerAllocation out;
  out.power.reserve(users.size());
  out.power_limited.reserve(users.size());
  for (const auto& u : users) {
    const double wanted = rx_target / u.beta;
    const bool capped = wanted > u.p_max * (1.0 + 1e-12);
    out.power.push_back(capped ? u.p_max : std::min(wanted, u.p_max));
    out.power_limited.push_back(capped);
  }
  return out;
}

std::vector<std::vector<GroupMember>> group_users(std::vector<GroupMember> users, int k_max, double window_db)
{
  if (k_max < 1)
    throw Infeasible("group size limit must be at least 1");
  std::sort(users.begin(), users.end(), [](const GroupMember& a, const GroupMember& b) {
    if (a.beta != b.beta)
      return a.beta > b.beta;
    return a.user_id < b.user_id;
  });

  std::vector<std::vector<GroupMember>> groups;
  for (const auto& u : users) {
    if (!groups.empty()) {
      auto& g = groups.back();
      const double spread_db = 10.0 * std::log10(g.front().beta / u.beta);
      if (static_cast<int>(g.size()) < k_max && spread_db <= window_db + 1e-9) {
        g.push_back(u);
        continue;
      }
    }
    groups.push_back({u});
  }
  return groups;
}

std::vector<double> default_w_grid()
{
  return {0.5e6, 1e6, 2e6, 4e6, 8e6, 16e6, 32e6};
}

std::int64_t data_symbols(double bandwidth_hz, SimTime slot, double overhead, int pilot_symbols, int preamble_symbols)
{
  const double total = bandwidth_hz * slot.seconds() * (1.0 - overhead);
  return static_cast<std::int64_t>(std::floor(total + 1e-9)) - pilot_symbols - preamble_symbols;
}

std::optional<DimensionResult> dimension_concurrent(std::span<const GroupMember> group,
                                                    int m_active,
                                                    std::uint64_t bits,
                                                    double eps_target,
                                                    int preamble_symbols,
                                                    const LinkInputs& link)
{
  if (group.empty() || link.w_grid_hz.empty())
    return std::nullopt;
  const int m = std::clamp(m_active, 0, static_cast<int>(group.size()));

  DimensionResult r;
  r.group_size = static_cast<int>(group.size());
  r.provisioned_users = m;
  r.pilot_symbols = m;
  r.preamble_symbols = preamble_symbols;

  if (m == 0) {
    r.bandwidth_hz = link.w_grid_hz.front();
    r.data_symbols = data_symbols(r.bandwidth_hz, link.slot, link.overhead, 0, preamble_symbols);
    return r;
  }

  // Members ordered by received power; member k sees the m-1 strongest others.
  std::vector<std::size_t> order(group.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return group[a].received() > group[b].received(); });

  std::vector<double> sinr(group.size());
  std::vector<Interferer> interferers;
  for (std::size_t k = 0; k < group.size(); ++k) {
    interferers.clear();
    for (std::size_t j : order) {
      if (static_cast<int>(interferers.size()) == m - 1)
        break;
      if (j != k)
        interferers.push_back({group[j].power, group[j].beta});
    }
    const double alpha = pilot_quality(m, group[k].power * link.pilot_power_ratio, group[k].beta);
    sinr[k] = effective_sinr(link.antennas, group[k].power, group[k].beta, alpha, interferers);
  }

  auto worst_error = [&](std::int64_t n) {
    double worst = 0.0;
    for (double g : sinr)
      worst = std::max(worst, decode_error(static_cast<std::uint64_t>(n), bits, g));
    return worst;
  };
  auto passes = [&](double w) {
    const auto n = data_symbols(w, link.slot, link.overhead, m, preamble_symbols);
    return n >= 1 && worst_error(n) <= eps_target;
  };

  // The worst-member error is non-increasing in W, so the first passing grid
  // point can be found by bisection.
  std::size_t lo = 0;
  std::size_t hi = link.w_grid_hz.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (passes(link.w_grid_hz[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  if (lo == link.w_grid_hz.size())
    return std::nullopt;

  r.bandwidth_hz = link.w_grid_hz[lo];
  r.data_symbols = data_symbols(r.bandwidth_hz, link.slot, link.overhead, m, preamble_symbols);
  r.eps_decode = worst_error(r.data_symbols);
  return r;
}

DimensionResult dimension_fgma(std::span<const GroupMember> group, const TrafficClass& cls, const LinkInputs& link)
{
  if (group.empty())
    throw Infeasible("empty group");
  auto r = dimension_concurrent(group, static_cast<int>(group.size()), cls.size_bits(), cls.failure_budget(), 0, link);
  if (!r)
    throw Infeasible("no bandwidth in the grid meets the decode target for a group of "
                     + std::to_string(group.size()));
  r->ma_kind = Protocol::FGMA;
  return *r;
}

void ErrorSplit::validate() const
{
  const bool positive = overflow > 0.0 && detect > 0.0 && decode > 0.0;
  if (!positive || std::abs(overflow + detect + decode - 1.0) > 1e-9)
    throw InvalidSplit("error split must be three positive fractions summing to 1");
}

double DetectionModel::miss_probability(int preamble_symbols, double snr) const
{
  return std::exp(-c0 * snr * preamble_symbols);
}

int DetectionModel::preamble_symbols(double eps, double snr) const
{
  if (eps >= 1.0)
    return 0;
  const double c = c0 * snr;
  if (!(c > 0.0) || !(eps > 0.0))
    throw Infeasible("preamble detection target unreachable");
  int tau = static_cast<int>(std::ceil(std::log(1.0 / eps) / c));
  // Guard against the ceil landing one short through rounding.
  while (miss_probability(tau, snr) > eps)
    ++tau;
  return std::max(tau, 0);
}

double activation_probability(ArrivalModel model, double rate, SimTime window)
{
  const double mean = rate * window.seconds();
  if (model == ArrivalModel::Periodic)
    return std::min(1.0, mean);
  return -std::expm1(-mean);
}

double binomial_tail(int n, double q, int m)
{
  if (m >= n)
    return 0.0;
  if (m < 0)
    return 1.0;
  if (q <= 0.0)
    return 0.0;
  if (q >= 1.0)
    return 1.0;
  boost::math::binomial_distribution<double> dist(n, q);
  return boost::math::cdf(boost::math::complement(dist, m));
}

int provisioned_users(int n, double q, double eps)
{
  if (q <= 0.0)
    return 0;
  int lo = 0;
  int hi = n;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (binomial_tail(n, q, mid) <= eps)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

int provisioned_grants(double offered_load, double eps)
{
  if (offered_load <= 0.0)
    return 1;
  boost::math::poisson_distribution<double> busy(offered_load);
  int k = 1;
  while (boost::math::cdf(boost::math::complement(busy, k - 1)) > eps)
    ++k;
  return k;
}

DimensionResult dimension_gfma(std::span<const GroupMember> group,
                               const TrafficClass& cls,
                               double q,
                               const LinkInputs& link,
                               const ErrorSplit& split,
                               const DetectionModel& detection)
{
  split.validate();
  if (group.empty())
    throw Infeasible("empty group");
  const double budget = cls.failure_budget();
  const int g = static_cast<int>(group.size());
  const int m = provisioned_users(g, q, split.overflow * budget);

  double weakest = group.front().received();
  for (const auto& u : group)
    weakest = std::min(weakest, u.received());
  const int tau_pre = detection.preamble_symbols(split.detect * budget, weakest);

  auto r = dimension_concurrent(group, m, cls.size_bits(), split.decode * budget, tau_pre, link);
  if (!r)
    throw Infeasible("no bandwidth in the grid meets the decode target for " + std::to_string(m) + " of "
                     + std::to_string(g) + " grant-free users");
  r->ma_kind = Protocol::GFMA;
  r->activation_probability = q;
  r->eps_overflow = binomial_tail(g, q, m);
  r->eps_detect = detection.miss_probability(tau_pre, weakest);
  return *r;
}

SpsSchedule semi_persistent_schedule(std::span<const GroupMember> group,
                                     const TrafficClass& cls,
                                     const LinkInputs& link,
                                     SimTime period,
                                     SimTime first_grant,
                                     SimTime horizon)
{
  if (period <= SimTime{})
    throw Infeasible("semi-persistent period must be positive");
  SpsSchedule s;
  s.dimension = dimension_fgma(group, cls, link);
  s.period = period;
  std::vector<std::uint32_t> users;
  for (const auto& u : group)
    users.push_back(u.user_id);
  for (SimTime t = first_grant; t < horizon; t += period)
    s.grants.push_back({t, link.slot, s.dimension.bandwidth_hz, users});
  return s;
}

} // namespace urllc
