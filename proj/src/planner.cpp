#include "urllc/engine.hpp"
#include "urllc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace urllc {

SimTime decode_delay(SimTime t_min, std::uint64_t bits)
{
  return std::max(t_min, SimTime::from_seconds(static_cast<double>(bits) / kDecoderThroughputBps));
}

SimTime propagation_delay(double distance_m)
{
  return SimTime::from_seconds(distance_m / kSpeedOfLight);
}

SimTime worst_case_latency(Scheme scheme, SimTime t_min, SimTime slot, SimTime propagation, SimTime decode)
{
  const auto timeline = protocol_timeline(protocol_of(scheme), t_min, propagation);
  return t_min + timeline.pre_data_delay + slot + propagation + decode;
}

std::vector<double> Plan::bandwidth_per_cell(std::size_t cells) const
{
  std::vector<double> out(cells, 0.0);
  for (const auto& sc : subchannels)
    out.at(static_cast<std::size_t>(sc.bs_id)) += sc.dim.bandwidth_hz;
  return out;
}

namespace {

constexpr int kMaxSlotMultiple = 64;

class Planner
{
public:
  Planner(const PlanInputs& in, Plan& plan)
    : m_s{*in.scenario}
    , m_dep{*in.deployment}
    , m_plan{plan}
    , m_overhead{m_s.overhead()}
  {}

  void plan_group(std::vector<GroupMember> group, int bs_id, std::size_t pop_index)
  {
    const auto& pop = m_s.populations[pop_index];
    if (auto sc = best_slot(group, pop)) {
      sc->bs_id = bs_id;
      sc->population = pop_index;
      commit(std::move(*sc), group);
      return;
    }
    if (group.size() > 1) {
      const auto half = static_cast<std::ptrdiff_t>(group.size() / 2);
      plan_group({group.begin(), group.begin() + half}, bs_id, pop_index);
      plan_group({group.begin() + half, group.end()}, bs_id, pop_index);
      return;
    }
    commit(undimensioned(group, pop, bs_id, pop_index), group);
  }

private:
  SimTime max_propagation(const std::vector<GroupMember>& group) const
  {
    SimTime p;
    for (const auto& u : group)
      p = std::max(p, propagation_delay(m_dep.serving_gain(u.user_id).distance_m));
    return p;
  }

  LinkInputs link(SimTime slot) const
  {
    LinkInputs l;
    l.antennas = m_dep.base_stations().front().antennas;
    l.slot = slot;
    l.overhead = m_overhead;
    l.pilot_power_ratio = m_s.rrm.pilot_power_ratio;
    l.w_grid_hz = m_s.rrm.w_grid_hz;
    return l;
  }

  std::optional<SubchannelPlan> dimension_at(const std::vector<GroupMember>& group, const Population& pop, SimTime slot) const
  {
    const auto lk = link(slot);
    const int g = static_cast<int>(group.size());
    const double q = activation_probability(pop.cls.arrival, pop.cls.rate, slot);
    SubchannelPlan sc;
    sc.scheme = pop.scheme;
    sc.cls = pop.cls;
    sc.slot = slot;
    try {
      switch (pop.scheme) {
        case Scheme::GFMA:
          sc.dim = dimension_gfma(group, pop.cls, q, lk, m_s.rrm.split, m_s.rrm.detection);
          sc.capacity = sc.dim.provisioned_users;
          break;
        case Scheme::FGMASps:
          sc.dim = dimension_fgma(group, pop.cls, lk);
          sc.capacity = g;
          break;
        case Scheme::FGMA:
        case Scheme::FourWay: {
          // Granted transmissions overlapping in time share the subchannel;
          // provision enough of them that deferral is as rare as a failure.
          const double load = g * pop.cls.rate * slot.seconds();
          const int k = provisioned_grants(load, pop.cls.failure_budget());
          auto r = dimension_concurrent(group, k, pop.cls.size_bits(), pop.cls.failure_budget(), 0, lk);
          if (!r)
            return std::nullopt;
          sc.dim = *r;
          sc.dim.ma_kind = protocol_of(pop.scheme);
          sc.dim.activation_probability = q;
          sc.capacity = k;
          break;
        }
      }
    } catch (const Infeasible&) {
      return std::nullopt;
    }
    sc.dimensioned = true;
    return sc;
  }

  std::optional<SubchannelPlan> best_slot(const std::vector<GroupMember>& group, const Population& pop) const
  {
    const SimTime t_min = m_s.frame.t_min;
    const SimTime prop = max_propagation(group);
    const SimTime decode = decode_delay(t_min, pop.cls.size_bits());

    std::optional<SubchannelPlan> best;
    for (int k = 1; k <= kMaxSlotMultiple; ++k) {
      const SimTime slot = t_min * k;
      const SimTime bound = worst_case_latency(pop.scheme, t_min, slot, prop, decode);
      const bool meets = bound < pop.cls.air_latency;
      // The four-way procedure never fits the budget; it gets the shortest slot.
      if (!meets && k > 1)
        break;
      auto sc = dimension_at(group, pop, slot);
      if (sc && (!best || sc->dim.bandwidth_hz < best->dim.bandwidth_hz)) {
        sc->meets_deadline = meets;
        sc->worst_case = bound;
        sc->max_propagation = prop;
        best = std::move(sc);
      }
      if (!meets)
        break;
    }
    return best;
  }

  SubchannelPlan undimensioned(const std::vector<GroupMember>& group, const Population& pop, int bs_id,
                               std::size_t pop_index) const
  {
    const SimTime t_min = m_s.frame.t_min;
    SubchannelPlan sc;
    sc.bs_id = bs_id;
    sc.population = pop_index;
    sc.scheme = pop.scheme;
    sc.cls = pop.cls;
    sc.slot = t_min;
    sc.capacity = 1;
    sc.dimensioned = false;
    sc.max_propagation = max_propagation(group);
    sc.worst_case = worst_case_latency(pop.scheme, t_min, t_min, sc.max_propagation,
                                       decode_delay(t_min, pop.cls.size_bits()));
    sc.meets_deadline = sc.worst_case < pop.cls.air_latency;
    sc.dim.ma_kind = protocol_of(pop.scheme);
    sc.dim.bandwidth_hz = m_s.rrm.w_grid_hz.back();
    sc.dim.group_size = 1;
    sc.dim.provisioned_users = 1;
    sc.dim.pilot_symbols = 1;
    sc.dim.data_symbols = data_symbols(sc.dim.bandwidth_hz, t_min, m_overhead, 1, 0);
    sc.dim.activation_probability = activation_probability(pop.cls.arrival, pop.cls.rate, t_min);
    sc.dim.eps_decode = 1.0;
    return sc;
  }

  void commit(SubchannelPlan sc, const std::vector<GroupMember>& group)
  {
    sc.subchannel_id = static_cast<int>(m_plan.subchannels.size());
    sc.members = group;
    for (const auto& u : group)
      m_plan.subchannel_of_user[u.user_id] = sc.subchannel_id;
    m_plan.subchannels.push_back(std::move(sc));
  }

  const Scenario& m_s;
  const Deployment& m_dep;
  Plan& m_plan;
  double m_overhead;
};

} // namespace

Plan plan_resources(const PlanInputs& in)
{
  const Scenario& s = *in.scenario;
  const Deployment& dep = *in.deployment;
  Plan plan;
  plan.subchannel_of_user.assign(dep.users().size(), -1);
  Planner planner(in, plan);
  const double rx_target = std::pow(10.0, s.rrm.rx_snr_target_db / 10.0);

  for (std::size_t b = 0; b < dep.base_stations().size(); ++b) {
    for (std::size_t p = 0; p < s.populations.size(); ++p) {
      const auto& pop = s.populations[p];
      std::vector<std::uint32_t> ids;
      std::vector<PowerRequest> requests;
      for (std::size_t u = 0; u < dep.users().size(); ++u) {
        if (in.population_of_user[u] != p || dep.serving(u) != b)
          continue;
        ids.push_back(static_cast<std::uint32_t>(u));
        requests.push_back({dep.serving_gain(u).beta, dep.users()[u].p_max});
      }
      if (ids.empty())
        continue;

      std::vector<GroupMember> members;
      if (pop.scheme == Scheme::FourWay) {
        for (std::size_t i = 0; i < ids.size(); ++i)
          members.push_back({ids[i], requests[i].beta, requests[i].p_max});
      } else {
        const auto alloc = power_control(requests, rx_target);
        for (std::size_t i = 0; i < ids.size(); ++i)
          members.push_back({ids[i], requests[i].beta, alloc.power[i]});
      }
      for (auto& group : group_users(std::move(members), s.rrm.k_max, s.rrm.group_window_db))
        planner.plan_group(std::move(group), dep.base_stations()[b].bs_id, p);
    }
  }
  return plan;
}

} // namespace urllc
