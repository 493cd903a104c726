#include "urllc/engine.hpp"

#include "urllc/errors.hpp"
#include "urllc/rng.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <set>

namespace urllc {

bool event_before(const Event& a, const Event& b)
{
  if (a.time != b.time)
    return a.time < b.time;
  if (a.kind != b.kind)
    return a.kind < b.kind;
  if (a.packet_id != b.packet_id)
    return a.packet_id < b.packet_id;
  if (a.subchannel != b.subchannel)
    return a.subchannel < b.subchannel;
  return a.window < b.window;
}

namespace {

struct Later
{
  bool operator()(const Event& a, const Event& b) const { return event_before(b, a); }
};

struct UserState
{
  RrcState rrc;
  int in_flight = 0;
  bool sps_granted = false;
  std::uint32_t preamble = 0;
};

struct SubchannelState
{
  std::map<std::int64_t, std::vector<std::uint64_t>> windows; ///< grant-free activation windows
  std::multiset<SimTime> busy_until;                          ///< granted transmissions in progress
};

class Simulation
{
public:
  Simulation(const Scenario& s, std::uint64_t seed, const RunOptions& opt)
    : m_s{s}
    , m_seed{seed}
    , m_opt{opt}
    , m_dep{make_deployment(s.deployment, s.total_users(), seed)}
  {
    if (s.pathloss_csv) {
      std::ifstream in(*s.pathloss_csv);
      if (!in)
        throw ScenarioInvalid("cannot open pathloss table " + s.pathloss_csv->string());
      load_pathloss_matrix(m_dep, read_pathloss_table(in));
    }
    for (std::size_t p = 0; p < s.populations.size(); ++p)
      m_population_of_user.insert(m_population_of_user.end(), s.populations[p].users, p);
  }

  RunMetrics run()
  {
    RunMetrics out;
    out.replication = m_opt.replication;
    out.seed = m_seed;
    out.horizon = m_s.horizon;
    out.plan = plan_resources({&m_s, &m_dep, m_population_of_user});
    m_plan = &out.plan;
    m_sub.assign(out.plan.subchannels.size(), {});
    init_usage(out);
    admit_users();
    generate_packets(out);

    for (const auto& r : out.packets)
      m_queue.push({r.arrival, EventKind::PacketArrival, r.packet_id, r.subchannel_id, 0});
    m_records = &out.packets;
    m_usage = &out.usage;
    while (!m_queue.empty()) {
      const Event e = m_queue.top();
      m_queue.pop();
      dispatch(e);
    }
    count_sps_grants(out);
    out.rrc_log = std::move(m_log);
    return out;
  }

private:
  void init_usage(RunMetrics& out)
  {
    for (const auto& sc : out.plan.subchannels) {
      SubchannelUsage u;
      u.subchannel_id = sc.subchannel_id;
      u.bs_id = sc.bs_id;
      u.scheme = sc.scheme;
      u.class_id = sc.cls.class_id;
      u.bandwidth_hz = sc.dim.bandwidth_hz;
      if (sc.scheme != Scheme::FGMASps)
        u.bandwidth_time = sc.dim.bandwidth_hz * m_s.horizon.seconds();
      out.usage.push_back(u);
    }
  }

  void apply(std::uint32_t user, RrcEvent ev, SimTime at, const TransitionResources& res = {})
  {
    auto& st = m_users[user].rrc;
    const auto from = st.state;
    st = transition(st, ev, res).state;
    if (m_opt.rrc_log)
      m_log.push_back({at, user, ev, from, st.state});
  }

  void admit_users()
  {
    m_users.assign(m_dep.users().size(), {});
    std::vector<PreamblePool> pools(m_dep.base_stations().size(), PreamblePool(m_s.rrm.preamble_pool));
    for (std::uint32_t u = 0; u < m_users.size(); ++u) {
      const auto& pop = m_s.populations[m_population_of_user[u]];
      if (pop.scheme == Scheme::FourWay)
        continue;
      const auto pre = pools[m_dep.serving(u)].allocate(u, pop.cls.class_id);
      m_users[u].preamble = pre.preamble_id;
      apply(u, RrcEvent::Setup4Way, SimTime{});
      apply(u, RrcEvent::SuspendToInactive, SimTime{}, {{pre.preamble_id}, {}});
      if (pop.scheme == Scheme::GFMA)
        apply(u, RrcEvent::PromoteInactiveConnected, SimTime{},
              {{}, {{pop.cls.class_id, m_plan->subchannel_of_user[u]}}});
    }
  }

  void generate_packets(RunMetrics& out)
  {
    std::vector<Packet> all;
    for (std::uint32_t u = 0; u < m_population_of_user.size(); ++u) {
      const std::size_t p = m_population_of_user[u];
      const auto& pop = m_s.populations[p];
      std::optional<SimTime> phase;
      if (pop.aligned) {
        const SimTime period = SimTime::from_seconds(1.0 / pop.cls.rate);
        const double x = uniform_at(stream_key(m_seed, Stream::Phase, 0xa11a'0000'0000ULL + p));
        phase = SimTime::from_ns(static_cast<std::int64_t>(x * static_cast<double>(period.ns())));
      }
      auto pk = generate_arrivals(pop.cls, u, m_s.horizon, m_seed, phase);
      all.insert(all.end(), pk.begin(), pk.end());
    }
    std::stable_sort(all.begin(), all.end(), [](const Packet& a, const Packet& b) {
      if (a.arrival != b.arrival)
        return a.arrival < b.arrival;
      return a.user_id < b.user_id;
    });

    out.packets.reserve(all.size());
    m_overflowed.assign(all.size(), false);
    for (std::size_t i = 0; i < all.size(); ++i) {
      const auto& p = all[i];
      PacketRecord r;
      r.packet_id = i;
      r.replication = m_opt.replication;
      r.user_id = p.user_id;
      r.bs_id = m_dep.base_stations()[m_dep.serving(p.user_id)].bs_id;
      r.class_id = p.class_id;
      r.subchannel_id = m_plan->subchannel_of_user[p.user_id];
      r.scheme = m_plan->subchannels[static_cast<std::size_t>(r.subchannel_id)].scheme;
      r.size_bits = p.size_bits;
      r.arrival = p.arrival;
      r.deadline = p.deadline;
      out.packets.push_back(r);
    }
  }

  void dispatch(const Event& e)
  {
    switch (e.kind) {
      case EventKind::PacketArrival: on_arrival(e); break;
      case EventKind::SlotBoundary: on_slot_boundary(e); break;
      case EventKind::GrantIssued: on_grant(e); break;
      case EventKind::TxComplete: on_tx_complete(e); break;
      case EventKind::DecodeComplete: on_decode_complete(e); break;
    }
  }

  const SubchannelPlan& plan_of(const PacketRecord& r) const
  {
    return m_plan->subchannels[static_cast<std::size_t>(r.subchannel_id)];
  }

  void on_arrival(const Event& e)
  {
    auto& r = (*m_records)[e.packet_id];
    const auto& sc = plan_of(r);
    auto& user = m_users[r.user_id];
    const SimTime t_min = m_s.frame.t_min;
    const SimTime prop = propagation_delay(m_dep.serving_gain(r.user_id).distance_m);

    auto& c = r.components;
    const double u = uniform_at(stream_key(m_seed, Stream::Alignment, r.packet_id));
    c.alignment = SimTime::from_ns(static_cast<std::int64_t>(u * static_cast<double>(t_min.ns())));
    c.transmission = sc.slot;
    c.decode = decode_delay(t_min, r.size_bits);

    std::optional<Protocol> handshake;
    switch (sc.scheme) {
      case Scheme::GFMA:
        apply(r.user_id, RrcEvent::PacketArrivalGFMA, r.arrival);
        break;
      case Scheme::FourWay:
        if (user.rrc.state == RrcStateKind::Idle)
          apply(r.user_id, RrcEvent::Setup4Way, r.arrival);
        handshake = Protocol::FourWay;
        break;
      case Scheme::FGMA:
        if (user.rrc.state == RrcStateKind::Inactive)
          apply(r.user_id, RrcEvent::ResumeFGMA, r.arrival);
        handshake = Protocol::FGMA;
        break;
      case Scheme::FGMASps:
        if (!user.sps_granted) {
          apply(r.user_id, RrcEvent::ResumeFGMA, r.arrival);
          user.sps_granted = true;
          handshake = Protocol::FGMA;
          ++(*m_usage)[static_cast<std::size_t>(sc.subchannel_id)].handshakes;
        }
        break;
    }
    ++user.in_flight;
    if (sc.scheme == Scheme::FGMA || sc.scheme == Scheme::FourWay)
      ++(*m_usage)[static_cast<std::size_t>(sc.subchannel_id)].handshakes;

    int legs = 1;
    if (handshake) {
      const auto tl = protocol_timeline(*handshake, t_min, prop);
      c.handshake = tl.signalling;
      legs = tl.total_legs();
    }
    c.propagation = prop * legs;
    const SimTime ready = r.arrival + c.alignment + c.handshake + prop * (legs - 1);

    if (sc.scheme == Scheme::GFMA) {
      const std::int64_t w = ready.ns() / sc.slot.ns();
      auto& bucket = m_sub[static_cast<std::size_t>(sc.subchannel_id)].windows[w];
      if (bucket.empty())
        m_queue.push({sc.slot * (w + 1), EventKind::SlotBoundary, 0, sc.subchannel_id, w});
      bucket.push_back(r.packet_id);
      m_queue.push({ready + sc.slot, EventKind::TxComplete, r.packet_id, sc.subchannel_id, 0});
    } else if (sc.scheme == Scheme::FGMASps) {
      m_queue.push({ready + sc.slot, EventKind::TxComplete, r.packet_id, sc.subchannel_id, 0});
    } else {
      m_queue.push({ready, EventKind::GrantIssued, r.packet_id, sc.subchannel_id, 0});
    }
  }

  void on_slot_boundary(const Event& e)
  {
    auto& st = m_sub[static_cast<std::size_t>(e.subchannel)];
    auto it = st.windows.find(e.window);
    if (it == st.windows.end())
      return;
    auto pids = std::move(it->second);
    st.windows.erase(it);
    std::sort(pids.begin(), pids.end());

    // Rank active users by their earliest packet; users past m* overflow.
    const auto& sc = m_plan->subchannels[static_cast<std::size_t>(e.subchannel)];
    std::vector<std::uint32_t> active;
    for (auto pid : pids) {
      const auto user = (*m_records)[pid].user_id;
      if (std::find(active.begin(), active.end(), user) == active.end())
        active.push_back(user);
    }
    const auto m = static_cast<std::size_t>(sc.capacity);
    if (active.size() <= m)
      return;
    const std::set<std::uint32_t> excess(active.begin() + static_cast<std::ptrdiff_t>(m), active.end());
    for (auto pid : pids)
      if (excess.contains((*m_records)[pid].user_id))
        m_overflowed[pid] = true;
  }

  void on_grant(const Event& e)
  {
    auto& r = (*m_records)[e.packet_id];
    const auto& sc = plan_of(r);
    auto& busy = m_sub[static_cast<std::size_t>(sc.subchannel_id)].busy_until;
    busy.erase(busy.begin(), busy.upper_bound(e.time));
    SimTime start = e.time;
    if (static_cast<int>(busy.size()) >= sc.capacity) {
      start = *busy.begin();
      busy.erase(busy.begin());
    }
    busy.insert(start + sc.slot);
    r.components.queueing = start - e.time;
    m_queue.push({start + sc.slot, EventKind::TxComplete, r.packet_id, sc.subchannel_id, 0});
  }

  void on_tx_complete(const Event& e)
  {
    const auto& r = (*m_records)[e.packet_id];
    const SimTime prop = propagation_delay(m_dep.serving_gain(r.user_id).distance_m);
    m_queue.push({e.time + prop + r.components.decode, EventKind::DecodeComplete, r.packet_id, r.subchannel_id, 0});
  }

  void on_decode_complete(const Event& e)
  {
    auto& r = (*m_records)[e.packet_id];
    const auto& sc = plan_of(r);
    r.latency = r.components.total();
    if (r.arrival + r.latency != e.time)
      throw std::logic_error("latency components do not add up for packet " + std::to_string(r.packet_id));

    const double detect = uniform_at(stream_key(m_seed, Stream::Detect, r.packet_id));
    const double decode = uniform_at(stream_key(m_seed, Stream::Decode, r.packet_id));
    if (sc.scheme == Scheme::GFMA && detect < sc.dim.eps_detect)
      r.outcome = Outcome::DetectFail;
    else if (m_overflowed[r.packet_id])
      r.outcome = Outcome::Overflow;
    else if (decode < sc.dim.eps_decode)
      r.outcome = Outcome::DecodeFail;
    else if (e.time > r.deadline)
      r.outcome = Outcome::DeadlineMiss;
    else
      r.outcome = Outcome::Delivered;

    auto& u = (*m_usage)[static_cast<std::size_t>(sc.subchannel_id)];
    ++u.packets;
    if (r.outcome == Outcome::Delivered)
      u.goodput_bits += static_cast<double>(r.size_bits);
    else
      ++u.failures;

    auto& user = m_users[r.user_id];
    if (--user.in_flight == 0) {
      if (sc.scheme == Scheme::FourWay && user.rrc.state == RrcStateKind::Connected)
        apply(r.user_id, RrcEvent::Release, e.time);
      else if (sc.scheme == Scheme::FGMA && user.rrc.state == RrcStateKind::Connected)
        apply(r.user_id, RrcEvent::SuspendToInactive, e.time, {{user.preamble}, {}});
    }
  }

  void count_sps_grants(RunMetrics& out)
  {
    // A semi-persistent grant occupies W x T once per period from the
    // population's common phase onwards.
    for (auto& u : out.usage) {
      const auto& sc = out.plan.subchannels[static_cast<std::size_t>(u.subchannel_id)];
      if (sc.scheme != Scheme::FGMASps)
        continue;
      const SimTime period = SimTime::from_seconds(1.0 / sc.cls.rate);
      SimTime first = m_s.horizon;
      for (const auto& r : out.packets)
        if (r.subchannel_id == sc.subchannel_id) {
          first = r.arrival;
          break;
        }
      std::size_t grants = 0;
      if (sc.dimensioned) {
        LinkInputs lk;
        lk.antennas = m_dep.base_stations().front().antennas;
        lk.slot = sc.slot;
        lk.overhead = m_s.overhead();
        lk.pilot_power_ratio = m_s.rrm.pilot_power_ratio;
        lk.w_grid_hz = m_s.rrm.w_grid_hz;
        grants = semi_persistent_schedule(sc.members, sc.cls, lk, period, first, m_s.horizon).grants.size();
      } else {
        for (SimTime t = first; t < m_s.horizon; t += period)
          ++grants;
      }
      u.bandwidth_time = sc.dim.bandwidth_hz * sc.slot.seconds() * static_cast<double>(grants);
    }
  }

  const Scenario& m_s;
  std::uint64_t m_seed;
  RunOptions m_opt;
  Deployment m_dep;
  std::vector<std::size_t> m_population_of_user;
  const Plan* m_plan = nullptr;
  std::vector<SubchannelState> m_sub;
  std::vector<UserState> m_users;
  std::vector<bool> m_overflowed;
  std::vector<PacketRecord>* m_records = nullptr;
  std::vector<SubchannelUsage>* m_usage = nullptr;
  std::vector<RrcLogEntry> m_log;
  std::priority_queue<Event, std::vector<Event>, Later> m_queue;
};

} // namespace

RunMetrics run(const Scenario& scenario, std::uint64_t seed, const RunOptions& options)
{
  if (auto v = check(scenario); !v.empty())
    throw ScenarioInvalid(ValidationError(std::move(v)).what());
  return Simulation(scenario, seed, options).run();
}

} // namespace urllc
