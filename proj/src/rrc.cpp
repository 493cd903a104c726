#include "urllc/rrc.hpp"

#include "urllc/errors.hpp"

namespace urllc {

std::string_view to_string(Protocol p)
{
  switch (p) {
    case Protocol::FourWay: return "FourWay";
    case Protocol::FGMA: return "FGMA";
    case Protocol::GFMA: return "GFMA";
  }
  return "?";
}

std::string_view to_string(RrcStateKind s)
{
  switch (s) {
    case RrcStateKind::Idle: return "Idle";
    case RrcStateKind::Connected: return "Connected";
    case RrcStateKind::Inactive: return "Inactive";
    case RrcStateKind::InactiveConnected: return "InactiveConnected";
  }
  return "?";
}

std::string_view to_string(RrcEvent e)
{
  switch (e) {
    case RrcEvent::Setup4Way: return "Setup4Way";
    case RrcEvent::SuspendToInactive: return "SuspendToInactive";
    case RrcEvent::ResumeFGMA: return "ResumeFGMA";
    case RrcEvent::PromoteInactiveConnected: return "PromoteInactiveConnected";
    case RrcEvent::PacketArrivalGFMA: return "PacketArrivalGFMA";
    case RrcEvent::Release: return "Release";
  }
  return "?";
}

bool RrcState::consistent() const
{
  switch (state) {
    case RrcStateKind::Idle:
      return !stored_config && dedicated_preambles.empty() && preallocated_subchannels.empty();
    case RrcStateKind::Connected:
      return stored_config && preallocated_subchannels.empty();
    case RrcStateKind::Inactive:
      return stored_config && !dedicated_preambles.empty() && preallocated_subchannels.empty();
    case RrcStateKind::InactiveConnected:
      return stored_config && !dedicated_preambles.empty() && !preallocated_subchannels.empty();
  }
  return false;
}

bool is_legal(RrcStateKind from, RrcEvent event)
{
  using S = RrcStateKind;
  using E = RrcEvent;
  switch (event) {
    case E::Release: return true;
    case E::Setup4Way: return from == S::Idle;
    case E::SuspendToInactive: return from == S::Connected;
    case E::ResumeFGMA: return from == S::Inactive;
    case E::PromoteInactiveConnected: return from == S::Inactive;
    case E::PacketArrivalGFMA: return from == S::InactiveConnected;
  }
  return false;
}

TransitionResult transition(const RrcState& state, RrcEvent event, const TransitionResources& resources)
{
  if (!is_legal(state.state, event))
    throw IllegalTransition(std::string(to_string(event)) + " is not allowed from " + std::string(to_string(state.state)));

  TransitionResult out{state, std::nullopt};
  RrcState& s = out.state;
  switch (event) {
    case RrcEvent::Setup4Way:
      s.state = RrcStateKind::Connected;
      s.stored_config = true;
      out.handshake = Protocol::FourWay;
      break;
    case RrcEvent::SuspendToInactive:
      s.dedicated_preambles.insert(resources.preambles.begin(), resources.preambles.end());
      if (s.dedicated_preambles.empty())
        throw IllegalTransition("SuspendToInactive needs at least one dedicated preamble");
      s.state = RrcStateKind::Inactive;
      break;
    case RrcEvent::ResumeFGMA:
      s.state = RrcStateKind::Connected;
      out.handshake = Protocol::FGMA;
      break;
    case RrcEvent::PromoteInactiveConnected:
      if (resources.subchannels.empty())
        throw IllegalTransition("PromoteInactiveConnected needs a preallocated subchannel");
      s.preallocated_subchannels = resources.subchannels;
      s.state = RrcStateKind::InactiveConnected;
      break;
    case RrcEvent::PacketArrivalGFMA:
      break;
    case RrcEvent::Release:
      s = RrcState{};
      break;
  }
  return out;
}

ProtocolTimeline protocol_timeline(Protocol protocol, SimTime t_min, SimTime propagation)
{
  ProtocolTimeline t;
  t.protocol = protocol;
  auto add = [&t](std::string label, SimTime d) { t.components.push_back({std::move(label), d}); };

  switch (protocol) {
    case Protocol::GFMA:
      break;
    case Protocol::FGMA:
      add("scheduling request", t_min);
      add("scheduling", 2 * t_min);
      add("grant", t_min);
      t.pre_data_legs = 2;
      break;
    case Protocol::FourWay:
      for (const char* msg : {"preamble", "random access response", "connection request", "connection setup"}) {
        add(std::string(msg) + " transmit", t_min);
        add(std::string(msg) + " processing", t_min);
      }
      t.pre_data_legs = 4;
      break;
  }
  for (const auto& c : t.components)
    t.signalling += c.duration;
  for (int i = 0; i < t.pre_data_legs; ++i)
    add("propagation", propagation);
  for (const auto& c : t.components)
    t.pre_data_delay += c.duration;
  return t;
}

PreamblePool::PreamblePool(std::size_t size)
  : m_slots(size)
{
  for (std::size_t i = 0; i < size; ++i)
    m_free.insert(static_cast<std::uint32_t>(i));
}

PreambleRecord PreamblePool::allocate(std::uint32_t user_id, int class_id)
{
  if (auto it = m_index.find({user_id, class_id}); it != m_index.end())
    return *m_slots[it->second];
  if (m_free.empty())
    throw PoolExhausted("all " + std::to_string(m_slots.size()) + " dedicated preambles are in use");
  const std::uint32_t id = *m_free.begin();
  m_free.erase(m_free.begin());
  PreambleRecord r{id, user_id, class_id, PreambleKind::Dedicated};
  m_slots[id] = r;
  m_index[{user_id, class_id}] = id;
  return r;
}

std::optional<PreambleRecord> PreamblePool::decode(std::uint32_t preamble_id) const
{
  if (preamble_id >= m_slots.size())
    return std::nullopt;
  return m_slots[preamble_id];
}

void PreamblePool::release_user(std::uint32_t user_id)
{
  for (auto it = m_index.begin(); it != m_index.end();) {
    if (it->first.first == user_id) {
      m_slots[it->second].reset();
      m_free.insert(it->second);
      it = m_index.erase(it);
    } else {
      ++it;
    }
  }
}

} // namespace urllc
