#pragma once

#include "urllc/time.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace urllc {

enum class Protocol
{
  FourWay,
  FGMA,
  GFMA,
};

std::string_view to_string(Protocol p);

enum class RrcStateKind
{
  Idle,
  Connected,
  Inactive,
  InactiveConnected,
};

enum class RrcEvent
{
  Setup4Way,
  SuspendToInactive,
  ResumeFGMA,
  PromoteInactiveConnected,
  PacketArrivalGFMA,
  Release,
};

std::string_view to_string(RrcStateKind s);
std::string_view to_string(RrcEvent e);

struct RrcState
{
  RrcStateKind state = RrcStateKind::Idle;
  bool stored_config = false;
  std::set<std::uint32_t> dedicated_preambles;
  std::map<int, int> preallocated_subchannels; ///< class_id -> subchannel_id

  bool consistent() const;
};

/// Resources handed over with an event: preambles for SuspendToInactive,
/// subchannels for PromoteInactiveConnected.
struct TransitionResources
{
  std::vector<std::uint32_t> preambles;
  std::map<int, int> subchannels;
};

struct TransitionResult
{
  RrcState state;
  std::optional<Protocol> handshake; ///< procedure run on the air, if any
};

bool is_legal(RrcStateKind from, RrcEvent event);

/// Throws IllegalTransition for pairs outside the table, and when an event
/// lacks the resources its target state requires.
TransitionResult transition(const RrcState& state, RrcEvent event, const TransitionResources& resources = {});

struct TimelineComponent
{
  std::string label;
  SimTime duration;
};

struct ProtocolTimeline
{
  Protocol protocol = Protocol::GFMA;
  SimTime pre_data_delay;   ///< sum of components
  SimTime signalling;       ///< pre_data_delay without propagation
  int pre_data_legs = 0;    ///< over-the-air legs before the data leg
  std::vector<TimelineComponent> components;

  int total_legs() const { return pre_data_legs + 1; }
};

/// Deterministic pre-data part of a connection procedure. Alignment to the
/// mini-slot grid is sampled by the caller and is not included.
ProtocolTimeline protocol_timeline(Protocol protocol, SimTime t_min, SimTime propagation);

enum class PreambleKind
{
  CellCommon,
  Dedicated,
};

struct PreambleRecord
{
  std::uint32_t preamble_id = 0;
  std::uint32_t user_id = 0;
  int class_id = 0;
  PreambleKind kind = PreambleKind::Dedicated;
};

/// Dedicated preamble registry of one cell. Ids are handed out lowest-free
/// first and map one-to-one onto (user, class).
class PreamblePool
{
public:
  explicit PreamblePool(std::size_t size);

  /// Idempotent per (user, class). Throws PoolExhausted.
  PreambleRecord allocate(std::uint32_t user_id, int class_id);
  std::optional<PreambleRecord> decode(std::uint32_t preamble_id) const;
  void release_user(std::uint32_t user_id);

  std::size_t size() const { return m_slots.size(); }
  std::size_t in_use() const { return m_index.size(); }

private:
  std::vector<std::optional<PreambleRecord>> m_slots;
  std::set<std::uint32_t> m_free;
  std::map<std::pair<std::uint32_t, int>, std::uint32_t> m_index;
};

} // namespace urllc
