#pragma once

#include "urllc/radio.hpp"
#include "urllc/rrc.hpp"
#include "urllc/rrm.hpp"
#include "urllc/scenario.hpp"
#include "urllc/time.hpp"
#include "urllc/traffic.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace urllc {

inline constexpr double kDecoderThroughputBps = 50e9;

/// Decoder processing time: max(T_min, bits / 50 Gbit/s).
SimTime decode_delay(SimTime t_min, std::uint64_t bits);

SimTime propagation_delay(double distance_m);

/// Worst-case latency of a packet that is neither deferred nor failed, taking
/// the alignment delay at its supremum T_min.
SimTime worst_case_latency(Scheme scheme, SimTime t_min, SimTime slot, SimTime propagation, SimTime decode);

// ---------------------------------------------------------------------------
// Planning

struct SubchannelPlan
{
  int subchannel_id = 0;
  int bs_id = 0;
  std::size_t population = 0;
  Scheme scheme = Scheme::GFMA;
  TrafficClass cls;
  std::vector<GroupMember> members;
  SimTime slot;
  DimensionResult dim;
  int capacity = 0;             ///< simultaneous transmissions (granted access)
  bool dimensioned = false;     ///< false: no grid bandwidth met the decode target
  bool meets_deadline = false;  ///< worst-case latency below the deadline
  SimTime max_propagation;
  SimTime worst_case;
};

struct Plan
{
  std::vector<SubchannelPlan> subchannels;
  std::vector<int> subchannel_of_user; ///< indexed by user_id

  /// Sum of dimensioned bandwidth per base station index.
  std::vector<double> bandwidth_per_cell(std::size_t cells) const;
};

struct PlanInputs
{
  const Scenario* scenario = nullptr;
  const Deployment* deployment = nullptr;
  std::vector<std::size_t> population_of_user;
};

/// Power control, grouping and dimensioning of every (cell, population).
/// Groups that cannot be dimensioned at any mini-slot length are halved until
/// they can; a single user that still fails is kept with eps_decode = 1.
Plan plan_resources(const PlanInputs& in);

// ---------------------------------------------------------------------------
// Simulation

enum class EventKind
{
  PacketArrival,
  SlotBoundary,
  TxComplete,
  DecodeComplete,
  GrantIssued,
};

struct Event
{
  SimTime time;
  EventKind kind = EventKind::PacketArrival;
  std::uint64_t packet_id = 0;
  int subchannel = -1;
  std::int64_t window = 0;
};

/// Strict weak order used by the event queue: time, then kind, then packet,
/// then subchannel and window.
bool event_before(const Event& a, const Event& b);

struct LatencyComponents
{
  SimTime alignment;
  SimTime handshake;
  SimTime queueing;
  SimTime transmission;
  SimTime propagation;
  SimTime decode;

  SimTime total() const { return alignment + handshake + queueing + transmission + propagation + decode; }
};

struct PacketRecord
{
  std::uint64_t packet_id = 0;
  int replication = 0;
  std::uint32_t user_id = 0;
  int bs_id = 0;
  int class_id = 0;
  Scheme scheme = Scheme::GFMA;
  int subchannel_id = 0;
  std::uint64_t size_bits = 0;
  SimTime arrival;
  SimTime deadline;
  LatencyComponents components;
  SimTime latency;
  Outcome outcome = Outcome::Delivered;
};

struct SubchannelUsage
{
  int subchannel_id = 0;
  int bs_id = 0;
  Scheme scheme = Scheme::GFMA;
  int class_id = 0;
  double bandwidth_hz = 0.0;
  double bandwidth_time = 0.0; ///< Hz * s reserved
  double goodput_bits = 0.0;
  std::uint64_t packets = 0;
  std::uint64_t failures = 0;
  int handshakes = 0;
};

struct RrcLogEntry
{
  SimTime time;
  std::uint32_t user_id = 0;
  RrcEvent event = RrcEvent::Release;
  RrcStateKind from = RrcStateKind::Idle;
  RrcStateKind to = RrcStateKind::Idle;
};

struct RunMetrics
{
  int replication = 0;
  std::uint64_t seed = 0;
  SimTime horizon;
  std::vector<PacketRecord> packets;
  std::vector<SubchannelUsage> usage;
  Plan plan;
  std::vector<RrcLogEntry> rrc_log;
};

struct RunOptions
{
  int replication = 0;
  bool rrc_log = false;
};

/// One replication of the scenario. Deterministic in (scenario, seed).
RunMetrics run(const Scenario& scenario, std::uint64_t seed, const RunOptions& options = {});

// ---------------------------------------------------------------------------
// Summaries

struct SeriesSummary
{
  std::string label;
  Scheme scheme = Scheme::GFMA;
  int class_id = 0;
  std::uint64_t packets = 0;
  std::uint64_t delivered = 0;
  std::uint64_t deadline_miss = 0;
  std::uint64_t decode_fail = 0;
  std::uint64_t detect_fail = 0;
  std::uint64_t overflow = 0;
  double reliability = 0.0;
  SimTime p5, p50, p95, p99, p999;
  double goodput_bits = 0.0;
  double bandwidth_time = 0.0;
  double spectral_efficiency = 0.0;
  std::vector<SimTime> cdf; ///< latency at quantiles i/N, i = 1..N
};

struct CellSummary
{
  int bs_id = 0;
  Scheme scheme = Scheme::GFMA;
  double spectral_efficiency = 0.0;
  double bandwidth_hz = 0.0;
};

struct Summary
{
  std::vector<SeriesSummary> series;
  std::vector<CellSummary> cells;
};

inline constexpr int kCdfPoints = 1000;

/// Nearest-rank quantile of sorted samples, q in (0, 1].
SimTime quantile(const std::vector<SimTime>& sorted, double q);

Summary summarize(const std::vector<RunMetrics>& runs, int cdf_points = kCdfPoints);

} // namespace urllc
