#pragma once

#include "urllc/time.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace urllc {

enum class ArrivalModel
{
  Periodic,
  GilbertElliot,
  EventPoisson,
};

std::string_view to_string(ArrivalModel m);
std::optional<ArrivalModel> parse_arrival_model(std::string_view s);

/// Two-state on/off source. Transitions are sampled once per 1 ms slot;
/// arrivals are Poisson at the peak rate while On.
struct GilbertElliotParams
{
  double p_on_off = 0.1;
  double p_off_on = 0.1;

  double stationary_on() const { return p_off_on / (p_on_off + p_off_on); }
  double peak_rate(double mean_rate) const { return mean_rate / stationary_on(); }
};

inline constexpr SimTime kGilbertElliotSlot = SimTime::from_ns(1'000'000);

struct TrafficClass
{
  int class_id = 0; ///< 1..8, or 0 when the tuple does not fall in any row
  double reliability = 0.99999;
  SimTime air_latency = SimTime::from_ns(2'000'000);
  std::uint64_t burst_bytes = 8000;
  ArrivalModel arrival = ArrivalModel::EventPoisson;
  double rate = 100.0; ///< mean packets per second
  GilbertElliotParams ge{};

  double failure_budget() const { return 1.0 - reliability; }
  std::uint64_t size_bits() const { return 8 * burst_bytes; }
};

enum class Outcome
{
  Delivered,
  DeadlineMiss,
  DecodeFail,
  DetectFail,
  Overflow,
};

std::string_view to_string(Outcome o);

struct Packet
{
  std::uint64_t packet_id = 0;
  std::uint32_t user_id = 0;
  int class_id = 0;
  std::uint64_t size_bits = 0;
  SimTime arrival;
  SimTime deadline;
  std::optional<SimTime> delivery_time;
  std::optional<Outcome> outcome;
};

// ---------------------------------------------------------------------------
// Classification table

struct Interval
{
  double lo = 0.0;
  double hi = 0.0;
  bool lo_open = false;

  bool contains(double x, double tol) const;
  double width() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  double geometric_midpoint() const { return std::sqrt(lo * hi); }
};

struct RateRange
{
  ArrivalModel model;
  Interval rate;         ///< accepted range
  double default_cap;    ///< upper end used for the default midpoint
};

struct ClassRow
{
  int class_id;
  Interval reliability;
  Interval latency_s;
  Interval burst_bytes;
  std::vector<RateRange> arrivals;

  const RateRange* arrival(ArrivalModel m) const;
};

/// The eight rows of the classification table.
std::span<const ClassRow> class_table();
const ClassRow& class_row(int class_id);

/// Maps a QoS tuple onto its class. Among matching rows the one with the
/// narrowest latency range wins, then higher reliability, then larger burst
/// bound. Throws NoMatchingClass.
int classify(double reliability, double latency_s, double burst_bytes, ArrivalModel arrival);

/// Representative tuple of a row; classify() maps it back onto the row.
TrafficClass canonical_class(int class_id);

/// Default rate for (row, model): geometric midpoint of the row range with the
/// default cap applied.
double default_rate(int class_id, ArrivalModel model);

/// Clamps a configured rate into the row's accepted range.
double clamp_rate(int class_id, ArrivalModel model, double rate);

// ---------------------------------------------------------------------------
// Arrival generation

/// Arrivals of one user in [0, horizon), sorted by time, deterministic in
/// (cls, user_id, seed). `phase` pins the first periodic arrival; it is drawn
/// uniformly in [0, 1/rate) otherwise. Packet ids are left at 0 for the
/// caller to assign.
std::vector<Packet> generate_arrivals(const TrafficClass& cls,
                                      std::uint32_t user_id,
                                      SimTime horizon,
                                      std::uint64_t seed,
                                      std::optional<SimTime> phase = std::nullopt);

// ---------------------------------------------------------------------------
// Use-case presets

enum class UseCase
{
  ImmersiveVR,
  TeleOperation,
  Automotive,
  InternetOfDrones,
  HapticInterpersonal,
};

enum class MediaType
{
  Haptics,
  Video,
  Audio,
  Audio3D,
  Sensor,
  GPS,
};

enum class RangePoint
{
  Low,
  Mid,
  High,
};

struct PresetOptions
{
  bool compressed = false; ///< haptics only: compressed stream (GE arrivals)
  RangePoint point = RangePoint::Mid;
  std::size_t latency_regime = 0; ///< some entries list several regimes
};

struct PresetEntry
{
  UseCase use_case;
  MediaType type;
  double reliability;
  double reliability_compressed; ///< haptics only
  std::vector<Interval> latency_regimes_s;
  Interval burst_bytes;
  ArrivalModel arrival;
  Interval rate;
  Interval rate_compressed; ///< haptics only (GE)
};

std::span<const PresetEntry> preset_table();

/// Parameter tuple of a use-case entry. class_id is set when the tuple
/// classifies, 0 otherwise. Throws UnknownPreset.
TrafficClass preset(UseCase use_case, MediaType type, const PresetOptions& options = {});

std::optional<UseCase> parse_use_case(std::string_view s);
std::optional<MediaType> parse_media_type(std::string_view s);
std::optional<RangePoint> parse_range_point(std::string_view s);

} // namespace urllc
