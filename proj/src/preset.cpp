#include "urllc/errors.hpp"
#include "urllc/traffic.hpp"

#include <string>

namespace urllc {

namespace {

Interval r(double lo, double hi) { return Interval{lo, hi, false}; }
Interval p(double v) { return Interval{v, v, false}; }

constexpr double ms = 1e-3;

// Haptic bursts are 2-8 bytes per DoF times the DoF count of the use case.
Interval haptic_burst(double max_dofs) { return r(2.0, 8.0 * max_dofs); }

const std::vector<PresetEntry>& entries()
{
  using U = UseCase;
  using M = MediaType;
  using A = ArrivalModel;
  static const std::vector<PresetEntry> table = {
    {U::ImmersiveVR, M::Haptics, 0.999, 0.99999, {r(0.5 * ms, 2 * ms)}, haptic_burst(1000), A::Periodic, r(1000, 5000), r(100, 500)},
    {U::ImmersiveVR, M::Video, 0.99999, 0, {r(0.5 * ms, 2 * ms)}, r(1000, 30000), A::Periodic, r(100, 1000), {}},
    {U::ImmersiveVR, M::Audio3D, 0.999, 0, {r(0.5 * ms, 2 * ms)}, p(100), A::Periodic, r(10, 1000), {}},

    {U::TeleOperation, M::Haptics, 0.999, 0.99999, {r(0.5 * ms, 2 * ms), p(10 * ms), p(100 * ms)}, haptic_burst(1000), A::Periodic, r(1000, 5000), r(100, 500)},
    {U::TeleOperation, M::Video, 0.99999, 0, {p(5 * ms)}, r(1000, 10000), A::Periodic, r(100, 1000), {}},
    {U::TeleOperation, M::Audio, 0.999, 0, {p(5 * ms)}, r(50, 100), A::Periodic, r(10, 1000), {}},

    {U::Automotive, M::Haptics, 0.999, 0.99999, {r(0.5 * ms, 2 * ms), p(10 * ms), p(100 * ms)}, haptic_burst(100), A::Periodic, r(1000, 5000), r(100, 500)},
    {U::Automotive, M::Sensor, 0.99999, 0, {r(0.5 * ms, 2 * ms), p(10 * ms), p(100 * ms)}, r(1000, 5000), A::EventPoisson, r(100, 1000), {}},
    {U::Automotive, M::Video, 0.999, 0, {r(0.5 * ms, 2 * ms), p(10 * ms), p(100 * ms)}, r(1000, 10000), A::Periodic, r(100, 1000), {}},
    {U::Automotive, M::Audio, 0.999, 0, {r(0.5 * ms, 2 * ms), p(10 * ms), p(100 * ms)}, r(50, 100), A::Periodic, r(10, 1000), {}},

    {U::InternetOfDrones, M::Haptics, 0.999, 0.99999, {r(0.5 * ms, 2 * ms), p(10 * ms)}, haptic_burst(100), A::Periodic, r(1000, 5000), r(100, 500)},
    {U::InternetOfDrones, M::GPS, 0.999, 0, {p(10 * ms)}, p(2000), A::Periodic, r(100, 1250), {}},
    {U::InternetOfDrones, M::Sensor, 0.99999, 0, {p(10 * ms)}, r(1000, 5000), A::EventPoisson, r(100, 1000), {}},
    {U::InternetOfDrones, M::Video, 0.99999, 0, {r(1 * ms, 10 * ms)}, r(1000, 20000), A::Periodic, r(100, 1000), {}},
    {U::InternetOfDrones, M::Audio, 0.999, 0, {r(1 * ms, 10 * ms)}, r(50, 100), A::Periodic, r(10, 1000), {}},

    {U::HapticInterpersonal, M::Haptics, 0.999, 0.99999, {r(1 * ms, 2 * ms), r(10 * ms, 100 * ms)}, haptic_burst(1000), A::Periodic, r(1000, 5000), r(100, 500)},
    {U::HapticInterpersonal, M::Video, 0.99999, 0, {p(5 * ms)}, r(1000, 30000), A::Periodic, r(100, 1000), {}},
    {U::HapticInterpersonal, M::Audio, 0.999, 0, {p(5 * ms)}, r(50, 100), A::Periodic, r(10, 1000), {}},
  };
  return table;
}

double pick(const Interval& iv, RangePoint pt)
{
  switch (pt) {
    case RangePoint::Low: return iv.lo;
    case RangePoint::High: return iv.hi;
    case RangePoint::Mid: break;
  }
  return iv.midpoint();
}

} // namespace

std::span<const PresetEntry> preset_table() { return entries(); }

TrafficClass preset(UseCase use_case, MediaType type, const PresetOptions& options)
{
  for (const auto& e : entries()) {
    if (e.use_case != use_case || e.type != type)
      continue;
    if (options.compressed && type != MediaType::Haptics)
      throw UnknownPreset("only haptic presets have a compressed variant");
    if (options.latency_regime >= e.latency_regimes_s.size())
      throw UnknownPreset("latency regime " + std::to_string(options.latency_regime) + " not listed for this preset");

    TrafficClass c;
    c.reliability = options.compressed ? e.reliability_compressed : e.reliability;
    c.air_latency = SimTime::from_seconds(pick(e.latency_regimes_s[options.latency_regime], options.point));
    c.burst_bytes = static_cast<std::uint64_t>(std::llround(pick(e.burst_bytes, options.point)));
    c.arrival = options.compressed ? ArrivalModel::GilbertElliot : e.arrival;
    c.rate = pick(options.compressed ? e.rate_compressed : e.rate, options.point);
    try {
      c.class_id = classify(c.reliability, c.air_latency.seconds(), static_cast<double>(c.burst_bytes), c.arrival);
    } catch (const NoMatchingClass&) {
      c.class_id = 0;
    }
    return c;
  }
  throw UnknownPreset("no preset for this use case and media type");
}

std::optional<UseCase> parse_use_case(std::string_view s)
{
  if (s == "IVR") return UseCase::ImmersiveVR;
  if (s == "TeleOperation" || s == "T") return UseCase::TeleOperation;
  if (s == "Automotive" || s == "A") return UseCase::Automotive;
  if (s == "IoD") return UseCase::InternetOfDrones;
  if (s == "HIC") return UseCase::HapticInterpersonal;
  return std::nullopt;
}

std::optional<MediaType> parse_media_type(std::string_view s)
{
  if (s == "Haptics") return MediaType::Haptics;
  if (s == "Video") return MediaType::Video;
  if (s == "Audio") return MediaType::Audio;
  if (s == "3DAudio" || s == "Audio3D") return MediaType::Audio3D;
  if (s == "Sensor") return MediaType::Sensor;
  if (s == "GPS") return MediaType::GPS;
  return std::nullopt;
}

std::optional<RangePoint> parse_range_point(std::string_view s)
{
  if (s == "low") return RangePoint::Low;
  if (s == "mid") return RangePoint::Mid;
  if (s == "high") return RangePoint::High;
  return std::nullopt;
}

} // namespace urllc
