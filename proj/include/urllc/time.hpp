#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

namespace urllc {

/// Simulation clock value with integer nanosecond resolution.
///
/// All event ordering and latency bookkeeping uses this type so that sums of
/// latency components are exact and runs are bit-reproducible.
class SimTime
{
public:
  constexpr SimTime() = default;

  static constexpr SimTime from_ns(std::int64_t ns) { return SimTime{ns}; }
  static SimTime from_seconds(double s) { return SimTime{static_cast<std::int64_t>(std::llround(s * 1e9))}; }
  static SimTime from_ms(double ms) { return from_seconds(ms * 1e-3); }
  static SimTime from_us(double us) { return from_seconds(us * 1e-6); }

  constexpr std::int64_t ns() const { return m_ns; }
  constexpr double seconds() const { return static_cast<double>(m_ns) * 1e-9; }
  constexpr double ms() const { return static_cast<double>(m_ns) * 1e-6; }

  constexpr SimTime& operator+=(SimTime o) { m_ns += o.m_ns; return *this; }
  constexpr SimTime& operator-=(SimTime o) { m_ns -= o.m_ns; return *this; }

  friend constexpr SimTime operator+(SimTime a, SimTime b) { return SimTime{a.m_ns + b.m_ns}; }
  friend constexpr SimTime operator-(SimTime a, SimTime b) { return SimTime{a.m_ns - b.m_ns}; }
  friend constexpr SimTime operator*(SimTime a, std::int64_t k) { return SimTime{a.m_ns * k}; }
  friend constexpr SimTime operator*(std::int64_t k, SimTime a) { return SimTime{a.m_ns * k}; }
  friend constexpr auto operator<=>(SimTime, SimTime) = default;

private:
  constexpr explicit SimTime(std::int64_t ns) : m_ns{ns} {}
  std::int64_t m_ns = 0;
};

/// Fixed-point decimal seconds, e.g. "0.001600000". Exact for any SimTime.
std::string format_seconds(SimTime t);

} // namespace urllc
