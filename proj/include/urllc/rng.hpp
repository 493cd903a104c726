#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace urllc {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stream identifiers. Every random quantity in a run is drawn from a stream
/// keyed by (seed, purpose, entity ids), so draws never depend on the order in
/// which the event loop happens to visit entities.
enum class Stream : std::uint64_t
{
  Arrivals = 1,
  Phase,
  Placement,
  Shadowing,
  Alignment,
  Detect,
  Decode,
  Replication,
};

constexpr std::uint64_t stream_key(std::uint64_t seed, Stream s, std::uint64_t a = 0, std::uint64_t b = 0)
{
  std::uint64_t k = mix64(seed);
  k = mix64(k ^ static_cast<std::uint64_t>(s));
  k = mix64(k ^ a);
  return mix64(k ^ (b + 0x51ed270b2f9c3e41ULL));
}

/// xoshiro256** seeded through splitmix64.
class Rng
{
public:
  explicit Rng(std::uint64_t key)
  {
    for (auto& w : m_s) {
      key += 0x9e3779b97f4a7c15ULL;
      w = mix64(key);
    }
  }

  std::uint64_t next()
  {
    const std::uint64_t result = rotl(m_s[1] * 5, 7) * 9;
    const std::uint64_t t = m_s[1] << 17;
    m_s[2] ^= m_s[0];
    m_s[3] ^= m_s[1];
    m_s[1] ^= m_s[2];
    m_s[0] ^= m_s[3];
    m_s[2] ^= t;
    m_s[3] = rotl(m_s[3], 45);
    return result;
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  /// Standard normal via the Marsaglia polar method (no cached spare, so the
  /// stream position depends only on the number of calls).
  double normal(double mean = 0.0, double sd = 1.0)
  {
    for (;;) {
      const double u = 2.0 * uniform() - 1.0;
      const double v = 2.0 * uniform() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0)
        return mean + sd * u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> m_s{};
};

/// One uniform draw on [0, 1) addressed by key.
inline double uniform_at(std::uint64_t key)
{
  return static_cast<double>(mix64(key) >> 11) * 0x1.0p-53;
}

} // namespace urllc
