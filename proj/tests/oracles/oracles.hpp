#pragma once

// Test-side reference computations. Each one is written from the defining
// formula (numerical integration, pmf enumeration, brute-force sweeps,
// Monte-Carlo) and shares no code with the library beyond its public types.

#include "urllc/rng.hpp"
#include "urllc/rrm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace oracle {

/// Gaussian tail by composite Simpson integration of the density, in long
/// double.
inline long double q_simpson(long double x, int intervals = 200000)
{
  if (x < 0)
    return 1.0L - q_simpson(-x, intervals);
  // Integrate over [0, x] and subtract from one half.
  const long double h = x / intervals;
  auto pdf = [](long double t) { return std::exp(-t * t / 2.0L) / std::sqrt(2.0L * std::numbers::pi_v<long double>); };
  long double s = pdf(0.0L) + pdf(x);
  for (int i = 1; i < intervals; ++i)
    s += (i % 2 ? 4.0L : 2.0L) * pdf(i * h);
  return 0.5L - s * h / 3.0L;
}

/// Normal-approximation block error with the same log-term convention as the
/// library contract: correction min(log2(n)/2, b), eps = 1 for sinr <= 0 or
/// n = 0, eps = 0 for b = 0.
inline long double block_error(long double n, long double b, long double sinr)
{
  if (b == 0)
    return 0.0L;
  if (!(sinr > 0) || n == 0)
    return 1.0L;
  const long double c = std::log2(1.0L + sinr);
  const long double l2e = 1.0L / std::log(2.0L);
  const long double v = (1.0L - 1.0L / ((1.0L + sinr) * (1.0L + sinr))) * l2e * l2e;
  const long double corr = std::min(0.5L * std::log2(n), b);
  const long double x = (n * c - b + corr) / std::sqrt(n * v);
  return 0.5L * std::erfc(x / std::sqrt(2.0L));
}

/// P(Binomial(n, q) > m) by summing the pmf term by term.
inline long double binomial_tail(int n, long double q, int m)
{
  long double tail = 0.0L;
  for (int k = m + 1; k <= n; ++k) {
    long double c = 1.0L;
    for (int i = 0; i < k; ++i)
      c = c * (n - i) / (i + 1);
    tail += c * std::pow(q, k) * std::pow(1.0L - q, n - k);
  }
  return tail;
}

inline int m_star(int n, long double q, long double eps)
{
  for (int m = 0; m <= n; ++m)
    if (binomial_tail(n, q, m) <= eps)
      return m;
  return n;
}

struct Member
{
  double beta;
  double power;
};

/// Smallest grid bandwidth at which every member of a fully co-scheduled group
/// meets eps, each grid point evaluated on its own. nullopt if none does.
inline std::optional<double> w_sweep(std::span<const Member> group,
                                     int antennas,
                                     double slot_s,
                                     double overhead,
                                     double pilot_ratio,
                                     std::uint64_t bits,
                                     double eps,
                                     std::span<const double> grid)
{
  const int tau = static_cast<int>(group.size());
  for (double w : grid) {
    const long double n = std::floor(static_cast<long double>(w) * slot_s * (1.0 - overhead) + 1e-9L) - tau;
    if (n < 1)
      continue;
    bool ok = true;
    for (std::size_t k = 0; k < group.size() && ok; ++k) {
      const double rx = group[k].power * group[k].beta;
      double others = 0.0;
      for (std::size_t j = 0; j < group.size(); ++j)
        if (j != k)
          others += group[j].power * group[j].beta;
      const double pilot = tau * group[k].power * pilot_ratio * group[k].beta;
      const double alpha = pilot / (1.0 + pilot);
      const double sinr = antennas * alpha * rx / (1.0 + others + rx);
      ok = static_cast<double>(block_error(n, static_cast<long double>(bits), sinr)) <= eps;
    }
    if (ok)
      return w;
  }
  return std::nullopt;
}

/// Ergodic rate of user 0 under maximum-ratio combining with MMSE channel
/// estimates from orthogonal pilots (tau symbols at pilot power), averaged
/// over Rayleigh draws, with perfect knowledge of the instantaneous SINR.
inline double mrc_ergodic_rate(int antennas,
                               std::span<const Member> users,
                               int tau,
                               double pilot_ratio,
                               int draws,
                               std::uint64_t seed)
{
  using C = std::complex<double>;
  urllc::Rng rng(seed);
  auto cn = [&rng] { return C(rng.normal(0.0, std::sqrt(0.5)), rng.normal(0.0, std::sqrt(0.5))); };
  const std::size_t k_users = users.size();
  const auto m = static_cast<std::size_t>(antennas);
  std::vector<std::vector<C>> h(k_users, std::vector<C>(m));
  std::vector<C> est(m);
  double sum = 0.0;
  for (int d = 0; d < draws; ++d) {
    for (std::size_t k = 0; k < k_users; ++k)
      for (auto& x : h[k])
        x = std::sqrt(users[k].beta) * cn();
    // y = sqrt(tau p_p) h + n, h_hat = E[h | y].
    const double pp = tau * users[0].power * pilot_ratio;
    const double b = users[0].beta;
    const double gain = std::sqrt(pp) * b / (pp * b + 1.0);
    for (std::size_t i = 0; i < m; ++i)
      est[i] = gain * (std::sqrt(pp) * h[0][i] + cn());

    auto project = [&](const std::vector<C>& v) {
      C s{};
      for (std::size_t i = 0; i < m; ++i)
        s += std::conj(est[i]) * v[i];
      return std::norm(s);
    };
    double noise = 0.0;
    for (const auto& x : est)
      noise += std::norm(x);
    const double signal = users[0].power * project(h[0]);
    double interference = 0.0;
    for (std::size_t k = 1; k < k_users; ++k)
      interference += users[k].power * project(h[k]);
    sum += std::log2(1.0 + signal / (interference + noise));
  }
  return sum / draws;
}

/// Mean arrival count of a two-state Markov-modulated Poisson source stepped
/// once per slot, started from its stationary distribution.
inline double markov_mean_count(double p_on_off,
                                double p_off_on,
                                double peak_rate,
                                double slot_s,
                                double horizon_s,
                                int seeds)
{
  const double pi_on = p_off_on / (p_on_off + p_off_on);
  const auto slots = static_cast<long>(std::llround(horizon_s / slot_s));
  double total = 0.0;
  for (int s = 0; s < seeds; ++s) {
    urllc::Rng rng(0xfeed'0000ULL + static_cast<std::uint64_t>(s));
    bool on = rng.uniform() < pi_on;
    for (long i = 0; i < slots; ++i) {
      if (on) {
        // Poisson count in one slot by exponential gaps.
        double t = rng.exponential(peak_rate);
        while (t < slot_s) {
          total += 1.0;
          t += rng.exponential(peak_rate);
        }
      }
      on = on ? rng.uniform() >= p_on_off : rng.uniform() < p_off_on;
    }
  }
  return total / seeds;
}

/// One-sample Kolmogorov-Smirnov statistic against U(0, width).
inline double ks_uniform(std::vector<double> x, double width)
{
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = std::clamp(x[i] / width, 0.0, 1.0);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

/// Asymptotic 1% critical value of the KS statistic.
inline double ks_critical_1pct(std::size_t n)
{
  return 1.6276 / std::sqrt(static_cast<double>(n));
}

} // namespace oracle
