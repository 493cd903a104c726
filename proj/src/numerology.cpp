#include "urllc/errors.hpp"
#include "urllc/radio.hpp"

#include <cmath>
#include <cstdio>

namespace urllc {

double Numerology::cp_overhead() const
{
  return cp == CyclicPrefix::Normal ? 0.0625 : 0.20;
}

double Numerology::cp_length_s() const
{
  const double f = cp_overhead();
  return f / (1.0 - f) * useful_symbol_s();
}

double Numerology::filter_delay_s() const
{
  return filter == FilterClass::LowOOBE ? 4.0 * symbol_s() : 0.5 * symbol_s();
}

double Numerology::guardband_fraction() const
{
  return filter == FilterClass::LowOOBE ? 0.02 : 0.10;
}

std::string to_string(const Numerology& n)
{
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.0fkHz/%s/%s", n.subcarrier_spacing_hz / 1e3,
                n.cp == CyclicPrefix::Normal ? "normal" : "extended",
                n.filter == FilterClass::LowOOBE ? "low-oobe" : "short-delay");
  return buf;
}

std::vector<Numerology> numerology_catalog()
{
  std::vector<Numerology> out;
  for (double scs : {15e3, 30e3, 60e3, 120e3})
    for (auto cp : {CyclicPrefix::Normal, CyclicPrefix::Extended})
      for (auto f : {FilterClass::LowOOBE, FilterClass::ShortDelay})
        out.push_back({scs, cp, f});
  return out;
}

bool numerology_feasible(const Numerology& n, double delay_spread_s, double coherence_s, double latency_budget_s)
{
  constexpr double tol = 1e-15;
  return n.cp_length_s() + tol >= delay_spread_s && n.symbol_s() <= coherence_s / 10.0 + tol
         && n.filter_delay_s() <= 0.1 * latency_budget_s + tol;
}

Numerology select_numerology(double delay_spread_s, double coherence_s, double latency_budget_s)
{
  const Numerology* best = nullptr;
  const auto catalog = numerology_catalog();
  for (const auto& n : catalog) {
    if (!numerology_feasible(n, delay_spread_s, coherence_s, latency_budget_s))
      continue;
    if (best == nullptr) {
      best = &n;
      continue;
    }
    const double d = n.total_overhead() - best->total_overhead();
    if (d < -1e-12 || (std::abs(d) <= 1e-12 && n.subcarrier_spacing_hz > best->subcarrier_spacing_hz))
      best = &n;
  }
  if (best == nullptr) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "no numerology for delay spread %.3g s, coherence %.3g s, budget %.3g s",
                  delay_spread_s, coherence_s, latency_budget_s);
    throw NoFeasibleNumerology(buf);
  }
  return *best;
}

double numerology_gain(std::span<const UserPopulationMix> mix,
                       double coherence_s,
                       double latency_budget_s,
                       double baseline_overhead)
{
  double weight = 0.0;
  double efficiency = 0.0;
  for (const auto& m : mix) {
    const auto n = select_numerology(m.delay_spread_s, coherence_s, latency_budget_s);
    efficiency += m.weight * (1.0 - n.total_overhead());
    weight += m.weight;
  }
  if (weight <= 0.0)
    return 1.0;
  return (efficiency / weight) / (1.0 - baseline_overhead);
}

} // namespace urllc
