#include "urllc/traffic.hpp"

#include "urllc/errors.hpp"
#include "urllc/rng.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>

namespace urllc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Interval range(double lo, double hi) { return Interval{lo, hi, false}; }
Interval point(double v) { return Interval{v, v, false}; }
Interval up_to(double v) { return Interval{0.0, v, true}; }
Interval above(double v) { return Interval{v, kInf, true}; }

const std::vector<ClassRow>& rows()
{
  using A = ArrivalModel;
  static const std::vector<ClassRow> table = {
    {1, range(0.999, 0.9999999), above(0.050), range(1000, 10000),
     {{A::Periodic, range(10, 5000), 5000}, {A::GilbertElliot, range(100, 500), 500}, {A::EventPoisson, range(100, 1000), 1000}}},
    {2, range(0.999, 0.9999999), range(0.010, 0.050), range(1000, 20000),
     {{A::Periodic, range(10, 5000), 5000}, {A::GilbertElliot, range(100, 500), 500}, {A::EventPoisson, range(100, 1000), 1000}}},
    {3, range(0.999, 0.99999), range(0.002, 0.010), range(1000, 30000),
     {{A::Periodic, range(10, 5000), 5000}}},
    // The accepted GE range tops out at 50000 pkt/s but the default is capped at 5000.
    {4, point(0.9999999), point(0.002), up_to(80), {{A::GilbertElliot, range(100, 50000), 5000}}},
    {5, point(0.99999), point(0.001), up_to(800), {{A::GilbertElliot, range(10, 5000), 5000}}},
    {6, point(0.9999999), point(0.002), up_to(5000), {{A::EventPoisson, range(100, 1000), 1000}}},
    {7, point(0.99999), point(0.002), up_to(8000), {{A::EventPoisson, range(100, 500), 500}}},
    {8, point(0.99999), point(0.0005), up_to(5000), {{A::EventPoisson, range(100, 500), 500}}},
  };
  return table;
}

constexpr double kReliabilityTol = 1e-10;
constexpr double kLatencyTol = 1e-10;
constexpr double kBurstTol = 1e-9;

} // namespace

std::string_view to_string(ArrivalModel m)
{
  switch (m) {
    case ArrivalModel::Periodic: return "Periodic";
    case ArrivalModel::GilbertElliot: return "GilbertElliot";
    case ArrivalModel::EventPoisson: return "EventPoisson";
  }
  return "?";
}

std::optional<ArrivalModel> parse_arrival_model(std::string_view s)
{
  if (s == "Periodic" || s == "periodic" || s == "P")
    return ArrivalModel::Periodic;
  if (s == "GilbertElliot" || s == "GilbertElliott" || s == "gilbert_elliot" || s == "GE")
    return ArrivalModel::GilbertElliot;
  if (s == "EventPoisson" || s == "poisson" || s == "Poisson" || s == "E")
    return ArrivalModel::EventPoisson;
  return std::nullopt;
}

std::string_view to_string(Outcome o)
{
  switch (o) {
    case Outcome::Delivered: return "Delivered";
    case Outcome::DeadlineMiss: return "DeadlineMiss";
    case Outcome::DecodeFail: return "DecodeFail";
    case Outcome::DetectFail: return "DetectFail";
    case Outcome::Overflow: return "Overflow";
  }
  return "?";
}

bool Interval::contains(double x, double tol) const
{
  if (lo_open ? !(x > lo + tol) : x < lo - tol)
    return false;
  return x <= hi + tol;
}

const RateRange* ClassRow::arrival(ArrivalModel m) const
{
  for (const auto& a : arrivals)
    if (a.model == m)
      return &a;
  return nullptr;
}

std::span<const ClassRow> class_table() { return rows(); }

const ClassRow& class_row(int class_id)
{
  if (class_id < 1 || class_id > static_cast<int>(rows().size()))
    throw NoMatchingClass("class id " + std::to_string(class_id) + " outside 1..8");
  return rows()[static_cast<std::size_t>(class_id - 1)];
}

int classify(double reliability, double latency_s, double burst_bytes, ArrivalModel arrival)
{
  std::vector<const ClassRow*> hits;
  for (const auto& row : rows()) {
    if (row.reliability.contains(reliability, kReliabilityTol) && row.latency_s.contains(latency_s, kLatencyTol)
        && row.burst_bytes.contains(burst_bytes, kBurstTol) && row.arrival(arrival) != nullptr)
      hits.push_back(&row);
  }
  if (hits.empty()) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "no class for R=%.7f L=%.4g s B=%.0f bytes A=%s", reliability, latency_s,
                  burst_bytes, std::string(to_string(arrival)).c_str());
    throw NoMatchingClass(buf);
  }
  std::stable_sort(hits.begin(), hits.end(), [](const ClassRow* a, const ClassRow* b) {
    if (a->latency_s.width() != b->latency_s.width())
      return a->latency_s.width() < b->latency_s.width();
    if (a->reliability.hi != b->reliability.hi)
      return a->reliability.hi > b->reliability.hi;
    return a->burst_bytes.hi > b->burst_bytes.hi;
  });
  return hits.front()->class_id;
}

double default_rate(int class_id, ArrivalModel model)
{
  const auto* r = class_row(class_id).arrival(model);
  if (r == nullptr)
    throw NoMatchingClass("class " + std::to_string(class_id) + " has no " + std::string(to_string(model)) + " arrivals");
  return std::sqrt(r->rate.lo * std::min(r->rate.hi, r->default_cap));
}

double clamp_rate(int class_id, ArrivalModel model, double rate)
{
  const auto* r = class_row(class_id).arrival(model);
  if (r == nullptr)
    throw NoMatchingClass("class " + std::to_string(class_id) + " has no " + std::string(to_string(model)) + " arrivals");
  return std::clamp(rate, r->rate.lo, r->rate.hi);
}

TrafficClass canonical_class(int class_id)
{
  const auto& row = class_row(class_id);
  TrafficClass c;
  c.class_id = class_id;
  c.reliability = row.reliability.lo;
  const double latency = std::isinf(row.latency_s.hi) ? 2.0 * row.latency_s.lo : row.latency_s.midpoint();
  c.air_latency = SimTime::from_seconds(latency);
  c.burst_bytes = static_cast<std::uint64_t>(row.burst_bytes.hi);
  c.arrival = row.arrivals.front().model;
  c.rate = default_rate(class_id, c.arrival);
  return c;
}

std::vector<Packet> generate_arrivals(const TrafficClass& cls,
                                      std::uint32_t user_id,
                                      SimTime horizon,
                                      std::uint64_t seed,
                                      std::optional<SimTime> phase)
{
  std::vector<Packet> out;
  if (horizon <= SimTime{} || cls.rate <= 0.0)
    return out;

  auto emit = [&](SimTime t) {
    Packet p;
    p.user_id = user_id;
    p.class_id = cls.class_id;
    p.size_bits = cls.size_bits();
    p.arrival = t;
    p.deadline = t + cls.air_latency;
    out.push_back(p);
  };

  Rng rng{stream_key(seed, Stream::Arrivals, user_id, static_cast<std::uint64_t>(cls.class_id))};

  switch (cls.arrival) {
    case ArrivalModel::Periodic: {
      const SimTime period = SimTime::from_seconds(1.0 / cls.rate);
      SimTime first;
      if (phase) {
        first = *phase;
      } else {
        Rng phase_rng{stream_key(seed, Stream::Phase, user_id, static_cast<std::uint64_t>(cls.class_id))};
        first = SimTime::from_ns(static_cast<std::int64_t>(phase_rng.uniform() * static_cast<double>(period.ns())));
      }
      for (SimTime t = first; t < horizon; t += period)
        emit(t);
      break;
    }
    case ArrivalModel::EventPoisson: {
      double t = rng.exponential(cls.rate);
      const double end = horizon.seconds();
      while (t < end) {
        const SimTime at = SimTime::from_seconds(t);
        if (at < horizon)
          emit(at);
        t += rng.exponential(cls.rate);
      }
      break;
    }
    case ArrivalModel::GilbertElliot: {
      const double peak = cls.ge.peak_rate(cls.rate);
      bool on = rng.uniform() < cls.ge.stationary_on();
      for (SimTime slot; slot < horizon; slot += kGilbertElliotSlot) {
        if (on) {
          const double start = slot.seconds();
          const double stop = std::min(slot + kGilbertElliotSlot, horizon).seconds();
          for (double t = start + rng.exponential(peak); t < stop; t += rng.exponential(peak)) {
            const SimTime at = SimTime::from_seconds(t);
            if (at < horizon)
              emit(at);
          }
        }
        const double u = rng.uniform();
        on = on ? !(u < cls.ge.p_on_off) : (u < cls.ge.p_off_on);
      }
      break;
    }
  }
  return out;
}

} // namespace urllc
