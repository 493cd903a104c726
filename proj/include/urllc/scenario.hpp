#pragma once

#include "urllc/radio.hpp"
#include "urllc/rrm.hpp"
#include "urllc/time.hpp"
#include "urllc/traffic.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace urllc {

/// Access scheme of a population. FGMA-SPS runs the fast-grant procedure once
/// and then reuses the grant every period.
enum class Scheme
{
  FourWay,
  FGMA,
  FGMASps,
  GFMA,
};

std::string_view to_string(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view s);
Protocol protocol_of(Scheme s);

struct FrameSpec
{
  SimTime t_min = SimTime::from_ns(200'000);
  double cp_overhead = 0.25;
  bool auto_numerology = false;
  double delay_spread_s = 0.3e-6;
  double coherence_s = 10e-3;
  double carrier_bandwidth_hz = 400e6;
};

struct RrmSpec
{
  std::vector<double> w_grid_hz = default_w_grid();
  int k_max = 8;
  double rx_snr_target_db = 0.0;
  double pilot_power_ratio = 1.0;
  double group_window_db = 10.0;
  ErrorSplit split;
  DetectionModel detection;
  std::size_t preamble_pool = 4096;
};

/// Inputs of the numerology-gain figure written to summary.json: a population
/// of low delay-spread users mixed with a share of high delay-spread users.
struct NumerologyStudy
{
  double low_delay_spread_s = 0.3e-6;
  double high_delay_spread_s = 5e-6;
  double high_share = 0.2;
  double coherence_s = 10e-3;
  double latency_budget_s = 2e-3;
  double baseline_overhead = 0.25;
};

struct Population
{
  std::string name;
  TrafficClass cls;
  std::size_t users = 0;
  Scheme scheme = Scheme::GFMA;
  bool aligned = false; ///< periodic users share one phase
};

struct Scenario
{
  std::string name = "scenario";
  DeploymentSpec deployment;
  std::optional<std::filesystem::path> pathloss_csv;
  FrameSpec frame;
  RrmSpec rrm;
  NumerologyStudy numerology;
  std::vector<Population> populations;
  SimTime horizon = SimTime::from_ns(1'000'000'000);
  int replications = 1;
  std::uint64_t seed = 1;

  std::size_t total_users() const;
  SimTime max_latency() const;
  /// CP (and guardband) share used for dimensioning.
  double overhead() const;
};

/// Parses and validates configuration text. Relative file references resolve
/// against base_dir. Throws ParseError for malformed text and ValidationError
/// listing every violated constraint.
Scenario validate(std::string_view text, const std::filesystem::path& base_dir = {});

Scenario load_scenario(const std::filesystem::path& file);

/// Checks the resolved scenario; returns the violations (empty when valid).
std::vector<std::string> check(const Scenario& s);

} // namespace urllc
