#pragma once

#include "urllc/rrc.hpp"
#include "urllc/time.hpp"
#include "urllc/traffic.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace urllc {

// ---------------------------------------------------------------------------
// Power control and grouping

struct PowerRequest
{
  double beta = 1.0;
  double p_max = 1.0;
};

struct PowerAllocation
{
  std::vector<double> power;
  std::vector<bool> power_limited;
};

/// Truncated channel inversion: rho = min(P_max, target / beta).
PowerAllocation power_control(std::span<const PowerRequest> users, double rx_target);

struct GroupMember
{
  std::uint32_t user_id = 0;
  double beta = 1.0;
  double power = 1.0;

  double received() const { return power * beta; }
};

/// Sorts by beta (descending, ties by user_id) and cuts the list greedily into
/// groups of at most k_max whose beta spread stays within window_db.
std::vector<std::vector<GroupMember>> group_users(std::vector<GroupMember> users, int k_max, double window_db = 10.0);

// ---------------------------------------------------------------------------
// Dimensioning

std::vector<double> default_w_grid();

struct LinkInputs
{
  int antennas = 64;
  SimTime slot = SimTime::from_ns(200'000); ///< mini-slot length T
  double overhead = 0.25;                   ///< share of W*T lost to CP and guardband
  double pilot_power_ratio = 1.0;           ///< rho_p / rho
  std::vector<double> w_grid_hz = default_w_grid();
};

struct DimensionResult
{
  Protocol ma_kind = Protocol::FGMA;
  double bandwidth_hz = 0.0;
  int group_size = 0;
  int provisioned_users = 0; ///< m*; equals group_size for granted access
  int pilot_symbols = 0;
  int preamble_symbols = 0;
  std::int64_t data_symbols = 0;
  double activation_probability = 1.0;
  double eps_decode = 0.0;
  double eps_detect = 0.0;
  double eps_overflow = 0.0;

  double eps_total() const { return eps_decode + eps_detect + eps_overflow; }
};

/// Symbols available for data on a W x T resource after overhead, pilots and
/// preamble.
std::int64_t data_symbols(double bandwidth_hz, SimTime slot, double overhead, int pilot_symbols, int preamble_symbols);

/// Smallest grid bandwidth at which every member decodes `bits` with error at
/// most eps_target while m_active members (the member itself plus the
/// strongest others) share the resource with orthogonal pilots. nullopt when
/// no grid point qualifies.
std::optional<DimensionResult> dimension_concurrent(std::span<const GroupMember> group,
                                                    int m_active,
                                                    std::uint64_t bits,
                                                    double eps_target,
                                                    int preamble_symbols,
                                                    const LinkInputs& link);

/// Granted access: every member scheduled together, the whole failure budget
/// goes to decoding. Throws Infeasible.
DimensionResult dimension_fgma(std::span<const GroupMember> group, const TrafficClass& cls, const LinkInputs& link);

struct ErrorSplit
{
  double overflow = 1.0 / 3.0;
  double detect = 1.0 / 3.0;
  double decode = 1.0 / 3.0;

  /// Throws InvalidSplit unless all parts are positive and sum to one.
  void validate() const;
};

/// Preamble miss probability exp(-c * tau) with c = c0 * snr.
struct DetectionModel
{
  double c0 = 1.0;

  double miss_probability(int preamble_symbols, double snr) const;
  /// Fewest symbols meeting eps. Throws Infeasible for snr <= 0.
  int preamble_symbols(double eps, double snr) const;
};

/// Probability that a user has at least one packet in a window of length T.
double activation_probability(ArrivalModel model, double rate, SimTime window);

/// P(Binomial(n, q) > m).
double binomial_tail(int n, double q, int m);

/// Smallest m with P(Binomial(n, q) > m) <= eps.
int provisioned_users(int n, double q, double eps);

/// Smallest k such that an arrival finds at least k of the transmissions
/// offered at load G*lambda*T in progress with probability at most eps.
int provisioned_grants(double offered_load, double eps);

/// Grant-free access for a group of G users activating with probability q per
/// slot: provision m* simultaneous users, size the preamble for detection and
/// dimension the decode budget for m* co-channel users. Throws Infeasible or
/// InvalidSplit.
DimensionResult dimension_gfma(std::span<const GroupMember> group,
                               const TrafficClass& cls,
                               double q,
                               const LinkInputs& link,
                               const ErrorSplit& split = {},
                               const DetectionModel& detection = {});

struct Grant
{
  SimTime start;
  SimTime duration;
  double bandwidth_hz = 0.0;
  std::vector<std::uint32_t> users;
};

struct SpsSchedule
{
  DimensionResult dimension;
  SimTime period;
  std::vector<Grant> grants;
  int handshakes = 1;
};

/// One granted dimensioning reused every period from first_grant until the
/// horizon.
SpsSchedule semi_persistent_schedule(std::span<const GroupMember> group,
                                     const TrafficClass& cls,
                                     const LinkInputs& link,
                                     SimTime period,
                                     SimTime first_grant,
                                     SimTime horizon);

} // namespace urllc
