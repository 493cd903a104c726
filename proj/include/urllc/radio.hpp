#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <vector>

namespace urllc {

inline constexpr double kSpeedOfLight = 299'792'458.0;

struct Position
{
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const Position& a, const Position& b);

struct BaseStation
{
  int bs_id = 0;
  Position position;
  int antennas = 1;
};

struct UserEquipment
{
  std::uint32_t user_id = 0;
  Position position;
  double p_max = 1.0; ///< normalized to the noise power spectral density
};

struct LinkGain
{
  double beta = 1.0; ///< linear large-scale gain, (0, 1]
  double distance_m = 1.0;
};

/// Urban-macro log-distance law: 128.1 + 37.6 log10(d / 1 km) + shadowing.
LinkGain pathloss_gain(double distance_m, double shadowing_db);

enum class BsLayout
{
  Grid,
  Random,
};

struct DeploymentSpec
{
  int base_stations = 3;
  BsLayout layout = BsLayout::Grid;
  double area_m = 600.0; ///< side of the square deployment area
  double bs_height_m = 25.0;
  double ue_height_m = 1.5;
  int antennas = 64;
  double p_max_db = 128.0;
  double shadowing_db = 8.0;
};

/// Base stations, users and the user x BS gain matrix. Immutable once built
/// apart from wholesale gain replacement by an external pathloss table.
class Deployment
{
public:
  Deployment(std::vector<BaseStation> base_stations,
             std::vector<UserEquipment> users,
             std::vector<std::vector<LinkGain>> gains);

  const std::vector<BaseStation>& base_stations() const { return m_bs; }
  const std::vector<UserEquipment>& users() const { return m_users; }

  const LinkGain& gain(std::size_t user_index, std::size_t bs_index) const { return m_gains[user_index][bs_index]; }

  /// Index into base_stations() of the serving cell of each user.
  std::size_t serving(std::size_t user_index) const { return m_serving[user_index]; }
  const LinkGain& serving_gain(std::size_t user_index) const { return gain(user_index, serving(user_index)); }

  /// Replaces every gain with the table's and re-associates each user with
  /// its strongest cell (ties to the lowest bs_id).
  void apply_gain_table(const std::vector<int>& bs_ids, const std::vector<std::vector<double>>& table);

private:
  void associate_nearest();

  std::vector<BaseStation> m_bs;
  std::vector<UserEquipment> m_users;
  std::vector<std::vector<LinkGain>> m_gains;
  std::vector<std::size_t> m_serving;
};

/// Draws BS and user positions and per-link shadowing. Users are associated
/// with their nearest BS by 3D distance.
Deployment make_deployment(const DeploymentSpec& spec, std::size_t user_count, std::uint64_t seed);

struct PathlossTable
{
  std::vector<int> bs_ids;
  std::vector<std::vector<double>> gains; ///< row = user, column = BS
};

/// Reads a comma-separated table: header row of bs_ids, then one row of
/// linear gains per user.
PathlossTable read_pathloss_table(std::istream& in);

/// Validates the table against the deployment and applies it. Throws
/// DimensionMismatch or NonPositiveGain.
void load_pathloss_matrix(Deployment& deployment, const PathlossTable& table);

// ---------------------------------------------------------------------------
// Link abstraction

/// MMSE pilot estimation quality, tau*rho_p*beta / (1 + tau*rho_p*beta).
double pilot_quality(double pilot_symbols, double pilot_power, double beta);

struct Interferer
{
  double power = 0.0;
  double beta = 0.0;
};

/// Post-combining SINR of maximum-ratio combining under channel hardening
/// (use-and-forget bound):
///
///   M a p b / (1 + sum_j p_j b_j + p b)
///
/// where a is the pilot quality of the desired user. Linear in M.
double effective_sinr(int antennas, double power, double beta, double alpha, std::span<const Interferer> cochannel);

struct LinkBudget
{
  double alpha = 0.0;
  double sinr = 0.0;
  double power = 0.0;
  int pilot_symbols = 0;
};

double q_function(double x);

/// Block error probability of `bits` payload bits over `symbols` channel uses
/// at SINR `sinr`, from the finite-blocklength normal approximation.
double decode_error(std::uint64_t symbols, std::uint64_t bits, double sinr);

// ---------------------------------------------------------------------------
// Numerology

enum class CyclicPrefix
{
  Normal,
  Extended,
};

enum class FilterClass
{
  LowOOBE,
  ShortDelay,
};

struct Numerology
{
  double subcarrier_spacing_hz = 15e3;
  CyclicPrefix cp = CyclicPrefix::Normal;
  FilterClass filter = FilterClass::LowOOBE;

  /// CP share of the full (CP-inclusive) symbol: 1/16 normal, 1/5 extended.
  double cp_overhead() const;
  double useful_symbol_s() const { return 1.0 / subcarrier_spacing_hz; }
  double cp_length_s() const;
  double symbol_s() const { return useful_symbol_s() + cp_length_s(); }
  double filter_delay_s() const;
  double guardband_fraction() const;
  double total_overhead() const { return cp_overhead() + guardband_fraction(); }
};

std::string to_string(const Numerology& n);

/// 4 spacings x 2 CP kinds x 2 filter classes.
std::vector<Numerology> numerology_catalog();

bool numerology_feasible(const Numerology& n, double delay_spread_s, double coherence_s, double latency_budget_s);

/// Lowest-overhead feasible catalog entry; ties go to the larger spacing.
/// Throws NoFeasibleNumerology.
Numerology select_numerology(double delay_spread_s, double coherence_s, double latency_budget_s);

struct UserPopulationMix
{
  double weight = 1.0;
  double delay_spread_s = 0.0;
};

/// Overhead-adjusted efficiency of auto-selected numerologies relative to a
/// fixed CP overhead, weighting each population by its share of the band.
double numerology_gain(std::span<const UserPopulationMix> mix,
                       double coherence_s,
                       double latency_budget_s,
                       double baseline_overhead);

} // namespace urllc
