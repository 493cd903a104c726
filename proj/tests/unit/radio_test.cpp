#include "urllc/errors.hpp"
#include "urllc/radio.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace urllc;

TEST_CASE("effective SINR is linear in the antenna count")
{
  const Interferer others[] = {{1.0, 0.1}, {0.5, 0.3}};
  const double alpha = pilot_quality(3, 1.0, 0.2);
  for (int m : {8, 16, 64, 128})
    CHECK(effective_sinr(2 * m, 1.0, 0.2, alpha, others) == 2.0 * effective_sinr(m, 1.0, 0.2, alpha, others));
}

TEST_CASE("decode error limits and monotonicity")
{
  CHECK(decode_error(100, 0, 1.0) == 0.0);
  CHECK(decode_error(100, 100, 0.0) == 1.0);
  CHECK(decode_error(0, 100, 1.0) == 1.0);
  CHECK(decode_error(1000, 800, 1e6) < 1e-12);

  for (std::uint64_t n = 100; n <= 100000; n *= 10) {
    double prev = 1.0;
    for (double g = 0.01; g < 100.0; g *= 2) {
      const double e = decode_error(n, 1000, g);
      CHECK(e <= prev);
      prev = e;
    }
  }
}

TEST_CASE("pathloss and association")
{
  const auto near = pathloss_gain(100.0, 0.0);
  const auto far = pathloss_gain(400.0, 0.0);
  CHECK(near.beta > far.beta);
  CHECK(pathloss_gain(1000.0, 0.0).beta == doctest::Approx(std::pow(10.0, -12.81)));
  CHECK(pathloss_gain(0.0, 0.0).beta <= 1.0);

  const auto dep = make_deployment({}, 50, 7);
  REQUIRE(dep.users().size() == 50);
  for (std::size_t u = 0; u < dep.users().size(); ++u)
    for (std::size_t b = 0; b < dep.base_stations().size(); ++b)
      CHECK(dep.serving_gain(u).distance_m <= dep.gain(u, b).distance_m);
}

TEST_CASE("gain table drives association by argmax")
{
  auto dep = make_deployment({.base_stations = 2}, 3, 1);
  std::istringstream csv("0,1\n0.1,0.2\n0.3,0.05\n0.4,0.4\n");
  load_pathloss_matrix(dep, read_pathloss_table(csv));
  CHECK(dep.serving(0) == 1);
  CHECK(dep.serving(1) == 0);
  CHECK(dep.serving(2) == 0);
  CHECK(dep.gain(0, 1).beta == 0.2);

  std::istringstream bad_shape("0,1\n0.1,0.2\n");
  CHECK_THROWS_AS(load_pathloss_matrix(dep, read_pathloss_table(bad_shape)), DimensionMismatch);
  std::istringstream zero("0,1\n0.1,0.2\n0.3,0\n0.4,0.4\n");
  CHECK_THROWS_AS(load_pathloss_matrix(dep, read_pathloss_table(zero)), NonPositiveGain);
  std::istringstream junk("0,1\n0.1,abc\n");
  CHECK_THROWS_AS(read_pathloss_table(junk), ParseError);
}

TEST_CASE("numerology selection")
{
  const auto n = select_numerology(0.2e-6, 10e-3, 10e-3);
  CHECK(n.cp == CyclicPrefix::Normal);
  CHECK(n.filter == FilterClass::LowOOBE);
  CHECK(n.total_overhead() == doctest::Approx(0.0825));
  CHECK(n.cp_length_s() >= 0.2e-6);

  const auto wide = select_numerology(10e-6, 10e-3, 10e-3);
  CHECK(wide.subcarrier_spacing_hz == 15e3);
  CHECK(wide.cp == CyclicPrefix::Extended);
  CHECK(wide.cp_length_s() == doctest::Approx(16.67e-6).epsilon(1e-3));

  CHECK_THROWS_AS(select_numerology(100e-6, 10e-3, 10e-3), NoFeasibleNumerology);
  CHECK(numerology_catalog().size() == 16);

  for (const auto& c : numerology_catalog())
    if (numerology_feasible(c, 0.2e-6, 10e-3, 10e-3))
      CHECK(n.total_overhead() <= c.total_overhead() + 1e-12);
}

TEST_CASE("numerology gain arithmetic")
{
  const UserPopulationMix single[] = {{1.0, 0.3e-6}};
  CHECK(numerology_gain(single, 10e-3, 2e-3, 0.25) == doctest::Approx((1 - 0.0625 - 0.02) / 0.75));
  const UserPopulationMix mix[] = {{0.8, 0.3e-6}, {0.2, 5e-6}};
  CHECK(numerology_gain(mix, 10e-3, 2e-3, 0.25) >= 1.15);
}
