#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "exlimit/normal.hpp"
#include "oracles.hpp"

using exlimit::std_normal_cdf;
using exlimit::std_normal_quantile;

namespace {

// mpmath, 50 significant digits, frozen before the implementation was
// written. These pin the test oracle itself.
struct Pin {
  long double x;
  long double phi;
};
constexpr Pin kOraclePins[] = {
    {0.0L, 0.5L},
    {0.1L, 0.5398278372770289814654L},
    {0.3L, 0.6179114221889526373065L},
    {-0.5L, 0.3085375387259868963623L},
    {0.7071067811865476L, 0.7602499389065232923298L},
    {1.0L, 0.8413447460685429485852L},
    {1.5L, 0.9331927987311419339955L},
    {-1.959963985L, 0.02499999997311843770082L},
    {2.5L, 0.993790334674223864833L},
    {-3.0L, 0.001349898031630094526652L},
    {4.0L, 0.9999683287581668800787L},
    {-5.0L, 2.866515718791939116738e-7L},
    {6.5L, 0.9999999999598399941614L},
    {-8.0L, 6.220960574271784123516e-16L},
    {8.0L, 0.9999999999999993779039L},
    {-12.0L, 1.776482112077678997696e-33L},
    {-20.5L, 1.076467325879096033531e-93L},
    {-37.5L, 4.605353009581954843828e-308L},
};

}  // namespace

TEST_CASE("series/continued-fraction oracle matches mpmath pins") {
  for (const auto& pin : kOraclePins) {
    const long double got = oracles::std_normal_cdf(pin.x);
    if (std::abs(pin.x) <= 3.25L) {
      // series range: absolute error at long double roundoff
      REQUIRE(std::abs(got - pin.phi) < 1e-18L);
    } else {
      // tail range: the continued fraction is relatively accurate
      REQUIRE(std::abs(got - pin.phi) / std::abs(pin.phi) < 5e-18L);
    }
  }
}

TEST_CASE("std_normal_cdf frozen values") {
  CHECK(std_normal_cdf(0.0).value() == 0.5);
  CHECK(std::abs(std_normal_cdf(1.959963985).value() - 0.975) <= 1e-9);
  CHECK(std::abs(std_normal_cdf(-8.0).value() - 6.220960574271784e-16) <= 1e-17);
  CHECK(std::abs(std_normal_cdf(1.0).value() - 0.8413447460685429) <= 1e-15);
}

TEST_CASE("std_normal_cdf within 1e-12 of the oracle across [-38,38]") {
  // dense over [-8,8] where the acceptance criterion checks, coarser out
  // to the clamp boundary
  for (int i = 0; i <= 1000; ++i) {
    const double x = -8.0 + i * (16.0 / 1000.0);
    const double got = std_normal_cdf(x).value();
    const long double want = oracles::std_normal_cdf(x);
    REQUIRE(std::abs(static_cast<long double>(got) - want) <= 1e-12L);
  }
  for (int i = 0; i <= 400; ++i) {
    const double x = -38.0 + i * (76.0 / 400.0);
    const double got = std_normal_cdf(x).value();
    const long double want = oracles::std_normal_cdf(x);
    REQUIRE(std::abs(static_cast<long double>(got) - want) <= 1e-12L);
  }
}

TEST_CASE("std_normal_cdf clamps outside [-38,38] and rejects non-finite") {
  CHECK(std_normal_cdf(-38.5).value() == 0.0);
  CHECK(std_normal_cdf(50.0).value() == 1.0);
  CHECK_THROWS_AS(std_normal_cdf(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  CHECK_THROWS_AS(std_normal_cdf(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("std_normal_cdf is nondecreasing") {
  double prev = -0.1;
  for (int i = 0; i <= 2000; ++i) {
    const double x = -40.0 + i * (80.0 / 2000.0);
    const double value = std_normal_cdf(x).value();
    REQUIRE(value >= prev);
    prev = value;
  }
}

TEST_CASE("std_normal_quantile inverts the CDF") {
  CHECK(std::abs(std_normal_quantile(0.975) - 1.959963984540054) <= 1e-9);
  CHECK(std_normal_quantile(0.5) == 0.0);
  for (int i = 1; i < 400; ++i) {
    const double p = i / 400.0;
    const double z = std_normal_quantile(p);
    REQUIRE(std::abs(std_normal_cdf(z).value() - p) <= 1e-13);
  }
  // deep tails: relative round trip through the oracle
  for (double p : {1e-12, 1e-9, 1e-6, 1.0 - 1e-9, 1.0 - 1e-12}) {
    const double z = std_normal_quantile(p);
    const long double round_trip = oracles::std_normal_cdf(z);
    const long double q = std::min(static_cast<long double>(p),
                                   1.0L - static_cast<long double>(p));
    const long double got = z > 0 ? 1.0L - round_trip : round_trip;
    REQUIRE(std::abs(got - q) / q < 1e-12L);
  }
  CHECK_THROWS_AS(std_normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(1.0), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(-0.5), std::domain_error);
}
