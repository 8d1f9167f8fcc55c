#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "slora/analytic.hpp"
#include "slora/errors.hpp"

using namespace slora;

TEST_CASE("peak values equal the closed forms") {
    CHECK(pure_aloha_throughput(0.5) == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(slotted_aloha_throughput(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    const double k = 2.22;
    CHECK(confirmed_aloha_throughput(1.0 / (2.0 * k), k) ==
          doctest::Approx(1.0 / (2.0 * k * std::exp(1.0))).epsilon(1e-12));
    CHECK(slotted_lorawan_max_throughput(k) ==
          doctest::Approx(std::exp(-1.0) / k).epsilon(1e-12));
}

TEST_CASE("spot values") {
    // numbers usually quoted rounded: 0.18394, 0.36788, 0.0543
    CHECK(pure_aloha_throughput(0.5) == doctest::Approx(0.183939720586).epsilon(1e-9));
    CHECK(slotted_aloha_throughput(1.0) == doctest::Approx(0.367879441171).epsilon(1e-9));
    CHECK(confirmed_aloha_throughput(0.5, 2.22) ==
          doctest::Approx(0.5 * std::exp(-2.22)).epsilon(1e-12));
    CHECK(slotted_lorawan_throughput(1.0, 2.22) ==
          doctest::Approx(std::exp(-1.0) / 2.22).epsilon(1e-12));
    CHECK(pure_aloha_throughput(0.0) == 0.0);
    CHECK(slotted_aloha_throughput(0.0) == 0.0);
}

TEST_CASE("peak locations dominate their neighborhoods") {
    const double k = 2.221069433359936;
    const double g_star = 1.0 / (2.0 * k);
    for (double d : {-0.05, -0.01, 0.01, 0.05}) {
        CHECK(pure_aloha_throughput(0.5) > pure_aloha_throughput(0.5 + d));
        CHECK(slotted_aloha_throughput(1.0) > slotted_aloha_throughput(1.0 + d));
        CHECK(confirmed_aloha_throughput(g_star, k) >
              confirmed_aloha_throughput(g_star + d, k));
        CHECK(slotted_lorawan_throughput(1.0, k) >
              slotted_lorawan_throughput(1.0 + d, k));
    }
    CHECK(slotted_lorawan_max_throughput(k) ==
          doctest::Approx(slotted_lorawan_throughput(1.0, k)).epsilon(1e-12));
}

TEST_CASE("unit overhead collapses to the plain laws") {
    for (double g : {0.0, 0.1, 0.5, 1.3, 2.7}) {
        CHECK(confirmed_aloha_throughput(g, 1.0) ==
              doctest::Approx(pure_aloha_throughput(g)).epsilon(1e-12));
        CHECK(slotted_lorawan_throughput(g, 1.0) ==
              doctest::Approx(slotted_aloha_throughput(g)).epsilon(1e-12));
    }
}

TEST_CASE("overhead factor") {
    // 553.47 ms uplink, 77.8 ms ack, 1 s receive delay
    CHECK(overhead_factor(0.55347, 0.0778, 1.0) ==
          doctest::Approx(2.9473503532).epsilon(1e-9));
    // 1.253 s uplink, 530 ms ack, 1 s receive delay
    CHECK(overhead_factor(1.253, 0.530, 1.0) ==
          doctest::Approx(2783.0 / 1253.0).epsilon(1e-12));
    CHECK(overhead_factor(1.0, 0.0, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(pure_aloha_throughput(-0.1), ConfigError);
    CHECK_THROWS_AS(slotted_aloha_throughput(-1e-9), ConfigError);
    CHECK_THROWS_AS(confirmed_aloha_throughput(0.5, 0.99), ConfigError);
    CHECK_THROWS_AS(confirmed_aloha_throughput(-0.5, 2.0), ConfigError);
    CHECK_THROWS_AS(slotted_lorawan_throughput(0.5, 0.0), ConfigError);
    CHECK_THROWS_AS(slotted_lorawan_max_throughput(0.5), ConfigError);
    CHECK_THROWS_AS(overhead_factor(0.0, 0.1, 1.0), ConfigError);
    CHECK_THROWS_AS(overhead_factor(1.0, -0.1, 1.0), ConfigError);
}
