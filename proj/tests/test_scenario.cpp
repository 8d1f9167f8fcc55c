#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "slora/errors.hpp"
#include "slora/scenario.hpp"

using namespace slora;

TEST_CASE("empty text yields the documented defaults") {
    const Scenario sc = parse_scenario("");
    CHECK(sc.name == "run");
    CHECK(sc.duration_s == 3600.0);
    CHECK(sc.seed == 1);
    CHECK(sc.radio.sf == 8);
    CHECK(sc.radio.bw_hz == 125000);
    CHECK(sc.uplink_payload_bytes == 200);
    CHECK(sc.ack_payload_bytes == 8);
    CHECK(sc.rx1_delay_s == 1.0);
    CHECK(sc.n_nodes == 24);
    CHECK(sc.mode == MacMode::Slotted);
    CHECK(sc.slot_t_b_us == 385'000);
    CHECK(sc.drift_ppm_min == 20.0);
    CHECK(sc.drift_ppm_max == 80.0);
    CHECK(sc.jitter.enabled);
    CHECK_NOTHROW(sc.validate_all());
}

TEST_CASE("resolved quantities") {
    const Scenario sc = parse_scenario("");
    CHECK(sc.toa_uplink_us() == 553472);
    CHECK(sc.toa_ack_us() == 61952);
    CHECK(sc.rx1_delay_us() == 1'000'000);
    // t_r left at auto resolves to the exchange span
    CHECK(sc.slot_geometry().t_r_us == 1'615'424);
    CHECK(sc.slot_geometry().slot_us() == 2'000'424);
    CHECK(sc.ack_timeout_us() == 1'000'000 + 61952 + 100'000);
    CHECK(sc.duration_us() == 3'600'000'000LL);
}

TEST_CASE("sectioned keys land in their fields") {
    const Scenario sc = parse_scenario(R"(
[run]
name = bench
duration_s = 120.5
seed = 99

[radio]
sf = 12
cr = 4

[uplink]
payload_bytes = 25
crc_on = true
toa_override_us = 1253000

[ack]
toa_override_us = 530000

[traffic]
n_nodes = 100
mode = pure_confirmed
tx_period_s = 500 ; mean gap
max_retries = 0

[channel]
collision_mode = grid
grid_step_us = 1000
)");
    CHECK(sc.name == "bench");
    CHECK(sc.duration_s == 120.5);
    CHECK(sc.seed == 99);
    CHECK(sc.radio.sf == 12);
    CHECK(sc.uplink_crc_on);
    CHECK(sc.toa_uplink_us() == 1'253'000); // override wins over the computed value
    CHECK(sc.toa_ack_us() == 530'000);
    CHECK(sc.mode == MacMode::PureConfirmed);
    CHECK(sc.max_retries == 0);
    CHECK(sc.collision_mode == CollisionMode::Grid);
    CHECK_NOTHROW(sc.validate_all());
}

TEST_CASE("parse errors carry the line number") {
    CHECK_THROWS_WITH_AS(parse_scenario("[run]\nbogus_key = 1\n"),
                         "line 2: unknown key 'bogus_key' in section [run]", ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario("[nope]\n"), "line 1: unknown section [nope]",
                         ConfigError);
    CHECK_THROWS_AS(parse_scenario("x = 1\n"), ConfigError);           // key outside section
    CHECK_THROWS_AS(parse_scenario("[run]\nseed\n"), ConfigError);     // no '='
    CHECK_THROWS_AS(parse_scenario("[run]\nseed = ham\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("[run\n"), ConfigError);            // unterminated header
    CHECK_THROWS_AS(parse_scenario("[radio]\nsf = 15\n"), ConfigError);
}

TEST_CASE("comments and blank lines are ignored") {
    const Scenario sc = parse_scenario(R"(
# full line comment
[run]
seed = 7   # trailing comment

; alternate comment marker
name = annotated
)");
    CHECK(sc.seed == 7);
    CHECK(sc.name == "annotated");
}

TEST_CASE("scripted requests") {
    const Scenario sc = parse_scenario(R"(
[traffic]
n_nodes = 3
scripted_requests = 0:0.5, 1:0.75, 0:2.25
)");
    REQUIRE(sc.scripted_requests_us.size() == 3);
    CHECK(sc.scripted_requests_us[0] == std::pair<int, std::int64_t>{0, 500'000});
    CHECK(sc.scripted_requests_us[1] == std::pair<int, std::int64_t>{1, 750'000});
    CHECK(sc.scripted_requests_us[2] == std::pair<int, std::int64_t>{0, 2'250'000});

    CHECK_THROWS_AS(parse_scenario("[traffic]\nscripted_requests = 5\n"), ConfigError);
    // node index outside n_nodes is a consistency violation
    const Scenario bad = parse_scenario("[traffic]\nn_nodes = 2\nscripted_requests = 7:1.0\n");
    CHECK_THROWS_AS(bad.validate_all(), ConfigError);
}

TEST_CASE("consistency checks") {
    Scenario sc = parse_scenario("");
    sc.duration_s = 0;
    CHECK_THROWS_AS(sc.validate_all(), ConfigError);

    sc = parse_scenario("");
    sc.n_nodes = 0;
    CHECK_THROWS_AS(sc.validate_all(), ConfigError);

    sc = parse_scenario("");
    sc.drift_ppm_min = 50;
    sc.drift_ppm_max = 20; // inverted range
    CHECK_THROWS_AS(sc.validate_all(), ConfigError);

    // a slot too short for the exchange it must carry
    CHECK_THROWS_AS(parse_scenario("[slot]\nt_r_s = 1.0\n").validate_all(), ConfigError);
    CHECK_NOTHROW(parse_scenario("[slot]\nt_r_s = 1.615424\n").validate_all());
    CHECK_NOTHROW(parse_scenario("[slot]\nt_r_s = auto\n").validate_all());

    sc = parse_scenario("");
    sc.tx_period_s = -1;
    CHECK_THROWS_AS(sc.validate_all(), ConfigError);
}

TEST_CASE("overrides reuse the file grammar") {
    Scenario sc = parse_scenario("");
    apply_override(sc, "traffic.n_nodes", "50");
    CHECK(sc.n_nodes == 50);
    apply_override(sc, "traffic.tx_period_s", "2.5");
    CHECK(sc.tx_period_s == 2.5);
    apply_override(sc, "run.seed", "12345");
    CHECK(sc.seed == 12345);
    apply_override(sc, "gateway.jitter_enabled", "false");
    CHECK_FALSE(sc.jitter.enabled);

    CHECK_THROWS_AS(apply_override(sc, "traffic.nope", "1"), ConfigError);
    CHECK_THROWS_AS(apply_override(sc, "no_dot", "1"), ConfigError);
    CHECK_THROWS_AS(apply_override(sc, "radio.sf", "banana"), ConfigError);
}
