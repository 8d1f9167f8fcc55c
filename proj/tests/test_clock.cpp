#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "slora/clock.hpp"
#include "slora/errors.hpp"
#include "slora/rng.hpp"

using namespace slora;

TEST_CASE("drift accumulation bound") {
    CHECK(max_drift_between_syncs_us(80.0, 2400.0) == 192000);
    CHECK(max_drift_between_syncs_us(80.0, 4800.0) == 384000);
    CHECK(max_drift_between_syncs_us(-80.0, 2400.0) == 192000);
    CHECK(max_drift_between_syncs_us(20.0, 0.0) == 0);
    CHECK_THROWS_AS(max_drift_between_syncs_us(80.0, -1.0), NegativeElapsedError);
}

TEST_CASE("clock reading is linear in elapsed time") {
    VirtualClock c;
    c.drift_ppm = 50.0;
    c.offset_us = 1000;
    c.last_sync_true_us = 0;
    CHECK(c.read(0) == 1000);
    CHECK(c.read(1'000'000) == 1'001'050);
    CHECK(c.error_at(2'000'000) == 1100);
    CHECK_THROWS_AS(c.read(-1), TimeReversalError);
}

TEST_CASE("true_time_for_local inverts read") {
    VirtualClock c;
    c.drift_ppm = -37.5;
    c.offset_us = -123456;
    c.last_sync_true_us = 777'000'000;
    for (std::int64_t t : {777'000'000LL, 777'000'001LL, 800'000'000LL, 3'600'000'000LL}) {
        const std::int64_t local = c.read(t);
        CHECK(std::abs(c.true_time_for_local(local) - t) <= 1); // one rounding step
    }
}

TEST_CASE("synchronize applies the exchange correction") {
    VirtualClock c;
    c.drift_ppm = 80.0;
    c.offset_us = 150'000;
    c.last_sync_true_us = 0;

    // uplink ends, gateway stamps it, ack returns 1.0618 s later
    const std::int64_t true_tx_end = 10'000'000;
    const std::int64_t tx_end_local = c.read(true_tx_end);
    const std::int64_t true_ack_rx = true_tx_end + 1'061'800;
    const std::int64_t ack_rx_local = c.read(true_ack_rx);
    const std::int64_t gw_ts = true_tx_end + 3450; // stamped 3.45 ms late

    c.synchronize(true_ack_rx, tx_end_local, ack_rx_local, gw_ts);
    // residual error: gateway latency plus the drift over the exchange span
    const std::int64_t residual = c.error_at(true_ack_rx);
    CHECK(residual >= 3450);
    CHECK(residual <= 3450 + 100); // 80 ppm over ~1.06 s is ~85 us
    CHECK(c.last_sync_true_us == true_ack_rx);

    CHECK_THROWS_AS(c.synchronize(true_ack_rx + 1, 100, 50, 0), NegativeElapsedError);
}

TEST_CASE("perfect gateway and zero drift yield zero error") {
    VirtualClock c;
    c.drift_ppm = 0.0;
    c.offset_us = 5'000'000; // grossly wrong at boot
    const std::int64_t tx_end_local = c.read(1'000'000);
    const std::int64_t ack_rx_local = c.read(2'061'800);
    c.synchronize(2'061'800, tx_end_local, ack_rx_local, 1'000'000);
    CHECK(c.error_at(2'061'800) == 0);
    CHECK(c.error_at(9'999'999) == 0);
}

TEST_CASE("nearest-rank percentiles") {
    std::vector<SyncSample> s;
    for (std::int64_t e : {72, 8296, 3310}) // ms values 0.072, 8.296, 3.310
        s.push_back({0, 0, e});
    const SyncErrorStats st = sync_error_stats(s);
    CHECK(st.count == 3);
    CHECK(st.min_ms == doctest::Approx(0.072));
    CHECK(st.max_ms == doctest::Approx(8.296));
    CHECK(st.mean_ms == doctest::Approx((0.072 + 8.296 + 3.310) / 3.0));
    CHECK(st.p25_ms == doctest::Approx(0.072));   // rank ceil(0.75)=1
    CHECK(st.median_ms == doctest::Approx(3.310)); // rank ceil(1.5)=2
    CHECK(st.p75_ms == doctest::Approx(8.296));   // rank ceil(2.25)=3
    CHECK(sync_error_stats({{0, 0, -500}}).min_ms == doctest::Approx(0.5)); // |error|

    CHECK_THROWS_AS(sync_error_stats({}), EmptySamplesError);
}

TEST_CASE("jitter calibration under light load") {
    GatewayTimestamper gw; // defaults
    Rng rng(42);
    const int n = 100000;
    double sum = 0, peak = 0;
    for (int i = 0; i < n; ++i) {
        const std::int64_t t = static_cast<std::int64_t>(i) * 15'000'000;
        gw.note_uplink(1, t);
        const double ms = static_cast<double>(gw.sample(t, rng) - t) / 1000.0;
        CHECK(ms >= 0.0);
        sum += ms;
        peak = std::max(peak, ms);
    }
    // single node: lognormal base only, mean pinned near base_mean_ms
    CHECK(sum / n == doctest::Approx(3.45).epsilon(0.05));
    CHECK(peak < 40.0);
    CHECK(peak > 10.0); // the tail must actually reach out
}

TEST_CASE("load window counts distinct recent nodes") {
    GatewayTimestamper gw;
    gw.note_uplink(1, 0);
    gw.note_uplink(2, 1'000'000);
    gw.note_uplink(2, 2'000'000);
    CHECK(gw.current_load(2'000'000) == 2);
    // node 1 falls out of the 120 s window, node 2 stays
    CHECK(gw.current_load(121'500'000) == 1);
    CHECK(gw.current_load(200'000'000'000) == 0);
}

TEST_CASE("busy extra grows the tail with peers") {
    JitterModel m;
    GatewayTimestamper gw(m);
    Rng rng(7);
    // 23 peers in the window
    for (int node = 1; node <= 24; ++node)
        gw.note_uplink(node, 1'000'000 * node);
    const std::int64_t at = 30'000'000;
    int late50 = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i)
        if (gw.sample(at, rng) - at > 50'000) ++late50;
    const double frac = static_cast<double>(late50) / n;
    // mixture: ~23% of samples draw a uniform extra up to ~103 ms
    CHECK(frac > 0.05);
    CHECK(frac < 0.25);

    JitterModel off;
    off.enabled = false;
    GatewayTimestamper exact(off);
    CHECK(exact.sample(at, rng) == at);
}
