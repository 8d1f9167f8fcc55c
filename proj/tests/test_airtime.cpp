#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>

#include "slora/airtime.hpp"
#include "slora/errors.hpp"
#include "slora/rng.hpp"

using namespace slora;

namespace {

FrameSpec make(int sf, std::int64_t bw, int cr, int pre, int pl, bool crc,
               LowDrOptimize ldo = LowDrOptimize::Auto) {
    FrameSpec f;
    f.radio.sf = sf;
    f.radio.bw_hz = bw;
    f.radio.cr = cr;
    f.radio.preamble_symbols = pre;
    f.radio.low_dr = ldo;
    f.payload_bytes = pl;
    f.crc_on = crc;
    return f;
}

// Independent recomputation on a different integer layout: symbol count by
// linear search instead of ceil division, duration as quarter-symbol
// rational in units of 1/4 us before the final half-up rounding.
std::int64_t oracle_toa_us(const FrameSpec& f) {
    const int de = f.radio.low_dr == LowDrOptimize::On    ? 1
                   : f.radio.low_dr == LowDrOptimize::Off ? 0
                                                          : (f.radio.sf >= 11 ? 1 : 0);
    const std::int64_t num =
        28 + 8 * static_cast<std::int64_t>(f.payload_bytes) + (f.crc_on ? 16 : 0) - 4 * f.radio.sf;
    const std::int64_t den = 4 * (f.radio.sf - 2 * de);
    std::int64_t blocks = 0;
    while (blocks * den < num)
        ++blocks;
    const std::int64_t n_phy = 8 + blocks * (f.radio.cr + 4);
    const __int128 qsyms = 4 * static_cast<__int128>(f.radio.preamble_symbols) + 17 + 4 * n_phy;
    const __int128 numer = qsyms * (static_cast<std::int64_t>(1) << f.radio.sf) * 250000;
    const __int128 denom = f.radio.bw_hz;
    return static_cast<std::int64_t>((2 * numer + denom) / (2 * denom));
}

} // namespace

TEST_CASE("long uplink frame, 200 bytes at sf8") {
    const FrameSpec f = make(8, 125000, 1, 8, 200, false);
    CHECK(symbol_time_us(f.radio) == 2048);
    CHECK(preamble_time_us(f.radio) == 25088);
    CHECK(payload_symbols(f) == 258);
    CHECK(time_on_air_us(f) == 553472);
    CHECK(time_on_air_s(f) == doctest::Approx(0.553472).epsilon(1e-12));
}

TEST_CASE("short frames across spreading factors") {
    CHECK(time_on_air_us(make(8, 125000, 1, 8, 8, false)) == 61952);
    CHECK(time_on_air_us(make(7, 125000, 1, 8, 10, true)) == 41216);
    CHECK(payload_symbols(make(7, 125000, 1, 8, 10, true)) == 28);
    CHECK(time_on_air_us(make(7, 125000, 1, 8, 4, false)) == 30976);
    CHECK(time_on_air_us(make(6, 125000, 4, 8, 25, true)) == 51328);
    CHECK(payload_symbols(make(6, 125000, 4, 8, 25, true)) == 88);
    CHECK(time_on_air_us(make(6, 125000, 4, 8, 8, false)) == 22656);
    CHECK(time_on_air_us(make(12, 125000, 4, 8, 25, true)) == 1974272);
}

TEST_CASE("symbol clamp floors the payload at 8 symbols") {
    // 1 byte at sf12: the block count underflows and clamps to zero
    const FrameSpec f = make(12, 125000, 1, 8, 1, false);
    CHECK(payload_symbols(f) == 8);
    CHECK(time_on_air_us(f) == 663552);
}

TEST_CASE("low data rate optimization switches at sf11") {
    CHECK(payload_symbols(make(10, 125000, 1, 8, 49, false)) == 58);
    // auto enables it for sf11 regardless of bandwidth
    CHECK(payload_symbols(make(11, 250000, 1, 8, 49, false)) == 63);
    CHECK(payload_symbols(make(11, 250000, 1, 8, 49, false, LowDrOptimize::Off)) == 53);
    // forcing it on at sf10 shrinks the block size: 380/32 -> 12 blocks
    CHECK(payload_symbols(make(10, 125000, 1, 8, 49, false, LowDrOptimize::On)) == 68);
}

TEST_CASE("rate figures") {
    RadioConfig sf7{7, 125000, 1, 8, LowDrOptimize::Auto};
    CHECK(data_rate_bps(sf7) == doctest::Approx(5468.75).epsilon(1e-12));
    CHECK(equivalent_bit_rate_bps(sf7) == doctest::Approx(6835.9375).epsilon(1e-12));
    RadioConfig sf12cr4{12, 125000, 4, 8, LowDrOptimize::Auto};
    CHECK(data_rate_bps(sf12cr4) == doctest::Approx(183.10546875).epsilon(1e-12));
    RadioConfig sf12cr1{12, 125000, 1, 8, LowDrOptimize::Auto};
    CHECK(equivalent_bit_rate_bps(sf12cr1) == doctest::Approx(366.2109375).epsilon(1e-12));
    RadioConfig sf8{8, 125000, 1, 8, LowDrOptimize::Auto};
    CHECK(data_rate_bps(sf8) == doctest::Approx(3125.0).epsilon(1e-12));
}

TEST_CASE("scaling laws are exact in integer microseconds") {
    const FrameSpec base = make(8, 125000, 1, 8, 20, true);
    FrameSpec wide = base;
    wide.radio.bw_hz = 250000;
    CHECK(time_on_air_us(base) == 2 * time_on_air_us(wide));

    RadioConfig a{9, 125000, 1, 8, LowDrOptimize::Off};
    RadioConfig b = a;
    b.sf = 10;
    CHECK(symbol_time_us(b) == 2 * symbol_time_us(a));
}

TEST_CASE("airtime never decreases with payload size") {
    for (int sf : {6, 7, 9, 12}) {
        std::int64_t prev = 0;
        for (int pl = 1; pl <= 255; ++pl) {
            const std::int64_t t = time_on_air_us(make(sf, 125000, 2, 8, pl, true));
            CHECK(t >= prev);
            prev = t;
        }
    }
}

TEST_CASE("differential check against the rational oracle") {
    Rng rng(20240817);
    const std::int64_t bws[] = {62500, 125000, 203125, 250000, 500000};
    for (int i = 0; i < 1000; ++i) {
        FrameSpec f;
        f.radio.sf = 6 + static_cast<int>(rng.uniform_int(6));
        f.radio.bw_hz = bws[rng.uniform_int(4)];
        f.radio.cr = 1 + static_cast<int>(rng.uniform_int(3));
        f.radio.preamble_symbols = 1 + static_cast<int>(rng.uniform_int(40));
        f.payload_bytes = 1 + static_cast<int>(rng.uniform_int(254));
        f.crc_on = rng.uniform() < 0.5;
        const int pick = static_cast<int>(rng.uniform_int(2));
        f.radio.low_dr = pick == 0   ? LowDrOptimize::Auto
                         : pick == 1 ? LowDrOptimize::On
                                     : LowDrOptimize::Off;
        CAPTURE(f.radio.sf);
        CAPTURE(f.radio.bw_hz);
        CAPTURE(f.payload_bytes);
        REQUIRE(time_on_air_us(f) == oracle_toa_us(f));
    }
}

TEST_CASE("validation rejects out-of-range parameters") {
    CHECK_THROWS_AS(time_on_air_us(make(5, 125000, 1, 8, 10, false)), ConfigError);
    CHECK_THROWS_AS(time_on_air_us(make(13, 125000, 1, 8, 10, false)), ConfigError);
    CHECK_THROWS_AS(time_on_air_us(make(8, 0, 1, 8, 10, false)), ConfigError);
    CHECK_THROWS_AS(time_on_air_us(make(8, 125000, 0, 8, 10, false)), ConfigError);
    CHECK_THROWS_AS(time_on_air_us(make(8, 125000, 5, 8, 10, false)), ConfigError);
    CHECK_THROWS_AS(time_on_air_us(make(8, 125000, 1, 0, 10, false)), ConfigError);
    CHECK_THROWS_AS(time_on_air_us(make(8, 125000, 1, 8, 0, false)), ConfigError);
    CHECK_THROWS_AS(time_on_air_us(make(8, 125000, 1, 8, 256, false)), ConfigError);
}

TEST_CASE("degenerate symbol divisor") {
    // the low level form accepts any de; sf <= 2*de has no defined block size
    CHECK_THROWS_AS(payload_symbol_count(6, 1, 10, 0, 3), DegenerateConfigError);
    CHECK_NOTHROW(payload_symbol_count(7, 1, 10, 0, 3));
}
