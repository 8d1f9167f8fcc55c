#include "slora/airtime.hpp"

#include <string>

#include "slora/errors.hpp"

namespace slora {

namespace {

// ceil(a / b) for b > 0 without floating point
std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    return a / b + (a % b > 0 ? 1 : 0);
}

// round(num / den) half-up for num >= 0, den > 0
std::int64_t round_half_up(__int128 num, __int128 den) {
    return static_cast<std::int64_t>((num + den / 2) / den);
}

} // namespace

void validate(const RadioConfig& cfg) {
    if (cfg.sf < 6 || cfg.sf > 12)
        throw ConfigError("sf must be in [6, 12], got " + std::to_string(cfg.sf));
    if (cfg.bw_hz <= 0)
        throw ConfigError("bw_hz must be positive, got " + std::to_string(cfg.bw_hz));
    if (cfg.cr < 1 || cfg.cr > 4)
        throw ConfigError("cr must be in [1, 4], got " + std::to_string(cfg.cr));
    if (cfg.preamble_symbols < 1)
        throw ConfigError("preamble_symbols must be >= 1, got " +
                          std::to_string(cfg.preamble_symbols));
}

void validate(const FrameSpec& frame) {
    validate(frame.radio);
    if (frame.payload_bytes < 1 || frame.payload_bytes > 255)
        throw ConfigError("payload_bytes must be in [1, 255], got " +
                          std::to_string(frame.payload_bytes));
}

int de_bit(const RadioConfig& cfg) {
    switch (cfg.low_dr) {
    case LowDrOptimize::On: return 1;
    case LowDrOptimize::Off: return 0;
    case LowDrOptimize::Auto: break;
    }
    return cfg.sf >= 11 ? 1 : 0;  // long symbols need the drift guard
}

int payload_symbol_count(int sf, int cr, int payload_bytes, int crc_on, int de) {
    if (sf - 2 * de <= 0)
        throw DegenerateConfigError("sf - 2*de must be positive (sf=" + std::to_string(sf) +
                                    ", de=" + std::to_string(de) + ")");
    const std::int64_t num = 28 + 8 * static_cast<std::int64_t>(payload_bytes) + 16 * crc_on -
                             4 * static_cast<std::int64_t>(sf);
    const std::int64_t den = 4 * static_cast<std::int64_t>(sf - 2 * de);
    const std::int64_t blocks = ceil_div(num, den);
    std::int64_t n = blocks * (cr + 4);
    if (n < 0) n = 0;
    return static_cast<int>(8 + n);
}

int payload_symbols(const FrameSpec& frame) {
    validate(frame);
    return payload_symbol_count(frame.radio.sf, frame.radio.cr, frame.payload_bytes,
                                frame.crc_on ? 1 : 0, de_bit(frame.radio));
}

double symbol_time_s(const RadioConfig& cfg) {
    validate(cfg);
    return static_cast<double>(static_cast<std::int64_t>(1) << cfg.sf) /
           static_cast<double>(cfg.bw_hz);
}

double preamble_time_s(const RadioConfig& cfg) {
    return symbol_time_s(cfg) * (cfg.preamble_symbols + 4.25);
}

double time_on_air_s(const FrameSpec& frame) {
    return preamble_time_s(frame.radio) + symbol_time_s(frame.radio) * payload_symbols(frame);
}

std::int64_t symbol_time_us(const RadioConfig& cfg) {
    validate(cfg);
    const __int128 num = static_cast<__int128>(static_cast<std::int64_t>(1) << cfg.sf) * 1000000;
    return round_half_up(num, cfg.bw_hz);
}

std::int64_t preamble_time_us(const RadioConfig& cfg) {
    validate(cfg);
    // (preamble_symbols + 4.25) symbols = (4*preamble_symbols + 17) quarter symbols
    const __int128 qsyms = 4 * static_cast<__int128>(cfg.preamble_symbols) + 17;
    const __int128 num = qsyms * (static_cast<std::int64_t>(1) << cfg.sf) * 1000000;
    return round_half_up(num, static_cast<__int128>(cfg.bw_hz) * 4);
}

std::int64_t time_on_air_us(const FrameSpec& frame) {
    validate(frame);
    const int n_phy = payload_symbols(frame);
    const __int128 qsyms =
        4 * static_cast<__int128>(frame.radio.preamble_symbols) + 17 + 4 * static_cast<__int128>(n_phy);
    const __int128 num = qsyms * (static_cast<std::int64_t>(1) << frame.radio.sf) * 1000000;
    return round_half_up(num, static_cast<__int128>(frame.radio.bw_hz) * 4);
}

double data_rate_bps(const RadioConfig& cfg) {
    validate(cfg);
    const double chips = static_cast<double>(static_cast<std::int64_t>(1) << cfg.sf);
    return cfg.sf * (static_cast<double>(cfg.bw_hz) / chips) * 4.0 / (cfg.cr + 4.0);
}

double equivalent_bit_rate_bps(const RadioConfig& cfg) {
    validate(cfg);
    const double chips = static_cast<double>(static_cast<std::int64_t>(1) << cfg.sf);
    return cfg.sf * (static_cast<double>(cfg.bw_hz) / chips) * cfg.cr;
}

} // namespace slora
