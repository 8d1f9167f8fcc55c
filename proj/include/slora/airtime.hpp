#pragma once

#include <cstdint>

namespace slora {

enum class LowDrOptimize { Auto, On, Off };

// LoRa modulation parameters shared by every frame on a link.
struct RadioConfig {
    int sf = 8;                 // spreading factor, 6..12
    std::int64_t bw_hz = 125000;
    int cr = 1;                 // coding rate index, 1..4 (4/5 .. 4/8)
    int preamble_symbols = 8;   // programmed preamble length, excludes the 4.25 sync tail
    LowDrOptimize low_dr = LowDrOptimize::Auto;
};

// One physical frame: radio parameters plus payload length and CRC presence.
struct FrameSpec {
    RadioConfig radio;
    int payload_bytes = 1;      // 1..255
    bool crc_on = false;        // uplink frames carry a CRC, downlinks do not
};

void validate(const RadioConfig& cfg);
void validate(const FrameSpec& frame);

// 1 when low data rate optimization is active for this config.
int de_bit(const RadioConfig& cfg);

// Symbol count of the PHY payload section (low level form; throws
// DegenerateConfigError when sf <= 2*de).
int payload_symbol_count(int sf, int cr, int payload_bytes, int crc_on, int de);
int payload_symbols(const FrameSpec& frame);

double symbol_time_s(const RadioConfig& cfg);
double preamble_time_s(const RadioConfig& cfg);
double time_on_air_s(const FrameSpec& frame);

// Integer microsecond forms, rounded half-up. The simulator works on these.
std::int64_t symbol_time_us(const RadioConfig& cfg);
std::int64_t preamble_time_us(const RadioConfig& cfg);
std::int64_t time_on_air_us(const FrameSpec& frame);

// Nominal PHY bit rate in bit/s: sf * (bw / 2^sf) * 4 / (cr + 4).
double data_rate_bps(const RadioConfig& cfg);

// Alternative rate figure in bit/s: sf * (bw / 2^sf) * cr. Kept alongside
// data_rate_bps because downstream tables quote both conventions; the two are
// intentionally not interchangeable.
double equivalent_bit_rate_bps(const RadioConfig& cfg);

} // namespace slora
