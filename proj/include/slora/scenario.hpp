#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "slora/airtime.hpp"
#include "slora/channel.hpp"
#include "slora/clock.hpp"
#include "slora/mac.hpp"

namespace slora {

// Full description of one simulation run. Parsed from sectioned key=value
// text; every field has a default, unknown keys are rejected.
struct Scenario {
    // [run]
    std::string name = "run";
    double duration_s = 3600.0;
    std::uint64_t seed = 1;

    // [radio] shared modulation for uplink and ack
    RadioConfig radio;

    // [uplink]
    int uplink_payload_bytes = 200;
    bool uplink_crc_on = false;
    std::int64_t toa_uplink_override_us = 0; // 0: computed from the frame

    // [ack]
    int ack_payload_bytes = 8;
    bool ack_crc_on = false;
    std::int64_t toa_ack_override_us = 0;    // 0: computed from the frame

    // [link]
    double rx1_delay_s = 1.0;
    double ack_timeout_margin_s = 0.1;       // timeout = rx1 + ack airtime + margin

    // [channel]
    int forced_channel = 6;
    bool orthogonal_sf = true;
    bool gateway_half_duplex = true;
    CollisionMode collision_mode = CollisionMode::Exact;
    std::int64_t grid_step_us = 1000;

    // [traffic]
    int n_nodes = 24;
    MacMode mode = MacMode::Slotted;
    double tx_period_s = 13.0;               // mean gap, resolution to next request
    int max_retries = 40;
    int backoff_nslots = 10;
    double pure_backoff_min_s = 0.0;
    double pure_backoff_max_s = 0.0;         // 0,0: backoff_nslots * slot
    std::vector<std::pair<int, std::int64_t>> scripted_requests_us; // replaces generator

    // [slot]
    std::int64_t slot_t_r_us = 0;            // 0: exchange span lower bound
    std::int64_t slot_t_b_us = 385'000;

    // [clock]
    double drift_ppm_min = 20.0;
    double drift_ppm_max = 80.0;
    bool drift_random_sign = true;
    std::int64_t initial_offset_max_us = 0;  // first offset uniform in +-max
    double reboot_rate_per_s = 0.0;
    double reboot_offset_min_s = 0.5;        // offset magnitude after a reboot
    double reboot_offset_max_s = 30.0;

    // [gateway]
    JitterModel jitter;
    std::int64_t rx_window_open_error_us = 20; // half-width of rx timestamp slop

    // resolved quantities
    FrameSpec uplink_frame() const;
    FrameSpec ack_frame() const;
    std::int64_t rx1_delay_us() const;
    std::int64_t toa_uplink_us() const;      // override or computed
    std::int64_t toa_ack_us() const;
    SlotGeometry slot_geometry() const;      // resolves t_r = 0 to the span
    std::int64_t ack_timeout_us() const;
    std::int64_t duration_us() const;

    // full consistency check; throws ConfigError
    void validate_all() const;
};

// Parse sectioned key=value text. '#' and ';' start comments. Unknown
// sections or keys and malformed values raise ConfigError with a line number.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);

// Apply one "section.key" override with an unparsed value; same validation
// as the file parser.
void apply_override(Scenario& sc, const std::string& dotted_key, const std::string& value);

} // namespace slora
