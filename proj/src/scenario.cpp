#include "slora/scenario.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "slora/errors.hpp"

namespace slora {

FrameSpec Scenario::uplink_frame() const {
    return FrameSpec{radio, uplink_payload_bytes, uplink_crc_on};
}

FrameSpec Scenario::ack_frame() const {
    return FrameSpec{radio, ack_payload_bytes, ack_crc_on};
}

std::int64_t Scenario::rx1_delay_us() const {
    return std::llround(rx1_delay_s * 1e6);
}

std::int64_t Scenario::toa_uplink_us() const {
    if (toa_uplink_override_us > 0) return toa_uplink_override_us;
    return time_on_air_us(uplink_frame());
}

std::int64_t Scenario::toa_ack_us() const {
    if (toa_ack_override_us > 0) return toa_ack_override_us;
    return time_on_air_us(ack_frame());
}

SlotGeometry Scenario::slot_geometry() const {
    SlotGeometry g;
    g.t_b_us = slot_t_b_us;
    g.t_r_us = slot_t_r_us > 0 ? slot_t_r_us
                               : toa_uplink_us() + rx1_delay_us() + toa_ack_us();
    return g;
}

std::int64_t Scenario::ack_timeout_us() const {
    return rx1_delay_us() + toa_ack_us() + std::llround(ack_timeout_margin_s * 1e6);
}

std::int64_t Scenario::duration_us() const {
    return std::llround(duration_s * 1e6);
}

void Scenario::validate_all() const {
    validate(uplink_frame());
    validate(ack_frame());
    if (duration_s <= 0) throw ConfigError("run.duration_s must be positive");
    if (n_nodes < 1) throw ConfigError("traffic.n_nodes must be >= 1");
    if (tx_period_s <= 0) throw ConfigError("traffic.tx_period_s must be positive");
    if (max_retries < 0) throw ConfigError("traffic.max_retries must be >= 0");
    if (backoff_nslots < 0) throw ConfigError("traffic.backoff_nslots must be >= 0");
    if (pure_backoff_min_s < 0 || pure_backoff_max_s < pure_backoff_min_s)
        throw ConfigError("traffic.pure_backoff window is invalid");
    if (rx1_delay_s < 0) throw ConfigError("link.rx1_delay_s must be >= 0");
    if (ack_timeout_margin_s < 0) throw ConfigError("link.ack_timeout_margin_s must be >= 0");
    if (grid_step_us <= 0) throw ConfigError("channel.grid_step_us must be positive");
    if (slot_t_b_us < 0) throw ConfigError("slot.t_b_s must be >= 0");
    if (drift_ppm_min < 0 || drift_ppm_max < drift_ppm_min)
        throw ConfigError("clock.drift_ppm range is invalid");
    if (reboot_rate_per_s < 0) throw ConfigError("clock.reboot_rate_per_s must be >= 0");
    if (reboot_offset_min_s < 0 || reboot_offset_max_s < reboot_offset_min_s)
        throw ConfigError("clock.reboot_offset range is invalid");
    if (initial_offset_max_us < 0) throw ConfigError("clock.initial_offset_max_us must be >= 0");
    if (jitter.base_mean_ms <= 0) throw ConfigError("gateway.jitter_base_mean_ms must be > 0");
    if (jitter.sigma_log <= 0) throw ConfigError("gateway.jitter_sigma_log must be > 0");
    if (jitter.shift_ms < 0) throw ConfigError("gateway.jitter_shift_ms must be >= 0");
    if (jitter.busy_prob_per_peer < 0 || jitter.busy_prob_cap < 0 ||
        jitter.busy_prob_cap > 1 || jitter.busy_extra_ms_per_peer < 0 ||
        jitter.busy_extra_cap_ms < 0 || jitter.load_window_us <= 0)
        throw ConfigError("gateway busy-load parameters are invalid");
    if (rx_window_open_error_us < 0)
        throw ConfigError("gateway.rx_window_open_error_us must be >= 0");
    for (const auto& [node, t] : scripted_requests_us) {
        if (node < 0 || node >= n_nodes)
            throw ConfigError("scripted request for unknown node " + std::to_string(node));
        if (t < 0) throw ConfigError("scripted request time must be >= 0");
    }
    if (mode == MacMode::Slotted) {
        // slot must hold the full exchange
        validate_slot_geometry(slot_geometry(), uplink_frame(), ack_frame(), rx1_delay_us());
        if (toa_uplink_override_us > 0 || toa_ack_override_us > 0) {
            const SlotGeometry g = slot_geometry();
            if (g.t_r_us < toa_uplink_us() + rx1_delay_us() + toa_ack_us())
                throw ConfigError("slot.t_r_s cannot hold the overridden exchange span");
        }
    }
}

namespace {

struct Cursor {
    int line = 0;
    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("line " + std::to_string(line) + ": " + msg);
    }
};

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::int64_t parse_i64(const std::string& v, const Cursor& c) {
    try {
        std::size_t pos = 0;
        const long long r = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        c.fail("expected an integer, got '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& v, const Cursor& c) {
    try {
        std::size_t pos = 0;
        const unsigned long long r = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        c.fail("expected an unsigned integer, got '" + v + "'");
    }
}

double parse_f64(const std::string& v, const Cursor& c) {
    try {
        std::size_t pos = 0;
        const double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        c.fail("expected a number, got '" + v + "'");
    }
}

bool parse_bool(const std::string& v, const Cursor& c) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    c.fail("expected a boolean, got '" + v + "'");
}

std::vector<std::pair<int, std::int64_t>> parse_scripted(const std::string& v, const Cursor& c) {
    // "node:time_s, node:time_s, ..."
    std::vector<std::pair<int, std::int64_t>> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) c.fail("scripted entry '" + item + "' needs node:time_s");
        const auto node = parse_i64(trim(item.substr(0, colon)), c);
        const auto t = parse_f64(trim(item.substr(colon + 1)), c);
        out.emplace_back(static_cast<int>(node), std::llround(t * 1e6));
    }
    return out;
}

// One place maps (section, key, raw value) onto Scenario fields; the file
// parser and CLI overrides share it.
void apply_kv(Scenario& sc, const std::string& section, const std::string& key,
              const std::string& value, const Cursor& c) {
    const std::string k = section + "." + key;

    if (k == "run.name") { sc.name = value; return; }
    if (k == "run.duration_s") { sc.duration_s = parse_f64(value, c); return; }
    if (k == "run.seed") { sc.seed = parse_u64(value, c); return; }

    if (k == "radio.sf") { sc.radio.sf = static_cast<int>(parse_i64(value, c)); return; }
    if (k == "radio.bw_hz") { sc.radio.bw_hz = parse_i64(value, c); return; }
    if (k == "radio.cr") { sc.radio.cr = static_cast<int>(parse_i64(value, c)); return; }
    if (k == "radio.preamble_symbols") {
        sc.radio.preamble_symbols = static_cast<int>(parse_i64(value, c));
        return;
    }
    if (k == "radio.low_dr_optimize") {
        if (value == "auto") sc.radio.low_dr = LowDrOptimize::Auto;
        else if (value == "on") sc.radio.low_dr = LowDrOptimize::On;
        else if (value == "off") sc.radio.low_dr = LowDrOptimize::Off;
        else c.fail("low_dr_optimize must be auto|on|off");
        return;
    }

    if (k == "uplink.payload_bytes") {
        sc.uplink_payload_bytes = static_cast<int>(parse_i64(value, c));
        return;
    }
    if (k == "uplink.crc_on") { sc.uplink_crc_on = parse_bool(value, c); return; }
    if (k == "uplink.toa_override_us") { sc.toa_uplink_override_us = parse_i64(value, c); return; }

    if (k == "ack.payload_bytes") {
        sc.ack_payload_bytes = static_cast<int>(parse_i64(value, c));
        return;
    }
    if (k == "ack.crc_on") { sc.ack_crc_on = parse_bool(value, c); return; }
    if (k == "ack.toa_override_us") { sc.toa_ack_override_us = parse_i64(value, c); return; }

    if (k == "link.rx1_delay_s") { sc.rx1_delay_s = parse_f64(value, c); return; }
    if (k == "link.ack_timeout_margin_s") {
        sc.ack_timeout_margin_s = parse_f64(value, c);
        return;
    }

    if (k == "channel.forced_channel") {
        sc.forced_channel = static_cast<int>(parse_i64(value, c));
        return;
    }
    if (k == "channel.orthogonal_sf") { sc.orthogonal_sf = parse_bool(value, c); return; }
    if (k == "channel.gateway_half_duplex") {
        sc.gateway_half_duplex = parse_bool(value, c);
        return;
    }
    if (k == "channel.collision_mode") {
        if (value == "exact") sc.collision_mode = CollisionMode::Exact;
        else if (value == "grid") sc.collision_mode = CollisionMode::Grid;
        else c.fail("collision_mode must be exact|grid");
        return;
    }
    if (k == "channel.grid_step_us") { sc.grid_step_us = parse_i64(value, c); return; }

    if (k == "traffic.n_nodes") { sc.n_nodes = static_cast<int>(parse_i64(value, c)); return; }
    if (k == "traffic.mode") {
        if (value == "slotted") sc.mode = MacMode::Slotted;
        else if (value == "pure_confirmed") sc.mode = MacMode::PureConfirmed;
        else if (value == "pure_unconfirmed") sc.mode = MacMode::PureUnconfirmed;
        else c.fail("mode must be slotted|pure_confirmed|pure_unconfirmed");
        return;
    }
    if (k == "traffic.tx_period_s") { sc.tx_period_s = parse_f64(value, c); return; }
    if (k == "traffic.max_retries") {
        sc.max_retries = static_cast<int>(parse_i64(value, c));
        return;
    }
    if (k == "traffic.backoff_nslots") {
        sc.backoff_nslots = static_cast<int>(parse_i64(value, c));
        return;
    }
    if (k == "traffic.pure_backoff_min_s") {
        sc.pure_backoff_min_s = parse_f64(value, c);
        return;
    }
    if (k == "traffic.pure_backoff_max_s") {
        sc.pure_backoff_max_s = parse_f64(value, c);
        return;
    }
    if (k == "traffic.scripted_requests") {
        sc.scripted_requests_us = parse_scripted(value, c);
        return;
    }

    if (k == "slot.t_r_s") {
        if (value == "auto") sc.slot_t_r_us = 0;
        else sc.slot_t_r_us = std::llround(parse_f64(value, c) * 1e6);
        return;
    }
    if (k == "slot.t_b_s") { sc.slot_t_b_us = std::llround(parse_f64(value, c) * 1e6); return; }

    if (k == "clock.drift_ppm_min") { sc.drift_ppm_min = parse_f64(value, c); return; }
    if (k == "clock.drift_ppm_max") { sc.drift_ppm_max = parse_f64(value, c); return; }
    if (k == "clock.drift_random_sign") { sc.drift_random_sign = parse_bool(value, c); return; }
    if (k == "clock.initial_offset_max_us") {
        sc.initial_offset_max_us = parse_i64(value, c);
        return;
    }
    if (k == "clock.reboot_rate_per_s") { sc.reboot_rate_per_s = parse_f64(value, c); return; }
    if (k == "clock.reboot_offset_min_s") {
        sc.reboot_offset_min_s = parse_f64(value, c);
        return;
    }
    if (k == "clock.reboot_offset_max_s") {
        sc.reboot_offset_max_s = parse_f64(value, c);
        return;
    }

    if (k == "gateway.jitter_enabled") { sc.jitter.enabled = parse_bool(value, c); return; }
    if (k == "gateway.jitter_base_mean_ms") {
        sc.jitter.base_mean_ms = parse_f64(value, c);
        return;
    }
    if (k == "gateway.jitter_sigma_log") { sc.jitter.sigma_log = parse_f64(value, c); return; }
    if (k == "gateway.jitter_shift_ms") { sc.jitter.shift_ms = parse_f64(value, c); return; }
    if (k == "gateway.busy_prob_per_peer") {
        sc.jitter.busy_prob_per_peer = parse_f64(value, c);
        return;
    }
    if (k == "gateway.busy_prob_cap") { sc.jitter.busy_prob_cap = parse_f64(value, c); return; }
    if (k == "gateway.busy_extra_ms_per_peer") {
        sc.jitter.busy_extra_ms_per_peer = parse_f64(value, c);
        return;
    }
    if (k == "gateway.busy_extra_cap_ms") {
        sc.jitter.busy_extra_cap_ms = parse_f64(value, c);
        return;
    }
    if (k == "gateway.load_window_s") {
        sc.jitter.load_window_us = std::llround(parse_f64(value, c) * 1e6);
        return;
    }
    if (k == "gateway.rx_window_open_error_us") {
        sc.rx_window_open_error_us = parse_i64(value, c);
        return;
    }

    c.fail("unknown key '" + key + "' in section [" + section + "]");
}

const std::map<std::string, bool>& known_sections() {
    static const std::map<std::string, bool> s = {
        {"run", true},    {"radio", true},   {"uplink", true}, {"ack", true},
        {"link", true},   {"channel", true}, {"traffic", true}, {"slot", true},
        {"clock", true},  {"gateway", true},
    };
    return s;
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    Scenario sc;
    std::stringstream ss(text);
    std::string raw;
    std::string section;
    Cursor c;
    while (std::getline(ss, raw)) {
        ++c.line;
        // strip comments
        for (const char marker : {'#', ';'}) {
            const auto pos = raw.find(marker);
            if (pos != std::string::npos) raw.erase(pos);
        }
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') c.fail("unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!known_sections().count(section)) c.fail("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) c.fail("expected key = value");
        if (section.empty()) c.fail("key outside any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) c.fail("empty key");
        apply_kv(sc, section, key, value, c);
    }
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

void apply_override(Scenario& sc, const std::string& dotted_key, const std::string& value) {
    const auto dot = dotted_key.find('.');
    if (dot == std::string::npos)
        throw ConfigError("override key '" + dotted_key + "' must look like section.key");
    const std::string section = dotted_key.substr(0, dot);
    if (!known_sections().count(section))
        throw ConfigError("unknown section '" + section + "' in override");
    Cursor c;
    apply_kv(sc, section, dotted_key.substr(dot + 1), value, c);
}

} // namespace slora
