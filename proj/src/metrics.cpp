#include "slora/metrics.hpp"

#include <cstdio>

#include <json.hpp>

#include "slora/analytic.hpp"
#include "slora/errors.hpp"

namespace slora {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string f6(double v) { return fmt("%.6f", v); }
std::string f3(double v) { return fmt("%.3f", v); }

// the JSON mirrors the CSV text exactly, so both parse to the same doubles
double requantize(const std::string& s) { return std::stod(s); }

} // namespace

void finalize_metrics(RunMetrics& m) {
    const double dur_s = m.duration_s;
    if (dur_s <= 0) throw ConfigError("metrics require a positive duration");
    auto& c = m.counters;
    c.packets_in_flight = c.packets_sent - c.packets_acked - c.packets_lost;
    m.success_rate =
        c.packets_sent > 0
            ? static_cast<double>(c.packets_acked) / static_cast<double>(c.packets_sent)
            : 0.0;
    m.g_payload = static_cast<double>(c.packets_sent) *
                  (static_cast<double>(m.t_payload_us) * 1e-6) / dur_s;
    m.g_full = static_cast<double>(c.packets_sent) *
               (static_cast<double>(m.t_full_us) * 1e-6) / dur_s;
    m.g_per_second = static_cast<double>(c.packets_sent) / dur_s;
    m.s_payload = m.g_payload * m.success_rate;
    m.s_full = m.g_full * m.success_rate;
}

std::string run_csv_header() {
    return "scenario,seed,mode,n_nodes,duration_s,packets_sent,packets_acked,"
           "success_rate,g_payload,g_full,s_payload,s_full,collisions,slot_errors";
}

std::string run_csv_row(const RunMetrics& m) {
    std::string row;
    row += m.scenario;
    row += ',' + std::to_string(m.seed);
    row += ',' + std::string(to_string(m.mode));
    row += ',' + std::to_string(m.n_nodes);
    row += ',' + f3(m.duration_s);
    row += ',' + std::to_string(m.counters.packets_sent);
    row += ',' + std::to_string(m.counters.packets_acked);
    row += ',' + f6(m.success_rate);
    row += ',' + f6(m.g_payload);
    row += ',' + f6(m.g_full);
    row += ',' + f6(m.s_payload);
    row += ',' + f6(m.s_full);
    row += ',' + std::to_string(m.counters.collisions);
    row += ',' + std::to_string(m.counters.slot_errors);
    return row;
}

std::string runs_to_csv(const std::vector<RunMetrics>& runs) {
    std::string out = run_csv_header() + '\n';
    for (const auto& m : runs) out += run_csv_row(m) + '\n';
    return out;
}

std::string runs_to_json(const std::vector<RunMetrics>& runs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : runs) {
        nlohmann::json o;
        o["scenario"] = m.scenario;
        o["seed"] = m.seed;
        o["mode"] = to_string(m.mode);
        o["n_nodes"] = m.n_nodes;
        o["duration_s"] = requantize(f3(m.duration_s));
        o["packets_sent"] = m.counters.packets_sent;
        o["packets_acked"] = m.counters.packets_acked;
        o["success_rate"] = requantize(f6(m.success_rate));
        o["g_payload"] = requantize(f6(m.g_payload));
        o["g_full"] = requantize(f6(m.g_full));
        o["s_payload"] = requantize(f6(m.s_payload));
        o["s_full"] = requantize(f6(m.s_full));
        o["collisions"] = m.counters.collisions;
        o["slot_errors"] = m.counters.slot_errors;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + '\n';
}

std::string sync_samples_to_csv(const std::vector<SyncSample>& samples) {
    std::string out = "node_id,true_time_us,error_us\n";
    for (const auto& s : samples) {
        out += std::to_string(s.node_id);
        out += ',' + std::to_string(s.true_time_us);
        out += ',' + std::to_string(s.error_us);
        out += '\n';
    }
    return out;
}

std::string sync_samples_to_json(const std::vector<SyncSample>& samples) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : samples) {
        nlohmann::json o;
        o["node_id"] = s.node_id;
        o["true_time_us"] = s.true_time_us;
        o["error_us"] = s.error_us;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + '\n';
}

std::string sync_stats_to_csv(const SyncErrorStats& st) {
    std::string out = "n_samples,min_ms,p25_ms,median_ms,mean_ms,p75_ms,max_ms\n";
    out += std::to_string(st.count);
    out += ',' + f3(st.min_ms);
    out += ',' + f3(st.p25_ms);
    out += ',' + f3(st.median_ms);
    out += ',' + f3(st.mean_ms);
    out += ',' + f3(st.p75_ms);
    out += ',' + f3(st.max_ms);
    out += '\n';
    return out;
}

std::string sync_stats_to_json(const SyncErrorStats& st) {
    nlohmann::json o;
    o["n_samples"] = st.count;
    o["min_ms"] = requantize(f3(st.min_ms));
    o["p25_ms"] = requantize(f3(st.p25_ms));
    o["median_ms"] = requantize(f3(st.median_ms));
    o["mean_ms"] = requantize(f3(st.mean_ms));
    o["p75_ms"] = requantize(f3(st.p75_ms));
    o["max_ms"] = requantize(f3(st.max_ms));
    return o.dump(2) + '\n';
}

std::string trace_to_csv(const std::vector<TraceRow>& rows) {
    std::string out = "true_time_us,node_id,state_from,state_to,event,action\n";
    for (const auto& r : rows) {
        out += std::to_string(r.true_time_us);
        out += ',' + std::to_string(r.node_id);
        out += ',' + std::string(to_string(r.state_from));
        out += ',' + std::string(to_string(r.state_to));
        out += ',' + r.event;
        out += ',' + r.action;
        out += '\n';
    }
    return out;
}

namespace {

std::vector<double> curve_grid(double g_min, double g_max, int steps) {
    if (steps < 2) throw ConfigError("curves need at least 2 grid points");
    if (!(g_min >= 0) || !(g_max > g_min)) throw ConfigError("curves need 0 <= g_min < g_max");
    std::vector<double> g(steps);
    for (int i = 0; i < steps; ++i)
        g[i] = g_min + (g_max - g_min) * static_cast<double>(i) / (steps - 1);
    return g;
}

} // namespace

std::string curves_to_csv(double g_min, double g_max, int steps, double overhead_k) {
    std::string out = "g,s_pure,s_confirmed,s_slotted,s_slotted_lorawan\n";
    for (const double g : curve_grid(g_min, g_max, steps)) {
        out += f6(g);
        out += ',' + f6(pure_aloha_throughput(g));
        out += ',' + f6(confirmed_aloha_throughput(g, overhead_k));
        out += ',' + f6(slotted_aloha_throughput(g));
        out += ',' + f6(slotted_lorawan_throughput(g, overhead_k));
        out += '\n';
    }
    return out;
}

std::string curves_to_json(double g_min, double g_max, int steps, double overhead_k) {
    nlohmann::json arr = nlohmann::json::array();
    for (const double g : curve_grid(g_min, g_max, steps)) {
        nlohmann::json o;
        o["g"] = requantize(f6(g));
        o["s_pure"] = requantize(f6(pure_aloha_throughput(g)));
        o["s_confirmed"] = requantize(f6(confirmed_aloha_throughput(g, overhead_k)));
        o["s_slotted"] = requantize(f6(slotted_aloha_throughput(g)));
        o["s_slotted_lorawan"] = requantize(f6(slotted_lorawan_throughput(g, overhead_k)));
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + '\n';
}

std::int64_t slot_errors_at(const RunMetrics& m, std::int64_t tb_us) {
    std::int64_t errors = 0;
    for (const std::int64_t dev : m.slot_deviations_us)
        if (dev > tb_us) ++errors;
    return errors;
}

namespace {

double classification_rate(const RunMetrics& m, std::int64_t errors) {
    const auto total = static_cast<std::int64_t>(m.slot_deviations_us.size());
    return total > 0 ? 1.0 - static_cast<double>(errors) / static_cast<double>(total) : 1.0;
}

} // namespace

std::string tb_classification_csv(const RunMetrics& m, const std::vector<std::int64_t>& tb_us) {
    std::string out = "t_b_ms,slot_errors,slot_success_rate\n";
    for (const std::int64_t tb : tb_us) {
        const std::int64_t errors = slot_errors_at(m, tb);
        out += std::to_string(tb / 1000);
        out += ',' + std::to_string(errors);
        out += ',' + f6(classification_rate(m, errors));
        out += '\n';
    }
    return out;
}

std::string tb_classification_json(const RunMetrics& m, const std::vector<std::int64_t>& tb_us) {
    nlohmann::json arr = nlohmann::json::array();
    for (const std::int64_t tb : tb_us) {
        const std::int64_t errors = slot_errors_at(m, tb);
        nlohmann::json o;
        o["t_b_ms"] = tb / 1000;
        o["slot_errors"] = errors;
        o["slot_success_rate"] = requantize(f6(classification_rate(m, errors)));
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + '\n';
}

} // namespace slora
