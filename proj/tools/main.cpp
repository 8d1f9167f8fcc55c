#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "slora/airtime.hpp"
#include "slora/analytic.hpp"
#include "slora/errors.hpp"
#include "slora/metrics.hpp"
#include "slora/presets.hpp"
#include "slora/scenario.hpp"
#include "slora/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct GlobalOpts {
    std::optional<std::uint64_t> seed;
    std::string out;     // file, or directory for multi-document presets
    std::string format = "csv";
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open output file: " + path);
    f << content;
    if (!f)
        throw std::runtime_error("write failed: " + path);
}

void emit_one(const GlobalOpts& g, const std::string& content) {
    if (g.out.empty())
        std::cout << content;
    else
        write_file(g.out, content);
}

// Multi-document output goes to <out>/<label>.<ext>; on stdout the documents
// are separated by "# <label>" header lines.
void emit_docs(const GlobalOpts& g, const std::vector<slora::PresetOutput>& docs) {
    if (docs.size() == 1) {
        emit_one(g, docs.front().content);
        return;
    }
    if (g.out.empty()) {
        for (std::size_t i = 0; i < docs.size(); ++i) {
            if (i > 0)
                std::cout << '\n';
            std::cout << "# " << docs[i].label << '\n' << docs[i].content;
        }
        return;
    }
    std::filesystem::create_directories(g.out);
    const std::string ext = g.format == "json" ? ".json" : ".csv";
    for (const auto& d : docs)
        write_file((std::filesystem::path(g.out) / (d.label + ext)).string(), d.content);
}

slora::Scenario load_with_seed(const std::string& path, const GlobalOpts& g) {
    slora::Scenario sc = slora::load_scenario_file(path);
    if (g.seed)
        sc.seed = *g.seed;
    return sc;
}

std::string format_airtime(const slora::FrameSpec& frame, const std::string& format) {
    const std::int64_t t_sym = slora::symbol_time_us(frame.radio);
    const std::int64_t t_pre = slora::preamble_time_us(frame.radio);
    const int n_phy = slora::payload_symbols(frame);
    const std::int64_t toa = slora::time_on_air_us(frame);
    const double dr = slora::data_rate_bps(frame.radio);
    const double ebr = slora::equivalent_bit_rate_bps(frame.radio);
    char buf[64];
    if (format == "json") {
        nlohmann::ordered_json o;
        o["t_sym_us"] = t_sym;
        o["t_preamble_us"] = t_pre;
        o["n_phy"] = n_phy;
        o["t_on_air_us"] = toa;
        std::snprintf(buf, sizeof buf, "%.3f", dr);
        o["dr_bps"] = std::stod(buf);
        std::snprintf(buf, sizeof buf, "%.3f", ebr);
        o["ebr_bps"] = std::stod(buf);
        return o.dump(2) + "\n";
    }
    std::string out;
    out += "t_sym_us=" + std::to_string(t_sym) + "\n";
    out += "t_preamble_us=" + std::to_string(t_pre) + "\n";
    out += "n_phy=" + std::to_string(n_phy) + "\n";
    out += "t_on_air_us=" + std::to_string(toa) + "\n";
    std::snprintf(buf, sizeof buf, "dr_bps=%.3f\n", dr);
    out += buf;
    std::snprintf(buf, sizeof buf, "ebr_bps=%.3f\n", ebr);
    out += buf;
    return out;
}

std::vector<std::string> split_values(const std::string& csv) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : csv) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

int run_sweep(const GlobalOpts& g, const std::string& config, const std::string& param,
              const std::string& values_csv, int seeds_per_point) {
    const slora::Scenario base = load_with_seed(config, g);
    const std::vector<std::string> values = split_values(values_csv);
    if (values.empty() || seeds_per_point < 1)
        throw slora::ConfigError("sweep needs a non-empty value list and seeds >= 1");
    std::vector<slora::RunMetrics> rows;
    bool any_point_failed = false;
    for (const auto& v : values) {
        slora::Scenario point = base;
        try {
            slora::apply_override(point, param, v);
            point.name = base.name + "_" + param + "=" + v;
            for (int s = 0; s < seeds_per_point; ++s)
                rows.push_back(slora::run_scenario_with_seed(
                    point, point.seed + static_cast<std::uint64_t>(s)));
        } catch (const slora::ConfigError& e) {
            std::cerr << "sweep point " << param << "=" << v << " skipped: " << e.what()
                      << "\n";
            any_point_failed = true;
        }
    }
    emit_one(g, g.format == "json" ? slora::runs_to_json(rows) : slora::runs_to_csv(rows));
    if (rows.empty() && any_point_failed)
        throw slora::ConfigError("every sweep point was invalid");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-gateway LoRaWAN simulator with a slotted overlay"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    GlobalOpts g;
    std::uint64_t seed_arg = 0;
    auto* seed_opt = app.add_option("--seed", seed_arg, "override the scenario seed");
    app.add_option("--out", g.out, "write output to this file (directory for presets with several documents)");
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    // airtime
    auto* cmd_air = app.add_subcommand("airtime", "LoRa frame time-on-air and rate figures");
    slora::FrameSpec frame;
    std::string low_dr = "auto";
    cmd_air->add_option("--sf", frame.radio.sf, "spreading factor 6..12");
    cmd_air->add_option("--bw", frame.radio.bw_hz, "bandwidth in Hz");
    cmd_air->add_option("--cr", frame.radio.cr, "coding rate index 1..4 (4/5..4/8)");
    cmd_air->add_option("--preamble", frame.radio.preamble_symbols, "programmed preamble symbols");
    cmd_air->add_option("--payload", frame.payload_bytes, "payload bytes 1..255");
    cmd_air->add_flag("--crc", frame.crc_on, "frame carries a payload CRC");
    cmd_air->add_option("--low-dr", low_dr, "low data rate optimization")
        ->check(CLI::IsMember({"auto", "on", "off"}));

    // curves
    auto* cmd_curves = app.add_subcommand("curves", "closed-form throughput curves over a G grid");
    double g_min = 0.0, g_max = 3.0, overhead_k = slora::overhead_factor(1.253, 0.530, 1.0);
    int g_steps = 301;
    cmd_curves->add_option("--g-min", g_min, "lowest offered load");
    cmd_curves->add_option("--g-max", g_max, "highest offered load");
    cmd_curves->add_option("--g-steps", g_steps, "number of grid points");
    cmd_curves->add_option("--overhead-k", overhead_k, "confirmed-exchange overhead factor k");

    // run
    auto* cmd_run = app.add_subcommand("run", "simulate one scenario file");
    std::string run_config;
    cmd_run->add_option("--config", run_config, "scenario file")->required();

    // sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "run a scenario over a parameter grid");
    std::string sweep_config, sweep_param, sweep_values;
    int seeds_per_point = 1;
    cmd_sweep->add_option("--config", sweep_config, "base scenario file")->required();
    cmd_sweep->add_option("--param", sweep_param, "dotted parameter key, e.g. traffic.n_nodes")->required();
    cmd_sweep->add_option("--values", sweep_values, "comma-separated values")->required();
    cmd_sweep->add_option("--seeds-per-point", seeds_per_point, "independent seeds per grid point");

    // preset
    auto* cmd_preset = app.add_subcommand("preset", "named reproduction scenarios");
    std::string preset_name;
    bool preset_list_flag = false, preset_dump = false;
    cmd_preset->add_option("name", preset_name, "preset name");
    cmd_preset->add_flag("--list", preset_list_flag, "list available presets");
    cmd_preset->add_flag("--dump", preset_dump, "print the preset's scenario text instead of running it");

    // sync-stats
    auto* cmd_sync = app.add_subcommand("sync-stats", "clock synchronization error statistics for a scenario");
    std::string sync_config;
    bool sync_samples = false;
    cmd_sync->add_option("--config", sync_config, "scenario file")->required();
    cmd_sync->add_flag("--samples", sync_samples, "emit the raw per-sync samples instead of the summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) // --help
            return app.exit(e);
        std::ostringstream dummy;
        const int rc = app.exit(e, dummy, std::cerr);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    if (seed_opt->count() > 0)
        g.seed = seed_arg;

    try {
        if (cmd_air->parsed()) {
            frame.radio.low_dr = low_dr == "on"    ? slora::LowDrOptimize::On
                                 : low_dr == "off" ? slora::LowDrOptimize::Off
                                                   : slora::LowDrOptimize::Auto;
            emit_one(g, format_airtime(frame, g.format));
        } else if (cmd_curves->parsed()) {
            emit_one(g, g.format == "json"
                            ? slora::curves_to_json(g_min, g_max, g_steps, overhead_k)
                            : slora::curves_to_csv(g_min, g_max, g_steps, overhead_k));
        } else if (cmd_run->parsed()) {
            const slora::Scenario sc = load_with_seed(run_config, g);
            const std::vector<slora::RunMetrics> rows = {slora::run_scenario(sc)};
            emit_one(g, g.format == "json" ? slora::runs_to_json(rows)
                                           : slora::runs_to_csv(rows));
        } else if (cmd_sweep->parsed()) {
            return run_sweep(g, sweep_config, sweep_param, sweep_values, seeds_per_point);
        } else if (cmd_preset->parsed()) {
            if (preset_list_flag) {
                std::string out;
                for (const auto& p : slora::preset_list())
                    out += p.name + "  " + p.description + "\n";
                emit_one(g, out);
            } else if (preset_name.empty()) {
                throw slora::ConfigError("preset needs a name (or --list)");
            } else if (preset_dump) {
                const auto texts = slora::preset_scenarios(preset_name);
                std::string out;
                for (const auto& [label, text] : texts)
                    out += "# " + label + "\n" + text + "\n";
                if (texts.empty())
                    out = "# " + preset_name + ": analytic preset, no scenario text\n";
                emit_one(g, out);
            } else {
                emit_docs(g, slora::run_preset(preset_name, g.format, g.seed));
            }
        } else if (cmd_sync->parsed()) {
            const slora::Scenario sc = load_with_seed(sync_config, g);
            const slora::RunMetrics m = slora::run_scenario(sc);
            if (sync_samples) {
                emit_one(g, g.format == "json" ? slora::sync_samples_to_json(m.sync_samples)
                                               : slora::sync_samples_to_csv(m.sync_samples));
            } else {
                const slora::SyncErrorStats st = slora::sync_error_stats(m.sync_samples);
                emit_one(g, g.format == "json" ? slora::sync_stats_to_json(st)
                                               : slora::sync_stats_to_csv(st));
            }
        } else {
            std::cerr << app.help() << "\n";
            return kExitConfig;
        }
    } catch (const slora::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "fault: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
