#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slora/metrics.hpp"

namespace slora {

struct PresetInfo {
    std::string name;
    std::string description;
};

// One output document produced by a preset; label doubles as the file stem
// when the CLI writes it to disk.
struct PresetOutput {
    std::string label;
    std::string content;
};

const std::vector<PresetInfo>& preset_list();
bool is_preset(const std::string& name);

// Embedded scenario texts of a preset as (label, text) pairs, exactly what
// the runner parses; empty for purely analytic presets.
std::vector<std::pair<std::string, std::string>> preset_scenarios(const std::string& name);

// Execute a preset. format is "csv" or "json"; seed, when present, replaces
// the embedded seed of every scenario. Unknown names throw ConfigError.
std::vector<PresetOutput> run_preset(const std::string& name, const std::string& format,
                                     std::optional<std::uint64_t> seed);

// Plain IEEE division: 0/0 yields NaN, the sentinel for a run pair with no
// traffic on either side.
double throughput_ratio(double slotted_s, double pure_s);

// Paired-mode comparison used by the table3 preset: the same traffic seeds
// drive a slotted and a pure confirmed run; ratios are payload-normalized
// throughputs, NaN when both are zero.
struct ComparisonSummary {
    std::vector<RunMetrics> slotted;
    std::vector<RunMetrics> pure;
    std::vector<double> ratios;
    double mean_ratio = 0;
    double ci95_halfwidth = 0;
};
ComparisonSummary run_comparison(std::uint64_t base_seed, int n_seeds);

// The table4 preset's underlying run plus the thresholds it classifies
// against; the CSV comes from tb_classification_csv.
struct TbSweepResult {
    RunMetrics run;
    std::vector<std::int64_t> thresholds_us;
};
TbSweepResult run_tb_sweep(std::optional<std::uint64_t> seed);

} // namespace slora
