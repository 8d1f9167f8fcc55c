#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slora/clock.hpp"
#include "slora/mac.hpp"

namespace slora {

// Raw counters accumulated by a run.
struct RunCounters {
    std::int64_t packets_offered = 0;   // application requests delivered
    std::int64_t packets_sent = 0;      // uplink attempts, retries included
    std::int64_t packets_acked = 0;     // delivered (ack, or clean uplink when unconfirmed)
    std::int64_t packets_lost = 0;      // failed attempts
    std::int64_t packets_dropped = 0;   // requests abandoned after max retries
    std::int64_t packets_in_flight = 0; // attempts unresolved at the cutoff
    std::int64_t collisions = 0;        // uplinks destroyed by overlap
    std::int64_t ack_collisions = 0;    // downlinks destroyed by overlap
    std::int64_t acks_suppressed = 0;   // gateway busy at the ack instant
    std::int64_t uplinks_missed_tx = 0; // gateway transmitting during reception
    std::int64_t slot_errors = 0;       // |slot deviation| > t_b
};

// One run's report. Normalized load g and throughput s are reported against
// two packet-time conventions: the uplink airtime alone (payload) and the
// full protocol footprint (exchange span for pure modes, whole slot for the
// slotted mode).
struct RunMetrics {
    std::string scenario;
    std::uint64_t seed = 0;
    MacMode mode = MacMode::Slotted;
    int n_nodes = 0;
    double duration_s = 0;

    RunCounters counters;

    std::int64_t t_payload_us = 0;      // normalization constants used
    std::int64_t t_full_us = 0;

    double success_rate = 0;
    double g_payload = 0, g_full = 0, g_per_second = 0;
    double s_payload = 0, s_full = 0;

    std::vector<SyncSample> sync_samples;
    std::vector<std::int64_t> slot_deviations_us; // |deviation| per slotted uplink
};

// Fill the derived rates from the counters and normalization constants.
void finalize_metrics(RunMetrics& m);

// CSV / JSON emission. Both carry identical numeric content: JSON numbers are
// parsed back from the same fixed-precision text the CSV uses.
std::string run_csv_header();
std::string run_csv_row(const RunMetrics& m);
std::string runs_to_csv(const std::vector<RunMetrics>& runs);
std::string runs_to_json(const std::vector<RunMetrics>& runs);

std::string sync_samples_to_csv(const std::vector<SyncSample>& samples);
std::string sync_samples_to_json(const std::vector<SyncSample>& samples);
std::string sync_stats_to_csv(const SyncErrorStats& st);
std::string sync_stats_to_json(const SyncErrorStats& st);

// FSM transition trace
struct TraceRow {
    std::int64_t true_time_us = 0;
    int node_id = 0;
    MacState state_from = MacState::Init;
    MacState state_to = MacState::Init;
    std::string event;
    std::string action; // '+'-joined action names
};
std::string trace_to_csv(const std::vector<TraceRow>& rows);

// analytic curve table: g,s_pure,s_confirmed,s_slotted,s_slotted_lorawan
std::string curves_to_csv(double g_min, double g_max, int steps, double overhead_k);
std::string curves_to_json(double g_min, double g_max, int steps, double overhead_k);

// threshold sweep over recorded slot deviations: t_b_ms,slot_errors,slot_success_rate
std::string tb_classification_csv(const RunMetrics& m, const std::vector<std::int64_t>& tb_us);
std::string tb_classification_json(const RunMetrics& m, const std::vector<std::int64_t>& tb_us);

// error count among the recorded deviations for one threshold
std::int64_t slot_errors_at(const RunMetrics& m, std::int64_t tb_us);

} // namespace slora
