#pragma once

#include <cstdint>
#include <deque>
#include <unordered_map>
#include <vector>

#include "slora/rng.hpp"

namespace slora {

// A node's RTC as seen against the reference timeline. offset_us is the
// reading error at the last synchronization instant; drift accrues linearly
// after it.
struct VirtualClock {
    double drift_ppm = 0.0;
    std::int64_t offset_us = 0;
    std::int64_t last_sync_true_us = 0;

    // local reading at reference time true_us; throws TimeReversalError when
    // true_us precedes the last synchronization
    std::int64_t read(std::int64_t true_us) const;

    // reference time at which the clock reads local_us (inverse of read)
    std::int64_t true_time_for_local(std::int64_t local_us) const;

    // reading error (local - true) at reference time true_us
    std::int64_t error_at(std::int64_t true_us) const;

    // Apply the exchange-based correction: the clock is set so that its
    // reading now equals gateway_timestamp_us plus the locally measured span
    // between the uplink end and the acknowledgement reception.
    // true_now_us is the reference instant at which the node applies the
    // correction (the instant its local reading was ack_rx_local_us).
    void synchronize(std::int64_t true_now_us, std::int64_t tx_end_local_us,
                     std::int64_t ack_rx_local_us, std::int64_t gateway_timestamp_us);
};

// Worst-case drift accumulated between synchronizations, in microseconds.
// Throws NegativeElapsedError when elapsed_s < 0.
std::int64_t max_drift_between_syncs_us(double drift_ppm, double elapsed_s);

// Gateway-side timestamping latency model. The base latency is lognormal;
// under load the gateway occasionally serves a request late, adding a uniform
// extra delay. Both the probability and the size of that extra grow with the
// number of distinct nodes recently asking for timestamps.
struct JitterModel {
    bool enabled = true;            // false: timestamps are exact
    double base_mean_ms = 3.45;
    double sigma_log = 0.45;        // log-space sigma of the base latency
    double shift_ms = 0.0;          // constant floor added to every sample
    double busy_prob_per_peer = 0.010;
    double busy_prob_cap = 0.5;
    double busy_extra_ms_per_peer = 4.5;
    double busy_extra_cap_ms = 150.0;
    std::int64_t load_window_us = 120'000'000; // peers counted over this window
};

class GatewayTimestamper {
  public:
    explicit GatewayTimestamper(JitterModel model = {}) : model_(model) {}

    // Record a served uplink so the node enters the load window.
    void note_uplink(int node_id, std::int64_t true_us);

    // Distinct nodes seen in the trailing window as of true_us.
    int current_load(std::int64_t true_us) const;

    // Timestamp for an uplink that ended at true_us: true_us plus a
    // non-negative latency sample.
    std::int64_t sample(std::int64_t true_us, Rng& rng);

    // latency the next sample would be drawn from, for instrumentation
    std::int64_t last_jitter_us() const { return last_jitter_us_; }

    const JitterModel& model() const { return model_; }

  private:
    JitterModel model_;
    mutable std::deque<std::pair<std::int64_t, int>> recent_; // (time, node)
    mutable std::unordered_map<int, int> in_window_;
    std::int64_t last_jitter_us_ = 0;

    void evict(std::int64_t true_us) const;
};

// One synchronization outcome: the node's reading error right after applying
// the correction.
struct SyncSample {
    int node_id = 0;
    std::int64_t true_time_us = 0;
    std::int64_t error_us = 0;
};

struct SyncErrorStats {
    double min_ms = 0, max_ms = 0, mean_ms = 0;
    double p25_ms = 0, median_ms = 0, p75_ms = 0;
    std::size_t count = 0;
};

// Statistics over |error| in milliseconds; percentiles use the nearest-rank
// rule. Throws EmptySamplesError on an empty input.
SyncErrorStats sync_error_stats(const std::vector<SyncSample>& samples);

} // namespace slora
