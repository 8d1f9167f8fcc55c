#include "slora/clock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slora/errors.hpp"

namespace slora {

std::int64_t VirtualClock::read(std::int64_t true_us) const {
    if (true_us < last_sync_true_us)
        throw TimeReversalError("clock read at " + std::to_string(true_us) +
                                " us precedes last sync at " +
                                std::to_string(last_sync_true_us) + " us");
    const double drifted = drift_ppm * 1e-6 * static_cast<double>(true_us - last_sync_true_us);
    return true_us + offset_us + std::llround(drifted);
}

std::int64_t VirtualClock::true_time_for_local(std::int64_t local_us) const {
    // invert local = true + offset + drift*(true - last_sync)
    const double rate = 1.0 + drift_ppm * 1e-6;
    const double elapsed =
        static_cast<double>(local_us - offset_us - last_sync_true_us) / rate;
    const std::int64_t t = last_sync_true_us + std::llround(elapsed);
    return std::max(t, last_sync_true_us);
}

std::int64_t VirtualClock::error_at(std::int64_t true_us) const {
    return read(true_us) - true_us;
}

void VirtualClock::synchronize(std::int64_t true_now_us, std::int64_t tx_end_local_us,
                               std::int64_t ack_rx_local_us,
                               std::int64_t gateway_timestamp_us) {
    const std::int64_t elapsed_local = ack_rx_local_us - tx_end_local_us;
    if (elapsed_local < 0)
        throw NegativeElapsedError("ack reception precedes uplink end on the local clock");
    const std::int64_t new_local = gateway_timestamp_us + elapsed_local;
    offset_us = new_local - true_now_us;
    last_sync_true_us = true_now_us;
}

std::int64_t max_drift_between_syncs_us(double drift_ppm, double elapsed_s) {
    if (elapsed_s < 0.0)
        throw NegativeElapsedError("elapsed_s must be >= 0, got " + std::to_string(elapsed_s));
    return std::llround(std::abs(drift_ppm) * elapsed_s); // ppm * s = us
}

void GatewayTimestamper::evict(std::int64_t true_us) const {
    const std::int64_t cutoff = true_us - model_.load_window_us;
    while (!recent_.empty() && recent_.front().first < cutoff) {
        auto it = in_window_.find(recent_.front().second);
        if (it != in_window_.end() && --it->second == 0) in_window_.erase(it);
        recent_.pop_front();
    }
}

void GatewayTimestamper::note_uplink(int node_id, std::int64_t true_us) {
    evict(true_us);
    recent_.emplace_back(true_us, node_id);
    ++in_window_[node_id];
}

int GatewayTimestamper::current_load(std::int64_t true_us) const {
    evict(true_us);
    return static_cast<int>(in_window_.size());
}

std::int64_t GatewayTimestamper::sample(std::int64_t true_us, Rng& rng) {
    if (!model_.enabled) {
        last_jitter_us_ = 0;
        return true_us;
    }
    const int load = std::max(1, current_load(true_us));
    const double mu_log =
        std::log(model_.base_mean_ms) - model_.sigma_log * model_.sigma_log / 2.0;
    double jitter_ms = model_.shift_ms + rng.lognormal(mu_log, model_.sigma_log);
    const int peers = load - 1;
    if (peers > 0) {
        const double q = std::min(model_.busy_prob_cap, model_.busy_prob_per_peer * peers);
        const double extra_max =
            std::min(model_.busy_extra_cap_ms, model_.busy_extra_ms_per_peer * peers);
        if (rng.uniform() < q) jitter_ms += rng.uniform(0.0, extra_max);
    }
    last_jitter_us_ = std::llround(jitter_ms * 1000.0);
    return true_us + last_jitter_us_;
}

SyncErrorStats sync_error_stats(const std::vector<SyncSample>& samples) {
    if (samples.empty()) throw EmptySamplesError("sync_error_stats over empty sample set");
    std::vector<double> abs_ms;
    abs_ms.reserve(samples.size());
    double sum = 0.0;
    for (const auto& s : samples) {
        const double v = std::abs(static_cast<double>(s.error_us)) / 1000.0;
        abs_ms.push_back(v);
        sum += v;
    }
    std::sort(abs_ms.begin(), abs_ms.end());
    const auto n = abs_ms.size();
    auto nearest_rank = [&](double p) {
        // 1-based rank ceil(p/100 * n), clamped to [1, n]
        std::size_t r = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
        if (r < 1) r = 1;
        if (r > n) r = n;
        return abs_ms[r - 1];
    };
    SyncErrorStats st;
    st.count = n;
    st.min_ms = abs_ms.front();
    st.max_ms = abs_ms.back();
    st.mean_ms = sum / static_cast<double>(n);
    st.p25_ms = nearest_rank(25.0);
    st.median_ms = nearest_rank(50.0);
    st.p75_ms = nearest_rank(75.0);
    return st;
}

} // namespace slora
