#include "slora/sim.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <string>

#include "slora/errors.hpp"
#include "slora/rng.hpp"

namespace slora {

namespace {

enum class EvKind { Request, Timer, TxEnd, AckStart, AckEnd, Reboot };

struct Event {
    std::int64_t time = 0;
    std::uint64_t seq = 0;
    EvKind kind = EvKind::Request;
    int node = -1;
    TimerId timer = TimerId::TxLoraSlotted;
    std::uint64_t generation = 0;
    int tx_index = -1;
    std::int64_t gw_ts = 0;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

struct TxRt {
    Transmission tx;
    bool active = false;
    bool collided = false;
    bool gw_deaf = false;   // gateway was transmitting during reception
    int for_node = -1;      // ack destination
    std::int64_t gw_ts = 0; // timestamp carried by an ack
};

struct NodeRt {
    NodeMac mac;
    VirtualClock clock;
    Rng traffic_rng;
    Rng mac_rng;
    Rng clock_rng;
    Rng fault_rng;
    std::array<std::uint64_t, 3> timer_gen{};
    std::int64_t tx_end_local = 0;
    std::int64_t intended_boundary_local = -1; // slot-grid deadline of next uplink
    bool open_packet = false;

    NodeRt(const MacConfig& cfg, std::uint64_t master, int id)
        : mac(cfg),
          traffic_rng(derive_seed(master, kStreamTraffic, static_cast<std::uint64_t>(id))),
          mac_rng(derive_seed(master, kStreamMac, static_cast<std::uint64_t>(id))),
          clock_rng(derive_seed(master, kStreamClock, static_cast<std::uint64_t>(id))),
          fault_rng(derive_seed(master, kStreamFault, static_cast<std::uint64_t>(id))) {}
};

const char* ev_name(const MacEvent& ev) {
    if (std::holds_alternative<EvStart>(ev)) return "Start";
    if (std::holds_alternative<EvTxRequested>(ev)) return "TxRequested";
    if (std::holds_alternative<EvTxComplete>(ev)) return "TxComplete";
    if (std::holds_alternative<EvAckReceived>(ev)) return "AckReceived";
    const auto& f = std::get<EvTimerFired>(ev);
    switch (f.timer) {
    case TimerId::TxLoraSlotted: return "TimerFired(TxLoraSlotted)";
    case TimerId::TimerBackOff: return "TimerFired(TimerBackOff)";
    case TimerId::TimerAck: return "TimerFired(TimerAck)";
    }
    return "TimerFired(?)";
}

class Engine {
  public:
    Engine(const Scenario& sc, std::uint64_t seed, std::vector<TraceRow>* trace)
        : sc_(sc),
          seed_(seed),
          jitter_rng_(derive_seed(seed, kStreamJitter, 0)),
          timestamper_(sc.jitter),
          trace_(trace) {
        sc_.validate_all();
        policy_.mode = sc_.collision_mode;
        policy_.grid_step_us = sc_.grid_step_us;
        policy_.orthogonal_sf = sc_.orthogonal_sf;
        toa_up_ = sc_.toa_uplink_us();
        toa_ack_ = sc_.toa_ack_us();
        rx1_ = sc_.rx1_delay_us();
        slot_ = sc_.slot_geometry();
        end_us_ = sc_.duration_us();

        MacConfig mac_cfg;
        mac_cfg.mode = sc_.mode;
        mac_cfg.slot = slot_;
        mac_cfg.backoff_nslots = sc_.backoff_nslots;
        mac_cfg.pure_backoff_min_us = std::llround(sc_.pure_backoff_min_s * 1e6);
        mac_cfg.pure_backoff_max_us = std::llround(sc_.pure_backoff_max_s * 1e6);
        mac_cfg.ack_timeout_us = sc_.ack_timeout_us();
        mac_cfg.max_retries = sc_.max_retries;

        nodes_.reserve(static_cast<std::size_t>(sc_.n_nodes));
        for (int i = 0; i < sc_.n_nodes; ++i) nodes_.emplace_back(mac_cfg, seed, i);
    }

    RunMetrics run() {
        boot_nodes();
        seed_traffic();
        loop();
        return finalize();
    }

  private:
    Scenario sc_;
    std::uint64_t seed_;
    CollisionPolicy policy_;
    std::int64_t toa_up_ = 0, toa_ack_ = 0, rx1_ = 0, end_us_ = 0;
    SlotGeometry slot_;
    std::vector<NodeRt> nodes_;
    std::vector<TxRt> txs_;
    std::vector<int> active_;       // indexes into txs_
    int gw_tx_active_ = 0;
    Rng jitter_rng_;
    GatewayTimestamper timestamper_;
    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::uint64_t seq_ = 0;
    std::int64_t now_ = 0;

    RunCounters counters_;
    std::vector<SyncSample> sync_samples_;
    std::vector<std::int64_t> slot_deviations_;
    std::vector<TraceRow>* trace_;

    void push(Event e) {
        e.seq = seq_++;
        queue_.push(e);
    }

    void boot_nodes() {
        for (int i = 0; i < sc_.n_nodes; ++i) {
            auto& n = nodes_[static_cast<std::size_t>(i)];
            double mag = n.clock_rng.uniform(sc_.drift_ppm_min, sc_.drift_ppm_max);
            if (sc_.drift_random_sign && n.clock_rng.uniform() < 0.5) mag = -mag;
            n.clock.drift_ppm = mag;
            if (sc_.initial_offset_max_us > 0) {
                const double off = n.clock_rng.uniform(
                    -static_cast<double>(sc_.initial_offset_max_us),
                    static_cast<double>(sc_.initial_offset_max_us));
                n.clock.offset_us = std::llround(off);
            }
            deliver(i, EvStart{});
            if (sc_.reboot_rate_per_s > 0) {
                const std::int64_t dt =
                    std::llround(n.fault_rng.exponential(1.0 / sc_.reboot_rate_per_s) * 1e6);
                push({now_ + dt, 0, EvKind::Reboot, i});
            }
        }
    }

    void seed_traffic() {
        if (!sc_.scripted_requests_us.empty()) {
            for (const auto& [node, t] : sc_.scripted_requests_us)
                push({t, 0, EvKind::Request, node});
            return;
        }
        for (int i = 0; i < sc_.n_nodes; ++i)
            schedule_next_request(i, 0);
    }

    void schedule_next_request(int node, std::int64_t from_us) {
        if (!sc_.scripted_requests_us.empty()) return; // scripted runs self-terminate
        auto& n = nodes_[static_cast<std::size_t>(node)];
        const std::int64_t dt = pure_aloha_delay_us(n.traffic_rng, sc_.tx_period_s);
        push({from_us + dt, 0, EvKind::Request, node});
    }

    void loop() {
        while (!queue_.empty()) {
            const Event e = queue_.top();
            if (e.time > end_us_) break;
            queue_.pop();
            now_ = e.time;
            switch (e.kind) {
            case EvKind::Request: on_request(e); break;
            case EvKind::Timer: on_timer(e); break;
            case EvKind::TxEnd: on_tx_end(e); break;
            case EvKind::AckStart: on_ack_start(e); break;
            case EvKind::AckEnd: on_ack_end(e); break;
            case EvKind::Reboot: on_reboot(e); break;
            }
        }
    }

    void on_request(const Event& e) {
        auto& n = nodes_[static_cast<std::size_t>(e.node)];
        if (n.mac.state() != MacState::Wait || n.open_packet) {
            if (!sc_.scripted_requests_us.empty())
                throw ConfigError("scripted request while node " + std::to_string(e.node) +
                                  " is busy");
            // generated traffic only issues requests after resolution
            return;
        }
        ++counters_.packets_offered;
        n.open_packet = true;
        deliver(e.node, EvTxRequested{});
    }

    void on_timer(const Event& e) {
        auto& n = nodes_[static_cast<std::size_t>(e.node)];
        if (e.generation != n.timer_gen[static_cast<std::size_t>(e.timer)]) return; // stale
        deliver(e.node, EvTimerFired{e.timer});
    }

    void on_tx_end(const Event& e) {
        TxRt& t = txs_[static_cast<std::size_t>(e.tx_index)];
        deactivate(e.tx_index);
        const bool ok = !t.collided && !t.gw_deaf;
        if (t.collided) ++counters_.collisions;
        else if (t.gw_deaf) ++counters_.uplinks_missed_tx;

        const int node = t.tx.node_id;
        auto& n = nodes_[static_cast<std::size_t>(node)];
        n.tx_end_local = n.clock.read(now_);

        if (sc_.mode == MacMode::PureUnconfirmed) {
            if (ok) ++counters_.packets_acked;
            else ++counters_.packets_lost;
            deliver(node, EvTxComplete{}); // resolves via Sleep
            if (!ok) ++counters_.packets_dropped;
            resolve(node);
            return;
        }

        deliver(node, EvTxComplete{}); // arms the ack timer
        // collided frames still load the gateway's radio and host; deaf ones never arrive
        if (!t.gw_deaf) timestamper_.note_uplink(node, now_);
        if (ok) {
            const std::int64_t ts = timestamper_.sample(now_, jitter_rng_);
            push({now_ + rx1_, 0, EvKind::AckStart, node, TimerId::TxLoraSlotted, 0, -1, ts});
        }
    }

    void on_ack_start(const Event& e) {
        if (sc_.gateway_half_duplex && gw_tx_active_ > 0) {
            ++counters_.acks_suppressed;
            return;
        }
        TxRt t;
        t.tx.id = static_cast<int>(txs_.size());
        t.tx.node_id = -1;
        t.tx.direction = TxDirection::Downlink;
        t.tx.channel = sc_.forced_channel;
        t.tx.sf = sc_.radio.sf;
        t.tx.start_us = now_;
        t.tx.end_us = now_ + toa_ack_;
        t.for_node = e.node;
        t.gw_ts = e.gw_ts;
        const int idx = add_transmission(std::move(t));
        ++gw_tx_active_;
        if (sc_.gateway_half_duplex) {
            // the gateway stops listening: every uplink in the air is lost
            for (const int ai : active_)
                if (ai != idx && txs_[static_cast<std::size_t>(ai)].tx.direction == TxDirection::Uplink)
                    txs_[static_cast<std::size_t>(ai)].gw_deaf = true;
        }
        push({t.tx.end_us, 0, EvKind::AckEnd, e.node, TimerId::TxLoraSlotted, 0, idx, e.gw_ts});
    }

    void on_ack_end(const Event& e) {
        TxRt& t = txs_[static_cast<std::size_t>(e.tx_index)];
        deactivate(e.tx_index);
        --gw_tx_active_;
        if (t.collided) {
            ++counters_.ack_collisions;
            return; // destination decodes nothing and will time out
        }
        const int node = t.for_node;
        auto& n = nodes_[static_cast<std::size_t>(node)];
        if (n.mac.state() != MacState::WaitForAck) return; // gave up already

        std::int64_t ack_rx_local = n.clock.read(now_);
        if (sc_.rx_window_open_error_us > 0) {
            const std::int64_t span = 2 * sc_.rx_window_open_error_us;
            ack_rx_local += n.clock_rng.uniform_int(static_cast<std::uint64_t>(span)) -
                            sc_.rx_window_open_error_us;
        }
        if (ack_rx_local >= n.tx_end_local) { // a reboot mid-exchange poisons the span
            n.clock.synchronize(now_, n.tx_end_local, ack_rx_local, t.gw_ts);
            sync_samples_.push_back({node, now_, n.clock.error_at(now_)});
        }
        ++counters_.packets_acked;
        deliver(node, EvAckReceived{});
        resolve(node);
    }

    void on_reboot(const Event& e) {
        auto& n = nodes_[static_cast<std::size_t>(e.node)];
        const double mag =
            n.fault_rng.uniform(sc_.reboot_offset_min_s * 1e6, sc_.reboot_offset_max_s * 1e6);
        const double sign = n.fault_rng.uniform() < 0.5 ? -1.0 : 1.0;
        n.clock.offset_us = std::llround(sign * mag);
        n.clock.last_sync_true_us = now_;
        const std::int64_t dt =
            std::llround(n.fault_rng.exponential(1.0 / sc_.reboot_rate_per_s) * 1e6);
        push({now_ + dt, 0, EvKind::Reboot, e.node});
    }

    void resolve(int node) {
        auto& n = nodes_[static_cast<std::size_t>(node)];
        n.open_packet = false;
        schedule_next_request(node, now_);
    }

    int add_transmission(TxRt&& t) {
        const int idx = static_cast<int>(txs_.size());
        txs_.push_back(std::move(t));
        TxRt& nt = txs_.back();
        nt.active = true;
        for (const int ai : active_) {
            TxRt& other = txs_[static_cast<std::size_t>(ai)];
            if (collides(other.tx, nt.tx, policy_)) {
                other.collided = true;
                nt.collided = true;
            }
        }
        active_.push_back(idx);
        return idx;
    }

    void deactivate(int idx) {
        txs_[static_cast<std::size_t>(idx)].active = false;
        active_.erase(std::remove(active_.begin(), active_.end(), idx), active_.end());
    }

    void start_uplink(int node) {
        auto& n = nodes_[static_cast<std::size_t>(node)];
        if (sc_.mode == MacMode::Slotted && n.intended_boundary_local >= 0) {
            const std::int64_t slot_len = slot_.slot_us();
            const std::int64_t k = n.intended_boundary_local / slot_len;
            const std::int64_t dev = now_ - k * slot_len;
            const std::int64_t abs_dev = dev < 0 ? -dev : dev;
            slot_deviations_.push_back(abs_dev);
            if (abs_dev > slot_.t_b_us) ++counters_.slot_errors;
        }
        n.intended_boundary_local = -1;

        TxRt t;
        t.tx.id = static_cast<int>(txs_.size());
        t.tx.node_id = node;
        t.tx.direction = TxDirection::Uplink;
        t.tx.channel = sc_.forced_channel;
        t.tx.sf = sc_.radio.sf;
        t.tx.start_us = now_;
        t.tx.end_us = now_ + toa_up_;
        if (sc_.gateway_half_duplex && gw_tx_active_ > 0) t.gw_deaf = true;
        const int idx = add_transmission(std::move(t));
        push({txs_[static_cast<std::size_t>(idx)].tx.end_us, 0, EvKind::TxEnd, node,
              TimerId::TxLoraSlotted, 0, idx});
    }

    void arm_timer(int node, TimerId timer, std::int64_t deadline_local) {
        auto& n = nodes_[static_cast<std::size_t>(node)];
        const auto slot_idx = static_cast<std::size_t>(timer);
        const std::uint64_t gen = ++n.timer_gen[slot_idx];
        std::int64_t when = n.clock.true_time_for_local(deadline_local);
        if (when < now_) when = now_;
        if (timer != TimerId::TimerAck && sc_.mode == MacMode::Slotted)
            n.intended_boundary_local = deadline_local;
        Event e;
        e.time = when;
        e.kind = EvKind::Timer;
        e.node = node;
        e.timer = timer;
        e.generation = gen;
        push(e);
    }

    void deliver(int node, const MacEvent& ev) {
        auto& n = nodes_[static_cast<std::size_t>(node)];
        const MacState from = n.mac.state();
        const std::int64_t now_local = n.clock.read(now_);
        const auto actions = n.mac.step(now_local, ev, n.mac_rng);
        if (trace_) {
            TraceRow row;
            row.true_time_us = now_;
            row.node_id = node;
            row.state_from = from;
            row.state_to = n.mac.state();
            row.event = ev_name(ev);
            for (const auto& a : actions) {
                if (!row.action.empty()) row.action += '+';
                row.action += action_name(a);
            }
            trace_->push_back(std::move(row));
        }
        for (const auto& a : actions) apply_action(node, ev, a);
    }

    static std::string action_name(const MacAction& a) {
        if (std::holds_alternative<ActStartUplink>(a)) return "StartUplink";
        if (const auto* arm = std::get_if<ActArmTimer>(&a))
            return std::string("ArmTimer(") + to_string(arm->timer) + ")";
        if (const auto* dis = std::get_if<ActDisarmTimer>(&a))
            return std::string("Disarm(") + to_string(dis->timer) + ")";
        if (std::holds_alternative<ActIncrementSent>(a)) return "IncrementSent";
        if (std::holds_alternative<ActIncrementLost>(a)) return "IncrementLost";
        return "Sleep";
    }

    void apply_action(int node, const MacEvent& ev, const MacAction& a) {
        auto& n = nodes_[static_cast<std::size_t>(node)];
        if (std::holds_alternative<ActStartUplink>(a)) {
            start_uplink(node);
            return;
        }
        if (const auto* arm = std::get_if<ActArmTimer>(&a)) {
            arm_timer(node, arm->timer, arm->deadline_local_us);
            return;
        }
        if (const auto* dis = std::get_if<ActDisarmTimer>(&a)) {
            ++n.timer_gen[static_cast<std::size_t>(dis->timer)];
            return;
        }
        if (std::holds_alternative<ActIncrementSent>(a)) {
            ++counters_.packets_sent;
            return;
        }
        if (std::holds_alternative<ActIncrementLost>(a)) {
            ++counters_.packets_lost;
            return;
        }
        // Sleep: a packet resolution when it closes a timed-out retry budget
        if (const auto* f = std::get_if<EvTimerFired>(&ev);
            f && f->timer == TimerId::TimerAck && n.open_packet) {
            ++counters_.packets_dropped;
            resolve(node);
        }
    }

    RunMetrics finalize() {
        RunMetrics m;
        m.scenario = sc_.name;
        m.seed = seed_;
        m.mode = sc_.mode;
        m.n_nodes = sc_.n_nodes;
        m.duration_s = sc_.duration_s;
        m.counters = counters_;
        m.t_payload_us = toa_up_;
        switch (sc_.mode) {
        case MacMode::Slotted: m.t_full_us = slot_.slot_us(); break;
        case MacMode::PureConfirmed: m.t_full_us = toa_up_ + rx1_ + toa_ack_; break;
        case MacMode::PureUnconfirmed: m.t_full_us = toa_up_; break;
        }
        m.sync_samples = std::move(sync_samples_);
        m.slot_deviations_us = std::move(slot_deviations_);
        finalize_metrics(m);
        return m;
    }
};

} // namespace

RunMetrics run_scenario(const Scenario& sc, std::vector<TraceRow>* trace) {
    return Engine(sc, sc.seed, trace).run();
}

RunMetrics run_scenario_with_seed(const Scenario& sc, std::uint64_t seed,
                                  std::vector<TraceRow>* trace) {
    return Engine(sc, seed, trace).run();
}

} // namespace slora
