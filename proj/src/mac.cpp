#include "slora/mac.hpp"

#include <cmath>
#include <string>

#include "slora/errors.hpp"

namespace slora {

const char* to_string(MacState s) {
    switch (s) {
    case MacState::Init: return "Init";
    case MacState::Wait: return "Wait";
    case MacState::Send: return "Send";
    case MacState::WaitForAck: return "WaitForAck";
    case MacState::Rand: return "Rand";
    }
    return "?";
}

const char* to_string(TimerId t) {
    switch (t) {
    case TimerId::TxLoraSlotted: return "TxLoraSlotted";
    case TimerId::TimerBackOff: return "TimerBackOff";
    case TimerId::TimerAck: return "TimerAck";
    }
    return "?";
}

const char* to_string(MacMode m) {
    switch (m) {
    case MacMode::PureUnconfirmed: return "pure_unconfirmed";
    case MacMode::PureConfirmed: return "pure_confirmed";
    case MacMode::Slotted: return "slotted";
    }
    return "?";
}

std::int64_t next_slot_start(std::int64_t local_us, std::int64_t slot_us) {
    if (slot_us <= 0) throw ConfigError("slot length must be positive");
    // strictly next boundary; floor for negative readings too
    std::int64_t k = local_us / slot_us;
    if (local_us < 0 && local_us % slot_us != 0) --k;
    return (k + 1) * slot_us;
}

std::int64_t slot_exchange_span_us(const FrameSpec& uplink, const FrameSpec& ack,
                                   std::int64_t rx1_delay_us) {
    if (rx1_delay_us < 0) throw ConfigError("rx1_delay_us must be >= 0");
    return time_on_air_us(uplink) + rx1_delay_us + time_on_air_us(ack);
}

std::int64_t validate_slot_geometry(const SlotGeometry& geom, const FrameSpec& uplink,
                                    const FrameSpec& ack, std::int64_t rx1_delay_us) {
    if (geom.t_r_us <= 0 || geom.t_b_us < 0)
        throw ConfigError("slot geometry requires t_r > 0 and t_b >= 0");
    const std::int64_t span = slot_exchange_span_us(uplink, ack, rx1_delay_us);
    if (geom.t_r_us < span)
        throw ConfigError("t_r = " + std::to_string(geom.t_r_us) +
                          " us cannot hold the exchange span of " + std::to_string(span) +
                          " us");
    return span;
}

std::int64_t NodeMac::first_tx_deadline(std::int64_t now_local_us) const {
    if (cfg_.mode == MacMode::Slotted)
        return next_slot_start(now_local_us, cfg_.slot.slot_us());
    return now_local_us; // pure modes transmit immediately
}

std::int64_t NodeMac::backoff_deadline(std::int64_t now_local_us, Rng& rng) const {
    if (cfg_.mode == MacMode::Slotted) {
        // whole slots: wait u slots past the next boundary, u in {0..nslots}
        const std::int64_t u =
            static_cast<std::int64_t>(rng.uniform_int(static_cast<std::uint64_t>(cfg_.backoff_nslots)));
        return next_slot_start(now_local_us, cfg_.slot.slot_us()) + u * cfg_.slot.slot_us();
    }
    std::int64_t lo = cfg_.pure_backoff_min_us;
    std::int64_t hi = cfg_.pure_backoff_max_us;
    if (lo == 0 && hi == 0) hi = cfg_.backoff_nslots * cfg_.slot.slot_us();
    if (hi < lo) throw ConfigError("pure backoff window is inverted");
    const double d = rng.uniform(static_cast<double>(lo), static_cast<double>(hi));
    return now_local_us + std::llround(d);
}

std::vector<MacAction> NodeMac::step(std::int64_t now_local_us, const MacEvent& ev, Rng& rng) {
    auto illegal = [&]() -> std::vector<MacAction> {
        throw IllegalTransitionError(std::string("no transition from ") + to_string(state_) +
                                     " for the delivered event");
    };

    switch (state_) {
    case MacState::Init:
        if (std::holds_alternative<EvStart>(ev)) {
            state_ = MacState::Wait;
            return {ActSleep{}};
        }
        return illegal();

    case MacState::Wait:
        if (std::holds_alternative<EvTxRequested>(ev)) {
            attempts_ = 0;
            return {ActArmTimer{TimerId::TxLoraSlotted, first_tx_deadline(now_local_us)}};
        }
        if (const auto* f = std::get_if<EvTimerFired>(&ev);
            f && f->timer == TimerId::TxLoraSlotted) {
            state_ = MacState::Send;
            ++attempts_;
            return {ActStartUplink{}, ActIncrementSent{}};
        }
        return illegal();

    case MacState::Send:
        if (std::holds_alternative<EvTxComplete>(ev)) {
            if (cfg_.mode == MacMode::PureUnconfirmed) {
                state_ = MacState::Wait;
                return {ActSleep{}};
            }
            state_ = MacState::WaitForAck;
            return {ActArmTimer{TimerId::TimerAck, now_local_us + cfg_.ack_timeout_us}};
        }
        return illegal();

    case MacState::WaitForAck:
        if (std::holds_alternative<EvAckReceived>(ev)) {
            state_ = MacState::Wait;
            return {ActDisarmTimer{TimerId::TimerAck}};
        }
        if (const auto* f = std::get_if<EvTimerFired>(&ev); f && f->timer == TimerId::TimerAck) {
            if (attempts_ <= cfg_.max_retries) {
                state_ = MacState::Rand;
                return {ActIncrementLost{},
                        ActArmTimer{TimerId::TimerBackOff, backoff_deadline(now_local_us, rng)}};
            }
            state_ = MacState::Wait; // retry budget exhausted, drop the packet
            return {ActIncrementLost{}, ActSleep{}};
        }
        return illegal();

    case MacState::Rand:
        if (const auto* f = std::get_if<EvTimerFired>(&ev);
            f && f->timer == TimerId::TimerBackOff) {
            state_ = MacState::Send;
            ++attempts_;
            return {ActStartUplink{}, ActIncrementSent{}};
        }
        return illegal();
    }
    return illegal();
}

std::int64_t pure_aloha_delay_us(Rng& rng, double mean_period_s) {
    if (!(mean_period_s > 0.0)) throw ConfigError("mean_period_s must be positive");
    return std::llround(rng.exponential(mean_period_s) * 1e6);
}

} // namespace slora
