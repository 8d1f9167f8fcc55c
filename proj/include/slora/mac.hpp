#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "slora/airtime.hpp"
#include "slora/rng.hpp"

namespace slora {

enum class MacMode { PureUnconfirmed, PureConfirmed, Slotted };

enum class MacState { Init, Wait, Send, WaitForAck, Rand };

enum class TimerId { TxLoraSlotted, TimerBackOff, TimerAck };

const char* to_string(MacState s);
const char* to_string(TimerId t);
const char* to_string(MacMode m);

// Slot layout: a transmission window t_r followed by a tolerance margin t_b
// that absorbs clock error before the next slot begins.
struct SlotGeometry {
    std::int64_t t_r_us = 1'615'424;
    std::int64_t t_b_us = 385'000;
    std::int64_t slot_us() const { return t_r_us + t_b_us; }
};

// Strictly next slot boundary after local_us; a reading exactly on a boundary
// selects the following slot.
std::int64_t next_slot_start(std::int64_t local_us, std::int64_t slot_us);

// Shortest t_r that holds the whole exchange: uplink, receive delay, ack.
std::int64_t slot_exchange_span_us(const FrameSpec& uplink, const FrameSpec& ack,
                                   std::int64_t rx1_delay_us);

// Throws ConfigError when geom.t_r_us is shorter than the exchange span;
// returns the computed span.
std::int64_t validate_slot_geometry(const SlotGeometry& geom, const FrameSpec& uplink,
                                    const FrameSpec& ack, std::int64_t rx1_delay_us);

// events
struct EvStart {};                      // leave Init
struct EvTxRequested {};                // application packet became pending
struct EvTxComplete {};                 // radio finished the uplink
struct EvAckReceived {};
struct EvTimerFired { TimerId timer; };
using MacEvent = std::variant<EvStart, EvTxRequested, EvTxComplete, EvAckReceived, EvTimerFired>;

// actions handed back to the simulation engine
struct ActStartUplink {};
struct ActArmTimer { TimerId timer; std::int64_t deadline_local_us; };
struct ActDisarmTimer { TimerId timer; };
struct ActIncrementSent {};
struct ActIncrementLost {};
struct ActSleep {};                     // current packet resolved; node idles
using MacAction =
    std::variant<ActStartUplink, ActArmTimer, ActDisarmTimer, ActIncrementSent,
                 ActIncrementLost, ActSleep>;

struct MacConfig {
    MacMode mode = MacMode::Slotted;
    SlotGeometry slot;
    int backoff_nslots = 10;            // retry waits u ~ U{0..backoff_nslots} slots
    std::int64_t pure_backoff_min_us = 0;
    std::int64_t pure_backoff_max_us = 0; // 0,0 selects backoff_nslots * slot
    std::int64_t ack_timeout_us = 2'000'000;
    int max_retries = 40;
};

// Class-A MAC state machine. Deadlines in actions are local-clock values; the
// engine translates them to reference time. step() throws
// IllegalTransitionError for an event the current state cannot accept.
class NodeMac {
  public:
    explicit NodeMac(MacConfig cfg) : cfg_(cfg) {}

    std::vector<MacAction> step(std::int64_t now_local_us, const MacEvent& ev, Rng& rng);

    MacState state() const { return state_; }
    int attempts() const { return attempts_; }
    const MacConfig& config() const { return cfg_; }

  private:
    MacConfig cfg_;
    MacState state_ = MacState::Init;
    int attempts_ = 0;                  // uplinks emitted for the pending packet

    std::int64_t first_tx_deadline(std::int64_t now_local_us) const;
    std::int64_t backoff_deadline(std::int64_t now_local_us, Rng& rng) const;
};

// Poisson traffic: delay from one packet resolution to the next request.
std::int64_t pure_aloha_delay_us(Rng& rng, double mean_period_s);

} // namespace slora
