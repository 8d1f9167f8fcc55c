#pragma once

#include <cstdint>
#include <vector>

namespace slora {

enum class TxDirection { Uplink, Downlink };

// One frame occupying the air as a half-open interval [start_us, end_us).
struct Transmission {
    int id = 0;
    int node_id = -1;           // -1 for the gateway
    TxDirection direction = TxDirection::Uplink;
    int channel = 6;
    int sf = 8;
    std::int64_t start_us = 0;
    std::int64_t end_us = 0;
};

enum class CollisionMode { Exact, Grid };

struct CollisionPolicy {
    CollisionMode mode = CollisionMode::Exact;
    std::int64_t grid_step_us = 1000;   // sampling period of Grid mode
    bool orthogonal_sf = true;          // different spreading factors never collide
};

// Whether two transmissions destroy each other under the policy. Exact mode
// tests interval overlap; Grid mode only sees both frames when they share a
// sampling instant k * grid_step_us.
bool collides(const Transmission& a, const Transmission& b, const CollisionPolicy& policy);

// Mark every transmission that collides with any other. outcome[i] is true
// when transmissions[i] survives. Quadratic in the overlap neighborhood after
// a sort; intended for bounded scenario sizes.
std::vector<bool> detect_collisions(const std::vector<Transmission>& transmissions,
                                    const CollisionPolicy& policy);

} // namespace slora
