#include "slora/channel.hpp"

#include <algorithm>
#include <numeric>

#include "slora/errors.hpp"

namespace slora {

namespace {

// smallest multiple of step that is >= t
std::int64_t ceil_to_step(std::int64_t t, std::int64_t step) {
    std::int64_t q = t / step;
    if (t > 0 && t % step != 0) ++q;
    return q * step;
}

} // namespace

bool collides(const Transmission& a, const Transmission& b, const CollisionPolicy& policy) {
    if (a.channel != b.channel) return false;
    if (policy.orthogonal_sf && a.sf != b.sf) return false;
    const std::int64_t lo = std::max(a.start_us, b.start_us);
    const std::int64_t hi = std::min(a.end_us, b.end_us);
    if (policy.mode == CollisionMode::Exact) return lo < hi;
    if (policy.grid_step_us <= 0) throw ConfigError("grid_step_us must be positive");
    // both frames are on the air at some sampling instant
    return ceil_to_step(lo, policy.grid_step_us) < hi;
}

std::vector<bool> detect_collisions(const std::vector<Transmission>& transmissions,
                                    const CollisionPolicy& policy) {
    const std::size_t n = transmissions.size();
    std::vector<bool> survives(n, true);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (transmissions[i].start_us != transmissions[j].start_us)
            return transmissions[i].start_us < transmissions[j].start_us;
        return transmissions[i].id < transmissions[j].id;
    });

    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = transmissions[order[i]];
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& b = transmissions[order[j]];
            if (b.start_us >= a.end_us) break; // later starts cannot reach back
            if (collides(a, b, policy)) {
                survives[order[i]] = false;
                survives[order[j]] = false;
            }
        }
    }
    return survives;
}

} // namespace slora
