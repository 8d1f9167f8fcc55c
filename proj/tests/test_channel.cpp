#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "slora/channel.hpp"
#include "slora/rng.hpp"

using namespace slora;

namespace {

Transmission tx(int id, std::int64_t start, std::int64_t end, int sf = 8, int channel = 6) {
    Transmission t;
    t.id = id;
    t.node_id = id;
    t.channel = channel;
    t.sf = sf;
    t.start_us = start;
    t.end_us = end;
    return t;
}

} // namespace

TEST_CASE("interval overlap with half-open ends") {
    CollisionPolicy p;
    CHECK(collides(tx(1, 0, 100), tx(2, 50, 150), p));
    CHECK(collides(tx(1, 0, 100), tx(2, 99, 300), p));
    CHECK(collides(tx(1, 50, 60), tx(2, 0, 1000), p)); // containment
    // touching boundaries do not overlap: [0,100) then [100,200)
    CHECK_FALSE(collides(tx(1, 0, 100), tx(2, 100, 200), p));
    CHECK_FALSE(collides(tx(1, 0, 100), tx(2, 250, 300), p));
}

TEST_CASE("orthogonal spreading factors pass each other") {
    CollisionPolicy p;
    CHECK_FALSE(collides(tx(1, 0, 100, 7), tx(2, 0, 100, 8), p));
    p.orthogonal_sf = false;
    CHECK(collides(tx(1, 0, 100, 7), tx(2, 0, 100, 8), p));
}

TEST_CASE("different channels never interact") {
    CollisionPolicy p;
    CHECK_FALSE(collides(tx(1, 0, 100, 8, 1), tx(2, 0, 100, 8, 2), p));
}

TEST_CASE("grid mode only sees overlap on shared sampling ticks") {
    CollisionPolicy g;
    g.mode = CollisionMode::Grid;
    g.grid_step_us = 1000;
    // same millisecond tick at 5000
    CHECK(collides(tx(1, 0, 5001, 8), tx(2, 4999, 9000), g));
    // overlap of 900 us strictly between ticks 4000 and 5000 goes unseen
    CHECK(collides(tx(1, 100, 4950), tx(2, 4100, 8000), g) ==
          false); // [4100, 4950) holds no multiple of 1000
    CollisionPolicy exact;
    CHECK(collides(tx(1, 100, 4950), tx(2, 4100, 8000), exact));
}

TEST_CASE("grid and exact agree when all gaps exceed the step") {
    CollisionPolicy exact;
    CollisionPolicy grid;
    grid.mode = CollisionMode::Grid;
    grid.grid_step_us = 1000;
    Rng rng(99);
    for (int iter = 0; iter < 300; ++iter) {
        std::vector<Transmission> v;
        std::int64_t t = 0;
        for (int i = 0; i < 12; ++i) {
            // either clear the previous frame by > 1 ms or overlap it by > 1 ms
            const bool overlap = rng.uniform() < 0.4;
            const std::int64_t len = 5000 + static_cast<std::int64_t>(rng.uniform_int(20000));
            if (overlap && !v.empty())
                t = v.back().end_us - 1500 - static_cast<std::int64_t>(rng.uniform_int(2000));
            v.push_back(tx(i, t, t + len));
            t = v.back().end_us + 1100 + static_cast<std::int64_t>(rng.uniform_int(5000));
        }
        const auto a = detect_collisions(v, exact);
        const auto b = detect_collisions(v, grid);
        CHECK(a == b);
    }
}

TEST_CASE("outcome ignores insertion order") {
    Rng rng(7);
    CollisionPolicy p;
    std::vector<Transmission> v;
    for (int i = 0; i < 40; ++i) {
        const std::int64_t s = static_cast<std::int64_t>(rng.uniform_int(500000));
        v.push_back(tx(i, s, s + 20000 + static_cast<std::int64_t>(rng.uniform_int(40000)),
                       6 + static_cast<int>(rng.uniform_int(2))));
    }
    const auto base = detect_collisions(v, p);
    std::vector<Transmission> shuffled = v;
    for (std::size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[rng.uniform_int(i - 1)]);
    const auto mixed = detect_collisions(shuffled, p);
    for (std::size_t i = 0; i < v.size(); ++i) {
        // locate v[i] in the shuffled order by id
        for (std::size_t j = 0; j < shuffled.size(); ++j)
            if (shuffled[j].id == v[i].id)
                CHECK(mixed[j] == base[i]);
    }
}

TEST_CASE("pair survival marking") {
    CollisionPolicy p;
    std::vector<Transmission> v = {tx(0, 0, 100), tx(1, 50, 150), tx(2, 400, 500)};
    const auto ok = detect_collisions(v, p);
    REQUIRE(ok.size() == 3);
    CHECK_FALSE(ok[0]);
    CHECK_FALSE(ok[1]);
    CHECK(ok[2]);
}
