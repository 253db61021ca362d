#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "urllc/errors.hpp"
#include "urllc/traffic.hpp"

using namespace urllc;

TEST_CASE("underwood speed-density law") {
    const UnderwoodModel model{80.0, 0.15};
    CHECK(underwood_speed_kmh(model, 0.0) == doctest::Approx(80.0));
    CHECK(underwood_speed_kmh(model, 0.15) == doctest::Approx(80.0 / std::exp(1.0)).epsilon(1e-12));
    CHECK(underwood_speed_kmh(model, 0.05) == doctest::Approx(57.32250484590314).epsilon(1e-12));
    double prev = 81.0;
    for (double k = 0.0; k < 0.5; k += 0.01) {
        const double v = underwood_speed_kmh(model, k);
        CHECK(v < prev);
        CHECK(v > 0.0);
        prev = v;
    }
    CHECK_THROWS_AS(underwood_speed_kmh(model, -0.1), std::domain_error);
    CHECK_THROWS_AS(underwood_speed_kmh({0.0, 0.15}, 0.1), std::domain_error);
}

TEST_CASE("vehicle count") {
    CHECK(vehicle_count({200.0, 20.0, 0.05, 0.15}) == 10);
    CHECK(vehicle_count({200.0, 20.0, 0.15, 0.15}) == 30);
    CHECK(vehicle_count({6.7, 20.0, 0.15, 0.15}) == 1);  // one vehicle length of road
    CHECK_THROWS_AS(vehicle_count({1.0, 20.0, 0.15, 0.15}), std::domain_error);  // rounds to 0
    CHECK_THROWS_AS(vehicle_count({200.0, 20.0, 0.2, 0.15}), std::domain_error);  // above knee
    CHECK_THROWS_AS(vehicle_count({200.0, 20.0, 0.0, 0.15}), std::domain_error);
}

TEST_CASE("freeway placement") {
    const FreewayLayout two{200.0, 20.0, 0.01, 0.15};
    const auto mid = place_freeway_vehicles(two, PlacementMode::Equispaced);
    REQUIRE(mid.size() == 2);
    CHECK(mid[0] == doctest::Approx(50.0));
    CHECK(mid[1] == doctest::Approx(150.0));

    const FreewayLayout dense{200.0, 20.0, 0.15, 0.15};
    const auto a = place_freeway_vehicles(dense, PlacementMode::UniformRandom, 42);
    const auto b = place_freeway_vehicles(dense, PlacementMode::UniformRandom, 42);
    CHECK(a == b);
    for (double x : a) {
        CHECK(x >= 0.0);
        CHECK(x <= 200.0);
    }
    // Law of large numbers on the uniform mode.
    const FreewayLayout huge{1e6, 20.0, 0.1, 0.15};
    const auto many = place_freeway_vehicles(huge, PlacementMode::UniformRandom, 7);
    double mean = 0.0;
    for (double x : many) mean += x;
    mean /= static_cast<double>(many.size());
    CHECK(std::fabs(mean - 5e5) / 5e5 < 0.01);
}

TEST_CASE("manhattan grid build") {
    ManhattanGridSpec spec;  // paper defaults: 433 x 250, building 413 x 30
    const auto grid = build_manhattan_grid(spec);
    CHECK(grid.nodes.size() == 9);  // 2x2 blocks -> 3x3 intersections
    CHECK(grid.buildings.size() == 4);
    // Sidewalk loops sit one sidewalk width off the building faces.
    CHECK(grid.buildings[0].min_x - grid.sidewalks[0].min_x == doctest::Approx(3.0));
    CHECK(grid.sidewalks[0].max_y - grid.buildings[0].max_y == doctest::Approx(3.0));
    // Four lanes of 3.5 m per road: 14 m of drivable width.
    const double width = 2.0 * (grid.lane_offset_m(spec.lanes_per_direction - 1) +
                                0.5 * spec.lane_width_m);
    CHECK(width == doctest::Approx(14.0));

    // Single block: the lane graph is a closed rectangular circuit.
    ManhattanGridSpec single = spec;
    single.blocks_x = 1;
    single.blocks_y = 1;
    const auto ring = build_manhattan_grid(single);
    CHECK(ring.nodes.size() == 4);
    CHECK(ring.edges.size() == 8);  // both directions on each side
    for (std::size_t n = 0; n < ring.nodes.size(); ++n) {
        int outs = 0;
        for (int d = 0; d < 4; ++d) {
            if (ring.out_edges[n][d] >= 0) ++outs;
        }
        CHECK(outs == 2);
    }

    // Directed lane graph is strongly connected (BFS from node 0 reaches all).
    std::vector<char> seen(grid.nodes.size(), 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
        const int n = queue.back();
        queue.pop_back();
        for (int d = 0; d < 4; ++d) {
            const int e = grid.out_edges[static_cast<std::size_t>(n)][d];
            if (e < 0) continue;
            const int to = grid.edges[static_cast<std::size_t>(e)].to_node;
            if (!seen[static_cast<std::size_t>(to)]) {
                seen[static_cast<std::size_t>(to)] = 1;
                queue.push_back(to);
            }
        }
    }
    for (char s : seen) CHECK(s == 1);

    ManhattanGridSpec bad = spec;
    bad.building_x_m = 430.0;  // leaves no room for sidewalks and lanes
    CHECK_THROWS_AS(build_manhattan_grid(bad), geometry_error);
    ManhattanGridSpec badp = spec;
    badp.turn_probabilities = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(build_manhattan_grid(badp), std::domain_error);
}

TEST_CASE("straight-line motion is exact mid-block") {
    ManhattanGridSpec spec;
    const auto grid = build_manhattan_grid(spec);
    MobilityState state(grid, 5, 123);
    const double dt = 0.05;  // 60 km/h * 0.05 s = 0.833 m, well under a block
    std::vector<Vec2> before;
    for (std::size_t i = 0; i < state.size(); ++i) before.push_back(state.position(grid, i));
    std::vector<Vec2> headings;
    for (std::size_t i = 0; i < state.size(); ++i) headings.push_back(state.heading(grid, i));
    std::vector<double> s_before;
    for (std::size_t i = 0; i < state.size(); ++i) s_before.push_back(state.vehicle(i).s_m);
    state.step(grid, dt);
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double step_m = state.vehicle(i).speed_mps * dt;
        if (s_before[i] + step_m <
            grid.edges[static_cast<std::size_t>(state.vehicle(i).edge)].length_m) {
            const Vec2 p = state.position(grid, i);
            CHECK(p.x == doctest::Approx(before[i].x + headings[i].x * step_m).epsilon(1e-12));
            CHECK(p.y == doctest::Approx(before[i].y + headings[i].y * step_m).epsilon(1e-12));
        }
    }
}

TEST_CASE("degenerate straight-only turns never leave the road") {
    ManhattanGridSpec spec;
    spec.blocks_x = 3;
    spec.blocks_y = 3;
    spec.turn_probabilities = {0.0, 1.0, 0.0};
    const auto grid = build_manhattan_grid(spec);
    MobilityState state(grid, 8, 9);
    // A road is identified by its axis and its cross coordinate.
    std::vector<int> axis;
    std::vector<double> cross;
    for (std::size_t i = 0; i < state.size(); ++i) {
        const auto& e = grid.edges[static_cast<std::size_t>(state.vehicle(i).edge)];
        axis.push_back(e.direction % 2);
        const Vec2 a = grid.nodes[static_cast<std::size_t>(e.from_node)];
        cross.push_back(e.direction % 2 == 0 ? a.y : a.x);
    }
    for (int step = 0; step < 400; ++step) {
        state.step(grid, 1.0);
        for (std::size_t i = 0; i < state.size(); ++i) {
            const auto& e = grid.edges[static_cast<std::size_t>(state.vehicle(i).edge)];
            CHECK(e.direction % 2 == axis[i]);
            const Vec2 a = grid.nodes[static_cast<std::size_t>(e.from_node)];
            CHECK((e.direction % 2 == 0 ? a.y : a.x) == doctest::Approx(cross[i]));
        }
    }
    CHECK(state.turn_counts().left == 0);
    CHECK(state.turn_counts().right == 0);
}

TEST_CASE("turn fractions match the configured distribution") {
    ManhattanGridSpec spec;
    spec.blocks_x = 5;
    spec.blocks_y = 5;
    const auto grid = build_manhattan_grid(spec);
    MobilityState state(grid, 150, 4242);
    while (state.turn_counts().total() < 100000) {
        state.step(grid, 5.0);
    }
    const auto& t = state.turn_counts();
    const double total = static_cast<double>(t.total());
    CHECK(std::fabs(t.left / total - 0.25) < 0.01);
    CHECK(std::fabs(t.straight / total - 0.5) < 0.01);
    CHECK(std::fabs(t.right / total - 0.25) < 0.01);
}

TEST_CASE("mobility conserves vehicles, stays on lanes, reproduces by seed") {
    ManhattanGridSpec spec;
    const auto grid = build_manhattan_grid(spec);
    MobilityState a(grid, 20, 31337);
    MobilityState b(grid, 20, 31337);
    for (int step = 0; step < 50; ++step) {
        a.step(grid, 0.7);
        b.step(grid, 0.7);
    }
    REQUIRE(a.size() == 20);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.vehicle(i).edge == b.vehicle(i).edge);
        CHECK(a.vehicle(i).s_m == b.vehicle(i).s_m);  // bit-identical
        // Distance from the position to its lane segment is zero.
        const auto& e = grid.edges[static_cast<std::size_t>(a.vehicle(i).edge)];
        const Vec2 p = a.position(grid, i);
        const Vec2 p0 = grid.lane_point(e, a.vehicle(i).lane, 0.0);
        const Vec2 p1 = grid.lane_point(e, a.vehicle(i).lane, e.length_m);
        const double vx = p1.x - p0.x, vy = p1.y - p0.y;
        const double t = ((p.x - p0.x) * vx + (p.y - p0.y) * vy) / (vx * vx + vy * vy);
        const double cx = p0.x + t * vx, cy = p0.y + t * vy;
        CHECK(std::hypot(p.x - cx, p.y - cy) < 1e-6);
        CHECK(t >= -1e-12);
        CHECK(t <= 1.0 + 1e-12);
    }
}

TEST_CASE("sidewalk sampling lands on the loops") {
    ManhattanGridSpec spec;
    const auto grid = build_manhattan_grid(spec);
    std::mt19937_64 gen(5);
    for (int i = 0; i < 200; ++i) {
        const Vec2 p = sample_sidewalk_point(grid, gen);
        bool on_some = false;
        for (const auto& r : grid.sidewalks) {
            const bool on_x = std::fabs(p.x - r.min_x) < 1e-9 || std::fabs(p.x - r.max_x) < 1e-9;
            const bool on_y = std::fabs(p.y - r.min_y) < 1e-9 || std::fabs(p.y - r.max_y) < 1e-9;
            if ((on_x && p.y >= r.min_y - 1e-9 && p.y <= r.max_y + 1e-9) ||
                (on_y && p.x >= r.min_x - 1e-9 && p.x <= r.max_x + 1e-9)) {
                on_some = true;
                break;
            }
        }
        CHECK(on_some);
    }
}

TEST_CASE("segment-rectangle intersection oracle cases") {
    const Rect r{10.0, 10.0, 20.0, 20.0};
    CHECK(segment_intersects_rect({0.0, 15.0}, {30.0, 15.0}, r));   // straight through
    CHECK(segment_intersects_rect({15.0, 15.0}, {40.0, 40.0}, r));  // endpoint inside
    CHECK(segment_intersects_rect({0.0, 0.0}, {10.0, 10.0}, r));    // touches a corner
    CHECK_FALSE(segment_intersects_rect({0.0, 0.0}, {30.0, 5.0}, r));
    CHECK_FALSE(segment_intersects_rect({0.0, 25.0}, {9.0, 10.0}, r));
}
