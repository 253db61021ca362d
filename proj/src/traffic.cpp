#include "urllc/traffic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "urllc/errors.hpp"
#include "urllc/rng.hpp"

namespace urllc {

namespace {

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        const double v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
        if (v > 1e-12) return 1;
        if (v < -1e-12) return -1;
        return 0;
    };
    const int o1 = orient(a, b, c), o2 = orient(a, b, d);
    const int o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    auto on = [&](const Vec2& p, const Vec2& q, const Vec2& r) {
        return orient(p, q, r) == 0 && r.x >= std::min(p.x, q.x) - 1e-12 &&
               r.x <= std::max(p.x, q.x) + 1e-12 && r.y >= std::min(p.y, q.y) - 1e-12 &&
               r.y <= std::max(p.y, q.y) + 1e-12;
    };
    return on(a, b, c) || on(a, b, d) || on(c, d, a) || on(c, d, b);
}

}  // namespace

bool segment_intersects_rect(const Vec2& a, const Vec2& b, const Rect& r) {
    if (r.contains(a) || r.contains(b)) return true;
    const Vec2 c0{r.min_x, r.min_y}, c1{r.max_x, r.min_y}, c2{r.max_x, r.max_y},
        c3{r.min_x, r.max_y};
    return segments_cross(a, b, c0, c1) || segments_cross(a, b, c1, c2) ||
           segments_cross(a, b, c2, c3) || segments_cross(a, b, c3, c0);
}

// ---------------------------------------------------------------------------
// Freeway
// ---------------------------------------------------------------------------

void UnderwoodModel::validate() const {
    if (!(free_flow_speed_kmh > 0.0)) {
        throw std::domain_error("UnderwoodModel: free-flow speed must be > 0");
    }
    if (!(max_density_per_m > 0.0)) {
        throw std::domain_error("UnderwoodModel: maximum density must be > 0");
    }
}

double underwood_speed_kmh(const UnderwoodModel& model, double density_per_m) {
    model.validate();
    if (density_per_m < 0.0) {
        throw std::domain_error("underwood_speed: density must be >= 0");
    }
    return model.free_flow_speed_kmh * std::exp(-density_per_m / model.max_density_per_m);
}

void FreewayLayout::validate() const {
    if (!(road_length_m > 0.0) || !(bs_offset_m > 0.0)) {
        throw std::domain_error("FreewayLayout: road length and BS offset must be > 0");
    }
    if (!(density_per_m > 0.0 && density_per_m <= max_density_per_m)) {
        throw std::domain_error(
            "FreewayLayout: density must satisfy 0 < kappa <= kappa_max (kappa_max = " +
            std::to_string(max_density_per_m) + ")");
    }
}

int vehicle_count(const FreewayLayout& layout) {
    layout.validate();
    const long long k = std::llround(layout.density_per_m * layout.road_length_m);
    if (k < 1) {
        throw std::domain_error("vehicle_count: kappa * d_R rounds to zero vehicles");
    }
    return static_cast<int>(k);
}

std::vector<double> place_freeway_vehicles(const FreewayLayout& layout, PlacementMode mode,
                                           std::uint64_t seed) {
    const int k = vehicle_count(layout);
    std::vector<double> positions(static_cast<std::size_t>(k));
    if (mode == PlacementMode::Equispaced) {
        const double cell = layout.road_length_m / k;
        for (int i = 0; i < k; ++i) {
            positions[static_cast<std::size_t>(i)] = (i + 0.5) * cell;
        }
    } else {
        std::mt19937_64 gen(rng::derive_stream(seed, "freeway-placement"));
        std::uniform_real_distribution<double> u(0.0, layout.road_length_m);
        for (auto& p : positions) {
            p = u(gen);
        }
    }
    return positions;
}

// ---------------------------------------------------------------------------
// Manhattan grid
// ---------------------------------------------------------------------------

void ManhattanGridSpec::validate() const {
    if (blocks_x < 1 || blocks_y < 1) {
        throw std::domain_error("ManhattanGridSpec: need at least one block");
    }
    if (!(block_pitch_x_m > 0.0 && block_pitch_y_m > 0.0 && building_x_m > 0.0 &&
          building_y_m > 0.0 && sidewalk_width_m > 0.0 && lane_width_m > 0.0)) {
        throw std::domain_error("ManhattanGridSpec: geometry must be positive");
    }
    if (lanes_per_direction < 1) {
        throw std::domain_error("ManhattanGridSpec: need at least one lane per direction");
    }
    if (!(vehicle_speed_kmh > 0.0)) {
        throw std::domain_error("ManhattanGridSpec: vehicle speed must be > 0");
    }
    double total = 0.0;
    for (double p : turn_probabilities) {
        if (p < 0.0) {
            throw std::domain_error("ManhattanGridSpec: turn probabilities must be >= 0");
        }
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-9) {
        throw std::domain_error("ManhattanGridSpec: turn probabilities must sum to 1");
    }
}

double ManhattanGrid::lane_offset_m(int lane_index) const {
    return (0.5 + lane_index) * spec.lane_width_m;
}

Vec2 ManhattanGrid::direction_vector(int direction) const {
    switch (direction & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

Vec2 ManhattanGrid::lane_point(const LaneEdge& edge, int lane_index, double s_m) const {
    const Vec2 a = nodes[static_cast<std::size_t>(edge.from_node)];
    const Vec2 dir = direction_vector(edge.direction);
    const Vec2 right{dir.y, -dir.x};
    const double off = lane_offset_m(lane_index);
    return {a.x + dir.x * s_m + right.x * off, a.y + dir.y * s_m + right.y * off};
}

ManhattanGrid build_manhattan_grid(const ManhattanGridSpec& spec) {
    spec.validate();
    const double road_width_x = 2.0 * spec.lanes_per_direction * spec.lane_width_m;
    if (spec.building_x_m + 2.0 * spec.sidewalk_width_m + road_width_x >
            spec.block_pitch_x_m + 1e-9 ||
        spec.building_y_m + 2.0 * spec.sidewalk_width_m + road_width_x >
            spec.block_pitch_y_m + 1e-9) {
        throw geometry_error(
            "build_manhattan_grid: building, sidewalks and roads do not fit in the block pitch");
    }

    ManhattanGrid grid;
    grid.spec = spec;
    const int nx = spec.blocks_x + 1;  // intersection columns
    const int ny = spec.blocks_y + 1;
    auto node_id = [&](int i, int j) { return j * nx + i; };
    grid.nodes.resize(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            grid.nodes[static_cast<std::size_t>(node_id(i, j))] = {i * spec.block_pitch_x_m,
                                                                   j * spec.block_pitch_y_m};
        }
    }

    grid.out_edges.assign(grid.nodes.size(), {-1, -1, -1, -1});
    const int di[4] = {1, 0, -1, 0};
    const int dj[4] = {0, 1, 0, -1};
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            for (int d = 0; d < 4; ++d) {
                const int ti = i + di[d];
                const int tj = j + dj[d];
                if (ti < 0 || ti >= nx || tj < 0 || tj >= ny) continue;
                LaneEdge edge;
                edge.from_node = node_id(i, j);
                edge.to_node = node_id(ti, tj);
                edge.direction = d;
                edge.length_m = (d % 2 == 0) ? spec.block_pitch_x_m : spec.block_pitch_y_m;
                grid.out_edges[static_cast<std::size_t>(edge.from_node)][d] =
                    static_cast<int>(grid.edges.size());
                grid.edges.push_back(edge);
            }
        }
    }

    for (int bj = 0; bj < spec.blocks_y; ++bj) {
        for (int bi = 0; bi < spec.blocks_x; ++bi) {
            const double cx = (bi + 0.5) * spec.block_pitch_x_m;
            const double cy = (bj + 0.5) * spec.block_pitch_y_m;
            Rect building{cx - 0.5 * spec.building_x_m, cy - 0.5 * spec.building_y_m,
                          cx + 0.5 * spec.building_x_m, cy + 0.5 * spec.building_y_m};
            grid.buildings.push_back(building);
            grid.sidewalks.push_back(Rect{building.min_x - spec.sidewalk_width_m,
                                          building.min_y - spec.sidewalk_width_m,
                                          building.max_x + spec.sidewalk_width_m,
                                          building.max_y + spec.sidewalk_width_m});
        }
    }
    return grid;
}

Vec2 sample_sidewalk_point(const ManhattanGrid& grid, std::mt19937_64& gen) {
    if (grid.sidewalks.empty()) {
        throw geometry_error("sample_sidewalk_point: grid has no sidewalks");
    }
    double total = 0.0;
    for (const auto& r : grid.sidewalks) {
        total += 2.0 * ((r.max_x - r.min_x) + (r.max_y - r.min_y));
    }
    std::uniform_real_distribution<double> u(0.0, total);
    double t = u(gen);
    for (const auto& r : grid.sidewalks) {
        const double w = r.max_x - r.min_x;
        const double h = r.max_y - r.min_y;
        const double perim = 2.0 * (w + h);
        if (t > perim) {
            t -= perim;
            continue;
        }
        if (t < w) return {r.min_x + t, r.min_y};
        t -= w;
        if (t < h) return {r.max_x, r.min_y + t};
        t -= h;
        if (t < w) return {r.max_x - t, r.max_y};
        t -= w;
        return {r.min_x, r.max_y - t};
    }
    return {grid.sidewalks.back().min_x, grid.sidewalks.back().min_y};
}

MobilityState::MobilityState(const ManhattanGrid& grid, int num_vehicles, std::uint64_t seed) {
    if (num_vehicles < 0) {
        throw std::domain_error("MobilityState: vehicle count must be >= 0");
    }
    std::mt19937_64 spawn(rng::derive_stream(seed, "mobility-spawn"));
    std::uniform_int_distribution<std::size_t> pick_edge(0, grid.edges.size() - 1);
    std::uniform_int_distribution<int> pick_lane(0, grid.spec.lanes_per_direction - 1);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    const double speed_mps = grid.spec.vehicle_speed_kmh / 3.6;
    vehicles_.reserve(static_cast<std::size_t>(num_vehicles));
    streams_.reserve(static_cast<std::size_t>(num_vehicles));
    for (int i = 0; i < num_vehicles; ++i) {
        VehicleState v;
        v.edge = static_cast<int>(pick_edge(spawn));
        v.lane = pick_lane(spawn);
        v.s_m = frac(spawn) * grid.edges[static_cast<std::size_t>(v.edge)].length_m;
        v.speed_mps = speed_mps;
        vehicles_.push_back(v);
        streams_.emplace_back(rng::mix(rng::derive_stream(seed, "mobility-turns"),
                                       static_cast<std::uint64_t>(i)));
    }
}

Vec2 MobilityState::position(const ManhattanGrid& grid, std::size_t i) const {
    const VehicleState& v = vehicles_[i];
    return grid.lane_point(grid.edges[static_cast<std::size_t>(v.edge)], v.lane, v.s_m);
}

Vec2 MobilityState::heading(const ManhattanGrid& grid, std::size_t i) const {
    return grid.direction_vector(grid.edges[static_cast<std::size_t>(vehicles_[i].edge)].direction);
}

void MobilityState::step(const ManhattanGrid& grid, double dt_s) {
    if (!(dt_s > 0.0)) {
        throw std::domain_error("step_mobility: dt must be > 0");
    }
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (std::size_t i = 0; i < vehicles_.size(); ++i) {
        VehicleState& v = vehicles_[i];
        double remaining = v.speed_mps * dt_s;
        while (true) {
            const LaneEdge& edge = grid.edges[static_cast<std::size_t>(v.edge)];
            const double to_end = edge.length_m - v.s_m;
            if (remaining < to_end) {
                v.s_m += remaining;
                break;
            }
            remaining -= to_end;
            // Arrived at edge.to_node; pick the next direction.
            const int node = edge.to_node;
            const int incoming = edge.direction;
            const int option_dir[3] = {(incoming + 1) & 3, incoming, (incoming + 3) & 3};
            const auto& outs = grid.out_edges[static_cast<std::size_t>(node)];
            double weights[3];
            double total = 0.0;
            bool all_open = true;
            for (int k = 0; k < 3; ++k) {
                const bool open = outs[option_dir[k]] >= 0;
                all_open = all_open && open;
                weights[k] = open ? grid.spec.turn_probabilities[static_cast<std::size_t>(k)] : 0.0;
                total += weights[k];
            }
            int chosen;
            if (total <= 0.0) {
                chosen = outs[(incoming + 2) & 3];  // dead end or zero-weight corner: U-turn
            } else {
                double draw = u01(streams_[i]) * total;
                int k = 0;
                while (k < 2 && draw >= weights[k]) {
                    draw -= weights[k];
                    ++k;
                }
                if (outs[option_dir[k]] < 0) {
                    // Rounding pushed the draw onto a closed option; take the
                    // first open one instead.
                    for (int m = 0; m < 3; ++m) {
                        if (weights[m] > 0.0) {
                            k = m;
                            break;
                        }
                    }
                }
                if (all_open) {
                    if (k == 0) ++turns_.left;
                    if (k == 1) ++turns_.straight;
                    if (k == 2) ++turns_.right;
                }
                chosen = outs[option_dir[k]];
            }
            v.edge = chosen;
            v.s_m = 0.0;
        }
    }
}

}  // namespace urllc
