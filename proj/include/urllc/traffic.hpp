#pragma once

// Road-traffic generators: the Underwood macroscopic speed-density law used
// by the freeway case, and a Manhattan-grid microscopic mobility world used
// by the urban case.

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace urllc {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Rect {
    double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;

    bool contains(const Vec2& p) const {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }
};

/// True when the open segment a-b crosses or touches the rectangle.
bool segment_intersects_rect(const Vec2& a, const Vec2& b, const Rect& r);

// ---------------------------------------------------------------------------
// Macroscopic freeway model
// ---------------------------------------------------------------------------

/// Underwood speed-density law v(kappa) = v_F exp(-kappa / kappa_M).
struct UnderwoodModel {
    double free_flow_speed_kmh = 80.0;
    double max_density_per_m = 0.15;

    void validate() const;
};

double underwood_speed_kmh(const UnderwoodModel& model, double density_per_m);

struct FreewayLayout {
    double road_length_m = 200.0;
    double bs_offset_m = 20.0;
    double density_per_m = 0.05;
    double max_density_per_m = 0.15;  // mirrors the Underwood knee

    void validate() const;
};

/// K = round(kappa * d_R); throws when the road is too short to host one
/// vehicle at the given density.
int vehicle_count(const FreewayLayout& layout);

enum class PlacementMode { Equispaced, UniformRandom };

/// Vehicle positions along [0, d_R]. Equispaced places cell midpoints;
/// UniformRandom is reproducible from the seed.
std::vector<double> place_freeway_vehicles(const FreewayLayout& layout, PlacementMode mode,
                                           std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Microscopic urban grid
// ---------------------------------------------------------------------------

struct ManhattanGridSpec {
    int blocks_x = 2;
    int blocks_y = 2;
    double block_pitch_x_m = 433.0;
    double block_pitch_y_m = 250.0;
    double building_x_m = 413.0;
    double building_y_m = 30.0;
    double sidewalk_width_m = 3.0;
    int lanes_per_direction = 2;
    double lane_width_m = 3.5;
    double vehicle_speed_kmh = 60.0;
    // (left, straight, right), must sum to 1.
    std::array<double, 3> turn_probabilities = {0.25, 0.5, 0.25};

    void validate() const;
};

/// Directed road segment between adjacent intersections. Lanes run parallel
/// to the node-to-node axis, offset to the right of travel.
struct LaneEdge {
    int from_node = 0;
    int to_node = 0;
    int direction = 0;  // 0 E, 1 N, 2 W, 3 S
    double length_m = 0.0;
};

struct ManhattanGrid {
    ManhattanGridSpec spec;
    std::vector<Vec2> nodes;
    std::vector<LaneEdge> edges;
    // edge id by (node, direction); -1 when the grid ends there.
    std::vector<std::array<int, 4>> out_edges;
    std::vector<Rect> buildings;
    std::vector<Rect> sidewalks;  // sidewalk centerline rectangles around buildings

    double lane_offset_m(int lane_index) const;
    Vec2 lane_point(const LaneEdge& edge, int lane_index, double s_m) const;
    Vec2 direction_vector(int direction) const;
};

/// Builds the lane graph, building footprints and sidewalk loops. Throws
/// geometry_error when roads and sidewalks cannot fit in the block pitch.
ManhattanGrid build_manhattan_grid(const ManhattanGridSpec& spec);

/// Uniform point on the sidewalk loops (perimeter-weighted).
Vec2 sample_sidewalk_point(const ManhattanGrid& grid, std::mt19937_64& gen);

struct VehicleState {
    int edge = 0;
    int lane = 0;
    double s_m = 0.0;       // distance along the edge
    double speed_mps = 0.0;
};

/// Counters of turn decisions taken where all three options existed;
/// lets tests check the sampled turn fractions directly.
struct TurnCounts {
    std::uint64_t left = 0;
    std::uint64_t straight = 0;
    std::uint64_t right = 0;

    std::uint64_t total() const { return left + straight + right; }
};

class MobilityState {
  public:
    MobilityState(const ManhattanGrid& grid, int num_vehicles, std::uint64_t seed);

    std::size_t size() const { return vehicles_.size(); }
    const VehicleState& vehicle(std::size_t i) const { return vehicles_[i]; }
    Vec2 position(const ManhattanGrid& grid, std::size_t i) const;
    Vec2 heading(const ManhattanGrid& grid, std::size_t i) const;
    const TurnCounts& turn_counts() const { return turns_; }

    /// Advances every vehicle by speed*dt along its lane, sampling turns at
    /// intersections. Unavailable options are renormalized away; a dead end
    /// (or an all-zero restriction) U-turns.
    void step(const ManhattanGrid& grid, double dt_s);

  private:
    std::vector<VehicleState> vehicles_;
    std::vector<std::mt19937_64> streams_;  // one per vehicle, order-independent
    TurnCounts turns_;
};

}  // namespace urllc
