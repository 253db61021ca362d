#pragma once

// Urban uplink spectrum sharing: VUE pairs reuse CUE resource blocks; the
// allocator maximizes the minimum CUE SINR subject to every VUE meeting its
// queueing latency/reliability requirement (turned into a rate via the
// effective-bandwidth transformation, or the static one-packet baseline).

#include <cstdint>
#include <vector>

#include "urllc/queueing.hpp"
#include "urllc/traffic.hpp"

namespace urllc {

/// Log-distance urban path loss with separate LOS/NLOS exponents; links
/// whose straight path crosses a building are NLOS and take an extra
/// penalty on the reference gain.
struct UrbanPathLoss {
    double ref_gain = 2e-5;  // gain at 1 m (about -47 dB at 2 GHz)
    double los_exponent = 2.2;
    double nlos_exponent = 4.0;
    double nlos_penalty_db = 20.0;

    void validate() const;
};

struct VuePair {
    Vec2 tx;
    Vec2 rx;
};

struct UrbanQos {
    QosRequirement qos;        // L_th, epsilon
    ArrivalProcess arrivals;   // lambda, C_p
};

struct UrbanScenario {
    ManhattanGridSpec grid_spec;
    std::vector<Rect> buildings;
    Vec2 bs_position;
    std::vector<Vec2> cue_positions;   // one resource block per CUE
    std::vector<VuePair> vue_pairs;
    std::vector<UrbanQos> vue_qos;     // one per VUE pair
    double rb_bandwidth_hz = 180e3;
    double cue_power_cap_w = 0.2;
    double vue_power_cap_w = 0.2;
    double noise_power_w = 1e-15;
    UrbanPathLoss pathloss;

    // link gains filled by build_urban_scenario
    std::vector<double> cue_to_bs;                  // desired CUE uplink
    std::vector<double> vue_to_bs;                  // VUE interference at BS
    std::vector<double> vue_to_vue;                 // desired V2V link
    std::vector<std::vector<double>> cue_to_vue;    // [cue][vue] interference at VUE rx

    void validate() const;
};

struct UrbanCounts {
    int num_cues = 10;
    int num_vue_pairs = 5;
    double pair_distance_cap_m = 60.0;
};

/// Gain of the a-b link given the building map.
double urban_link_gain(const Vec2& a, const Vec2& b, const std::vector<Rect>& buildings,
                       const UrbanPathLoss& pathloss);
bool is_line_of_sight(const Vec2& a, const Vec2& b, const std::vector<Rect>& buildings);

/// Builds the scenario: CUEs uniform along the sidewalks, VUE pairs from a
/// mobility snapshot (receiver within the distance cap of its transmitter,
/// rejection-sampled), BS at the region center, all link gains classified
/// LOS/NLOS. Throws geometry_error when placement cannot be satisfied.
UrbanScenario build_urban_scenario(const ManhattanGridSpec& grid_spec, const UrbanCounts& counts,
                                   const UrbanQos& qos, std::uint64_t seed);

enum class RequirementMode { EffectiveBandwidth, Static };

/// Latency/reliability requirement turned into a minimum service rate.
double vue_rate_requirement(const UrbanQos& qos, RequirementMode mode);

struct SharingAssignment {
    std::vector<int> vue_to_rb;        // injective; index into cue_positions
    std::vector<double> cue_power_w;   // per CUE (cap for unshared CUEs)
    std::vector<double> vue_power_w;   // per VUE
    std::vector<double> vue_rate_bps;  // service rate the VUE link sustains
    double min_cue_sinr = 0.0;         // over all CUEs, shared or not
};

/// Max-min CUE SINR assignment. Per (vue, rb) pair the best feasible power
/// couple is found on the VUE-rate constraint boundary (bisection, 1e-6 W),
/// then a bottleneck bipartite matching picks the RB per VUE. Unmatched CUEs
/// transmit at cap without interference and still count in the minimum.
/// Throws infeasible_error when no matching serves every VUE.
SharingAssignment allocate_sharing(const UrbanScenario& scenario, RequirementMode mode);

struct EpisodeResult {
    std::vector<LatencySampleSet> vue_latency;
    std::vector<double> vue_violation;  // at each VUE's own L_th
    double min_cue_sinr_db = 0.0;
};

/// Simulates every VUE queue at its allocated service rate for the given
/// number of packets and reports per-VUE latency samples and violations.
EpisodeResult run_episode(const UrbanScenario& scenario, const SharingAssignment& assignment,
                          std::uint64_t packets, std::uint64_t seed);

}  // namespace urllc
