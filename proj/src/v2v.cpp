#include "urllc/v2v.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "urllc/errors.hpp"
#include "urllc/rng.hpp"
#include "urllc/v2i.hpp"

namespace urllc {

void UrbanPathLoss::validate() const {
    if (!(ref_gain > 0.0)) {
        throw std::domain_error("UrbanPathLoss: reference gain must be > 0");
    }
    if (!(los_exponent >= 2.0) || !(nlos_exponent >= los_exponent)) {
        throw std::domain_error("UrbanPathLoss: exponents must satisfy 2 <= LOS <= NLOS");
    }
    if (nlos_penalty_db < 0.0) {
        throw std::domain_error("UrbanPathLoss: NLOS penalty must be >= 0 dB");
    }
}

void UrbanScenario::validate() const {
    pathloss.validate();
    if (cue_positions.empty()) {
        throw std::domain_error("UrbanScenario: need at least one CUE / resource block");
    }
    if (vue_pairs.size() > cue_positions.size()) {
        throw std::domain_error("UrbanScenario: more VUE pairs than resource blocks");
    }
    if (vue_qos.size() != vue_pairs.size()) {
        throw std::domain_error("UrbanScenario: need one QoS entry per VUE pair");
    }
    if (!(rb_bandwidth_hz > 0.0 && cue_power_cap_w > 0.0 && vue_power_cap_w > 0.0 &&
          noise_power_w > 0.0)) {
        throw std::domain_error("UrbanScenario: bandwidth, caps and noise must be > 0");
    }
    for (double g : cue_to_bs) {
        if (!(g > 0.0)) {
            throw std::domain_error("UrbanScenario: link gains must be > 0");
        }
    }
}

bool is_line_of_sight(const Vec2& a, const Vec2& b, const std::vector<Rect>& buildings) {
    for (const auto& r : buildings) {
        if (segment_intersects_rect(a, b, r)) {
            return false;
        }
    }
    return true;
}

double urban_link_gain(const Vec2& a, const Vec2& b, const std::vector<Rect>& buildings,
                       const UrbanPathLoss& pathloss) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double d = std::max(1.0, std::sqrt(dx * dx + dy * dy));  // clamp inside 1 m reference
    if (is_line_of_sight(a, b, buildings)) {
        return pathloss.ref_gain * std::pow(d, -pathloss.los_exponent);
    }
    const double penalty = std::pow(10.0, -pathloss.nlos_penalty_db / 10.0);
    return pathloss.ref_gain * penalty * std::pow(d, -pathloss.nlos_exponent);
}

UrbanScenario build_urban_scenario(const ManhattanGridSpec& grid_spec, const UrbanCounts& counts,
                                   const UrbanQos& qos, std::uint64_t seed) {
    if (counts.num_cues < 1 || counts.num_vue_pairs < 1) {
        throw std::domain_error("build_urban_scenario: counts must be >= 1");
    }
    if (counts.num_vue_pairs > counts.num_cues) {
        throw std::domain_error("build_urban_scenario: VUE pairs must not exceed resource blocks");
    }
    if (!(counts.pair_distance_cap_m > 0.0)) {
        throw std::domain_error("build_urban_scenario: pair distance cap must be > 0");
    }
    qos.qos.validate();
    qos.arrivals.validate();

    const ManhattanGrid grid = build_manhattan_grid(grid_spec);
    UrbanScenario sc;
    sc.grid_spec = grid_spec;
    sc.buildings = grid.buildings;
    sc.bs_position = {0.5 * grid_spec.blocks_x * grid_spec.block_pitch_x_m,
                      0.5 * grid_spec.blocks_y * grid_spec.block_pitch_y_m};
    sc.noise_power_w = thermal_noise_w(sc.rb_bandwidth_hz);

    std::mt19937_64 gen(rng::derive_stream(seed, "urban-placement"));
    sc.cue_positions.reserve(static_cast<std::size_t>(counts.num_cues));
    for (int i = 0; i < counts.num_cues; ++i) {
        sc.cue_positions.push_back(sample_sidewalk_point(grid, gen));
    }

    // VUE transmitters come from a mobility snapshot advanced away from its
    // spawn layout; receivers are rejection-sampled lane points inside the
    // pair distance cap.
    MobilityState world(grid, counts.num_vue_pairs, rng::derive_stream(seed, "urban-mobility"));
    for (int step = 0; step < 10; ++step) {
        world.step(grid, 1.0);
    }
    std::uniform_int_distribution<std::size_t> pick_edge(0, grid.edges.size() - 1);
    std::uniform_int_distribution<int> pick_lane(0, grid_spec.lanes_per_direction - 1);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    for (int v = 0; v < counts.num_vue_pairs; ++v) {
        const Vec2 tx = world.position(grid, static_cast<std::size_t>(v));
        bool placed = false;
        for (int attempt = 0; attempt < 2000; ++attempt) {
            const auto& edge = grid.edges[pick_edge(gen)];
            const double s = frac(gen) * edge.length_m;
            const Vec2 rx = grid.lane_point(edge, pick_lane(gen), s);
            const double d = std::hypot(rx.x - tx.x, rx.y - tx.y);
            if (d >= 1.0 && d <= counts.pair_distance_cap_m) {
                sc.vue_pairs.push_back({tx, rx});
                placed = true;
                break;
            }
        }
        if (!placed) {
            throw geometry_error(
                "build_urban_scenario: no lane point within the pair distance cap of VUE " +
                std::to_string(v));
        }
    }
    sc.vue_qos.assign(sc.vue_pairs.size(), qos);

    const std::size_t nc = sc.cue_positions.size();
    const std::size_t nv = sc.vue_pairs.size();
    sc.cue_to_bs.resize(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        sc.cue_to_bs[c] =
            urban_link_gain(sc.cue_positions[c], sc.bs_position, sc.buildings, sc.pathloss);
    }
    sc.vue_to_bs.resize(nv);
    sc.vue_to_vue.resize(nv);
    sc.cue_to_vue.assign(nc, std::vector<double>(nv, 0.0));
    for (std::size_t v = 0; v < nv; ++v) {
        sc.vue_to_bs[v] =
            urban_link_gain(sc.vue_pairs[v].tx, sc.bs_position, sc.buildings, sc.pathloss);
        sc.vue_to_vue[v] =
            urban_link_gain(sc.vue_pairs[v].tx, sc.vue_pairs[v].rx, sc.buildings, sc.pathloss);
        for (std::size_t c = 0; c < nc; ++c) {
            sc.cue_to_vue[c][v] =
                urban_link_gain(sc.cue_positions[c], sc.vue_pairs[v].rx, sc.buildings, sc.pathloss);
        }
    }
    sc.validate();
    return sc;
}

double vue_rate_requirement(const UrbanQos& qos, RequirementMode mode) {
    if (mode == RequirementMode::EffectiveBandwidth) {
        return min_rate_for_qos(qos.arrivals, qos.qos);
    }
    return static_min_rate(qos.arrivals.packet_bits, qos.qos.latency_bound_s);
}

namespace {

struct PairOperatingPoint {
    bool feasible = false;
    double cue_power_w = 0.0;
    double vue_power_w = 0.0;
    double cue_sinr = 0.0;
};

// Max CUE SINR on one RB subject to the VUE hitting its SINR target under
// mutual interference. Along the constraint boundary
//   P_v(P_c) = s_req (sigma^2 + P_c g_cv) / g_vv
// the CUE SINR increases with P_c, so the optimum sits at the largest P_c
// whose boundary partner still fits the VUE cap (bisection, 1e-6 W).
PairOperatingPoint solve_pair(double s_req, double g_cb, double g_vb, double g_vv, double g_cv,
                              double noise_w, double cue_cap_w, double vue_cap_w) {
    PairOperatingPoint op;
    auto vue_needed = [&](double pc) { return s_req * (noise_w + pc * g_cv) / g_vv; };
    if (vue_needed(0.0) > vue_cap_w) {
        return op;  // VUE cannot make rate even with a silent CUE
    }
    double pc = cue_cap_w;
    if (vue_needed(pc) > vue_cap_w) {
        double lo = 0.0, hi = cue_cap_w;
        while (hi - lo > 1e-6) {
            const double mid = 0.5 * (lo + hi);
            if (vue_needed(mid) <= vue_cap_w) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        pc = lo;
    }
    op.feasible = true;
    op.cue_power_w = pc;
    op.vue_power_w = std::min(vue_needed(pc), vue_cap_w);
    op.cue_sinr = pc * g_cb / (noise_w + op.vue_power_w * g_vb);
    return op;
}

// Perfect matching on the VUE side restricted to edges with utility >= tau
// (Kuhn's augmenting paths; sizes here are tens at most).
bool has_perfect_matching(const std::vector<std::vector<double>>& utility, double tau,
                          std::vector<int>* rb_of_vue) {
    const std::size_t nv = utility.size();
    const std::size_t nc = nv == 0 ? 0 : utility[0].size();
    std::vector<int> cue_match(nc, -1);
    std::vector<char> visited(nc, 0);
    auto augment = [&](auto&& self, std::size_t v) -> bool {
        for (std::size_t c = 0; c < nc; ++c) {
            if (visited[c] || utility[v][c] < tau) continue;
            visited[c] = 1;
            if (cue_match[c] < 0 || self(self, static_cast<std::size_t>(cue_match[c]))) {
                cue_match[c] = static_cast<int>(v);
                return true;
            }
        }
        return false;
    };
    for (std::size_t v = 0; v < nv; ++v) {
        std::fill(visited.begin(), visited.end(), 0);
        if (!augment(augment, v)) {
            return false;
        }
    }
    if (rb_of_vue) {
        rb_of_vue->assign(nv, -1);
        for (std::size_t c = 0; c < nc; ++c) {
            if (cue_match[c] >= 0) {
                (*rb_of_vue)[static_cast<std::size_t>(cue_match[c])] = static_cast<int>(c);
            }
        }
    }
    return true;
}

}  // namespace

SharingAssignment allocate_sharing(const UrbanScenario& sc, RequirementMode mode) {
    sc.validate();
    const std::size_t nv = sc.vue_pairs.size();
    const std::size_t nc = sc.cue_positions.size();

    std::vector<double> s_req(nv);
    std::vector<double> rate_req(nv);
    for (std::size_t v = 0; v < nv; ++v) {
        rate_req[v] = vue_rate_requirement(sc.vue_qos[v], mode);
        s_req[v] = std::exp2(rate_req[v] / sc.rb_bandwidth_hz) - 1.0;
    }

    std::vector<std::vector<PairOperatingPoint>> op(nv, std::vector<PairOperatingPoint>(nc));
    std::vector<std::vector<double>> utility(nv, std::vector<double>(nc, -1.0));
    std::vector<double> candidates;
    for (std::size_t v = 0; v < nv; ++v) {
        for (std::size_t c = 0; c < nc; ++c) {
            op[v][c] = solve_pair(s_req[v], sc.cue_to_bs[c], sc.vue_to_bs[v], sc.vue_to_vue[v],
                                  sc.cue_to_vue[c][v], sc.noise_power_w, sc.cue_power_cap_w,
                                  sc.vue_power_cap_w);
            if (op[v][c].feasible) {
                utility[v][c] = op[v][c].cue_sinr;
                candidates.push_back(op[v][c].cue_sinr);
            }
        }
    }
    if (!has_perfect_matching(utility, 0.0, nullptr)) {
        throw infeasible_error(
            "allocate_sharing: no resource-block matching satisfies every VUE requirement");
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    // Largest threshold that still admits a perfect matching (predicate is
    // monotone decreasing in tau).
    std::size_t lo = 0, hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        if (has_perfect_matching(utility, candidates[mid], nullptr)) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    SharingAssignment out;
    has_perfect_matching(utility, candidates[lo], &out.vue_to_rb);

    out.cue_power_w.assign(nc, sc.cue_power_cap_w);
    out.vue_power_w.assign(nv, 0.0);
    out.vue_rate_bps.assign(nv, 0.0);
    double min_sinr = std::numeric_limits<double>::infinity();
    std::vector<char> shared(nc, 0);
    for (std::size_t v = 0; v < nv; ++v) {
        const auto c = static_cast<std::size_t>(out.vue_to_rb[v]);
        shared[c] = 1;
        out.cue_power_w[c] = op[v][c].cue_power_w;
        out.vue_power_w[v] = op[v][c].vue_power_w;
        // Achieved VUE SINR sits on the constraint boundary, so the link
        // sustains the requirement rate exactly.
        out.vue_rate_bps[v] = rate_req[v];
        min_sinr = std::min(min_sinr, op[v][c].cue_sinr);
    }
    for (std::size_t c = 0; c < nc; ++c) {
        if (!shared[c]) {
            min_sinr = std::min(min_sinr, sc.cue_power_cap_w * sc.cue_to_bs[c] / sc.noise_power_w);
        }
    }
    out.min_cue_sinr = min_sinr;
    return out;
}

EpisodeResult run_episode(const UrbanScenario& sc, const SharingAssignment& assignment,
                          std::uint64_t packets, std::uint64_t seed) {
    sc.validate();
    if (assignment.vue_to_rb.size() != sc.vue_pairs.size()) {
        throw std::domain_error("run_episode: assignment does not cover the scenario VUEs");
    }
    EpisodeResult result;
    result.min_cue_sinr_db = 10.0 * std::log10(assignment.min_cue_sinr);
    const std::uint64_t stream = rng::derive_stream(seed, "urban-episode");
    for (std::size_t v = 0; v < sc.vue_pairs.size(); ++v) {
        auto sim = simulate_fifo_queue(sc.vue_qos[v].arrivals, assignment.vue_rate_bps[v], packets,
                                       rng::mix(stream, v));
        result.vue_violation.push_back(
            sim.sojourn.violation_at(sc.vue_qos[v].qos.latency_bound_s));
        result.vue_latency.push_back(std::move(sim.sojourn));
    }
    return result;
}

}  // namespace urllc
