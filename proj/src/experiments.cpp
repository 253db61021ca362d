#include "urllc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "urllc/csv.hpp"
#include "urllc/numerics.hpp"
#include "urllc/outage.hpp"
#include "urllc/presets.hpp"
#include "urllc/queueing.hpp"
#include "urllc/rng.hpp"
#include "urllc/traffic.hpp"
#include "urllc/v2i.hpp"
#include "urllc/v2v.hpp"

namespace urllc {

namespace {

std::vector<double> logspace(double lo, double hi, int points) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    if (points == 1) {
        out.push_back(lo);
        return out;
    }
    const double step = (std::log10(hi) - std::log10(lo)) / (points - 1);
    for (int i = 0; i < points; ++i) {
        out.push_back(std::pow(10.0, std::log10(lo) + step * i));
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, int points) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    if (points == 1) {
        out.push_back(lo);
        return out;
    }
    const double step = (hi - lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
        out.push_back(lo + step * i);
    }
    return out;
}

std::vector<std::string> split_csv_field(const std::string& text) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        items.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
    return items;
}

Precoder precoder_from_name(const std::string& name) {
    if (name == "mf") return Precoder::MatchedFilter;
    if (name == "zf") return Precoder::ZeroForcing;
    throw std::domain_error("unknown precoder '" + name + "' (expected mf or zf)");
}

std::string out_path(const std::string& out_dir, const std::string& file) {
    std::filesystem::create_directories(out_dir);
    return (std::filesystem::path(out_dir) / file).string();
}

std::vector<std::string> run_outage_sweep(const ExperimentConfig& cfg, const std::string& out_dir) {
    const auto grid = ResourceGridConfig::from_spacing(
        numerology_spacing_hz(static_cast<int>(cfg.get_int("numerology"))),
        cfg.get_double("bandwidth_hz"), static_cast<int>(cfg.get_int("packet_bits")));
    const auto latencies_ms = logspace(cfg.get_double("latency_ms_min"),
                                       cfg.get_double("latency_ms_max"),
                                       static_cast<int>(cfg.get_int("latency_points")));
    std::vector<double> latencies_s;
    for (double ms : latencies_ms) latencies_s.push_back(ms * 1e-3);
    const double correlation = cfg.get_double("correlation");
    const auto trials = static_cast<std::uint64_t>(cfg.get_int("mc_trials"));
    const std::uint64_t mc_seed = rng::derive_stream(cfg.seed(), "outage-mc");

    const std::string path = out_path(out_dir, "outage_sweep.csv");
    CsvWriter csv(path, {"latency_ms", "n_rx", "avg_snr_db", "outage"});
    for (double n_rx : cfg.get_list("n_rx_list")) {
        for (double snr_db : cfg.get_list("avg_snr_db_list")) {
            DiversityChannel ch{static_cast<int>(n_rx), std::pow(10.0, snr_db / 10.0),
                                correlation};
            const auto curve = tradeoff_sweep(grid, ch, latencies_s, trials, mc_seed);
            for (std::size_t i = 0; i < curve.points.size(); ++i) {
                csv.row(latencies_ms[i], static_cast<int>(n_rx), snr_db, curve.points[i].outage);
            }
        }
    }
    return {path};
}

std::vector<std::string> run_fbl_surface(const ExperimentConfig& cfg, const std::string& out_dir) {
    UnderwoodModel model{cfg.get_double("free_flow_kmh"), cfg.get_double("max_density")};
    FreewayLayout layout;
    layout.road_length_m = cfg.get_double("road_length_m");
    layout.bs_offset_m = cfg.get_double("bs_offset_m");
    layout.density_per_m = cfg.get_double("kappa");
    layout.max_density_per_m = model.max_density_per_m;
    const auto placement = cfg.get_string("placement") == "uniform_random"
                               ? PlacementMode::UniformRandom
                               : PlacementMode::Equispaced;
    const auto scenario = make_freeway_scenario(
        layout, model, static_cast<int>(cfg.get_int("antennas")), cfg.get_double("bandwidth_hz"),
        std::pow(10.0, cfg.get_double("total_power_dbw") / 10.0),
        cfg.get_double("pathloss_exponent"), placement,
        rng::derive_stream(cfg.seed(), "freeway-placement"));

    PowerAllocation epa;
    epa.power_w.assign(scenario.user_positions_m.size(),
                       scenario.total_power_w /
                           static_cast<double>(scenario.user_positions_m.size()));
    std::vector<double> gains;
    for (double x : scenario.user_positions_m) {
        gains.push_back(large_scale_gain(x, scenario.layout, scenario.pathloss));
    }
    const auto sinr = hardened_sinr(precoder_from_name(cfg.get_string("precoder")), epa, gains,
                                    scenario.antennas, scenario.noise_power_w);
    std::size_t user = 0;
    if (cfg.get_string("reference_user") == "median") {
        std::vector<double> sorted = sinr;
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted[sorted.size() / 2];
        user = static_cast<std::size_t>(
            std::min_element(sinr.begin(), sinr.end(),
                             [&](double a, double b) {
                                 return std::fabs(a - median) < std::fabs(b - median);
                             }) -
            sinr.begin());
    } else {
        user = static_cast<std::size_t>(std::min_element(sinr.begin(), sinr.end()) - sinr.begin());
    }
    const double rho = sinr[user];
    const double shannon = cfg.get_double("bandwidth_hz") * std::log2(1.0 + rho);

    const std::string path = out_path(out_dir, "fbl_surface.csv");
    CsvWriter csv(path, {"latency_ms", "error_prob", "rate_bps", "shannon_rate_bps"});
    for (double lms : logspace(cfg.get_double("latency_ms_min"), cfg.get_double("latency_ms_max"),
                               static_cast<int>(cfg.get_int("latency_points")))) {
        for (double eps : logspace(cfg.get_double("epsilon_min"), cfg.get_double("epsilon_max"),
                                   static_cast<int>(cfg.get_int("epsilon_points")))) {
            const double rate = fbl_rate({rho, lms * 1e-3, cfg.get_double("bandwidth_hz"), eps});
            csv.row(lms, eps, rate, shannon);
        }
    }
    return {path};
}

std::vector<std::string> run_v2i_latency(const ExperimentConfig& cfg, const std::string& out_dir) {
    UnderwoodModel model{cfg.get_double("free_flow_kmh"), cfg.get_double("max_density")};
    const auto kappas = linspace(cfg.get_double("kappa_sweep_min"),
                                 cfg.get_double("kappa_sweep_max"),
                                 static_cast<int>(cfg.get_int("kappa_points")));
    const auto placement = cfg.get_string("placement") == "uniform_random"
                               ? PlacementMode::UniformRandom
                               : PlacementMode::Equispaced;
    const UserQos qos{cfg.get_double("rate_kbps") * 1e3, cfg.get_double("error_prob")};
    LatencyWindow window;
    window.cap_s = cfg.get_double("latency_cap_s");

    const std::string lat_path = out_path(out_dir, "v2i_latency.csv");
    const std::string pow_path = out_path(out_dir, "v2i_powers.csv");
    CsvWriter lat_csv(lat_path, {"kappa", "scheme", "precoder", "max_latency_ms"});
    CsvWriter pow_csv(pow_path,
                      {"kappa", "k_users", "scheme", "precoder", "user_index", "power_w"});

    for (double kappa : kappas) {
        FreewayLayout layout;
        layout.road_length_m = cfg.get_double("road_length_m");
        layout.bs_offset_m = cfg.get_double("bs_offset_m");
        layout.density_per_m = kappa;
        layout.max_density_per_m = model.max_density_per_m;
        const auto scenario = make_freeway_scenario(
            layout, model, static_cast<int>(cfg.get_int("antennas")),
            cfg.get_double("bandwidth_hz"),
            std::pow(10.0, cfg.get_double("total_power_dbw") / 10.0),
            cfg.get_double("pathloss_exponent"), placement,
            rng::derive_stream(cfg.seed(), "freeway-placement"));
        const std::size_t k = scenario.user_positions_m.size();
        const std::vector<UserQos> user_qos(k, qos);

        for (const auto& prec_name : split_csv_field(cfg.get_string("precoders"))) {
            const Precoder prec = precoder_from_name(prec_name);
            for (const auto& scheme : split_csv_field(cfg.get_string("schemes"))) {
                if (scheme == "epa") {
                    const auto latencies = epa_latencies(scenario, user_qos, prec, window);
                    const double worst = *std::max_element(latencies.begin(), latencies.end());
                    lat_csv.row(kappa, scheme, prec_name, worst * 1e3);
                    for (std::size_t i = 0; i < k; ++i) {
                        pow_csv.row(kappa, static_cast<int>(k), scheme, prec_name,
                                    static_cast<int>(i), scenario.total_power_w / k);
                    }
                } else if (scheme == "minmax") {
                    const auto result = minmax_latency_allocation(scenario, user_qos, prec, 1e-7,
                                                                  window);
                    lat_csv.row(kappa, scheme, prec_name, result.latency_s * 1e3);
                    for (std::size_t i = 0; i < k; ++i) {
                        pow_csv.row(kappa, static_cast<int>(k), scheme, prec_name,
                                    static_cast<int>(i), result.allocation.power_w[i]);
                    }
                } else {
                    throw std::domain_error("unknown scheme '" + scheme +
                                            "' (expected epa or minmax)");
                }
            }
        }
    }
    return {lat_path, pow_path};
}

std::vector<std::string> run_v2v_episode(const ExperimentConfig& cfg, const std::string& out_dir) {
    ManhattanGridSpec grid;
    grid.blocks_x = static_cast<int>(cfg.get_int("blocks_x"));
    grid.blocks_y = static_cast<int>(cfg.get_int("blocks_y"));
    grid.block_pitch_x_m = cfg.get_double("block_pitch_x_m");
    grid.block_pitch_y_m = cfg.get_double("block_pitch_y_m");
    grid.building_x_m = cfg.get_double("building_x_m");
    grid.building_y_m = cfg.get_double("building_y_m");
    grid.sidewalk_width_m = cfg.get_double("sidewalk_width_m");
    grid.lanes_per_direction = static_cast<int>(cfg.get_int("lanes_per_direction"));
    grid.lane_width_m = cfg.get_double("lane_width_m");
    grid.vehicle_speed_kmh = cfg.get_double("vehicle_speed_kmh");

    UrbanQos qos;
    qos.arrivals = {cfg.get_double("arrival_rate_per_s"),
                    static_cast<double>(cfg.get_int("packet_bits"))};
    const std::string preset_name = cfg.get_string("qos_preset");
    if (!preset_name.empty()) {
        const auto preset = find_preset(preset_name);
        qos.qos = {preset.latency_bound_s, preset.reliability_bound};
    } else {
        qos.qos = {cfg.get_double("latency_bound_ms") * 1e-3, cfg.get_double("violation_prob")};
    }

    UrbanCounts counts;
    counts.num_cues = static_cast<int>(cfg.get_int("num_cues"));
    counts.num_vue_pairs = static_cast<int>(cfg.get_int("num_vue_pairs"));
    counts.pair_distance_cap_m = cfg.get_double("pair_distance_cap_m");

    const auto scenario = build_urban_scenario(grid, counts, qos, cfg.seed());
    const auto packets = static_cast<std::uint64_t>(cfg.get_int("episode_packets"));

    const std::string hist_path = out_path(out_dir, "v2v_histogram.csv");
    const std::string summary_path = out_path(out_dir, "v2v_summary.csv");
    CsvWriter hist_csv(hist_path, {"bin_start_ms", "bin_end_ms", "probability", "scheme"});
    CsvWriter summary_csv(summary_path, {"vue_id", "violation_prob", "rb", "power_w",
                                         "min_cue_sinr_db", "scheme"});

    for (const auto& mode_name : split_csv_field(cfg.get_string("modes"))) {
        RequirementMode mode;
        if (mode_name == "effective_bandwidth") {
            mode = RequirementMode::EffectiveBandwidth;
        } else if (mode_name == "static") {
            mode = RequirementMode::Static;
        } else {
            throw std::domain_error("unknown requirement mode '" + mode_name + "'");
        }
        const auto assignment = allocate_sharing(scenario, mode);
        const auto episode = run_episode(scenario, assignment, packets,
                                         rng::derive_stream(cfg.seed(), mode_name));

        // Pooled latency histogram across VUEs, 10 ms bins.
        std::vector<double> pooled;
        for (const auto& set : episode.vue_latency) {
            pooled.insert(pooled.end(), set.samples().begin(), set.samples().end());
        }
        for (const auto& bin : latency_histogram(LatencySampleSet(pooled))) {
            hist_csv.row(bin.start_s * 1e3, bin.end_s * 1e3, bin.probability, mode_name);
        }
        for (std::size_t v = 0; v < scenario.vue_pairs.size(); ++v) {
            summary_csv.row(static_cast<int>(v), episode.vue_violation[v],
                            assignment.vue_to_rb[v], assignment.vue_power_w[v],
                            episode.min_cue_sinr_db, mode_name);
        }
    }
    return {hist_path, summary_path};
}

}  // namespace

std::vector<std::string> run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
    if (cfg.experiment == "outage-sweep") return run_outage_sweep(cfg, out_dir);
    if (cfg.experiment == "fbl-surface") return run_fbl_surface(cfg, out_dir);
    if (cfg.experiment == "v2i-latency") return run_v2i_latency(cfg, out_dir);
    if (cfg.experiment == "v2v-episode") return run_v2v_episode(cfg, out_dir);
    throw std::domain_error("unknown experiment: " + cfg.experiment);
}

}  // namespace urllc
