#include "urllc/v2i.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "urllc/detail/bisect.hpp"
#include "urllc/errors.hpp"

namespace urllc {

namespace {
constexpr double kBoltzmann = 1.380649e-23;
constexpr double kRoomTempK = 290.0;
}  // namespace

void PathLossModel::validate() const {
    if (!(exponent >= 2.0)) {
        throw std::domain_error("PathLossModel: exponent must be >= 2");
    }
    if (!(ref_gain > 0.0)) {
        throw std::domain_error("PathLossModel: reference gain must be > 0");
    }
}

double thermal_noise_w(double bandwidth_hz, double noise_figure_db) {
    if (!(bandwidth_hz > 0.0)) {
        throw std::domain_error("thermal_noise_w: bandwidth must be > 0");
    }
    return kBoltzmann * kRoomTempK * bandwidth_hz * std::pow(10.0, noise_figure_db / 10.0);
}

double calibrate_ref_gain(double target_snr, double power_w, double bs_offset_m, double exponent,
                          double noise_power_w) {
    if (!(target_snr > 0.0 && power_w > 0.0 && bs_offset_m > 0.0 && noise_power_w > 0.0)) {
        throw std::domain_error("calibrate_ref_gain: inputs must be > 0");
    }
    return target_snr * noise_power_w / power_w * std::pow(bs_offset_m, exponent);
}

void FreewayScenario::validate() const {
    layout.validate();
    model.validate();
    pathloss.validate();
    if (user_positions_m.empty()) {
        throw std::domain_error("FreewayScenario: no users placed");
    }
    if (antennas <= static_cast<int>(user_positions_m.size())) {
        throw std::domain_error("FreewayScenario: requires M > K antennas");
    }
    if (!(bandwidth_hz > 0.0 && total_power_w > 0.0 && noise_power_w > 0.0)) {
        throw std::domain_error("FreewayScenario: bandwidth, power and noise must be > 0");
    }
    for (double x : user_positions_m) {
        if (x < 0.0 || x > layout.road_length_m) {
            throw std::domain_error("FreewayScenario: user outside the road segment");
        }
    }
}

FreewayScenario make_freeway_scenario(const FreewayLayout& layout, const UnderwoodModel& model,
                                      int antennas, double bandwidth_hz, double total_power_w,
                                      double pathloss_exponent, PlacementMode mode,
                                      std::uint64_t seed) {
    FreewayScenario sc;
    sc.layout = layout;
    sc.layout.max_density_per_m = model.max_density_per_m;
    sc.model = model;
    sc.antennas = antennas;
    sc.bandwidth_hz = bandwidth_hz;
    sc.total_power_w = total_power_w;
    sc.noise_power_w = thermal_noise_w(bandwidth_hz);
    sc.user_positions_m = place_freeway_vehicles(sc.layout, mode, seed);
    sc.pathloss.exponent = pathloss_exponent;
    // 30 dB mean SNR for the abeam user under the EPA share at this density.
    const double epa_share = total_power_w / static_cast<double>(sc.user_positions_m.size());
    sc.pathloss.ref_gain =
        calibrate_ref_gain(1000.0, epa_share, layout.bs_offset_m, pathloss_exponent,
                           sc.noise_power_w);
    sc.validate();
    return sc;
}

double PowerAllocation::total() const {
    return std::accumulate(power_w.begin(), power_w.end(), 0.0);
}

void PowerAllocation::validate(double budget_w) const {
    double sum = 0.0;
    for (double p : power_w) {
        if (!(p >= 0.0)) {
            throw std::domain_error("PowerAllocation: negative per-user power");
        }
        sum += p;
    }
    if (sum > budget_w * (1.0 + 1e-9)) {
        throw std::domain_error("PowerAllocation: total exceeds the budget");
    }
}

void UserQos::validate() const {
    if (!(required_rate_bps > 0.0)) {
        throw std::domain_error("UserQos: required rate must be > 0");
    }
    if (!(error_prob > 0.0 && error_prob < 0.5)) {
        throw std::domain_error("UserQos: error probability must lie in (0, 0.5)");
    }
}

double large_scale_gain(double position_m, const FreewayLayout& layout,
                        const PathLossModel& pathloss) {
    pathloss.validate();
    if (position_m < 0.0 || position_m > layout.road_length_m) {
        throw std::domain_error("large_scale_gain: position outside [0, d_R]");
    }
    const double dx = position_m - 0.5 * layout.road_length_m;
    const double d = std::sqrt(layout.bs_offset_m * layout.bs_offset_m + dx * dx);
    return pathloss.ref_gain * std::pow(d, -pathloss.exponent);
}

std::vector<double> hardened_sinr(Precoder precoder, const PowerAllocation& alloc,
                                  std::span<const double> gains, int antennas,
                                  double noise_power_w) {
    const std::size_t k = gains.size();
    if (alloc.power_w.size() != k) {
        throw std::domain_error("hardened_sinr: power and gain vectors disagree");
    }
    if (precoder == Precoder::ZeroForcing && antennas <= static_cast<int>(k)) {
        throw std::domain_error("hardened_sinr: ZF requires M > K");
    }
    std::vector<double> sinr(k);
    if (precoder == Precoder::ZeroForcing) {
        const double dof = static_cast<double>(antennas) - static_cast<double>(k);
        for (std::size_t i = 0; i < k; ++i) {
            sinr[i] = dof * alloc.power_w[i] * gains[i] / noise_power_w;
        }
    } else {
        const double total = alloc.total();
        for (std::size_t i = 0; i < k; ++i) {
            const double interference = gains[i] * (total - alloc.power_w[i]);
            sinr[i] = antennas * alloc.power_w[i] * gains[i] / (noise_power_w + interference);
        }
    }
    return sinr;
}

namespace {

std::vector<double> scenario_gains(const FreewayScenario& sc) {
    std::vector<double> gains;
    gains.reserve(sc.user_positions_m.size());
    for (double x : sc.user_positions_m) {
        gains.push_back(large_scale_gain(x, sc.layout, sc.pathloss));
    }
    return gains;
}

// Cheapest power vector hitting the per-user SINR targets, or empty when the
// targets are unreachable at any power. ZF decouples; MF couples through the
// interference term, solved by fixed-point iteration on the total power
//   S_{n+1} = sum_k target_k (sigma^2 + b_k S_n) / (b_k (M + target_k)),
// a contraction whenever sum_k target_k / (M + target_k) < 1.
std::vector<double> invert_power(Precoder precoder, std::span<const double> targets,
                                 std::span<const double> gains, int antennas, double noise_w) {
    const std::size_t k = targets.size();
    std::vector<double> power(k, 0.0);
    if (precoder == Precoder::ZeroForcing) {
        const double dof = static_cast<double>(antennas) - static_cast<double>(k);
        for (std::size_t i = 0; i < k; ++i) {
            power[i] = targets[i] * noise_w / (dof * gains[i]);
        }
        return power;
    }
    double slope = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        slope += targets[i] / (antennas + targets[i]);
    }
    if (slope >= 1.0) {
        return {};  // MF interference outruns the array gain; no finite power works
    }
    double total = 0.0;
    for (int it = 0; it < 500; ++it) {
        double next = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            next += targets[i] * (noise_w + gains[i] * total) / (gains[i] * (antennas + targets[i]));
        }
        if (std::fabs(next - total) <= 1e-10 * std::max(1.0, std::fabs(next))) {
            total = next;
            break;
        }
        total = next;
    }
    for (std::size_t i = 0; i < k; ++i) {
        power[i] = targets[i] * (noise_w + gains[i] * total) / (gains[i] * (antennas + targets[i]));
    }
    return power;
}

}  // namespace

std::vector<double> epa_latencies(const FreewayScenario& scenario, std::span<const UserQos> qos,
                                  Precoder precoder, const LatencyWindow& window) {
    scenario.validate();
    const std::size_t k = scenario.user_positions_m.size();
    if (qos.size() != k) {
        throw std::domain_error("epa_latencies: need one QoS entry per user");
    }
    PowerAllocation epa;
    epa.power_w.assign(k, scenario.total_power_w / static_cast<double>(k));
    const auto gains = scenario_gains(scenario);
    const auto sinr = hardened_sinr(precoder, epa, gains, scenario.antennas,
                                    scenario.noise_power_w);
    std::vector<double> latencies(k);
    for (std::size_t i = 0; i < k; ++i) {
        qos[i].validate();
        try {
            latencies[i] = fbl_min_latency(qos[i].required_rate_bps, sinr[i],
                                           scenario.bandwidth_hz, qos[i].error_prob, window);
        } catch (const infeasible_error& e) {
            throw infeasible_error("epa_latencies: user " + std::to_string(i) +
                                   " infeasible under EPA: " + e.what());
        }
    }
    return latencies;
}

MinMaxResult minmax_latency_allocation(const FreewayScenario& scenario,
                                       std::span<const UserQos> qos, Precoder precoder,
                                       double latency_tol_s, const LatencyWindow& window) {
    scenario.validate();
    const std::size_t k = scenario.user_positions_m.size();
    if (qos.size() != k) {
        throw std::domain_error("minmax_latency_allocation: need one QoS entry per user");
    }
    for (const auto& q : qos) {
        q.validate();
    }
    const auto gains = scenario_gains(scenario);
    std::vector<double> qinv(k);
    for (std::size_t i = 0; i < k; ++i) {
        qinv[i] = q_inverse(qos[i].error_prob);
    }

    auto power_for_latency = [&](double latency) {
        std::vector<double> targets(k);
        for (std::size_t i = 0; i < k; ++i) {
            targets[i] = detail::fbl_required_snr_qinv(qos[i].required_rate_bps, latency,
                                                       scenario.bandwidth_hz, qinv[i]);
        }
        return invert_power(precoder, targets, gains, scenario.antennas, scenario.noise_power_w);
    };
    auto feasible = [&](double latency) {
        const auto power = power_for_latency(latency);
        if (power.empty()) {
            return false;
        }
        double total = 0.0;
        for (double p : power) total += p;
        return total <= scenario.total_power_w;
    };

    const double floor_s = std::max(window.floor_s, 1.0 / scenario.bandwidth_hz);
    if (!feasible(window.cap_s)) {
        const auto power = power_for_latency(window.cap_s);
        double deficit = -scenario.total_power_w;
        for (double p : power) deficit += p;
        throw infeasible_error(
            "minmax_latency_allocation: infeasible at the latency cap; power deficit " +
            (power.empty() ? std::string("unbounded (MF interference limit)")
                           : std::to_string(deficit) + " W"));
    }

    double lo = floor_s, hi = window.cap_s;
    if (feasible(lo)) {
        hi = lo;
    } else {
        while (hi - lo > latency_tol_s) {
            const double mid = 0.5 * (lo + hi);
            if (feasible(mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    MinMaxResult result;
    result.latency_s = hi;
    result.allocation.power_w = power_for_latency(hi);
    result.allocation.validate(scenario.total_power_w * (1.0 + 1e-9));
    return result;
}

}  // namespace urllc
