#pragma once

// Freeway massive-MIMO V2I downlink: hardened SINR under MF/ZF precoding,
// the equal-power baseline, and the min-max transmission-latency allocator.

#include <span>
#include <vector>

#include "urllc/numerics.hpp"
#include "urllc/traffic.hpp"

namespace urllc {

/// Log-distance path loss beta = ref_gain * d^{-exponent}, d in meters.
struct PathLossModel {
    double exponent = 2.5;
    double ref_gain = 1.0;  // gain at 1 m

    void validate() const;
};

/// Thermal noise at the given bandwidth plus a receiver noise figure.
double thermal_noise_w(double bandwidth_hz, double noise_figure_db = 9.0);

/// Reference gain making the abeam user at distance d_B see `target_snr`
/// (linear) when allocated `power_w` transmit power, before array gain.
double calibrate_ref_gain(double target_snr, double power_w, double bs_offset_m, double exponent,
                          double noise_power_w);

struct FreewayScenario {
    FreewayLayout layout;
    UnderwoodModel model;
    std::vector<double> user_positions_m;
    int antennas = 300;
    double bandwidth_hz = 200e3;
    double total_power_w = 10.0;
    double noise_power_w = 1e-14;
    PathLossModel pathloss;

    void validate() const;  // checks M > K among the rest
};

/// Scenario at density layout.density_per_m with K = round(kappa d_R) users
/// placed by `mode`; ref gain calibrated per `calibrate_ref_gain` against the
/// EPA share at the layout density.
FreewayScenario make_freeway_scenario(const FreewayLayout& layout, const UnderwoodModel& model,
                                      int antennas, double bandwidth_hz, double total_power_w,
                                      double pathloss_exponent, PlacementMode mode,
                                      std::uint64_t seed = 0);

enum class Precoder { MatchedFilter, ZeroForcing };

struct PowerAllocation {
    std::vector<double> power_w;

    double total() const;
    void validate(double budget_w) const;
};

struct UserQos {
    double required_rate_bps = 100e3;
    double error_prob = 1e-6;

    void validate() const;
};

/// Large-scale gain of a user at `position_m` along the road; the BS sits
/// abeam the road midpoint at offset d_B.
double large_scale_gain(double position_m, const FreewayLayout& layout,
                        const PathLossModel& pathloss);

/// Deterministic-equivalent SINRs under channel hardening:
///   MF: rho_k = M p_k b_k / (sigma^2 + b_k sum_{j != k} p_j)
///   ZF: rho_k = (M - K) p_k b_k / sigma^2     (requires M > K)
std::vector<double> hardened_sinr(Precoder precoder, const PowerAllocation& alloc,
                                  std::span<const double> gains, int antennas,
                                  double noise_power_w);

/// Equal power allocation: p_k = P/K; per-user latency via fbl_min_latency.
/// Throws infeasible_error naming the first user that cannot meet its rate.
std::vector<double> epa_latencies(const FreewayScenario& scenario, std::span<const UserQos> qos,
                                  Precoder precoder, const LatencyWindow& window = {});

struct MinMaxResult {
    PowerAllocation allocation;
    double latency_s = 0.0;
};

/// Min-max transmission latency: bisects on a common latency L, inverting
/// the precoder SINR formula into the cheapest power vector meeting the
/// per-user FBL SNR targets (closed form for ZF, fixed-point for MF), and
/// keeps the smallest L whose total power fits the budget. At the optimum
/// every user attains L* (fairness).
MinMaxResult minmax_latency_allocation(const FreewayScenario& scenario,
                                       std::span<const UserQos> qos, Precoder precoder,
                                       double latency_tol_s = 1e-7,
                                       const LatencyWindow& window = {});

}  // namespace urllc
