#pragma once

// Outage-latency tradeoff under SIMO/MRC receive diversity on an OFDM
// resource grid, with i.i.d. or exponentially correlated Rayleigh branches,
// and the log-log tradeoff slope (LRTD) estimator.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace urllc {

/// OFDM resource-element geometry plus the packet size carried per grid.
/// The symbol duration is tied to the subcarrier spacing by T_s * f_s = 1.
struct ResourceGridConfig {
    double symbol_duration_s = 0.0;
    double subcarrier_spacing_hz = 0.0;
    double bandwidth_hz = 0.0;
    int packet_bits = 0;

    /// Canonical constructor: derives T_s from the spacing.
    static ResourceGridConfig from_spacing(double subcarrier_spacing_hz, double bandwidth_hz,
                                           int packet_bits);
    void validate() const;
};

/// Subcarrier spacing of numerology index n: 15 * 2^n kHz.
double numerology_spacing_hz(int n);

/// Receive-diversity channel: N_R branches at a common average SNR.
/// correlation = 0 selects the analytic i.i.d. path; otherwise branches
/// follow an exponential correlation profile c^|i-j|.
struct DiversityChannel {
    int num_rx_antennas = 1;
    double avg_snr = 1.0;
    double correlation = 0.0;

    void validate() const;
};

struct TradeoffPoint {
    double latency_s = 0.0;
    double outage = 0.0;
};

/// Latency-outage curve with latencies strictly increasing. lrtd is filled
/// by lrtd_estimate when a caller requests the slope.
struct TradeoffCurve {
    std::vector<TradeoffPoint> points;
    std::optional<double> lrtd;

    void validate() const;
};

/// SNR threshold rho_th = 2^q - 1 with q = C / (floor(L/T_s) floor(B/f_s)).
/// Throws geometry_error when the latency is shorter than one symbol or the
/// band narrower than one subcarrier.
double snr_threshold(const ResourceGridConfig& cfg, double latency_s);

/// Analytic MRC outage for i.i.d. branches: P(N_R, rho_th / rho_avg).
/// Requires ch.correlation == 0.
double outage_mrc_iid(const DiversityChannel& ch, double rho_th);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
};

/// Monte-Carlo MRC outage for correlated branches. Each trial draws its own
/// substream from (seed, trial index), so the estimate is bit-identical for
/// any thread count. Parallelized with OpenMP when available.
McEstimate outage_mrc_correlated_mc(const DiversityChannel& ch, double rho_th,
                                    std::uint64_t trials, std::uint64_t seed);

/// Serial reference implementation of the same estimator (identical output;
/// kept for tests and the kernel benchmark).
McEstimate outage_mrc_correlated_mc_serial(const DiversityChannel& ch, double rho_th,
                                           std::uint64_t trials, std::uint64_t seed);

/// Latency-reliability tradeoff degree: least-squares slope of -log P_out
/// versus log L over the large-L tail of the curve. Qualifying points have
/// outage in (0, 0.1); at least 5 must span a decade of latency. The fit
/// uses the upper half of the qualifying log-latency range, where the curve
/// has reached its asymptotic slope.
double lrtd_estimate(const TradeoffCurve& curve);

/// Outage at each latency: analytic path for correlation == 0, Monte-Carlo
/// otherwise. Latencies must be strictly increasing.
TradeoffCurve tradeoff_sweep(const ResourceGridConfig& cfg, const DiversityChannel& ch,
                             std::span<const double> latencies_s, std::uint64_t mc_trials = 1000000,
                             std::uint64_t seed = 1);

}  // namespace urllc
