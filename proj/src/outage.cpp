#include "urllc/outage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "urllc/errors.hpp"
#include "urllc/numerics.hpp"
#include "urllc/rng.hpp"

namespace urllc {

ResourceGridConfig ResourceGridConfig::from_spacing(double subcarrier_spacing_hz,
                                                    double bandwidth_hz, int packet_bits) {
    ResourceGridConfig cfg;
    cfg.subcarrier_spacing_hz = subcarrier_spacing_hz;
    cfg.symbol_duration_s = 1.0 / subcarrier_spacing_hz;
    cfg.bandwidth_hz = bandwidth_hz;
    cfg.packet_bits = packet_bits;
    cfg.validate();
    return cfg;
}

void ResourceGridConfig::validate() const {
    if (!(subcarrier_spacing_hz > 0.0) || !(symbol_duration_s > 0.0)) {
        throw std::domain_error("ResourceGridConfig: T_s and f_s must be > 0");
    }
    if (std::fabs(symbol_duration_s * subcarrier_spacing_hz - 1.0) > 1e-9) {
        throw std::domain_error("ResourceGridConfig: requires T_s * f_s = 1");
    }
    if (!(bandwidth_hz >= subcarrier_spacing_hz)) {
        throw std::domain_error("ResourceGridConfig: bandwidth must cover one subcarrier");
    }
    if (packet_bits < 1) {
        throw std::domain_error("ResourceGridConfig: packet size must be >= 1 bit");
    }
}

double numerology_spacing_hz(int n) {
    if (n < -2 || n > 12) {
        throw std::domain_error("numerology_spacing_hz: index out of the sane range [-2, 12]");
    }
    return 15e3 * std::ldexp(1.0, n);
}

void DiversityChannel::validate() const {
    if (num_rx_antennas < 1) {
        throw std::domain_error("DiversityChannel: need at least one antenna");
    }
    if (!(avg_snr > 0.0)) {
        throw std::domain_error("DiversityChannel: average SNR must be > 0");
    }
    if (!(correlation >= 0.0 && correlation < 1.0)) {
        throw std::domain_error("DiversityChannel: correlation must lie in [0,1)");
    }
}

void TradeoffCurve::validate() const {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].outage >= 0.0 && points[i].outage <= 1.0)) {
            throw std::domain_error("TradeoffCurve: outage outside [0,1]");
        }
        if (i > 0 && !(points[i].latency_s > points[i - 1].latency_s)) {
            throw std::domain_error("TradeoffCurve: latencies must be strictly increasing");
        }
    }
}

double snr_threshold(const ResourceGridConfig& cfg, double latency_s) {
    cfg.validate();
    // Guard against 14.999999... artifacts at exact grid multiples.
    const double symbols = std::floor(latency_s * cfg.subcarrier_spacing_hz + 1e-9);
    const double carriers = std::floor(cfg.bandwidth_hz / cfg.subcarrier_spacing_hz + 1e-9);
    if (symbols < 1.0 || carriers < 1.0) {
        throw geometry_error("snr_threshold: degenerate grid, latency " +
                             std::to_string(latency_s) + " s spans no full resource element");
    }
    const double q = static_cast<double>(cfg.packet_bits) / (symbols * carriers);
    return std::exp2(q) - 1.0;
}

double outage_mrc_iid(const DiversityChannel& ch, double rho_th) {
    ch.validate();
    if (ch.correlation != 0.0) {
        throw std::domain_error("outage_mrc_iid: analytic path requires correlation == 0");
    }
    if (rho_th <= 0.0) {
        return 0.0;
    }
    return gamma_lower_regularized(ch.num_rx_antennas, rho_th / ch.avg_snr);
}

namespace {

constexpr int kMaxBranches = 64;

// One MRC trial: draws N_R complex Gaussian branches with the exponential
// correlation profile realized by the AR(1) recursion
//   h_1 = g_1,   h_i = c h_{i-1} + sqrt(1-c^2) g_i,
// which is the Cholesky factor of the Kac-Murdock-Szego matrix c^|i-j|.
// Combined SNR is rho_avg * sum |h_i|^2; outage when it falls below rho_th.
inline bool trial_in_outage(std::uint64_t seed, std::uint64_t index, int branches,
                            double correlation, double combined_threshold) {
    rng::Substream sub(seed, index);
    const double carry = correlation;
    const double fresh = std::sqrt(1.0 - correlation * correlation);
    double re = 0.0, im = 0.0;
    double sum = 0.0;
    for (int i = 0; i < branches; ++i) {
        double z0, z1;
        sub.normal_pair(z0, z1);
        // Unit-power complex branch: (z0 + j z1)/sqrt(2).
        const double gr = z0 * 0.70710678118654752440;
        const double gi = z1 * 0.70710678118654752440;
        if (i == 0) {
            re = gr;
            im = gi;
        } else {
            re = carry * re + fresh * gr;
            im = carry * im + fresh * gi;
        }
        sum += re * re + im * im;
    }
    return sum < combined_threshold;
}

McEstimate finish_estimate(std::uint64_t outages, std::uint64_t trials) {
    McEstimate est;
    est.trials = trials;
    est.estimate = static_cast<double>(outages) / static_cast<double>(trials);
    est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(trials));
    return est;
}

void check_mc_args(const DiversityChannel& ch, std::uint64_t trials) {
    ch.validate();
    if (trials < 10000) {
        throw std::domain_error("outage_mrc_correlated_mc: need at least 1e4 trials");
    }
    if (ch.num_rx_antennas > kMaxBranches) {
        throw std::domain_error("outage_mrc_correlated_mc: branch count above supported limit");
    }
}

}  // namespace

McEstimate outage_mrc_correlated_mc_serial(const DiversityChannel& ch, double rho_th,
                                           std::uint64_t trials, std::uint64_t seed) {
    check_mc_args(ch, trials);
    const double threshold = rho_th / ch.avg_snr;
    std::uint64_t outages = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        outages += trial_in_outage(seed, t, ch.num_rx_antennas, ch.correlation, threshold) ? 1 : 0;
    }
    return finish_estimate(outages, trials);
}

McEstimate outage_mrc_correlated_mc(const DiversityChannel& ch, double rho_th,
                                    std::uint64_t trials, std::uint64_t seed) {
    check_mc_args(ch, trials);
    const double threshold = rho_th / ch.avg_snr;
    const int branches = ch.num_rx_antennas;
    const double correlation = ch.correlation;
    std::uint64_t outages = 0;
    const std::int64_t n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static) reduction(+ : outages)
    for (std::int64_t t = 0; t < n; ++t) {
        outages += trial_in_outage(seed, static_cast<std::uint64_t>(t), branches, correlation,
                                   threshold)
                       ? 1
                       : 0;
    }
    return finish_estimate(outages, trials);
}

double lrtd_estimate(const TradeoffCurve& curve) {
    curve.validate();
    std::vector<TradeoffPoint> tail;
    for (const auto& p : curve.points) {
        if (p.outage > 0.0 && p.outage < 0.1) {
            tail.push_back(p);
        }
    }
    if (tail.size() < 5) {
        throw std::domain_error("lrtd_estimate: need >= 5 points with outage in (0, 0.1)");
    }
    const double lo = std::log10(tail.front().latency_s);
    const double hi = std::log10(tail.back().latency_s);
    if (hi - lo < 1.0) {
        throw std::domain_error("lrtd_estimate: qualifying points span less than one decade");
    }
    // Keep the asymptotic tail: upper half of the qualifying log-latency
    // range. The early part of the curve still carries the 2^q - 1 curvature.
    const double cut = 0.5 * (lo + hi);
    std::vector<TradeoffPoint> fit;
    for (const auto& p : tail) {
        if (std::log10(p.latency_s) >= cut) {
            fit.push_back(p);
        }
    }
    if (fit.size() < 2) {
        fit = tail;
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& p : fit) {
        const double x = std::log10(p.latency_s);
        const double y = -std::log10(p.outage);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(fit.size());
    const double denom = m * sxx - sx * sx;
    if (denom <= 0.0) {
        throw std::domain_error("lrtd_estimate: degenerate latency spacing in the tail");
    }
    return (m * sxy - sx * sy) / denom;
}

TradeoffCurve tradeoff_sweep(const ResourceGridConfig& cfg, const DiversityChannel& ch,
                             std::span<const double> latencies_s, std::uint64_t mc_trials,
                             std::uint64_t seed) {
    ch.validate();
    TradeoffCurve curve;
    curve.points.reserve(latencies_s.size());
    for (double latency : latencies_s) {
        const double rho_th = snr_threshold(cfg, latency);
        double outage;
        if (ch.correlation == 0.0) {
            outage = outage_mrc_iid(ch, rho_th);
        } else {
            outage = outage_mrc_correlated_mc(ch, rho_th, mc_trials, seed).estimate;
        }
        curve.points.push_back({latency, outage});
    }
    curve.validate();
    return curve;
}

}  // namespace urllc
