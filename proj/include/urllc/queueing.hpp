#pragma once

// Queueing-latency reliability: empirical CDF metrics, the large-deviation
// (effective bandwidth) latency-to-rate transformation, the static one-packet
// baseline, and a seeded Lindley FIFO simulator.

#include <cstdint>
#include <vector>

namespace urllc {

/// Poisson packet arrivals with a fixed packet size.
struct ArrivalProcess {
    double rate_per_s = 0.0;
    double packet_bits = 0.0;

    void validate() const;
};

struct QosRequirement {
    double latency_bound_s = 0.0;
    double violation_prob = 0.0;  // in (0,1)

    void validate() const;
};

/// Per-packet sojourn latencies with CDF accessors. Samples keep their
/// emission order; queries use an internal sorted copy.
class LatencySampleSet {
  public:
    LatencySampleSet() = default;
    explicit LatencySampleSet(std::vector<double> samples);

    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    const std::vector<double>& samples() const { return samples_; }

    /// r(t) = Pr{L <= t}: right-continuous empirical CDF.
    double reliability_at(double t) const;
    /// Violation probability Pr{L > t} = 1 - r(t).
    double violation_at(double t) const { return 1.0 - reliability_at(t); }

  private:
    std::vector<double> samples_;
    std::vector<double> sorted_;
};

/// Free-function form of the reliability metric r(t).
double latency_reliability(const LatencySampleSet& set, double t);

/// Effective bandwidth of Poisson arrivals with fixed packet size:
/// alpha(theta) = lambda (e^{theta C_p} - 1) / theta, theta in 1/bits.
/// Approaches the mean rate lambda*C_p as theta -> 0+.
double effective_bandwidth_poisson(double theta_per_bit, double rate_per_s, double packet_bits);

/// Minimum constant service rate meeting Pr{sojourn > L_th} <= eps under the
/// exponential-tail approximation. Solves
///   theta alpha(theta) L_th - theta C_p = ln(1/eps)
/// for theta* by bisection and returns alpha(theta*). The theta C_p term
/// accounts for the deterministic transmission time of the packet itself, so
/// the bound applies to the sojourn latency the sample sets measure.
double min_rate_for_qos(const ArrivalProcess& arrivals, const QosRequirement& qos);

/// Static one-packet transformation: R = C_p / L_th. Ignores the arrival
/// process entirely (the baseline scheme of the urban case).
double static_min_rate(double packet_bits, double latency_bound_s);

struct QueueSimResult {
    LatencySampleSet sojourn;
    std::vector<double> waits;  // queueing delay before service, per packet
    bool unstable_load = false;  // lambda C_p >= R; simulation still ran
};

/// Lindley recursion with deterministic service C_p/R and exponential
/// inter-arrivals. Bit-identical output per seed.
QueueSimResult simulate_fifo_queue(const ArrivalProcess& arrivals, double service_rate_bps,
                                   std::uint64_t horizon_packets, std::uint64_t seed);

struct HistogramBin {
    double start_s = 0.0;
    double end_s = 0.0;
    double probability = 0.0;
};

/// Fixed-width latency histogram (10 ms bins by default). Bins cover
/// [i*w, (i+1)*w); the last bin absorbs the maximum sample.
std::vector<HistogramBin> latency_histogram(const LatencySampleSet& set, double bin_width_s = 0.01);

}  // namespace urllc
