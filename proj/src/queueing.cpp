#include "urllc/queueing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "urllc/detail/bisect.hpp"
#include "urllc/rng.hpp"

namespace urllc {

void ArrivalProcess::validate() const {
    if (!(rate_per_s > 0.0)) {
        throw std::domain_error("ArrivalProcess: arrival rate must be > 0");
    }
    if (!(packet_bits >= 1.0)) {
        throw std::domain_error("ArrivalProcess: packet size must be >= 1 bit");
    }
}

void QosRequirement::validate() const {
    if (!(latency_bound_s > 0.0)) {
        throw std::domain_error("QosRequirement: latency bound must be > 0");
    }
    if (!(violation_prob > 0.0 && violation_prob < 1.0)) {
        throw std::domain_error("QosRequirement: violation probability must lie in (0,1)");
    }
}

LatencySampleSet::LatencySampleSet(std::vector<double> samples) : samples_(std::move(samples)) {
    for (double s : samples_) {
        if (!(s >= 0.0)) {
            throw std::domain_error("LatencySampleSet: samples must be >= 0");
        }
    }
    sorted_ = samples_;
    std::sort(sorted_.begin(), sorted_.end());
}

double LatencySampleSet::reliability_at(double t) const {
    if (sorted_.empty()) {
        throw std::domain_error("LatencySampleSet: reliability of an empty sample set");
    }
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double latency_reliability(const LatencySampleSet& set, double t) {
    return set.reliability_at(t);
}

double effective_bandwidth_poisson(double theta_per_bit, double rate_per_s, double packet_bits) {
    if (!(theta_per_bit > 0.0)) {
        throw std::domain_error("effective_bandwidth_poisson: theta must be > 0");
    }
    if (rate_per_s < 0.0 || packet_bits < 0.0) {
        throw std::domain_error("effective_bandwidth_poisson: negative inputs");
    }
    if (theta_per_bit * packet_bits > 700.0) {
        throw std::overflow_error("effective_bandwidth_poisson: theta * C_p > 700 overflows");
    }
    return rate_per_s * std::expm1(theta_per_bit * packet_bits) / theta_per_bit;
}

double min_rate_for_qos(const ArrivalProcess& arrivals, const QosRequirement& qos) {
    arrivals.validate();
    qos.validate();
    const double lambda = arrivals.rate_per_s;
    const double cp = arrivals.packet_bits;
    const double target = std::log(1.0 / qos.violation_prob);
    // g(theta) = lambda L_th (e^{theta C_p} - 1) - theta C_p - target.
    // g(0) = -target < 0, g is convex and eventually increasing, so the
    // crossing set is an interval and bisection applies.
    auto g = [&](double theta) {
        return lambda * qos.latency_bound_s * std::expm1(theta * cp) - theta * cp - target;
    };
    double hi = 1.0 / cp;  // theta*C_p = 1 to start
    int guard = 0;
    while (g(hi) < 0.0 && guard++ < 16) hi *= 2.0;
    const double theta_star =
        detail::bisect_boundary([&](double t) { return g(t) >= 0.0; }, 0.0, hi);
    return effective_bandwidth_poisson(theta_star, lambda, cp);
}

double static_min_rate(double packet_bits, double latency_bound_s) {
    if (!(packet_bits > 0.0) || !(latency_bound_s > 0.0)) {
        throw std::domain_error("static_min_rate: inputs must be > 0");
    }
    return packet_bits / latency_bound_s;
}

QueueSimResult simulate_fifo_queue(const ArrivalProcess& arrivals, double service_rate_bps,
                                   std::uint64_t horizon_packets, std::uint64_t seed) {
    arrivals.validate();
    if (!(service_rate_bps > 0.0)) {
        throw std::domain_error("simulate_fifo_queue: service rate must be > 0");
    }
    if (horizon_packets < 1) {
        throw std::domain_error("simulate_fifo_queue: horizon must be >= 1 packet");
    }
    QueueSimResult result;
    result.unstable_load = arrivals.rate_per_s * arrivals.packet_bits >= service_rate_bps;
    const double service_s = arrivals.packet_bits / service_rate_bps;
    const double mean_gap = 1.0 / arrivals.rate_per_s;
    std::vector<double> sojourn;
    sojourn.reserve(horizon_packets);
    result.waits.reserve(horizon_packets);
    rng::Substream stream(seed, 0);
    double wait = 0.0;  // first packet arrives to an empty queue
    for (std::uint64_t n = 0; n < horizon_packets; ++n) {
        result.waits.push_back(wait);
        sojourn.push_back(wait + service_s);
        const double gap = stream.exponential(mean_gap);
        wait = std::max(0.0, wait + service_s - gap);
    }
    result.sojourn = LatencySampleSet(std::move(sojourn));
    return result;
}

std::vector<HistogramBin> latency_histogram(const LatencySampleSet& set, double bin_width_s) {
    if (!(bin_width_s > 0.0)) {
        throw std::domain_error("latency_histogram: bin width must be > 0");
    }
    if (set.empty()) {
        return {};
    }
    const double max_v = *std::max_element(set.samples().begin(), set.samples().end());
    const auto bins = static_cast<std::size_t>(std::floor(max_v / bin_width_s)) + 1;
    std::vector<HistogramBin> hist(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        hist[i].start_s = static_cast<double>(i) * bin_width_s;
        hist[i].end_s = static_cast<double>(i + 1) * bin_width_s;
    }
    const double unit = 1.0 / static_cast<double>(set.size());
    for (double s : set.samples()) {
        auto idx = static_cast<std::size_t>(std::floor(s / bin_width_s));
        if (idx >= bins) idx = bins - 1;
        hist[idx].probability += unit;
    }
    return hist;
}

}  // namespace urllc
