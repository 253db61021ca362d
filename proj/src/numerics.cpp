#include "urllc/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "urllc/detail/bisect.hpp"
#include "urllc/errors.hpp"

namespace urllc {

namespace {

constexpr double kLog2E = std::numbers::log2e;
constexpr double kInvSqrt2 = 0.70710678118654752440;

// Regularized lower incomplete gamma by series expansion, valid and fast for
// x < shape + 1 (Numerical Recipes 6.2).
double gamma_p_series(double shape, double x) {
    double ap = shape;
    double term = 1.0 / shape;
    double sum = term;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) {
            break;
        }
    }
    return sum * std::exp(-x + shape * std::log(x) - std::lgamma(shape));
}

// Complementary (upper) regularized gamma by Lentz continued fraction, for
// x >= shape + 1.
double gamma_q_contfrac(double shape, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - shape;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - shape);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) {
            break;
        }
    }
    return std::exp(-x + shape * std::log(x) - std::lgamma(shape)) * h;
}

}  // namespace

void FblQuery::validate() const {
    if (!(snr >= 0.0) || !std::isfinite(snr)) {
        throw std::domain_error("FblQuery: snr must be finite and >= 0");
    }
    if (!(latency_s > 0.0)) {
        throw std::domain_error("FblQuery: latency must be > 0");
    }
    if (!(bandwidth_hz > 0.0)) {
        throw std::domain_error("FblQuery: bandwidth must be > 0");
    }
    if (!(error_prob > 0.0 && error_prob < 1.0)) {
        throw std::domain_error("FblQuery: error_prob must lie in (0,1)");
    }
}

double q_function(double x) {
    return 0.5 * std::erfc(x * kInvSqrt2);
}

double q_inverse(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("q_inverse: argument must lie in (0,1)");
    }
    // q_function is decreasing, so Pr{Q(x) <= p} is an up-set in x.
    double lo = -1.0, hi = 1.0;
    int guard = 0;
    while (q_function(lo) <= p && guard++ < 100) lo *= 2.0;
    guard = 0;
    while (q_function(hi) > p && guard++ < 100) hi *= 2.0;
    return detail::bisect_boundary([&](double x) { return q_function(x) <= p; }, lo, hi);
}

double gamma_lower_regularized(double shape, double x) {
    if (!(shape > 0.0)) {
        throw std::domain_error("gamma_lower_regularized: shape must be > 0");
    }
    if (x < 0.0) {
        throw std::domain_error("gamma_lower_regularized: x must be >= 0");
    }
    if (x == 0.0) {
        return 0.0;
    }
    double p = (x < shape + 1.0) ? gamma_p_series(shape, x) : 1.0 - gamma_q_contfrac(shape, x);
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
    return p;
}

double channel_dispersion(double snr) {
    if (!(snr >= 0.0)) {
        throw std::domain_error("channel_dispersion: snr must be >= 0");
    }
    const double w = 1.0 + snr;
    return (1.0 - 1.0 / (w * w)) * kLog2E * kLog2E;
}

namespace detail {

double fbl_rate_qinv(double snr, double latency_s, double bandwidth_hz, double qinv) {
    const double n = latency_s * bandwidth_hz;
    if (!(n >= 1.0)) {
        throw std::domain_error("fbl_rate: blocklength L*B must be >= 1");
    }
    const double shannon = std::log2(1.0 + snr);
    const double penalty = std::sqrt(channel_dispersion(snr) / n) * qinv;
    return bandwidth_hz * (shannon - penalty);
}

double fbl_required_snr_qinv(double rate_bps, double latency_s, double bandwidth_hz, double qinv) {
    if (!(rate_bps > 0.0)) {
        throw std::domain_error("fbl_required_snr: rate must be > 0");
    }
    auto rate_at = [&](double rho) { return fbl_rate_qinv(rho, latency_s, bandwidth_hz, qinv); };
    // For any positive target the set {rho : rate(rho) >= target} is an
    // up-set: the curve dips below zero at small rho, then increases through
    // the target exactly once.
    double hi = 1.0;
    int guard = 0;
    while (rate_at(hi) < rate_bps) {
        hi *= 2.0;
        if (++guard > 60 || !std::isfinite(hi)) {
            throw infeasible_error("fbl_required_snr: rate " + std::to_string(rate_bps) +
                                   " bps unattainable at any finite SNR");
        }
    }
    return bisect_boundary([&](double rho) { return rate_at(rho) >= rate_bps; }, 0.0, hi);
}

}  // namespace detail

double fbl_rate(const FblQuery& q) {
    q.validate();
    return detail::fbl_rate_qinv(q.snr, q.latency_s, q.bandwidth_hz, q_inverse(q.error_prob));
}

double fbl_rate_expectation(std::span<const double> snr_samples, double latency_s,
                            double bandwidth_hz, double error_prob) {
    if (snr_samples.empty()) {
        throw std::domain_error("fbl_rate_expectation: need at least one SNR sample");
    }
    double acc = 0.0;
    for (double rho : snr_samples) {
        acc += fbl_rate({rho, latency_s, bandwidth_hz, error_prob});
    }
    return acc / static_cast<double>(snr_samples.size());
}

double fbl_required_snr(double rate_bps, double latency_s, double bandwidth_hz,
                        double error_prob) {
    FblQuery{1.0, latency_s, bandwidth_hz, error_prob}.validate();
    return detail::fbl_required_snr_qinv(rate_bps, latency_s, bandwidth_hz,
                                         q_inverse(error_prob));
}

double fbl_min_latency(double rate_bps, double snr, double bandwidth_hz, double error_prob,
                       const LatencyWindow& window) {
    if (!(rate_bps > 0.0)) {
        throw std::domain_error("fbl_min_latency: rate must be > 0");
    }
    const double shannon = bandwidth_hz * std::log2(1.0 + snr);
    if (error_prob < 0.5 && rate_bps >= shannon) {
        throw infeasible_error("fbl_min_latency: rate " + std::to_string(rate_bps) +
                               " bps >= Shannon rate " + std::to_string(shannon) + " bps");
    }
    const double qinv = q_inverse(error_prob);
    auto meets = [&](double latency) {
        return detail::fbl_rate_qinv(snr, latency, bandwidth_hz, qinv) >= rate_bps;
    };
    // Blocklength must cover at least one channel use.
    const double floor_s = std::max(window.floor_s, 1.0 / bandwidth_hz);
    if (meets(floor_s)) {
        return floor_s;
    }
    if (!meets(window.cap_s)) {
        throw infeasible_error("fbl_min_latency: target rate needs more than the latency cap " +
                               std::to_string(window.cap_s) + " s");
    }
    return detail::bisect_boundary(meets, floor_s, window.cap_s);
}

}  // namespace urllc
