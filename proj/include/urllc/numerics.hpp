#pragma once

// Special functions and finite-blocklength rate math shared by the PHY and
// MAC models. All operations are pure and thread-safe.

#include <span>

namespace urllc {

/// Query tuple for the finite-blocklength achievable rate: SNR rho (linear),
/// transmission latency L, bandwidth B and block error probability epsilon.
/// Blocklength is n = L*B channel uses.
struct FblQuery {
    double snr = 0.0;           // linear power ratio, >= 0
    double latency_s = 0.0;     // > 0
    double bandwidth_hz = 0.0;  // > 0
    double error_prob = 0.0;    // in (0,1)

    void validate() const;  // throws std::domain_error
};

/// Search window for latency solvers. The floor is returned when any latency
/// attains the target (epsilon = 0.5 case); the cap bounds the divergence
/// near the Shannon limit.
struct LatencyWindow {
    double floor_s = 1e-9;
    double cap_s = 10.0;
};

/// Gaussian tail probability Pr{N(0,1) > x}.
double q_function(double x);

/// Inverse of q_function on (0,1). Bisection with bracket expansion;
/// round-trips to 1e-10 relative in probability.
double q_inverse(double p);

/// Regularized lower incomplete gamma P(shape, x). Series expansion for
/// x < shape+1, continued fraction otherwise.
double gamma_lower_regularized(double shape, double x);

/// Quasi-static fading channel dispersion V = (1 - 1/(1+rho)^2) (log2 e)^2,
/// in squared bits per channel use.
double channel_dispersion(double snr);

/// Normal-approximation achievable rate in bits/s at finite blocklength:
/// B [ log2(1+rho) - sqrt(V/(L B)) Qinv(eps) ]. Negative values are returned
/// as-is; callers decide how to treat unachievable regions.
double fbl_rate(const FblQuery& q);

/// Expectation hook for fading inputs: averages fbl_rate over a set of SNR
/// draws at fixed (L, B, eps). A single sample reproduces the deterministic
/// specialization.
double fbl_rate_expectation(std::span<const double> snr_samples, double latency_s,
                            double bandwidth_hz, double error_prob);

/// Smallest SNR at which fbl_rate meets `rate_bps`, by bracketed bisection.
/// Throws infeasible_error if the rate is unattainable at any finite SNR.
double fbl_required_snr(double rate_bps, double latency_s, double bandwidth_hz,
                        double error_prob);

/// Smallest latency at which fbl_rate meets `rate_bps`, by monotone
/// bisection within the window. Throws infeasible_error when the rate is at
/// or above the Shannon rate (eps < 0.5) or needs more than window.cap_s.
double fbl_min_latency(double rate_bps, double snr, double bandwidth_hz, double error_prob,
                       const LatencyWindow& window = {});

namespace detail {

/// Hot-loop forms taking a precomputed qinv = q_inverse(error_prob), so
/// solver sweeps do not re-invert the Q-function per iteration.
double fbl_rate_qinv(double snr, double latency_s, double bandwidth_hz, double qinv);
double fbl_required_snr_qinv(double rate_bps, double latency_s, double bandwidth_hz, double qinv);

}  // namespace detail

}  // namespace urllc
