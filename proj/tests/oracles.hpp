#pragma once

// Test-only reference oracles, kept independent of the library's
// implementation paths: long-double series for the incomplete gamma, a
// rational-approximation inverse normal (Acklam) with Halley refinement,
// brute-force grid scans for the FBL inverses, and exhaustive enumeration
// for the urban matching.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oracles {

// Lower regularized incomplete gamma by direct series, up to 1e6 terms in
// long double. Valid for moderate x (series converges for all x, slowly for
// large x).
inline long double gamma_p_series_1e6(long double shape, long double x) {
    if (x <= 0.0L) return 0.0L;
    long double ap = shape;
    long double term = 1.0L / shape;
    long double sum = term;
    for (long n = 0; n < 1000000; ++n) {
        ap += 1.0L;
        term *= x / ap;
        sum += term;
        if (fabsl(term) < fabsl(sum) * 1e-22L) break;
    }
    return sum * expl(-x + shape * logl(x) - lgammal(shape));
}

// Acklam's rational approximation to the inverse standard normal CDF,
// refined by two Halley steps against erfc. Relative error ~1e-15.
inline double inverse_normal_cdf(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    for (int i = 0; i < 2; ++i) {
        const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
        const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
        x = x - u / (1.0 + x * u / 2.0);
    }
    return x;
}

// Gaussian tail inverse: Q^{-1}(eps) = Phi^{-1}(1 - eps).
inline double q_inv(double eps) { return -inverse_normal_cdf(eps); }

// Normal-approximation rate evaluated straight from the formula with the
// oracle's own inverse normal.
inline double fbl_rate(double snr, double latency_s, double bandwidth_hz, double eps) {
    const double n = latency_s * bandwidth_hz;
    const double log2e = 1.4426950408889634;
    const double v = (1.0 - 1.0 / ((1.0 + snr) * (1.0 + snr))) * log2e * log2e;
    return bandwidth_hz * (std::log2(1.0 + snr) - std::sqrt(v / n) * q_inv(eps));
}

// Coarse grid scan over SNR followed by interval bisection; independent of
// the library's bracket logic.
inline double grid_min_snr(double rate_bps, double latency_s, double bandwidth_hz, double eps) {
    double lo = 0.0, hi = 0.0;
    for (double rho = 1e-6; rho < 1e12; rho *= 1.3) {
        if (fbl_rate(rho, latency_s, bandwidth_hz, eps) >= rate_bps) {
            hi = rho;
            break;
        }
        lo = rho;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (fbl_rate(mid, latency_s, bandwidth_hz, eps) >= rate_bps) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

// Dense grid scan over latency followed by bisection refinement.
inline double grid_min_latency(double rate_bps, double snr, double bandwidth_hz, double eps) {
    double lo = 1.0 / bandwidth_hz, hi = 0.0;
    for (double latency = lo; latency < 1e4; latency *= 1.05) {
        if (fbl_rate(snr, latency, bandwidth_hz, eps) >= rate_bps) {
            hi = latency;
            break;
        }
        lo = latency;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-18; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (fbl_rate(snr, mid, bandwidth_hz, eps) >= rate_bps) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

// Closed-form latency inversion of the rate formula (algebraic route):
// L = V Qinv^2 / (B (log2(1+rho) - r/B)^2) for r below the Shannon rate.
inline double closed_form_min_latency(double rate_bps, double snr, double bandwidth_hz,
                                      double eps) {
    const double log2e = 1.4426950408889634;
    const double v = (1.0 - 1.0 / ((1.0 + snr) * (1.0 + snr))) * log2e * log2e;
    const double gap = std::log2(1.0 + snr) - rate_bps / bandwidth_hz;
    const double qi = q_inv(eps);
    return v * qi * qi / (bandwidth_hz * gap * gap);
}

// Max over injective VUE->CUE maps of
//   min( min_v utility[v][map(v)], min_{unmatched c} clean[c] )
// with utility < 0 meaning the pair is infeasible.
inline double best_assignment_exhaustive(const std::vector<std::vector<double>>& utility,
                                         const std::vector<double>& clean) {
    const std::size_t nv = utility.size();
    const std::size_t nc = clean.size();
    std::vector<int> map(nv, -1);
    std::vector<char> used(nc, 0);
    double best = -1.0;
    auto recurse = [&](auto&& self, std::size_t v) -> void {
        if (v == nv) {
            double objective = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < nv; ++i) {
                objective = std::min(objective, utility[i][static_cast<std::size_t>(map[i])]);
            }
            for (std::size_t c = 0; c < nc; ++c) {
                if (!used[c]) objective = std::min(objective, clean[c]);
            }
            best = std::max(best, objective);
            return;
        }
        for (std::size_t c = 0; c < nc; ++c) {
            if (used[c] || utility[v][c] < 0.0) continue;
            used[c] = 1;
            map[v] = static_cast<int>(c);
            self(self, v + 1);
            used[c] = 0;
        }
    };
    recurse(recurse, 0);
    return best;
}

}  // namespace oracles
