#pragma once

#include <cmath>

namespace urllc::detail {

inline constexpr int kBisectIterCap = 200;
inline constexpr double kBisectArgTol = 1e-12;

/// Bisection for the boundary of a monotone predicate: returns the smallest x
/// in [lo, hi] with pred(x) true, assuming {x : pred(x)} is an up-set and
/// pred(hi) holds. Converges to kBisectArgTol on the argument.
template <typename Pred>
double bisect_boundary(Pred&& pred, double lo, double hi) {
    for (int i = 0; i < kBisectIterCap && (hi - lo) > kBisectArgTol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (pred(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

/// Root of a continuous increasing-crossing function f (f(lo) < 0 < f(hi)).
template <typename Fn>
double bisect_root(Fn&& f, double lo, double hi) {
    return bisect_boundary([&](double x) { return f(x) >= 0.0; }, lo, hi);
}

}  // namespace urllc::detail
