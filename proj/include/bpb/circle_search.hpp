#pragma once

#include <cmath>
#include <numbers>
#include <utility>

namespace bpb {

struct CirclePoint {
    double theta = 0.0;
    double value = 0.0;
};

/// Maximize a smooth 2*pi-periodic objective over the circle: uniform
/// sampling brackets the global maximum, golden-section refines it until the
/// bracket width drops below tol.
template <class F>
CirclePoint maximize_on_circle(F&& f, int samples, double tol) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    int best_k = 0;
    double best_v = f(0.0);
    for (int k = 1; k < samples; ++k) {
        const double th = two_pi * k / samples;
        const double v = f(th);
        if (v > best_v) {
            best_v = v;
            best_k = k;
        }
    }
    // Bracket around the best sample (periodic neighbours).
    double lo = two_pi * (best_k - 1) / samples;
    double hi = two_pi * (best_k + 1) / samples;

    constexpr double inv_phi = 0.6180339887498949; // 1/phi
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    CirclePoint out{two_pi * best_k / samples, best_v};
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm > out.value) out = {mid, fm};
    if (f1 > out.value) out = {x1, f1};
    if (f2 > out.value) out = {x2, f2};
    return out;
}

} // namespace bpb
