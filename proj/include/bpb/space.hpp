#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "bpb/errors.hpp"

namespace bpb {

using Complex = std::complex<double>;
using ComplexVec = std::vector<Complex>;

/// Absolute comparison tolerance used throughout unless a caller overrides.
inline constexpr double kDefaultTol = 1e-12;

/// Unimodular phase of z, with phase(0) := 1 so that |phase(z)| = 1 always.
inline Complex phase(Complex z) {
    const double m = std::abs(z);
    if (m == 0.0) return {1.0, 0.0};
    return z / m;
}

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// An l_p space of complex sequences. p = infinity is allowed (that is the
/// domain norm of C(K) on a finite K); dim >= 1.
struct SpaceDescriptor {
    double p = 2.0;
    int dim = 1;

    static SpaceDescriptor lp(double p, int dim) {
        if (!(p >= 1.0) || dim < 1)
            throw DomainError("SpaceDescriptor: need p >= 1 and dim >= 1");
        return SpaceDescriptor{p, dim};
    }

    bool is_inf() const { return std::isinf(p); }

    bool operator==(const SpaceDescriptor&) const = default;

    /// Canonical text form, e.g. "lp:2:3" or "lp:inf:2".
    std::string name() const {
        std::string ps;
        if (is_inf()) {
            ps = "inf";
        } else if (p == static_cast<double>(static_cast<long long>(p))) {
            ps = std::to_string(static_cast<long long>(p));
        } else {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", p);
            ps = buf;
        }
        return "lp:" + ps + ":" + std::to_string(dim);
    }
};

/// (sum |v_j|^p)^(1/p), or max_j |v_j| for p = infinity.
inline double lp_norm(const ComplexVec& v, const SpaceDescriptor& space) {
    if (static_cast<int>(v.size()) != space.dim)
        throw DimensionError("lp_norm: vector length " + std::to_string(v.size()) +
                             " != space dim " + std::to_string(space.dim));
    if (space.is_inf()) {
        double m = 0.0;
        for (const Complex& z : v) m = std::max(m, std::abs(z));
        return m;
    }
    if (space.p == 2.0) {
        double s = 0.0;
        for (const Complex& z : v) s += std::norm(z);
        return std::sqrt(s);
    }
    if (space.p == 1.0) {
        double s = 0.0;
        for (const Complex& z : v) s += std::abs(z);
        return s;
    }
    // General p: scale by the max modulus so the powers stay in range.
    double m = 0.0;
    for (const Complex& z : v) m = std::max(m, std::abs(z));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (const Complex& z : v) s += std::pow(std::abs(z) / m, space.p);
    return m * std::pow(s, 1.0 / space.p);
}

/// Sup norm shortcut (the C(K) norm on a finite point set).
inline double sup_norm(const ComplexVec& v) {
    double m = 0.0;
    for (const Complex& z : v) m = std::max(m, std::abs(z));
    return m;
}

/// Norming functional of y in l_p (1 <= p < infinity): the unit dual vector
/// y* with bilinear pairing y*(y) = sum_j y*_j y_j = ||y||_p, real positive.
///
/// 1 < p < inf:  y*_j = conj(y_j) |y_j|^(p-2) / ||y||^(p-1)  (0 where y_j = 0)
/// p = 1:        y*_j = conj(phase(y_j)), phase(0) = 1
inline ComplexVec norming_functional(const ComplexVec& y, const SpaceDescriptor& space) {
    if (static_cast<int>(y.size()) != space.dim)
        throw DimensionError("norming_functional: vector length != space dim");
    if (space.is_inf())
        throw DomainError("norming_functional: p = inf range spaces are not normed here");
    const double nrm = lp_norm(y, space);
    if (nrm == 0.0) throw ZeroVectorError("norming_functional: zero vector");
    ComplexVec out(y.size());
    if (space.p == 1.0) {
        // pairing = sum |y_j| = ||y||_1; dual (sup) norm = 1 by construction
        for (std::size_t j = 0; j < y.size(); ++j) out[j] = std::conj(phase(y[j]));
        return out;
    }
    for (std::size_t j = 0; j < y.size(); ++j) {
        const double a = std::abs(y[j]);
        if (a == 0.0) {
            out[j] = 0.0;
        } else {
            // conj(phase) * (|y_j|/||y||)^(p-1), written to avoid overflow for p < 2
            out[j] = std::conj(y[j] / a) * std::pow(a / nrm, space.p - 1.0);
        }
    }
    return out;
}

/// Dual pairing sum_j f_j g_j (bilinear; conjugation lives in the functional).
inline Complex pair(const ComplexVec& f, const ComplexVec& g) {
    if (f.size() != g.size()) throw DimensionError("pair: length mismatch");
    Complex s = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * g[j];
    return s;
}

/// Radial retraction onto the closed unit disc, applied entrywise:
/// z for |z| <= 1, z/|z| otherwise.
inline ComplexVec truncate_disc(const ComplexVec& v) {
    ComplexVec out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double m = std::abs(v[j]);
        out[j] = (m <= 1.0) ? v[j] : v[j] / m;
    }
    return out;
}

struct DiscLemmaResult {
    bool holds_hypothesis = false; ///< Re(w * lam) > 1 - t
    double distance = 0.0;         ///< |w - conj(lam)|
    double bound = 0.0;            ///< sqrt(2 t)
};

/// Elementary disc lemma: for w, lam in the closed unit disc and 0 < t < 1,
/// Re(w lam) > 1 - t implies |w - conj(lam)| < sqrt(2 t).
inline DiscLemmaResult lemma_basic_l_bound(Complex w, Complex lam, double t) {
    constexpr double slack = 1e-12; // admit points on the boundary up to rounding
    if (std::abs(w) > 1.0 + slack || std::abs(lam) > 1.0 + slack)
        throw DomainError("lemma_basic_l_bound: inputs must lie in the closed unit disc");
    if (!(t > 0.0 && t < 1.0))
        throw DomainError("lemma_basic_l_bound: need 0 < t < 1");
    DiscLemmaResult r;
    r.holds_hypothesis = (w * lam).real() > 1.0 - t;
    r.distance = std::abs(w - std::conj(lam));
    r.bound = std::sqrt(2.0 * t);
    return r;
}

} // namespace bpb
