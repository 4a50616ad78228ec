#pragma once

#include <cstdint>
#include <vector>

#include "bpb/circle_search.hpp"
#include "bpb/measure.hpp"
#include "bpb/rng.hpp"
#include "bpb/space.hpp"

namespace bpb {

/// Operator T: C(K) -> Y for a finite point set K, stored one range-space
/// column per point of K (the images of the point masses). Every construction
/// in the correction pipeline - projections P_B, rank-one updates, the final
/// corrected operator - is a column-level edit of this representation.
struct CKOperator {
    std::vector<ComplexVec> columns;
    SpaceDescriptor range;

    int domain_dim() const { return static_cast<int>(columns.size()); }
    int range_dim() const { return range.dim; }

    void validate() const {
        if (columns.empty()) throw DimensionError("CKOperator: need at least one column");
        for (const ComplexVec& c : columns)
            if (static_cast<int>(c.size()) != range.dim)
                throw DimensionError("CKOperator: column length != range dim");
    }

    static CKOperator zero(int n, SpaceDescriptor range) {
        CKOperator t;
        t.range = range;
        t.columns.assign(static_cast<std::size_t>(n),
                         ComplexVec(static_cast<std::size_t>(range.dim), Complex{0.0, 0.0}));
        return t;
    }
};

/// T(f) = sum_j f_j * column_j.
inline ComplexVec apply(const CKOperator& t, const ComplexVec& f) {
    if (static_cast<int>(f.size()) != t.domain_dim())
        throw DimensionError("apply: argument length != number of columns");
    ComplexVec y(static_cast<std::size_t>(t.range_dim()), Complex{0.0, 0.0});
    for (std::size_t j = 0; j < f.size(); ++j) {
        const Complex fj = f[j];
        if (fj == Complex{0.0, 0.0}) continue;
        const ComplexVec& c = t.columns[j];
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += fj * c[i];
    }
    return y;
}

/// T*(y*) as a measure on K: mass_j = y*(column_j).
inline FiniteMeasure adjoint_measure(const CKOperator& t, const ComplexVec& ystar) {
    if (static_cast<int>(ystar.size()) != t.range_dim())
        throw DimensionError("adjoint_measure: functional length != range dim");
    FiniteMeasure mu;
    mu.masses.resize(t.columns.size());
    for (std::size_t j = 0; j < t.columns.size(); ++j)
        mu.masses[j] = pair(ystar, t.columns[j]);
    return mu;
}

/// T P_B: columns outside b are zeroed. Idempotent; P_K = identity.
inline CKOperator project_columns(const CKOperator& t, const PointSet& b) {
    if (b.universe() != t.domain_dim())
        throw DomainError("project_columns: set universe != number of columns");
    CKOperator out = t;
    for (int j = 0; j < t.domain_dim(); ++j)
        if (!b.contains(j))
            out.columns[static_cast<std::size_t>(j)]
                .assign(static_cast<std::size_t>(t.range_dim()), Complex{0.0, 0.0});
    return out;
}

inline CKOperator subtract(const CKOperator& a, const CKOperator& b) {
    if (a.domain_dim() != b.domain_dim() || a.range != b.range)
        throw DimensionError("subtract: operator shapes differ");
    CKOperator out = a;
    for (std::size_t j = 0; j < out.columns.size(); ++j)
        for (std::size_t i = 0; i < out.columns[j].size(); ++i)
            out.columns[j][i] -= b.columns[j][i];
    return out;
}

inline CKOperator scale(const CKOperator& t, Complex factor) {
    CKOperator out = t;
    for (ComplexVec& c : out.columns)
        for (Complex& z : c) z *= factor;
    return out;
}

/// Tuning of the polytorus ascent oracle.
struct OracleConfig {
    int starts = 32;           ///< multi-start count (start 0 is all-ones)
    int circle_samples = 64;   ///< uniform samples per coordinate circle
    double tol = 1e-12;        ///< golden-section bracket width / sweep stop
    int max_sweeps = 200;
    std::uint64_t seed = 0;    ///< seeds the random start phases
};

/// Outcome of the norm oracle. `value` is a certified lower bound on ||T||,
/// attained at the (unimodular) `maximizer`; `residual` is the improvement of
/// the best start's final sweep, surfaced by certificates as oracle_gap.
struct NormResult {
    double value = 0.0;
    ComplexVec maximizer;
    bool converged = false;
    int iterations = 0;  ///< total sweeps across all starts
    double residual = 0.0;
};

namespace detail {

/// One multi-start run of coordinate-wise phase ascent from `h`.
/// Returns (value, sweeps, converged, last_improvement); h is updated in place.
struct AscentOutcome {
    double value = 0.0;
    int sweeps = 0;
    bool converged = false;
    double last_improvement = 0.0;
};

inline AscentOutcome phase_ascent(const CKOperator& t, ComplexVec& h,
                                  const OracleConfig& cfg) {
    const int n = t.domain_dim();
    ComplexVec image = apply(t, h);
    double value = lp_norm(image, t.range);
    AscentOutcome out;
    for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
        const double sweep_start = value;
        for (int j = 0; j < n; ++j) {
            const ComplexVec& col = t.columns[static_cast<std::size_t>(j)];
            // residual image without coordinate j's contribution
            ComplexVec rest = image;
            for (std::size_t i = 0; i < rest.size(); ++i) rest[i] -= h[static_cast<std::size_t>(j)] * col[i];
            ComplexVec probe(rest.size());
            auto objective = [&](double theta) {
                const Complex u{std::cos(theta), std::sin(theta)};
                for (std::size_t i = 0; i < rest.size(); ++i) probe[i] = rest[i] + u * col[i];
                return lp_norm(probe, t.range);
            };
            const CirclePoint best = maximize_on_circle(objective, cfg.circle_samples, cfg.tol);
            // Accept only genuine gains; the guard keeps flat objectives
            // (ties everywhere) from drifting on rounding noise.
            if (best.value > value + 1e-15 * (1.0 + value)) {
                const Complex u{std::cos(best.theta), std::sin(best.theta)};
                h[static_cast<std::size_t>(j)] = u;
                for (std::size_t i = 0; i < rest.size(); ++i) image[i] = rest[i] + u * col[i];
                value = best.value;
            }
        }
        ++out.sweeps;
        // full recompute once per sweep to cancel incremental drift
        image = apply(t, h);
        value = lp_norm(image, t.range);
        out.last_improvement = value - sweep_start;
        if (out.last_improvement < cfg.tol) {
            out.converged = true;
            break;
        }
    }
    out.value = value;
    return out;
}

} // namespace detail

/// Norm of T over the polytorus (the extreme points of the C(K) unit ball,
/// where the sup over the ball is attained): multi-start coordinate-wise
/// phase ascent. Deterministic in cfg.seed; ties keep the earliest start.
inline NormResult op_norm(const CKOperator& t, const OracleConfig& cfg = {}) {
    t.validate();
    const int n = t.domain_dim();

    bool all_zero = true;
    for (const ComplexVec& c : t.columns)
        for (const Complex& z : c)
            if (z != Complex{0.0, 0.0}) all_zero = false;
    NormResult best;
    best.maximizer.assign(static_cast<std::size_t>(n), Complex{1.0, 0.0});
    if (all_zero) {
        best.converged = true;
        return best;
    }

    best.value = -1.0;
    for (int start = 0; start < std::max(1, cfg.starts); ++start) {
        ComplexVec h(static_cast<std::size_t>(n), Complex{1.0, 0.0});
        if (start > 0) {
            Rng rng = Rng::derive(cfg.seed, static_cast<std::uint64_t>(start));
            for (Complex& z : h) z = rng.unit_phase();
        }
        const detail::AscentOutcome run = detail::phase_ascent(t, h, cfg);
        best.iterations += run.sweeps;
        if (run.value > best.value) {
            best.value = run.value;
            best.maximizer = std::move(h);
            best.converged = run.converged;
            best.residual = run.last_improvement;
        }
    }
    return best;
}

/// Exhaustive lower bound: max ||T(h)|| over the full phase grid
/// h_j = exp(2 pi i k_j / G). Cost G^n, so n is capped at 4. With
/// `refine`, single-start coordinate ascent polishes the best grid vertex
/// (the grid supplies the global basin, the ascent the final digits).
inline double op_norm_grid(const CKOperator& t, int grid_points_per_phase,
                           bool refine = false, const OracleConfig& cfg = {}) {
    t.validate();
    const int n = t.domain_dim();
    if (n > 4)
        throw ComplexityError("op_norm_grid: " + std::to_string(n) +
                              " columns; grid cost G^n is capped at n <= 4");
    const int g = grid_points_per_phase;
    if (g < 1) throw DomainError("op_norm_grid: need at least one grid point");

    std::vector<Complex> roots(static_cast<std::size_t>(g));
    for (int k = 0; k < g; ++k) {
        const double th = 2.0 * std::numbers::pi * k / g;
        roots[static_cast<std::size_t>(k)] = {std::cos(th), std::sin(th)};
    }

    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    ComplexVec h(static_cast<std::size_t>(n), Complex{1.0, 0.0});
    double best = -1.0;
    std::vector<int> best_idx = idx;
    for (;;) {
        for (int j = 0; j < n; ++j)
            h[static_cast<std::size_t>(j)] = roots[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
        const double v = lp_norm(apply(t, h), t.range);
        if (v > best) {
            best = v;
            best_idx = idx;
        }
        int j = 0;
        while (j < n && ++idx[static_cast<std::size_t>(j)] == g) {
            idx[static_cast<std::size_t>(j)] = 0;
            ++j;
        }
        if (j == n) break;
    }
    if (!refine) return best;
    ComplexVec hb(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        hb[static_cast<std::size_t>(j)] = roots[static_cast<std::size_t>(best_idx[static_cast<std::size_t>(j)])];
    const detail::AscentOutcome polished = detail::phase_ascent(t, hb, cfg);
    return std::max(best, polished.value);
}

} // namespace bpb
