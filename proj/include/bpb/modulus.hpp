#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "bpb/circle_search.hpp"
#include "bpb/operator.hpp"
#include "bpb/rng.hpp"
#include "bpb/space.hpp"

namespace bpb {

/// sup over the unit circle of ||x + lambda*eps*y|| - 1, the inner objective
/// of the convexity modulus. x and y must be unit vectors of `space`.
inline double circle_sup(const SpaceDescriptor& space, const ComplexVec& x,
                         const ComplexVec& y, double eps,
                         int samples = 64, double tol = 1e-12) {
    if (!(eps > 0.0)) throw DomainError("circle_sup: need eps > 0");
    if (std::abs(lp_norm(x, space) - 1.0) > 1e-9 || std::abs(lp_norm(y, space) - 1.0) > 1e-9)
        throw DomainError("circle_sup: x and y must be unit vectors");
    ComplexVec probe(x.size());
    auto objective = [&](double theta) {
        const Complex lam{std::cos(theta), std::sin(theta)};
        for (std::size_t j = 0; j < x.size(); ++j) probe[j] = x[j] + lam * eps * y[j];
        return lp_norm(probe, space);
    };
    return maximize_on_circle(objective, samples, tol).value - 1.0;
}

struct EstimatorConfig {
    int starts = 64;          ///< random unit pairs (canonical pairs are added on top)
    int circle_samples = 64;
    double init_step = 0.25;  ///< pattern-search step, halved on stall
    double min_step = 1e-6;
    std::uint64_t seed = 0x5eedde17a0000001ULL;
};

namespace detail {

inline ComplexVec normalized(ComplexVec v, const SpaceDescriptor& space) {
    const double n = lp_norm(v, space);
    if (n == 0.0) throw ZeroVectorError("normalized: zero vector");
    for (Complex& z : v) z /= n;
    return v;
}

/// Local descent of (x, y) |-> circle_sup(x, y, eps) over the product of unit
/// spheres: coordinate pattern search with renormalization after every probe.
inline double descend_pair(const SpaceDescriptor& space, ComplexVec x, ComplexVec y,
                           double eps, const EstimatorConfig& cfg) {
    double best = circle_sup(space, x, y, eps, cfg.circle_samples);
    double step = cfg.init_step;
    while (step > cfg.min_step) {
        bool improved = false;
        for (int which = 0; which < 2; ++which) {
            ComplexVec& v = which == 0 ? x : y;
            for (std::size_t j = 0; j < v.size(); ++j) {
                static constexpr Complex dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
                for (const Complex& d : dirs) {
                    ComplexVec cand = v;
                    cand[j] += step * d;
                    double cn = lp_norm(cand, space);
                    if (cn == 0.0) continue;
                    for (Complex& z : cand) z /= cn;
                    ComplexVec saved = v;
                    v = cand;
                    const double val = circle_sup(space, x, y, eps, cfg.circle_samples);
                    if (val < best - 1e-15) {
                        best = val;
                        improved = true;
                    } else {
                        v = saved;
                    }
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return best;
}

} // namespace detail

/// Upper estimate of the complex convexity modulus delta(eps) of `space`:
/// the smallest circle_sup found over multi-start pattern-search descent on
/// unit pairs (x, y). Deterministic in cfg.seed.
inline double estimate_delta(const SpaceDescriptor& space, double eps,
                             const EstimatorConfig& cfg = {}) {
    if (!(eps > 0.0)) throw DomainError("estimate_delta: need eps > 0");
    const int m = space.dim;
    double best = eps; // circle_sup <= eps for every pair; eps is the trivial ceiling

    // Canonical extremal candidates first: axis-aligned pairs reach the known
    // witnesses (orthogonal pair for l2, disjoint supports for l_inf) exactly.
    ComplexVec e0(static_cast<std::size_t>(m), Complex{0, 0});
    e0[0] = 1.0;
    std::vector<std::pair<ComplexVec, ComplexVec>> starts;
    starts.emplace_back(e0, e0);
    ComplexVec ie0 = e0;
    ie0[0] = Complex{0, 1};
    starts.emplace_back(e0, ie0);
    if (m >= 2) {
        ComplexVec e1(static_cast<std::size_t>(m), Complex{0, 0});
        e1[1] = 1.0;
        starts.emplace_back(e0, e1);
    }
    for (int k = 0; k < cfg.starts; ++k) {
        Rng rng = Rng::derive(cfg.seed, static_cast<std::uint64_t>(k));
        ComplexVec x(static_cast<std::size_t>(m)), y(static_cast<std::size_t>(m));
        for (Complex& z : x) z = rng.complex_gaussian();
        for (Complex& z : y) z = rng.complex_gaussian();
        starts.emplace_back(detail::normalized(std::move(x), space),
                            detail::normalized(std::move(y), space));
    }
    for (const auto& [x, y] : starts)
        best = std::min(best, detail::descend_pair(space, x, y, eps, cfg));
    return best;
}

/// Lower-bound profile for delta(eps), the quantity the correction constants
/// are built from. Analytic profiles are exact; estimated profiles multiply
/// the (upper) numerical estimate by a safety factor. Estimates are memoized
/// per eps, as the pipeline re-queries the same eps/9 repeatedly.
class DeltaProfile {
public:
    enum class Kind { analytic, estimated };

    /// delta(t) = t: the scalar field C (any one-dimensional l_p).
    static DeltaProfile analytic_c() {
        DeltaProfile p;
        p.kind_ = Kind::analytic;
        p.name_ = "analytic:c";
        p.safety_ = 1.0;
        p.eval_ = [](double t) { return t; };
        return p;
    }

    /// delta(t) = sqrt(1+t^2) - 1 for Hilbert space of dim >= 2
    /// (dim 1 degenerates to the scalar field, where delta(t) = t).
    static DeltaProfile analytic_l2(int dim) {
        DeltaProfile p;
        p.kind_ = Kind::analytic;
        p.name_ = "analytic:l2";
        p.safety_ = 1.0;
        if (dim <= 1)
            p.eval_ = [](double t) { return t; };
        else
            p.eval_ = [](double t) { return std::sqrt(1.0 + t * t) - 1.0; };
        return p;
    }

    static DeltaProfile estimated(SpaceDescriptor space, EstimatorConfig cfg = {},
                                  double safety = 0.5) {
        if (!(safety > 0.0 && safety <= 1.0))
            throw DomainError("DeltaProfile: safety must be in (0, 1]");
        DeltaProfile p;
        p.kind_ = Kind::estimated;
        char buf[64];
        std::snprintf(buf, sizeof buf, "estimated(safety=%g)", safety);
        p.name_ = buf;
        p.safety_ = safety;
        auto memo = std::make_shared<Memo>();
        p.eval_ = [space, cfg, safety, memo](double t) {
            std::lock_guard<std::mutex> lock(memo->mutex);
            auto it = memo->values.find(t);
            if (it != memo->values.end()) return it->second;
            const double v = safety * estimate_delta(space, t, cfg);
            memo->values.emplace(t, v);
            return v;
        };
        return p;
    }

    double evaluate(double eps) const { return eval_(eps); }
    Kind kind() const { return kind_; }
    double safety() const { return safety_; }
    const std::string& name() const { return name_; }

private:
    struct Memo {
        std::mutex mutex;
        std::map<double, double> values;
    };

    Kind kind_ = Kind::analytic;
    std::string name_;
    double safety_ = 1.0;
    std::function<double(double)> eval_;
};

/// The correction constants, all derived from eps and d = delta(eps/9):
///   eta  = eps^2 d^2 / (10945 (1+d)^2)
///   s    = eta (2-eps) eps^2 / (2 (eps^2 + 2*12^2))
///   beta = eps^2 / (2*12^2)
///   eps1 = d / (6 (1+d))
/// tail_threshold = d/(1+d) gates the tail lemma at eps/9.
struct ParameterPack {
    double epsilon = 0.0;
    double d = 0.0;
    double eta = 0.0;
    double s = 0.0;
    double beta = 0.0;
    double eps1 = 0.0;
    double tail_threshold = 0.0;
};

inline ParameterPack parameter_pack(double eps, const DeltaProfile& profile) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("parameter_pack: need 0 < eps < 1");
    ParameterPack pk;
    pk.epsilon = eps;
    pk.d = profile.evaluate(eps / 9.0);
    if (!(pk.d > 0.0))
        throw NotUniformlyConvexError(
            "parameter_pack: delta lower bound at eps/9 is not positive");
    const double d = pk.d;
    pk.eta = eps * eps * d * d / (10945.0 * (1.0 + d) * (1.0 + d));
    pk.s = pk.eta * (2.0 - eps) * eps * eps / (2.0 * (eps * eps + 2.0 * 144.0));
    pk.beta = eps * eps / 288.0;
    pk.eps1 = d / (6.0 * (1.0 + d));
    pk.tail_threshold = d / (1.0 + d);
    return pk;
}

} // namespace bpb
