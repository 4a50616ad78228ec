#pragma once

#include <cstdint>
#include <string>

#include "bpb/correct.hpp"
#include "bpb/operator.hpp"
#include "bpb/rng.hpp"

namespace bpb {

enum class InstanceMode { attain, perturb, custom };

inline const char* mode_name(InstanceMode m) {
    switch (m) {
        case InstanceMode::attain: return "attain";
        case InstanceMode::perturb: return "perturb";
        case InstanceMode::custom: return "custom";
    }
    return "custom";
}

inline InstanceMode mode_from_name(const std::string& s) {
    if (s == "attain") return InstanceMode::attain;
    if (s == "perturb") return InstanceMode::perturb;
    if (s == "custom") return InstanceMode::custom;
    throw ParseError("unknown instance mode \"" + s + "\"");
}

/// A correction problem: unit-norm T, unit-sup-norm f0, and the target eps.
struct Instance {
    int n = 0;
    SpaceDescriptor space;
    CKOperator T;
    ComplexVec f0;
    double epsilon = 0.0;
    InstanceMode mode = InstanceMode::custom;
    std::uint64_t seed = 0;
};

/// Manufacture the correction hypothesis from a seeded complex Gaussian
/// operator. attain: f0 is the norm oracle's maximizer. perturb: f0 is the
/// maximizer with entrywise phase twists of magnitude min(s/2, 1e-13), small
/// enough to keep the gate. Either way columns are rescaled so the computed
/// ||T(f0)|| lands a hair above 1 (1e-12, far inside every 1e-9 tolerance);
/// without this the strict gate entry's sign would be rounding noise when s
/// underflows double rounding.
inline Instance gen_instance(std::uint64_t seed, int n, const SpaceDescriptor& space,
                             InstanceMode mode, double epsilon,
                             const DeltaProfile* profile = nullptr,
                             const OracleConfig& oracle = {}) {
    if (n < 1) throw DomainError("gen_instance: need n >= 1");
    if (mode == InstanceMode::custom)
        throw DomainError("gen_instance: custom instances come from files, not the generator");

    for (int attempt = 0; attempt < 5; ++attempt) {
        Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(attempt) * 1000003ULL);
        CKOperator t;
        t.range = space;
        t.columns.resize(static_cast<std::size_t>(n));
        for (ComplexVec& col : t.columns) {
            col.resize(static_cast<std::size_t>(space.dim));
            for (Complex& z : col) z = rng.complex_gaussian();
        }

        OracleConfig ocfg = oracle;
        ocfg.seed = Rng::derive(seed, 0xabcdULL + attempt).next_u64();
        const NormResult nr = op_norm(t, ocfg);
        if (!nr.converged) continue;
        if (nr.value <= 0.0) continue;
        t = scale(t, Complex{1.0 / nr.value, 0.0});

        ComplexVec f0 = nr.maximizer;
        if (mode == InstanceMode::perturb && profile != nullptr) {
            const ParameterPack pk = parameter_pack(epsilon, *profile);
            const double mag = std::min(pk.s / 2.0, 1e-13);
            for (Complex& z : f0) {
                const double twist = rng.uniform(-mag, mag);
                z *= Complex{std::cos(twist), std::sin(twist)};
            }
        }

        // Land the computed ||T(f0)|| at 1 + 1e-12 exactly as evaluated.
        const double w = lp_norm(apply(t, f0), space);
        if (w <= 0.0) continue;
        t = scale(t, Complex{(1.0 + 1e-12) / w, 0.0});

        Instance inst;
        inst.n = n;
        inst.space = space;
        inst.T = std::move(t);
        inst.f0 = std::move(f0);
        inst.epsilon = epsilon;
        inst.mode = mode;
        inst.seed = seed;
        return inst;
    }
    throw OracleNotConverged("gen_instance: norm oracle failed on 5 consecutive sub-seeds");
}

} // namespace bpb
