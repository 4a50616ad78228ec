#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

#include "bpb/space.hpp"

namespace bpb {

/// Subset of the point set {0, ..., n-1}, stored as a dense membership mask.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(int universe) : mask_(static_cast<std::size_t>(universe), 0) {}

    static PointSet empty(int universe) { return PointSet(universe); }

    static PointSet full(int universe) {
        PointSet s(universe);
        std::fill(s.mask_.begin(), s.mask_.end(), 1);
        return s;
    }

    static PointSet of(int universe, std::initializer_list<int> members) {
        PointSet s(universe);
        for (int j : members) s.add(j);
        return s;
    }

    template <class Pred>
    static PointSet where(int universe, Pred&& pred) {
        PointSet s(universe);
        for (int j = 0; j < universe; ++j)
            if (pred(j)) s.mask_[static_cast<std::size_t>(j)] = 1;
        return s;
    }

    void add(int j) {
        check(j);
        mask_[static_cast<std::size_t>(j)] = 1;
    }

    bool contains(int j) const {
        check(j);
        return mask_[static_cast<std::size_t>(j)] != 0;
    }

    int universe() const { return static_cast<int>(mask_.size()); }

    int count() const {
        int c = 0;
        for (char b : mask_) c += (b != 0);
        return c;
    }

    bool is_empty() const { return count() == 0; }

    PointSet complement() const {
        PointSet s(universe());
        for (std::size_t j = 0; j < mask_.size(); ++j) s.mask_[j] = mask_[j] ? 0 : 1;
        return s;
    }

    PointSet union_with(const PointSet& other) const {
        if (other.universe() != universe())
            throw DimensionError("PointSet: universe mismatch");
        PointSet s(universe());
        for (std::size_t j = 0; j < mask_.size(); ++j)
            s.mask_[j] = (mask_[j] || other.mask_[j]) ? 1 : 0;
        return s;
    }

    PointSet minus(const PointSet& other) const {
        if (other.universe() != universe())
            throw DimensionError("PointSet: universe mismatch");
        PointSet s(universe());
        for (std::size_t j = 0; j < mask_.size(); ++j)
            s.mask_[j] = (mask_[j] && !other.mask_[j]) ? 1 : 0;
        return s;
    }

    std::vector<int> members() const {
        std::vector<int> out;
        for (int j = 0; j < universe(); ++j)
            if (mask_[static_cast<std::size_t>(j)]) out.push_back(j);
        return out;
    }

    bool operator==(const PointSet&) const = default;

private:
    void check(int j) const {
        if (j < 0 || j >= universe())
            throw DomainError("PointSet: index " + std::to_string(j) + " outside universe");
    }

    std::vector<char> mask_;
};

/// Complex measure on the finite point set L: one complex mass per point.
struct FiniteMeasure {
    ComplexVec masses;

    int size() const { return static_cast<int>(masses.size()); }
};

struct PolarDecomposition {
    std::vector<double> variation; ///< |mass_j|
    ComplexVec phase;              ///< unimodular, phase(0) = 1
    double total = 0.0;            ///< total variation = sum |mass_j|
};

/// Finite Radon-Nikodym decomposition mu = g.|mu|: entrywise modulus and
/// phase, with masses_j = phase_j * variation_j.
inline PolarDecomposition polar_decompose(const FiniteMeasure& mu) {
    PolarDecomposition d;
    d.variation.resize(mu.masses.size());
    d.phase.resize(mu.masses.size());
    for (std::size_t j = 0; j < mu.masses.size(); ++j) {
        d.variation[j] = std::abs(mu.masses[j]);
        d.phase[j] = phase(mu.masses[j]);
        d.total += d.variation[j];
    }
    return d;
}

/// |mu|(E) = sum over E of |mass_j|; additive over disjoint sets.
inline double variation_on(const FiniteMeasure& mu, const PointSet& e) {
    if (e.universe() != mu.size())
        throw DomainError("variation_on: set universe != measure length");
    double s = 0.0;
    for (int j = 0; j < mu.size(); ++j)
        if (e.contains(j)) s += std::abs(mu.masses[static_cast<std::size_t>(j)]);
    return s;
}

/// Total variation ||mu||.
inline double total_variation(const FiniteMeasure& mu) {
    double s = 0.0;
    for (const Complex& z : mu.masses) s += std::abs(z);
    return s;
}

} // namespace bpb
