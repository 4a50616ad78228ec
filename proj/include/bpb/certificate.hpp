#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bpb/operator.hpp"

namespace bpb {

enum class Relation { less, leq };

inline const char* relation_symbol(Relation r) { return r == Relation::less ? "<" : "<="; }

/// One inequality of the proof chain, evaluated numerically.
/// slack = rhs - lhs; a "<" entry holds iff slack > 0 (failing loudly at
/// exact zero), a "<=" entry holds iff slack >= -tol.
struct CertEntry {
    std::string label;
    double lhs = 0.0;
    double rhs = 0.0;
    Relation relation = Relation::leq;
    double slack = 0.0;
    bool holds = false;
    bool guaranteed = true; ///< false when the run's gate cannot back this entry
};

inline bool entry_holds(double slack, Relation rel, double tol) {
    return rel == Relation::less ? slack > 0.0 : slack >= -tol;
}

struct CertificateOutputs {
    CKOperator S;
    ComplexVec f3;
    double dist_op = 0.0;        ///< op_norm(S - T)
    double dist_fn = 0.0;        ///< sup-norm(f3 - f0)
    double norm_S = 0.0;         ///< op_norm(S)
    double attained_value = 0.0; ///< ||S(f3)||
};

struct Certificate {
    // meta
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::string profile;
    std::string mode; ///< "strict" or "relaxed"

    std::vector<CertEntry> entries;
    CertificateOutputs outputs;
    double oracle_gap = 0.0;

    bool all_hold() const {
        for (const CertEntry& e : entries)
            if (!e.holds) return false;
        return true;
    }

    double min_slack() const {
        double m = std::numeric_limits<double>::infinity();
        for (const CertEntry& e : entries) m = std::min(m, e.slack);
        return m;
    }

    const CertEntry* find(const std::string& label) const {
        for (const CertEntry& e : entries)
            if (e.label == label) return &e;
        return nullptr;
    }
};

struct VerifyLine {
    std::string label;
    double slack = 0.0;
    bool holds = false;
};

struct VerifyReport {
    std::vector<VerifyLine> lines;
    bool all_hold = true;
    int failed = 0;
};

/// Re-evaluate every entry's holds flag at the given tolerance. Pure
/// function of the stored (lhs, rhs, relation) data.
inline VerifyReport verify_certificate(const Certificate& cert, double tol) {
    VerifyReport rep;
    rep.lines.reserve(cert.entries.size());
    for (const CertEntry& e : cert.entries) {
        VerifyLine line;
        line.label = e.label;
        line.slack = e.rhs - e.lhs;
        line.holds = entry_holds(line.slack, e.relation, tol);
        if (!line.holds) {
            rep.all_hold = false;
            ++rep.failed;
        }
        rep.lines.push_back(std::move(line));
    }
    return rep;
}

} // namespace bpb
