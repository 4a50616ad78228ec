#pragma once

#include <chrono>
#include <cstdlib>
#include <future>
#include <thread>
#include <vector>

#include "bpb/correct.hpp"
#include "bpb/instance.hpp"
#include "bpb/serialize.hpp"

namespace bpb {

/// Concurrency budget: BPB_THREADS environment variable, default 1.
/// Results are gathered in seed order regardless, so the schedule never
/// shows in the output.
inline int thread_budget() {
    const char* env = std::getenv("BPB_THREADS");
    if (!env) return 1;
    const long v = std::strtol(env, nullptr, 10);
    if (v < 1) return 1;
    if (v > 256) return 256;
    return static_cast<int>(v);
}

struct ExperimentRow {
    std::uint64_t seed = 0;
    int n = 0;
    SpaceDescriptor space;
    double epsilon = 0.0;
    InstanceMode mode = InstanceMode::attain;
    bool succeeded = false;
    double dist_op = 0.0;
    double dist_fn = 0.0;
    double norm_S = 0.0;
    double min_cert_slack = 0.0;
    double wall_time = 0.0; ///< seconds; 0 unless timings were requested
    std::string error;      ///< failure reason for succeeded=false rows
};

struct ExperimentConfig {
    int trials = 10;
    std::uint64_t seed = 1;
    std::vector<SpaceDescriptor> spaces;
    std::vector<double> epsilons;
    InstanceMode mode = InstanceMode::attain;
    int n_min = 2;
    int n_max = 6;
    /// nullopt: analytic profile for p=2 / dim 1, estimated(0.5) otherwise
    std::optional<DeltaProfile> profile;
    OracleConfig oracle;
    double tol = 1e-9;
    bool record_timings = false;
};

struct ExperimentSummary {
    int rows = 0;
    int succeeded = 0;
    double success_rate = 0.0;
    double worst_min_slack = std::numeric_limits<double>::infinity();
    double total_wall_time = 0.0; ///< measured even when rows carry 0
};

inline DeltaProfile default_profile_for(const SpaceDescriptor& space) {
    if (space.dim <= 1 && !space.is_inf()) return DeltaProfile::analytic_c();
    if (space.p == 2.0) return DeltaProfile::analytic_l2(space.dim);
    return DeltaProfile::estimated(space);
}

namespace detail {

struct Cell {
    std::uint64_t seed;
    int n;
    SpaceDescriptor space;
    double epsilon;
};

inline ExperimentRow run_cell(const Cell& cell, const ExperimentConfig& cfg,
                              const DeltaProfile& profile) {
    ExperimentRow row;
    row.seed = cell.seed;
    row.n = cell.n;
    row.space = cell.space;
    row.epsilon = cell.epsilon;
    row.mode = cfg.mode;
    const auto t_start = std::chrono::steady_clock::now();
    try {
        const Instance inst = gen_instance(cell.seed, cell.n, cell.space, cfg.mode,
                                           cell.epsilon, &profile, cfg.oracle);
        CorrectionConfig ccfg;
        ccfg.oracle = cfg.oracle;
        ccfg.tol = cfg.tol;
        ccfg.profile = profile;
        ccfg.seed = cell.seed;
        const CorrectionResult res = bpb_correct(inst.T, inst.f0, cell.epsilon, ccfg);
        row.succeeded = res.cert.all_hold();
        row.dist_op = res.cert.outputs.dist_op;
        row.dist_fn = res.cert.outputs.dist_fn;
        row.norm_S = res.cert.outputs.norm_S;
        row.min_cert_slack = res.cert.min_slack();
        if (!row.succeeded) row.error = "certificate entry failed";
    } catch (const Error& e) {
        row.succeeded = false;
        row.error = e.what();
    }
    const auto t_end = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t_end - t_start).count();
    row.wall_time = cfg.record_timings ? secs : 0.0;
    return row;
}

} // namespace detail

struct ExperimentOutcome {
    std::vector<ExperimentRow> rows;
    ExperimentSummary summary;
};

/// One row per (trial, epsilon, space); n cycles through [n_min, n_max] by
/// trial index, seeds derive from cfg.seed deterministically. Per-trial
/// failures are recorded in the row, never aborting the batch.
inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
    std::vector<detail::Cell> cells;
    std::uint64_t k = 0;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        const int n = cfg.n_min + (cfg.n_max > cfg.n_min ? trial % (cfg.n_max - cfg.n_min + 1) : 0);
        for (const SpaceDescriptor& space : cfg.spaces)
            for (double eps : cfg.epsilons)
                cells.push_back({Rng::derive(cfg.seed, k++).next_u64(), n, space, eps});
    }

    // One profile per space, shared across that space's cells (the estimated
    // profile memoizes per eps, so each (space, eps/9) is estimated once).
    std::vector<DeltaProfile> profiles;
    profiles.reserve(cfg.spaces.size());
    for (const SpaceDescriptor& space : cfg.spaces)
        profiles.push_back(cfg.profile ? *cfg.profile : default_profile_for(space));
    auto profile_for = [&](const SpaceDescriptor& space) -> const DeltaProfile& {
        for (std::size_t i = 0; i < cfg.spaces.size(); ++i)
            if (cfg.spaces[i] == space) return profiles[i];
        return profiles.front();
    };

    const auto batch_start = std::chrono::steady_clock::now();
    std::vector<ExperimentRow> rows(cells.size());
    const int threads = std::min<int>(thread_budget(), static_cast<int>(cells.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            rows[i] = detail::run_cell(cells[i], cfg, profile_for(cells[i].space));
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= cells.size()) return;
                rows[i] = detail::run_cell(cells[i], cfg, profile_for(cells[i].space));
            }
        };
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    const auto batch_end = std::chrono::steady_clock::now();

    ExperimentOutcome out;
    out.rows = std::move(rows);
    out.summary.rows = static_cast<int>(out.rows.size());
    for (const ExperimentRow& r : out.rows) {
        if (r.succeeded) {
            ++out.summary.succeeded;
            out.summary.worst_min_slack = std::min(out.summary.worst_min_slack, r.min_cert_slack);
        }
    }
    out.summary.success_rate =
        out.summary.rows == 0 ? 0.0
                              : static_cast<double>(out.summary.succeeded) / out.summary.rows;
    out.summary.total_wall_time = std::chrono::duration<double>(batch_end - batch_start).count();
    return out;
}

// ---------------------------------------------------------------------------
// Emission: CSV columns are fixed in ExperimentRow field order; JSON mirrors
// the same schema. Both are byte-deterministic for a fixed config.

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
    std::string out = "seed,n,space,epsilon,mode,succeeded,dist_op,dist_fn,norm_S,"
                      "min_cert_slack,wall_time\n";
    for (const ExperimentRow& r : rows) {
        out += std::to_string(r.seed) + "," + std::to_string(r.n) + "," + r.space.name() +
               "," + format_double(r.epsilon) + "," + mode_name(r.mode) + "," +
               (r.succeeded ? "true" : "false") + "," + format_double(r.dist_op) + "," +
               format_double(r.dist_fn) + "," + format_double(r.norm_S) + "," +
               format_double(r.min_cert_slack) + "," + format_double(r.wall_time) + "\n";
    }
    return out;
}

inline Json rows_to_json(const std::vector<ExperimentRow>& rows,
                         const ExperimentSummary& summary) {
    Json j;
    Json ja = Json::array();
    for (const ExperimentRow& r : rows) {
        Json jr;
        jr["seed"] = r.seed;
        jr["n"] = r.n;
        jr["space"] = r.space.name();
        jr["epsilon"] = r.epsilon;
        jr["mode"] = mode_name(r.mode);
        jr["succeeded"] = r.succeeded;
        jr["dist_op"] = r.dist_op;
        jr["dist_fn"] = r.dist_fn;
        jr["norm_S"] = r.norm_S;
        jr["min_cert_slack"] = r.min_cert_slack;
        jr["wall_time"] = r.wall_time;
        if (!r.error.empty()) jr["error"] = r.error;
        ja.push_back(jr);
    }
    j["rows"] = ja;
    Json js;
    js["rows"] = summary.rows;
    js["succeeded"] = summary.succeeded;
    js["success_rate"] = summary.success_rate;
    js["worst_min_slack"] =
        summary.succeeded == 0 ? Json(nullptr) : Json(summary.worst_min_slack);
    j["summary"] = js;
    return j;
}

} // namespace bpb
