#pragma once

// Hyperparameter selection and the sample-size sweep.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vgr/config.hpp"

namespace vgr {

struct HyperParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

/// Cartesian product in (alpha, beta, gamma) nesting order.
std::vector<HyperParams> hyper_grid(const ExperimentConfig& cfg);

/// Like evaluate() but an undefined normalized error (all-zero truth) becomes NaN.
EvalResult evaluate_lenient(const PairwiseKernel& est_h1, const TupleKernel& est_h2, const PairwiseKernel& true_h1,
                            const TupleKernel& true_h2, const Thresholds& thresholds);

/// Orders candidates: higher edge F, then higher triangle F, then lower
/// err_h1 + err_h2 (NaN terms skipped). True when `a` beats `b`.
bool better_candidate(const EvalResult& a, const EvalResult& b);

struct VgrSelection {
    HyperParams chosen;
    SolveReport report;
    EvalResult eval;
    int total_iterations = 0;
};

/// Solves every grid point (warm-starting along the grid) and keeps the one
/// that scores best against the ground truth.
VgrSelection select_vgr_oracle(const SignalMatrix& x, const PairwiseKernel& true_h1, const TupleKernel& true_h2,
                               const SolveConfig& base, const std::vector<HyperParams>& grid,
                               const Thresholds& thresholds);

/// Fits each grid point on the first 80% of realizations and keeps the one
/// with the smallest held-out residual. Needs r >= 5.
HyperParams select_vgr_validation(const SignalMatrix& x, const SolveConfig& base, const std::vector<HyperParams>& grid);

struct RcSelection {
    double epsilon = 0.0;
    RcEstimate estimate;
    EvalResult eval;
};

RcSelection select_rc_oracle(const SignalMatrix& x, const PairwiseKernel& true_h1, const TupleKernel& true_h2,
                             const RcConfig& base, const std::vector<double>& eps_grid, const Thresholds& thresholds);

struct ResultRow {
    std::string method; // "vgr" or "rc"
    Index n = 0;
    Index r = 0;
    std::uint64_t seed = 0;
    bool v_known = true;
    std::string selection;
    HyperParams params; // vgr only
    double epsilon = 0.0; // rc only
    double err_h1 = 0.0;
    double err_h2 = 0.0;
    double fscore_edges = 0.0;
    double fscore_triangles = 0.0;
    int iterations = 0;
    bool converged = true;
    double wall_time = 0.0;
    std::string error; // empty unless the task failed
};

struct SummaryRow {
    std::string method;
    Index r = 0;
    std::size_t count = 0;
    double mean_err_h1 = 0.0, std_err_h1 = 0.0;
    std::size_t count_err_h2 = 0;
    double mean_err_h2 = 0.0, std_err_h2 = 0.0;
    double mean_fscore_edges = 0.0, std_fscore_edges = 0.0;
    double mean_fscore_triangles = 0.0, std_fscore_triangles = 0.0;
};

struct SweepResult {
    std::vector<ResultRow> rows;
    std::vector<SummaryRow> summary;

    /// Summary row for (method, r); throws ArgumentError if absent.
    const SummaryRow& at(const std::string& method, Index r) const;
};

/// For every (seed, r): generate, select and evaluate VGR and RC. Tasks run on
/// `threads` workers; rows come back sorted by (method, r, seed). A failing
/// task yields rows with `error` set instead of aborting the sweep.
SweepResult run_sweep(const ExperimentConfig& cfg, int threads = 1);

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

/// results.csv has no timing column so identical configs give identical
/// files; wall times go to timings.csv.
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_timings_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

} // namespace vgr
