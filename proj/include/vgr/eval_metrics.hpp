#pragma once

#include "vgr/sc_core.hpp"

namespace vgr {

/// ||truth - estimate||_F^2 / ||truth||_F^2. Throws UndefinedMetricError for
/// an all-zero truth and ArgumentError on shape mismatch.
double frob_err(const Matrix& estimate, const Matrix& truth);

struct SupportScore {
    double precision = 0.0;
    double recall = 0.0;
    double fscore = 0.0;
};

/// Precision / recall / F over two finite sets. Empty vs empty scores 1;
/// an empty side against a nonempty one scores 0.
SupportScore score_sets(std::size_t true_positive, std::size_t estimated, std::size_t actual);

struct SupportScores {
    SupportScore edges;
    SupportScore triangles;
};

SupportScores support_fscore(const Sc2& estimate, const Sc2& truth);

struct Thresholds {
    double edge = 0.0;
    double triangle = 0.0;
};

struct EvalResult {
    double err_h1 = 0.0;
    double err_h2 = 0.0;
    SupportScores support;
};

/// err on both kernels plus support F-scores after extract_sc2 on both sides
/// with the same thresholds.
EvalResult evaluate(const PairwiseKernel& est_h1, const TupleKernel& est_h2, const PairwiseKernel& true_h1,
                    const TupleKernel& true_h2, const Thresholds& thresholds);

} // namespace vgr
