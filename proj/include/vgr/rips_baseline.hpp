#pragma once

// Correlation-thresholded clique (Rips) complex baseline.

#include "vgr/sc_core.hpp"
#include "vgr/volterra_model.hpp"

namespace vgr {

enum class TriangleWeightRule { Min, Product };

struct RcConfig {
    /// Edges need |corr| >= threshold.
    double threshold = 0.5;
    TriangleWeightRule weight_rule = TriangleWeightRule::Min;

    void validate() const;
};

/// Pearson correlation between node rows of X. Throws InputError naming the
/// node when a row has zero variance, ArgumentError when R < 2.
Matrix correlation_matrix(const SignalMatrix& x);

struct RcEstimate {
    Sc2 complex;
    PairwiseKernel h1;
    TupleKernel h2;
};

/// Every pair with |corr| >= threshold becomes an edge weighted |corr|; every
/// 3-clique is filled with the min (or product) of its edge weights. The
/// kernels carry the same weights in both orientations / all six tuple slots.
RcEstimate rc_infer(const SignalMatrix& x, const RcConfig& cfg);

/// Same, starting from a precomputed correlation matrix.
RcEstimate rc_from_correlation(const Matrix& corr, const RcConfig& cfg);

} // namespace vgr
