#pragma once

// Convex joint graph / 2-simplex estimation:
//
//   min  ||X - H1 X - H2 Y - V||_F^2 + alpha ||H1||_1 + beta ||H2||_1
//        + gamma * sum over node triples of ||triplet group of (H1, H2)||_2
//   s.t. H1, H2 >= 0, masked entries zero, optional symmetry.
//
// solve() is a consensus ADMM; reference_solve() is a slow projected
// subgradient method kept as an independent check.

#include <optional>
#include <span>
#include <vector>

#include "vgr/sc_core.hpp"
#include "vgr/volterra_model.hpp"

namespace vgr {

struct SolveConfig {
    double alpha = 0.1;
    double beta = 0.1;
    double gamma = 0.1;
    double rho = 1.0;
    int max_iter = 5000;
    double tol_abs = 1e-5;
    double tol_rel = 1e-4;
    /// H1 == H1^T.
    bool symmetric_h1 = false;
    /// All six H2 entries of each node triple are equal.
    bool symmetric_h2 = false;
    /// Residual-balancing updates of rho.
    bool adapt_rho = true;
    /// Empty means default_masks(n).
    std::optional<MaskPair> masks;

    void validate() const;
    MaskPair masks_for(Index n) const;
};

struct SolveReport {
    PairwiseKernel h1;
    TupleKernel h2;
    double objective = 0.0;
    int iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double primal_threshold = 0.0;
    double dual_threshold = 0.0;
    double final_rho = 0.0;
    bool converged = false;
    std::vector<double> objective_trace;
};

/// Full objective at (h1, h2). V is taken from `x` (zero when absent).
double objective(const SignalMatrix& x, const LiftedSignals& y, const PairwiseKernel& h1, const TupleKernel& h2,
                 const SolveConfig& cfg);

/// max(value - lambda, 0): prox of lambda*|u| restricted to u >= 0.
double prox_nonneg_l1(double value, double lambda);

/// Block soft-thresholding, max(1 - kappa/||v||, 0) * v.
std::vector<double> prox_group(std::span<const double> v, double kappa);

struct WarmStart {
    PairwiseKernel h1;
    TupleKernel h2;
    double rho = 1.0;
};

/// Throws ArgumentError for n < 3, non-finite data or invalid configuration.
/// Hitting max_iter is not an error: converged is false and the iterate with
/// the lowest objective is returned. The returned kernels satisfy the masks,
/// nonnegativity and requested symmetry exactly.
SolveReport solve(const SignalMatrix& x, const SolveConfig& cfg, const WarmStart* warm = nullptr);

/// Projected subgradient descent with steps c/sqrt(t+1); returns the best
/// iterate seen. Meant for tiny problems (n <= 8).
SolveReport reference_solve(const SignalMatrix& x, const SolveConfig& cfg, int iterations);

} // namespace vgr
