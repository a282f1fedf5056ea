#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "problem.hpp"
#include "vgr/errors.hpp"
#include "vgr/prox_solver.hpp"

namespace vgr {

namespace {

// Euclidean projection onto {W >= 0, masked entries zero, requested symmetry}.
void project_feasible(Matrix& w, const detail::Problem& p, const std::vector<TripletGroup>& groups)
{
    const Index n = p.n();
    const SolveConfig& cfg = p.config();
    if (cfg.symmetric_h1) {
        const Matrix h1 = w.leftCols(n);
        w.leftCols(n) = 0.5 * (h1 + h1.transpose());
    }
    if (cfg.symmetric_h2) {
        for (const TripletGroup& g : groups) {
            if (g.h2_coords.size() != 6)
                continue;
            double mean = 0.0;
            for (const Coord& c : g.h2_coords)
                mean += w(c.row, n + c.col);
            mean /= 6.0;
            for (const Coord& c : g.h2_coords)
                w(c.row, n + c.col) = mean;
        }
    }
    w = w.cwiseMax(0.0);
    w = w.cwiseProduct(p.free().cast<double>());
}

} // namespace

SolveReport reference_solve(const SignalMatrix& x, const SolveConfig& cfg, int iterations)
{
    if (iterations < 1)
        throw ArgumentError("reference_solve needs a positive iteration count");
    const detail::Problem p(x, cfg);
    const Index n = p.n();
    const SolveConfig& c = p.config();
    const auto groups = enumerate_triplet_groups(n, *c.masks);
    const Matrix& m = p.regressors();
    const Matrix mask = p.free().cast<double>();

    // Step scale from the Lipschitz constant of the smooth part, 2 * lambda_max(M M^T).
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(m * m.transpose(), Eigen::EigenvaluesOnly);
    const double lipschitz = 2.0 * eig.eigenvalues().maxCoeff();
    const double step0 = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;
    // Steps step0 / sqrt(1 + t / t0): the c/sqrt(t) decay with a burn-in tied to
    // the budget, so ill-conditioned fits still make progress late in the run.
    const double t0 = std::max(1.0, static_cast<double>(iterations) / 200.0);

    Matrix w = Matrix::Zero(n, p.dim());
    Matrix best_w = w;
    double best = p.objective(w);

    SolveReport rep;
    rep.objective_trace.reserve(static_cast<std::size_t>(iterations));
    Matrix grad(n, p.dim());
    for (int t = 0; t < iterations; ++t) {
        grad = -2.0 * (p.target() - w * m) * m.transpose();
        grad.leftCols(n).array() += c.alpha;
        grad.rightCols(n * n).array() += c.beta;
        if (c.gamma > 0.0) {
            for (const TripletGroup& g : groups) {
                double sq = 0.0;
                for (const Coord& k : g.h1_coords)
                    sq += w(k.row, k.col) * w(k.row, k.col);
                for (const Coord& k : g.h2_coords)
                    sq += w(k.row, n + k.col) * w(k.row, n + k.col);
                if (sq == 0.0)
                    continue;
                const double scale = c.gamma / std::sqrt(sq);
                for (const Coord& k : g.h1_coords)
                    grad(k.row, k.col) += scale * w(k.row, k.col);
                for (const Coord& k : g.h2_coords)
                    grad(k.row, n + k.col) += scale * w(k.row, n + k.col);
            }
        }
        grad = grad.cwiseProduct(mask);
        w -= (step0 / std::sqrt(static_cast<double>(t) / t0 + 1.0)) * grad;
        project_feasible(w, p, groups);

        const double obj = p.objective(w);
        if (obj < best) {
            best = obj;
            best_w = w;
        }
        rep.objective_trace.push_back(best);
    }

    rep.h1 = p.h1_of(best_w);
    rep.h2 = p.h2_of(best_w);
    rep.objective = best;
    rep.iterations = iterations;
    // fixed iteration budget, no stopping test
    rep.converged = false;
    return rep;
}

} // namespace vgr
