#include "vgr/rips_baseline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vgr/errors.hpp"

namespace vgr {

void RcConfig::validate() const
{
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw ArgumentError("rc threshold outside [0, 1]");
}

Matrix correlation_matrix(const SignalMatrix& x)
{
    if (x.r() < 2)
        throw ArgumentError("correlation needs at least two realizations");
    const Matrix& data = x.x();
    Matrix centered = data.colwise() - data.rowwise().mean();
    Vector norms = centered.rowwise().norm();
    for (Index i = 0; i < norms.size(); ++i)
        if (!(norms(i) > 1e-12 * data.row(i).norm()))
            throw InputError("node " + std::to_string(i) + " has zero variance");
    centered = norms.cwiseInverse().asDiagonal() * centered;
    Matrix corr = centered * centered.transpose();
    corr = corr.cwiseMax(-1.0).cwiseMin(1.0);
    corr = 0.5 * (corr + corr.transpose()).eval();
    corr.diagonal().setOnes();
    return corr;
}

RcEstimate rc_from_correlation(const Matrix& corr, const RcConfig& cfg)
{
    cfg.validate();
    const Index n = corr.rows();
    Sc2 sc(n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if (const double w = std::abs(corr(i, j)); w >= cfg.threshold)
                sc.add_edge(i, j, w);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            if (!sc.has_edge(i, j))
                continue;
            for (Index k = j + 1; k < n; ++k) {
                if (!sc.has_edge(i, k) || !sc.has_edge(j, k))
                    continue;
                const double a = std::abs(corr(i, j)), b = std::abs(corr(i, k)), c = std::abs(corr(j, k));
                const double w = cfg.weight_rule == TriangleWeightRule::Min ? std::min({a, b, c}) : a * b * c;
                sc.add_triangle(i, j, k, w);
            }
        }
    auto [h1, h2] = kernels_from_sc2(sc);
    return {std::move(sc), std::move(h1), std::move(h2)};
}

RcEstimate rc_infer(const SignalMatrix& x, const RcConfig& cfg)
{
    cfg.validate();
    return rc_from_correlation(correlation_matrix(x), cfg);
}

} // namespace vgr
