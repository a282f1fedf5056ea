#include "vgr/eval_metrics.hpp"

#include "vgr/errors.hpp"

namespace vgr {

double frob_err(const Matrix& estimate, const Matrix& truth)
{
    if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
        throw ArgumentError("frob_err: shape mismatch");
    const double denom = truth.squaredNorm();
    if (!(denom > 0.0))
        throw UndefinedMetricError("normalized error against an all-zero reference");
    return (truth - estimate).squaredNorm() / denom;
}

SupportScore score_sets(std::size_t true_positive, std::size_t estimated, std::size_t actual)
{
    if (true_positive > estimated || true_positive > actual)
        throw ArgumentError("true positives exceed a support size");
    if (estimated == 0 && actual == 0)
        return {1.0, 1.0, 1.0};
    SupportScore s;
    s.precision = estimated ? static_cast<double>(true_positive) / static_cast<double>(estimated) : 0.0;
    s.recall = actual ? static_cast<double>(true_positive) / static_cast<double>(actual) : 0.0;
    const double sum = s.precision + s.recall;
    s.fscore = sum > 0.0 ? 2.0 * s.precision * s.recall / sum : 0.0;
    return s;
}

SupportScores support_fscore(const Sc2& estimate, const Sc2& truth)
{
    if (estimate.n() != truth.n())
        throw ArgumentError("support_fscore: node counts differ");
    std::size_t edge_hits = 0;
    for (const auto& entry : estimate.edges())
        edge_hits += truth.edges().contains(entry.first);
    std::size_t tri_hits = 0;
    for (const auto& entry : estimate.triangles())
        tri_hits += truth.triangles().contains(entry.first);
    return {score_sets(edge_hits, estimate.edges().size(), truth.edges().size()),
            score_sets(tri_hits, estimate.triangles().size(), truth.triangles().size())};
}

EvalResult evaluate(const PairwiseKernel& est_h1, const TupleKernel& est_h2, const PairwiseKernel& true_h1,
                    const TupleKernel& true_h2, const Thresholds& thresholds)
{
    if (est_h1.n() != true_h1.n() || est_h2.n() != true_h2.n() || est_h1.n() != est_h2.n())
        throw ArgumentError("evaluate: node counts differ");
    EvalResult out;
    out.err_h1 = frob_err(est_h1.values(), true_h1.values());
    out.err_h2 = frob_err(est_h2.values(), true_h2.values());
    out.support = support_fscore(extract_sc2(est_h1, est_h2, thresholds.edge, thresholds.triangle),
                                 extract_sc2(true_h1, true_h2, thresholds.edge, thresholds.triangle));
    return out;
}

} // namespace vgr
