#include "problem.hpp"

#include <cmath>
#include <string>

#include "vgr/errors.hpp"

namespace vgr {

void SolveConfig::validate() const
{
    auto fail = [](const std::string& m) { throw ArgumentError("solver config: " + m); };
    for (double w : {alpha, beta, gamma})
        if (!(w >= 0.0) || !std::isfinite(w))
            fail("penalty weights must be finite and nonnegative");
    if (!(rho > 0.0) || !std::isfinite(rho))
        fail("rho must be positive");
    if (max_iter < 1)
        fail("max_iter must be positive");
    if (!(tol_abs > 0.0) || !(tol_rel > 0.0))
        fail("tolerances must be positive");
}

MaskPair SolveConfig::masks_for(Index n) const
{
    MaskPair m = masks ? *masks : default_masks(n);
    validate_masks(m, n);
    if (symmetric_h1 && m.b1 != m.b1.transpose())
        throw ArgumentError("symmetric_h1 needs a symmetric b1 mask");
    if (symmetric_h2) {
        for (const TripletGroup& g : enumerate_triplet_groups(n, m))
            if (!g.h2_coords.empty() && g.h2_coords.size() != 6)
                throw ArgumentError("symmetric_h2 needs each triple's tuple entries all masked or all free");
    }
    return m;
}

namespace detail {

GroupLayout flatten_groups(Index n, const MaskPair& masks)
{
    GroupLayout layout;
    const auto groups = enumerate_triplet_groups(n, masks);
    layout.offsets.reserve(groups.size() + 1);
    layout.offsets.push_back(0);
    for (const TripletGroup& g : groups) {
        for (const Coord& c : g.h1_coords) {
            layout.rows.push_back(c.row);
            layout.cols.push_back(c.col);
        }
        for (const Coord& c : g.h2_coords) {
            layout.rows.push_back(c.row);
            layout.cols.push_back(n + c.col);
        }
        layout.offsets.push_back(layout.rows.size());
    }
    return layout;
}

Problem::Problem(const SignalMatrix& x, const SolveConfig& cfg) : n_(x.n()), cfg_(cfg)
{
    cfg_.validate();
    if (n_ < 3)
        throw ArgumentError("need at least 3 nodes, got " + std::to_string(n_));
    if (x.r() < 1)
        throw ArgumentError("need at least one realization");
    const MaskPair masks = cfg_.masks_for(n_);
    cfg_.masks = masks;

    const LiftedSignals y = khatri_rao_lift(x);
    regressors_.resize(dim(), x.r());
    regressors_.topRows(n_) = x.x();
    regressors_.bottomRows(n_ * n_) = y.y;
    target_ = x.has_v() ? Matrix(x.x() - *x.v()) : x.x();

    free_.resize(n_, dim());
    free_.leftCols(n_) = (masks.b1.array() == 0).cast<std::uint8_t>();
    free_.rightCols(n_ * n_) = (masks.b2.array() == 0).cast<std::uint8_t>();
    free_columns_.resize(static_cast<std::size_t>(n_));
    for (Index k = 0; k < n_; ++k)
        for (Index c = 0; c < dim(); ++c)
            if (free_(k, c))
                free_columns_[static_cast<std::size_t>(k)].push_back(c);

    groups_ = flatten_groups(n_, masks);
}

double Problem::data_fit(const Matrix& w) const { return (target_ - w * regressors_).squaredNorm(); }

double Problem::penalty(const Matrix& w) const
{
    double total = cfg_.alpha * w.leftCols(n_).cwiseAbs().sum() + cfg_.beta * w.rightCols(n_ * n_).cwiseAbs().sum();
    if (cfg_.gamma > 0.0) {
        double groups = 0.0;
        for (std::size_t g = 0; g < groups_.count(); ++g) {
            double sq = 0.0;
            for (std::size_t p = groups_.offsets[g]; p < groups_.offsets[g + 1]; ++p) {
                const double v = w(groups_.rows[p], groups_.cols[p]);
                sq += v * v;
            }
            groups += std::sqrt(sq);
        }
        total += cfg_.gamma * groups;
    }
    return total;
}

Matrix Problem::combine(const PairwiseKernel& h1, const TupleKernel& h2) const
{
    if (h1.n() != n_ || h2.n() != n_)
        throw ArgumentError("kernel node count does not match the data");
    Matrix w(n_, dim());
    w.leftCols(n_) = h1.values();
    w.rightCols(n_ * n_) = h2.values();
    return w;
}

PairwiseKernel Problem::h1_of(const Matrix& w) const { return PairwiseKernel(w.leftCols(n_)); }

TupleKernel Problem::h2_of(const Matrix& w) const { return TupleKernel(w.rightCols(n_ * n_)); }

} // namespace detail

double objective(const SignalMatrix& x, const LiftedSignals& y, const PairwiseKernel& h1, const TupleKernel& h2,
                 const SolveConfig& cfg)
{
    cfg.validate();
    const Matrix res = residual(x, y, h1, h2);
    const Index n = x.n();
    double total = res.squaredNorm() + cfg.alpha * h1.values().cwiseAbs().sum() +
                   cfg.beta * h2.values().cwiseAbs().sum();
    if (cfg.gamma > 0.0 && n >= 3) {
        for (const TripletGroup& g : enumerate_triplet_groups(n, cfg.masks_for(n))) {
            double sq = 0.0;
            for (const Coord& c : g.h1_coords)
                sq += h1(c.row, c.col) * h1(c.row, c.col);
            for (const Coord& c : g.h2_coords)
                sq += h2.values()(c.row, c.col) * h2.values()(c.row, c.col);
            total += cfg.gamma * std::sqrt(sq);
        }
    }
    return total;
}

} // namespace vgr
