#include "vgr/volterra_model.hpp"

#include <cmath>
#include <random>
#include <string>

#include "vgr/csv_io.hpp"
#include "vgr/errors.hpp"

namespace vgr {

SignalMatrix::SignalMatrix(Matrix x, std::optional<Matrix> v) : x_(std::move(x)), v_(std::move(v))
{
    if (!x_.allFinite())
        throw ArgumentError("signal matrix has non-finite entries");
    if (v_) {
        if (v_->rows() != x_.rows() || v_->cols() != x_.cols())
            throw ArgumentError("exogenous term shape differs from X");
        if (!v_->allFinite())
            throw ArgumentError("exogenous term has non-finite entries");
    }
}

Matrix SignalMatrix::v_or_zero() const { return v_ ? *v_ : Matrix::Zero(x_.rows(), x_.cols()); }

SignalMatrix SignalMatrix::columns(Index begin, Index count) const
{
    if (begin < 0 || count < 0 || begin + count > r())
        throw ArgumentError("column range out of bounds");
    std::optional<Matrix> v;
    if (v_)
        v = v_->middleCols(begin, count);
    return SignalMatrix(x_.middleCols(begin, count), std::move(v));
}

LiftedSignals khatri_rao_lift(const SignalMatrix& x)
{
    const Index n = x.n();
    LiftedSignals out{Matrix(n * n, x.r())};
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            out.y.row(i * n + j) = x.x().row(i).cwiseProduct(x.x().row(j));
    return out;
}

Matrix residual(const SignalMatrix& x, const LiftedSignals& y, const PairwiseKernel& h1, const TupleKernel& h2)
{
    const Index n = x.n();
    if (h1.n() != n || h2.n() != n || y.y.rows() != n * n || y.y.cols() != x.r())
        throw ArgumentError("residual: inconsistent dimensions");
    Matrix res = x.x() - h1.values() * x.x() - h2.values() * y.y;
    if (x.has_v())
        res -= *x.v();
    return res;
}

// ---------------------------------------------------------------------------

void GeneratorConfig::validate() const
{
    auto fail = [](const std::string& m) { throw ArgumentError("generator config: " + m); };
    if (n < 3)
        fail("n must be at least 3");
    if (r < 1)
        fail("r must be positive");
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
        fail("edge_prob outside [0, 1]");
    if (!(tri_fill_prob >= 0.0 && tri_fill_prob <= 1.0))
        fail("tri_fill_prob outside [0, 1]");
    for (const auto& range : {h1_weight_range, h2_weight_range})
        if (!(range[0] > 0.0 && range[0] <= range[1] && std::isfinite(range[1])))
            fail("weight ranges need 0 < lo <= hi");
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std))
        fail("noise_std must be nonnegative");
    if (!(signal_range[0] <= signal_range[1]) || !std::isfinite(signal_range[0]) || !std::isfinite(signal_range[1]))
        fail("signal range needs lo <= hi");
    if (!(target_ratio >= 0.0) || !std::isfinite(target_ratio))
        fail("target_ratio must be nonnegative");
}

GeneratedInstance generate(const GeneratorConfig& cfg)
{
    cfg.validate();
    const Index n = cfg.n;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&](const std::array<double, 2>& range) { return range[0] + (range[1] - range[0]) * unit(rng); };

    Matrix h1 = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if (unit(rng) < cfg.edge_prob)
                h1(i, j) = h1(j, i) = draw(cfg.h1_weight_range);

    Matrix h2 = Matrix::Zero(n, n * n);
    std::vector<std::pair<Triple, double>> filled;
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            if (h1(i, j) == 0.0)
                continue;
            for (Index k = j + 1; k < n; ++k) {
                if (h1(i, k) == 0.0 || h1(j, k) == 0.0)
                    continue;
                if (unit(rng) < cfg.tri_fill_prob)
                    filled.push_back({{i, j, k}, draw(cfg.h2_weight_range)});
            }
        }
    for (const auto& [t, w] : filled) {
        const auto [i, j, k] = t;
        h2(i, j * n + k) = h2(i, k * n + j) = w;
        h2(j, i * n + k) = h2(j, k * n + i) = w;
        h2(k, i * n + j) = h2(k, j * n + i) = w;
    }

    // Realizations are drawn column by column so that a larger r extends the
    // same sample path.
    Matrix x(n, cfg.r);
    for (Index c = 0; c < cfg.r; ++c)
        for (Index i = 0; i < n; ++i)
            x(i, c) = draw(cfg.signal_range);
    Matrix noise = Matrix::Zero(n, cfg.r);
    if (cfg.noise_std > 0.0) {
        std::normal_distribution<double> gauss(0.0, cfg.noise_std);
        for (Index c = 0; c < cfg.r; ++c)
            for (Index i = 0; i < n; ++i)
                noise(i, c) = gauss(rng);
    }

    const SignalMatrix xs(x);
    const LiftedSignals y = khatri_rao_lift(xs);
    Matrix network = h1 * x + h2 * y.y;
    if (cfg.target_ratio > 0.0) {
        const double norm = network.norm();
        if (norm > 0.0) {
            const double scale = cfg.target_ratio * x.norm() / norm;
            h1 *= scale;
            h2 *= scale;
            network *= scale;
        }
    }

    GeneratedInstance out;
    out.h1 = PairwiseKernel(h1);
    out.h2 = TupleKernel(h2);
    out.signals = SignalMatrix(x, Matrix(x - network - noise));
    out.truth = Sc2(n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if (h1(i, j) > 0.0)
                out.truth.add_edge(i, j, h1(i, j));
    for (const auto& [t, w] : filled)
        out.truth.add_triangle(t[0], t[1], t[2], h2(t[0], t[1] * n + t[2]));
    return out;
}

// ---------------------------------------------------------------------------

IngestResult ingest_real(const std::filesystem::path& x_path, const std::optional<std::filesystem::path>& v_path,
                         const std::optional<std::filesystem::path>& edges_path,
                         const std::optional<std::filesystem::path>& triangles_path)
{
    Matrix x = io::read_dense_csv(x_path);
    std::optional<Matrix> v;
    if (v_path) {
        v = io::read_dense_csv(*v_path);
        if (v->rows() != x.rows() || v->cols() != x.cols())
            throw InputError(v_path->string() + ": shape " + std::to_string(v->rows()) + "x" +
                             std::to_string(v->cols()) + " differs from X " + std::to_string(x.rows()) + "x" +
                             std::to_string(x.cols()));
    }
    IngestResult out{SignalMatrix(std::move(x), std::move(v)), std::nullopt};
    if (triangles_path && !edges_path)
        throw InputError("a triangles file needs an edges file");
    if (edges_path) {
        const std::filesystem::path* tri = triangles_path ? &*triangles_path : nullptr;
        out.truth = io::read_sc2(*edges_path, tri, out.signals.n());
    }
    return out;
}

} // namespace vgr
