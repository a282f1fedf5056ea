#pragma once

// Second-order autoregressive graph Volterra model
//
//     X = H1 X + H2 Y + V + E,    Y = X (.) X  (Khatri-Rao, column-wise Kronecker)
//
// plus the synthetic generator and CSV ingestion used by the experiments.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>

#include "vgr/sc_core.hpp"

namespace vgr {

/// N x R nodal observations with an optional exogenous term of the same shape.
/// An absent V is treated as zero everywhere.
class SignalMatrix {
public:
    SignalMatrix() = default;
    /// Throws ArgumentError on non-finite entries or a V of different shape.
    explicit SignalMatrix(Matrix x, std::optional<Matrix> v = std::nullopt);

    Index n() const { return x_.rows(); }
    Index r() const { return x_.cols(); }
    const Matrix& x() const { return x_; }
    const std::optional<Matrix>& v() const { return v_; }
    bool has_v() const { return v_.has_value(); }
    Matrix v_or_zero() const;

    SignalMatrix without_v() const { return SignalMatrix(x_); }
    /// Realizations [begin, begin + count), V sliced alongside.
    SignalMatrix columns(Index begin, Index count) const;

private:
    Matrix x_;
    std::optional<Matrix> v_;
};

/// N^2 x R; row tuple_col(i, j) holds x_i * x_j per realization.
struct LiftedSignals {
    Matrix y;
};

LiftedSignals khatri_rao_lift(const SignalMatrix& x);

/// X - H1 X - H2 Y - V.
Matrix residual(const SignalMatrix& x, const LiftedSignals& y, const PairwiseKernel& h1, const TupleKernel& h2);

struct GeneratorConfig {
    Index n = 20;
    Index r = 100;
    double edge_prob = 0.15;
    double tri_fill_prob = 1.0;
    std::array<double, 2> h1_weight_range{0.3, 0.8};
    std::array<double, 2> h2_weight_range{0.1, 0.4};
    double noise_std = 0.0;
    std::uint64_t seed = 1;
    /// X entries are i.i.d. uniform on this range.
    std::array<double, 2> signal_range{0.1, 1.0};
    /// (H1, H2) are rescaled jointly so that ||H1 X + H2 Y||_F / ||X||_F equals
    /// this ratio. Zero disables the rescaling.
    double target_ratio = 0.8;

    void validate() const;
};

struct GeneratedInstance {
    SignalMatrix signals; // V always present
    PairwiseKernel h1;
    TupleKernel h2;
    Sc2 truth;
};

/// Draws a symmetric Erdos-Renyi H1, fills each of its triangles with
/// probability tri_fill_prob (all six H2 entries share one weight), samples X,
/// then sets V = X - H1 X - H2 Y - E so the model holds exactly.
/// Deterministic in cfg.seed. With the same seed and a different r the graph
/// and the leading realizations are shared.
GeneratedInstance generate(const GeneratorConfig& cfg);

struct IngestResult {
    SignalMatrix signals;
    std::optional<Sc2> truth;
};

/// Loads X (and optionally V, edges, triangles) from the dense / edge-list CSV
/// formats. Triangles require an edges file. Throws InputError.
IngestResult ingest_real(const std::filesystem::path& x_path,
                         const std::optional<std::filesystem::path>& v_path = std::nullopt,
                         const std::optional<std::filesystem::path>& edges_path = std::nullopt,
                         const std::optional<std::filesystem::path>& triangles_path = std::nullopt);

} // namespace vgr
