#include "vgr/sc_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vgr/errors.hpp"

namespace vgr {

namespace {

void check_node(Index i, Index n, const char* what)
{
    if (i < 0 || i >= n)
        throw ArgumentError(std::string(what) + " index " + std::to_string(i) + " outside [0, " +
                            std::to_string(n) + ")");
}

bool degenerate_tuple(Index k, Index i, Index j) { return i == j || i == k || j == k; }

} // namespace

Index tuple_col(Index i, Index j, Index n)
{
    check_node(i, n, "tuple");
    check_node(j, n, "tuple");
    return i * n + j;
}

// ---------------------------------------------------------------------------
// Kernels

PairwiseKernel::PairwiseKernel(Matrix values) : values_(std::move(values))
{
    if (values_.rows() != values_.cols())
        throw ArgumentError("pairwise kernel must be square");
    if (!values_.allFinite())
        throw ArgumentError("pairwise kernel has non-finite entries");
    if ((values_.array() < 0.0).any())
        throw ArgumentError("pairwise kernel has negative entries");
    for (Index i = 0; i < values_.rows(); ++i)
        if (values_(i, i) != 0.0)
            throw ArgumentError("pairwise kernel has a self-loop at node " + std::to_string(i));
}

PairwiseKernel PairwiseKernel::zeros(Index n) { return PairwiseKernel(Matrix::Zero(n, n)); }

bool PairwiseKernel::is_symmetric() const { return values_ == values_.transpose(); }

TupleKernel::TupleKernel(Matrix values) : values_(std::move(values))
{
    const Index n = values_.rows();
    if (values_.cols() != n * n)
        throw ArgumentError("tuple kernel must be N x N^2, got " + std::to_string(n) + " x " +
                            std::to_string(values_.cols()));
    if (!values_.allFinite())
        throw ArgumentError("tuple kernel has non-finite entries");
    if ((values_.array() < 0.0).any())
        throw ArgumentError("tuple kernel has negative entries");
    for (Index k = 0; k < n; ++k)
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                if (degenerate_tuple(k, i, j) && values_(k, i * n + j) != 0.0)
                    throw ArgumentError("tuple kernel is nonzero on degenerate entry (" + std::to_string(k) +
                                        ", " + std::to_string(i) + ", " + std::to_string(j) + ")");
}

TupleKernel TupleKernel::zeros(Index n) { return TupleKernel(Matrix::Zero(n, n * n)); }

bool TupleKernel::is_tuple_symmetric() const
{
    const Index n = values_.rows();
    for (Index k = 0; k < n; ++k)
        for (Index i = 0; i < n; ++i)
            for (Index j = i + 1; j < n; ++j)
                if (values_(k, i * n + j) != values_(k, j * n + i))
                    return false;
    return true;
}

// ---------------------------------------------------------------------------
// Masks and groups

MaskPair default_masks(Index n)
{
    if (n < 3)
        throw ArgumentError("need at least 3 nodes, got " + std::to_string(n));
    MaskPair masks;
    masks.b1 = BinaryMatrix::Identity(n, n);
    masks.b2 = BinaryMatrix::Zero(n, n * n);
    for (Index k = 0; k < n; ++k)
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                if (degenerate_tuple(k, i, j))
                    masks.b2(k, i * n + j) = 1;
    return masks;
}

void validate_masks(const MaskPair& masks, Index n)
{
    if (masks.b1.rows() != n || masks.b1.cols() != n || masks.b2.rows() != n || masks.b2.cols() != n * n)
        throw ArgumentError("mask dimensions do not match node count " + std::to_string(n));
    const MaskPair base = default_masks(n);
    if (((base.b1.array() != 0) && (masks.b1.array() == 0)).any() ||
        ((base.b2.array() != 0) && (masks.b2.array() == 0)).any())
        throw ArgumentError("masks must cover self-loops and degenerate tuples");
}

std::vector<TripletGroup> enumerate_triplet_groups(Index n, const MaskPair& masks)
{
    if (n < 3)
        throw ArgumentError("need at least 3 nodes, got " + std::to_string(n));
    validate_masks(masks, n);

    std::vector<TripletGroup> groups;
    groups.reserve(static_cast<std::size_t>(n * (n - 1) * (n - 2) / 6));
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            for (Index k = j + 1; k < n; ++k) {
                TripletGroup g{{i, j, k}, {}, {}};
                const Coord h1[] = {{i, j}, {j, i}, {i, k}, {k, i}, {j, k}, {k, j}};
                const Coord h2[] = {{i, j * n + k}, {i, k * n + j}, {j, i * n + k},
                                    {j, k * n + i}, {k, i * n + j}, {k, j * n + i}};
                for (const Coord& c : h1)
                    if (masks.b1(c.row, c.col) == 0)
                        g.h1_coords.push_back(c);
                for (const Coord& c : h2)
                    if (masks.b2(c.row, c.col) == 0)
                        g.h2_coords.push_back(c);
                groups.push_back(std::move(g));
            }
    return groups;
}

std::vector<Triple> check_sc_feasibility(const PairwiseKernel& h1, const TupleKernel& h2, double theta)
{
    if (h1.n() != h2.n())
        throw ArgumentError("kernel node counts differ");
    if (!(theta > 0.0))
        throw ArgumentError("theta must be positive");
    const Index n = h1.n();
    std::vector<Triple> violations;
    for (Index k = 0; k < n; ++k)
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) {
                const double z = h1(k, i) * h1(k, j) * h1(i, j);
                const double bound = z != 0.0 ? theta : 0.0;
                if (h2.at(k, i, j) > bound)
                    violations.push_back({k, i, j});
            }
    return violations;
}

// ---------------------------------------------------------------------------
// Sc2

Sc2::Sc2(Index n) : n_(n)
{
    if (n < 0)
        throw ArgumentError("negative node count");
}

void Sc2::add_edge(Index i, Index j, double weight)
{
    check_node(i, n_, "edge");
    check_node(j, n_, "edge");
    if (i == j)
        throw ArgumentError("self-loop edge at node " + std::to_string(i));
    if (!(weight >= 0.0) || !std::isfinite(weight))
        throw ArgumentError("edge weight must be finite and nonnegative");
    edges_[{std::min(i, j), std::max(i, j)}] = weight;
}

void Sc2::add_triangle(Index i, Index j, Index k, double weight)
{
    check_node(i, n_, "triangle");
    check_node(j, n_, "triangle");
    check_node(k, n_, "triangle");
    if (i == j || i == k || j == k)
        throw ArgumentError("triangle needs three distinct nodes");
    if (!(weight >= 0.0) || !std::isfinite(weight))
        throw ArgumentError("triangle weight must be finite and nonnegative");
    if (!has_edge(i, j) || !has_edge(i, k) || !has_edge(j, k))
        throw ArgumentError("triangle {" + std::to_string(i) + "," + std::to_string(j) + "," +
                            std::to_string(k) + "} is missing an edge");
    triangles_[sorted_triple(i, j, k)] = weight;
}

bool Sc2::has_edge(Index i, Index j) const { return edges_.contains({std::min(i, j), std::max(i, j)}); }

bool Sc2::has_triangle(Index i, Index j, Index k) const { return triangles_.contains(sorted_triple(i, j, k)); }

bool Sc2::satisfies_closure() const
{
    return std::all_of(triangles_.begin(), triangles_.end(), [this](const auto& t) {
        const auto& [a, b, c] = t.first;
        return has_edge(a, b) && has_edge(a, c) && has_edge(b, c);
    });
}

Triple sorted_triple(Index i, Index j, Index k)
{
    Triple t{i, j, k};
    std::sort(t.begin(), t.end());
    return t;
}

Sc2 extract_sc2(const PairwiseKernel& h1, const TupleKernel& h2, double edge_threshold, double tri_threshold)
{
    if (h1.n() != h2.n())
        throw ArgumentError("kernel node counts differ");
    if (!(edge_threshold >= 0.0) || !(tri_threshold >= 0.0))
        throw ArgumentError("thresholds must be nonnegative");
    const Index n = h1.n();
    Sc2 sc(n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            const double w = std::max(h1(i, j), h1(j, i));
            if (w > edge_threshold)
                sc.add_edge(i, j, w);
        }
    if (n < 3)
        return sc;
    for (const TripletGroup& g : enumerate_triplet_groups(n, default_masks(n))) {
        const auto [i, j, k] = g.triplet;
        if (!sc.has_edge(i, j) || !sc.has_edge(i, k) || !sc.has_edge(j, k))
            continue;
        double w = 0.0;
        for (const Coord& c : g.h2_coords)
            w = std::max(w, h2.values()(c.row, c.col));
        if (w > tri_threshold)
            sc.add_triangle(i, j, k, w);
    }
    return sc;
}

std::pair<PairwiseKernel, TupleKernel> kernels_from_sc2(const Sc2& sc)
{
    const Index n = sc.n();
    Matrix h1 = Matrix::Zero(n, n);
    Matrix h2 = Matrix::Zero(n, n * n);
    for (const auto& [e, w] : sc.edges()) {
        h1(e.first, e.second) = w;
        h1(e.second, e.first) = w;
    }
    for (const auto& [t, w] : sc.triangles()) {
        const auto [i, j, k] = t;
        h2(i, j * n + k) = h2(i, k * n + j) = w;
        h2(j, i * n + k) = h2(j, k * n + i) = w;
        h2(k, i * n + j) = h2(k, j * n + i) = w;
    }
    return {PairwiseKernel(std::move(h1)), TupleKernel(std::move(h2))};
}

} // namespace vgr
