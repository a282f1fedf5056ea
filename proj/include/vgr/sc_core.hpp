#pragma once

// Graphs, second-order simplicial complexes and the Volterra kernels that
// encode them.
//
// H1 is an N x N pairwise kernel (weighted adjacency). H2 is an N x N^2
// node-to-tuple kernel: entry H2[k][tuple_col(i, j)] weights the influence
// of the product x_i * x_j on node k. Columns are 0-based, col(i, j) = i*N + j.

#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace vgr {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BinaryMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;
using Triple = std::array<Index, 3>;

/// Column of the ordered tuple (i, j) in an N x N^2 tuple kernel.
/// Throws ArgumentError when i or j is outside [0, n).
Index tuple_col(Index i, Index j, Index n);

/// Nonnegative N x N kernel with a zero diagonal.
class PairwiseKernel {
public:
    PairwiseKernel() = default;
    /// Throws ArgumentError unless `values` is square, finite, nonnegative
    /// and has an exactly-zero diagonal.
    explicit PairwiseKernel(Matrix values);

    static PairwiseKernel zeros(Index n);

    Index n() const { return values_.rows(); }
    const Matrix& values() const { return values_; }
    double operator()(Index i, Index j) const { return values_(i, j); }

    bool is_symmetric() const;

private:
    Matrix values_;
};

/// Nonnegative N x N^2 kernel, zero on every degenerate tuple position
/// (i == j, i == k or j == k).
class TupleKernel {
public:
    TupleKernel() = default;
    explicit TupleKernel(Matrix values);

    static TupleKernel zeros(Index n);

    Index n() const { return values_.rows(); }
    const Matrix& values() const { return values_; }
    double at(Index k, Index i, Index j) const { return values_(k, i * n() + j); }

    /// values[k][col(i,j)] == values[k][col(j,i)] for all k, i, j.
    bool is_tuple_symmetric() const;

private:
    Matrix values_;
};

/// Forced-zero patterns for H1 (b1, N x N) and H2 (b2, N x N^2); 1 = masked.
struct MaskPair {
    BinaryMatrix b1;
    BinaryMatrix b2;

    Index n() const { return b1.rows(); }
};

/// Identity pattern on b1; b2 masks every tuple with a repeated index.
MaskPair default_masks(Index n);

/// Checks shapes and that `masks` covers at least the default pattern.
void validate_masks(const MaskPair& masks, Index n);

struct Coord {
    Index row;
    Index col;

    friend bool operator==(const Coord&, const Coord&) = default;
    friend auto operator<=>(const Coord&, const Coord&) = default;
};

/// All kernel coordinates tied to one unordered node triple {i < j < k}: the
/// six directed edges among them in H1 and the six node-to-tuple entries in H2.
struct TripletGroup {
    Triple triplet;
    std::vector<Coord> h1_coords;
    std::vector<Coord> h2_coords;
};

/// One group per unordered triple, lexicographic order. Coordinates masked by
/// `masks` are dropped, so with default masks every group has 6 + 6 entries.
std::vector<TripletGroup> enumerate_triplet_groups(Index n, const MaskPair& masks);

/// Every ordered (k, i, j) with h2[k][col(i,j)] > theta * 1(h1[k][i] h1[k][j] h1[i][j] != 0).
/// An empty result means (h1, h2) satisfies the hard simplicial constraint.
std::vector<Triple> check_sc_feasibility(const PairwiseKernel& h1, const TupleKernel& h2, double theta);

/// Order-2 simplicial complex: nodes 0..n-1, weighted edges and filled
/// triangles. A triangle can only be added once its three edges exist.
class Sc2 {
public:
    using Edge = std::pair<Index, Index>;

    Sc2() = default;
    explicit Sc2(Index n);

    Index n() const { return n_; }

    /// Stores {min(i,j), max(i,j)}; re-adding overwrites the weight.
    void add_edge(Index i, Index j, double weight);
    /// Throws ArgumentError if any of the three edges is missing.
    void add_triangle(Index i, Index j, Index k, double weight);

    bool has_edge(Index i, Index j) const;
    bool has_triangle(Index i, Index j, Index k) const;

    const std::map<Edge, double>& edges() const { return edges_; }
    const std::map<Triple, double>& triangles() const { return triangles_; }

    bool satisfies_closure() const;

    friend bool operator==(const Sc2&, const Sc2&) = default;

private:
    Index n_ = 0;
    std::map<Edge, double> edges_;
    std::map<Triple, double> triangles_;
};

/// Sorted copy of three distinct node indices.
Triple sorted_triple(Index i, Index j, Index k);

/// Thresholds continuous kernel estimates into a complex. An edge needs
/// max(h1[i][j], h1[j][i]) > edge_threshold; a triangle needs its three edges
/// and a maximum group entry of H2 above tri_threshold.
Sc2 extract_sc2(const PairwiseKernel& h1, const TupleKernel& h2, double edge_threshold, double tri_threshold);

/// Symmetric kernels carrying the complex's weights: both orientations of each
/// edge in H1 and all six tuple entries of each filled triangle in H2.
std::pair<PairwiseKernel, TupleKernel> kernels_from_sc2(const Sc2& sc);

} // namespace vgr
