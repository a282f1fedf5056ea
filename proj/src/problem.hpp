#pragma once

// Problem data shared by the two solvers: the stacked regressor [X; Y], the
// target X - V, the free-variable pattern and the flattened triplet groups.
// Unknowns live in one N x (N + N^2) matrix W = [H1, H2].

#include <vector>

#include "vgr/prox_solver.hpp"

namespace vgr::detail {

struct GroupLayout {
    // Coordinates into W, group g spanning [offsets[g], offsets[g+1]).
    std::vector<Index> rows;
    std::vector<Index> cols;
    std::vector<std::size_t> offsets;

    std::size_t count() const { return offsets.empty() ? 0 : offsets.size() - 1; }
};

class Problem {
public:
    Problem(const SignalMatrix& x, const SolveConfig& cfg);

    Index n() const { return n_; }
    Index dim() const { return n_ + n_ * n_; }

    const Matrix& regressors() const { return regressors_; }
    const Matrix& target() const { return target_; }
    const BinaryMatrix& free() const { return free_; }
    const GroupLayout& groups() const { return groups_; }
    const SolveConfig& config() const { return cfg_; }

    /// Per-row list of free columns of W.
    const std::vector<std::vector<Index>>& free_columns() const { return free_columns_; }

    double data_fit(const Matrix& w) const;
    double penalty(const Matrix& w) const;
    double objective(const Matrix& w) const { return data_fit(w) + penalty(w); }

    Matrix combine(const PairwiseKernel& h1, const TupleKernel& h2) const;
    PairwiseKernel h1_of(const Matrix& w) const;
    TupleKernel h2_of(const Matrix& w) const;

private:
    Index n_;
    SolveConfig cfg_;
    Matrix regressors_;
    Matrix target_;
    BinaryMatrix free_;
    std::vector<std::vector<Index>> free_columns_;
    GroupLayout groups_;
};

GroupLayout flatten_groups(Index n, const MaskPair& masks);

} // namespace vgr::detail
