#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "vgr/errors.hpp"
#include "vgr/eval_metrics.hpp"
#include "vgr/prox_solver.hpp"

using namespace vgr;

namespace {

GeneratedInstance instance(Index n, Index r, double p, double noise, std::uint64_t seed)
{
    GeneratorConfig g;
    g.n = n;
    g.r = r;
    g.edge_prob = p;
    g.noise_std = noise;
    g.seed = seed;
    return generate(g);
}

// Random feasible point: nonnegative, zero on the default masks.
std::pair<Matrix, Matrix> random_feasible(Index n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const MaskPair m = default_masks(n);
    Matrix h1 = Matrix::Zero(n, n), h2 = Matrix::Zero(n, n * n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (m.b1(i, j) == 0)
                h1(i, j) = u(rng);
    for (Index k = 0; k < n; ++k)
        for (Index c = 0; c < n * n; ++c)
            if (m.b2(k, c) == 0)
                h2(k, c) = u(rng);
    return {h1, h2};
}

// Lawson-Hanson active-set NNLS: min ||A w - b|| subject to w >= 0.
Vector nnls(const Matrix& a, const Vector& b)
{
    const Index p = a.cols();
    Vector w = Vector::Zero(p);
    std::vector<bool> passive(static_cast<std::size_t>(p), false);
    for (int outer = 0; outer < 30 * static_cast<int>(p); ++outer) {
        const Vector grad = a.transpose() * (b - a * w);
        Index best = -1;
        double best_val = 1e-12 * (1.0 + grad.cwiseAbs().maxCoeff());
        for (Index j = 0; j < p; ++j)
            if (!passive[static_cast<std::size_t>(j)] && grad(j) > best_val) {
                best_val = grad(j);
                best = j;
            }
        if (best < 0)
            break;
        passive[static_cast<std::size_t>(best)] = true;
        for (;;) {
            std::vector<Index> idx;
            for (Index j = 0; j < p; ++j)
                if (passive[static_cast<std::size_t>(j)])
                    idx.push_back(j);
            Matrix sub(a.rows(), static_cast<Index>(idx.size()));
            for (std::size_t c = 0; c < idx.size(); ++c)
                sub.col(static_cast<Index>(c)) = a.col(idx[c]);
            const Vector z = sub.completeOrthogonalDecomposition().solve(b);
            if (z.minCoeff() > 0) {
                w.setZero();
                for (std::size_t c = 0; c < idx.size(); ++c)
                    w(idx[c]) = z(static_cast<Index>(c));
                break;
            }
            double step = 1.0;
            for (std::size_t c = 0; c < idx.size(); ++c)
                if (z(static_cast<Index>(c)) <= 0) {
                    const double wc = w(idx[c]);
                    step = std::min(step, wc / (wc - z(static_cast<Index>(c))));
                }
            for (std::size_t c = 0; c < idx.size(); ++c)
                w(idx[c]) += step * (z(static_cast<Index>(c)) - w(idx[c]));
            for (std::size_t c = 0; c < idx.size(); ++c)
                if (w(idx[c]) <= 1e-15) {
                    w(idx[c]) = 0.0;
                    passive[static_cast<std::size_t>(idx[c])] = false;
                }
        }
    }
    return w;
}

// Optimal value of the unregularized, constrained fit, row by row.
double nnls_objective(const SignalMatrix& s)
{
    const Index n = s.n();
    const Matrix y = khatri_rao_lift(s).y;
    const Matrix target = s.x() - s.v_or_zero();
    const MaskPair m = default_masks(n);
    double total = 0.0;
    for (Index k = 0; k < n; ++k) {
        std::vector<Vector> cols;
        for (Index j = 0; j < n; ++j)
            if (m.b1(k, j) == 0)
                cols.push_back(s.x().row(j).transpose());
        for (Index c = 0; c < n * n; ++c)
            if (m.b2(k, c) == 0)
                cols.push_back(y.row(c).transpose());
        Matrix a(s.r(), static_cast<Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c)
            a.col(static_cast<Index>(c)) = cols[c];
        const Vector b = target.row(k).transpose();
        total += (a * nnls(a, b) - b).squaredNorm();
    }
    return total;
}

void check_feasible(const SolveReport& rep, const MaskPair& m)
{
    const Matrix& h1 = rep.h1.values();
    const Matrix& h2 = rep.h2.values();
    CHECK(h1.minCoeff() >= 0.0);
    CHECK(h2.minCoeff() >= 0.0);
    for (Index i = 0; i < h1.rows(); ++i)
        for (Index j = 0; j < h1.cols(); ++j)
            if (m.b1(i, j))
                CHECK(h1(i, j) == 0.0);
    for (Index k = 0; k < h2.rows(); ++k)
        for (Index c = 0; c < h2.cols(); ++c)
            if (m.b2(k, c))
                CHECK(h2(k, c) == 0.0);
}

std::size_t active_groups(const SolveReport& rep)
{
    const auto groups = enumerate_triplet_groups(rep.h1.n(), default_masks(rep.h1.n()));
    std::size_t count = 0;
    for (const auto& g : groups) {
        double s = 0.0;
        for (const auto& c : g.h1_coords)
            s += rep.h1.values()(c.row, c.col);
        for (const auto& c : g.h2_coords)
            s += rep.h2.values()(c.row, c.col);
        count += s > 0.0;
    }
    return count;
}

} // namespace

TEST_CASE("objective examples")
{
    SolveConfig cfg;
    const auto g = instance(6, 30, 0.5, 0.0, 3);
    const LiftedSignals y = khatri_rao_lift(g.signals);

    const SignalMatrix no_v = g.signals.without_v();
    CHECK(objective(no_v, y, PairwiseKernel::zeros(6), TupleKernel::zeros(6), cfg) ==
          Catch::Approx(g.signals.x().squaredNorm()).epsilon(1e-14));

    SolveConfig zero;
    zero.alpha = zero.beta = zero.gamma = 0.0;
    CHECK(objective(g.signals, y, g.h1, g.h2, zero) < 1e-20);

    // One group with all twelve entries at 1 and a zero residual.
    const Index n = 3;
    Matrix h1 = Matrix::Ones(n, n) - Matrix::Identity(n, n);
    Matrix h2 = Matrix::Zero(n, n * n);
    for (Index k = 0; k < n; ++k)
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                if (k != i && k != j && i != j)
                    h2(k, tuple_col(i, j, n)) = 1.0;
    const SignalMatrix s(Matrix::Zero(n, 4), Matrix::Zero(n, 4));
    SolveConfig grp;
    grp.alpha = grp.beta = 0.0;
    grp.gamma = 2.0;
    CHECK(objective(s, khatri_rao_lift(s), PairwiseKernel(h1), TupleKernel(h2), grp) ==
          Catch::Approx(2.0 * std::sqrt(12.0)).epsilon(1e-14));

    // Penalty oracle: direct sums.
    SolveConfig mixed;
    mixed.alpha = 0.3;
    mixed.beta = 0.7;
    mixed.gamma = 0.0;
    CHECK(objective(s, khatri_rao_lift(s), PairwiseKernel(h1), TupleKernel(h2), mixed) ==
          Catch::Approx(0.3 * 6 + 0.7 * 6).epsilon(1e-14));

    CHECK_THROWS_AS(objective(s, khatri_rao_lift(s), PairwiseKernel::zeros(4), TupleKernel(h2), mixed), ArgumentError);
}

TEST_CASE("objective is convex")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SolveConfig cfg;
    cfg.alpha = 0.2;
    cfg.beta = 0.3;
    cfg.gamma = 0.5;
    for (int trial = 0; trial < 200; ++trial) {
        const Index n = 3 + trial % 4;
        const auto g = instance(n, 15, 0.5, 0.1, static_cast<std::uint64_t>(trial + 1));
        const LiftedSignals y = khatri_rao_lift(g.signals);
        const auto [a1, a2] = random_feasible(n, rng);
        const auto [b1, b2] = random_feasible(n, rng);
        const double t = u(rng);
        const double fa = objective(g.signals, y, PairwiseKernel(a1), TupleKernel(a2), cfg);
        const double fb = objective(g.signals, y, PairwiseKernel(b1), TupleKernel(b2), cfg);
        const double fm = objective(g.signals, y, PairwiseKernel(t * a1 + (1 - t) * b1),
                                    TupleKernel(t * a2 + (1 - t) * b2), cfg);
        CHECK(fm <= t * fa + (1 - t) * fb + 1e-9);
    }
}

TEST_CASE("prox examples")
{
    CHECK(prox_nonneg_l1(0.7, 0.2) == Catch::Approx(0.5));
    CHECK(prox_nonneg_l1(-3.0, 0.2) == 0.0);
    CHECK(prox_nonneg_l1(0.1, 0.2) == 0.0);

    const std::vector<double> v{3.0, 4.0};
    const auto a = prox_group(v, 1.0);
    CHECK(a[0] == Catch::Approx(2.4));
    CHECK(a[1] == Catch::Approx(3.2));
    const auto b = prox_group(v, 10.0);
    CHECK(b[0] == 0.0);
    CHECK(b[1] == 0.0);
    const std::vector<double> z(5, 0.0);
    for (double e : prox_group(z, 0.3))
        CHECK(e == 0.0);
}

TEST_CASE("prox optimality against random perturbations")
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> val(-3.0, 3.0), lam(0.0, 2.0), pert(-0.5, 0.5);
    std::uniform_int_distribution<int> dim(1, 12);

    auto l1_obj = [](double u, double v, double lambda) {
        return u < 0 ? std::numeric_limits<double>::infinity() : 0.5 * (u - v) * (u - v) + lambda * u;
    };
    auto group_obj = [](const std::vector<double>& u, const std::vector<double>& v, double kappa) {
        double d = 0.0, nu = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            d += (u[i] - v[i]) * (u[i] - v[i]);
            nu += u[i] * u[i];
        }
        return 0.5 * d + kappa * std::sqrt(nu);
    };

    int l1_fail = 0, group_fail = 0;
    for (int c = 0; c < 1000; ++c) {
        const double v = val(rng), lambda = lam(rng);
        const double p = prox_nonneg_l1(v, lambda);
        const double best = l1_obj(p, v, lambda);
        std::vector<double> vec(static_cast<std::size_t>(dim(rng)));
        for (auto& e : vec)
            e = val(rng);
        const double kappa = lam(rng);
        const auto g = prox_group(vec, kappa);
        const double gbest = group_obj(g, vec, kappa);
        for (int k = 0; k < 100; ++k) {
            if (l1_obj(std::max(0.0, p + pert(rng)), v, lambda) < best - 1e-12)
                ++l1_fail;
            auto q = g;
            for (auto& e : q)
                e += pert(rng);
            if (group_obj(q, vec, kappa) < gbest - 1e-12)
                ++group_fail;
        }
    }
    CHECK(l1_fail == 0);
    CHECK(group_fail == 0);
}

TEST_CASE("solver output is feasible")
{
    const auto g = instance(8, 80, 0.4, 0.05, 4);
    for (bool sym1 : {false, true})
        for (bool sym2 : {false, true}) {
            SolveConfig cfg;
            cfg.symmetric_h1 = sym1;
            cfg.symmetric_h2 = sym2;
            const SolveReport rep = solve(g.signals, cfg);
            check_feasible(rep, default_masks(8));
            CHECK(rep.converged);
            CHECK(rep.primal_residual <= rep.primal_threshold);
            CHECK(rep.dual_residual <= rep.dual_threshold);
            if (sym1)
                CHECK(rep.h1.values() == rep.h1.values().transpose());
            if (sym2)
                CHECK(rep.h2.is_tuple_symmetric());
            CHECK(rep.objective_trace.size() == static_cast<std::size_t>(rep.iterations));
        }
}

TEST_CASE("custom masks are respected")
{
    const auto g = instance(6, 60, 0.6, 0.02, 5);
    SolveConfig cfg;
    MaskPair m = default_masks(6);
    m.b1(0, 1) = m.b1(1, 0) = 1;
    m.b2.row(2).setOnes();
    cfg.masks = m;
    const SolveReport rep = solve(g.signals, cfg);
    check_feasible(rep, m);

    cfg.symmetric_h1 = true;
    m.b1(1, 0) = 0;
    cfg.masks = m;
    CHECK_THROWS_AS(solve(g.signals, cfg), ArgumentError);
}

TEST_CASE("large penalties give the zero solution")
{
    const auto g = instance(6, 40, 0.5, 0.05, 6);
    const Matrix y = khatri_rao_lift(g.signals).y;
    const double big = 2.0 * g.signals.x().norm() * std::max(g.signals.x().colwise().norm().maxCoeff(),
                                                            y.colwise().norm().maxCoeff()) *
                       std::sqrt(static_cast<double>(g.signals.r()));
    SolveConfig cfg;
    cfg.alpha = cfg.beta = cfg.gamma = big;
    const SolveReport rep = solve(g.signals, cfg);
    CHECK(rep.h1.values().isZero(0.0));
    CHECK(rep.h2.values().isZero(0.0));
}

TEST_CASE("noiseless data with small penalties recovers the truth")
{
    const auto g = instance(7, 300, 0.5, 0.0, 7);
    SolveConfig cfg;
    cfg.alpha = cfg.beta = 0.05;
    cfg.gamma = 0.01;
    cfg.tol_abs = 1e-7;
    cfg.tol_rel = 1e-6;
    cfg.max_iter = 20000;
    const SolveReport rep = solve(g.signals, cfg);
    CHECK(frob_err(rep.h1.values(), g.h1.values()) < 1e-3);
    const Sc2 est = extract_sc2(rep.h1, rep.h2, 1e-3, 1e-3);
    CHECK(est.edges().size() == g.truth.edges().size());
    for (const auto& [e, w] : g.truth.edges())
        CHECK(est.has_edge(e.first, e.second));
    for (const auto& [t, w] : g.truth.triangles())
        CHECK(est.has_triangle(t[0], t[1], t[2]));
}

TEST_CASE("active groups shrink as gamma grows")
{
    // The grid starts where the group term dominates the L1 terms. Below that
    // (gamma << alpha) the count is not monotone on the exact optimum either;
    // the reference solver reproduces the rise.
    const auto g = instance(8, 60, 0.4, 0.1, 8);
    std::size_t prev = std::numeric_limits<std::size_t>::max();
    for (double gamma : {0.3, 1.0, 3.0, 10.0, 30.0}) {
        SolveConfig cfg;
        cfg.alpha = cfg.beta = 0.05;
        cfg.gamma = gamma;
        const std::size_t now = active_groups(solve(g.signals, cfg));
        INFO("gamma=" << gamma);
        CHECK(now <= prev);
        prev = now;
    }
    SolveConfig huge;
    huge.alpha = huge.beta = 0.05;
    huge.gamma = 100.0;
    CHECK(active_groups(solve(g.signals, huge)) == 0);
}

TEST_CASE("iteration cap is reported, not thrown")
{
    const auto g = instance(8, 60, 0.4, 0.1, 9);
    SolveConfig cfg;
    cfg.max_iter = 3;
    SolveReport rep;
    REQUIRE_NOTHROW(rep = solve(g.signals, cfg));
    CHECK_FALSE(rep.converged);
    CHECK(rep.iterations == 3);
    check_feasible(rep, default_masks(8));

    SolveConfig bad;
    bad.rho = 0.0;
    CHECK_THROWS_AS(solve(g.signals, bad), ArgumentError);
    bad = {};
    bad.alpha = -1.0;
    CHECK_THROWS_AS(solve(g.signals, bad), ArgumentError);
}

TEST_CASE("warm start reaches the same optimum")
{
    const auto g = instance(7, 80, 0.4, 0.05, 10);
    SolveConfig cfg;
    cfg.gamma = 0.3;
    const SolveReport cold = solve(g.signals, cfg);
    SolveConfig near = cfg;
    near.gamma = 0.2;
    const SolveReport first = solve(g.signals, near);
    const WarmStart ws{first.h1, first.h2, first.final_rho};
    const SolveReport warm = solve(g.signals, cfg, &ws);
    CHECK(std::abs(warm.objective - cold.objective) / cold.objective < 1e-3);
}

TEST_CASE("reference solver bookkeeping")
{
    const auto g = instance(3, 10, 1.0, 0.1, 12);
    SolveConfig cfg;
    const SolveReport rep = reference_solve(g.signals, cfg, 5000);
    REQUIRE(rep.objective_trace.size() == 5000);
    for (std::size_t t = 1; t < rep.objective_trace.size(); ++t)
        CHECK(rep.objective_trace[t] <= rep.objective_trace[t - 1]);
    CHECK(rep.objective == rep.objective_trace.back());
    CHECK_FALSE(rep.converged);
    check_feasible(rep, default_masks(3));
}

TEST_CASE("reference solver matches nonnegative least squares without penalties")
{
    SolveConfig cfg;
    cfg.alpha = cfg.beta = cfg.gamma = 0.0;
    for (std::uint64_t seed : {21, 22, 23}) {
        const auto g = instance(4, 30, 0.7, 0.05, seed);
        const double exact = nnls_objective(g.signals);
        const SolveReport ref = reference_solve(g.signals, cfg, 200000);
        CHECK(std::abs(ref.objective - exact) / exact <= 1e-4);
        const SolveReport admm = solve(g.signals, cfg);
        CHECK(std::abs(admm.objective - exact) / exact <= 1e-3);
    }
}

TEST_CASE("solver agrees with the reference solver")
{
    struct Case {
        Index n;
        std::uint64_t seed;
        double alpha, beta, gamma;
        bool sym1, sym2;
    };
    const std::vector<Case> cases{
        {4, 31, 0.1, 0.1, 0.5, false, false},
        {5, 32, 0.05, 0.2, 0.2, false, false},
        {5, 33, 0.3, 0.05, 1.0, true, false},
        {6, 34, 0.1, 0.1, 0.5, true, true},
    };
    for (const auto& c : cases) {
        const auto g = instance(c.n, 60, 0.6, 0.05, c.seed);
        SolveConfig cfg;
        cfg.alpha = c.alpha;
        cfg.beta = c.beta;
        cfg.gamma = c.gamma;
        cfg.symmetric_h1 = c.sym1;
        cfg.symmetric_h2 = c.sym2;
        const SolveReport admm = solve(g.signals, cfg);
        const SolveReport ref = reference_solve(g.signals, cfg, 200000);
        INFO("n=" << c.n << " seed=" << c.seed << " admm=" << admm.objective << " ref=" << ref.objective);
        CHECK(std::abs(admm.objective - ref.objective) / ref.objective <= 1e-3);
        if (c.sym1)
            CHECK(ref.h1.is_symmetric());
        if (c.sym2)
            CHECK(ref.h2.is_tuple_symmetric());
    }
}
