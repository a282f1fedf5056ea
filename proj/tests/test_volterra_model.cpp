#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>

#include "vgr/csv_io.hpp"
#include "vgr/errors.hpp"
#include "vgr/volterra_model.hpp"

using namespace vgr;
namespace fs = std::filesystem;

namespace {

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            m(i, j) = u(rng);
    return m;
}

fs::path scratch_dir(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("vgr_test_volterra_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream(p) << text;
}

} // namespace

TEST_CASE("khatri_rao_lift")
{
    SECTION("direct products")
    {
        Matrix x(2, 1);
        x << 2, 3;
        const Matrix y = khatri_rao_lift(SignalMatrix(x)).y;
        REQUIRE(y.rows() == 4);
        CHECK(y(0, 0) == 4);
        CHECK(y(1, 0) == 6);
        CHECK(y(2, 0) == 6);
        CHECK(y(3, 0) == 9);
    }
    SECTION("zero column lifts to zero")
    {
        Matrix x = random_matrix(4, 3, 1);
        x.col(1).setZero();
        CHECK(khatri_rao_lift(SignalMatrix(x)).y.col(1).isZero(0.0));
    }
    SECTION("exhaustive against the definition")
    {
        for (Index n : {3, 5}) {
            const Matrix x = random_matrix(n, 2 + n, 10 + n);
            const Matrix y = khatri_rao_lift(SignalMatrix(x)).y;
            for (Index i = 0; i < n; ++i)
                for (Index j = 0; j < n; ++j)
                    for (Index r = 0; r < x.cols(); ++r) {
                        CHECK(y(i * n + j, r) == x(i, r) * x(j, r));
                        CHECK(y(i * n + j, r) == y(j * n + i, r));
                    }
        }
    }
}

TEST_CASE("SignalMatrix validation")
{
    Matrix x = random_matrix(3, 4, 2);
    CHECK_THROWS_AS(SignalMatrix(x, Matrix::Zero(3, 5)), ArgumentError);
    x(1, 2) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(SignalMatrix(x), ArgumentError);

    const SignalMatrix s(random_matrix(3, 10, 3), random_matrix(3, 10, 4));
    const SignalMatrix part = s.columns(2, 5);
    CHECK(part.r() == 5);
    CHECK(part.x() == s.x().middleCols(2, 5));
    CHECK(*part.v() == s.v()->middleCols(2, 5));
    CHECK_FALSE(s.without_v().has_v());
    CHECK(s.without_v().v_or_zero().isZero(0.0));
}

TEST_CASE("residual")
{
    const Index n = 5, r = 7;
    const Matrix x = random_matrix(n, r, 5);
    const SignalMatrix s(x);
    const LiftedSignals y = khatri_rao_lift(s);

    SECTION("zero kernels give X")
    {
        CHECK(residual(s, y, PairwiseKernel::zeros(n), TupleKernel::zeros(n)) == x);
    }
    SECTION("five-node example, node 2")
    {
        // Nodes are 1-based in the example; here node m is index m-1.
        const Index k = 1, a = 0, b = 3;
        Matrix h1 = Matrix::Zero(n, n), h2 = Matrix::Zero(n, n * n);
        h1(k, a) = 0.3;
        h1(k, b) = 0.45;
        h2(k, tuple_col(a, b, n)) = 0.2;
        h2(k, tuple_col(b, a, n)) = 0.15;
        const Matrix v = random_matrix(n, r, 6);
        const SignalMatrix sv(x, v);
        const Matrix res = residual(sv, khatri_rao_lift(sv), PairwiseKernel(h1), TupleKernel(h2));
        for (Index t = 0; t < r; ++t) {
            const double expected = x(k, t) - 0.3 * x(a, t) - 0.45 * x(b, t) - (0.2 + 0.15) * x(a, t) * x(b, t) - v(k, t);
            CHECK(res(k, t) == Catch::Approx(expected).epsilon(1e-14));
            for (Index other = 0; other < n; ++other)
                if (other != k)
                    CHECK(res(other, t) == Catch::Approx(x(other, t) - v(other, t)).epsilon(1e-14));
        }
    }
    SECTION("dimension mismatch")
    {
        CHECK_THROWS_AS(residual(s, y, PairwiseKernel::zeros(4), TupleKernel::zeros(n)), ArgumentError);
    }
}

TEST_CASE("generator exactness and structure")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        GeneratorConfig cfg;
        cfg.n = 8 + static_cast<Index>(seed % 5);
        cfg.r = 40;
        cfg.edge_prob = 0.4;
        cfg.seed = seed;
        const GeneratedInstance g = generate(cfg);
        const Matrix res = residual(g.signals, khatri_rao_lift(g.signals), g.h1, g.h2);
        CHECK(res.norm() < 1e-10);
        CHECK(g.h1.is_symmetric());
        CHECK(g.h2.is_tuple_symmetric());
        if (g.h2.values().size() > 0 && g.h2.values().maxCoeff() > 0)
            CHECK(check_sc_feasibility(g.h1, g.h2, g.h2.values().maxCoeff()).empty());
        CHECK(g.truth.satisfies_closure());
        CHECK(extract_sc2(g.h1, g.h2, 0.0, 0.0) == g.truth);

        // All triangles are filled when q = 1.
        for (Index i = 0; i < cfg.n; ++i)
            for (Index j = i + 1; j < cfg.n; ++j)
                for (Index k = j + 1; k < cfg.n; ++k)
                    if (g.truth.has_edge(i, j) && g.truth.has_edge(i, k) && g.truth.has_edge(j, k))
                        CHECK(g.truth.has_triangle(i, j, k));

        if (!g.truth.edges().empty()) {
            const Matrix network = g.h1.values() * g.signals.x() + g.h2.values() * khatri_rao_lift(g.signals).y;
            CHECK(network.norm() / g.signals.x().norm() == Catch::Approx(cfg.target_ratio).epsilon(1e-12));
        }
    }
}

TEST_CASE("generator with noise leaves the noise as residual")
{
    GeneratorConfig cfg;
    cfg.n = 10;
    cfg.r = 2000;
    cfg.noise_std = 0.05;
    const GeneratedInstance g = generate(cfg);
    const Matrix res = residual(g.signals, khatri_rao_lift(g.signals), g.h1, g.h2);
    const double sd = std::sqrt(res.squaredNorm() / static_cast<double>(res.size()));
    CHECK(sd == Catch::Approx(0.05).epsilon(0.03));
}

TEST_CASE("generator edge cases")
{
    GeneratorConfig cfg;
    cfg.n = 6;
    cfg.r = 12;
    cfg.edge_prob = 0.0;
    const GeneratedInstance g = generate(cfg);
    CHECK(g.h1.values().isZero(0.0));
    CHECK(g.h2.values().isZero(0.0));
    CHECK(*g.signals.v() == g.signals.x());
    CHECK(g.truth.edges().empty());

    cfg.edge_prob = 1.0;
    cfg.tri_fill_prob = 0.0;
    const GeneratedInstance open = generate(cfg);
    CHECK(open.truth.edges().size() == 15);
    CHECK(open.truth.triangles().empty());
    CHECK(open.h2.values().isZero(0.0));

    GeneratorConfig bad;
    bad.edge_prob = 1.5;
    CHECK_THROWS_AS(bad.validate(), ArgumentError);
    bad = {};
    bad.h1_weight_range = {0.5, 0.2};
    CHECK_THROWS_AS(generate(bad), ArgumentError);
    bad = {};
    bad.noise_std = -1;
    CHECK_THROWS_AS(generate(bad), ArgumentError);
}

TEST_CASE("generator is deterministic")
{
    GeneratorConfig cfg;
    cfg.n = 12;
    cfg.r = 30;
    cfg.noise_std = 0.1;
    cfg.seed = 99;
    const GeneratedInstance a = generate(cfg), b = generate(cfg);
    CHECK(a.signals.x() == b.signals.x());
    CHECK(*a.signals.v() == *b.signals.v());
    CHECK(a.h1.values() == b.h1.values());
    CHECK(a.h2.values() == b.h2.values());
    CHECK(a.truth == b.truth);
    cfg.seed = 100;
    CHECK(generate(cfg).signals.x() != a.signals.x());
}

TEST_CASE("generator edge count matches the Erdos-Renyi mean")
{
    GeneratorConfig cfg;
    cfg.n = 20;
    cfg.r = 1;
    cfg.edge_prob = 0.15;
    double total = 0.0;
    const int seeds = 1000;
    for (int s = 1; s <= seeds; ++s) {
        cfg.seed = static_cast<std::uint64_t>(s);
        total += static_cast<double>(generate(cfg).truth.edges().size());
    }
    const double expected = 190.0 * 0.15;
    CHECK(std::abs(total / seeds - expected) <= 0.05 * expected);
}

TEST_CASE("ingest_real")
{
    const fs::path dir = scratch_dir("ingest");
    const Matrix x = random_matrix(15, 40, 8);
    io::write_dense_csv(dir / "X.csv", x);
    io::write_dense_csv(dir / "V.csv", x * 0.5);

    const IngestResult ok = ingest_real(dir / "X.csv", dir / "V.csv");
    CHECK(ok.signals.n() == 15);
    CHECK(ok.signals.r() == 40);
    CHECK(ok.signals.x() == x);
    CHECK(*ok.signals.v() == x * 0.5);
    CHECK_FALSE(ok.truth);

    write_file(dir / "nan.csv", "1,2,3\n4,NaN,6\n");
    try {
        ingest_real(dir / "nan.csv");
        FAIL("expected InputError");
    } catch (const InputError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 1 column 1") != std::string::npos);
        CHECK(msg.find("NaN") != std::string::npos);
    }

    write_file(dir / "ragged.csv", "1,2,3\n4,5\n");
    CHECK_THROWS_AS(ingest_real(dir / "ragged.csv"), InputError);
    write_file(dir / "words.csv", "1,2\nfoo,5\n");
    CHECK_THROWS_AS(ingest_real(dir / "words.csv"), InputError);
    io::write_dense_csv(dir / "Vshort.csv", x.leftCols(10));
    CHECK_THROWS_AS(ingest_real(dir / "X.csv", dir / "Vshort.csv"), InputError);
    CHECK_THROWS_AS(ingest_real(dir / "missing.csv"), InputError);

    write_file(dir / "edges_bad.csv", "i,j,w\n0,99,0.5\n");
    CHECK_THROWS_AS(ingest_real(dir / "X.csv", std::nullopt, dir / "edges_bad.csv"), InputError);

    write_file(dir / "edges.csv", "i,j,w\n0,1,0.5\n1,2,0.5\n0,2,0.25\n");
    write_file(dir / "triangles.csv", "i,j,k,w\n0,1,2,0.1\n");
    const IngestResult gt = ingest_real(dir / "X.csv", std::nullopt, dir / "edges.csv", dir / "triangles.csv");
    REQUIRE(gt.truth);
    CHECK(gt.truth->edges().size() == 3);
    CHECK(gt.truth->has_triangle(0, 1, 2));
}
