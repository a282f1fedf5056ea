#include "vgr/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <thread>

#include "vgr/csv_io.hpp"
#include "vgr/errors.hpp"

namespace vgr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double lenient_err(const Matrix& est, const Matrix& truth)
{
    try {
        return frob_err(est, truth);
    } catch (const UndefinedMetricError&) {
        return kNaN;
    }
}

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

std::string fmt(double v) { return std::isnan(v) ? "nan" : io::format_double(v); }

} // namespace

std::vector<HyperParams> hyper_grid(const ExperimentConfig& cfg)
{
    std::vector<HyperParams> grid;
    for (double a : cfg.alphas())
        for (double b : cfg.betas())
            for (double g : cfg.gammas())
                grid.push_back({a, b, g});
    return grid;
}

EvalResult evaluate_lenient(const PairwiseKernel& est_h1, const TupleKernel& est_h2, const PairwiseKernel& true_h1,
                            const TupleKernel& true_h2, const Thresholds& thresholds)
{
    if (est_h1.n() != true_h1.n() || est_h2.n() != true_h2.n() || est_h1.n() != est_h2.n())
        throw ArgumentError("evaluate: node counts differ");
    EvalResult out;
    out.err_h1 = lenient_err(est_h1.values(), true_h1.values());
    out.err_h2 = lenient_err(est_h2.values(), true_h2.values());
    out.support = support_fscore(extract_sc2(est_h1, est_h2, thresholds.edge, thresholds.triangle),
                                 extract_sc2(true_h1, true_h2, thresholds.edge, thresholds.triangle));
    return out;
}

bool better_candidate(const EvalResult& a, const EvalResult& b)
{
    if (a.support.edges.fscore != b.support.edges.fscore)
        return a.support.edges.fscore > b.support.edges.fscore;
    if (a.support.triangles.fscore != b.support.triangles.fscore)
        return a.support.triangles.fscore > b.support.triangles.fscore;
    return finite_or_zero(a.err_h1) + finite_or_zero(a.err_h2) < finite_or_zero(b.err_h1) + finite_or_zero(b.err_h2);
}

VgrSelection select_vgr_oracle(const SignalMatrix& x, const PairwiseKernel& true_h1, const TupleKernel& true_h2,
                               const SolveConfig& base, const std::vector<HyperParams>& grid,
                               const Thresholds& thresholds)
{
    if (grid.empty())
        throw ArgumentError("empty hyperparameter grid");
    VgrSelection best;
    bool have = false;
    std::optional<WarmStart> warm;
    int total = 0;
    for (const HyperParams& hp : grid) {
        SolveConfig cfg = base;
        cfg.alpha = hp.alpha;
        cfg.beta = hp.beta;
        cfg.gamma = hp.gamma;
        SolveReport rep = solve(x, cfg, warm ? &*warm : nullptr);
        total += rep.iterations;
        warm = WarmStart{rep.h1, rep.h2, rep.final_rho};
        EvalResult ev = evaluate_lenient(rep.h1, rep.h2, true_h1, true_h2, thresholds);
        if (!have || better_candidate(ev, best.eval)) {
            best.chosen = hp;
            best.report = std::move(rep);
            best.eval = ev;
            have = true;
        }
    }
    best.total_iterations = total;
    return best;
}

HyperParams select_vgr_validation(const SignalMatrix& x, const SolveConfig& base, const std::vector<HyperParams>& grid)
{
    if (grid.empty())
        throw ArgumentError("empty hyperparameter grid");
    if (x.r() < 5)
        throw ArgumentError("validation split needs at least 5 realizations");
    const Index train = (x.r() * 4) / 5;
    const SignalMatrix fit = x.columns(0, train);
    const SignalMatrix held = x.columns(train, x.r() - train);
    const LiftedSignals held_y = khatri_rao_lift(held);

    HyperParams best = grid.front();
    double best_err = std::numeric_limits<double>::infinity();
    std::optional<WarmStart> warm;
    for (const HyperParams& hp : grid) {
        SolveConfig cfg = base;
        cfg.alpha = hp.alpha;
        cfg.beta = hp.beta;
        cfg.gamma = hp.gamma;
        const SolveReport rep = solve(fit, cfg, warm ? &*warm : nullptr);
        warm = WarmStart{rep.h1, rep.h2, rep.final_rho};
        const double err = residual(held, held_y, rep.h1, rep.h2).squaredNorm();
        if (err < best_err) {
            best_err = err;
            best = hp;
        }
    }
    return best;
}

RcSelection select_rc_oracle(const SignalMatrix& x, const PairwiseKernel& true_h1, const TupleKernel& true_h2,
                             const RcConfig& base, const std::vector<double>& eps_grid, const Thresholds& thresholds)
{
    if (eps_grid.empty())
        throw ArgumentError("empty threshold grid");
    const Matrix corr = correlation_matrix(x);
    std::optional<RcSelection> best;
    for (double eps : eps_grid) {
        RcConfig cfg = base;
        cfg.threshold = eps;
        RcEstimate est = rc_from_correlation(corr, cfg);
        EvalResult ev = evaluate_lenient(est.h1, est.h2, true_h1, true_h2, thresholds);
        if (!best || better_candidate(ev, best->eval))
            best = RcSelection{eps, std::move(est), ev};
    }
    return std::move(*best);
}

// ---------------------------------------------------------------------------

const SummaryRow& SweepResult::at(const std::string& method, Index r) const
{
    for (const SummaryRow& s : summary)
        if (s.method == method && s.r == r)
            return s;
    throw ArgumentError("no summary for " + method + " at r=" + std::to_string(r));
}

namespace {

struct Task {
    std::uint64_t seed;
    Index r;
};

std::vector<ResultRow> run_task(const ExperimentConfig& cfg, const Task& task)
{
    ResultRow vgr_row, rc_row;
    for (ResultRow* row : {&vgr_row, &rc_row}) {
        row->n = cfg.generator.n;
        row->r = task.r;
        row->seed = task.seed;
        row->v_known = cfg.v_known;
        row->selection = "oracle-fscore";
    }
    vgr_row.method = "vgr";
    rc_row.method = "rc";

    auto fail = [](ResultRow& row, const std::exception& e) {
        row.error = e.what();
        row.err_h1 = row.err_h2 = row.fscore_edges = row.fscore_triangles = kNaN;
        row.converged = false;
    };

    std::optional<GeneratedInstance> inst;
    try {
        GeneratorConfig gen = cfg.generator;
        gen.seed = task.seed;
        gen.r = task.r;
        inst = generate(gen);
    } catch (const std::exception& e) {
        fail(vgr_row, e);
        fail(rc_row, e);
        return {vgr_row, rc_row};
    }
    const SignalMatrix signals = cfg.v_known ? inst->signals : inst->signals.without_v();

    try {
        const auto t0 = std::chrono::steady_clock::now();
        const VgrSelection sel =
            select_vgr_oracle(signals, inst->h1, inst->h2, cfg.solver, hyper_grid(cfg), cfg.thresholds);
        vgr_row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        vgr_row.params = sel.chosen;
        vgr_row.err_h1 = sel.eval.err_h1;
        vgr_row.err_h2 = sel.eval.err_h2;
        vgr_row.fscore_edges = sel.eval.support.edges.fscore;
        vgr_row.fscore_triangles = sel.eval.support.triangles.fscore;
        vgr_row.iterations = sel.total_iterations;
        vgr_row.converged = sel.report.converged;
    } catch (const std::exception& e) {
        fail(vgr_row, e);
    }

    try {
        const auto t0 = std::chrono::steady_clock::now();
        const RcSelection rc = select_rc_oracle(signals, inst->h1, inst->h2, cfg.rc, cfg.epsilons(), cfg.thresholds);
        rc_row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rc_row.epsilon = rc.epsilon;
        rc_row.err_h1 = rc.eval.err_h1;
        rc_row.err_h2 = rc.eval.err_h2;
        rc_row.fscore_edges = rc.eval.support.edges.fscore;
        rc_row.fscore_triangles = rc.eval.support.triangles.fscore;
    } catch (const std::exception& e) {
        fail(rc_row, e);
    }
    return {vgr_row, rc_row};
}

struct Stats {
    std::size_t count = 0;
    double mean = 0.0;
    double std = 0.0;
};

Stats stats_of(const std::vector<double>& values)
{
    Stats s;
    std::vector<double> v;
    for (double x : values)
        if (std::isfinite(x))
            v.push_back(x);
    s.count = v.size();
    if (v.empty()) {
        s.mean = s.std = kNaN;
        return s;
    }
    for (double x : v)
        s.mean += x;
    s.mean /= static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v)
            ss += (x - s.mean) * (x - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return s;
}

} // namespace

SweepResult run_sweep(const ExperimentConfig& cfg, int threads)
{
    cfg.validate();
    if (threads < 1)
        throw ArgumentError("threads must be positive");
    std::vector<Task> tasks;
    for (std::uint64_t seed : cfg.seeds)
        for (Index r : cfg.r_grid)
            tasks.push_back({seed, r});

    std::vector<std::vector<ResultRow>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++)
            results[t] = run_task(cfg, tasks[t]);
    };
    const int workers = std::min<int>(threads, static_cast<int>(tasks.size()));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(worker);
    }

    SweepResult out;
    for (auto& rows : results)
        for (auto& row : rows)
            out.rows.push_back(std::move(row));
    std::sort(out.rows.begin(), out.rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.method, a.r, a.seed) < std::tie(b.method, b.r, b.seed);
    });
    out.summary = summarize(out.rows);
    return out;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows)
{
    std::map<std::pair<std::string, Index>, std::vector<const ResultRow*>> by_key;
    for (const ResultRow& row : rows)
        by_key[{row.method, row.r}].push_back(&row);

    std::vector<SummaryRow> out;
    for (const auto& [key, group] : by_key) {
        auto column = [&](double ResultRow::*field) {
            std::vector<double> v;
            for (const ResultRow* row : group)
                v.push_back(row->*field);
            return stats_of(v);
        };
        SummaryRow s;
        s.method = key.first;
        s.r = key.second;
        const Stats e1 = column(&ResultRow::err_h1);
        const Stats e2 = column(&ResultRow::err_h2);
        const Stats fe = column(&ResultRow::fscore_edges);
        const Stats ft = column(&ResultRow::fscore_triangles);
        s.count = e1.count;
        s.mean_err_h1 = e1.mean;
        s.std_err_h1 = e1.std;
        s.count_err_h2 = e2.count;
        s.mean_err_h2 = e2.mean;
        s.std_err_h2 = e2.std;
        s.mean_fscore_edges = fe.mean;
        s.std_fscore_edges = fe.std;
        s.mean_fscore_triangles = ft.mean;
        s.std_fscore_triangles = ft.std;
        out.push_back(s);
    }
    return out;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows)
{
    out << "method,n,r,seed,v_known,selection,alpha,beta,gamma,epsilon,err_h1,err_h2,fscore_edges,"
           "fscore_triangles,iterations,converged,error\n";
    for (const ResultRow& row : rows) {
        const bool vgr = row.method == "vgr";
        out << row.method << ',' << row.n << ',' << row.r << ',' << row.seed << ',' << (row.v_known ? 1 : 0) << ','
            << row.selection << ',' << (vgr ? fmt(row.params.alpha) : "") << ','
            << (vgr ? fmt(row.params.beta) : "") << ',' << (vgr ? fmt(row.params.gamma) : "") << ','
            << (vgr ? "" : fmt(row.epsilon)) << ',' << fmt(row.err_h1) << ',' << fmt(row.err_h2) << ','
            << fmt(row.fscore_edges) << ',' << fmt(row.fscore_triangles) << ',' << row.iterations << ','
            << (row.converged ? 1 : 0) << ',';
        // Keep the message on one CSV field.
        std::string msg = row.error;
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        out << msg << '\n';
    }
}

void write_timings_csv(std::ostream& out, const std::vector<ResultRow>& rows)
{
    out << "method,r,seed,wall_time\n";
    for (const ResultRow& row : rows)
        out << row.method << ',' << row.r << ',' << row.seed << ',' << fmt(row.wall_time) << '\n';
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows)
{
    out << "method,r,count,mean_err_h1,std_err_h1,count_err_h2,mean_err_h2,std_err_h2,mean_fscore_edges,"
           "std_fscore_edges,mean_fscore_triangles,std_fscore_triangles\n";
    for (const SummaryRow& s : rows)
        out << s.method << ',' << s.r << ',' << s.count << ',' << fmt(s.mean_err_h1) << ',' << fmt(s.std_err_h1)
            << ',' << s.count_err_h2 << ',' << fmt(s.mean_err_h2) << ',' << fmt(s.std_err_h2) << ','
            << fmt(s.mean_fscore_edges) << ',' << fmt(s.std_fscore_edges) << ',' << fmt(s.mean_fscore_triangles)
            << ',' << fmt(s.std_fscore_triangles) << '\n';
}

} // namespace vgr
