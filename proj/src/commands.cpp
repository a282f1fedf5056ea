#include "vgr/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>

#include <json.hpp>

#include "vgr/csv_io.hpp"
#include "vgr/errors.hpp"
#include "vgr/experiment.hpp"

namespace vgr::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr Index kOracleMaxNodes = 8;

int guarded(std::ostream& err, const std::function<int()>& body)
{
    try {
        return body();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

json config_json(const ExperimentConfig& cfg)
{
    // Output location is not part of the experiment; leaving it out keeps
    // manifests identical across output directories.
    json j = json::object();
    for (const auto& [k, v] : to_key_values(cfg))
        if (k != "experiment.output_dir")
            j[k] = v;
    return j;
}

void write_json(const fs::path& path, const json& j) { io::write_text(path, j.dump(2) + "\n"); }

IngestResult load_signals(const Options& opts, const ExperimentConfig& cfg)
{
    if (!opts.x)
        throw ArgumentError("--x is required");
    if (!fs::exists(*opts.x))
        throw InputError("X file not found: " + opts.x->string());
    std::optional<fs::path> v;
    if (opts.v && cfg.v_known)
        v = *opts.v;
    return ingest_real(*opts.x, v);
}

void write_estimate(const fs::path& dir, const PairwiseKernel& h1, const TupleKernel& h2, const Sc2& sc)
{
    io::write_sparse_h1(dir / "h1.csv", h1.values());
    io::write_sparse_h2(dir / "h2.csv", h2.values());
    io::write_edges_csv(dir / "edges.csv", sc);
    io::write_triangles_csv(dir / "triangles.csv", sc);
}

Index node_count_of(const fs::path& dir, const std::optional<Index>& flag)
{
    if (flag)
        return *flag;
    for (const char* name : {"manifest.json", "report.json"}) {
        const fs::path p = dir / name;
        if (!fs::exists(p))
            continue;
        std::ifstream in(p);
        const json j = json::parse(in, nullptr, false);
        if (j.is_discarded() || !j.contains("n") || !j["n"].is_number_integer())
            throw InputError(p.string() + ": missing integer field \"n\"");
        return j["n"].get<Index>();
    }
    throw InputError(dir.string() + ": no manifest.json or report.json to read the node count from (pass --n)");
}

json eval_json(const EvalResult& ev)
{
    json j;
    j["err_h1"] = ev.err_h1;
    j["err_h2"] = ev.err_h2;
    j["fscore_edges"] = ev.support.edges.fscore;
    j["precision_edges"] = ev.support.edges.precision;
    j["recall_edges"] = ev.support.edges.recall;
    j["fscore_triangles"] = ev.support.triangles.fscore;
    j["precision_triangles"] = ev.support.triangles.precision;
    j["recall_triangles"] = ev.support.triangles.recall;
    return j;
}

} // namespace

ExperimentConfig resolve_config(const Options& opts)
{
    ExperimentConfig cfg;
    if (opts.config) {
        if (!fs::exists(*opts.config))
            throw InputError("config file not found: " + opts.config->string());
        apply_key_values(cfg, read_key_values(*opts.config));
    }
    KeyValues kv;
    for (const auto& o : opts.overrides) {
        auto [k, v] = parse_assignment(o);
        kv[k] = v;
    }
    apply_key_values(cfg, kv);
    if (opts.seed)
        cfg.generator.seed = *opts.seed;
    if (opts.v_known)
        cfg.v_known = *opts.v_known;
    if (opts.threads)
        cfg.threads = *opts.threads;
    if (opts.out)
        cfg.output_dir = *opts.out;
    cfg.validate();
    return cfg;
}

fs::path resolve_output_dir(const Options& opts, const ExperimentConfig& cfg)
{
    if (opts.out)
        return *opts.out;
    if (!cfg.output_dir.empty())
        return cfg.output_dir;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env)
        return env;
    return "vgr_out";
}

int cmd_generate(const Options& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const ExperimentConfig cfg = resolve_config(opts);
        const fs::path dir = resolve_output_dir(opts, cfg);
        const GeneratedInstance inst = generate(cfg.generator);

        io::write_dense_csv(dir / "X.csv", inst.signals.x());
        io::write_dense_csv(dir / "V.csv", *inst.signals.v());
        io::write_edges_csv(dir / "edges.csv", inst.truth);
        io::write_triangles_csv(dir / "triangles.csv", inst.truth);
        io::write_sparse_h1(dir / "h1.csv", inst.h1.values());
        io::write_sparse_h2(dir / "h2.csv", inst.h2.values());

        json manifest;
        manifest["n"] = cfg.generator.n;
        manifest["r"] = cfg.generator.r;
        manifest["seed"] = cfg.generator.seed;
        manifest["files"] = {"X.csv", "V.csv", "edges.csv", "triangles.csv", "h1.csv", "h2.csv"};
        manifest["config"] = config_json(cfg);
        write_json(dir / "manifest.json", manifest);

        out << "generated n=" << cfg.generator.n << " r=" << cfg.generator.r << " edges=" << inst.truth.edges().size()
            << " triangles=" << inst.truth.triangles().size() << " -> " << dir.string() << '\n';
        return kExitOk;
    });
}

int cmd_infer(const Options& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const ExperimentConfig cfg = resolve_config(opts);
        const std::string method = opts.method.value_or("vgr");
        if (method != "vgr" && method != "rc")
            throw ArgumentError("--method must be vgr or rc, got \"" + method + "\"");
        const IngestResult data = load_signals(opts, cfg);
        const fs::path dir = resolve_output_dir(opts, cfg);

        json report;
        report["method"] = method;
        report["n"] = data.signals.n();
        report["r"] = data.signals.r();
        report["v_known"] = data.signals.has_v();
        const auto t0 = std::chrono::steady_clock::now();
        if (method == "vgr") {
            SolveConfig sc = cfg.solver;
            const auto grid = hyper_grid(cfg);
            std::string selection = "fixed";
            if (grid.size() > 1) {
                const HyperParams hp = select_vgr_validation(data.signals, sc, grid);
                sc.alpha = hp.alpha;
                sc.beta = hp.beta;
                sc.gamma = hp.gamma;
                selection = "validation-80-20";
            }
            const SolveReport rep = solve(data.signals, sc);
            const Sc2 complex = extract_sc2(rep.h1, rep.h2, cfg.thresholds.edge, cfg.thresholds.triangle);
            write_estimate(dir, rep.h1, rep.h2, complex);
            report["selection"] = selection;
            report["alpha"] = sc.alpha;
            report["beta"] = sc.beta;
            report["gamma"] = sc.gamma;
            report["objective"] = rep.objective;
            report["iterations"] = rep.iterations;
            report["primal_residual"] = rep.primal_residual;
            report["dual_residual"] = rep.dual_residual;
            report["converged"] = rep.converged;
            report["edges"] = complex.edges().size();
            report["triangles"] = complex.triangles().size();
        } else {
            const RcEstimate est = rc_infer(data.signals, cfg.rc);
            write_estimate(dir, est.h1, est.h2, est.complex);
            report["selection"] = "fixed";
            report["epsilon"] = cfg.rc.threshold;
            report["edges"] = est.complex.edges().size();
            report["triangles"] = est.complex.triangles().size();
        }
        report["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_json(dir / "report.json", report);
        out << report.dump() << '\n';
        return kExitOk;
    });
}

int cmd_sweep(const Options& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        ExperimentConfig cfg = resolve_config(opts);
        if (opts.seed)
            cfg.seeds = {*opts.seed};
        const fs::path dir = resolve_output_dir(opts, cfg);
        const SweepResult res = run_sweep(cfg, cfg.threads);
        fs::create_directories(dir);
        {
            std::ofstream f(dir / "results.csv", std::ios::binary | std::ios::trunc);
            write_results_csv(f, res.rows);
        }
        {
            std::ofstream f(dir / "timings.csv", std::ios::binary | std::ios::trunc);
            write_timings_csv(f, res.rows);
        }
        {
            std::ofstream f(dir / "summary.csv", std::ios::binary | std::ios::trunc);
            write_summary_csv(f, res.summary);
        }
        write_summary_csv(out, res.summary);
        return kExitOk;
    });
}

int cmd_eval(const Options& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const ExperimentConfig cfg = resolve_config(opts);
        if (!opts.estimate || !opts.truth)
            throw ArgumentError("--estimate and --truth directories are required");
        const Index n_est = node_count_of(*opts.estimate, opts.n);
        const Index n_true = node_count_of(*opts.truth, opts.n);
        if (n_est != n_true)
            throw InputError("node counts differ: estimate n=" + std::to_string(n_est) +
                             ", truth n=" + std::to_string(n_true));
        auto load = [n = n_est](const fs::path& dir) {
            return std::pair{PairwiseKernel(io::read_sparse_h1(dir / "h1.csv", n)),
                             TupleKernel(io::read_sparse_h2(dir / "h2.csv", n))};
        };
        const auto [est_h1, est_h2] = load(*opts.estimate);
        const auto [true_h1, true_h2] = load(*opts.truth);
        const EvalResult ev = evaluate_lenient(est_h1, est_h2, true_h1, true_h2, cfg.thresholds);

        const json j = eval_json(ev);
        const fs::path dir = resolve_output_dir(opts, cfg);
        write_json(dir / "eval.json", j);
        io::write_text(dir / "eval.csv",
                       "err_h1,err_h2,fscore_edges,fscore_triangles\n" + io::format_double(ev.err_h1) + "," +
                           io::format_double(ev.err_h2) + "," + io::format_double(ev.support.edges.fscore) + "," +
                           io::format_double(ev.support.triangles.fscore) + "\n");
        out << j.dump() << '\n';
        return kExitOk;
    });
}

int cmd_oracle(const Options& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const ExperimentConfig cfg = resolve_config(opts);
        const IngestResult data = load_signals(opts, cfg);
        if (data.signals.n() > kOracleMaxNodes)
            throw ArgumentError("oracle is desk-scale only (n <= " + std::to_string(kOracleMaxNodes) + ", got n=" +
                                std::to_string(data.signals.n()) + ")");
        const fs::path dir = resolve_output_dir(opts, cfg);
        const SolveReport rep = reference_solve(data.signals, cfg.solver, cfg.oracle_iterations);
        io::write_sparse_h1(dir / "oracle_h1.csv", rep.h1.values());
        io::write_sparse_h2(dir / "oracle_h2.csv", rep.h2.values());
        json j;
        j["method"] = "oracle";
        j["n"] = data.signals.n();
        j["r"] = data.signals.r();
        j["objective"] = rep.objective;
        j["iterations"] = rep.iterations;
        write_json(dir / "oracle_report.json", j);
        out << j.dump() << '\n';
        return kExitOk;
    });
}

} // namespace vgr::cli
