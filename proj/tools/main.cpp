// vgr: joint graph and 2-simplex inference from nodal signals.
//
//   vgr generate --config exp.cfg --out data/
//   vgr infer    --x data/X.csv --v data/V.csv --method vgr --out est/
//   vgr eval     --estimate est/ --truth data/
//   vgr sweep    --config exp.cfg --threads 4 --out sweep/
//   vgr oracle   --x data/X.csv --config exp.cfg --out oracle/

#include <iostream>

#include <CLI11.hpp>

#include "vgr/commands.hpp"

int main(int argc, char** argv)
{
    using namespace vgr::cli;

    CLI::App app{"Joint graph and simplicial complex inference with graph Volterra models"};
    app.require_subcommand(1);

    Options opts;
    std::string v_known;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "key = value configuration file");
        sub->add_option("--set", opts.overrides, "override one config key (key=value), repeatable");
        sub->add_option("--out", opts.out, "output directory (default: $VGR_OUTPUT_DIR or ./vgr_out)");
        sub->add_option("--v-known", v_known, "true to use the exogenous term V, false to set it to zero");
    };

    auto* gen = app.add_subcommand("generate", "write a synthetic instance");
    common(gen);
    gen->add_option("--seed", opts.seed, "generator seed");

    auto* infer = app.add_subcommand("infer", "estimate H1, H2 and the complex from X");
    common(infer);
    infer->add_option("--x", opts.x, "dense X csv")->required();
    infer->add_option("--v", opts.v, "dense V csv");
    infer->add_option("--method", opts.method, "vgr or rc");

    auto* sweep = app.add_subcommand("sweep", "sample-size sweep over seeds");
    common(sweep);
    sweep->add_option("--threads", opts.threads, "worker threads");
    sweep->add_option("--seed", opts.seed, "run this single seed instead of experiment.seeds");

    auto* eval = app.add_subcommand("eval", "score an estimate against ground truth");
    common(eval);
    eval->add_option("--estimate", opts.estimate, "directory with h1.csv and h2.csv")->required();
    eval->add_option("--truth", opts.truth, "directory with h1.csv and h2.csv")->required();
    eval->add_option("--n", opts.n, "node count when no manifest/report is present");

    auto* oracle = app.add_subcommand("oracle", "slow reference solve for small n");
    common(oracle);
    oracle->add_option("--x", opts.x, "dense X csv")->required();
    oracle->add_option("--v", opts.v, "dense V csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    if (!v_known.empty()) {
        if (v_known == "true" || v_known == "1")
            opts.v_known = true;
        else if (v_known == "false" || v_known == "0")
            opts.v_known = false;
        else {
            std::cerr << "error: --v-known expects true or false\n";
            return kExitInputError;
        }
    }

    if (gen->parsed())
        return cmd_generate(opts, std::cout, std::cerr);
    if (infer->parsed())
        return cmd_infer(opts, std::cout, std::cerr);
    if (sweep->parsed())
        return cmd_sweep(opts, std::cout, std::cerr);
    if (eval->parsed())
        return cmd_eval(opts, std::cout, std::cerr);
    return cmd_oracle(opts, std::cout, std::cerr);
}
