// Experiment runner: every module of the library behind reproducible
// subcommands with explicit seeds, JSON/CSV reports, and atomic output.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "redlearn/cli.hpp"
#include "redlearn/io.hpp"

namespace {

using redlearn::Json;
using redlearn::cli::CommandResult;

struct OutputOptions {
    std::string output;
    std::string format = "json";
    std::string config;
};

void add_output_options(CLI::App* cmd, OutputOptions& out) {
    cmd->add_option("--output", out.output, "report file path (stdout when omitted)");
    cmd->add_option("--format", out.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--config", out.config,
                    "JSON config file; values in it override command-line flags");
}

// Config file values take precedence over flags.
Json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot read " + path);
    Json j;
    in >> j;
    return j;
}

template <typename T>
void cfg_get(const Json& j, const char* key, T& field) {
    if (j.contains(key)) field = j.at(key).get<T>();
}

int emit(const CommandResult& res, const OutputOptions& out) {
    std::string payload;
    if (out.format == "csv") {
        if (res.csv.empty()) {
            std::cerr << "error: this command has no CSV schema; use --format json\n";
            return 2;
        }
        payload = res.csv;
    } else {
        payload = res.report.dump(2) + "\n";
    }
    std::string path = out.output;
    if (!path.empty()) {
        if (const char* dir = std::getenv("REDLEARN_OUTPUT_DIR")) {
            path = std::string(dir) + "/" + std::filesystem::path(path).filename().string();
        }
        redlearn::atomic_write(path, payload);
        std::cout << (res.pass ? "PASS " : "FAIL ") << path << "\n";
    } else {
        std::cout << payload;
    }
    return res.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"learning-task reductions, half-space representations, and "
                 "Borsuk-Ulam experiments"};
    app.require_subcommand(1);

    // --- vc ---------------------------------------------------------------
    redlearn::cli::VcParams vc;
    OutputOptions vc_out;
    auto* vc_cmd = app.add_subcommand("vc", "VC and dual VC dimension of a class");
    vc_cmd->add_option("--class", vc.class_spec, "builtin (proj:d, 2hs1d) or JSON file")
        ->required();
    vc_cmd->add_option("--budget", vc.budget, "exhaustive search budget");
    add_output_options(vc_cmd, vc_out);

    // --- reduce-verify ------------------------------------------------------
    redlearn::cli::ReduceVerifyParams rv;
    OutputOptions rv_out;
    auto* rv_cmd = app.add_subcommand("reduce-verify", "verify a named reduction on a suite");
    rv_cmd->add_option("--reduction", rv.reduction, "trivial | hinge | hard-svm | nonconvex")
        ->required();
    rv_cmd->add_option("--dim", rv.dim, "source dimension for the SVM reductions");
    rv_cmd->add_option("--alpha", rv.alpha, "target optimality parameter");
    rv_cmd->add_option("--beta", rv.beta, "override the claimed beta(alpha)");
    rv_cmd->add_option("--slack", rv.slack, "certification slack");
    rv_cmd->add_option("--suite", rv.suite, "adversarial | mixture");
    rv_cmd->add_option("--suites", rv.suites, "number of suite distributions");
    rv_cmd->add_option("--atoms", rv.atoms, "atoms per mixture distribution");
    rv_cmd->add_option("--margin", rv.margin, "margin of the sampled suites");
    rv_cmd->add_option("--class", rv.class_spec, "source class for nonconvex");
    rv_cmd->add_option("--max-iters", rv.max_iters, "solver iteration budget");
    rv_cmd->add_option("--seed", rv.seed, "suite seed")->required();
    add_output_options(rv_cmd, rv_out);

    // --- random-projection ---------------------------------------------------
    redlearn::cli::RandomProjectionParams rp;
    OutputOptions rp_out;
    auto* rp_cmd = app.add_subcommand("random-projection", "margin sign-flip rate experiment");
    rp_cmd->add_option("--gamma", rp.gamma, "margin");
    rp_cmd->add_option("--d", rp.d, "projection dimension");
    rp_cmd->add_option("--n", rp.n, "source sphere dimension");
    rp_cmd->add_option("--class", rp.class_spec, "margin:<n>:<gamma> (overrides --n/--gamma)");
    rp_cmd->add_option("--trials", rp.trials, "Monte Carlo trials per seed");
    rp_cmd->add_option("--seeds", rp.seed_count, "number of consecutive seeds");
    rp_cmd->add_option("--seed", rp.seed, "first seed")->required();
    add_output_options(rp_cmd, rp_out);

    // --- helly-cert -----------------------------------------------------------
    redlearn::cli::HellyParams hc;
    OutputOptions hc_out;
    auto* hc_cmd = app.add_subcommand("helly-cert", "Helly exactness certification");
    hc_cmd->add_option("--d", hc.d, "representation dimension");
    hc_cmd->add_option("--alpha", hc.alpha, "representation error (must be < 1/(d+1))");
    hc_cmd->add_option("--samples", hc.samples, "number of realizable samples");
    hc_cmd->add_option("--sample-size", hc.sample_size, "examples per sample");
    hc_cmd->add_flag("--planted", hc.planted, "run the planted-violation instance");
    hc_cmd->add_option("--seed", hc.seed, "fixture seed")->required();
    add_output_options(hc_cmd, hc_out);

    // --- extract-signrank ------------------------------------------------------
    redlearn::cli::ExtractParams ex;
    OutputOptions ex_out;
    auto* ex_cmd = app.add_subcommand("extract-signrank",
                                      "sign-rank witness from an exact hard-SVM reduction");
    ex_cmd->add_option("--class", ex.class_spec, "builtin (2hs1d, proj:d) or JSON file");
    add_output_options(ex_cmd, ex_out);

    // --- bu-demo ---------------------------------------------------------------
    redlearn::cli::BuDemoParams bu;
    OutputOptions bu_out;
    auto* bu_cmd = app.add_subcommand("bu-demo", "antipodal collision search on cover maps");
    bu_cmd->add_option("--d", bu.d, "sphere dimension");
    bu_cmd->add_option("--k", bu.k, "assignment dimension");
    bu_cmd->add_option("--delta", bu.delta, "cover radius (0 picks a default)");
    bu_cmd->add_option("--instances", bu.instances, "number of random covers");
    bu_cmd->add_flag("--identity", bu.identity, "identity-like assignments w_t = t (k = d+1)");
    bu_cmd->add_option("--tol", bu.tol, "collision tolerance");
    bu_cmd->add_option("--restarts", bu.restarts, "search restarts");
    bu_cmd->add_option("--seed", bu.seed, "instance seed")->required();
    add_output_options(bu_cmd, bu_out);

    // --- majority3-check ----------------------------------------------------------
    redlearn::cli::Majority3Params m3;
    OutputOptions m3_out;
    auto* m3_cmd = app.add_subcommand("majority3-check", "majority-of-3 identity representation");
    m3_cmd->add_option("--instances", m3.instances, "random instances");
    m3_cmd->add_option("--dim", m3.dim, "ambient dimension");
    m3_cmd->add_flag("--planted,!--no-planted", m3.include_planted,
                     "include the tight 3-atom instance");
    m3_cmd->add_option("--seed", m3.seed, "instance seed")->required();
    add_output_options(m3_cmd, m3_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*vc_cmd) {
            if (!vc_out.config.empty()) {
                const Json j = load_config(vc_out.config);
                cfg_get(j, "class", vc.class_spec);
                cfg_get(j, "budget", vc.budget);
            }
            return emit(redlearn::cli::cmd_vc(vc), vc_out);
        }
        if (*rv_cmd) {
            if (!rv_out.config.empty()) {
                const Json j = load_config(rv_out.config);
                cfg_get(j, "reduction", rv.reduction);
                cfg_get(j, "dim", rv.dim);
                cfg_get(j, "alpha", rv.alpha);
                cfg_get(j, "beta", rv.beta);
                cfg_get(j, "slack", rv.slack);
                cfg_get(j, "suite", rv.suite);
                cfg_get(j, "suites", rv.suites);
                cfg_get(j, "atoms", rv.atoms);
                cfg_get(j, "margin", rv.margin);
                cfg_get(j, "class", rv.class_spec);
                cfg_get(j, "max_iters", rv.max_iters);
                cfg_get(j, "seed", rv.seed);
            }
            return emit(redlearn::cli::cmd_reduce_verify(rv), rv_out);
        }
        if (*rp_cmd) {
            if (!rp_out.config.empty()) {
                const Json j = load_config(rp_out.config);
                cfg_get(j, "gamma", rp.gamma);
                cfg_get(j, "d", rp.d);
                cfg_get(j, "n", rp.n);
                cfg_get(j, "class", rp.class_spec);
                cfg_get(j, "trials", rp.trials);
                cfg_get(j, "seeds", rp.seed_count);
                cfg_get(j, "seed", rp.seed);
            }
            return emit(redlearn::cli::cmd_random_projection(rp), rp_out);
        }
        if (*hc_cmd) {
            if (!hc_out.config.empty()) {
                const Json j = load_config(hc_out.config);
                cfg_get(j, "d", hc.d);
                cfg_get(j, "alpha", hc.alpha);
                cfg_get(j, "samples", hc.samples);
                cfg_get(j, "sample_size", hc.sample_size);
                cfg_get(j, "planted", hc.planted);
                cfg_get(j, "seed", hc.seed);
            }
            return emit(redlearn::cli::cmd_helly_cert(hc), hc_out);
        }
        if (*ex_cmd) {
            if (!ex_out.config.empty()) {
                const Json j = load_config(ex_out.config);
                cfg_get(j, "class", ex.class_spec);
            }
            return emit(redlearn::cli::cmd_extract_signrank(ex), ex_out);
        }
        if (*bu_cmd) {
            if (!bu_out.config.empty()) {
                const Json j = load_config(bu_out.config);
                cfg_get(j, "d", bu.d);
                cfg_get(j, "k", bu.k);
                cfg_get(j, "delta", bu.delta);
                cfg_get(j, "instances", bu.instances);
                cfg_get(j, "identity", bu.identity);
                cfg_get(j, "tol", bu.tol);
                cfg_get(j, "restarts", bu.restarts);
                cfg_get(j, "seed", bu.seed);
            }
            return emit(redlearn::cli::cmd_bu_demo(bu), bu_out);
        }
        if (*m3_cmd) {
            if (!m3_out.config.empty()) {
                const Json j = load_config(m3_out.config);
                cfg_get(j, "instances", m3.instances);
                cfg_get(j, "dim", m3.dim);
                cfg_get(j, "planted", m3.include_planted);
                cfg_get(j, "seed", m3.seed);
            }
            return emit(redlearn::cli::cmd_majority3_check(m3), m3_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
