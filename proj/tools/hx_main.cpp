// hx - command line front end: identity/trace verification suites, inequality
// (ratio) suites per theorem group, and Poisson extension dumps.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hx/harness.hpp"
#include "hx/io.hpp"

namespace {

int run_verify(const std::string& suite, int dim, int grid, std::uint64_t seed, int levels, int trials,
               const std::string& out) {
    hx::TrialConfig cfg;
    cfg.suite = suite;
    cfg.dim = dim;
    cfg.grid = grid;
    cfg.seed = seed;
    cfg.levels = levels;
    cfg.trials = trials;

    bool all_pass = true;
    nlohmann::json j;
    if (suite == "identities") {
        const auto ids = hx::run_identity_suite(cfg);
        for (const auto& r : ids) {
            std::printf("[%s] %-44s residual=%.3e tol=%.1e\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.residual,
                        r.tolerance);
            all_pass = all_pass && r.pass;
        }
        j = hx::identity_report_to_json(cfg, ids);
    } else if (suite == "trace") {
        const auto res = hx::run_trace_equivalence(cfg);
        for (const auto& r : res) {
            std::printf("[%s] %-28s ratio=[%.4g, %.4g] spread=%.3g shift=%.2f%% excluded=%d\n",
                        r.pass ? "PASS" : "FAIL", r.name.c_str(), r.ratio_min, r.ratio_max, r.spread(),
                        100.0 * r.stability(), r.excluded);
            all_pass = all_pass && r.pass;
        }
        j = hx::trace_report_to_json(cfg, res);
    } else {
        std::fprintf(stderr, "unknown verify suite '%s' (use identities|trace)\n", suite.c_str());
        return 2;
    }
    if (!out.empty()) hx::write_json(j, out);
    return all_pass ? 0 : 1;
}

int run_estimate_group(const std::string& group, const std::string& params, int trials, std::uint64_t seed, int grid,
                       const std::string& out, const std::string& csv) {
    hx::TrialConfig base;
    if (!params.empty()) base = hx::load_config(params);
    if (trials > 0) base.trials = trials;
    if (seed != 0) base.seed = seed;
    if (grid > 0) base.grid = grid;

    const auto forms = hx::estimate_group_forms(group);
    nlohmann::json out_json = nlohmann::json::array();
    std::string all_csv;
    bool ok = true;
    for (const auto& name : forms) {
        hx::TrialConfig cfg = base;
        cfg.suite = name;
        cfg.dim = hx::estimate_form(name).dim;
        const hx::EstimateReport rep = hx::run_estimate(cfg);
        const bool stable = std::isnan(rep.aggregate.stability) || rep.aggregate.stability < 0.30;
        ok = ok && stable;
        std::printf("[%s] %-18s trials=%zu degenerate=%d max=%.4g median=%.4g stability=%.2f%%\n",
                    stable ? "PASS" : "FAIL", name.c_str(), rep.trials.size(), rep.degenerate, rep.aggregate.max,
                    rep.aggregate.median, 100.0 * rep.aggregate.stability);
        out_json.push_back(hx::report_to_json(rep));
        all_csv += hx::report_csv(rep);
    }
    if (!out.empty()) hx::write_json(out_json.size() == 1 ? out_json[0] : out_json, out);
    if (!csv.empty()) hx::write_text(all_csv, csv);
    return ok ? 0 : 1;
}

int run_extend(const std::string& in, double s, const std::string& out, int levels) {
    const hx::GridFunction f = hx::load_grid_function(in);
    const hx::TGrid tg = hx::TGrid::standard(f.spec(), levels);
    const hx::ExtensionField E = hx::extend(f, s, tg);
    hx::dump_extension(E, out);
    std::printf("extended %s (n=%d N=%d) with s=%g to %d levels -> %s\n", in.c_str(), f.spec().dim, f.spec().points,
                s, E.levels(), out.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"half-space extension laboratory"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "run the identity or trace-equivalence suite");
    std::string vsuite = "identities", vout;
    int vdim = 1, vgrid = 0, vlevels = 96, vtrials = 0;
    std::uint64_t vseed = 1;
    verify->add_option("--suite", vsuite, "identities|trace");
    verify->add_option("--n", vdim, "dimension (1 or 2)");
    verify->add_option("--grid", vgrid, "points per axis (power of two)");
    verify->add_option("--seed", vseed, "base seed");
    verify->add_option("--levels", vlevels, "t-levels");
    verify->add_option("--trials", vtrials, "trial count (trace)");
    verify->add_option("--out", vout, "report JSON path");

    auto* est = app.add_subcommand("estimate", "run inequality ratio suites for a theorem group");
    std::string egroup, eparams, eout, ecsv;
    int etrials = 0, egrid = 0;
    std::uint64_t eseed = 0;
    est->add_option("group", egroup, "crw|chanillo|cmcim|leibniz|dalio|jacobian|divcurl|double or a form name")
        ->required();
    est->add_option("--params", eparams, "config JSON (TrialConfig fields)");
    est->add_option("--trials", etrials, "trial count");
    est->add_option("--seed", eseed, "base seed");
    est->add_option("--grid", egrid, "points per axis");
    est->add_option("--out", eout, "report JSON path");
    est->add_option("--csv", ecsv, "ratio table CSV path");

    auto* ext = app.add_subcommand("extend", "extend a dumped GridFunction to the half-space");
    std::string xin, xout;
    double xs = 1.0;
    int xlevels = 96;
    ext->add_option("--in", xin, "input GridFunction dump")->required();
    ext->add_option("--s", xs, "extension order s in (0,2)")->required();
    ext->add_option("--out", xout, "output directory")->required();
    ext->add_option("--levels", xlevels, "t-levels");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return run_verify(vsuite, vdim, vgrid, vseed, vlevels, vtrials, vout);
        if (est->parsed()) return run_estimate_group(egroup, eparams, etrials, eseed, egrid, eout, ecsv);
        if (ext->parsed()) return run_extend(xin, xs, xout, xlevels);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
