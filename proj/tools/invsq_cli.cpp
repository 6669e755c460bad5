#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "invsq/suite.hpp"

using namespace invsq;

int main(int argc, char** argv) {
    CLI::App app{"invsq - spectral verification toolkit for Schrodinger operators with "
                 "inverse-square potentials"};
    app.require_subcommand(1);

    // windows
    auto* w = app.add_subcommand("windows", "print exponent windows and weight-class indices");
    int wd = 3;
    double wa = 0.0, ws = 1.0;
    bool wjson = false;
    w->add_option("--d", wd, "dimension (>= 3)");
    w->add_option("--a", wa, "coupling");
    w->add_option("--s", ws, "fractional order");
    w->add_flag("--json", wjson, "emit JSON instead of text");

    // verify
    auto* v = app.add_subcommand("verify", "run a verification suite and write certificates");
    std::string suite = "all", config_path, out_dir, weight_flag;
    bool quick = false, full = false;
    std::vector<int> vd;
    std::vector<double> va, vs, vp, valpha, veps;
    double vT = -1.0, vseed = -1.0;
    v->add_option("suite", suite,
                  "kernel-bounds|hardy|equivalence|square|difference|morawetz|all");
    v->add_option("--config", config_path, "JSON config file (flags override)");
    v->add_option("--d", vd, "dimensions");
    v->add_option("--a", va, "couplings (paired with --d by index)");
    v->add_option("--s", vs, "s grid");
    v->add_option("--p", vp, "p grid");
    v->add_option("--alpha", valpha, "alpha grid");
    v->add_option("--eps", veps, "eps grid");
    v->add_option("--weight", weight_flag, "one|power:<alpha>|composite:<eps>");
    v->add_option("--seed", vseed, "family seed");
    v->add_option("--T", vT, "time truncation for smoothing estimates");
    v->add_option("--out", out_dir, "output directory for certificates");
    v->add_flag("--quick", quick, "reduced preset (CI scale)");
    v->add_flag("--full", full, "thorough preset");

    // report
    auto* r = app.add_subcommand("report", "aggregate certificates into a summary");
    std::string rep_dir = "certificates";
    r->add_option("dir", rep_dir, "directory containing certificate JSONs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (w->parsed()) {
            const auto table = windows_table(wd, wa, ws);
            if (wjson)
                std::cout << table.dump(2) << "\n";
            else
                std::cout << windows_text(table);
            return 0;
        }
        if (v->parsed()) {
            RunConfig cfg;
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) {
                    std::cerr << "error: cannot open config " << config_path << "\n";
                    return 2;
                }
                nlohmann::json j;
                in >> j;
                cfg = config_from_json(j);
            } else if (full) {
                cfg = RunConfig::preset_full();
            }
            if (quick) {
                cfg.quick = true;
                cfg.apply_preset_flags();
            }
            if (!vd.empty()) {
                if (va.size() != vd.size()) {
                    std::cerr << "error: --d and --a need the same count\n";
                    return 2;
                }
                cfg.params.clear();
                for (std::size_t i = 0; i < vd.size(); ++i)
                    cfg.params.emplace_back(vd[i], va[i]);
            }
            if (!vs.empty()) cfg.s_grid = vs;
            if (!vp.empty()) cfg.p_grid = vp;
            if (!valpha.empty()) cfg.alpha_grid = valpha;
            if (!veps.empty()) cfg.eps_grid = veps;
            if (!weight_flag.empty()) cfg.weights = {weight_flag};
            if (vseed >= 0.0) cfg.seed = static_cast<std::uint64_t>(vseed);
            if (vT > 0.0) cfg.T = vT;
            if (!out_dir.empty()) cfg.out_dir = out_dir;

            const SuiteOutcome o = run_suite(suite, cfg);
            std::cout << "certificates: " << o.total << "  pass: " << o.passed
                      << "  fail: " << o.failed << "  invalid: " << o.invalid << "\n";
            return exit_code(o);
        }
        if (r->parsed()) {
            if (!write_report(rep_dir)) {
                std::cerr << "error: no certificates found in " << rep_dir << "\n";
                return 2;
            }
            std::cout << "wrote " << rep_dir << "/summary.md and report.csv\n";
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
