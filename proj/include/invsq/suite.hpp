#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "invsq/harness.hpp"
#include "invsq/morawetz.hpp"

namespace invsq {

// Flat run configuration; every key has a CLI flag override.
struct RunConfig {
    std::vector<std::pair<int, double>> params{{3, 1.0}};  // (d, a)
    std::vector<double> s_grid{0.5, 1.0};
    std::vector<double> p_grid{2.0};
    std::vector<double> alpha_grid{0.5};
    std::vector<double> eps_grid{0.25};
    std::vector<std::string> weights{"one"};  // "one", "power:<alpha>", "composite:<eps>"
    std::uint64_t seed = 20240901;
    int family_size = 40;
    int smoothing_members = 8;
    double T = 100.0;
    double scan_c = 8.0;
    double offdiag_c = 16.0;
    std::string out_dir = "certificates";
    bool quick = false;
    GridConfig grid = GridConfig::preset_default();
    ScanGrid scan;

    static RunConfig preset_quick();
    static RunConfig preset_full();
    void apply_preset_flags();  // applies quick shrinkage when quick=true
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);

WeightSpec parse_weight(const std::string& text);

// "windows" subcommand payload: all theorem windows at one (d, a, s)
nlohmann::json windows_table(int d, double a, double s);
std::string windows_text(const nlohmann::json& table);

nlohmann::json certificate_to_json(const Certificate& cert);
nlohmann::json scan_to_json(const BoundRatioReport& rep, const ModelParams& params);
nlohmann::json smoothing_to_json(const SmoothingReport& rep);

struct SuiteOutcome {
    int total = 0;
    int passed = 0;
    int failed = 0;
    int invalid = 0;  // combinations rejected by window/admissibility checks

    void absorb(const SuiteOutcome& o) {
        total += o.total;
        passed += o.passed;
        failed += o.failed;
        invalid += o.invalid;
    }
};

// Runs one named suite; writes certificate JSONs and returns tallies.
// Names: kernel-bounds, hardy, equivalence, square, difference, morawetz, all.
SuiteOutcome run_suite(const std::string& name, const RunConfig& cfg);

// exit code 0/1 from tallies
int exit_code(const SuiteOutcome& o);

// Aggregates every certificate JSON under dir into summary.md / summary.csv;
// returns false when the directory holds no certificates.
bool write_report(const std::filesystem::path& dir);

}  // namespace invsq
