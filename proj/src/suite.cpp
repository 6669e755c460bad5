#include "invsq/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace invsq {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string now_iso() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
    return buf;
}

std::string slug(std::string s) {
    for (auto& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '-';
    while (s.find("--") != std::string::npos) s.erase(s.find("--"), 1);
    return s;
}

void atomic_write(const fs::path& path, const ojson& j) {
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        out << j.dump(2) << "\n";
    }
    fs::rename(tmp, path);
}

ojson window_to_json(const WindowSpec& w) {
    ojson j;
    j["theorem"] = theorem_name(w.theorem_id);
    j["p_lower"] = w.p_lower.value();
    j["p_upper"] = w.p_upper.is_inf() ? ojson("inf") : ojson(w.p_upper.value());
    j["ap_index"] = w.ap_index.value();
    j["rh_index"] = w.rh_index.is_inf() ? ojson("inf") : ojson(w.rh_index.value());
    j["valid"] = w.valid;
    if (!w.reason.empty()) j["reason"] = w.reason;
    return j;
}

}  // namespace

RunConfig RunConfig::preset_quick() {
    RunConfig c;
    c.quick = true;
    c.apply_preset_flags();
    return c;
}

RunConfig RunConfig::preset_full() {
    RunConfig c;
    c.params = {{3, -0.2}, {3, 0.0}, {3, 1.0}, {3, 2.0}, {4, -1.0}, {4, 0.0},
                {4, 5.0},  {5, -0.5}, {5, 0.0}, {5, 1.0}};
    c.s_grid = {0.25, 0.5, 1.0, 1.5};
    c.p_grid = {2.0, 2.5};
    c.alpha_grid = {0.25, 0.5, 0.75};
    c.eps_grid = {0.1, 0.25, 0.5, 0.9};
    c.weights = {"one", "power:-1", "power:0.3", "composite:0.5"};
    return c;
}

void RunConfig::apply_preset_flags() {
    if (!quick) return;
    params = {{3, 1.0}, {4, 0.0}};
    s_grid = {0.5, 1.0};
    p_grid = {2.0};
    alpha_grid = {0.5};
    eps_grid = {0.25};
    weights = {"one"};
    family_size = 12;
    smoothing_members = 3;
    T = 25.0;
    grid = GridConfig::preset_quick();
    scan.n_t = 5;
    scan.n_r = 6;
}

WeightSpec parse_weight(const std::string& text) {
    if (text == "one" || text == "1") return WeightSpec::one();
    if (text.rfind("power:", 0) == 0) return WeightSpec::power(std::stod(text.substr(6)));
    if (text.rfind("composite:", 0) == 0)
        return WeightSpec::composite(std::stod(text.substr(10)));
    throw std::invalid_argument("parse_weight: expected one|power:<alpha>|composite:<eps>");
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    if (j.contains("quick")) c.quick = j.at("quick").get<bool>();
    c.apply_preset_flags();
    if (j.contains("params")) {
        c.params.clear();
        for (const auto& row : j.at("params"))
            c.params.emplace_back(row.at(0).get<int>(), row.at(1).get<double>());
    }
    auto grab = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    grab("s_grid", c.s_grid);
    grab("p_grid", c.p_grid);
    grab("alpha_grid", c.alpha_grid);
    grab("eps_grid", c.eps_grid);
    grab("weights", c.weights);
    grab("seed", c.seed);
    grab("family_size", c.family_size);
    grab("smoothing_members", c.smoothing_members);
    grab("T", c.T);
    grab("scan_c", c.scan_c);
    grab("offdiag_c", c.offdiag_c);
    grab("out_dir", c.out_dir);
    if (j.contains("grid_base_nodes")) c.grid.base_nodes = j.at("grid_base_nodes").get<int>();
    if (j.contains("scan_n_t")) c.scan.n_t = j.at("scan_n_t").get<int>();
    if (j.contains("scan_n_r")) c.scan.n_r = j.at("scan_n_r").get<int>();
    return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
    ojson j;
    j["quick"] = c.quick;
    j["params"] = c.params;
    j["s_grid"] = c.s_grid;
    j["p_grid"] = c.p_grid;
    j["alpha_grid"] = c.alpha_grid;
    j["eps_grid"] = c.eps_grid;
    j["weights"] = c.weights;
    j["seed"] = c.seed;
    j["family_size"] = c.family_size;
    j["smoothing_members"] = c.smoothing_members;
    j["T"] = c.T;
    j["scan_c"] = c.scan_c;
    j["offdiag_c"] = c.offdiag_c;
    j["out_dir"] = c.out_dir;
    j["grid_base_nodes"] = c.grid.base_nodes;
    j["scan_n_t"] = c.scan.n_t;
    j["scan_n_r"] = c.scan.n_r;
    return j;
}

nlohmann::json windows_table(int d, double a, double s) {
    const ModelParams params = make_params(d, a);
    ojson out;
    out["d"] = d;
    out["a"] = a;
    out["s"] = s;
    out["sigma"] = params.sigma;
    out["nu0"] = params.nu0;
    out["delta"] = params.delta;
    if (params.eps_star) out["eps_star"] = *params.eps_star;
    ojson rows = ojson::array();
    for (TheoremId id : {TheoremId::equiv_forward, TheoremId::equiv_reverse, TheoremId::hardy,
                         TheoremId::square, TheoremId::difference})
        rows.push_back(window_to_json(window(params, s, id)));
    out["windows"] = rows;
    return out;
}

std::string windows_text(const nlohmann::json& t) {
    std::ostringstream os;
    os << "d=" << t.at("d") << " a=" << t.at("a") << " s=" << t.at("s")
       << "  sigma=" << t.at("sigma").get<double>() << " nu0=" << t.at("nu0").get<double>()
       << " delta=" << t.at("delta").get<double>() << "\n";
    os << "  theorem         p_lower    p_upper    A-index    RH-index  valid\n";
    for (const auto& row : t.at("windows")) {
        auto num = [](const nlohmann::json& v) {
            return v.is_string() ? v.get<std::string>() : std::to_string(v.get<double>());
        };
        os << "  " << row.at("theorem").get<std::string>();
        for (std::size_t i = row.at("theorem").get<std::string>().size(); i < 16; ++i) os << ' ';
        os << num(row.at("p_lower")) << "  " << num(row.at("p_upper")) << "  "
           << num(row.at("ap_index")) << "  " << num(row.at("rh_index")) << "  "
           << (row.at("valid").get<bool>() ? "yes" : "no");
        if (row.contains("reason")) os << "  (" << row.at("reason").get<std::string>() << ")";
        os << "\n";
    }
    return os.str();
}

nlohmann::json certificate_to_json(const Certificate& cert) {
    ojson j;
    j["schema"] = "certificate_v1";
    j["inequality_id"] = cert.inequality_id;
    j["status"] = cert.pass ? "pass" : "fail";
    j["scope"] = cert.scope;
    ojson p;
    p["d"] = cert.d;
    p["a"] = cert.a;
    if (cert.s) p["s"] = *cert.s;
    if (cert.p) p["p"] = *cert.p;
    if (cert.alpha) p["alpha"] = *cert.alpha;
    if (cert.eps) p["eps"] = *cert.eps;
    p["weight"] = cert.weight;
    j["params"] = p;
    if (cert.window_applicable) j["window"] = window_to_json(cert.window_used);
    j["seed"] = cert.seed;
    j["family_size"] = cert.family_size;
    j["max_ratio"] = cert.max_ratio;
    j["argmax_index"] = cert.argmax_index;
    if (cert.max_ratio_reverse) j["max_ratio_reverse"] = *cert.max_ratio_reverse;
    j["threshold"] = cert.threshold;
    j["saturation_growth"] = cert.saturation_growth;
    j["refinement_drift"] = cert.refinement_drift;
    j["route_agreement_max"] = cert.route_agreement_max;
    j["grid_key"] = cert.grid_key;
    j["roundtrip_defect"] = cert.roundtrip_defect;
    if (!cert.note.empty()) j["note"] = cert.note;
    ojson rows = ojson::array();
    for (const auto& r : cert.rows) {
        ojson row;
        row["i"] = r.index;
        if (r.excluded) {
            row["excluded"] = true;
        } else {
            row["lhs"] = r.lhs;
            row["rhs"] = r.rhs;
            row["ratio"] = r.ratio;
            if (r.route_disagreement > 0.0) row["route"] = r.route_disagreement;
        }
        rows.push_back(row);
    }
    j["members"] = rows;
    j["trajectory"] = cert.trajectory;
    j["timestamp"] = now_iso();
    return j;
}

nlohmann::json scan_to_json(const BoundRatioReport& rep, const ModelParams& params) {
    ojson j;
    j["schema"] = "certificate_v1";
    std::string kind;
    switch (rep.kind) {
        case ScanKind::mszz_heat: kind = "heat"; break;
        case ScanKind::ptk: kind = "derivative"; break;
        case ScanKind::complex_time: kind = "complex"; break;
        case ScanKind::difference_a_pos: kind = "difference_pos"; break;
        case ScanKind::difference_a_neg: kind = "difference_neg"; break;
    }
    j["inequality_id"] = "scan_" + kind;
    const bool pass = rep.stable && std::isfinite(rep.sup_ratio);
    j["status"] = pass ? "pass" : "fail";
    j["scope"] = "radial/zonal sector";
    ojson p;
    p["d"] = params.d;
    p["a"] = params.a;
    j["params"] = p;
    j["C_est"] = rep.sup_ratio;
    j["c"] = rep.c_used;
    j["max_ratio"] = rep.sup_ratio;
    j["refinement_drift"] = rep.refinement_drift;
    j["truncation_tail"] = rep.truncation_tail;
    j["grid"] = rep.grid_description;
    j["points"] = rep.points;
    ojson arg;
    arg["t_re"] = rep.arg_sup.t.real();
    arg["t_im"] = rep.arg_sup.t.imag();
    arg["r"] = rep.arg_sup.r;
    arg["rho"] = rep.arg_sup.rho;
    arg["cos_theta"] = rep.arg_sup.cos_theta;
    j["arg_sup"] = arg;
    j["timestamp"] = now_iso();
    return j;
}

nlohmann::json smoothing_to_json(const SmoothingReport& rep) {
    ojson j;
    j["schema"] = "certificate_v1";
    j["inequality_id"] = "smoothing_" + smoothing_name(rep.estimate_id);
    const bool pass = std::isfinite(rep.ratio) && rep.drift < 0.05;
    j["status"] = pass ? "pass" : "fail";
    j["scope"] = "radial sector";
    ojson p;
    p["d"] = rep.d;
    p["a"] = rep.a;
    p["eps"] = rep.eps;
    j["params"] = p;
    j["T"] = rep.T;
    j["lhs"] = rep.lhs;
    j["rhs"] = rep.rhs;
    j["max_ratio"] = rep.ratio;
    j["lhs_2T"] = rep.lhs_2T;
    j["refinement_drift"] = rep.drift;
    j["t_infinity"] = rep.t_infinity;
    j["member_index"] = rep.member_index;
    j["timestamp"] = now_iso();
    return j;
}

namespace {

struct SuiteRunner {
    const RunConfig& cfg;
    fs::path out;
    SuiteOutcome tally;
    std::map<std::string, VerifyContext> contexts;

    explicit SuiteRunner(const RunConfig& c) : cfg(c), out(c.out_dir) {}

    VerifyContext& context(const ModelParams& params) {
        const std::string key = cfg.grid.cache_key(params.d, params.nu0);
        auto it = contexts.find(key);
        if (it == contexts.end())
            it = contexts.emplace(key, make_context(params, cfg.grid)).first;
        return it->second;
    }

    void record(const ojson& j, const std::string& name) {
        atomic_write(out / (slug(name) + ".json"), j);
        ++tally.total;
        const auto status = j.at("status").get<std::string>();
        if (status == "pass")
            ++tally.passed;
        else if (status == "fail")
            ++tally.failed;
        else
            ++tally.invalid;
    }

    void record_invalid(const std::string& id, const ModelParams& params, const std::string& why,
                        const std::string& name) {
        ojson j;
        j["schema"] = "certificate_v1";
        j["inequality_id"] = id;
        j["status"] = "invalid";
        ojson p;
        p["d"] = params.d;
        p["a"] = params.a;
        j["params"] = p;
        j["note"] = why;
        j["timestamp"] = now_iso();
        record(j, name);
    }

    std::string name_for(const std::string& id, const ModelParams& params, double s, double p,
                         const std::string& w) {
        std::ostringstream os;
        os << id << "_d" << params.d << "_a" << params.a << "_s" << s << "_p" << p << "_" << w;
        return os.str();
    }

    void kernel_bounds() {
        for (const auto& [d, a] : cfg.params) {
            const ModelParams params = make_params(d, a);
            std::ostringstream tag;
            tag << "_d" << d << "_a" << a;
            auto scan_one = [&](ScanKind kind, const char* label) {
                BoundRatioReport rep = bound_ratio_scan(kind, params, cfg.scan_c, cfg.scan);
                record(scan_to_json(rep, params), std::string("scan_") + label + tag.str());
            };
            scan_one(ScanKind::mszz_heat, "heat");
            scan_one(ScanKind::ptk, "derivative");
            scan_one(ScanKind::complex_time, "complex");
            if (a >= 0.0)
                scan_one(ScanKind::difference_a_pos, "difference");
            else
                scan_one(ScanKind::difference_a_neg, "difference");

            // off-diagonal sweep on the first family member
            auto& ctx = context(params);
            TestFamily fam = make_family(*ctx.plan, cfg.seed, 1);
            double worst = 0.0;
            for (double t : {0.1, 1.0, 10.0})
                for (const auto& [e, f] :
                     std::vector<std::pair<Annulus, Annulus>>{{{1.0, 2.0}, {4.0, 8.0}},
                                                              {{0.5, 1.0}, {2.0, 4.0}}})
                    worst = std::max(worst, offdiagonal_check(*ctx.plan, params, t, e, f, 2.0, 2.0,
                                                              fam.members[0], cfg.offdiag_c));
            ojson j;
            j["schema"] = "certificate_v1";
            j["inequality_id"] = "offdiagonal";
            j["status"] = (std::isfinite(worst) && worst < 1e3) ? "pass" : "fail";
            ojson p;
            p["d"] = d;
            p["a"] = a;
            j["params"] = p;
            j["max_ratio"] = worst;
            j["c"] = cfg.offdiag_c;
            j["timestamp"] = now_iso();
            record(j, "offdiagonal" + tag.str());
        }
        // potential convolution: per dimension
        std::vector<int> dims;
        for (const auto& [d, a] : cfg.params)
            if (std::find(dims.begin(), dims.end(), d) == dims.end()) dims.push_back(d);
        for (int d : dims) {
            PotentialConvolutionReport rep = potential_convolution_check(d, 4.0);
            ojson j;
            j["schema"] = "certificate_v1";
            j["inequality_id"] = "potential_convolution";
            j["status"] =
                (std::isfinite(rep.sup) && rep.refinement_drift < 0.05) ? "pass" : "fail";
            ojson p;
            p["d"] = d;
            j["params"] = p;
            j["max_ratio"] = rep.sup;
            j["arg_xi"] = rep.arg_xi;
            j["plateau"] = rep.plateau;
            j["plateau_limit"] = rep.plateau_limit;
            j["refinement_drift"] = rep.refinement_drift;
            j["timestamp"] = now_iso();
            record(j, "potential_convolution_d" + std::to_string(d));
        }
    }

    void hardy() {
        for (const auto& [d, a] : cfg.params) {
            const ModelParams params = make_params(d, a);
            for (double s : cfg.s_grid)
                for (double p : cfg.p_grid)
                    for (const auto& wname : cfg.weights) {
                        const WeightSpec w = parse_weight(wname);
                        const std::string name = name_for("hardy", params, s, p, wname);
                        const WindowSpec win = window(params, s, TheoremId::hardy);
                        if (!win.valid || !win.contains(Exponent(p))) {
                            record_invalid("hardy", params,
                                           win.valid ? "p outside window" : win.reason, name);
                            continue;
                        }
                        if (!weight_admissible(w, Exponent(p), win.ap_index, win.rh_index, d)
                                 .admissible) {
                            record_invalid("hardy", params, "weight not admissible", name);
                            continue;
                        }
                        VerifyOptions opt;
                        opt.seed = cfg.seed;
                        opt.family_size = cfg.family_size;
                        if (s == 1.0 && p == 2.0 && wname == "one")
                            opt.sharp = 1.0 / params.nu0;
                        Certificate cert = verify_hardy(context(params), s, p, w, opt);
                        record(certificate_to_json(cert), name);
                    }
        }
    }

    void equivalence() {
        for (const auto& [d, a] : cfg.params) {
            const ModelParams params = make_params(d, a);
            for (double s : cfg.s_grid)
                for (double p : cfg.p_grid)
                    for (const auto& wname : cfg.weights) {
                        const WeightSpec w = parse_weight(wname);
                        const std::string name = name_for("equivalence", params, s, p, wname);
                        try {
                            VerifyOptions opt;
                            opt.seed = cfg.seed;
                            opt.family_size = cfg.family_size;
                            Certificate cert = verify_equivalence(context(params), s, p, w, opt);
                            record(certificate_to_json(cert), name);
                        } catch (const std::domain_error& e) {
                            record_invalid("equivalence", params, e.what(), name);
                        }
                    }
        }
    }

    void square() {
        for (const auto& [d, a] : cfg.params) {
            const ModelParams params = make_params(d, a);
            for (double p : cfg.p_grid)
                for (const auto& wname : cfg.weights) {
                    const WeightSpec w = parse_weight(wname);
                    for (double alpha : cfg.alpha_grid) {
                        std::ostringstream nm;
                        nm << "square-alpha_d" << d << "_a" << a << "_al" << alpha << "_p" << p
                           << "_" << wname;
                        try {
                            VerifyOptions opt;
                            opt.seed = cfg.seed;
                            opt.family_size = cfg.family_size;
                            Certificate cert = verify_square_equiv(
                                context(params), SquareKind::alpha, alpha, p, w, opt);
                            record(certificate_to_json(cert), nm.str());
                        } catch (const std::domain_error& e) {
                            record_invalid("square_alpha", params, e.what(), nm.str());
                        }
                    }
                    for (double s : cfg.s_grid) {
                        std::ostringstream nm;
                        nm << "square-s_d" << d << "_a" << a << "_s" << s << "_p" << p << "_"
                           << wname;
                        try {
                            VerifyOptions opt;
                            opt.seed = cfg.seed;
                            opt.family_size = cfg.family_size;
                            Certificate cert = verify_square_equiv(
                                context(params), SquareKind::s_weighted, s, p, w, opt);
                            record(certificate_to_json(cert), nm.str());
                        } catch (const std::domain_error& e) {
                            record_invalid("square_s", params, e.what(), nm.str());
                        }
                    }
                }
        }
    }

    void difference() {
        for (const auto& [d, a] : cfg.params) {
            const ModelParams params = make_params(d, a);
            for (double s : cfg.s_grid)
                for (double p : cfg.p_grid)
                    for (const auto& wname : cfg.weights) {
                        const WeightSpec w = parse_weight(wname);
                        const std::string name = name_for("difference", params, s, p, wname);
                        try {
                            VerifyOptions opt;
                            opt.seed = cfg.seed;
                            opt.family_size = cfg.family_size;
                            Certificate cert =
                                verify_difference_square(context(params), s, p, w, opt);
                            record(certificate_to_json(cert), name);
                        } catch (const std::domain_error& e) {
                            record_invalid("difference", params, e.what(), name);
                        }
                    }
        }
    }

    void morawetz() {
        // exact pointwise inequalities of the virial weight, d-independent of
        // the run params
        {
            const auto grid = default_log_grid();
            double worst_beta = 0.0, worst_lap = 0.0;
            bool ok = true;
            for (int d = 3; d <= 10; ++d)
                for (double eps = 0.05; eps < 0.96; eps += 0.05) {
                    const auto vb = check_beta_bound(d, eps, grid);
                    const auto vl = check_lap_psi_bound(d, eps, grid);
                    ok = ok && vb.pass && vl.pass;
                    worst_beta = std::max(worst_beta, vb.max_value / vb.bound);
                    worst_lap = std::max(worst_lap, vl.max_value / vl.bound);
                }
            ojson j;
            j["schema"] = "certificate_v1";
            j["inequality_id"] = "psi_exact_bounds";
            j["status"] = ok ? "pass" : "fail";
            j["params"] = ojson::object();
            j["max_ratio"] = std::max(worst_beta, worst_lap);
            j["beta_margin"] = worst_beta;
            j["lap_margin"] = worst_lap;
            j["timestamp"] = now_iso();
            record(j, "psi_exact_bounds");
        }

        for (const auto& [d, a] : cfg.params) {
            const ModelParams params = make_params(d, a);
            auto& ctx = context(params);
            TestFamily fam = make_family(*ctx.plan, cfg.seed, std::max(cfg.smoothing_members, 3));
            std::ostringstream tag;
            tag << "_d" << d << "_a" << a;

            // virial residuals
            {
                double worst = 0.0;
                for (double eps : cfg.eps_grid)
                    for (double t0 : {0.1, 1.0})
                        for (int i = 0; i < std::min(3, fam.size()); ++i)
                            worst = std::max(
                                worst,
                                verify_virial(*ctx.plan, params, eps, fam.members[i], t0)
                                    .residual);
                ojson j;
                j["schema"] = "certificate_v1";
                j["inequality_id"] = "virial_residual";
                j["status"] = (worst <= 1e-5) ? "pass" : "fail";
                ojson p;
                p["d"] = d;
                p["a"] = a;
                j["params"] = p;
                j["max_ratio"] = worst;
                j["threshold"] = 1e-5;
                j["timestamp"] = now_iso();
                record(j, "virial" + tag.str());
            }
            // conservation
            {
                double worst = 0.0;
                bool consistent = true;
                for (double s : cfg.s_grid) {
                    const auto rep = conservation_check(*ctx.plan, *ctx.plan_free, s,
                                                        fam.members[0], {0.0, 1.0, 5.0, 25.0});
                    worst = std::max(worst, rep.max_la_deviation);
                    consistent = consistent && rep.consistent;
                }
                ojson j;
                j["schema"] = "certificate_v1";
                j["inequality_id"] = "conservation";
                j["status"] = (worst <= 1e-8 && consistent) ? "pass" : "fail";
                ojson p;
                p["d"] = d;
                p["a"] = a;
                j["params"] = p;
                j["max_ratio"] = worst;
                j["threshold"] = 1e-8;
                j["corridor_consistent"] = consistent;
                j["timestamp"] = now_iso();
                record(j, "conservation" + tag.str());
            }
            // bilinear form bound
            for (double eps : cfg.eps_grid) {
                const auto rep = bform_check(*ctx.plan_free, eps, fam);
                ojson j;
                j["schema"] = "certificate_v1";
                j["inequality_id"] = "bform";
                j["status"] = rep.pass ? "pass" : "fail";
                ojson p;
                p["d"] = d;
                p["a"] = a;
                p["eps"] = eps;
                j["params"] = p;
                j["max_ratio"] = rep.max_ratio;
                j["threshold"] = rep.bound + 1e-3;
                j["timestamp"] = now_iso();
                std::ostringstream nm;
                nm << "bform" << tag.str() << "_eps" << eps;
                record(j, nm.str());
            }
            // smoothing estimates
            std::vector<double> eps_list = cfg.eps_grid;
            if (params.eps_star) eps_list.insert(eps_list.begin(), *params.eps_star);
            for (double eps : eps_list) {
                const auto adm = smoothing_admissible(params, eps);
                if (!adm.admissible) {
                    std::ostringstream nm;
                    nm << "smoothing" << tag.str() << "_eps" << eps;
                    record_invalid("smoothing", params,
                                   adm.delta_positive ? "weight outside proven range"
                                                      : "delta <= 0: outside proven range",
                                   nm.str());
                    continue;
                }
                SmoothingEngine engine(ctx.plan, ctx.plan_free, eps);
                for (auto id :
                     {SmoothingId::firstest, SmoothingId::secondest, SmoothingId::thirdest}) {
                    double worst_ratio = 0.0, worst_drift = 0.0;
                    for (int i = 0; i < std::min(cfg.smoothing_members, fam.size()); ++i) {
                        SmoothingReport rep = engine.evaluate(id, fam.members[i], cfg.T);
                        rep.a = a;
                        rep.member_index = i;
                        worst_ratio = std::max(worst_ratio, rep.ratio);
                        worst_drift = std::max(worst_drift, rep.drift);
                        if (i == 0) {
                            std::ostringstream nm;
                            nm << "smoothing-" << smoothing_name(id) << tag.str() << "_eps" << eps;
                            record(smoothing_to_json(rep), nm.str());
                        }
                    }
                    (void)worst_ratio;
                    (void)worst_drift;
                }
            }
        }
    }

    void run(const std::string& name) {
        if (name == "kernel-bounds" || name == "all") kernel_bounds();
        if (name == "hardy" || name == "all") hardy();
        if (name == "equivalence" || name == "all") equivalence();
        if (name == "square" || name == "all") square();
        if (name == "difference" || name == "all") difference();
        if (name == "morawetz" || name == "all") morawetz();
    }
};

}  // namespace

SuiteOutcome run_suite(const std::string& name, const RunConfig& cfg) {
    static const std::vector<std::string> known{"kernel-bounds", "hardy",    "equivalence",
                                               "square",        "difference", "morawetz",
                                               "all"};
    if (std::find(known.begin(), known.end(), name) == known.end())
        throw std::invalid_argument("run_suite: unknown suite " + name);
    SuiteRunner runner(cfg);
    runner.run(name);

    // summary CSV, one row per certificate
    std::ofstream csv(fs::path(cfg.out_dir) / "summary.csv");
    csv << "file,inequality_id,status,d,a,max_ratio\n";
    for (const auto& entry : fs::directory_iterator(cfg.out_dir)) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        nlohmann::json j;
        in >> j;
        csv << entry.path().filename().string() << "," << j.value("inequality_id", "") << ","
            << j.value("status", "") << ",";
        if (j.contains("params") && j["params"].contains("d")) csv << j["params"]["d"].get<int>();
        csv << ",";
        if (j.contains("params") && j["params"].contains("a"))
            csv << j["params"]["a"].get<double>();
        csv << ",";
        if (j.contains("max_ratio")) csv << j["max_ratio"].get<double>();
        csv << "\n";
    }
    return runner.tally;
}

int exit_code(const SuiteOutcome& o) { return o.failed > 0 ? 1 : 0; }

bool write_report(const std::filesystem::path& dir) {
    struct Row {
        std::string id, status;
        double max_ratio = 0.0;
        nlohmann::json j;
    };
    std::vector<Row> rows;
    if (fs::exists(dir))
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.path().extension() != ".json") continue;
            std::ifstream in(entry.path());
            nlohmann::json j;
            try {
                in >> j;
            } catch (...) {
                continue;
            }
            if (j.value("schema", "") != "certificate_v1") continue;
            rows.push_back({j.value("inequality_id", "?"), j.value("status", "?"),
                            j.value("max_ratio", 0.0), j});
        }
    if (rows.empty()) return false;

    std::map<std::string, std::array<int, 3>> counts;  // pass, fail, invalid
    std::map<std::string, double> worst;
    for (const auto& r : rows) {
        auto& c = counts[r.id];
        if (r.status == "pass") ++c[0];
        else if (r.status == "fail") ++c[1];
        else ++c[2];
        worst[r.id] = std::max(worst[r.id], r.max_ratio);
    }

    std::ofstream md(dir / "summary.md");
    md << "# Verification summary\n\n";
    md << "All certificates cover the radial (and zonal, for kernel scans) sector.\n\n";
    md << "| inequality | pass | fail | invalid | max ratio / C_est |\n";
    md << "|---|---|---|---|---|\n";
    for (const auto& [id, c] : counts)
        md << "| " << id << " | " << c[0] << " | " << c[1] << " | " << c[2] << " | " << worst[id]
           << " |\n";
    md << "\nEmpirical constants are desk-scale estimates on the stated grids; see individual"
          " certificates for scan metadata.\n";

    std::ofstream csv(dir / "report.csv");
    csv << "inequality_id,status,max_ratio,d,a\n";
    for (const auto& r : rows) {
        csv << r.id << "," << r.status << "," << r.max_ratio << ",";
        if (r.j.contains("params") && r.j["params"].contains("d"))
            csv << r.j["params"]["d"].get<int>();
        csv << ",";
        if (r.j.contains("params") && r.j["params"].contains("a"))
            csv << r.j["params"]["a"].get<double>();
        csv << "\n";
    }
    return true;
}

}  // namespace invsq
