#include "invsq/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace invsq {

namespace {

// splitmix64: platform-independent stream so certificates are reproducible
struct SplitMix {
    std::uint64_t state;
    explicit SplitMix(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

struct MemberTerm {
    int m;
    double gamma, b;
    std::complex<double> c;
};

std::complex<double> eval_terms(const std::vector<MemberTerm>& terms, double r) {
    std::complex<double> v = 0.0;
    for (const auto& t : terms) {
        const double u = r - t.b;
        v += t.c * std::pow(r, t.m) * std::exp(-t.gamma * u * u);
    }
    return v;
}

std::vector<MemberTerm> draw_member(SplitMix& rng) {
    const int nterms = 1 + rng.uniform_int(3);
    std::vector<MemberTerm> terms;
    for (int j = 0; j < nterms; ++j) {
        MemberTerm t;
        t.m = rng.uniform_int(3);
        t.gamma = rng.uniform(0.2, 20.0);
        t.b = rng.uniform(0.0, 10.0);
        const double mod = std::sqrt(rng.uniform());
        const double ph = rng.uniform(0.0, 2.0 * M_PI);
        t.c = std::polar(mod, ph);
        terms.push_back(t);
    }
    return terms;
}

// descriptions stored alongside; needed to re-sample members on probe grids
struct FamilyWithTerms {
    TestFamily family;
    std::vector<std::vector<MemberTerm>> terms;
};

FamilyWithTerms make_family_with_terms(const HankelPlan& plan, std::uint64_t seed, int size) {
    SplitMix rng(seed);
    FamilyWithTerms out;
    out.family.seed = seed;
    const auto& grid = plan.radial();
    const auto& sg = *plan.spectral();
    const double lam_cut = 0.75 * sg.lambda_max();
    int trials = 0;
    while (out.family.size() < size) {
        if (++trials > 400 * size)
            throw std::runtime_error("make_family: rejection sampling exhausted");
        auto terms = draw_member(rng);
        RadialFunction f = make_radial_function(
            grid, [&](double r) { return eval_terms(terms, r); });
        const double n2 = l2_norm(f);
        if (!(n2 > 1e-6 && n2 < 1e6)) {
            ++out.family.rejected;
            continue;
        }
        Eigen::VectorXcd fhat = plan.forward(f);
        double tail = 0.0, total = 0.0;
        for (int j = 0; j < fhat.size(); ++j) {
            const double m = sg.weights[j] * std::norm(fhat[j]);
            total += m;
            if (sg.nodes[j] > lam_cut) tail += m;
        }
        if (!(total > 0.0) || std::sqrt(tail / total) > 1e-10) {
            ++out.family.rejected;
            continue;
        }
        out.family.members.push_back(std::move(f));
        out.family.spectra.push_back(std::move(fhat));
        out.terms.push_back(std::move(terms));
    }
    return out;
}

void finish_certificate(Certificate& cert, const VerifyOptions& opt) {
    cert.threshold = opt.sharp ? *opt.sharp + 1e-6 : opt.threshold;
    cert.trajectory.clear();
    double run = 0.0;
    int arg = -1;
    for (const auto& row : cert.rows) {
        if (!row.excluded && row.ratio > run) {
            run = row.ratio;
            arg = row.index;
        }
        cert.trajectory.push_back(run);
    }
    cert.max_ratio = run;
    cert.argmax_index = arg;
    const std::size_t half = cert.trajectory.size() / 2;
    if (half > 0 && cert.trajectory[half - 1] > 0.0) {
        cert.saturation_growth = cert.trajectory.back() / cert.trajectory[half - 1] - 1.0;
    }
    double worst_route = 0.0;
    for (const auto& row : cert.rows) worst_route = std::max(worst_route, row.route_disagreement);
    cert.route_agreement_max = worst_route;

    double secondary = cert.max_ratio_reverse ? *cert.max_ratio_reverse : 0.0;
    const bool finite = std::isfinite(cert.max_ratio) && std::isfinite(secondary);
    cert.pass = finite && cert.max_ratio <= cert.threshold && secondary <= cert.threshold &&
                cert.refinement_drift < 0.05 && cert.saturation_growth < 0.10 &&
                worst_route <= 1e-6;
    if (worst_route > 1e-6) cert.note += "[route disagreement] ";
}

double weighted_norm_or_inf(const RadialFunction& f, const WeightSpec& w, double p) {
    const double v = weighted_lp_norm(f, w, p);
    return v;
}

// lhs weight |x|^{-s} integrability at the origin for members that do not
// vanish there: needs alpha_eff + d - s p > 0
bool singular_norm_integrable(const WeightSpec& w, double s, double p, int d,
                              const RadialFunction& f) {
    double alpha_eff = 0.0;
    if (w.kind == WeightSpec::Kind::power) alpha_eff = w.alpha;
    if (w.kind == WeightSpec::Kind::composite) alpha_eff = w.eps - 1.0;
    if (alpha_eff + d - s * p > 0.0) return true;
    double fmax = 0.0;
    for (int i = 0; i < f.values.size(); ++i) fmax = std::max(fmax, std::abs(f.values[i]));
    return std::abs(f.values[0]) <= 1e-8 * fmax;
}

RadialFunction scale_by_power(const RadialFunction& f, double expo) {
    Eigen::VectorXcd v = f.values;
    for (int i = 0; i < v.size(); ++i) v[i] *= std::pow(f.grid->nodes[i], expo);
    return RadialFunction(f.grid, std::move(v));
}

}  // namespace

TestFamily make_family(const HankelPlan& plan, std::uint64_t seed, int size) {
    return make_family_with_terms(plan, seed, size).family;
}

VerifyContext make_context(const ModelParams& params, const GridConfig& cfg) {
    VerifyContext ctx;
    ctx.params = params;
    ctx.config = cfg;
    ctx.plan = build_plan(params, cfg);
    const double s0 = 0.5 * (params.d - 2);
    ctx.plan_free = (params.nu0 == s0) ? ctx.plan : build_free_plan(params.d, cfg);
    GridConfig probe = cfg;
    probe.base_nodes += 8;
    probe.pad += 6;
    probe.nodes_per_phase *= 1.3;
    ctx.plan_probe = build_plan(params, probe);
    ctx.plan_free_probe = (params.nu0 == s0) ? ctx.plan_probe : build_free_plan(params.d, probe);
    return ctx;
}

namespace {

// one Hardy-type member evaluation on a given pair of plans
struct HardyEval {
    double lhs, rhs, route;
    bool excluded;
};

HardyEval eval_hardy_member(const HankelPlan& plan, const RadialFunction& f, double s, double p,
                            const WeightSpec& w) {
    HardyEval ev{0, 0, 0, false};
    if (!singular_norm_integrable(w, s, p, plan.d(), f)) {
        ev.excluded = true;
        return ev;
    }
    RadialFunction num = scale_by_power(f, -s);
    RadialFunction den_mult = fractional_power_multiplier(plan, f, s, PowerDirection::positive);
    RadialFunction den_sub = fractional_power_subordination(plan, f, s, PowerDirection::positive);
    double diff2 = 0.0, ref2 = 0.0;
    for (int i = 0; i < den_mult.values.size(); ++i) {
        const double wq = plan.radial()->weights[i];
        diff2 += wq * std::norm(den_mult.values[i] - den_sub.values[i]);
        ref2 += wq * std::norm(den_mult.values[i]);
    }
    ev.route = std::sqrt(diff2 / std::max(ref2, 1e-300));
    ev.lhs = weighted_norm_or_inf(num, w, p);
    ev.rhs = weighted_norm_or_inf(den_mult, w, p);
    return ev;
}

}  // namespace

Certificate verify_hardy(const VerifyContext& ctx, double s, double p, const WeightSpec& w,
                         const VerifyOptions& opt) {
    const ModelParams& params = ctx.params;
    const WindowSpec win = window(params, s, TheoremId::hardy);
    if (!win.valid || !win.contains(Exponent(p)))
        throw std::domain_error("verify_hardy: (s, p) outside the theorem window: " + win.reason);
    const auto adm = weight_admissible(w, Exponent(p), win.ap_index, win.rh_index, params.d);
    if (!adm.admissible)
        throw std::domain_error("verify_hardy: weight not admissible (" + adm.detail + ")");

    auto fam = make_family_with_terms(*ctx.plan, opt.seed, opt.family_size);
    Certificate cert;
    cert.inequality_id = "hardy";
    cert.d = params.d;
    cert.a = params.a;
    cert.s = s;
    cert.p = p;
    cert.weight = w.description;
    cert.window_used = win;
    cert.window_applicable = true;
    cert.seed = opt.seed;
    cert.family_size = fam.family.size();
    cert.grid_key = ctx.config.cache_key(params.d, params.nu0);
    cert.roundtrip_defect = ctx.plan->roundtrip_defect();

    for (int i = 0; i < fam.family.size(); ++i) {
        const HardyEval ev = eval_hardy_member(*ctx.plan, fam.family.members[i], s, p, w);
        MemberRow row;
        row.index = i;
        row.excluded = ev.excluded;
        if (!ev.excluded) {
            row.lhs = ev.lhs;
            row.rhs = ev.rhs;
            row.ratio = (ev.rhs > 0.0) ? ev.lhs / ev.rhs : 0.0;
            row.route_disagreement = ev.route;
        }
        cert.rows.push_back(row);
    }

    // probe a few members on the refined plan
    double drift = 0.0;
    for (int i = 0; i < std::min<int>(ctx.drift_probe_members, fam.family.size()); ++i) {
        if (cert.rows[i].excluded || cert.rows[i].ratio == 0.0) continue;
        RadialFunction fp = make_radial_function(
            ctx.plan_probe->radial(), [&](double r) { return eval_terms(fam.terms[i], r); });
        const HardyEval ev = eval_hardy_member(*ctx.plan_probe, fp, s, p, w);
        if (!ev.excluded && ev.rhs > 0.0)
            drift = std::max(drift, std::abs(ev.lhs / ev.rhs - cert.rows[i].ratio) /
                                        cert.rows[i].ratio);
    }
    cert.refinement_drift = drift;
    finish_certificate(cert, opt);
    return cert;
}

namespace {

struct EquivEval {
    double free_norm, la_norm;
    bool ok;
};

EquivEval eval_equiv_member(const HankelPlan& plan_a, const HankelPlan& plan_free,
                            const RadialFunction& f, double s, double p, const WeightSpec& w) {
    EquivEval ev{0, 0, true};
    RadialFunction g_free = fractional_power_multiplier(plan_free, f, s, PowerDirection::positive);
    RadialFunction g_a = fractional_power_multiplier(plan_a, f, s, PowerDirection::positive);
    ev.free_norm = weighted_norm_or_inf(g_free, w, p);
    ev.la_norm = weighted_norm_or_inf(g_a, w, p);
    ev.ok = std::isfinite(ev.free_norm) && std::isfinite(ev.la_norm) && ev.la_norm > 0.0 &&
            ev.free_norm > 0.0;
    return ev;
}

}  // namespace

Certificate verify_equivalence(const VerifyContext& ctx, double s, double p, const WeightSpec& w,
                               const VerifyOptions& opt) {
    const ModelParams& params = ctx.params;
    const WindowSpec wf = window(params, s, TheoremId::equiv_forward);
    const WindowSpec wr = window(params, s, TheoremId::equiv_reverse);
    const bool fwd_ok = wf.valid && wf.contains(Exponent(p)) &&
                        weight_admissible(w, Exponent(p), wf.ap_index, wf.rh_index, params.d)
                            .admissible;
    const bool rev_ok = wr.valid && wr.contains(Exponent(p)) &&
                        weight_admissible(w, Exponent(p), wr.ap_index, wr.rh_index, params.d)
                            .admissible;
    if (!fwd_ok && !rev_ok)
        throw std::domain_error("verify_equivalence: neither direction is in scope for (s,p,w)");

    auto fam = make_family_with_terms(*ctx.plan, opt.seed, opt.family_size);
    Certificate cert;
    cert.inequality_id = "equivalence";
    cert.d = params.d;
    cert.a = params.a;
    cert.s = s;
    cert.p = p;
    cert.weight = w.description;
    cert.window_used = wf;
    cert.window_applicable = fwd_ok;
    cert.seed = opt.seed;
    cert.family_size = fam.family.size();
    cert.grid_key = ctx.config.cache_key(params.d, params.nu0);
    cert.roundtrip_defect = ctx.plan->roundtrip_defect();
    {
        std::ostringstream os;
        os << "directions in scope: " << (fwd_ok ? "forward " : "") << (rev_ok ? "reverse" : "")
           << "; ";
        cert.note = os.str();
    }

    double rev_max = 0.0;
    for (int i = 0; i < fam.family.size(); ++i) {
        const EquivEval ev =
            eval_equiv_member(*ctx.plan, *ctx.plan_free, fam.family.members[i], s, p, w);
        MemberRow row;
        row.index = i;
        if (!ev.ok) {
            row.excluded = true;
        } else {
            row.lhs = ev.free_norm;
            row.rhs = ev.la_norm;
            row.ratio = fwd_ok ? ev.free_norm / ev.la_norm : 0.0;
            if (rev_ok) rev_max = std::max(rev_max, ev.la_norm / ev.free_norm);
        }
        cert.rows.push_back(row);
    }
    if (rev_ok) cert.max_ratio_reverse = rev_max;

    double drift = 0.0;
    for (int i = 0; i < std::min<int>(ctx.drift_probe_members, fam.family.size()); ++i) {
        if (cert.rows[i].excluded) continue;
        RadialFunction fp = make_radial_function(
            ctx.plan_probe->radial(), [&](double r) { return eval_terms(fam.terms[i], r); });
        const EquivEval ev =
            eval_equiv_member(*ctx.plan_probe, *ctx.plan_free_probe, fp, s, p, w);
        if (ev.ok && cert.rows[i].rhs > 0.0 && fwd_ok && cert.rows[i].ratio > 0.0)
            drift = std::max(drift, std::abs(ev.free_norm / ev.la_norm - cert.rows[i].ratio) /
                                        cert.rows[i].ratio);
    }
    cert.refinement_drift = drift;
    finish_certificate(cert, opt);
    return cert;
}

double square_plancherel_scalar(SquareKind kind, double order, double lambda) {
    if (kind == SquareKind::alpha) {
        const double beta = 2.0 * (1.0 - order);
        return std::sqrt(specfun::gamma_fn(beta) * std::pow(2.0, -beta));
    }
    // s-weighted: lambda^{2s} * 2^{s-2} Gamma(2-s)
    const double s = order;
    return std::pow(lambda, s) * std::sqrt(std::pow(2.0, s - 2.0) * specfun::gamma_fn(2.0 - s));
}

Eigen::MatrixXd square_function_batch(const HankelPlan& plan, SquareKind kind, double order,
                                      const Eigen::MatrixXcd& spectra,
                                      const SquareFunctionConfig& cfg) {
    if (kind == SquareKind::alpha && !(order > 0.0 && order < 1.0))
        throw std::domain_error("square_function: alpha in (0,1)");
    if (kind == SquareKind::s_weighted && !(order > 0.0 && order < 2.0))
        throw std::domain_error("square_function: s in (0,2)");
    const auto& lam = plan.spectral()->nodes;
    const auto& wl = plan.spectral()->weights;
    const int nr = plan.radial()->size();
    const int k = static_cast<int>(spectra.cols());
    PanelRule rule = log_gl(cfg.t_lo, cfg.t_hi, cfg.panels_per_decade, cfg.nodes_per_panel);

    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(nr, k);
    Eigen::MatrixXd re(lam.size(), k), im(lam.size(), k);
    const Eigen::MatrixXd phiT = plan.basis().transpose();
    const double lam_max = plan.spectral()->boundaries.back();
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double t = rule.nodes[q];
        // multiplier peak over the grid; skip t-nodes that cannot contribute
        const double peak = [&] {
            const double u_star = (kind == SquareKind::alpha) ? (1.0 - order) : 1.0;
            const double u_max = t * lam_max * lam_max;
            const double u = std::min(u_star, u_max);
            const double m = std::pow(u, (kind == SquareKind::alpha) ? (1.0 - order) : 1.0) *
                             std::exp(-u);
            return (kind == SquareKind::s_weighted) ? m * std::pow(t, -0.5 * order) : m;
        }();
        if (peak < 1e-14) continue;
        const double tw = rule.weights[q] * ((kind == SquareKind::s_weighted)
                                                 ? std::pow(t, -order)
                                                 : 1.0);
        for (int j = 0; j < lam.size(); ++j) {
            const double u = t * lam[j] * lam[j];
            const double m = ((kind == SquareKind::alpha) ? std::pow(u, 1.0 - order) : u) *
                             std::exp(-u) * wl[j];
            for (int c = 0; c < k; ++c) {
                re(j, c) = m * spectra(j, c).real();
                im(j, c) = m * spectra(j, c).imag();
            }
        }
        const Eigen::MatrixXd ure = phiT * re;
        const Eigen::MatrixXd uim = phiT * im;
        acc.noalias() += tw * (ure.cwiseAbs2() + uim.cwiseAbs2());
    }
    return acc.cwiseSqrt();
}

RadialFunction square_function(const HankelPlan& plan, SquareKind kind, double order,
                               const RadialFunction& f, const SquareFunctionConfig& cfg) {
    Eigen::MatrixXcd spec(plan.spectral()->size(), 1);
    spec.col(0) = plan.forward(f);
    Eigen::MatrixXd vals = square_function_batch(plan, kind, order, spec, cfg);
    Eigen::VectorXcd v = vals.col(0).cast<std::complex<double>>();
    return RadialFunction(plan.radial(), std::move(v));
}

Certificate verify_square_equiv(const VerifyContext& ctx, SquareKind kind, double order, double p,
                                const WeightSpec& w, const VerifyOptions& opt) {
    const ModelParams& params = ctx.params;
    const WindowSpec win = window(params, kind == SquareKind::s_weighted ? order : 1.0,
                                  TheoremId::square);
    if (!win.valid || !win.contains(Exponent(p)))
        throw std::domain_error("verify_square_equiv: p outside the window");
    const auto adm = weight_admissible(w, Exponent(p), win.ap_index, win.rh_index, params.d);
    if (!adm.admissible)
        throw std::domain_error("verify_square_equiv: weight not admissible (" + adm.detail + ")");

    auto fam = make_family_with_terms(*ctx.plan, opt.seed, opt.family_size);
    const int n = fam.family.size();
    Eigen::MatrixXcd spectra(ctx.plan->spectral()->size(), n);
    for (int i = 0; i < n; ++i) spectra.col(i) = fam.family.spectra[i];
    Eigen::MatrixXd sf = square_function_batch(*ctx.plan, kind, order, spectra);

    Certificate cert;
    cert.inequality_id = (kind == SquareKind::alpha) ? "square_alpha" : "square_s";
    cert.d = params.d;
    cert.a = params.a;
    if (kind == SquareKind::alpha)
        cert.alpha = order;
    else
        cert.s = order;
    cert.p = p;
    cert.weight = w.description;
    cert.window_used = win;
    cert.window_applicable = true;
    cert.seed = opt.seed;
    cert.family_size = n;
    cert.grid_key = ctx.config.cache_key(params.d, params.nu0);
    cert.roundtrip_defect = ctx.plan->roundtrip_defect();

    double rev_max = 0.0;
    for (int i = 0; i < n; ++i) {
        MemberRow row;
        row.index = i;
        Eigen::VectorXcd sv = sf.col(i).cast<std::complex<double>>();
        RadialFunction sfun(ctx.plan->radial(), std::move(sv));
        double ref;
        if (kind == SquareKind::alpha) {
            ref = weighted_norm_or_inf(fam.family.members[i], w, p);
        } else {
            RadialFunction g =
                fractional_power_multiplier(*ctx.plan, fam.family.members[i], order,
                                            PowerDirection::positive);
            ref = weighted_norm_or_inf(g, w, p);
        }
        row.lhs = weighted_norm_or_inf(sfun, w, p);
        row.rhs = ref;
        row.ratio = (ref > 0.0) ? row.lhs / ref : 0.0;
        if (row.lhs > 0.0) rev_max = std::max(rev_max, ref / row.lhs);
        cert.rows.push_back(row);
    }
    cert.max_ratio_reverse = rev_max;
    cert.refinement_drift = 0.0;  // probe below
    // probe: re-evaluate a few members on the finer plan
    double drift = 0.0;
    const int nprobe = std::min<int>(ctx.drift_probe_members, n);
    if (nprobe > 0) {
        Eigen::MatrixXcd ps(ctx.plan_probe->spectral()->size(), nprobe);
        std::vector<RadialFunction> pf;
        for (int i = 0; i < nprobe; ++i) {
            pf.push_back(make_radial_function(ctx.plan_probe->radial(), [&](double r) {
                return eval_terms(fam.terms[i], r);
            }));
            ps.col(i) = ctx.plan_probe->forward(pf.back());
        }
        Eigen::MatrixXd sfp = square_function_batch(*ctx.plan_probe, kind, order, ps);
        for (int i = 0; i < nprobe; ++i) {
            if (cert.rows[i].ratio <= 0.0) continue;
            Eigen::VectorXcd sv = sfp.col(i).cast<std::complex<double>>();
            RadialFunction sfun(ctx.plan_probe->radial(), std::move(sv));
            double ref;
            if (kind == SquareKind::alpha) {
                ref = weighted_norm_or_inf(pf[i], w, p);
            } else {
                RadialFunction g = fractional_power_multiplier(*ctx.plan_probe, pf[i], order,
                                                               PowerDirection::positive);
                ref = weighted_norm_or_inf(g, w, p);
            }
            if (ref > 0.0)
                drift = std::max(drift, std::abs(weighted_norm_or_inf(sfun, w, p) / ref -
                                                 cert.rows[i].ratio) /
                                            cert.rows[i].ratio);
        }
    }
    cert.refinement_drift = drift;
    finish_certificate(cert, opt);
    return cert;
}

Certificate verify_difference_square(const VerifyContext& ctx, double s, double p,
                                     const WeightSpec& w, const VerifyOptions& opt) {
    const ModelParams& params = ctx.params;
    const WindowSpec win = window(params, s, TheoremId::difference);
    if (!win.valid || !win.contains(Exponent(p)))
        throw std::domain_error("verify_difference_square: p outside the window");
    const auto adm = weight_admissible(w, Exponent(p), win.ap_index, win.rh_index, params.d);
    if (!adm.admissible)
        throw std::domain_error("verify_difference_square: weight not admissible");

    auto fam = make_family_with_terms(*ctx.plan, opt.seed, opt.family_size);
    const int n = fam.family.size();
    const auto& lam = ctx.plan->spectral()->nodes;
    const auto& wl = ctx.plan->spectral()->weights;
    const int nr = ctx.plan->radial()->size();

    Certificate cert;
    cert.inequality_id = "difference_square";
    cert.d = params.d;
    cert.a = params.a;
    cert.s = s;
    cert.p = p;
    cert.weight = w.description;
    cert.window_used = win;
    cert.window_applicable = true;
    cert.seed = opt.seed;
    cert.family_size = n;
    cert.grid_key = ctx.config.cache_key(params.d, params.nu0);
    cert.roundtrip_defect = ctx.plan->roundtrip_defect();
    cert.note = (params.a >= 0.0) ? "case a >= 0; " : "case a < 0; ";

    // batch the time quadrature through both plans
    Eigen::MatrixXcd spec_a(lam.size(), n), spec_f(ctx.plan_free->spectral()->size(), n);
    for (int i = 0; i < n; ++i) {
        spec_a.col(i) = fam.family.spectra[i];
        spec_f.col(i) = ctx.plan_free->forward(fam.family.members[i]);
    }
    PanelRule rule = log_gl(1e-6, 1e6, 4, 6);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(nr, n);
    Eigen::MatrixXd re_a(lam.size(), n), im_a(lam.size(), n);
    const auto& lam_f = ctx.plan_free->spectral()->nodes;
    const auto& wl_f = ctx.plan_free->spectral()->weights;
    Eigen::MatrixXd re_f(lam_f.size(), n), im_f(lam_f.size(), n);
    const Eigen::MatrixXd phiT_a = ctx.plan->basis().transpose();
    const Eigen::MatrixXd phiT_f = ctx.plan_free->basis().transpose();
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double t = rule.nodes[q];
        const double tw = rule.weights[q] * std::pow(t, -s);
        for (int j = 0; j < lam.size(); ++j) {
            const double u = t * lam[j] * lam[j];
            const double m = u * std::exp(-u) * wl[j];
            for (int c = 0; c < n; ++c) {
                re_a(j, c) = m * spec_a(j, c).real();
                im_a(j, c) = m * spec_a(j, c).imag();
            }
        }
        for (int j = 0; j < lam_f.size(); ++j) {
            const double u = t * lam_f[j] * lam_f[j];
            const double m = u * std::exp(-u) * wl_f[j];
            for (int c = 0; c < n; ++c) {
                re_f(j, c) = m * spec_f(j, c).real();
                im_f(j, c) = m * spec_f(j, c).imag();
            }
        }
        const Eigen::MatrixXd dre = phiT_a * re_a - phiT_f * re_f;
        const Eigen::MatrixXd dim = phiT_a * im_a - phiT_f * im_f;
        acc.noalias() += tw * (dre.cwiseAbs2() + dim.cwiseAbs2());
    }
    const Eigen::MatrixXd lhs_vals = acc.cwiseSqrt();

    for (int i = 0; i < n; ++i) {
        MemberRow row;
        row.index = i;
        if (!singular_norm_integrable(w, s, p, params.d, fam.family.members[i])) {
            row.excluded = true;
            cert.rows.push_back(row);
            continue;
        }
        Eigen::VectorXcd lv = lhs_vals.col(i).cast<std::complex<double>>();
        RadialFunction lf(ctx.plan->radial(), std::move(lv));
        RadialFunction rf = scale_by_power(fam.family.members[i], -s);
        row.lhs = weighted_norm_or_inf(lf, w, p);
        row.rhs = weighted_norm_or_inf(rf, w, p);
        row.ratio = (row.rhs > 0.0) ? row.lhs / row.rhs : 0.0;
        cert.rows.push_back(row);
    }
    // drift probe: the dominant discretization knob here is the t-quadrature
    double drift = 0.0;
    {
        PanelRule fine = log_gl(1e-6, 1e6, 8, 6);
        const int nprobe = std::min<int>(ctx.drift_probe_members, n);
        for (int i = 0; i < nprobe; ++i) {
            if (cert.rows[i].excluded || cert.rows[i].ratio <= 0.0) continue;
            double acc2 = 0.0;
            Eigen::VectorXcd fa = spec_a.col(i), ff = spec_f.col(i);
            Eigen::VectorXd vals = Eigen::VectorXd::Zero(nr);
            for (std::size_t q = 0; q < fine.size(); ++q) {
                const double t = fine.nodes[q];
                Eigen::VectorXcd ma(lam.size()), mf(lam_f.size());
                for (int j = 0; j < lam.size(); ++j) {
                    const double u = t * lam[j] * lam[j];
                    ma[j] = u * std::exp(-u) * wl[j] * fa[j];
                }
                for (int j = 0; j < lam_f.size(); ++j) {
                    const double u = t * lam_f[j] * lam_f[j];
                    mf[j] = u * std::exp(-u) * wl_f[j] * ff[j];
                }
                Eigen::VectorXd dre = phiT_a * ma.real() - phiT_f * mf.real();
                Eigen::VectorXd dim2 = phiT_a * ma.imag() - phiT_f * mf.imag();
                vals += fine.weights[q] * std::pow(t, -s) *
                        (dre.cwiseAbs2() + dim2.cwiseAbs2());
            }
            Eigen::VectorXcd lv = vals.cwiseSqrt().cast<std::complex<double>>();
            RadialFunction lf(ctx.plan->radial(), std::move(lv));
            const double lhs = weighted_norm_or_inf(lf, w, p);
            const double ratio = lhs / cert.rows[i].rhs;
            drift = std::max(drift, std::abs(ratio - cert.rows[i].ratio) / cert.rows[i].ratio);
            (void)acc2;
        }
    }
    cert.refinement_drift = drift;
    finish_certificate(cert, opt);
    return cert;
}

}  // namespace invsq
