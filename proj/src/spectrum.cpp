#include "invsq/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "invsq/quadrature.hpp"

namespace invsq {

ModelParams make_params(int d, double a) {
    if (d < 3) throw DimensionError("make_params: dimension must be >= 3");
    const double h = 0.5 * (d - 2);
    if (a < -h * h - 1e-14 * h * h)
        throw CouplingError("make_params: coupling below the Hardy threshold -((d-2)/2)^2");
    ModelParams p;
    p.d = d;
    p.a = a;
    const double disc = std::max(0.0, (d - 2.0) * (d - 2.0) + 4.0 * a);
    p.sigma = h - 0.5 * std::sqrt(disc);
    p.nu0 = h - p.sigma;
    p.delta = a + h * h - 0.25;
    if (p.delta > 0.0) p.eps_star = std::min(1.0, p.delta / (3.0 * d * d));
    return p;
}

Exponent conjugate(Exponent p) {
    if (p.is_inf()) return Exponent(1.0);
    if (p.value() == 1.0) return Exponent::infinity();
    if (p.value() < 1.0) throw std::domain_error("conjugate: exponent must be >= 1");
    return Exponent(p.value() / (p.value() - 1.0));
}

Exponent d_alpha(double alpha, int d) {
    if (d < 3) throw DimensionError("d_alpha: dimension must be >= 3");
    if (alpha > 0.0) return Exponent(d / alpha);
    return Exponent::infinity();
}

std::string theorem_name(TheoremId id) {
    switch (id) {
        case TheoremId::equiv_forward: return "equiv_forward";
        case TheoremId::equiv_reverse: return "equiv_reverse";
        case TheoremId::hardy: return "hardy";
        case TheoremId::square: return "square";
        case TheoremId::difference: return "difference";
    }
    throw std::invalid_argument("theorem_name: unknown theorem id");
}

WindowSpec window(const ModelParams& params, double s, TheoremId id) {
    const int d = params.d;
    const double sigma = params.sigma;
    WindowSpec w;
    w.theorem_id = id;

    const Exponent d_sigma = d_alpha(sigma, d);
    const Exponent d_sigma_conj = conjugate(d_sigma);  // = 1 v d/(d-sigma)

    auto finish = [&](Exponent lo, Exponent hi) {
        w.p_lower = lo;
        w.p_upper = hi;
        if (lo.value() < hi.value()) {
            w.valid = true;
        } else {
            w.valid = false;
            w.reason = "empty exponent window";
        }
    };

    switch (id) {
        case TheoremId::equiv_forward: {
            if (!(s > 0.0 && s < 2.0)) {
                w.reason = "requires 0 < s < 2";
                return w;
            }
            w.ap_index = d_sigma_conj;
            w.rh_index = d_alpha(s + sigma, d);
            finish(d_sigma_conj, w.rh_index);
            return w;
        }
        case TheoremId::equiv_reverse: {
            if (!(s > 0.0 && s < 2.0)) {
                w.reason = "requires 0 < s < 2";
                return w;
            }
            w.ap_index = d_sigma_conj;
            w.rh_index = d_alpha(std::max(s, sigma), d);
            finish(d_sigma_conj, w.rh_index);
            return w;
        }
        case TheoremId::hardy: {
            if (!(s > 0.0 && s < d)) {
                w.reason = "requires 0 < s < d";
                return w;
            }
            if (!(d - s - 2.0 * sigma > 0.0)) {
                w.reason = "requires d - s - 2*sigma > 0";
                return w;
            }
            w.ap_index = d_sigma_conj;
            w.rh_index = d_alpha(s + sigma, d);
            finish(d_sigma_conj, w.rh_index);
            return w;
        }
        case TheoremId::square: {
            w.ap_index = d_sigma_conj;
            w.rh_index = d_sigma;
            finish(d_sigma_conj, d_sigma);
            return w;
        }
        case TheoremId::difference: {
            if (params.a >= 0.0) {
                w.ap_index = Exponent(1.0);
                w.rh_index = Exponent::infinity();
                finish(Exponent(1.0), Exponent::infinity());
                return w;
            }
            if (!(s > 0.0 && s < 2.0)) {
                w.reason = "requires 0 < s < 2";
                return w;
            }
            const double lo = std::max(1.0, d / (d + s - sigma));
            w.ap_index = Exponent(lo);
            w.rh_index = d_sigma;
            finish(Exponent(lo), d_sigma);
            return w;
        }
    }
    throw std::invalid_argument("window: unknown theorem id");
}

WeightSpec WeightSpec::one() { return power(0.0); }

WeightSpec WeightSpec::power(double alpha) {
    WeightSpec w;
    w.kind = Kind::power;
    w.alpha = alpha;
    std::ostringstream os;
    os << "|x|^" << alpha;
    w.description = os.str();
    return w;
}

WeightSpec WeightSpec::composite(double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::domain_error("WeightSpec::composite: eps must lie in (0,1)");
    WeightSpec w;
    w.kind = Kind::composite;
    w.eps = eps;
    std::ostringstream os;
    os << "|x|^(eps-1)/(1+|x|^eps)^2, eps=" << eps;
    w.description = os.str();
    return w;
}

WeightSpec WeightSpec::table(std::vector<double> r, std::vector<double> w_, std::string desc) {
    if (r.size() != w_.size() || r.size() < 2)
        throw std::invalid_argument("WeightSpec::table: need matching samples");
    WeightSpec w;
    w.kind = Kind::table;
    w.table_r = std::move(r);
    w.table_w = std::move(w_);
    w.description = std::move(desc);
    return w;
}

double WeightSpec::operator()(double r) const {
    switch (kind) {
        case Kind::power: return std::pow(r, alpha);
        case Kind::composite: {
            const double re = std::pow(r, eps);
            return std::pow(r, eps - 1.0) / ((1.0 + re) * (1.0 + re));
        }
        case Kind::table: {
            // log-linear interpolation, constant extrapolation
            if (r <= table_r.front()) return table_w.front();
            if (r >= table_r.back()) return table_w.back();
            auto it = std::upper_bound(table_r.begin(), table_r.end(), r);
            const std::size_t i = it - table_r.begin();
            const double t = std::log(r / table_r[i - 1]) / std::log(table_r[i] / table_r[i - 1]);
            return table_w[i - 1] * (1.0 - t) + table_w[i] * t;
        }
    }
    throw std::logic_error("WeightSpec: bad kind");
}

PowerWeightClass power_weight_class(double alpha, Exponent p, Exponent q, int d) {
    PowerWeightClass c;
    // A_p
    if (p.is_inf()) {
        c.in_ap = alpha > -d;  // A_inf
    } else if (p.value() == 1.0) {
        c.in_ap = (alpha > -d) && (alpha <= 0.0);
    } else if (p.value() > 1.0) {
        c.in_ap = (alpha > -d) && (alpha < d * (p.value() - 1.0));
    } else {
        c.in_ap = false;
    }
    // RH_q
    if (q.value() == 1.0) {
        c.in_rh = true;  // vacuous
    } else if (q.is_inf()) {
        c.in_rh = alpha >= 0.0;
    } else {
        c.in_rh = alpha * q.value() > -d;
    }
    return c;
}

namespace {

// RH index (q0/p)'; q0 = inf yields RH_1 (no constraint).
Exponent rh_index_of(Exponent p, Exponent q0) {
    if (q0.is_inf()) return Exponent(1.0);
    return conjugate(Exponent(q0.value() / p.value()));
}

}  // namespace

AdmissibilityReport weight_admissible(const WeightSpec& w, Exponent p, Exponent p0, Exponent q0,
                                      int d) {
    AdmissibilityReport rep;
    if (!(p.value() > p0.value()) || !(q0.is_inf() || p.value() < q0.value())) {
        rep.admissible = false;
        rep.method = "exact";
        rep.detail = "p outside the open window (boundary exponents rejected)";
        return rep;
    }
    const Exponent ap(p.value() / p0.value());
    const Exponent rh = rh_index_of(p, q0);

    if (w.kind == WeightSpec::Kind::power) {
        const auto c = power_weight_class(w.alpha, ap, rh, d);
        rep.admissible = c.in_ap && c.in_rh;
        rep.method = "exact";
        std::ostringstream os;
        os << "A_{" << ap.value() << "}: " << (c.in_ap ? "yes" : "no") << "; RH_{"
           << (rh.is_inf() ? -1.0 : rh.value()) << "}: " << (c.in_rh ? "yes" : "no");
        rep.detail = os.str();
        return rep;
    }
    if (w.kind == WeightSpec::Kind::composite) {
        // two-sided power envelope: |x|^{eps-1} near 0, |x|^{-1-eps} near infinity
        const double e0 = w.eps - 1.0, einf = -1.0 - w.eps;
        const auto c0 = power_weight_class(e0, ap, rh, d);
        const auto ci = power_weight_class(einf, ap, rh, d);
        bool env = c0.in_ap && c0.in_rh && ci.in_ap && ci.in_rh;
        bool numeric_ok = true;
        if (env && !ap.is_inf()) {
            const auto est = ap_characteristic_estimate(w, ap, d, default_ball_family(), 1);
            numeric_ok = est.converged && std::isfinite(est.value);
        }
        rep.admissible = env && numeric_ok;
        rep.method = "envelope+numeric";
        std::ostringstream os;
        os << "envelope exponents {" << e0 << ", " << einf << "} "
           << (env ? "pass" : "fail") << "; numeric estimate "
           << (numeric_ok ? "stable" : "unstable");
        rep.detail = os.str();
        return rep;
    }
    // tabulated weight: numeric evidence only
    const auto est = ap_characteristic_estimate(w, ap, d, default_ball_family(), 1);
    rep.admissible = est.converged && std::isfinite(est.value);
    rep.method = "numeric";
    rep.detail = "tabulated weight, characteristic estimate only";
    return rep;
}

bool dual_weight_check(double alpha, Exponent p, Exponent p0, Exponent q0, int d) {
    if (!(1.0 < p0.value() && p0.value() < p.value() && p.value() < q0.value()) || q0.is_inf())
        throw std::domain_error("dual_weight_check: needs 1 < p0 < p < q0 < inf");
    const Exponent pc = conjugate(p), p0c = conjugate(p0), q0c = conjugate(q0);

    const auto lhs = power_weight_class(alpha, Exponent(p.value() / p0.value()),
                                        rh_index_of(p, q0), d);
    const double alpha_dual = alpha * (1.0 - pc.value());
    const auto rhs = power_weight_class(alpha_dual, Exponent(pc.value() / q0c.value()),
                                        rh_index_of(pc, p0c), d);
    return (lhs.in_ap && lhs.in_rh) == (rhs.in_ap && rhs.in_rh);
}

SmoothingAdmissibility smoothing_admissible(const ModelParams& params, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::domain_error("smoothing_admissible: eps must lie in (0,1)");
    SmoothingAdmissibility out;
    out.delta_positive = params.delta > 0.0;
    const WindowSpec win = window(params, 0.5, TheoremId::equiv_forward);
    if (win.valid && win.contains(Exponent(2.0))) {
        out.weight =
            weight_admissible(WeightSpec::composite(eps), Exponent(2.0), win.ap_index,
                              win.rh_index, params.d);
    } else {
        out.weight.admissible = false;
        out.weight.method = "exact";
        out.weight.detail = "p = 2 outside the equivalence window";
    }
    out.admissible = out.delta_positive && out.weight.admissible;
    return out;
}

std::vector<Ball> default_ball_family(int doubling_level) {
    std::vector<Ball> fam;
    const int steps = std::max(1, doubling_level);
    for (int k = -20 * steps; k <= 20 * steps; ++k)
        fam.push_back({0.0, std::pow(2.0, static_cast<double>(k) / steps)});
    for (int k = -10 * steps; k <= 10 * steps; ++k) {
        const double c = std::pow(2.0, static_cast<double>(k) / steps);
        for (double f : {0.25, 1.0, 4.0}) fam.push_back({c, f * c});
    }
    return fam;
}

namespace {

// integral over B(x0, R) of g(|x|) dx, up to a common d-dependent constant
// that cancels in averages. The singular inner region is resolved by log
// panels down to R * 10^{-(8 + 6*level)}.
double ball_integral(const std::function<double(double)>& g, double c, double R, int d,
                     int level) {
    const double cut = R * std::pow(10.0, -(8.0 + 6.0 * level));
    const int per_decade = 4 + 2 * level;
    if (c == 0.0) {
        PanelRule rule = log_gl(cut, R, per_decade, 12);
        double s = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double r = rule.nodes[i];
            s += rule.weights[i] * r * g(r) * std::pow(r, d - 1);  // dt/t weights
        }
        return s;
    }
    // off-center: reduce by the spherical-cap angle
    static thread_local std::vector<double> tx, tw;
    if (tx.empty()) gauss_legendre(32, tx, tw);
    auto cap = [&](double r) {
        double cosmax = (r * r + c * c - R * R) / (2.0 * r * c);
        cosmax = std::clamp(cosmax, -1.0, 1.0);
        const double thmax = std::acos(cosmax);
        double s = 0.0;
        for (std::size_t i = 0; i < tx.size(); ++i) {
            const double th = 0.5 * thmax * (tx[i] + 1.0);
            s += 0.5 * thmax * tw[i] * std::pow(std::sin(th), d - 2);
        }
        return s;
    };
    const double rlo = std::max(0.0, c - R), rhi = c + R;
    double s = 0.0;
    if (rlo == 0.0) {
        PanelRule rule = log_gl(cut, rhi, per_decade, 12);
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double r = rule.nodes[i];
            s += rule.weights[i] * r * g(r) * std::pow(r, d - 1) * cap(r);
        }
    } else {
        std::vector<double> bounds;
        const int np = 8 + 2 * level;
        for (int p = 0; p <= np; ++p) bounds.push_back(rlo + (rhi - rlo) * p / np);
        PanelRule rule = composite_gl(bounds, std::vector<int>(np, 12));
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double r = rule.nodes[i];
            s += rule.weights[i] * g(r) * std::pow(r, d - 1) * cap(r);
        }
    }
    return s;
}

double family_estimate(const WeightSpec& w, double pv, int d, const std::vector<Ball>& balls,
                       int level) {
    const double pc = pv / (pv - 1.0);
    auto wfun = [&](double r) { return w(r); };
    auto wdual = [&](double r) { return std::pow(w(r), 1.0 - pc); };
    auto one = [](double) { return 1.0; };
    double best = 0.0;
    for (const auto& b : balls) {
        const double vol = ball_integral(one, b.center_radius, b.radius, d, level);
        const double aw = ball_integral(wfun, b.center_radius, b.radius, d, level) / vol;
        const double ad = ball_integral(wdual, b.center_radius, b.radius, d, level) / vol;
        const double val = aw * std::pow(ad, pv - 1.0);
        if (std::isfinite(val)) best = std::max(best, val);
    }
    return best;
}

}  // namespace

ApCharacteristicEstimate ap_characteristic_estimate(const WeightSpec& w, Exponent p, int d,
                                                    const std::vector<Ball>& balls,
                                                    int refinement_level) {
    if (p.is_inf() || p.value() <= 1.0)
        throw std::domain_error("ap_characteristic_estimate: needs 1 < p < inf");
    ApCharacteristicEstimate est;
    const double v0 = family_estimate(w, p.value(), d, balls, refinement_level);
    const double v1 = family_estimate(w, p.value(), d, balls, refinement_level + 1);
    est.value = v1;
    est.drift = std::abs(v1 - v0) / std::max(v0, 1e-300);
    est.converged = est.drift < 0.05;
    return est;
}

}  // namespace invsq
