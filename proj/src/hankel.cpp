#include "invsq/hankel.hpp"

#include <cmath>
#include <sstream>

namespace invsq {

using specfun::BesselOrder;

std::string GridConfig::cache_key(int d, double nu) const {
    std::ostringstream os;
    os.precision(17);
    os << d << "|" << nu << "|" << radial_octave_lo << "," << radial_octave_hi << ","
       << spectral_octave_lo << "," << spectral_octave_hi << "," << base_nodes << "," << pad << ","
       << nodes_per_phase;
    return os.str();
}

namespace {

void fill_grid(const PanelRule& rule, int d, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    const int n = static_cast<int>(rule.size());
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        nodes[i] = rule.nodes[i];
        weights[i] = rule.weights[i] * std::pow(rule.nodes[i], d - 1);
    }
}

}  // namespace

std::shared_ptr<const RadialGrid> make_radial_grid(int d, const GridConfig& cfg) {
    if (d < 3) throw DimensionError("make_radial_grid: d >= 3");
    auto g = std::make_shared<RadialGrid>();
    g->d = d;
    PanelRule rule = octave_gl(cfg.radial_octave_lo, cfg.radial_octave_hi, cfg.lambda_max(),
                               cfg.base_nodes, cfg.pad, cfg.nodes_per_phase);
    g->boundaries = rule.boundaries;
    fill_grid(rule, d, g->nodes, g->weights);
    return g;
}

std::shared_ptr<const SpectralGrid> make_spectral_grid(int d, const GridConfig& cfg) {
    auto g = std::make_shared<SpectralGrid>();
    PanelRule rule = octave_gl(cfg.spectral_octave_lo, cfg.spectral_octave_hi, cfg.r_max(),
                               cfg.base_nodes, cfg.pad, cfg.nodes_per_phase);
    g->boundaries = rule.boundaries;
    fill_grid(rule, d, g->nodes, g->weights);
    return g;
}

RadialFunction make_radial_function(std::shared_ptr<const RadialGrid> grid,
                                    const std::function<std::complex<double>(double)>& f) {
    Eigen::VectorXcd v(grid->nodes.size());
    for (int i = 0; i < grid->nodes.size(); ++i) v[i] = f(grid->nodes[i]);
    return RadialFunction(std::move(grid), std::move(v));
}

double surface_measure(int d) {
    return 2.0 * std::pow(M_PI, 0.5 * d) / specfun::gamma_fn(0.5 * d);
}

HankelPlan::HankelPlan(int d, BesselOrder order, const GridConfig& cfg)
    : d_(d), nu_(order.nu), cfg_(cfg) {
    radial_ = make_radial_grid(d, cfg);
    spectral_ = make_spectral_grid(d, cfg);
    const int nr = radial_->size(), nl = spectral_->size();
    if (nr < 16 || nl < 16) throw std::invalid_argument("HankelPlan: grids too small");
    phi_.resize(nl, nr);
    const double s0 = 0.5 * (d - 2);
#pragma omp parallel for schedule(dynamic, 8)
    for (int j = 0; j < nl; ++j) {
        const double lam = spectral_->nodes[j];
        for (int i = 0; i < nr; ++i) {
            const double x = lam * radial_->nodes[i];
            phi_(j, i) = std::pow(x, -s0) * specfun::bessel_j(BesselOrder(nu_), x);
        }
    }

    // build-time self test: off-origin bumps are band-limited and
    // space-limited for every order, so the round trip must close
    double worst = 0.0;
    {
        const double shapes[][2] = {{4.0, 2.0}, {6.0, 1.5}, {3.0, 4.0}};  // (center, gamma)
        for (const auto& sh : shapes) {
            RadialFunction f = make_radial_function(radial_, [&](double r) {
                const double u = r - sh[0];
                return std::complex<double>(std::exp(-sh[1] * u * u), 0.0);
            });
            RadialFunction rt = inverse(forward(f));
            double num = 0.0, den = 0.0;
            for (int i = 0; i < nr; ++i) {
                const double w = radial_->weights[i];
                num += w * std::norm(rt.values[i] - f.values[i]);
                den += w * std::norm(f.values[i]);
            }
            worst = std::max(worst, std::sqrt(num / den));
        }
    }
    roundtrip_defect_ = worst;
    if (worst > cfg.roundtrip_tol) {
        std::ostringstream os;
        os << "HankelPlan: round-trip defect " << worst << " exceeds tolerance "
           << cfg.roundtrip_tol << " (grid too coarse)";
        throw RoundTripError(os.str());
    }
}

const Eigen::MatrixXd& HankelPlan::basis_derivative() const {
    std::call_once(dphi_once_, [this]() {
        const int nr = radial_->size(), nl = spectral_->size();
        dphi_.resize(nl, nr);
        const double s0 = 0.5 * (d_ - 2);
#pragma omp parallel for schedule(dynamic, 8)
        for (int j = 0; j < nl; ++j) {
            const double lam = spectral_->nodes[j];
            for (int i = 0; i < nr; ++i) {
                const double x = lam * radial_->nodes[i];
                const double jv = specfun::bessel_j(BesselOrder(nu_), x);
                const double jp = specfun::bessel_j_prime(BesselOrder(nu_), x);
                dphi_(j, i) = lam * std::pow(x, -s0) * (jp - s0 * jv / x);
            }
        }
    });
    return dphi_;
}

namespace {

Eigen::VectorXcd real_matrix_apply(const Eigen::MatrixXd& m, const Eigen::VectorXd& w,
                                   const Eigen::VectorXcd& v, bool transpose) {
    Eigen::VectorXd re = w.cwiseProduct(v.real());
    Eigen::VectorXd im = w.cwiseProduct(v.imag());
    Eigen::VectorXd ore = transpose ? (m.transpose() * re).eval() : (m * re).eval();
    Eigen::VectorXd oim = transpose ? (m.transpose() * im).eval() : (m * im).eval();
    Eigen::VectorXcd out(ore.size());
    out.real() = ore;
    out.imag() = oim;
    return out;
}

}  // namespace

Eigen::VectorXcd HankelPlan::forward(const RadialFunction& f) const {
    if (f.grid != radial_) throw GridMismatchError("forward: function on a different grid");
    return real_matrix_apply(phi_, radial_->weights, f.values, false);
}

RadialFunction HankelPlan::inverse(const Eigen::VectorXcd& fhat) const {
    if (fhat.size() != spectral_->nodes.size())
        throw GridMismatchError("inverse: spectral size mismatch");
    return RadialFunction(radial_, real_matrix_apply(phi_, spectral_->weights, fhat, true));
}

RadialFunction HankelPlan::derivative_from_spectral(const Eigen::VectorXcd& fhat) const {
    if (fhat.size() != spectral_->nodes.size())
        throw GridMismatchError("derivative_from_spectral: spectral size mismatch");
    return RadialFunction(radial_,
                          real_matrix_apply(basis_derivative(), spectral_->weights, fhat, true));
}

std::shared_ptr<const HankelPlan> build_plan(const ModelParams& params, BesselOrder order,
                                             const GridConfig& cfg) {
    (void)params;
    return std::make_shared<HankelPlan>(params.d, order, cfg);
}

std::shared_ptr<const HankelPlan> build_plan(const ModelParams& params, const GridConfig& cfg) {
    return std::make_shared<HankelPlan>(params.d, BesselOrder(params.nu0), cfg);
}

std::shared_ptr<const HankelPlan> build_free_plan(int d, const GridConfig& cfg) {
    return std::make_shared<HankelPlan>(d, BesselOrder(0.5 * (d - 2)), cfg);
}

RadialFunction apply_multiplier(const HankelPlan& plan, const RadialFunction& f,
                                const SpectralSymbol& m) {
    Eigen::VectorXcd fhat = plan.forward(f);
    const Eigen::VectorXd& lam = plan.spectral()->nodes;
    for (int j = 0; j < fhat.size(); ++j) fhat[j] *= m(lam[j]);
    return plan.inverse(fhat);
}

RadialFunction heat_semigroup(const HankelPlan& plan, const RadialFunction& f, double t) {
    if (!(t >= 0.0)) throw std::domain_error("heat_semigroup: t >= 0");
    return apply_multiplier(plan, f,
                            [t](double lam) { return std::exp(-t * lam * lam); });
}

RadialFunction radial_derivative(const HankelPlan& plan, const RadialFunction& f) {
    return plan.derivative_from_spectral(plan.forward(f));
}

namespace {

// left tail series int_0^{t0} t^{alpha-1} e^{-t l^2} dt (alpha = s/2 resp.
// 1 - s/2, an extra l^2 factor for the positive direction applied by caller)
double left_tail(double alpha, double t0, double l2) {
    double sum = 0.0, pw = std::pow(t0, alpha);
    double fac = 1.0;
    for (int k = 0; k < 8; ++k) {
        sum += fac * pw / (alpha + k);
        pw *= t0;
        fac *= -l2 / (k + 1);
    }
    return sum;
}

}  // namespace

Eigen::VectorXd subordination_symbol(const Eigen::VectorXd& lambdas, double s,
                                     PowerDirection dir) {
    if (!(s > 0.0 && s < 2.0))
        throw std::domain_error("subordination_symbol: s must lie in (0,2)");
    const double t0 = 1e-7, t1 = 1e7;
    static thread_local PanelRule rule;  // shared across calls; panels fixed
    if (rule.nodes.empty()) rule = log_gl(t0, t1, 6, 10);
    const double alpha = (dir == PowerDirection::negative) ? 0.5 * s : 1.0 - 0.5 * s;
    const double ga = specfun::gamma_fn(alpha);
    Eigen::VectorXd out(lambdas.size());
    for (int j = 0; j < lambdas.size(); ++j) {
        const double l2 = lambdas[j] * lambdas[j];
        double q = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double t = rule.nodes[i];
            // weights carry dt/t; negative: t^{s/2} e^{-t l^2},
            // positive: (t l^2) t^{-s/2} e^{-t l^2} = l^2 t^{alpha} e^{-t l^2}
            q += rule.weights[i] * std::pow(t, alpha) * std::exp(-t * l2) *
                 ((dir == PowerDirection::positive) ? l2 : 1.0);
        }
        // analytic completion of both tails
        double tails = left_tail(alpha, t0, l2) * ((dir == PowerDirection::positive) ? l2 : 1.0);
        const double lpow = (dir == PowerDirection::negative) ? std::pow(lambdas[j], -s)
                                                              : std::pow(lambdas[j], s);
        tails += lpow * ga * specfun::gamma_q(alpha, t1 * l2);
        out[j] = (q + tails) / ga;
    }
    return out;
}


RadialFunction fractional_power_multiplier(const HankelPlan& plan, const RadialFunction& f,
                                           double s, PowerDirection dir) {
    if (!(s > 0.0 && s < 2.0))
        throw std::domain_error("fractional_power_multiplier: s must lie in (0,2)");
    const double sign = (dir == PowerDirection::negative) ? -s : s;
    return apply_multiplier(plan, f, [sign](double lam) {
        return std::complex<double>(std::pow(lam, sign), 0.0);
    });
}

RadialFunction fractional_power_subordination(const HankelPlan& plan, const RadialFunction& f,
                                              double s, PowerDirection dir) {
    if (!(s > 0.0 && s < 2.0))
        throw std::domain_error("fractional_power_subordination: s must lie in (0,2)");
    Eigen::VectorXcd fhat = plan.forward(f);
    const Eigen::VectorXd& lam = plan.spectral()->nodes;
    const Eigen::VectorXd sym = subordination_symbol(lam, s, dir);

    if (dir == PowerDirection::negative) {
        // if the lowest spectral octave carries a visible share of the
        // result, the negative power depends on the grid cutoff (the
        // lambda -> 0 integral has not converged on this grid)
        const double cut = 2.0 * plan.spectral()->boundaries.front();
        double low = 0.0, tot = 0.0;
        for (int j = 0; j < lam.size(); ++j) {
            const double m = plan.spectral()->weights[j] * std::norm(fhat[j] * sym[j]);
            tot += m;
            if (lam[j] < cut) low += m;
        }
        if (tot > 0.0 && low > 1e-4 * tot)
            throw SubordinationError(
                "fractional_power_subordination: spectral mass concentrates at the grid's "
                "lambda cutoff (integral divergent near 0)");
    }
    for (int j = 0; j < fhat.size(); ++j) fhat[j] *= sym[j];
    return plan.inverse(fhat);
}

double weighted_lp_norm(const RadialFunction& f, const WeightSpec& w, double p) {
    if (!(p > 0.0) || std::isinf(p)) throw std::domain_error("weighted_lp_norm: p in (0, inf)");
    const auto& g = *f.grid;
    double s = 0.0;
    for (int i = 0; i < g.nodes.size(); ++i)
        s += g.weights[i] * std::pow(std::abs(f.values[i]), p) * w(g.nodes[i]);
    return std::pow(surface_measure(g.d) * s, 1.0 / p);
}

double l2_norm(const RadialFunction& f) {
    const auto& g = *f.grid;
    double s = 0.0;
    for (int i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::norm(f.values[i]);
    return std::sqrt(surface_measure(g.d) * s);
}

}  // namespace invsq
