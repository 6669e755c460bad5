#include "invsq/morawetz.hpp"

#include <algorithm>
#include <cmath>

#include "spacetime.hpp"

namespace invsq {

PsiCalculus::PsiCalculus(int d_, double eps_) : d(d_), eps(eps_) {
    if (d < 3) throw DimensionError("PsiCalculus: d >= 3");
    if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("PsiCalculus: eps in (0,1)");
}

double PsiCalculus::psi(double r) const {
    if (r <= 0.0) return 0.0;
    PanelRule rule = log_gl(std::min(1e-10, 0.1 * r), r, 6, 10);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double x = rule.nodes[i];
        s += rule.weights[i] * x * psi_prime(x);  // weights carry dx/x
    }
    return s;
}

double PsiCalculus::psi_prime(double r) const {
    const double re = std::pow(r, eps);
    return re / (1.0 + re);
}

double PsiCalculus::psi_second(double r) const {
    const double re = std::pow(r, eps);
    return eps * std::pow(r, eps - 1.0) / ((1.0 + re) * (1.0 + re));
}

double PsiCalculus::lap_psi(double r) const {
    return psi_second(r) + (d - 1.0) * psi_prime(r) / r;
}

double PsiCalculus::beta(double rho) const {
    const double dd = static_cast<double>(d);
    const double p3 = (1.0 + rho) * (1.0 + rho) * (1.0 + rho);
    const double two_beta = -(dd * dd - 6.0 * dd + 7.0) / (1.0 + rho) +
                            eps * (2.0 * dd - 5.0) * (rho * rho - 1.0) / p3 -
                            eps * eps * (rho * rho - 4.0 * rho + 1.0) / p3;
    return 0.5 * two_beta;
}

double PsiCalculus::bilap_psi(double r) const {
    // -(1/2) lap^2 psi = (1/r^3) psi'(r) [mu_d/2 + eps beta(r^eps)]
    const double rho = std::pow(r, eps);
    return -2.0 / (r * r * r) * psi_prime(r) * (0.5 * mu_d() + eps * beta(rho));
}

double PsiCalculus::w_eps(double r) const {
    const double re = std::pow(r, eps);
    return std::pow(r, eps - 1.0) / ((1.0 + re) * (1.0 + re));
}

double PsiCalculus::w_second(double r) const {
    return std::pow(r, eps - 3.0) / (1.0 + std::pow(r, eps));
}

namespace {

// Richardson first and second derivatives from 5-point stencils at two steps
double diff1(const std::function<double(double)>& f, double x, double h) {
    auto d5 = [&](double hh) {
        return (f(x - 2 * hh) - 8 * f(x - hh) + 8 * f(x + hh) - f(x + 2 * hh)) / (12 * hh);
    };
    const double a = d5(h), b = d5(0.5 * h);
    return (16.0 * b - a) / 15.0;
}

double diff2(const std::function<double(double)>& f, double x, double h) {
    auto d5 = [&](double hh) {
        return (-f(x - 2 * hh) + 16 * f(x - hh) - 30 * f(x) + 16 * f(x + hh) - f(x + 2 * hh)) /
               (12 * hh * hh);
    };
    const double a = d5(h), b = d5(0.5 * h);
    return (16.0 * b - a) / 15.0;
}

}  // namespace

double PsiCalculus::bilap_psi_fd(double r) const {
    // nested numerical Laplacians of psi, built from psi' only
    auto lap = [&](double x) {
        const double h = 1e-3 * x;
        return diff1([&](double y) { return psi_prime(y); }, x, h) +
               (d - 1.0) * psi_prime(x) / x;
    };
    const double h = 2e-3 * r;
    return diff2(lap, r, h) + (d - 1.0) * diff1(lap, r, h) / r;
}

std::vector<double> default_log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return g;
}

BoundScanVerdict check_beta_bound(int d, double eps, const std::vector<double>& r_grid) {
    PsiCalculus psi(d, eps);
    BoundScanVerdict v;
    v.bound = 3.0 * d * d;
    for (double r : r_grid) {
        const double b = std::abs(psi.beta(r));
        if (b > v.max_value) {
            v.max_value = b;
            v.arg_r = r;
        }
    }
    v.pass = v.max_value <= v.bound;
    return v;
}

BoundScanVerdict check_lap_psi_bound(int d, double eps, const std::vector<double>& r_grid) {
    PsiCalculus psi(d, eps);
    BoundScanVerdict v;
    v.bound = static_cast<double>(d);
    for (double r : r_grid) {
        const double b = r * std::abs(psi.lap_psi(r));
        if (b > v.max_value) {
            v.max_value = b;
            v.arg_r = r;
        }
    }
    v.pass = v.max_value <= v.bound;
    return v;
}

Eigen::VectorXcd evolve_spectrum(const Eigen::VectorXcd& fhat, const Eigen::VectorXd& lambdas,
                                 double t, FlowKind flow, double sign) {
    Eigen::VectorXcd out(fhat.size());
    for (int j = 0; j < fhat.size(); ++j) {
        const double l = lambdas[j];
        const double phase = sign * t * (flow == FlowKind::schrodinger ? l * l : l);
        out[j] = fhat[j] * std::polar(1.0, phase);
    }
    return out;
}

RadialFunction evolve(const HankelPlan& plan, const RadialFunction& f, double t, FlowKind flow) {
    return plan.inverse(evolve_spectrum(plan.forward(f), plan.spectral()->nodes, t, flow));
}

ConservationReport conservation_check(const HankelPlan& plan, const HankelPlan& plan_free,
                                      double s, const RadialFunction& f,
                                      const std::vector<double>& t_list) {
    if (!(s > 0.0 && s < 2.0)) throw std::domain_error("conservation_check: s in (0,2)");
    ConservationReport rep;
    const Eigen::VectorXcd fhat = plan.forward(f);
    const auto& lam = plan.spectral()->nodes;
    const auto& lam_f = plan_free.spectral()->nodes;
    const auto& wl_f = plan_free.spectral()->weights;
    const double om = surface_measure(plan.d());

    double la0 = 0.0;
    std::vector<double> la, fr, fwd_ratio, rev_ratio;
    for (double t : t_list) {
        // the evolved state is known spectrally; its L_a-Sobolev norm is a
        // Plancherel sum over the evolved spectrum
        const Eigen::VectorXcd uhat = evolve_spectrum(fhat, lam, t, FlowKind::schrodinger);
        RadialFunction u = plan.inverse(uhat);
        double n2 = 0.0;
        for (int j = 0; j < lam.size(); ++j)
            n2 += plan.spectral()->weights[j] * std::pow(lam[j], 2.0 * s) * std::norm(uhat[j]);
        la.push_back(std::sqrt(om * n2));

        Eigen::VectorXcd uhat_f = plan_free.forward(u);
        double m2 = 0.0;
        for (int j = 0; j < lam_f.size(); ++j)
            m2 += wl_f[j] * std::pow(lam_f[j], 2.0 * s) * std::norm(uhat_f[j]);
        fr.push_back(std::sqrt(om * m2));
        if (la.back() > 0.0 && fr.back() > 0.0) {
            fwd_ratio.push_back(fr.back() / la.back());
            rev_ratio.push_back(la.back() / fr.back());
        }
        if (la.size() == 1) la0 = la.back();
    }
    rep.la_norms = la;
    rep.free_norms = fr;
    for (double v : la)
        rep.max_la_deviation = std::max(rep.max_la_deviation, std::abs(v - la0) / la0);
    const auto [mn, mx] = std::minmax_element(fr.begin(), fr.end());
    rep.free_fluctuation = (*mn > 0.0) ? *mx / *mn : std::numeric_limits<double>::infinity();
    const double cf = *std::max_element(fwd_ratio.begin(), fwd_ratio.end());
    const double cr = *std::max_element(rev_ratio.begin(), rev_ratio.end());
    rep.snapshot_product = cf * cr;
    rep.consistent = rep.free_fluctuation <= rep.snapshot_product * (1.0 + 1e-9);
    return rep;
}

namespace {

double theta_functional(const HankelPlan& plan, const PsiCalculus& psi,
                        const Eigen::VectorXcd& uhat) {
    RadialFunction u = plan.inverse(uhat);
    RadialFunction du = plan.derivative_from_spectral(uhat);
    const auto& g = *plan.radial();
    double s = 0.0;
    for (int i = 0; i < g.nodes.size(); ++i) {
        const double r = g.nodes[i];
        s += g.weights[i] * psi.psi_prime(r) * std::imag(std::conj(u.values[i]) * du.values[i]);
    }
    return surface_measure(plan.d()) * s;
}

}  // namespace

VirialResidual verify_virial(const HankelPlan& plan, const ModelParams& params, double eps,
                             const RadialFunction& f, double t0, double dt) {
    if (!(dt > 1e-9)) throw std::domain_error("verify_virial: dt below the time resolution");
    PsiCalculus psi(params.d, eps);
    const Eigen::VectorXcd fhat = plan.forward(f);
    const auto& lam = plan.spectral()->nodes;

    // flow of the equation i u_t + Delta u = c u, i.e. u(t) = e^{-i t L_a} f
    auto at = [&](double t) {
        return evolve_spectrum(fhat, lam, t, FlowKind::schrodinger, -1.0);
    };
    const double tm2 = theta_functional(plan, psi, at(t0 - 2 * dt));
    const double tm1 = theta_functional(plan, psi, at(t0 - dt));
    const double tp1 = theta_functional(plan, psi, at(t0 + dt));
    const double tp2 = theta_functional(plan, psi, at(t0 + 2 * dt));

    VirialResidual out;
    out.dtheta_dt = (tm2 - 8.0 * tm1 + 8.0 * tp1 - tp2) / (12.0 * dt);

    const Eigen::VectorXcd u0hat = at(t0);
    RadialFunction u = plan.inverse(u0hat);
    RadialFunction du = plan.derivative_from_spectral(u0hat);
    out.theta_t0 = theta_functional(plan, psi, u0hat);
    const auto& g = *plan.radial();
    double rhs = 0.0;
    for (int i = 0; i < g.nodes.size(); ++i) {
        const double r = g.nodes[i];
        const double uu = std::norm(u.values[i]);
        rhs += g.weights[i] *
               (2.0 * psi.psi_second(r) * std::norm(du.values[i]) -
                0.5 * psi.bilap_psi(r) * uu + 2.0 * params.a * psi.psi_prime(r) * uu / (r * r * r));
    }
    out.rhs = surface_measure(params.d) * rhs;
    const double f2 = l2_norm(f);
    out.residual = std::abs(out.dtheta_dt - out.rhs) / (std::abs(out.rhs) + f2 * f2);
    return out;
}

std::string smoothing_name(SmoothingId id) {
    switch (id) {
        case SmoothingId::firstest: return "firstest";
        case SmoothingId::secondest: return "secondest";
        case SmoothingId::thirdest: return "thirdest";
    }
    throw std::invalid_argument("smoothing_name: unknown id");
}

SmoothingEngine::SmoothingEngine(std::shared_ptr<const HankelPlan> plan,
                                 std::shared_ptr<const HankelPlan> plan_free, double eps)
    : plan_(std::move(plan)), plan_free_(std::move(plan_free)), eps_(eps) {
    const PsiCalculus psi(plan_->d(), eps);
    const auto& rg = *plan_->radial();
    const int nr = rg.size();
    const auto& lam = plan_->spectral()->nodes;
    const int nl = static_cast<int>(lam.size());

    Eigen::VectorXd weff(nr), wsec(nr);
    for (int i = 0; i < nr; ++i) {
        weff[i] = rg.weights[i] * psi.w_eps(rg.nodes[i]);
        wsec[i] = rg.weights[i] * psi.w_second(rg.nodes[i]);
    }

    auto schro_form = [&](const Eigen::MatrixXd& samples, const Eigen::VectorXd& w) {
        QuadForm qf;
        qf.energies.resize(nl);
        qf.rho.resize(nl);
        for (int j = 0; j < nl; ++j) {
            qf.energies[j] = lam[j] * lam[j];
            qf.rho[j] = 0.5 * std::pow(lam[j], plan_->d() - 2);  // lam^{d-1} dlam / dE
        }
        qf.gram.noalias() = samples * w.asDiagonal() * samples.transpose();
        return qf;
    };

    grad_weps_ = schro_form(plan_->basis_derivative(), weff);
    u_wsec_ = schro_form(plan_->basis(), wsec);

    {
        // (-Delta)^{1/4} pipeline: free forward, sqrt(lambda), free inverse
        const auto& fsg = *plan_free_->spectral();
        Eigen::VectorXd mid(fsg.size());
        for (int j = 0; j < fsg.size(); ++j)
            mid[j] = fsg.weights[j] * std::sqrt(fsg.nodes[j]);
        // P2 = Phi_f^T diag(mid) Phi_f diag(Wr) Phi_a^T   (Nr x Nl)
        Eigen::MatrixXd t1 = plan_free_->basis() * rg.weights.asDiagonal() *
                             plan_->basis().transpose();          // (Nlf x Nl)
        Eigen::MatrixXd p2 = plan_free_->basis().transpose() * mid.asDiagonal() * t1;  // (Nr x Nl)
        QuadForm qf;
        qf.energies.resize(nl);
        qf.rho.resize(nl);
        for (int j = 0; j < nl; ++j) {
            qf.energies[j] = lam[j] * lam[j];
            qf.rho[j] = 0.5 * std::pow(lam[j], plan_->d() - 2);
        }
        qf.gram.noalias() = p2.transpose() * weff.asDiagonal() * p2;
        frac_weps_ = qf;
    }

    {
        QuadForm qf;
        qf.energies = lam;
        qf.rho.resize(nl);
        for (int j = 0; j < nl; ++j) qf.rho[j] = std::pow(lam[j], plan_->d() - 1);
        qf.gram.noalias() = plan_->basis() * weff.asDiagonal() * plan_->basis().transpose();
        wave_weps_ = qf;
    }
}

double SmoothingEngine::spacetime_integral(const QuadForm& qf, const Eigen::VectorXcd& fhat,
                                           double T) const {
    const Eigen::MatrixXd W = detail::dirichlet_filon_weights(qf.energies, T);
    Eigen::VectorXd re(fhat.size()), im(fhat.size());
    for (int j = 0; j < fhat.size(); ++j) {
        re[j] = fhat[j].real() * qf.rho[j];
        im[j] = fhat[j].imag() * qf.rho[j];
    }
    const Eigen::MatrixXd G = qf.gram.cwiseProduct(W);
    const double v = re.dot(G * re) + im.dot(G * im);
    return surface_measure(plan_->d()) * v;
}

double SmoothingEngine::diagonal_limit(const QuadForm& qf, const Eigen::VectorXcd& fhat) const {
    // exact T -> infinity limit of the grid model: 2 pi * int Psi(E,E) dE,
    // trapezoid on the energy grid
    const int n = static_cast<int>(qf.energies.size());
    double s = 0.0;
    for (int j = 0; j + 1 < n; ++j) {
        const double dj = qf.energies[j + 1] - qf.energies[j];
        const double a = std::norm(fhat[j]) * qf.rho[j] * qf.rho[j] * qf.gram(j, j);
        const double b =
            std::norm(fhat[j + 1]) * qf.rho[j + 1] * qf.rho[j + 1] * qf.gram(j + 1, j + 1);
        s += 0.5 * dj * (a + b);
    }
    return 2.0 * M_PI * surface_measure(plan_->d()) * s;
}

SmoothingReport SmoothingEngine::evaluate(SmoothingId id, const RadialFunction& f,
                                          double T) const {
    SmoothingReport rep;
    rep.estimate_id = id;
    rep.d = plan_->d();
    rep.eps = eps_;
    rep.T = T;
    const Eigen::VectorXcd fhat = plan_->forward(f);
    const Eigen::VectorXcd fhat_free = plan_free_->forward(f);

    const double fnorm = l2_norm(f);
    const auto& fsg = *plan_free_->spectral();
    double quarter2 = 0.0;  // ||(-Delta)^{1/4} f||_2^2
    for (int j = 0; j < fsg.size(); ++j)
        quarter2 += fsg.weights[j] * fsg.nodes[j] * std::norm(fhat_free[j]);
    quarter2 *= surface_measure(plan_->d());

    switch (id) {
        case SmoothingId::firstest: {
            const double l1 = spacetime_integral(grad_weps_, fhat, T) +
                              spacetime_integral(u_wsec_, fhat, T);
            const double l2 = spacetime_integral(grad_weps_, fhat, 2.0 * T) +
                              spacetime_integral(u_wsec_, fhat, 2.0 * T);
            rep.lhs = l1;
            rep.lhs_2T = l2;
            rep.rhs = quarter2 / eps_;
            rep.t_infinity = diagonal_limit(grad_weps_, fhat) + diagonal_limit(u_wsec_, fhat);
            break;
        }
        case SmoothingId::secondest: {
            const double l1 = spacetime_integral(frac_weps_, fhat, T);
            const double l2 = spacetime_integral(frac_weps_, fhat, 2.0 * T);
            rep.lhs = std::sqrt(l1);
            rep.lhs_2T = std::sqrt(l2);
            rep.rhs = fnorm / std::sqrt(eps_);
            rep.t_infinity = std::sqrt(diagonal_limit(frac_weps_, fhat));
            break;
        }
        case SmoothingId::thirdest: {
            const double l1 = spacetime_integral(wave_weps_, fhat, T);
            const double l2 = spacetime_integral(wave_weps_, fhat, 2.0 * T);
            rep.lhs = std::sqrt(l1);
            rep.lhs_2T = std::sqrt(l2);
            rep.rhs = fnorm / std::sqrt(eps_);
            rep.t_infinity = std::sqrt(diagonal_limit(wave_weps_, fhat));
            break;
        }
    }
    rep.ratio = (rep.rhs > 0.0) ? rep.lhs / rep.rhs : 0.0;
    rep.drift = (rep.lhs > 0.0) ? std::abs(rep.lhs_2T - rep.lhs) / rep.lhs : 0.0;
    return rep;
}

BFormReport bform_check(const HankelPlan& plan_free, double eps, const TestFamily& family) {
    PsiCalculus psi(plan_free.d(), eps);
    BFormReport rep;
    const auto& g = *plan_free.radial();
    const auto& sg = *plan_free.spectral();
    const double om = surface_measure(plan_free.d());
    const int n = family.size();

    std::vector<Eigen::VectorXcd> spect(n);
    std::vector<RadialFunction> deriv;
    std::vector<double> hhalf(n);
    for (int i = 0; i < n; ++i) {
        spect[i] = plan_free.forward(family.members[i]);
        deriv.push_back(plan_free.derivative_from_spectral(spect[i]));
        double h = 0.0;
        for (int j = 0; j < sg.size(); ++j)
            h += sg.weights[j] * sg.nodes[j] * std::norm(spect[i][j]);
        hhalf[i] = std::sqrt(om * h);
    }
    for (int iv = 0; iv < n; ++iv) {
        for (int iw = 0; iw < n; ++iw) {
            std::complex<double> b = 0.0;
            for (int k = 0; k < g.nodes.size(); ++k)
                b += g.weights[k] * psi.psi_prime(g.nodes[k]) *
                     std::conj(family.members[iv].values[k]) * deriv[iw].values[k];
            const double ratio = om * std::abs(b) / (hhalf[iv] * hhalf[iw]);
            if (ratio > rep.max_ratio) {
                rep.max_ratio = ratio;
                rep.arg_v = iv;
                rep.arg_w = iw;
            }
        }
    }
    rep.pass = rep.max_ratio <= rep.bound + 1e-3;
    return rep;
}

}  // namespace invsq
