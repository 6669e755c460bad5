#include "invsq/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace invsq {

using specfun::BesselOrder;

double free_heat_kernel(double t, double r, double rho, double cos_theta, int d) {
    if (!(t > 0.0)) throw std::domain_error("free_heat_kernel: t > 0");
    const double w = r * r + rho * rho - 2.0 * r * rho * cos_theta;
    return std::pow(4.0 * M_PI * t, -0.5 * d) * std::exp(-w / (4.0 * t));
}

double free_derivative_kernel(double t, double r, double rho, double cos_theta, int d) {
    const double w = r * r + rho * rho - 2.0 * r * rho * cos_theta;
    return free_heat_kernel(t, r, rho, cos_theta, d) * (0.5 * d / t - 0.25 * w / (t * t));
}

namespace {

double sector_heat_kernel(double nu, int d, double t, double r, double rho) {
    const double z = 0.5 * r * rho / t;
    const double s0 = 0.5 * (d - 2);
    const double dr = r - rho;
    return 0.5 / t * std::pow(r * rho, -s0) * std::exp(-dr * dr / (4.0 * t)) *
           specfun::bessel_i_scaled(BesselOrder(nu), z);
}

}  // namespace

double radial_heat_kernel(const ModelParams& params, double t, double r, double rho) {
    if (!(t > 0.0) || !(r > 0.0) || !(rho > 0.0))
        throw std::domain_error("radial_heat_kernel: needs t, r, rho > 0");
    return sector_heat_kernel(params.nu0, params.d, t, r, rho);
}

double sector_derivative_kernel(double nu, int d, int k, double t, double r, double rho) {
    if (k != 1 && k != 2) throw std::domain_error("derivative_kernel: k in {1,2}");
    const double s0 = 0.5 * (d - 2);
    const double z = 0.5 * r * rho / t;
    const double q = 0.25 * (r * r + rho * rho) / t;
    const double dr = r - rho;
    const double gauss = std::exp(-dr * dr / (4.0 * t));
    const double pre = 0.5 * std::pow(r * rho, -s0) * gauss;
    const double i0 = specfun::bessel_i_scaled(BesselOrder(nu), z);
    const double i1 = specfun::bessel_i_scaled(BesselOrder(nu + 1.0), z);
    // z I_nu'(z) = z I_{nu+1}(z) + nu I_nu(z)
    const double zip = z * i1 + nu * i0;
    if (k == 1) {
        // -d/dt of the sector heat kernel
        return pre / (t * t) * ((1.0 - q + nu) * i0 + z * i1);
    }
    // (q^2 - 4q + 2 + z^2 + nu^2) I + (3 - 2q) z I'
    return pre / (t * t * t) *
           ((q * q - 4.0 * q + 2.0 + z * z + nu * nu) * i0 + (3.0 - 2.0 * q) * zip);
}

double derivative_kernel(const ModelParams& params, int k, double t, double r, double rho) {
    if (!(t > 0.0) || !(r > 0.0) || !(rho > 0.0))
        throw std::domain_error("derivative_kernel: needs t, r, rho > 0");
    return sector_derivative_kernel(params.nu0, params.d, k, t, r, rho);
}

std::complex<double> complex_time_kernel(const ModelParams& params, std::complex<double> z,
                                         double r, double rho) {
    if (!(std::abs(std::arg(z)) < M_PI / 4))
        throw std::domain_error("complex_time_kernel: needs |arg z| < pi/4");
    const double s0 = 0.5 * (params.d - 2);
    const std::complex<double> w = 0.5 * r * rho / z;
    const double dr = r - rho;
    return 0.5 / z * std::pow(r * rho, -s0) * std::exp(-dr * dr / (4.0 * z)) *
           specfun::bessel_i_scaled(BesselOrder(params.nu0), w);
}

namespace {

// shared driver for the zonal sums: term_l = sector(nu_l) * Z_l(cos theta)
template <typename SectorFn>
ZonalValue zonal_sum(const ModelParams& params, double cos_theta, int ell_max, double tail_tol,
                     SectorFn&& sector) {
    const int d = params.d;
    const double lam0 = 0.5 * (d - 2);
    const double zpre = specfun::gamma_fn(lam0) / (2.0 * std::pow(M_PI, 0.5 * d));
    double c_prev = 1.0;                      // C_0
    double c_cur = 2.0 * lam0 * cos_theta;    // C_1
    double sum = 0.0, last = 0.0, prev_mag = 0.0;
    int small_run = 0;
    ZonalValue out;
    for (int l = 0; l <= ell_max; ++l) {
        double cl;
        if (l == 0) {
            cl = c_prev;
        } else if (l == 1) {
            cl = c_cur;
        } else {
            const double cn =
                (2.0 * cos_theta * (l + lam0 - 1.0) * c_cur - (l + 2.0 * lam0 - 2.0) * c_prev) / l;
            c_prev = c_cur;
            c_cur = cn;
            cl = cn;
        }
        const double nu_l = std::sqrt((l + lam0) * (l + lam0) + params.a);
        const double term = sector(nu_l) * zpre * (lam0 + l) * cl;
        sum += term;
        out.ell_used = l;
        const double mag = std::abs(term);
        // |C_l(x)| <= C_l(1), so the magnitude envelope still decays once the
        // Bessel factor enters its super-geometric regime
        const double scale = std::max(std::abs(sum), 1e-300);
        if (l >= 2 && mag < tail_tol * scale && prev_mag < tail_tol * scale) {
            if (++small_run >= 3) {
                const double ratio = prev_mag > 0.0 ? std::min(0.9, mag / prev_mag) : 0.0;
                out.tail = mag * ratio / (1.0 - ratio);
                out.value = sum;
                return out;
            }
        } else {
            small_run = 0;
        }
        prev_mag = mag;
        last = term;
    }
    (void)last;
    std::ostringstream os;
    os << "zonal sum not converged by ell_max=" << ell_max;
    throw TruncationError(os.str());
}

}  // namespace

ZonalValue zonal_heat_kernel(const ModelParams& params, const KernelPoint& p, int ell_max,
                             double tail_tol) {
    const double t = p.t.real();
    if (p.t.imag() != 0.0 || !(t > 0.0))
        throw std::domain_error("zonal_heat_kernel: real t > 0");
    return zonal_sum(params, p.cos_theta, ell_max, tail_tol, [&](double nu) {
        return sector_heat_kernel(nu, params.d, t, p.r, p.rho);
    });
}

ZonalValue zonal_derivative_kernel(const ModelParams& params, const KernelPoint& p, int ell_max,
                                   double tail_tol) {
    const double t = p.t.real();
    if (p.t.imag() != 0.0 || !(t > 0.0))
        throw std::domain_error("zonal_derivative_kernel: real t > 0");
    return zonal_sum(params, p.cos_theta, ell_max, tail_tol, [&](double nu) {
        return sector_derivative_kernel(nu, params.d, 1, t, p.r, p.rho);
    });
}

ZonalValue difference_kernel(const ModelParams& params, double t, double r, double rho,
                             double cos_theta, int ell_max, double tail_tol) {
    ZonalValue out;
    if (params.a == 0.0) return out;  // the two semigroups coincide
    KernelPoint p;
    p.t = t;
    p.r = r;
    p.rho = rho;
    p.cos_theta = cos_theta;
    ZonalValue za = zonal_derivative_kernel(params, p, ell_max, tail_tol);
    out.value = t * za.value - t * free_derivative_kernel(t, r, rho, cos_theta, params.d);
    out.tail = t * za.tail;
    out.ell_used = za.ell_used;
    return out;
}

namespace {

std::vector<double> log_space(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1));
    return v;
}

struct ScanResult {
    double sup = 0.0;
    KernelPoint arg;
    double tail = 0.0;
};

ScanResult run_scan(ScanKind kind, const ModelParams& params, double c, const ScanGrid& g) {
    const auto ts = log_space(g.t_lo, g.t_hi, g.n_t);
    const auto rs = log_space(g.r_lo, g.r_hi, g.n_r);
    const double sigma = params.sigma;
    const int d = params.d;

    struct Pt {
        double t, r, rho, th;
    };
    std::vector<Pt> pts;
    if (kind == ScanKind::complex_time) {
        for (double t : ts)
            for (double r : rs)
                for (double rho : rs)
                    for (double az : g.args_z) pts.push_back({t, r, rho, az});
    } else {
        for (double t : ts)
            for (double r : rs)
                for (double rho : rs)
                    for (double th : g.thetas) {
                        if (kind == ScanKind::difference_a_neg &&
                            (r < 0.5 * std::sqrt(t) || rho < 0.5 * std::sqrt(t)))
                            continue;
                        pts.push_back({t, r, rho, th});
                    }
    }

    std::vector<double> ratio(pts.size(), 0.0), tails(pts.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(pts.size()); ++i) {
        const auto& q = pts[i];
        double val = 0.0, tail = 0.0, bound = 1.0;
        switch (kind) {
            case ScanKind::mszz_heat: {
                KernelPoint kp{q.t, q.r, q.rho, std::cos(q.th)};
                ZonalValue z = zonal_heat_kernel(params, kp, g.ell_max, g.tail_tol);
                val = std::abs(z.value);
                tail = z.tail;
                const double w = q.r * q.r + q.rho * q.rho - 2.0 * q.r * q.rho * std::cos(q.th);
                bound = std::pow(1.0 + std::sqrt(q.t) / q.r, sigma) *
                        std::pow(1.0 + std::sqrt(q.t) / q.rho, sigma) * std::pow(q.t, -0.5 * d) *
                        std::exp(-w / (c * q.t));
                break;
            }
            case ScanKind::ptk: {
                KernelPoint kp{q.t, q.r, q.rho, std::cos(q.th)};
                double v, tl;
                if (g.derivative_order == 1) {
                    ZonalValue z = zonal_derivative_kernel(params, kp, g.ell_max, g.tail_tol);
                    v = z.value;
                    tl = z.tail;
                } else {
                    // radial sector only for k = 2
                    v = derivative_kernel(params, 2, q.t, q.r, q.rho);
                    tl = 0.0;
                }
                val = std::abs(v);
                tail = tl;
                const double w = q.r * q.r + q.rho * q.rho - 2.0 * q.r * q.rho * std::cos(q.th);
                bound = std::pow(1.0 + std::sqrt(q.t) / q.r, sigma) *
                        std::pow(1.0 + std::sqrt(q.t) / q.rho, sigma) *
                        std::pow(q.t, -(g.derivative_order + 0.5 * d)) * std::exp(-w / (c * q.t));
                break;
            }
            case ScanKind::complex_time: {
                const std::complex<double> z = std::polar(q.t, q.th);
                const double az = std::abs(z);
                val = std::abs(complex_time_kernel(params, z, q.r, q.rho));
                const double w = (q.r - q.rho) * (q.r - q.rho);
                bound = std::pow(1.0 + std::sqrt(az) / q.r, sigma) *
                        std::pow(1.0 + std::sqrt(az) / q.rho, sigma) * std::pow(az, -0.5 * d) *
                        std::exp(-w / (c * az));
                break;
            }
            case ScanKind::difference_a_pos:
            case ScanKind::difference_a_neg: {
                ZonalValue dv =
                    difference_kernel(params, q.t, q.r, q.rho, std::cos(q.th), g.ell_max,
                                      g.tail_tol);
                val = std::abs(dv.value);
                tail = dv.tail;
                const double w = q.r * q.r + q.rho * q.rho - 2.0 * q.r * q.rho * std::cos(q.th);
                const double pen = 1.0 + (q.r + q.rho) / std::sqrt(q.t);
                bound = std::pow(q.t, -0.5 * d) / (pen * pen) * std::exp(-w / (c * q.t));
                break;
            }
        }
        ratio[i] = (bound > 0.0) ? val / bound : 0.0;
        tails[i] = tail;
    }
    ScanResult res;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        res.tail = std::max(res.tail, tails[i]);
        if (ratio[i] > res.sup) {
            res.sup = ratio[i];
            const auto& q = pts[i];
            if (kind == ScanKind::complex_time)
                res.arg = KernelPoint{std::polar(q.t, q.th), q.r, q.rho, 1.0};
            else
                res.arg = KernelPoint{q.t, q.r, q.rho, std::cos(q.th)};
        }
    }
    return res;
}

}  // namespace

BoundRatioReport bound_ratio_scan(ScanKind kind, const ModelParams& params, double c,
                                  const ScanGrid& grid) {
    if ((kind == ScanKind::difference_a_pos && params.a < 0.0) ||
        (kind == ScanKind::difference_a_neg && params.a >= 0.0))
        throw std::domain_error("bound_ratio_scan: difference kind does not match sign of a");
    BoundRatioReport rep;
    rep.kind = kind;
    rep.c_used = c;
    const ScanResult base = run_scan(kind, params, c, grid);
    const ScanResult fine = run_scan(kind, params, c, grid.refined());
    rep.sup_ratio = fine.sup;
    rep.arg_sup = fine.arg;
    rep.truncation_tail = std::max(base.tail, fine.tail);
    rep.refinement_drift =
        (base.sup > 0.0 || fine.sup > 0.0)
            ? std::abs(fine.sup - base.sup) / std::max({base.sup, fine.sup, 1e-300})
            : 0.0;
    rep.stable = rep.refinement_drift < 0.05;
    std::ostringstream os;
    os << "log t in [" << grid.t_lo << "," << grid.t_hi << "] x" << grid.n_t << "; log r,rho in ["
       << grid.r_lo << "," << grid.r_hi << "] x" << grid.n_r << "; angles " << grid.thetas.size()
       << "; refined 2x";
    rep.grid_description = os.str();
    rep.points = grid.n_t * grid.n_r * grid.n_r * static_cast<int>(grid.thetas.size());
    return rep;
}

double offdiagonal_check(const HankelPlan& plan, const ModelParams& params, double t,
                         const Annulus& E, const Annulus& F, double p, double q,
                         const RadialFunction& f, double c) {
    if (E.outer > F.inner && F.outer > E.inner)
        throw std::invalid_argument("offdiagonal_check: annuli must be disjoint");
    const WindowSpec win = window(params, 1.0, TheoremId::square);  // (d_sigma', d_sigma)
    const auto inside = [&](double v) {
        return v > win.p_lower.value() && v < win.p_upper.value();
    };
    if (!(p <= q) || !inside(p) || !inside(q))
        throw std::domain_error("offdiagonal_check: exponents violate d_sigma' < p <= q < d_sigma");

    const auto& grid = *plan.radial();
    Eigen::VectorXcd trunc = f.values;
    for (int i = 0; i < grid.nodes.size(); ++i)
        if (grid.nodes[i] < E.inner || grid.nodes[i] > E.outer) trunc[i] = 0.0;
    RadialFunction fe(plan.radial(), trunc);
    RadialFunction u = heat_semigroup(plan, fe, t);

    const double om = surface_measure(grid.d);
    double nf = 0.0, nu = 0.0;
    for (int i = 0; i < grid.nodes.size(); ++i) {
        const double r = grid.nodes[i];
        if (r >= E.inner && r <= E.outer)
            nf += grid.weights[i] * std::pow(std::abs(fe.values[i]), p);
        if (r >= F.inner && r <= F.outer)
            nu += grid.weights[i] * std::pow(std::abs(u.values[i]), q);
    }
    nf = std::pow(om * nf, 1.0 / p);
    nu = std::pow(om * nu, 1.0 / q);
    if (nf == 0.0) return 0.0;
    const double dist = (F.inner >= E.outer) ? F.inner - E.outer : E.inner - F.outer;
    const double bound =
        std::pow(t, -0.5 * grid.d * (1.0 / p - 1.0 / q)) * std::exp(-dist * dist / (c * t)) * nf;
    return nu / bound;
}

double potential_convolution_point(int d, double c, double x_radius, double t) {
    // the integrand ratio depends on xi = |x|/sqrt(t) only
    const double xi = x_radius / std::sqrt(t);
    const double lam0 = 0.5 * (d - 2);
    const double omega_dm2 =
        2.0 * std::pow(M_PI, 0.5 * (d - 1)) / specfun::gamma_fn(0.5 * (d - 1));
    // int_0^pi e^{s cos th} sin^{d-2} th dth = sqrt(pi) Gamma(lam0+1/2) (2/s)^lam0 I_lam0(s)
    const double ang_pre = std::sqrt(M_PI) * specfun::gamma_fn(lam0 + 0.5);
    const double rho_hi = xi + 8.0 * std::sqrt(c) + 1.0;
    PanelRule rule = log_gl(1e-7, rho_hi, 6, 12);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double rho = rule.nodes[i];
        const double s = 2.0 * xi * rho / c;
        double ang;
        if (s < 1e-6) {
            ang = std::exp(-(xi * xi + rho * rho) / c) / specfun::gamma_fn(lam0 + 1.0);
        } else {
            ang = std::pow(2.0 / s, lam0) * specfun::bessel_i_scaled(BesselOrder(lam0), s) *
                  std::exp(-(xi - rho) * (xi - rho) / c);
        }
        sum += rule.weights[i] * rho * std::pow(rho, d - 3) * ang;
    }
    return xi * xi * omega_dm2 * ang_pre * sum;
}

PotentialConvolutionReport potential_convolution_check(int d, double c, int n_xi, double xi_lo,
                                                       double xi_hi) {
    PotentialConvolutionReport rep;
    auto run = [&](int n) {
        double sup = 0.0, arg = xi_lo, top = 0.0;
        const auto xs = log_space(xi_lo, xi_hi, n);
        for (double xi : xs) {
            const double v = potential_convolution_point(d, c, xi, 1.0);
            if (v > sup) {
                sup = v;
                arg = xi;
            }
            top = v;
        }
        return std::tuple{sup, arg, top};
    };
    auto [s0, a0, t0] = run(n_xi);
    auto [s1, a1, t1] = run(2 * n_xi);
    rep.sup = s1;
    rep.arg_xi = a1;
    rep.plateau = t1;
    rep.plateau_limit = std::pow(M_PI * c, 0.5 * d);
    rep.refinement_drift = std::abs(s1 - s0) / std::max(s0, 1e-300);
    (void)a0;
    (void)t0;
    return rep;
}

}  // namespace invsq
