#pragma once

#include <complex>
#include <string>
#include <vector>

#include "invsq/hankel.hpp"
#include "invsq/spectrum.hpp"

namespace invsq {

struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation point of a (possibly complex-time) kernel: radii of x and y and
// the cosine of the angle between them.
struct KernelPoint {
    std::complex<double> t{1.0, 0.0};
    double r = 1.0;
    double rho = 1.0;
    double cos_theta = 1.0;
};

// (4 pi t)^{-d/2} exp(-|x-y|^2 / 4t)
double free_heat_kernel(double t, double r, double rho, double cos_theta, int d);
// kernel of (-Delta) e^{t Delta}
double free_derivative_kernel(double t, double r, double rho, double cos_theta, int d);

// Radial (l = 0) heat kernel of L_a:
//   k_t(r,rho) = (2t)^{-1} (r rho)^{-(d-2)/2} e^{-(r-rho)^2/4t} * e^{-z} I_nu0(z),
//   z = r rho / 2t, evaluated entirely in scaled form.
double radial_heat_kernel(const ModelParams& params, double t, double r, double rho);

// kernel of L_a^k e^{-t L_a} in the radial sector, k in {1, 2}
double derivative_kernel(const ModelParams& params, int k, double t, double r, double rho);
// same for a single zonal sector of order nu
double sector_derivative_kernel(double nu, int d, int k, double t, double r, double rho);

// complex-time radial kernel, |arg z| < pi/4
std::complex<double> complex_time_kernel(const ModelParams& params, std::complex<double> z,
                                         double r, double rho);

struct ZonalValue {
    double value = 0.0;
    double tail = 0.0;  // bound on the truncated remainder
    int ell_used = 0;
};

// Full heat kernel p_t(x,y) as the zonal-harmonic sum over sectors of order
// nu_l = sqrt((l+(d-2)/2)^2 + a); the angular factors are
// Z_l(c) = (l + (d-2)/2) Gamma((d-2)/2) / (2 pi^{d/2}) * C_l^{(d-2)/2}(c).
ZonalValue zonal_heat_kernel(const ModelParams& params, const KernelPoint& p, int ell_max,
                             double tail_tol = 1e-10);
// zonal sum for the derivative kernel L_a e^{-tL_a}
ZonalValue zonal_derivative_kernel(const ModelParams& params, const KernelPoint& p, int ell_max,
                                   double tail_tol = 1e-10);
// kernel of t L_a e^{-t L_a} + t Delta e^{t Delta} (identically zero at a=0)
ZonalValue difference_kernel(const ModelParams& params, double t, double r, double rho,
                             double cos_theta, int ell_max, double tail_tol = 1e-10);

enum class ScanKind { mszz_heat, ptk, complex_time, difference_a_pos, difference_a_neg };

struct ScanGrid {
    int n_t = 8;
    double t_lo = 0.05, t_hi = 20.0;
    int n_r = 10;
    double r_lo = 0.1, r_hi = 10.0;
    std::vector<double> thetas{0.0, M_PI / 2, M_PI};
    std::vector<double> args_z{-0.589, -M_PI / 8, 0.0, M_PI / 8, 0.589};  // 3pi/16 edges
    int ell_max = 4000;
    double tail_tol = 1e-10;
    int derivative_order = 1;

    ScanGrid refined() const {
        ScanGrid g = *this;
        g.n_t *= 2;
        g.n_r *= 2;
        return g;
    }
};

struct BoundRatioReport {
    ScanKind kind;
    double sup_ratio = 0.0;
    KernelPoint arg_sup;
    double c_used = 8.0;
    std::string grid_description;
    double truncation_tail = 0.0;
    double refinement_drift = 0.0;
    bool stable = false;
    int points = 0;
};

// sup over the scan grid of |kernel| / bound(c); the report carries the
// refinement drift of the sup under doubled grid density.
BoundRatioReport bound_ratio_scan(ScanKind kind, const ModelParams& params, double c,
                                  const ScanGrid& grid);

struct Annulus {
    double inner = 1.0;
    double outer = 2.0;
};

// ||e^{-tL_a} f||_{L^q(F)} over the off-diagonal bound
// t^{-(d/2)(1/p-1/q)} e^{-dist(E,F)^2/(c t)} ||f||_{L^p(E)}
// for f truncated to the annulus E.
double offdiagonal_check(const HankelPlan& plan, const ModelParams& params, double t,
                         const Annulus& E, const Annulus& F, double p, double q,
                         const RadialFunction& f, double c = 16.0);

struct PotentialConvolutionReport {
    double sup = 0.0;
    double arg_xi = 0.0;
    double plateau = 0.0;        // value at the top of the xi-grid
    double plateau_limit = 0.0;  // (pi c)^{d/2}, the xi -> inf limit
    double refinement_drift = 0.0;
};

// sup_xi of xi^2 * int e^{-|xi e1 - z|^2/c} |z|^{-2} dz  (the |x|/sqrt(t)
// reduction of the heat-potential convolution bound)
PotentialConvolutionReport potential_convolution_check(int d, double c, int n_xi = 60,
                                                       double xi_lo = 1e-3, double xi_hi = 1e3);
// the unscaled two-variable version, for the scaling-invariance check
double potential_convolution_point(int d, double c, double x_radius, double t);

}  // namespace invsq
