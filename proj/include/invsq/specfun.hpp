#pragma once

#include <complex>
#include <stdexcept>

namespace invsq::specfun {

// Order of a Bessel function on the Friedrichs branch: nu >= 0 and finite.
struct BesselOrder {
    double nu;
    explicit BesselOrder(double nu_) : nu(nu_) {
        if (!(nu >= 0.0) || !std::isfinite(nu))
            throw std::domain_error("BesselOrder: order must be finite and >= 0");
    }
};

struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

// Gamma function, relative error <= 1e-13 on [-30, 171].
// Throws PoleError at nonpositive integers, std::overflow_error past ~171.6.
double gamma_fn(double x);

// log Gamma for x > 0.
double lgamma_fn(double x);

// e^{-z} I_nu(z) for z >= 0. Never overflows; relative error <= 1e-11 for
// nu in [0, 60], z in [0, 1e8]. Larger orders (zonal sector tails) keep
// ~1e-9 accuracy.
double bessel_i_scaled(BesselOrder order, double z);

// e^{-z} I_nu(z) for complex z with Re z >= 0; validated for |arg z| <= pi/4.
// Throws std::domain_error outside the region where the evaluation holds
// tolerance (large order together with large |z| at wide angles).
std::complex<double> bessel_i_scaled(BesselOrder order, std::complex<double> z);

// J_nu(z), z >= 0; relative error <= 1e-10 for nu in [0, 60], z in [0, 1e5]
// (absolute near zeros).
double bessel_j(BesselOrder order, double z);

// d/dz J_nu(z) through J_nu' = (nu/z) J_nu - J_{nu+1}; the z -> 0 limit is
// analytic: 0 for nu = 0 or nu > 1, 1/2 for nu = 1, +inf for 0 < nu < 1.
double bessel_j_prime(BesselOrder order, double z);

// Gegenbauer polynomial C_ell^lambda(x), |x| <= 1, by the three-term recurrence.
double gegenbauer(int ell, double lambda, double x);

// Sine integral Si(x) = int_0^x sin(t)/t dt.
double sine_integral(double x);

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x)/Gamma(a), a > 0.
double gamma_q(double a, double x);

}  // namespace invsq::specfun
