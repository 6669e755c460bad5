#include "spacetime.hpp"

#include <cmath>

#include "invsq/specfun.hpp"

namespace invsq::detail {

double psi2(double tau, double T) {
    const double x = T * tau;
    if (std::abs(x) < 0.7) {
        const double x2 = x * x;
        // (-2 + 3x^2 + x^4/4 - x^6/360 + x^8/33600 - x^10/4233600) / (3T^3)
        double s = -1.0 / 4233600.0;
        s = s * x2 + 1.0 / 33600.0;
        s = s * x2 - 1.0 / 360.0;
        s = s * x2 + 0.25;
        s = s * x2 + 3.0;
        s = s * x2 - 2.0;  // note: the x^2 chain ends at the constant term
        return s / (3.0 * T * T * T);
    }
    const double si = specfun::sine_integral(x);
    const double c = std::cos(x), sn = std::sin(x);
    return (tau * tau * tau * si + tau * tau * c / T + tau * sn / (T * T) -
            2.0 * c / (T * T * T)) /
           3.0;
}

Eigen::MatrixXd dirichlet_filon_weights(const Eigen::VectorXd& E, double T) {
    const int n = static_cast<int>(E.size());
    if (n < 4) throw std::invalid_argument("dirichlet_filon_weights: need >= 4 energies");
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = psi2(E[i] - E[j], T);
    Eigen::VectorXd d(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        d[i] = E[i + 1] - E[i];
        if (!(d[i] > 0.0))
            throw std::invalid_argument("dirichlet_filon_weights: energies must increase");
    }
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
    for (int p = 0; p + 1 < n; ++p) {
        for (int q = 0; q + 1 < n; ++q) {
            const double dd =
                (M(p + 1, q + 1) - M(p + 1, q) - M(p, q + 1) + M(p, q)) / (d[p] * d[q]);
            W(p + 1, q + 1) += dd;
            W(p, q) += dd;
            W(p + 1, q) -= dd;
            W(p, q + 1) -= dd;
        }
    }
    W.row(0).setZero();
    W.col(0).setZero();
    W.row(n - 1).setZero();
    W.col(n - 1).setZero();
    return W;
}

}  // namespace invsq::detail
