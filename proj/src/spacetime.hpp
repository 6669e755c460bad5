#pragma once

#include <Eigen/Dense>

namespace invsq::detail {

// One consistent 4th antiderivative of the Dirichlet kernel 2 sin(T tau)/tau,
// series-evaluated near tau = 0.
double psi2(double tau, double T);

// Quadrature weights W_{jk} for the exact time integral
//   int int Psi(E,E') * int_{-T}^{T} e^{it(E-E')} dt dE dE'
// with Psi replaced by its bilinear interpolant on the (ascending) energy
// grid. Boundary nodes carry zero weight; the interpolant must vanish there.
Eigen::MatrixXd dirichlet_filon_weights(const Eigen::VectorXd& energies, double T);

}  // namespace invsq::detail
