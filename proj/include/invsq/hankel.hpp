#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "invsq/quadrature.hpp"
#include "invsq/specfun.hpp"
#include "invsq/spectrum.hpp"

namespace invsq {

struct RoundTripError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GridMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct SubordinationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Octave-panel grid layout for one plan. Node counts per octave follow the
// oscillation budget: the radial rule resolves e^{i lambda_max r}, the
// spectral rule resolves e^{i r_max lambda}.
struct GridConfig {
    int radial_octave_lo = -28;   // r in [2^lo, 2^hi]; deep octaves resolve
    int radial_octave_hi = 6;     // the |x|^{-kappa} ball integrals
    int spectral_octave_lo = -18; // lambda in [2^lo, 2^hi]
    int spectral_octave_hi = 5;
    int base_nodes = 24;
    int pad = 12;
    double nodes_per_phase = 0.55;
    double roundtrip_tol = 1e-8;

    static GridConfig preset_default() { return {}; }
    static GridConfig preset_quick() {
        GridConfig c;
        c.radial_octave_lo = -24;
        c.radial_octave_hi = 5;
        c.spectral_octave_lo = -14;
        c.spectral_octave_hi = 4;
        c.base_nodes = 16;
        c.pad = 8;
        return c;
    }
    double r_min() const { return std::ldexp(1.0, radial_octave_lo); }
    double r_max() const { return std::ldexp(1.0, radial_octave_hi); }
    double lambda_min() const { return std::ldexp(1.0, spectral_octave_lo); }
    double lambda_max() const { return std::ldexp(1.0, spectral_octave_hi); }
    std::string cache_key(int d, double nu) const;
};

// Radial quadrature grid; weights include the measure r^{d-1} dr.
struct RadialGrid {
    int d = 3;
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
    std::vector<double> boundaries;

    int size() const { return static_cast<int>(nodes.size()); }
    double r_min() const { return boundaries.front(); }
    double r_max() const { return boundaries.back(); }
};

// Spectral quadrature grid; weights include lambda^{d-1} d lambda.
struct SpectralGrid {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
    std::vector<double> boundaries;

    int size() const { return static_cast<int>(nodes.size()); }
    double lambda_max() const { return boundaries.back(); }
};

std::shared_ptr<const RadialGrid> make_radial_grid(int d, const GridConfig& cfg);
std::shared_ptr<const SpectralGrid> make_spectral_grid(int d, const GridConfig& cfg);

// Complex-valued radial profile sampled on a grid.
struct RadialFunction {
    std::shared_ptr<const RadialGrid> grid;
    Eigen::VectorXcd values;

    RadialFunction() = default;
    RadialFunction(std::shared_ptr<const RadialGrid> g, Eigen::VectorXcd v)
        : grid(std::move(g)), values(std::move(v)) {
        if (!grid || values.size() != grid->nodes.size())
            throw GridMismatchError("RadialFunction: values do not match grid");
    }
};

RadialFunction make_radial_function(std::shared_ptr<const RadialGrid> grid,
                                    const std::function<std::complex<double>(double)>& f);

// Order-nu Hankel-type transform plan diagonalizing the radial part of L_a:
// basis phi_lambda(r) = (lambda r)^{-(d-2)/2} J_nu(lambda r), self-inverse
// against the measures r^{d-1} dr and lambda^{d-1} d lambda.
class HankelPlan {
  public:
    HankelPlan(int d, specfun::BesselOrder order, const GridConfig& cfg);

    HankelPlan(const HankelPlan&) = delete;
    HankelPlan& operator=(const HankelPlan&) = delete;

    int d() const { return d_; }
    double order() const { return nu_; }
    bool critical_order() const { return nu_ == 0.0; }
    const GridConfig& config() const { return cfg_; }
    const std::shared_ptr<const RadialGrid>& radial() const { return radial_; }
    const std::shared_ptr<const SpectralGrid>& spectral() const { return spectral_; }

    // basis samples phi_{lambda_j}(r_i), row j, column i
    const Eigen::MatrixXd& basis() const { return phi_; }
    // d/dr of the basis samples (built on first use)
    const Eigen::MatrixXd& basis_derivative() const;

    Eigen::VectorXcd forward(const RadialFunction& f) const;
    RadialFunction inverse(const Eigen::VectorXcd& fhat) const;
    RadialFunction derivative_from_spectral(const Eigen::VectorXcd& fhat) const;

    double roundtrip_defect() const { return roundtrip_defect_; }

  private:
    int d_;
    double nu_;
    GridConfig cfg_;
    std::shared_ptr<const RadialGrid> radial_;
    std::shared_ptr<const SpectralGrid> spectral_;
    Eigen::MatrixXd phi_;
    mutable Eigen::MatrixXd dphi_;
    mutable std::once_flag dphi_once_;
    double roundtrip_defect_ = 0.0;
};

std::shared_ptr<const HankelPlan> build_plan(const ModelParams& params, specfun::BesselOrder order,
                                             const GridConfig& cfg);
// plan for the radial sector of L_a itself (order nu0)
std::shared_ptr<const HankelPlan> build_plan(const ModelParams& params, const GridConfig& cfg);
// plan for the free Laplacian on the same grids (order (d-2)/2)
std::shared_ptr<const HankelPlan> build_free_plan(int d, const GridConfig& cfg);

using SpectralSymbol = std::function<std::complex<double>(double)>;

RadialFunction apply_multiplier(const HankelPlan& plan, const RadialFunction& f,
                                const SpectralSymbol& m);
RadialFunction heat_semigroup(const HankelPlan& plan, const RadialFunction& f, double t);
RadialFunction radial_derivative(const HankelPlan& plan, const RadialFunction& f);

enum class PowerDirection { negative, positive };

// L_a^{±s/2} via the heat-subordination quadrature (log-t Gauss-Legendre
// panels with analytic tail completion), the independent route against the
// direct spectral multiplier lambda^{±s}.
RadialFunction fractional_power_subordination(const HankelPlan& plan, const RadialFunction& f,
                                              double s, PowerDirection dir);
// the direct route
RadialFunction fractional_power_multiplier(const HankelPlan& plan, const RadialFunction& f,
                                           double s, PowerDirection dir);

// subordination weights lambda -> approximate lambda^{-s} (or lambda^{+s})
// as computed by the quadrature; exposed for route cross-validation tests
Eigen::VectorXd subordination_symbol(const Eigen::VectorXd& lambdas, double s, PowerDirection dir);

double weighted_lp_norm(const RadialFunction& f, const WeightSpec& w, double p);
double l2_norm(const RadialFunction& f);
double surface_measure(int d);  // omega_{d-1} = 2 pi^{d/2} / Gamma(d/2)

}  // namespace invsq
