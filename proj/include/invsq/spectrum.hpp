#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace invsq {

struct DimensionError : std::domain_error {
    using std::domain_error::domain_error;
};
struct CouplingError : std::domain_error {
    using std::domain_error::domain_error;
};

// Model data for L_a = -Delta + a/|x|^2 on R^d and the derived spectral
// quantities. sigma governs the heat-kernel growth near the origin, nu0 is
// the Bessel order of the radial reduction (sigma + nu0 = (d-2)/2), delta
// and eps_star drive the smoothing estimates.
struct ModelParams {
    int d = 3;
    double a = 0.0;
    double sigma = 0.0;
    double nu0 = 0.5;
    double delta = 0.0;
    std::optional<double> eps_star;  // set only when delta > 0

    bool critical() const { return nu0 == 0.0; }
};

ModelParams make_params(int d, double a);

// Lebesgue exponent in (0, inf]; infinity is a first-class value.
struct Exponent {
    double v = 2.0;

    Exponent() = default;
    explicit Exponent(double value) : v(value) {
        if (!(value > 0.0)) throw std::domain_error("Exponent: must be > 0 (inf allowed)");
    }
    static Exponent infinity() { return Exponent(std::numeric_limits<double>::infinity()); }
    bool is_inf() const { return std::isinf(v); }
    double value() const { return v; }
};

// conjugate exponent, with conjugate(1) = inf and conjugate(inf) = 1
Exponent conjugate(Exponent p);

// d_alpha = d/alpha for alpha > 0, infinity otherwise
Exponent d_alpha(double alpha, int d);

enum class TheoremId { equiv_forward, equiv_reverse, hardy, square, difference };

std::string theorem_name(TheoremId id);

// Exponent window and weight-class indices for one theorem: the statement
// holds for p in (p_lower, p_upper) and w in A_{p/ap_index} cap
// RH_{(rh_index/p)'}.
struct WindowSpec {
    TheoremId theorem_id;
    Exponent p_lower{1.0};
    Exponent p_upper{2.0};
    Exponent ap_index{1.0};
    Exponent rh_index{2.0};
    bool valid = false;
    std::string reason;

    bool contains(Exponent p) const {
        return valid && p.value() > p_lower.value() && p.value() < p_upper.value();
    }
};

// s is the fractional order (ignored for square, which is order-free)
WindowSpec window(const ModelParams& params, double s, TheoremId id);

// A radial Muckenhoupt weight: |x|^alpha, the smoothing weight
// w_eps = |x|^{eps-1}/(1+|x|^eps)^2, or tabulated samples.
struct WeightSpec {
    enum class Kind { power, composite, table };
    Kind kind = Kind::power;
    double alpha = 0.0;  // power exponent
    double eps = 0.5;    // composite parameter
    std::vector<double> table_r, table_w;
    std::string description = "|x|^0";

    static WeightSpec one();
    static WeightSpec power(double alpha);
    static WeightSpec composite(double eps);
    static WeightSpec table(std::vector<double> r, std::vector<double> w, std::string desc);

    double operator()(double r) const;
};

struct PowerWeightClass {
    bool in_ap = false;
    bool in_rh = false;
};

// |x|^alpha in A_p iff -d < alpha < d(p-1); in RH_q iff alpha q > -d.
// p = 1 uses the A_1 characterization -d < alpha <= 0; q = 1 is vacuous,
// q = inf means ess-sup control (alpha >= 0).
PowerWeightClass power_weight_class(double alpha, Exponent p, Exponent q, int d);

struct AdmissibilityReport {
    bool admissible = false;
    std::string method;  // "exact" or "envelope+numeric"
    std::string detail;
};

// Decides w in A_{p/p0} cap RH_{(q0/p)'}; exact for power weights, envelope
// plus the numeric characteristic estimate for the composite weight.
AdmissibilityReport weight_admissible(const WeightSpec& w, Exponent p, Exponent p0, Exponent q0,
                                      int d);

// Both sides of the Lemma-type duality
//   w in A_{p/p0} cap RH_{(q0/p)'}  <=>  w^{1-p'} in A_{p'/q0'} cap RH_{(p0'/p')'}
// evaluated exactly for |x|^alpha; returns whether they agree.
bool dual_weight_check(double alpha, Exponent p, Exponent p0, Exponent q0, int d);

struct SmoothingAdmissibility {
    bool admissible = false;
    bool delta_positive = false;
    AdmissibilityReport weight;
};

// Condition of the smoothing theorem: delta > 0 (strict) together with the
// weight conditions of the norm-equivalence theorem at s = 1/2, p = 2.
SmoothingAdmissibility smoothing_admissible(const ModelParams& params, double eps);

struct Ball {
    double center_radius = 0.0;  // |x0|; 0 for centered balls
    double radius = 1.0;
};

std::vector<Ball> default_ball_family(int doubling_level = 1);

struct ApCharacteristicEstimate {
    double value = 0.0;
    bool converged = false;  // per-ball quadrature refinement stable
    double drift = 0.0;      // relative change under refinement
};

// Lower bound for [w]_{A_p} = sup_B (avg_B w)(avg_B w^{1-p'})^{p-1} over the
// ball family; refinement_level deepens the inner cutoff of the singular
// quadrature so divergent weights are detected by growth.
ApCharacteristicEstimate ap_characteristic_estimate(const WeightSpec& w, Exponent p, int d,
                                                    const std::vector<Ball>& balls,
                                                    int refinement_level = 1);

}  // namespace invsq
