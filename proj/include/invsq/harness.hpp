#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "invsq/hankel.hpp"
#include "invsq/kernels.hpp"
#include "invsq/spectrum.hpp"

namespace invsq {

struct RouteDisagreementError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Seeded family of band-limited radial test profiles: finite combinations
// sum_j c_j r^{m_j} e^{-gamma_j (r-b_j)^2}. Members whose L2 norm leaves
// [1e-6, 1e6] or whose spectral tail past 0.75*lambda_max exceeds 1e-10
// (relative, L2 sense) are rejected and redrawn.
struct TestFamily {
    std::uint64_t seed = 0;
    std::vector<RadialFunction> members;
    std::vector<Eigen::VectorXcd> spectra;  // forward transforms on the plan
    int rejected = 0;

    int size() const { return static_cast<int>(members.size()); }
};

TestFamily make_family(const HankelPlan& plan, std::uint64_t seed, int size = 40);

struct MemberRow {
    int index = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool excluded = false;
    double route_disagreement = 0.0;
};

// Machine-readable outcome of one inequality verification.
struct Certificate {
    std::string inequality_id;
    int d = 3;
    double a = 0.0;
    std::optional<double> s, p, alpha, eps;
    std::string weight;
    WindowSpec window_used{};
    bool window_applicable = false;
    std::uint64_t seed = 0;
    int family_size = 0;
    double max_ratio = 0.0;
    int argmax_index = -1;
    std::optional<double> max_ratio_reverse;  // second direction when present
    std::vector<MemberRow> rows;
    std::vector<double> trajectory;  // prefix maxima of the ratio
    double saturation_growth = 0.0;  // relative growth over the last half
    double refinement_drift = 0.0;
    double route_agreement_max = 0.0;
    std::string grid_key;
    double roundtrip_defect = 0.0;
    double threshold = 1e3;
    bool pass = false;
    std::string scope = "radial sector";
    std::string note;
};

// Plans shared by the verifications for one (d, a): the L_a-order plan, the
// free-Laplacian plan on the same grids, and refined variants used for the
// certificate drift probe.
struct VerifyContext {
    ModelParams params;
    GridConfig config;
    std::shared_ptr<const HankelPlan> plan;
    std::shared_ptr<const HankelPlan> plan_free;
    std::shared_ptr<const HankelPlan> plan_probe;       // finer quadrature
    std::shared_ptr<const HankelPlan> plan_free_probe;
    int drift_probe_members = 4;
};

VerifyContext make_context(const ModelParams& params, const GridConfig& cfg);

struct VerifyOptions {
    double threshold = 1e3;           // generic "finite constant" gate
    std::optional<double> sharp;      // sharp-constant gate where an oracle exists
    double route_tol = 1e-6;
    std::uint64_t seed = 20240901;
    int family_size = 40;
};

// || |x|^{-s} f ||_{L^p_w} <= C || L_a^{s/2} f ||_{L^p_w}; the fractional
// power is double-computed (multiplier and subordination routes).
Certificate verify_hardy(const VerifyContext& ctx, double s, double p, const WeightSpec& w,
                         const VerifyOptions& opt = {});

// both directions of || (-Delta)^{s/2} f || ~ || L_a^{s/2} f ||
Certificate verify_equivalence(const VerifyContext& ctx, double s, double p, const WeightSpec& w,
                               const VerifyOptions& opt = {});

enum class SquareKind { alpha, s_weighted };

struct SquareFunctionConfig {
    double t_lo = 1e-6, t_hi = 1e6;
    int panels_per_decade = 4;
    int nodes_per_panel = 6;
};

// vertical square function S_{L_a,alpha} f (or its s-weighted variant)
// evaluated pointwise on the radial grid by log-t quadrature
RadialFunction square_function(const HankelPlan& plan, SquareKind kind, double order,
                               const RadialFunction& f, const SquareFunctionConfig& cfg = {});

// the same for a batch of spectra (columns); returns pointwise values
Eigen::MatrixXd square_function_batch(const HankelPlan& plan, SquareKind kind, double order,
                                      const Eigen::MatrixXcd& spectra,
                                      const SquareFunctionConfig& cfg = {});

// || S_{L_a,alpha} f ||_{L^p_w} ~ || f ||_{L^p_w}, both directions
Certificate verify_square_equiv(const VerifyContext& ctx, SquareKind kind, double order, double p,
                                const WeightSpec& w, const VerifyOptions& opt = {});

// || (int t^{-s} |(t L_a e^{-tL_a} + t Delta e^{tDelta}) f|^2 dt/t)^{1/2} ||
//   <= C || f / |x|^s ||
Certificate verify_difference_square(const VerifyContext& ctx, double s, double p,
                                     const WeightSpec& w, const VerifyOptions& opt = {});

// scalar (1-D Gamma integral) oracle for the square-function Plancherel ratio
double square_plancherel_scalar(SquareKind kind, double order, double lambda = 1.0);

}  // namespace invsq
