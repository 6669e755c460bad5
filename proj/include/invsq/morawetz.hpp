#pragma once

#include <string>
#include <vector>

#include "invsq/harness.hpp"

namespace invsq {

// Closed-form calculus of the virial weight psi(r) = int_0^r s^eps/(1+s^eps) ds
// and the induced quantities entering the virial identity.
struct PsiCalculus {
    int d = 3;
    double eps = 0.5;

    PsiCalculus(int d_, double eps_);

    double mu_d() const { return (d - 1.0) * (d - 3.0); }
    double psi(double r) const;         // by quadrature (no elementary form)
    double psi_prime(double r) const;   // r^eps / (1+r^eps)
    double psi_second(double r) const;  // eps r^{eps-1} / (1+r^eps)^2
    double lap_psi(double r) const;     // psi'' + (d-1) psi'/r
    double bilap_psi(double r) const;   // via the beta expansion
    double beta(double rho) const;      // the bounded remainder, |beta| <= 3 d^2
    double w_eps(double r) const;       // |x|^{eps-1}/(1+|x|^eps)^2
    double w_second(double r) const;    // |x|^{eps-3}/(1+|x|^eps)

    // independent route: nested Richardson differentiation of psi'
    double bilap_psi_fd(double r) const;
};

struct BoundScanVerdict {
    double max_value = 0.0;  // max |beta| resp. max r*|lap psi|
    double bound = 0.0;      // 3 d^2 resp. d
    double arg_r = 0.0;
    bool pass = false;
};

BoundScanVerdict check_beta_bound(int d, double eps, const std::vector<double>& r_grid);
BoundScanVerdict check_lap_psi_bound(int d, double eps, const std::vector<double>& r_grid);
std::vector<double> default_log_grid(double lo = 1e-6, double hi = 1e6, int n = 500);

enum class FlowKind { schrodinger, wave };

// spectral phase flow: e^{i t lambda^2} (schrodinger) or e^{i t lambda} (wave)
RadialFunction evolve(const HankelPlan& plan, const RadialFunction& f, double t, FlowKind flow);
Eigen::VectorXcd evolve_spectrum(const Eigen::VectorXcd& fhat, const Eigen::VectorXd& lambdas,
                                 double t, FlowKind flow, double sign = 1.0);

struct ConservationReport {
    double max_la_deviation = 0.0;    // relative fluctuation of ||L_a^{s/2} u(t)||
    double free_fluctuation = 1.0;    // max/min of ||(-Delta)^{s/2} u(t)||
    double snapshot_product = 1.0;    // product of the two snapshot-maximal ratios
    bool consistent = false;          // fluctuation within the snapshot product
    std::vector<double> la_norms, free_norms;
};

ConservationReport conservation_check(const HankelPlan& plan, const HankelPlan& plan_free,
                                      double s, const RadialFunction& f,
                                      const std::vector<double>& t_list);

struct VirialResidual {
    double dtheta_dt = 0.0;
    double rhs = 0.0;
    double residual = 0.0;  // |dTheta/dt - rhs| / (|rhs| + ||f||_2^2)
    double theta_t0 = 0.0;
};

// Virial identity for u solving i u_t + Delta u = c u (flow e^{-i t L_a}):
// d/dt Im int conj(u) psi' d_r u dx =
//   int [2 psi''|d_r u|^2 - (1/2) lap^2 psi |u|^2 + 2 a psi' |u|^2/r^3] dx.
VirialResidual verify_virial(const HankelPlan& plan, const ModelParams& params, double eps,
                             const RadialFunction& f, double t0, double dt = 1e-5);

enum class SmoothingId { firstest, secondest, thirdest };

std::string smoothing_name(SmoothingId id);

struct SmoothingReport {
    SmoothingId estimate_id = SmoothingId::firstest;
    int d = 3;
    double a = 0.0;
    double eps = 0.5;
    double T = 100.0;
    double lhs = 0.0;        // space-time integral (firstest) or L^2 norm
    double rhs = 0.0;        // eps^{-1} ||(-Delta)^{1/4} f||^2 or eps^{-1/2} ||f||
    double ratio = 0.0;
    double lhs_2T = 0.0;
    double drift = 0.0;      // relative change under T -> 2T
    double t_infinity = 0.0; // exact grid limit 2 pi * diagonal integral
    int member_index = -1;
};

// Precomputes the Gram matrices of one (plan pair, eps) so the three
// estimates evaluate as quadratic forms per member; the time integral over
// [-T, T] is exact (Dirichlet--Filon in the energy variable).
class SmoothingEngine {
  public:
    SmoothingEngine(std::shared_ptr<const HankelPlan> plan,
                    std::shared_ptr<const HankelPlan> plan_free, double eps);

    SmoothingReport evaluate(SmoothingId id, const RadialFunction& f, double T) const;
    double eps() const { return eps_; }

  private:
    struct QuadForm {
        Eigen::VectorXd energies;
        Eigen::VectorXd rho;  // spectral density dsigma/dE at the nodes
        Eigen::MatrixXd gram;
    };
    double spacetime_integral(const QuadForm& qf, const Eigen::VectorXcd& fhat, double T) const;
    double diagonal_limit(const QuadForm& qf, const Eigen::VectorXcd& fhat) const;

    std::shared_ptr<const HankelPlan> plan_, plan_free_;
    double eps_;
    QuadForm grad_weps_;   // |d_r u|^2 against w_eps (schrodinger energies)
    QuadForm u_wsec_;      // |u|^2 against |x|^{eps-3}/(1+|x|^eps)
    QuadForm frac_weps_;   // |(-Delta)^{1/4} u|^2 against w_eps
    QuadForm wave_weps_;   // |u|^2 against w_eps (wave energies)
};

struct BFormReport {
    double max_ratio = 0.0;
    int arg_v = -1, arg_w = -1;
    double bound = 3.0;
    bool pass = false;
};

// |B(v,w)| = |int conj(v) psi' d_r w dx| over ||v||_{H^{1/2}} ||w||_{H^{1/2}},
// maximized over ordered pairs from the family.
BFormReport bform_check(const HankelPlan& plan_free, double eps, const TestFamily& family);

}  // namespace invsq
