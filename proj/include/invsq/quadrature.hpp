#pragma once

#include <cstddef>
#include <vector>

namespace invsq {

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
// on the Legendre recurrence. Stable for n up to a few thousand.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// A composite quadrature rule: nodes x_i with weights w_i approximating
// integral over the covered interval of f(x) dx.
struct PanelRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> boundaries;  // panel edges, size = #panels + 1

    std::size_t size() const { return nodes.size(); }
};

// Gauss-Legendre panels over explicit boundaries, counts[i] nodes on panel i.
PanelRule composite_gl(const std::vector<double>& boundaries, const std::vector<int>& counts);

// Octave panels [2^j, 2^{j+1}], j = jlo..jhi-1. Node count per panel grows
// with the phase an oscillation e^{i*phase_scale*x} accumulates across it, so
// the rule stays accurate for integrands oscillating up to that rate.
PanelRule octave_gl(int jlo, int jhi, double phase_scale, int base_nodes = 24,
                    int pad = 12, double nodes_per_phase = 0.55);

// Log-spaced Gauss-Legendre panels on [t0, t1] for integrals in d(log t);
// weights are for integration against dt/t.
PanelRule log_gl(double t0, double t1, int panels_per_decade = 6, int nodes_per_panel = 10);

}  // namespace invsq
