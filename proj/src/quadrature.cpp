#include "invsq/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace invsq {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15 * (1.0 + std::abs(x))) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

PanelRule composite_gl(const std::vector<double>& boundaries, const std::vector<int>& counts) {
    if (boundaries.size() < 2 || counts.size() != boundaries.size() - 1)
        throw std::invalid_argument("composite_gl: inconsistent panel description");
    PanelRule rule;
    rule.boundaries = boundaries;
    std::vector<double> x, w;
    for (std::size_t p = 0; p + 1 < boundaries.size(); ++p) {
        const double a = boundaries[p], b = boundaries[p + 1];
        if (!(b > a)) throw std::invalid_argument("composite_gl: boundaries must increase");
        gauss_legendre(counts[p], x, w);
        for (int i = 0; i < counts[p]; ++i) {
            rule.nodes.push_back(0.5 * (b - a) * x[i] + 0.5 * (a + b));
            rule.weights.push_back(0.5 * (b - a) * w[i]);
        }
    }
    return rule;
}

PanelRule octave_gl(int jlo, int jhi, double phase_scale, int base_nodes, int pad,
                    double nodes_per_phase) {
    if (jhi <= jlo) throw std::invalid_argument("octave_gl: empty octave range");
    std::vector<double> bounds;
    std::vector<int> counts;
    for (int j = jlo; j <= jhi; ++j) bounds.push_back(std::ldexp(1.0, j));
    for (int j = jlo; j < jhi; ++j) {
        const double width = std::ldexp(1.0, j);
        int n = std::max(base_nodes,
                         static_cast<int>(std::ceil(nodes_per_phase * phase_scale * width)) + pad);
        // deep octaves carry no oscillation; smooth power-law integrands need
        // only a short rule there
        if (phase_scale * width < 0.1) n = std::min(n, 14);
        counts.push_back(n);
    }
    return composite_gl(bounds, counts);
}

PanelRule log_gl(double t0, double t1, int panels_per_decade, int nodes_per_panel) {
    if (!(t1 > t0) || t0 <= 0.0) throw std::invalid_argument("log_gl: need 0 < t0 < t1");
    const double decades = std::log10(t1 / t0);
    const int np = std::max(1, static_cast<int>(std::ceil(decades * panels_per_decade)));
    std::vector<double> bounds(np + 1);
    const double u0 = std::log(t0), u1 = std::log(t1);
    for (int p = 0; p <= np; ++p) bounds[p] = u0 + (u1 - u0) * p / np;
    std::vector<int> counts(np, nodes_per_panel);
    PanelRule u = composite_gl(bounds, counts);
    // map u -> t = e^u; weights stay du = dt/t
    for (auto& v : u.nodes) v = std::exp(v);
    for (auto& b : u.boundaries) b = std::exp(b);
    return u;
}

}  // namespace invsq
