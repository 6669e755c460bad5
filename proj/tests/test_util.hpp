#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace testutil {

struct RefRow {
    std::string function;
    std::string nu;
    double z;
    double value;
};

inline std::vector<RefRow> load_reference(const std::string& name) {
    std::ifstream in(std::string(INVSQ_TEST_DATA_DIR) + "/" + name);
    if (!in) throw std::runtime_error("missing reference file: " + name);
    std::vector<RefRow> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        RefRow r;
        std::string z, v, src;
        std::getline(ss, r.function, ',');
        std::getline(ss, r.nu, ',');
        std::getline(ss, z, ',');
        std::getline(ss, v, ',');
        std::getline(ss, src, ',');
        auto to_double = [](const std::string& s) {
            try {
                return std::stod(s);
            } catch (const std::out_of_range&) {
                return 0.0;  // value below double range (e.g. scaled Bessel tails)
            }
        };
        r.z = to_double(z);
        r.value = to_double(v);
        rows.push_back(r);
    }
    return rows;
}

inline double rel_err(double got, double want) {
    if (want == 0.0) return std::abs(got);
    return std::abs(got - want) / std::abs(want);
}

// Adaptive Simpson, used as an independent quadrature oracle in tests.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-11, int depth = 28) {
    std::function<double(double, double, double, double, double, double, double, int)> rec =
        [&](double a_, double b_, double fa, double fm, double fb, double whole, double tol_,
            int d) -> double {
        const double m = 0.5 * (a_ + b_);
        const double lm = 0.5 * (a_ + m), rm = 0.5 * (m + b_);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - a_) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b_ - m) / 6.0 * (fm + 4.0 * frm + fb);
        if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol_)
            return left + right + (left + right - whole) / 15.0;
        return rec(a_, m, fa, flm, fm, left, 0.5 * tol_, d - 1) +
               rec(m, b_, fm, frm, fb, right, 0.5 * tol_, d - 1);
    };
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return rec(a, b, fa, fm, fb, whole, tol, depth);
}

}  // namespace testutil
