#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "invsq/spectrum.hpp"
#include "test_util.hpp"

using namespace invsq;
using testutil::rel_err;

TEST_CASE("make_params derived quantities") {
    auto p = make_params(3, 0.0);
    CHECK(p.sigma == doctest::Approx(0.0));
    CHECK(p.nu0 == doctest::Approx(0.5));
    CHECK(p.delta == doctest::Approx(0.0));
    CHECK_FALSE(p.eps_star.has_value());

    p = make_params(3, 2.0);
    CHECK(p.sigma == doctest::Approx(-1.0));
    CHECK(p.nu0 == doctest::Approx(1.5));

    p = make_params(4, -1.0);
    CHECK(p.sigma == doctest::Approx(1.0));
    CHECK(p.nu0 == doctest::Approx(0.0));
    CHECK(p.critical());

    CHECK_THROWS_AS(make_params(2, 0.0), DimensionError);
    CHECK_THROWS_AS(make_params(3, -0.3), CouplingError);

    // sigma + nu0 = (d-2)/2 across the admissible range
    for (int d : {3, 4, 5, 7}) {
        const double h = 0.5 * (d - 2);
        for (double a = -h * h; a < 6.0; a += 0.37) {
            const auto q = make_params(d, a);
            CHECK(rel_err(q.sigma + q.nu0, h) < 1e-14);
        }
    }
    // eps_star example: d=3, a=1 => delta = 1, eps* = 1/27
    p = make_params(3, 1.0);
    REQUIRE(p.eps_star.has_value());
    CHECK(*p.eps_star == doctest::Approx(1.0 / 27.0));
}

TEST_CASE("exponent algebra") {
    CHECK(d_alpha(-1.0, 3).is_inf());
    CHECK(d_alpha(1.0, 3).value() == doctest::Approx(3.0));
    CHECK(d_alpha(0.0, 5).is_inf());
    CHECK(conjugate(Exponent(1.0)).is_inf());
    CHECK(conjugate(Exponent::infinity()).value() == doctest::Approx(1.0));
    for (double pv : {1.0, 1.5, 2.0, 3.7, 100.0}) {
        const Exponent p(pv);
        CHECK(rel_err(conjugate(conjugate(p)).value(), pv) < 1e-14);
    }
}

TEST_CASE("windows") {
    // (d=3, a=2, s=1): forward window (1, inf)
    auto w = window(make_params(3, 2.0), 1.0, TheoremId::equiv_forward);
    CHECK(w.valid);
    CHECK(w.p_lower.value() == doctest::Approx(1.0));
    CHECK(w.p_upper.is_inf());

    // (d=3, a=0, s=1): hardy window (1, 3), valid since d-s-2 sigma = 2 > 0
    w = window(make_params(3, 0.0), 1.0, TheoremId::hardy);
    CHECK(w.valid);
    CHECK(w.p_lower.value() == doctest::Approx(1.0));
    CHECK(w.p_upper.value() == doctest::Approx(3.0));

    // (d=3, a=0, s=1): reverse window (1, 3)
    w = window(make_params(3, 0.0), 1.0, TheoremId::equiv_reverse);
    CHECK(w.p_lower.value() == doctest::Approx(1.0));
    CHECK(w.p_upper.value() == doctest::Approx(3.0));

    // hardy upper endpoint nonincreasing in s
    const auto params = make_params(4, -0.5);
    double prev = std::numeric_limits<double>::infinity();
    for (double s = 0.2; s < 3.0; s += 0.2) {
        const auto h = window(params, s, TheoremId::hardy);
        if (!h.valid) continue;
        CHECK(h.p_upper.value() <= prev + 1e-12);
        prev = h.p_upper.value();
    }

    // difference: a >= 0 gives (1, inf) with plain A_p
    w = window(make_params(3, 1.0), 0.5, TheoremId::difference);
    CHECK(w.valid);
    CHECK(w.ap_index.value() == doctest::Approx(1.0));
    CHECK(w.rh_index.is_inf());
    // a < 0 case (b)
    w = window(make_params(3, -0.2), 1.0, TheoremId::difference);
    CHECK(w.valid);
    const double sig = make_params(3, -0.2).sigma;
    CHECK(w.p_lower.value() == doctest::Approx(std::max(1.0, 3.0 / (3.0 + 1.0 - sig))));
    CHECK(w.p_upper.value() == doctest::Approx(3.0 / sig));
}

TEST_CASE("power weight classification") {
    auto c = power_weight_class(-1.0, Exponent(2.0), Exponent(2.0), 3);
    CHECK(c.in_ap);
    CHECK(c.in_rh);
    c = power_weight_class(0.0, Exponent(1.5), Exponent(7.0), 4);
    CHECK(c.in_ap);
    CHECK(c.in_rh);
    // boundary of the strict inequality: alpha = d(p-1)
    c = power_weight_class(3.0, Exponent(2.0), Exponent(2.0), 3);
    CHECK_FALSE(c.in_ap);
}

TEST_CASE("weight admissibility") {
    // |x|^{-1}, p=2, p0=1, q0=inf in d=3: A_2 holds, RH vacuous
    auto rep = weight_admissible(WeightSpec::power(-1.0), Exponent(2.0), Exponent(1.0),
                                 Exponent::infinity(), 3);
    CHECK(rep.admissible);
    CHECK(rep.method == "exact");
    // constant weight always admissible
    rep = weight_admissible(WeightSpec::one(), Exponent(2.0), Exponent(1.0), Exponent(4.0), 3);
    CHECK(rep.admissible);
    // composite w_eps via envelope
    rep = weight_admissible(WeightSpec::composite(0.5), Exponent(2.0), Exponent(1.0),
                            Exponent::infinity(), 3);
    CHECK(rep.admissible);
    CHECK(rep.method == "envelope+numeric");
}

TEST_CASE("duality equivalence scan (small)") {
    // coarse version of the acceptance scan
    int count = 0;
    for (double alpha = -4.0; alpha <= 4.0; alpha += 0.5)
        for (double p0 : {1.25, 2.0})
            for (double p : {1.5, 2.5, 3.0})
                for (double q0 : {3.5, 6.0}) {
                    if (!(p0 < p && p < q0)) continue;
                    CHECK(dual_weight_check(alpha, Exponent(p), Exponent(p0), Exponent(q0), 3));
                    ++count;
                }
    CHECK(count > 50);
    CHECK_THROWS_AS(
        dual_weight_check(1.0, Exponent(2.0), Exponent(2.5), Exponent(4.0), 3),
        std::domain_error);
}

TEST_CASE("smoothing admissibility") {
    auto r = smoothing_admissible(make_params(3, 1.0), 0.25);
    CHECK(r.admissible);
    CHECK(r.delta_positive);
    // delta = 0 boundary excluded
    r = smoothing_admissible(make_params(3, -0.25 + 0.25), 0.5);  // a = 0, d = 3: delta = 0
    CHECK_FALSE(r.delta_positive);
    CHECK_FALSE(r.admissible);
    r = smoothing_admissible(make_params(4, 0.0), 0.9);
    CHECK(r.admissible);
}

TEST_CASE("A_p characteristic estimator") {
    // constant weight: exactly 1
    auto est = ap_characteristic_estimate(WeightSpec::one(), Exponent(2.0), 3,
                                          default_ball_family(), 1);
    CHECK(rel_err(est.value, 1.0) < 1e-8);
    CHECK(est.converged);

    // w_eps: finite and stable
    est = ap_characteristic_estimate(WeightSpec::composite(0.5), Exponent(2.0), 3,
                                     default_ball_family(), 1);
    CHECK(est.value < 50.0);
    CHECK(est.converged);
    // stability under doubling the family
    auto est2 = ap_characteristic_estimate(WeightSpec::composite(0.5), Exponent(2.0), 3,
                                           default_ball_family(2), 1);
    CHECK(std::abs(est2.value - est.value) / est.value < 0.05);

    // |x|^{-d} violates A_p: the estimate must grow without bound under
    // refinement (divergence detector)
    auto lvl1 = ap_characteristic_estimate(WeightSpec::power(-3.0), Exponent(2.0), 3,
                                           default_ball_family(), 1);
    auto lvl2 = ap_characteristic_estimate(WeightSpec::power(-3.0), Exponent(2.0), 3,
                                           default_ball_family(), 3);
    CHECK(lvl2.value > 1.5 * lvl1.value);
    CHECK(lvl2.value > 50.0);
    CHECK_FALSE(lvl2.converged);
}
