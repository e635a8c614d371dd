#include "tg/errors.hpp"
#include "tg/moments.hpp"
#include "tg/weak_expansion.hpp"

#include <doctest.h>

#include <cmath>

using namespace tg;

TEST_CASE("order zero is the factorized term") {
    Spectrum s({1.0, 2.0, 3.0});
    ExpansionTarget t{1, 2};
    const auto e = expand_alpha(t, 0, 7.0, s);
    REQUIRE(e.terms.size() == 1);
    CHECK(e.value == doctest::Approx(alpha_1d(2, 7.0, 2.0).value * alpha_plain(7.0, s.without(1))).epsilon(1e-14));
    CHECK(t.label() == "alpha_{2:2}");
    ExpansionTarget t2{0, 1, true, 2, 1};
    CHECK(t2.label() == "alpha_{1:1,3:1}");
    const auto e2 = expand_alpha(t2, 0, 7.0, s);
    CHECK(e2.value == doctest::Approx(alpha_1d(1, 7.0, 1.0).value * alpha_1d(1, 7.0, 3.0).value *
                                      alpha_plain(7.0, Spectrum({2.0})))
                          .epsilon(1e-14));
}

TEST_CASE("value is the sum of terms") {
    Spectrum s({1.0, 2.0, 0.5});
    for (int order = 0; order <= 4; ++order) {
        const auto e = expand_alpha({0, 1, true, 1, 0}, order, 12.0, s);
        double sum = 0;
        for (double x : e.terms) sum += x;
        CHECK(e.value == sum);
        CHECK(e.order == order);
    }
}

TEST_CASE("higher order improves the partial sum") {
    Spectrum s({1.0, 4.0});
    const double exact = alpha_plain(40.0, s);
    const double e0 = std::abs(expand_alpha({0, 0}, 0, 40.0, s).value - exact);
    const double e2 = std::abs(expand_alpha({0, 0}, 2, 40.0, s).value - exact);
    CHECK(e2 < e0);
}

TEST_CASE("empty reduced spectrum is exact") {
    Spectrum s({1.5});
    const auto e = expand_alpha({0, 2}, 3, 2.0, s);
    CHECK(e.value == doctest::Approx(alpha_1d(2, 2.0, 1.5).value).epsilon(1e-15));
    for (int q = 1; q <= 3; ++q) CHECK(e.terms[q] == 0.0);
}

TEST_CASE("partial sums approach the exact value from above") {
    // every term past order 0 is negative once the eta_q have their asymptotic signs
    Spectrum s({1.0, 2.0});
    for (double r : {15.0, 25.0}) {
        const double exact = alpha_plain(r, s);
        const auto e = expand_alpha({0, 0}, 3, r, s);
        double partial = e.terms[0];
        for (int q = 1; q <= 3; ++q) {
            CHECK(e.terms[q] < 0.0);
            partial += e.terms[q];
            CHECK(partial > exact);
        }
    }
}

TEST_CASE("gamma_nn bracket") {
    CHECK(gamma_nn_expansion_coeff(true, 0, 1.0, Spectrum({1.0})) == 8.0);
    Spectrum s({1.0, 2.0});
    CHECK(gamma_nn_expansion_coeff(false, 0, 1e4, s) == doctest::Approx(8.0).epsilon(1e-10));
    double prev = INFINITY;
    for (double r : {5.0, 10.0, 20.0, 40.0}) {
        const double d = std::abs(gamma_nn_expansion_coeff(false, 0, r, s) - 8.0);
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("gamma_nn correction matches the leading expansion term") {
    // Gamma^{(2)} - Gamma^{(1)} against -(l/rho)^3 eta_1 times the bracket, as l -> 0
    const double rho = 2.0;
    double prev = INFINITY;
    for (double eps : {0.04, 0.02, 0.01}) {
        const Spectrum s({eps, 1.0});
        const double diff = correlation_set(rho, s).gamma[0][0] - correlation_set(rho, Spectrum({eps})).gamma[0][0];
        const double pred = -std::pow(eps / rho, 3) * eta_combinatorial(1, rho, Spectrum({1.0})) *
                            gamma_nn_expansion_coeff(false, 0, rho, s);
        const double dev = std::abs(diff / pred - 1.0);
        CHECK(dev < prev);
        prev = dev;
    }
    CHECK(prev < 0.05);
}

TEST_CASE("gamma_nm cancellation") {
    Spectrum s({1.0, 2.0, 3.0});
    for (auto [n, m] : {std::pair<int, int>{0, 1}, {0, 2}, {1, 2}}) {
        const auto r = gamma_nm_cancellation_check(n, m, 30.0, s);
        CHECK(r.all_pass());
        const auto far = gamma_nm_cancellation_check(n, m, 100.0, s);
        CHECK(far.all_pass());
        CHECK(far.count(Status::violated_claim) == 0);
    }
    CHECK_THROWS_AS(gamma_nm_cancellation_check(1, 1, 30.0, s), DomainError);
}

TEST_CASE("convergence estimate monotonicity") {
    for (int v = 2; v <= 6; ++v) {
        const double c50 = convergence_c(v, 50), c75 = convergence_c(v, 75), c100 = convergence_c(v, 100);
        CAPTURE(v);
        CHECK(c50 > 0.0);
        if (v <= 5) {
            CHECK(c50 > c75);
            CHECK(c75 > c100);
        } else {
            CHECK(c50 < c75);
            CHECK(c75 < c100);
        }
    }
    const auto e = convergence_estimate(3, 20, 30);
    CHECK(e.p_values.size() == 11);
    CHECK(e.fit_chi2 >= 0.0);
    CHECK(e.fit_A > 0.0);
    CHECK_THROWS_AS(convergence_estimate(7, 50, 100), DomainError);
    CHECK_THROWS_AS(convergence_estimate(3, 50, 50), DomainError);
}

TEST_CASE("expansion domain errors") {
    Spectrum s({1.0, 2.0});
    CHECK_THROWS_AS(expand_alpha({0, 0}, 5, 1.0, s), DomainError);
    CHECK_THROWS_AS(expand_alpha({2, 0}, 1, 1.0, s), DomainError);
    CHECK_THROWS_AS(expand_alpha({0, 0, true, 0, 0}, 1, 1.0, s), DomainError);
}
