#include "tg/errors.hpp"
#include "tg/eta_coefficients.hpp"

#include <doctest.h>

#include <cmath>

using namespace tg;

TEST_CASE("phi and low order coefficients") {
    CHECK(phi_k(5, 0) == 1);
    CHECK(phi_k(5, 1) == 5);
    CHECK(phi_k(5, 2) == 15);
    CHECK(phi_k(2, 2) == 0);
    CHECK(phi_k(1, 3) == 3);
    CHECK(phi_k(3, 3) == -3);
    for (int v = 1; v <= 6; ++v) {
        const auto t = coefficient_table(v, 4);
        CHECK(t.d[1][0] == Rational(v, 2));
        CHECK(t.d[1][1] == Rational(-1, 2));
        CHECK(t.c[1][0] == Rational(v, 2));
        CHECK(t.c[1][1] == Rational(-1, 2));
        CHECK(t.d[2][0] == Rational(v * v, 4));
        CHECK(t.d[2][1] == Rational(-(v + 1), 2));
        CHECK(t.d[2][2] == Rational(1, 4));
        CHECK(t.d[0][0] == 1);
        CHECK(t.d[1][2] == 0);
        for (int k = 1; k <= 4; ++k) CHECK(t.phi[k] == (v - 2 * k + 2) * t.phi[k - 1]);
    }
    CHECK_THROWS_AS(coefficient_table(2, 33), DomainError);
}

TEST_CASE("exact coefficient identities") {
    for (int v = 1; v <= 6; ++v) {
        CAPTURE(v);
        CHECK(coefficient_identities(v, 10).all_pass());
    }
    CHECK(stirling_inversion_check(12).all_pass());
}

TEST_CASE("eta against high precision derivatives") {
    struct Row {
        std::vector<double> l;
        double rho;
        double eta[4];
    };
    const Row rows[] = {
        {{1.0}, 2.0, {0.246295898196315537, -0.369443847294473306, 0.677313720039867728, -1.63171032555059044}},
        {{1.0, 2.0}, 5.0, {0.366559290277280153, -0.618987564065887351, 1.10739447792656415, -2.09687484461773003}},
        {{1.0, 2.0}, 0.5, {0.90978365135859551, -0.168808380508489642, 0.0330963494644804905, -0.0068045931561815495}},
        {{2.0, 1.0, 1.0}, 8.0, {0.312210201185949186, -0.761003275274268703, 1.82441927742325471, -4.00477378577370456}},
        {{2.0, 1.0, 1.0}, 20.0, {0.0197404460800970964, -0.112099457101779805, 0.651817050672246677, -3.89504164297233864}},
    };
    for (const auto& r : rows) {
        const Spectrum s(r.l);
        const auto t = eta_table(4, r.rho, s);
        REQUIRE(t.values.size() == 5);
        CHECK(t.values[0] == 1.0);
        for (int k = 1; k <= 4; ++k) {
            CAPTURE(r.rho);
            CAPTURE(k);
            CHECK(t.values[k] == doctest::Approx(r.eta[k - 1]).epsilon(1e-8));
            CHECK(eta_combinatorial(k, r.rho, s) == doctest::Approx(r.eta[k - 1]).epsilon(1e-8));
        }
    }
    CHECK(alpha_plain(5.0, Spectrum({1.0, 2.0})) == doctest::Approx(0.81357491907850570303).epsilon(1e-10));
    CHECK(alpha_plain(8.0, Spectrum({2.0, 1.0, 1.0})) == doctest::Approx(0.88539258669824020292).epsilon(1e-10));
    CHECK(alpha_plain(20.0, Spectrum({2.0, 1.0, 1.0})) == doctest::Approx(0.9964675263944616902).epsilon(1e-10));
}

TEST_CASE("eta_1 from the first-order relation") {
    Spectrum s({1.0, 2.0, 0.5});
    const double r = 4.0;
    const auto x = x_ratios(1, r, s);
    CHECK(x[0] == 1.0);
    CHECK(eta_combinatorial(1, r, s) == doctest::Approx(1.5 - 0.5 * x[1]).epsilon(1e-14));
}

TEST_CASE("finite-difference oracle") {
    Spectrum s({1.0, 2.0});
    for (int k = 1; k <= 2; ++k) {
        const double c = eta_combinatorial(k, 5.0, s);
        CHECK(std::abs(eta_fd_oracle(k, 5.0, s) - c) / std::abs(c) < 1e-4);
    }
    CHECK(eta_oracle_report(3).all_pass());
    CHECK(eta_battery().size() == 12);
}

TEST_CASE("large rho behaviour") {
    Spectrum s({1.0, 2.0, 3.0});
    for (int k = 1; k <= 4; ++k) {
        const double e = eta_combinatorial(k, 80.0, s);
        CHECK((k % 2 ? e > 0 : e < 0));
        CHECK(std::abs(e) < std::abs(eta_combinatorial(k, 40.0, s)));
    }
    CHECK(std::abs(eta_combinatorial(1, 400.0, s)) < 1e-12);
    CHECK(asymptotic_checks(s, 4, {20.0, 40.0, 80.0}).all_pass());
}

TEST_CASE("envelope bounds the derivative") {
    Spectrum s({1.0, 2.0, 3.0});
    for (double r : {10.0, 30.0})
        for (int k = 1; k <= 3; ++k)
            CHECK(std::abs(eta_combinatorial(k, r, s)) * alpha_plain(r, s) <= eta_envelope(k, r, s));
}

TEST_CASE("Q polynomials") {
    CHECK(q_polynomial(0, 3.7, -1.2) == 1.0);
    for (double x : {0.0, 0.5, 3.0})
        for (double a : {-0.5, 0.0, 1.5}) {
            CHECK(q_polynomial(1, x, a) == doctest::Approx(x + a));
            CHECK(q_polynomial(2, x, a) == doctest::Approx(x * x + 2 * a * x + a * (a + 1)));
        }
    // leading coefficient one
    CHECK(q_polynomial(5, 1e6, 0.5) / std::pow(1e6, 5) == doctest::Approx(1.0).epsilon(1e-4));
}
