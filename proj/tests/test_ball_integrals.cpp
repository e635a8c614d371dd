#include "tg/ball_integrals.hpp"
#include "tg/errors.hpp"
#include "tg/special_functions.hpp"

#include <doctest.h>

#include <cmath>

using namespace tg;

TEST_CASE("spectrum basics") {
    Spectrum s({1.0, 2.0, 4.0});
    CHECK(s.dim() == 3);
    CHECK(s.max() == 4.0);
    CHECK(s.min() == 1.0);
    CHECK(s.determinant() == doctest::Approx(8.0));
    CHECK(s.without(1).values() == std::vector<double>{1.0, 4.0});
    CHECK(s.without(0, 2).values() == std::vector<double>{2.0});
    CHECK_THROWS_AS(Spectrum({1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(Spectrum({1.0, -2.0}), DomainError);
}

TEST_CASE("alpha_1d closed form") {
    CHECK(alpha_1d(0, 1e9, 1.0).value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(alpha_1d(2, 1e9, 1.0).value == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(alpha_1d(4, 1e9, 2.0).value == doctest::Approx(105.0).epsilon(1e-13));
    for (double r : {0.01, 0.5, 3.0, 17.0}) {
        const auto a = alpha_1d(0, r, 1.5);
        CHECK(a.value == doctest::Approx(std::erf(std::sqrt(r / 3.0))).epsilon(1e-13));
        CHECK(a.est_abs_error <= 1e-12 * a.value);
    }
    CHECK_THROWS_AS(alpha_1d(-1, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(alpha_1d(0, 0.0, 1.0), DomainError);
}

TEST_CASE("one-index bound from gamma(a,x) < x^a/a") {
    for (int k = 0; k <= 8; ++k)
        for (double r : {0.1, 1.0, 5.0, 40.0}) {
            const double x = r / 2.0;
            const double bound = std::ldexp(1.0, k) / std::sqrt(M_PI) * std::pow(x, k + 0.5) / (k + 0.5);
            CHECK(alpha_1d(k, r, 1.0).value < bound);
        }
}

TEST_CASE("alpha v=2 against high precision values") {
    Spectrum s({1.0, 2.0});
    struct Row {
        int k1, k2;
        double a;
    };
    const Row rows[] = {{0, 0, 0.64223224445336900936}, {1, 0, 0.35138003731585642054},
                        {0, 1, 0.21996711165346299089}, {1, 1, 0.088554185991069561228},
                        {2, 0, 0.4444093418598183545},  {0, 2, 0.15791656142292337461},
                        {2, 1, 0.086915774086599012864}};
    const auto table = alpha_table({2, 2}, 3.0, s);
    for (const auto& r : rows) {
        CAPTURE(r.k1);
        CAPTURE(r.k2);
        CHECK(alpha({r.k1, r.k2}, 3.0, s).value == doctest::Approx(r.a).epsilon(1e-10));
        CHECK(table.value({r.k1, r.k2}) == doctest::Approx(r.a).epsilon(1e-10));
    }
    CHECK(table.a() == doctest::Approx(0.64223224445336900936).epsilon(1e-10));
    CHECK(table.a1(0) == doctest::Approx(0.35138003731585642054).epsilon(1e-10));
    CHECK(table.a2(0, 0) == doctest::Approx(0.4444093418598183545).epsilon(1e-10));
    CHECK(table.a2(0, 1) == doctest::Approx(0.088554185991069561228).epsilon(1e-10));
}

TEST_CASE("alpha v=3 against high precision values") {
    Spectrum s({0.5, 1.0, 3.0});
    CHECK(alpha_plain(2.0, s) == doctest::Approx(0.33992163700118689849).epsilon(1e-10));
    CHECK(alpha({0, 0, 1}, 2.0, s).value == doctest::Approx(0.04831587449770036303).epsilon(1e-10));
}

TEST_CASE("equal variances reduce to the chi-square cdf") {
    for (double r : {0.2, 1.0, 4.0, 12.0})
        CHECK(alpha({0, 0}, r, Spectrum({1.0, 1.0})).value == doctest::Approx(1.0 - std::exp(-r / 2)).epsilon(1e-12));
}

TEST_CASE("large rho factorizes") {
    Spectrum s({1.0, 2.0, 3.0});
    CHECK(alpha({0, 0, 0}, 1e4, s).value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(alpha({1, 2, 0}, 1e4, s).value == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(alpha({2, 1, 1}, 1e4, s).value == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(alpha_plain(1.0, Spectrum()) == 1.0);
}

TEST_CASE("value bounded by the factorized limit") {
    Spectrum s({0.7, 1.3});
    for (double r : {0.5, 2.0, 9.0})
        for (int a = 0; a <= 3; ++a)
            for (int b = 0; b <= 3; ++b) {
                const double v = alpha({a, b}, r, s).value;
                CHECK(v > 0.0);
                CHECK(v <= to_double(double_factorial(2 * a - 1) * double_factorial(2 * b - 1)));
            }
}

TEST_CASE("monotone in rho and in each lambda") {
    double prev = 0.0;
    for (double r = 0.25; r < 30.0; r *= 1.5) {
        const double v = alpha({1, 0, 1}, r, Spectrum({1.0, 2.0, 0.5})).value;
        CHECK(v > prev);
        prev = v;
    }
    prev = 2.0;
    for (double l = 0.3; l < 10.0; l *= 1.4) {
        const double v = alpha_plain(3.0, Spectrum({l, 1.0}));
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("log-concavity in rho") {
    Spectrum s({1.0, 3.0});
    for (double r1 : {0.3, 2.0})
        for (double r2 : {5.0, 20.0})
            for (double t : {0.25, 0.5, 0.8}) {
                const double lhs = std::log(alpha_plain(t * r1 + (1 - t) * r2, s));
                const double rhs = t * std::log(alpha_plain(r1, s)) + (1 - t) * std::log(alpha_plain(r2, s));
                CHECK(lhs >= rhs - 1e-12);
            }
}

TEST_CASE("quadrature agrees with Monte Carlo") {
    {
        auto mc = alpha_mc({1, 0}, 4.0, Spectrum({1.0, 2.0}), 1000000, 7);
        const double q = alpha({1, 0}, 4.0, Spectrum({1.0, 2.0})).value;
        CHECK(std::abs(mc.mean - q) < 3 * mc.std_error);
        CHECK(mc.n_kept <= mc.n_total);
    }
    {
        auto mc = alpha_mc({1}, 1.0, Spectrum({1.0}), 1000000, 11);
        CHECK(std::abs(mc.mean - alpha_1d(1, 1.0, 1.0).value) < 3 * mc.std_error);
    }
    {
        Spectrum s({1.0, 2.0, 3.0});
        auto mc = alpha_mc({0, 1, 1}, 10.0, s, 1000000, 13);
        CHECK(std::abs(mc.mean - alpha({0, 1, 1}, 10.0, s).value) < 3 * mc.std_error);
    }
}

TEST_CASE("Monte Carlo is reproducible per seed") {
    Spectrum s({1.0, 2.0});
    auto a = alpha_mc({1, 1}, 3.0, s, 20000, 99);
    auto b = alpha_mc({1, 1}, 3.0, s, 20000, 99);
    CHECK(a.mean == b.mean);
    CHECK(a.n_kept == b.n_kept);
    auto all = alpha_mc({0, 0}, 1e6, s, 20000, 5);
    CHECK(all.n_kept == all.n_total);
    CHECK(all.mean == doctest::Approx(1.0));
    CHECK_THROWS_AS(alpha_mc({0, 0}, 1.0, s, 100, 1), DomainError);
    CHECK_THROWS_AS(alpha_mc({0, 0}, 1e-12, Spectrum({1.0, 1.0}), 10000, 1), NumericError);
}

TEST_CASE("capability and domain errors") {
    Spectrum big({1, 1, 1, 1, 1, 1, 1});
    CHECK_THROWS_AS(alpha(MultiIndex(7, 0), 1.0, big), CapabilityError);
    CHECK_THROWS_AS(alpha({0}, 1.0, Spectrum({1.0, 2.0})), DomainError);
    CHECK_THROWS_AS(alpha({-1, 0}, 1.0, Spectrum({1.0, 2.0})), DomainError);
    CHECK_THROWS_AS(alpha({0, 0}, -1.0, Spectrum({1.0, 2.0})), DomainError);
}

TEST_CASE("structural identities") {
    CHECK(verify_structural(3.0, Spectrum({1.0, 2.0}), 3).all_pass());
    CHECK(verify_structural(2.0, Spectrum({1.0}), 4).all_pass());
    CHECK(verify_structural(5.0, Spectrum({0.5, 1.0, 2.0}), 2).all_pass());
    CHECK_THROWS_AS(verify_structural(1.0, Spectrum({1.0}), 5), DomainError);
}
