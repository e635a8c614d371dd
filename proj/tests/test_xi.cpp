#include "tg/errors.hpp"
#include "tg/xi_algebra.hpp"

#include <doctest.h>

#include <random>

using namespace tg;

TEST_CASE("exponent enumeration") {
    CHECK(enumerate_exponents(1, 1) == std::vector<ExponentTail>{{1}});
    CHECK(enumerate_exponents(2, 2) == std::vector<ExponentTail>{{0, 1}, {2, 0}});
    CHECK(enumerate_exponents(3, 1) == std::vector<ExponentTail>{{1, 0, 0}});
    CHECK(enumerate_exponents(0, 0).size() == 1);
    CHECK(enumerate_exponents(0, 2).empty());
    const int partitions[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77};
    for (int q = 0; q <= 12; ++q) {
        const auto all = enumerate_exponents(q, q);
        CHECK(all.size() == static_cast<std::size_t>(partitions[q]));
        for (const auto& t : all) CHECK(power_count(t) == q);
    }
    CHECK_THROWS_AS(enumerate_exponents(13, 1), DomainError);
}

TEST_CASE("product identity and sums") {
    const XiMap one{{XiKey{0, {0}}, Rational(1)}};
    XiMap f{{XiKey{0, {1}}, Rational(2)}, {XiKey{1, {0, 1}}, Rational(-3, 4)}, {XiKey{2, {1, 0, 1}}, Rational(5)}};
    CHECK(xi_product(one, one, 4) == one);
    CHECK(xi_product(one, f, 4) == f);
    CHECK(xi_product(f, one, 4) == f);
    CHECK(xi_product(f, f, 2, {0, 2, 0}) == Rational(9, 16));
    CHECK(xi_product(f, f, 2, {2, 0, 1}) == 20);
    CHECK(xi_product(f, f, 3, {0, 0, 0, 0}) == 0);
    const auto s = xi_sum(f, f);
    CHECK(s.at(XiKey{1, {0, 1}}) == Rational(-3, 2));
    const auto c = sum_over_e0(f);
    CHECK(c.at(XiKey{0, {0}}) == 2);
}

TEST_CASE("product is associative and commutative") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> num(-6, 6), den(1, 5), e0(0, 2);
    auto random_map = [&] {
        XiMap m;
        for (int q = 0; q <= 4; ++q)
            for (const auto& t : enumerate_exponents(q, q)) {
                std::vector<int> e{e0(rng)};
                e.insert(e.end(), t.begin(), t.end());
                const int n = num(rng);
                if (n != 0) m[{q, e}] = Rational(n, den(rng));
            }
        return m;
    };
    for (int trial = 0; trial < 5; ++trial) {
        const XiMap f = random_map(), g = random_map(), h = random_map();
        CHECK(xi_product(xi_product(f, g, 4), h, 4) == xi_product(f, xi_product(g, h, 4), 4));
        CHECK(xi_product(f, g, 4) == xi_product(g, f, 4));
    }
}

TEST_CASE("alpha_nk limits") {
    CHECK(xi_alpha_nk_limit(0, {1}, 0) == 1);
    CHECK(xi_alpha_nk_limit(0, {1}, 2) == 3);
    CHECK(xi_alpha_nk_limit(1, {0, 1}, 1) == 3);
    CHECK(xi_alpha_nk_limit(2, {0, 0, 1}, 1) == Rational(15, 2));
    CHECK(xi_alpha_nk_limit(1, {0, 0}, 1) == 0);
    CHECK(xi_alpha_nk_limit(2, {0, 0, 2}, 0) == 0);
    CHECK(xi_alpha_nk_limit(2, {1, 0, 1}, 0) == 0);
}

TEST_CASE("psi") {
    CHECK(psi(0, {}) == 1);
    CHECK(psi(1, {1}) == 2);
    CHECK(psi(2, {2, 0}) == 3);
    CHECK(psi(3, {1, 1, 0}) == 6);
    CHECK(psi(2, {1}) == 0);
    for (int q = 1; q <= 8; ++q)
        for (const auto& t : enumerate_exponents(q, q)) {
            CAPTURE(q);
            CHECK(psi(q, t) == psi_alternative(q, t));
        }
}

TEST_CASE("omega") {
    CHECK(omega(0, 1, {1}) == 0);
    CHECK(omega(1, 1, {1}) == 1);
    CHECK(omega(0, 2, {2, 0}) == 0);
    CHECK(omega(1, 2, {2, 0}) == 2);
    CHECK(omega(0, 2, {0, 1}) == 0);
    CHECK(omega(1, 2, {0, 1}) == 4);
    CHECK_THROWS_AS(omega(0, 2, {1, 0}), DomainError);
    CHECK_THROWS_AS(omega(2, 1, {1}), DomainError);
}

TEST_CASE("limit coefficient of Delta_n") {
    CHECK(delta_limit_coefficient(1, {1}) == 4);
    CHECK(delta_limit_coefficient(2, {2, 0}) == -8);
    CHECK(delta_limit_coefficient(2, {0, 1}) == 24);
    for (int q = 1; q <= 6; ++q)
        for (const auto& t : enumerate_exponents(q, q)) {
            int sum = 0;
            for (int x : t) sum += x;
            const Rational v = delta_limit_coefficient(q, t);
            CHECK(v != 0);
            CHECK(((sum - 1) % 2 == 0) == (v > 0));
        }
    CHECK_THROWS_AS(delta_limit_coefficient(9, {0, 0, 0, 0, 0, 0, 0, 0, 1}), DomainError);
}

TEST_CASE("closed forms vanish off e0 = 0") {
    for (const auto& [k, v] : xi_dd_limit_map(5)) CHECK(k.e[0] == 0);
    for (const auto& [k, v] : xi_alpha_inverse_map(5)) CHECK(k.e[0] == 0);
}

TEST_CASE("scan and route checks") {
    const auto scan = omega_inequality_scan(8);
    CHECK(scan.all_pass());
    CHECK(scan.count(Status::violated_claim) == 0);
    const auto routes = xi_dn_dd_convolution_check(6);
    CHECK(routes.all_pass());
    CHECK_THROWS_AS(xi_dn_dd_convolution_check(7), DomainError);
}
