#pragma once

#include "tg/report.hpp"
#include "tg/special_functions.hpp"

#include <map>
#include <vector>

namespace tg {

// Tail (e_1..e_q) of an exponent vector.
using ExponentTail = std::vector<int>;

// Coefficient label (q; e_0..e_q). e always has length q + 1.
struct XiKey {
    int q = 0;
    std::vector<int> e;
    bool operator<(const XiKey& o) const { return q != o.q ? q < o.q : e < o.e; }
    bool operator==(const XiKey& o) const { return q == o.q && e == o.e; }
};

using XiMap = std::map<XiKey, Rational>;

int power_count(const ExponentTail& tail);

// All tails with sum_k k e_k = m, lexicographic in (e_1..e_q).
std::vector<ExponentTail> enumerate_exponents(int q, int m);

XiMap xi_sum(const XiMap& f, const XiMap& g);
XiMap xi_product(const XiMap& f, const XiMap& g, int q_max);
Rational xi_product(const XiMap& f, const XiMap& g, int q, const std::vector<int>& e);
// Collapse the e_0 direction: keys become (q; 0, e_1..e_q).
XiMap sum_over_e0(const XiMap& f);

// rho -> infinity limits with the bookkeeping factors alpha^{(v-1)}, alpha^{(1)} set to 1.
Rational xi_alpha_nk_limit(int q, const std::vector<int>& e, int k);
XiMap xi_alpha_nk_map(int k, int q_max);
XiMap xi_alpha_inverse_map(int q_max);
XiMap xi_dn_limit_map(int q_max);  // closed form for the numerator of Delta_n
XiMap xi_dd_limit_map(int q_max);  // closed form for alpha^{-2}

BigInt psi(int p, const ExponentTail& tail);
// Same quantity via the sum over c in S^n, n = 0..p.
BigInt psi_alternative(int p, const ExponentTail& tail);
BigInt omega(int which, int q, const ExponentTail& tail);
Rational delta_limit_coefficient(int q, const ExponentTail& tail);

Report omega_inequality_scan(int q_max);
Report xi_dn_dd_convolution_check(int q_max);

}  // namespace tg
