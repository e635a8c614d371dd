#pragma once

#include "tg/ball_integrals.hpp"
#include "tg/report.hpp"
#include "tg/special_functions.hpp"

#include <string>
#include <vector>

namespace tg {

struct CoefficientTable {
    int v = 0;
    int k_max = 0;
    std::vector<std::vector<Rational>> d;  // d[k][l], 0 <= l <= k
    std::vector<std::vector<Rational>> c;  // c[k][l]
    std::vector<Rational> phi;             // phi_0 .. phi_kmax
};

enum class EtaMethod { combinatorial, finite_difference };

struct EtaTable {
    double rho = 0.0;
    Spectrum spectrum;
    std::vector<double> values;  // values[0] == 1
    EtaMethod method = EtaMethod::combinatorial;
};

Rational phi_k(int v, int k);
CoefficientTable coefficient_table(int v, int k_max);

// x_l / alpha = sum over ordered l-tuples of alpha_{k1..kl} / alpha, for l = 0..k_max.
std::vector<double> x_ratios(int k_max, double rho, const Spectrum& spectrum);

double eta_combinatorial(int k, double rho, const Spectrum& spectrum);
EtaTable eta_table(int k_max, double rho, const Spectrum& spectrum);
// Central differences starting from step rho * 10^(-2/k), halved richardson_levels times.
// A single level is too coarse for k >= 3.
double eta_fd_oracle(int k, double rho, const Spectrum& spectrum, int richardson_levels = 4);

double q_polynomial(int k, double x, double a);

// Upper bound on |rho^k d^k alpha / d rho^k| from the spherical representation.
double eta_envelope(int k, double rho, const Spectrum& spectrum);

Report asymptotic_checks(const Spectrum& spectrum, int k_max, const std::vector<double>& rho_schedule);

// sum_t (-1)^(t-k) {j brace t}[t brack k] = delta_jk and its transpose, exactly, for j, k <= n_max.
Report stirling_inversion_check(int n_max);

// The fixed oracle battery: v in {1,2,3} times rho in {0.5, 2, 8, 20}.
struct EtaBatteryPoint {
    Spectrum spectrum;
    double rho;
};
std::vector<EtaBatteryPoint> eta_battery();
// Combinatorial vs finite-difference eta_k (tolerance 1e-3) and f_k linearity (1e-5), k <= k_max.
Report eta_oracle_report(int k_max = 3);

// Exact identities of the coefficient tables.
Report coefficient_identities(int v, int k_max);

}  // namespace tg
