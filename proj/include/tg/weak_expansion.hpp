#pragma once

#include "tg/ball_integrals.hpp"
#include "tg/eta_coefficients.hpp"
#include "tg/report.hpp"

#include <string>
#include <vector>

namespace tg {

// alpha_{n:p} (one sliced direction) or alpha_{n:p, m:s} (two). Indices are zero-based.
struct ExpansionTarget {
    std::size_t n = 0;
    int p = 0;
    bool two_directions = false;
    std::size_t m = 0;
    int s = 0;

    std::string label() const;
};

struct ExpansionPartialSum {
    ExpansionTarget target;
    int order = 0;
    double value = 0.0;
    std::vector<double> terms;  // terms[q] is the full order-q contribution
};

struct ConvergenceEstimate {
    int v = 0;
    std::vector<int> p_values;
    std::vector<double> c_values;
    double fit_A = 0.0;
    double fit_eps = 0.0;
    double fit_chi2 = 0.0;  // residual sum of squares of log C per degree of freedom
};

ExpansionPartialSum expand_alpha(const ExpansionTarget& target, int order, double rho,
                                 const Spectrum& spectrum);

// Bracket multiplying -(lambda_n/rho)^3 eta_1 in the expansion of Gamma_nn.
double gamma_nn_expansion_coeff(bool rho_limit, std::size_t n, double rho, const Spectrum& spectrum);

// Order-0 and order-1 cancellation (exact up to rounding) and |Gamma_nm| < 0.1 (l_n l_m / rho^2)(l_max / rho),
// the last reported as a claim.
Report gamma_nm_cancellation_check(std::size_t n, std::size_t m, double rho, const Spectrum& spectrum);

// C^{(v)}(p) for one p.
double convergence_c(int v, int p);
ConvergenceEstimate convergence_estimate(int v, int p_min, int p_max);

}  // namespace tg
