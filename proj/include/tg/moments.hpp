#pragma once

#include "tg/ball_integrals.hpp"
#include "tg/report.hpp"

#include <string>
#include <vector>

namespace tg {

using Matrix = std::vector<std::vector<double>>;

struct MomentSet {
    std::vector<double> second;  // E[X_n^2 | ball]
    std::vector<double> fourth;  // E[X_n^4 | ball]
    Matrix cross;                // E[X_n^2 X_m^2 | ball]; diagonal equals fourth
};

struct CorrelationSet {
    Matrix gamma;                    // Gamma_nn on the diagonal, Gamma_nm off it
    std::vector<double> delta;       // Delta_n
    std::vector<double> delta_error; // propagated quadrature error on Delta_n
    Matrix gamma_error;
};

enum class Region { strong, weak, crossover };
const char* region_name(Region r);

struct HolderReport {
    double h = 0.0;
    double h1 = 0.0;  // rho - E[X_n^2]
    double h2 = 0.0;  // E[X_n^2]
    Region region = Region::crossover;
    bool bound_holds = false;
};

// Ratios alpha_n/alpha and alpha_nm/alpha with error estimates, the shared input of this module.
struct RatioSet {
    std::size_t v = 0;
    double alpha = 0.0, alpha_error = 0.0;
    std::vector<double> r1, r1_error;  // alpha_n / alpha
    Matrix r2, r2_error;               // alpha_nm / alpha
};

RatioSet ratio_set(double rho, const Spectrum& spectrum);

MomentSet conditional_moments(double rho, const Spectrum& spectrum);
double delta_n(std::size_t n, double rho, const Spectrum& spectrum);
CorrelationSet correlation_set(double rho, const Spectrum& spectrum);
double marginal_density(std::size_t n, double x, double rho, const Spectrum& spectrum);
HolderReport holder_report(std::size_t n, double rho, const Spectrum& spectrum);
bool loose_bound_check(std::size_t n, double rho, const Spectrum& spectrum);
double rho_star(std::size_t n, const Spectrum& spectrum, double tol = 1e-10);
// rho - 2 (lambda_n + E[X_n^2 | ball]); zero at rho_star.
double rho_star_residual(std::size_t n, const Spectrum& spectrum, double rho);
// Loose fourth-moment bound on a rho grid and the rho_star window (2 lambda_n, 4 lambda_n].
Report strong_truncation_report(const std::vector<Spectrum>& spectra, const std::vector<double>& rhos);
Report inequality_battery(double rho, const Spectrum& spectrum);

// Delta_n on a tensor grid lambda_i = rho / t_i, t_i log-spaced over [t_min, t_max].
struct DeltaGrid {
    double rho = 1.0;
    std::vector<Spectrum> points;  // grid order: first coordinate fastest
    Matrix delta, delta_error;     // [point][n]
};

DeltaGrid delta_grid(std::size_t v, int points_per_axis, double rho = 1.0, double t_min = 0.1, double t_max = 50.0);
// One item per n; a positive Delta_n beyond 10x its error bar is a violated claim, not a failure.
Report delta_claim_report(const DeltaGrid& grid);

// E[X^2] for the one-dimensional truncated normal on (-sqrt(rho), sqrt(rho)).
double truncated_normal_second_moment(double rho, double lambda);

}  // namespace tg
