#pragma once

#include "tg/report.hpp"

#include <cstdint>
#include <vector>

namespace tg {

class Spectrum {
public:
    Spectrum() = default;
    explicit Spectrum(std::vector<double> lambdas);

    std::size_t dim() const { return l_.size(); }
    double operator[](std::size_t i) const { return l_[i]; }
    const std::vector<double>& values() const { return l_; }
    double max() const;
    double min() const;
    double determinant() const;
    // Drop one or two coordinates (the reduced spectra of the slicing expansion).
    Spectrum without(std::size_t n) const;
    Spectrum without(std::size_t n, std::size_t m) const;

private:
    std::vector<double> l_;
};

using MultiIndex = std::vector<int>;

struct IntegralValue {
    double value = 0.0;
    double est_abs_error = 0.0;
};

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_kept = 0;
    std::uint64_t n_total = 0;
    std::uint64_t seed = 0;
};

// All integrals alpha_{1:k_1 ... v:k_v} with k_j <= caps[j], from one nested pass.
class AlphaTable {
public:
    AlphaTable() = default;
    AlphaTable(std::vector<int> caps, std::vector<double> values, std::vector<double> errors);

    const std::vector<int>& caps() const { return caps_; }
    std::size_t flat(const MultiIndex& k) const;
    double value(const MultiIndex& k) const { return values_[flat(k)]; }
    double error(const MultiIndex& k) const { return errors_[flat(k)]; }
    IntegralValue at(const MultiIndex& k) const { return {value(k), error(k)}; }
    // Convenience accessors for the dimensionless ratios used everywhere.
    double a() const;                     // alpha
    double a1(std::size_t n) const;       // alpha_n
    double a2(std::size_t n, std::size_t m) const;  // alpha_nm, alpha_nn for n == m

private:
    std::vector<int> caps_;
    std::vector<std::size_t> stride_;
    std::vector<double> values_;
    std::vector<double> errors_;
};

IntegralValue alpha_1d(int k, double rho, double lambda);
IntegralValue alpha(const MultiIndex& index, double rho, const Spectrum& spectrum);
AlphaTable alpha_table(const std::vector<int>& caps, double rho, const Spectrum& spectrum);
// alpha^{(v)} with alpha^{(0)} == 1 for an empty spectrum.
double alpha_plain(double rho, const Spectrum& spectrum);

MCEstimate alpha_mc(const MultiIndex& index, double rho, const Spectrum& spectrum,
                    std::uint64_t n_total, std::uint64_t seed);

// Gauss-Legendre rule on [-1, 1]; cached.
const std::vector<std::pair<double, double>>& gauss_legendre(int n);
int quadrature_nodes(std::size_t v);

Report verify_structural(double rho, const Spectrum& spectrum, int order_cap);

}  // namespace tg
