#include "tg/eta_coefficients.hpp"

#include "tg/errors.hpp"
#include "tg/finite_difference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tg {

namespace {

Rational pow2_inv(int t) {
    Rational r = 1;
    for (int i = 0; i < t; ++i) r /= 2;
    return r;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(4);
    os << std::scientific << x;
    return os.str();
}

// Calls f(m) for every composition m of l into v nonnegative parts.
template <class F>
void for_each_composition(int l, std::size_t v, F&& f) {
    std::vector<int> m(v, 0);
    auto rec = [&](auto&& self, std::size_t j, int left) -> void {
        if (j + 1 == v) {
            m[j] = left;
            f(m);
            return;
        }
        for (int x = 0; x <= left; ++x) {
            m[j] = x;
            self(self, j + 1, left - x);
        }
    };
    rec(rec, 0, l);
}

}  // namespace

Rational phi_k(int v, int k) {
    if (k < 0) throw DomainError("phi_k: negative k");
    Rational r = 1;
    for (int i = 1; i <= k; ++i) r *= (v - 2 * i + 2);
    return r;
}

CoefficientTable coefficient_table(int v, int k_max) {
    if (v < 1) throw DomainError("coefficient_table: v must be positive");
    if (k_max < 0 || k_max > 32) throw DomainError("coefficient_table: k_max must be in 0..32");
    CoefficientTable t;
    t.v = v;
    t.k_max = k_max;
    for (int k = 0; k <= k_max; ++k) t.phi.push_back(phi_k(v, k));
    t.d.assign(k_max + 1, std::vector<Rational>(k_max + 1, 0));
    t.c.assign(k_max + 1, std::vector<Rational>(k_max + 1, 0));
    for (int k = 0; k <= k_max; ++k)
        for (int l = 0; l <= k; ++l) {
            Rational sign = (l % 2) ? -1 : 1;
            Rational s = 0;
            for (int tt = l; tt <= k; ++tt)
                s += sign * pow2_inv(tt) * t.phi[tt - l] * Rational(stirling_second(k, tt)) * Rational(binomial(tt, l));
            t.d[k][l] = s;
            t.c[k][l] = sign * pow2_inv(k) * t.phi[k - l] * Rational(binomial(k, l));
        }
    return t;
}

std::vector<double> x_ratios(int k_max, double rho, const Spectrum& sp) {
    const std::size_t v = sp.dim();
    AlphaTable tab = alpha_table(std::vector<int>(v, k_max), rho, sp);
    const double a = tab.a();
    if (!(a > 0.0)) throw NumericError("x_ratios: alpha underflowed");
    std::vector<double> x(k_max + 1, 0.0);
    for (int l = 0; l <= k_max; ++l) {
        double s = 0.0;
        for_each_composition(l, v, [&](const std::vector<int>& m) { s += to_double(multinomial(m)) * tab.value(m); });
        x[l] = s / a;
    }
    return x;
}

EtaTable eta_table(int k_max, double rho, const Spectrum& sp) {
    if (k_max < 0) throw DomainError("eta_table: negative order");
    CoefficientTable ct = coefficient_table(static_cast<int>(sp.dim()), k_max);
    std::vector<double> x = x_ratios(k_max, rho, sp);
    EtaTable e;
    e.rho = rho;
    e.spectrum = sp;
    e.method = EtaMethod::combinatorial;
    e.values.assign(k_max + 1, 0.0);
    e.values[0] = 1.0;
    for (int k = 1; k <= k_max; ++k) {
        double s = 0.0;
        for (int l = 0; l <= k; ++l) s += to_double(ct.c[k][l]) * x[l];
        e.values[k] = s;
    }
    return e;
}

double eta_combinatorial(int k, double rho, const Spectrum& sp) {
    if (k == 0) return 1.0;
    return eta_table(k, rho, sp).values[k];
}

double eta_fd_oracle(int k, double rho, const Spectrum& sp, int levels) {
    if (k < 1 || k > 4) throw DomainError("eta_fd_oracle: k must be in 1..4");
    if (!(rho > 0.0)) throw DomainError("rho must be positive");
    auto f = [&](double r) { return alpha_plain(r, sp); };
    const double h = rho * std::pow(10.0, -2.0 / k);
    const double d = richardson_derivative(f, rho, h, k, levels);
    return std::pow(rho, k) * d / f(rho);
}

double q_polynomial(int k, double x, double a) {
    if (k < 0) throw DomainError("q_polynomial: negative degree");
    double s = 0.0;
    for (int l = 0; l <= k; ++l) s += to_double(binomial(k, l)) * raising_factorial(a, l) * std::pow(x, k - l);
    return s;
}

double eta_envelope(int k, double rho, const Spectrum& sp) {
    if (k < 1) throw DomainError("eta_envelope: k must be positive");
    const double v = static_cast<double>(sp.dim());
    const double phi = v / 2.0 - 1.0;
    const double pre = std::pow(rho / 2.0, v / 2.0) / (std::tgamma(v / 2.0) * std::sqrt(sp.determinant()));
    const double p_lo = 1.0 / sp.max(), p_hi = 1.0 / sp.min();
    double qmax = 0.0;
    const int grid = 2000;
    for (int i = 0; i <= grid; ++i) {
        double p = p_lo + (p_hi - p_lo) * i / grid;
        qmax = std::max(qmax, std::fabs(q_polynomial(k - 1, rho * p / 2.0, -phi)));
    }
    return pre * qmax * std::exp(-rho / (2.0 * sp.max()));
}

Report asymptotic_checks(const Spectrum& sp, int k_max, const std::vector<double>& sched) {
    if (sched.size() < 2) throw DomainError("asymptotic_checks: schedule needs at least two points");
    for (std::size_t i = 1; i < sched.size(); ++i)
        if (!(sched[i] > sched[i - 1])) throw DomainError("asymptotic_checks: schedule must be increasing");
    std::vector<EtaTable> tabs;
    std::vector<double> alphas;
    for (double r : sched) {
        tabs.push_back(eta_table(k_max, r, sp));
        alphas.push_back(alpha_plain(r, sp));
    }
    Report rep;
    rep.suite = "asymptotic";
    const std::size_t tail = (sched.size() - 1) / 2;
    for (int k = 1; k <= k_max; ++k) {
        std::string tag = "[k=" + std::to_string(k) + "]";
        double worst = 1e300;
        for (std::size_t i = tail + 1; i < sched.size(); ++i)
            worst = std::min(worst, std::fabs(tabs[i - 1].values[k]) - std::fabs(tabs[i].values[k]));
        rep.add("vanishing" + tag, worst > 0.0, worst, "min decrease of |eta| along the tail " + fmt(worst));

        const double want = (k % 2 == 1) ? 1.0 : -1.0;
        double smin = 1e300;
        for (std::size_t i = tail; i < sched.size(); ++i) smin = std::min(smin, want * tabs[i].values[k]);
        rep.add("sign" + tag, smin > 0.0, smin, std::string("expected sign ") + (want > 0 ? "+" : "-"));

        double env = 1e300;
        for (std::size_t i = 0; i < sched.size(); ++i) {
            double lhs = std::fabs(tabs[i].values[k]) * alphas[i];
            double rhs = eta_envelope(k, sched[i], sp);
            env = std::min(env, (rhs - lhs) / rhs);
        }
        rep.add("envelope" + tag, env >= 0.0, env, "min relative slack " + fmt(env));
    }
    return rep;
}

Report coefficient_identities(int v, int k_max) {
    CoefficientTable t = coefficient_table(v, k_max);
    Report r;
    r.suite = "coefficients";
    const Rational half(1, 2), vv(v);

    bool rec = true;
    for (int k = 0; k < k_max; ++k)
        for (int l = 0; l <= k + 1; ++l) {
            CoefficientTable const& c = t;
            Rational dk = l <= k ? c.d[k][l] : Rational(0);
            Rational dkm = (l >= 1 && l - 1 <= k) ? c.d[k][l - 1] : Rational(0);
            if (c.d[k + 1][l] != (vv / 2 + l) * dk - half * dkm) rec = false;
        }
    r.add("d_recurrence", rec, rec ? 0.0 : -1.0);

    bool conn = true;
    for (int k = 1; k <= std::min(k_max, 10); ++k)
        for (int m = 0; m <= k; ++m) {
            Rational s = 0;
            for (int l = 1; l <= k; ++l) {
                Rational sg = ((k - l) % 2) ? -1 : 1;
                if (m <= l) s += sg * Rational(stirling_first_unsigned(k, l)) * t.d[l][m];
            }
            if (s != t.c[k][m]) conn = false;
        }
    r.add("stirling_connection", conn, conn ? 0.0 : -1.0);

    bool phi_ok = t.phi[0] == 1;
    for (int k = 1; k <= k_max; ++k)
        if (t.phi[k] != Rational(v - 2 * k + 2) * t.phi[k - 1]) phi_ok = false;
    r.add("phi_recurrence", phi_ok, phi_ok ? 0.0 : -1.0);

    if (k_max >= 1) {
        bool low = t.d[1][0] == vv / 2 && t.d[1][1] == -half && t.c[1][0] == vv / 2 && t.c[1][1] == -half;
        r.add("first_order", low, low ? 0.0 : -1.0);
    }
    if (k_max >= 2) {
        bool f2 = t.d[2][0] == vv * vv / 4 && t.d[2][1] == -(vv + 1) / 2 && t.d[2][2] == Rational(1, 4);
        r.add("f2_coefficients", f2, f2 ? 0.0 : -1.0);
    }
    if (k_max >= 3) {
        bool f3 = t.d[3][0] == vv * vv * vv / 8 && t.d[3][1] == -(3 * vv * vv + 6 * vv + 4) / 8 &&
                  t.d[3][2] == (3 * vv + 6) / 8 && t.d[3][3] == Rational(-1, 8);
        r.add("f3_coefficients", f3, f3 ? 0.0 : -1.0);
    }
    return r;
}

Report stirling_inversion_check(int n_max) {
    if (n_max < 0 || n_max > 64) throw DomainError("stirling_inversion_check: n_max must be in 0..64");
    bool fwd = true, rev = true;
    for (int j = 0; j <= n_max; ++j)
        for (int k = 0; k <= n_max; ++k) {
            BigInt a = 0, b = 0;
            for (int t = 0; t <= n_max; ++t) {
                const int sg = ((t - k) % 2 == 0) ? 1 : -1;
                a += sg * stirling_second(j, t) * stirling_first_unsigned(t, k);
                b += sg * stirling_first_unsigned(j, t) * stirling_second(t, k);
            }
            const BigInt want = (j == k) ? 1 : 0;
            if (a != want) fwd = false;
            if (b != want * ((j - k) % 2 == 0 ? 1 : -1)) rev = false;
        }
    Report r;
    r.suite = "stirling";
    r.add("inversion[n<=" + std::to_string(n_max) + "]", fwd, fwd ? 0.0 : -1.0);
    r.add("inversion_transposed[n<=" + std::to_string(n_max) + "]", rev, rev ? 0.0 : -1.0);
    return r;
}

std::vector<EtaBatteryPoint> eta_battery() {
    std::vector<EtaBatteryPoint> b;
    const std::vector<std::vector<double>> sps = {{1.0}, {1.0, 2.0}, {0.5, 1.0, 3.0}};
    for (const auto& l : sps)
        for (double rho : {0.5, 2.0, 8.0, 20.0}) b.push_back({Spectrum(l), rho});
    return b;
}

Report eta_oracle_report(int k_max) {
    if (k_max < 1 || k_max > 4) throw DomainError("eta_oracle_report: k_max must be in 1..4");
    const auto battery = eta_battery();
    std::vector<double> worst_eta(k_max + 1, 0.0), worst_f(k_max + 1, 0.0);
    for (const auto& pt : battery) {
        const int v = static_cast<int>(pt.spectrum.dim());
        const EtaTable t = eta_table(k_max, pt.rho, pt.spectrum);
        const std::vector<double> x = x_ratios(k_max, pt.rho, pt.spectrum);
        const CoefficientTable ct = coefficient_table(v, k_max);
        std::vector<double> fd(k_max + 1, 1.0);
        for (int k = 1; k <= k_max; ++k) fd[k] = eta_fd_oracle(k, pt.rho, pt.spectrum);
        for (int k = 1; k <= k_max; ++k) {
            const double rel = std::fabs(t.values[k] - fd[k]) / std::max(std::fabs(t.values[k]), 1e-10);
            worst_eta[k] = std::max(worst_eta[k], rel);
            // (rho d/drho)^k alpha / alpha = sum_j {k brace j} eta_j
            double f_fd = 0.0, f_d = 0.0, scale = 0.0;
            for (int j = 0; j <= k; ++j) {
                const double s = to_double(stirling_second(k, j));
                f_fd += s * fd[j];
                scale += std::fabs(s * fd[j]);
            }
            for (int l = 0; l <= k; ++l) f_d += to_double(ct.d[k][l]) * x[l];
            const double relf = std::fabs(f_fd - f_d) / std::max(std::fabs(f_d), 1e-10 * std::max(scale, 1.0));
            worst_f[k] = std::max(worst_f[k], relf);
        }
    }
    Report r;
    r.suite = "eta_oracle";
    for (int k = 1; k <= k_max; ++k) {
        const std::string tag = "[k=" + std::to_string(k) + "]";
        r.add("combinatorial_vs_fd" + tag, worst_eta[k] < 1e-3, 1e-3 - worst_eta[k],
              "worst relative difference " + fmt(worst_eta[k]) + " over " + std::to_string(battery.size()) + " points");
        r.add("f_linearity" + tag, worst_f[k] < 1e-5, 1e-5 - worst_f[k], "worst relative difference " + fmt(worst_f[k]));
    }
    return r;
}

}  // namespace tg
