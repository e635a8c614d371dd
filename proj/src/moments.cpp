#include "tg/moments.hpp"

#include "tg/errors.hpp"
#include "tg/parallel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace tg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_n(std::size_t n, const Spectrum& sp) {
    if (n >= sp.dim()) throw DomainError("direction index out of range");
}

std::vector<int> unit_caps(std::size_t v, std::size_t n, int k) {
    std::vector<int> c(v, 0);
    c[n] = k;
    return c;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(4);
    os << std::scientific << x;
    return os.str();
}

// Claims from the literature get violated_claim; proven facts get fail.
void judge(Report& r, const std::string& name, double margin, double err, bool is_claim) {
    Status s = Status::pass;
    std::string detail = "margin " + fmt(margin) + " error " + fmt(err);
    if (margin < 0.0) {
        if (-margin <= 10.0 * err)
            detail += " (within error)";
        else
            s = is_claim ? Status::violated_claim : Status::fail;
    }
    r.add(name, s, margin, detail);
}

}  // namespace

const char* region_name(Region r) {
    switch (r) {
        case Region::strong: return "strong";
        case Region::weak: return "weak";
        case Region::crossover: return "crossover";
    }
    return "crossover";
}

RatioSet ratio_set(double rho, const Spectrum& sp) {
    const std::size_t v = sp.dim();
    AlphaTable t = alpha_table(std::vector<int>(v, 2), rho, sp);
    RatioSet rs;
    rs.v = v;
    MultiIndex z(v, 0);
    rs.alpha = t.value(z);
    rs.alpha_error = t.error(z);
    const double a = rs.alpha, ea = rs.alpha_error;
    if (!(a > 0.0)) throw NumericError("alpha underflowed to zero; rho too small relative to the spectrum");
    auto ratio_err = [&](double num, double enum_) { return enum_ / a + std::fabs(num) * ea / (a * a) + 4 * kEps * std::fabs(num / a); };
    rs.r1.resize(v);
    rs.r1_error.resize(v);
    rs.r2.assign(v, std::vector<double>(v));
    rs.r2_error.assign(v, std::vector<double>(v));
    for (std::size_t n = 0; n < v; ++n) {
        MultiIndex k = z;
        k[n] = 1;
        rs.r1[n] = t.value(k) / a;
        rs.r1_error[n] = ratio_err(t.value(k), t.error(k));
        for (std::size_t m = 0; m <= n; ++m) {
            MultiIndex q = z;
            ++q[n];
            ++q[m];
            double val = t.value(q) / a, err = ratio_err(t.value(q), t.error(q));
            rs.r2[n][m] = rs.r2[m][n] = val;
            rs.r2_error[n][m] = rs.r2_error[m][n] = err;
        }
    }
    return rs;
}

MomentSet conditional_moments(double rho, const Spectrum& sp) {
    RatioSet rs = ratio_set(rho, sp);
    const std::size_t v = sp.dim();
    MomentSet m;
    m.second.resize(v);
    m.fourth.resize(v);
    m.cross.assign(v, std::vector<double>(v));
    for (std::size_t n = 0; n < v; ++n) {
        m.second[n] = sp[n] * rs.r1[n];
        for (std::size_t k = 0; k < v; ++k) m.cross[n][k] = sp[n] * sp[k] * rs.r2[n][k];
        m.fourth[n] = m.cross[n][n];
    }
    return m;
}

namespace {

CorrelationSet correlations_from(const RatioSet& rs, double rho, const Spectrum& sp) {
    const std::size_t v = sp.dim();
    CorrelationSet c;
    c.gamma.assign(v, std::vector<double>(v));
    c.gamma_error.assign(v, std::vector<double>(v));
    c.delta.resize(v);
    c.delta_error.resize(v);
    for (std::size_t n = 0; n < v; ++n) {
        double s = sp[n] / rho;
        double rn = rs.r1[n], rnn = rs.r2[n][n];
        double b = rnn - rn * rn - 2.0 * rn;
        double eb = rs.r2_error[n][n] + (2.0 * rn + 2.0) * rs.r1_error[n] + 8 * kEps * (rnn + rn * rn + 2.0 * rn);
        c.delta[n] = s * s * b;
        c.delta_error[n] = s * s * eb;
        for (std::size_t m = 0; m <= n; ++m) {
            double sm = sp[m] / rho;
            double rm = rs.r1[m];
            double g = s * sm * (rs.r2[n][m] - rn * rm);
            double eg = s * sm * (rs.r2_error[n][m] + rm * rs.r1_error[n] + rn * rs.r1_error[m] +
                                  4 * kEps * (rs.r2[n][m] + rn * rm));
            c.gamma[n][m] = c.gamma[m][n] = g;
            c.gamma_error[n][m] = c.gamma_error[m][n] = eg;
        }
    }
    return c;
}

}  // namespace

CorrelationSet correlation_set(double rho, const Spectrum& sp) { return correlations_from(ratio_set(rho, sp), rho, sp); }

double delta_n(std::size_t n, double rho, const Spectrum& sp) {
    check_n(n, sp);
    AlphaTable t = alpha_table(unit_caps(sp.dim(), n, 2), rho, sp);
    double a = t.a(), r1 = t.a1(n) / a, r2 = t.a2(n, n) / a;
    double s = sp[n] / rho;
    return s * s * (r2 - r1 * r1 - 2.0 * r1);
}

double marginal_density(std::size_t n, double x, double rho, const Spectrum& sp) {
    check_n(n, sp);
    if (!(rho > 0.0)) throw DomainError("rho must be positive");
    if (x * x >= rho) return 0.0;
    double rest = alpha_plain(rho - x * x, sp.without(n));
    double dens = std::exp(-x * x / (2.0 * sp[n])) / std::sqrt(2.0 * std::numbers::pi * sp[n]);
    return rest * dens / alpha_plain(rho, sp);
}

HolderReport holder_report(std::size_t n, double rho, const Spectrum& sp) {
    check_n(n, sp);
    AlphaTable t = alpha_table(unit_caps(sp.dim(), n, 2), rho, sp);
    double e2 = sp[n] * t.a1(n) / t.a();
    double e4 = sp[n] * sp[n] * t.a2(n, n) / t.a();
    HolderReport h;
    h.h1 = rho - e2;
    h.h2 = e2;
    h.h = std::max(h.h1, h.h2);
    if (rho <= sp[n])
        h.region = Region::strong;
    else if (rho > 2.0 * sp[n])
        h.region = Region::weak;
    else
        h.region = Region::crossover;
    double var = e4 - e2 * e2;
    h.bound_holds = var <= 2.0 * h.h * e2 * (1.0 + 1e-12);
    return h;
}

bool loose_bound_check(std::size_t n, double rho, const Spectrum& sp) {
    check_n(n, sp);
    AlphaTable t = alpha_table(unit_caps(sp.dim(), n, 2), rho, sp);
    double e2 = sp[n] * t.a1(n) / t.a();
    double e4 = sp[n] * sp[n] * t.a2(n, n) / t.a();
    return e4 <= sp[n] * (2.0 * sp[n] + e2) * (1.0 + 1e-13);
}

namespace {

double rho_star_map(std::size_t n, const Spectrum& sp, double rho) {
    AlphaTable t = alpha_table(unit_caps(sp.dim(), n, 1), rho, sp);
    return 2.0 * (sp[n] + sp[n] * t.a1(n) / t.a());
}

}  // namespace

double rho_star_residual(std::size_t n, const Spectrum& sp, double rho) {
    check_n(n, sp);
    return rho - rho_star_map(n, sp, rho);
}

double rho_star(std::size_t n, const Spectrum& sp, double tol) {
    check_n(n, sp);
    if (!(tol > 0.0)) throw DomainError("rho_star: tol must be positive");
    auto g = [&](double rho) { return rho_star_map(n, sp, rho); };
    double rho = 3.0 * sp[n];
    for (int it = 0; it < 200; ++it) {
        double gv = g(rho);
        if (std::fabs(rho - gv) < tol) return rho;
        rho = 0.5 * rho + 0.5 * gv;
    }
    throw NumericError("rho_star: fixed-point iteration did not converge in 200 steps");
}

double truncated_normal_second_moment(double rho, double lambda) {
    double a = std::sqrt(rho / lambda);
    double phi = std::exp(-0.5 * a * a) / std::sqrt(2.0 * std::numbers::pi);
    double mass = std::erf(a / std::numbers::sqrt2);  // 2 Phi(a) - 1
    return lambda * (1.0 - 2.0 * a * phi / mass);
}

Report inequality_battery(double rho, const Spectrum& sp) {
    const std::size_t v = sp.dim();
    RatioSet rs = ratio_set(rho, sp);
    CorrelationSet c = correlations_from(rs, rho, sp);
    Report r;
    r.suite = "inequalities";
    const double r2 = rho * rho;

    for (std::size_t n = 0; n < v; ++n) {
        std::string tag = "[" + std::to_string(n + 1) + "]";
        judge(r, "delta_nonpositive" + tag, -c.delta[n], c.delta_error[n], true);

        double l = sp[n];
        double e2 = l * rs.r1[n], e4 = l * l * rs.r2[n][n];
        double ee2 = l * rs.r1_error[n], ee4 = l * l * rs.r2_error[n][n];
        judge(r, "second_moment_bound" + tag, l - e2, ee2, false);
        judge(r, "fourth_moment_bound" + tag, 3 * l * l - e4, ee4, false);
        judge(r, "second_moment_below_rho" + tag, rho - e2, ee2, false);
        judge(r, "fourth_moment_below_rho2" + tag, r2 - e4, ee4, false);
        double b1 = e2 * (2 * l + e2), b2 = l * (2 * l + e2), b3 = 3 * l * l;
        double eb = ee4 + (2 * l + 2 * e2) * ee2;
        judge(r, "chain_b1" + tag, b1 - e4, eb, true);
        judge(r, "chain_b2_loose_bound" + tag, b2 - e4, eb, false);
        judge(r, "chain_b3" + tag, b3 - e4, ee4, false);
        judge(r, "chain_monotone" + tag, std::min(b2 - b1, b3 - b2), l * ee2 * 2, false);

        double var = r2 * c.gamma[n][n];
        double off = 0.0, off_err = r2 * c.gamma_error[n][n];
        for (std::size_t m = 0; m < v; ++m)
            if (m != n) {
                off += std::fabs(r2 * c.gamma[n][m]);
                off_err += r2 * c.gamma_error[n][m];
            }
        judge(r, "diagonal_dominance" + tag, var - off, off_err, true);
    }
    for (std::size_t n = 0; n < v; ++n)
        for (std::size_t m = n + 1; m < v; ++m)
            judge(r, "cov_nonpositive[" + std::to_string(n + 1) + "," + std::to_string(m + 1) + "]",
                  -c.gamma[n][m], c.gamma_error[n][m], true);

    // Sum var/lambda^2 - 2v + sum_{j != k} cov/(lambda_j lambda_k) <= 0, in ratio form.
    double lc = -2.0 * static_cast<double>(v), lc_err = 0.0;
    double lowest = 0.0, lowest_err = 0.0;
    for (std::size_t j = 0; j < v; ++j) {
        lowest += rs.r1[j];
        lowest_err += rs.r1_error[j];
        for (std::size_t k = 0; k < v; ++k) {
            lc += rs.r2[j][k] - rs.r1[j] * rs.r1[k];
            lc_err += rs.r2_error[j][k] + rs.r1[k] * rs.r1_error[j] + rs.r1[j] * rs.r1_error[k];
        }
    }
    lc_err += 16 * kEps * static_cast<double>(v * v);
    judge(r, "log_concavity", -lc, lc_err, false);
    judge(r, "lowest_ineq", static_cast<double>(v) - lowest, lowest_err, false);
    return r;
}

DeltaGrid delta_grid(std::size_t v, int per_axis, double rho, double t_min, double t_max) {
    if (v < 1 || v > 4) throw DomainError("delta_grid: v must be in 1..4");
    if (per_axis < 2) throw DomainError("delta_grid: need at least two points per axis");
    if (!(rho > 0.0) || !(t_min > 0.0) || !(t_max > t_min)) throw DomainError("delta_grid: bad range");
    std::vector<double> axis(per_axis);
    for (int i = 0; i < per_axis; ++i)
        axis[i] = rho / (t_min * std::pow(t_max / t_min, static_cast<double>(i) / (per_axis - 1)));
    std::size_t total = 1;
    for (std::size_t j = 0; j < v; ++j) total *= per_axis;
    DeltaGrid g;
    g.rho = rho;
    g.points.resize(total);
    g.delta.assign(total, std::vector<double>(v, 0.0));
    g.delta_error = g.delta;
    for (std::size_t p = 0; p < total; ++p) {
        std::vector<double> l(v);
        std::size_t r = p;
        for (std::size_t j = 0; j < v; ++j) {
            l[j] = axis[r % per_axis];
            r /= per_axis;
        }
        g.points[p] = Spectrum(l);
    }
    parallel_for(total, [&](std::size_t p) {
        CorrelationSet c = correlation_set(rho, g.points[p]);
        g.delta[p] = c.delta;
        g.delta_error[p] = c.delta_error;
    });
    return g;
}

Report delta_claim_report(const DeltaGrid& g) {
    Report r;
    r.suite = "delta_sweep";
    if (g.points.empty()) return r;
    const std::size_t v = g.points[0].dim();
    for (std::size_t n = 0; n < v; ++n) {
        double worst = 1e300, worst_err = 0.0;
        std::size_t at = 0, beyond = 0, within = 0;
        for (std::size_t p = 0; p < g.points.size(); ++p) {
            const double margin = -g.delta[p][n], err = g.delta_error[p][n];
            if (margin < 0.0) (-margin <= 10.0 * err ? within : beyond)++;
            if (margin < worst) {
                worst = margin;
                worst_err = err;
                at = p;
            }
        }
        std::ostringstream os;
        os << g.points.size() << " points, " << beyond << " beyond error, " << within
           << " positive within error; worst margin " << fmt(worst) << " (error " << fmt(worst_err) << ") at lambda=";
        for (std::size_t j = 0; j < v; ++j) os << (j ? "," : "") << g.points[at][j];
        r.add("delta_nonpositive[" + std::to_string(n + 1) + "]", beyond ? Status::violated_claim : Status::pass, worst,
              os.str());
    }
    return r;
}

Report strong_truncation_report(const std::vector<Spectrum>& spectra, const std::vector<double>& rhos) {
    Report r;
    r.suite = "strong_truncation";
    int tested = 0, broken = 0;
    std::string first;
    for (const auto& sp : spectra)
        for (double rho : rhos)
            for (std::size_t n = 0; n < sp.dim(); ++n) {
                ++tested;
                if (!loose_bound_check(n, rho, sp)) {
                    ++broken;
                    if (first.empty()) first = "rho=" + fmt(rho) + " n=" + std::to_string(n + 1);
                }
            }
    r.add("loose_bound", broken == 0, -static_cast<double>(broken),
          std::to_string(tested) + " cases" + (first.empty() ? "" : ", first failure " + first));
    double worst_window = 1e300, worst_res = 0.0;
    bool in_window = true;
    for (const auto& sp : spectra)
        for (std::size_t n = 0; n < sp.dim(); ++n) {
            const double rs = rho_star(n, sp, 1e-12);
            const double l = sp[n];
            if (!(rs > 2.0 * l && rs <= 4.0 * l)) in_window = false;
            worst_window = std::min({worst_window, (rs - 2.0 * l) / l, (4.0 * l - rs) / l});
            worst_res = std::max(worst_res, std::fabs(rho_star_residual(n, sp, rs)) / l);
        }
    r.add("rho_star_window", in_window, worst_window,
          "min distance to the window edges in units of lambda_n " + fmt(worst_window));
    r.add("rho_star_residual", worst_res < 1e-8, 1e-8 - worst_res, "max residual / lambda_n " + fmt(worst_res));
    return r;
}

}  // namespace tg
