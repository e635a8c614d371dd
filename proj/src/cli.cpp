#include "tg/cli.hpp"

#include "tg/ball_integrals.hpp"
#include "tg/errors.hpp"
#include "tg/eta_coefficients.hpp"
#include "tg/moments.hpp"
#include "tg/parallel.hpp"
#include "tg/weak_expansion.hpp"
#include "tg/xi_algebra.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <variant>

namespace tg {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string target;  // figure id or verify suite
    int v = 0;
    std::string lambdas;
    std::optional<double> rho;
    std::string rho_range;
    std::optional<std::string> index;
    int order = -1;
    int qmax = 6;
    std::uint64_t seed = 20240601;
    std::uint64_t mc = 0;
    int points = 60;
    int p_min = 50, p_max = 100;
    bool quick = false;
    std::string out_path;
    std::string format;  // empty: csv, or json for verify
};

using Cell = std::variant<std::monostate, long long, double, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

std::string csv_cell(const Cell& c) {
    if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
    if (std::holds_alternative<std::string>(c)) {
        const std::string& s = std::get<std::string>(c);
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    }
    if (std::holds_alternative<double>(c)) {
        const double x = std::get<double>(c);
        if (std::isnan(x)) return "nan";
        if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17e", x);
        return buf;
    }
    return "";
}

nlohmann::json json_cell(const Cell& c) {
    if (std::holds_alternative<long long>(c)) return std::get<long long>(c);
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    if (std::holds_alternative<double>(c)) {
        const double x = std::get<double>(c);
        if (!std::isfinite(x)) return nullptr;
        return x;
    }
    return nullptr;
}

void emit_text(const RunConfig& c, const std::string& text, std::ostream& out) {
    if (c.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.out_path);
    if (!f) throw UsageError("cannot open output file " + c.out_path);
    f << text;
}

void emit_table(const RunConfig& c, const Table& t, std::ostream& out) {
    std::ostringstream os;
    if (c.format == "json") {
        nlohmann::json j;
        j["schema_version"] = "1";
        j["command"] = c.command + (c.target.empty() ? "" : " " + c.target);
        j["columns"] = t.header;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : t.rows) {
            nlohmann::json o = nlohmann::json::object();
            for (std::size_t i = 0; i < r.size(); ++i) o[t.header[i]] = json_cell(r[i]);
            rows.push_back(o);
        }
        j["rows"] = rows;
        os << j.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
        os << "\n";
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
            os << "\n";
        }
    }
    emit_text(c, os.str(), out);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

double parse_real(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw UsageError("cannot parse " + what + " '" + s + "'");
    }
    if (pos != s.size()) throw UsageError("cannot parse " + what + " '" + s + "'");
    return x;
}

long long parse_int(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    long long x = 0;
    try {
        x = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw UsageError("cannot parse " + what + " '" + s + "'");
    }
    if (pos != s.size()) throw UsageError("cannot parse " + what + " '" + s + "'");
    return x;
}

Spectrum spectrum_from(const RunConfig& c, const std::vector<double>& fallback) {
    std::vector<double> l;
    if (c.lambdas.empty()) {
        if (fallback.empty()) throw UsageError("--lambda is required");
        l = fallback;
    } else {
        for (const auto& tok : split(c.lambdas, ',')) l.push_back(parse_real(tok, "--lambda entry"));
    }
    if (c.v != 0 && static_cast<std::size_t>(c.v) != l.size())
        throw UsageError("--v " + std::to_string(c.v) + " does not match " + std::to_string(l.size()) + " lambda values");
    return Spectrum(l);
}

std::vector<double> rho_values(const RunConfig& c, const std::vector<double>& fallback) {
    if (!c.rho_range.empty()) {
        auto parts = split(c.rho_range, ':');
        if (parts.size() != 4) throw UsageError("--rho-range must look like min:max:points:scale");
        const double lo = parse_real(parts[0], "range minimum"), hi = parse_real(parts[1], "range maximum");
        const long long n = parse_int(parts[2], "range points");
        const std::string& scale = parts[3];
        if (n < 2) throw UsageError("--rho-range needs at least two points");
        if (!(hi > lo)) throw UsageError("--rho-range needs max > min");
        if (scale != "lin" && scale != "log") throw UsageError("--rho-range scale must be lin or log");
        if (scale == "log" && !(lo > 0.0)) throw UsageError("log range needs a positive minimum");
        std::vector<double> r(n);
        for (long long i = 0; i < n; ++i) {
            const double f = static_cast<double>(i) / (n - 1);
            r[i] = scale == "lin" ? lo + (hi - lo) * f : lo * std::pow(hi / lo, f);
        }
        return r;
    }
    if (c.rho) return {*c.rho};
    if (fallback.empty()) throw UsageError("--rho or --rho-range is required");
    return fallback;
}

MultiIndex parse_index(const std::string& s, std::size_t v) {
    MultiIndex k(v, 0);
    if (s.empty()) return k;
    for (const auto& tok : split(s, ',')) {
        auto ij = split(tok, ':');
        if (ij.size() != 2 || ij[0].empty() || ij[1].empty()) throw UsageError("malformed index term '" + tok + "', expected dim:power");
        const long long d = parse_int(ij[0], "index dimension"), p = parse_int(ij[1], "index power");
        if (d < 1 || d > static_cast<long long>(v)) throw UsageError("index dimension " + ij[0] + " out of range 1.." + std::to_string(v));
        if (p < 0 || p > 64) throw UsageError("index power " + ij[1] + " out of range");
        k[d - 1] += static_cast<int>(p);
    }
    return k;
}

int cmd_integral(const RunConfig& c, std::ostream& out) {
    const Spectrum sp = spectrum_from(c, {});
    if (!c.index) throw UsageError("--index is required (use \"\" for the plain integral)");
    const MultiIndex k = parse_index(*c.index, sp.dim());
    Table t;
    t.header = {"rho", "value", "est_abs_error"};
    if (c.mc) t.header.insert(t.header.end(), {"mc_mean", "mc_std_error", "mc_seed"});
    for (double rho : rho_values(c, {})) {
        IntegralValue iv = alpha(k, rho, sp);
        std::vector<Cell> row{rho, iv.value, iv.est_abs_error};
        if (c.mc) {
            MCEstimate m = alpha_mc(k, rho, sp, c.mc, c.seed);
            row.insert(row.end(), {m.mean, m.std_error, static_cast<long long>(m.seed)});
        }
        t.rows.push_back(row);
    }
    emit_table(c, t, out);
    return 0;
}

int cmd_moments(const RunConfig& c, std::ostream& out) {
    const Spectrum sp = spectrum_from(c, {});
    const std::vector<double> rhos = rho_values(c, {});
    std::vector<CorrelationSet> cs(rhos.size());
    std::vector<MomentSet> ms(rhos.size());
    parallel_for(rhos.size(), [&](std::size_t i) {
        cs[i] = correlation_set(rhos[i], sp);
        ms[i] = conditional_moments(rhos[i], sp);
    });
    Table t;
    t.header = {"rho", "n", "second_moment", "fourth_moment", "delta", "delta_error", "gamma_nn", "region"};
    for (std::size_t i = 0; i < rhos.size(); ++i)
        for (std::size_t n = 0; n < sp.dim(); ++n) {
            const Region r = rhos[i] <= sp[n] ? Region::strong : (rhos[i] > 2.0 * sp[n] ? Region::weak : Region::crossover);
            t.rows.push_back({rhos[i], static_cast<long long>(n + 1), ms[i].second[n], ms[i].fourth[n], cs[i].delta[n],
                              cs[i].delta_error[n], cs[i].gamma[n][n], std::string(region_name(r))});
        }
    emit_table(c, t, out);
    return 0;
}

int cmd_eta(const RunConfig& c, std::ostream& out) {
    const Spectrum sp = spectrum_from(c, {});
    const int order = c.order < 0 ? 4 : c.order;
    if (order < 1 || order > 6) throw UsageError("--order must be in 1..6 for eta");
    Table t;
    t.header = {"rho", "k", "eta_combinatorial", "eta_fd"};
    for (double rho : rho_values(c, {})) {
        const EtaTable e = eta_table(order, rho, sp);
        for (int k = 1; k <= order; ++k) {
            Cell fd = std::monostate{};
            if (k <= 4) fd = eta_fd_oracle(k, rho, sp);
            t.rows.push_back({rho, static_cast<long long>(k), e.values[k], fd});
        }
    }
    emit_table(c, t, out);
    return 0;
}

int figure_cp_table(const RunConfig& c, std::ostream& out) {
    std::vector<int> vs;
    if (c.v != 0)
        vs.push_back(c.v);
    else
        vs = {2, 3, 4, 5, 6};
    Table t;
    t.header = {"v", "p", "C", "fit_A", "fit_eps", "fit_chi2"};
    for (int v : vs) {
        const ConvergenceEstimate e = convergence_estimate(v, c.p_min, c.p_max);
        for (std::size_t i = 0; i < e.p_values.size(); ++i)
            t.rows.push_back({static_cast<long long>(v), static_cast<long long>(e.p_values[i]), e.c_values[i], e.fit_A,
                              e.fit_eps, e.fit_chi2});
    }
    emit_table(c, t, out);
    return 0;
}

int figure_delta_grid(const RunConfig& c, std::ostream& out) {
    const double rho = c.rho.value_or(1.0);
    const DeltaGrid g = delta_grid(2, c.points, rho);
    Table t;
    t.header = {"lambda1", "lambda2", "delta_1", "delta_2"};
    for (std::size_t p = 0; p < g.points.size(); ++p)
        t.rows.push_back({g.points[p][0], g.points[p][1], g.delta[p][0], g.delta[p][1]});
    emit_table(c, t, out);
    return 0;
}

int figure_gamma(const RunConfig& c, std::ostream& out, bool convergence) {
    const Spectrum sp = spectrum_from(c, {1.0, 2.0, 3.0});
    const std::size_t v = sp.dim();
    const std::vector<double> ts = rho_values(c, {});
    std::vector<double> grid = ts;
    if (c.rho_range.empty() && !c.rho) {
        grid.clear();
        const int n = convergence ? 50 : 60;
        for (int i = 0; i < n; ++i) grid.push_back(convergence ? 1.0 + 49.0 * i / (n - 1) : 0.5 + 29.5 * i / (n - 1));
    }
    const double lref = sp[v - 1];
    std::vector<CorrelationSet> cs(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { cs[i] = correlation_set(grid[i] * lref, sp); });
    Table t;
    t.header = {"rho_over_lambda" + std::to_string(v)};
    if (!convergence) {
        for (std::size_t n = 0; n < v; ++n)
            for (std::size_t m = n + 1; m < v; ++m) t.header.push_back("abs_gamma_" + std::to_string(n + 1) + std::to_string(m + 1));
    } else {
        for (std::size_t n = 0; n < v; ++n) t.header.push_back("gamma_nn_" + std::to_string(n + 1));
        for (std::size_t n = 0; n < v; ++n) t.header.push_back("gamma_nn_1d_" + std::to_string(n + 1));
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<Cell> row{grid[i]};
        const double rho = grid[i] * lref;
        if (!convergence) {
            for (std::size_t n = 0; n < v; ++n)
                for (std::size_t m = n + 1; m < v; ++m) row.push_back(std::fabs(cs[i].gamma[n][m]));
        } else {
            for (std::size_t n = 0; n < v; ++n) row.push_back(cs[i].gamma[n][n]);
            for (std::size_t n = 0; n < v; ++n) {
                const double a0 = alpha_1d(0, rho, sp[n]).value, a1 = alpha_1d(1, rho, sp[n]).value,
                             a2 = alpha_1d(2, rho, sp[n]).value;
                row.push_back(sp[n] * sp[n] / (rho * rho) * (a2 / a0 - (a1 / a0) * (a1 / a0)));
            }
        }
        t.rows.push_back(row);
    }
    emit_table(c, t, out);
    return 0;
}

int cmd_figure(const RunConfig& c, std::ostream& out) {
    if (c.target == "cp-table") return figure_cp_table(c, out);
    if (c.target == "delta-grid") return figure_delta_grid(c, out);
    if (c.target == "gamma-curves") return figure_gamma(c, out, false);
    if (c.target == "gamma-convergence") return figure_gamma(c, out, true);
    throw UsageError("unknown figure '" + c.target + "'");
}

Report suite_structural(const RunConfig& c) {
    const Spectrum sp = spectrum_from(c, {1.0, 2.0});
    const int cap = c.order < 0 ? 3 : c.order;
    Report r;
    for (double rho : rho_values(c, {3.0})) r.append(verify_structural(rho, sp, cap));
    return r;
}

Report suite_inequalities(const RunConfig& c) {
    Report r;
    if (!c.lambdas.empty()) {
        const Spectrum sp = spectrum_from(c, {});
        for (double rho : rho_values(c, {})) r.append(inequality_battery(rho, sp));
        return r;
    }
    const std::vector<Spectrum> spectra = {Spectrum({1.0, 2.0}), Spectrum({1.0, 2.0, 3.0}), Spectrum({0.5, 1.0, 2.0, 4.0})};
    for (const auto& sp : spectra)
        for (double rho : {0.5, 3.0, 20.0}) r.append(inequality_battery(rho, sp));
    r.append(delta_claim_report(delta_grid(2, c.quick ? 15 : 60)));
    r.append(delta_claim_report(delta_grid(3, c.quick ? 6 : 20)));
    r.append(strong_truncation_report(spectra, {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}));
    return r;
}

Report suite_eta(const RunConfig&) {
    Report r;
    r.append(eta_oracle_report(3));
    for (int v = 1; v <= 6; ++v) {
        Report ci = coefficient_identities(v, 12);
        ci.suite += "[v=" + std::to_string(v) + "]";
        r.append(ci);
    }
    r.append(stirling_inversion_check(12));
    return r;
}

Report suite_asymptotic(const RunConfig& c) {
    const Spectrum sp = spectrum_from(c, {1.0, 2.0, 3.0});
    const int kmax = c.order < 0 ? 4 : c.order;
    if (kmax < 1 || kmax > 6) throw UsageError("--order must be in 1..6 for the asymptotic suite");
    Report r;
    r.append(asymptotic_checks(sp, kmax, rho_values(c, {20.0, 40.0, 80.0})));
    for (std::size_t n = 0; n < sp.dim(); ++n)
        for (std::size_t m = n + 1; m < sp.dim(); ++m) {
            Report g = gamma_nm_cancellation_check(n, m, 30.0, sp);
            g.suite += "[" + std::to_string(n + 1) + "," + std::to_string(m + 1) + "]";
            r.append(g);
        }
    return r;
}

Report suite_xi(const RunConfig& c) {
    if (c.qmax < 1 || c.qmax > 8) throw UsageError("--qmax must be in 1..8");
    Report r;
    r.append(omega_inequality_scan(c.qmax));
    r.append(xi_dn_dd_convolution_check(std::min(c.qmax, 6)));
    return r;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
    Report r;
    r.suite = c.target;
    if (c.target == "structural" || c.target == "all") r.append(suite_structural(c));
    if (c.target == "inequalities" || c.target == "all") r.append(suite_inequalities(c));
    if (c.target == "eta" || c.target == "all") r.append(suite_eta(c));
    if (c.target == "asymptotic" || c.target == "all") r.append(suite_asymptotic(c));
    if (c.target == "xi" || c.target == "all") r.append(suite_xi(c));

    const bool ok = r.all_pass();
    if (c.format == "csv") {
        Table t;
        t.header = {"name", "status", "margin", "detail"};
        for (const auto& it : r.items) t.rows.push_back({it.name, std::string(status_name(it.status)), it.margin, it.detail});
        emit_table(c, t, out);
    } else {
        nlohmann::json j;
        j["schema_version"] = "1";
        j["suite"] = c.target;
        j["all_pass"] = ok;
        j["violated_claims"] = r.any_violation();
        j["counts"] = {{"pass", r.count(Status::pass)},
                       {"fail", r.count(Status::fail)},
                       {"violated-claim", r.count(Status::violated_claim)}};
        nlohmann::json checks = nlohmann::json::array();
        for (const auto& it : r.items) {
            nlohmann::json o;
            o["name"] = it.name;
            o["status"] = status_name(it.status);
            o["margin"] = std::isfinite(it.margin) ? nlohmann::json(it.margin) : nlohmann::json(nullptr);
            o["detail"] = it.detail;
            checks.push_back(o);
        }
        j["checks"] = checks;
        emit_text(c, j.dump(2) + "\n", out);
    }
    return ok ? 0 : 1;
}

void add_common(CLI::App* s, RunConfig& c) {
    s->add_option("--v", c.v, "dimension (checked against --lambda)");
    s->add_option("--lambda", c.lambdas, "comma-separated spectrum");
    s->add_option("--rho", c.rho, "ball radius squared");
    s->add_option("--rho-range", c.rho_range, "min:max:points:lin|log");
    s->add_option("--seed", c.seed, "Monte Carlo seed");
    s->add_option("--out", c.out_path, "write output to this file");
    s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Moments of spherically truncated Gaussian vectors"};
    app.name("tg");
    app.require_subcommand(1);
    RunConfig c;

    auto* integral = app.add_subcommand("integral", "Gaussian ball integral alpha for one multi-index");
    add_common(integral, c);
    integral->add_option("--index", c.index, "dim:power terms, e.g. 1:2,2:1; empty for alpha");
    integral->add_option("--mc", c.mc, "also run a Monte Carlo estimate with this many samples");

    auto* moments = app.add_subcommand("moments", "Conditional moments, Delta_n and Gamma_nn");
    add_common(moments, c);

    auto* eta = app.add_subcommand("eta", "Coefficient functions eta_k");
    add_common(eta, c);
    eta->add_option("--order", c.order, "highest k");

    const std::vector<std::string> figures = {"delta-grid", "gamma-curves", "gamma-convergence", "cp-table"};
    auto* figure = app.add_subcommand("figure", "Figure data as CSV");
    add_common(figure, c);
    figure->add_option("id", c.target, "delta-grid | gamma-curves | gamma-convergence | cp-table")
        ->required()
        ->check(CLI::IsMember(figures));
    figure->add_option("--points", c.points, "points per axis for delta-grid");
    figure->add_option("--pmin", c.p_min, "cp-table fit range start");
    figure->add_option("--pmax", c.p_max, "cp-table fit range end");

    auto* cp = app.add_subcommand("cp-table", "Same as 'figure cp-table'");
    add_common(cp, c);
    cp->add_option("--pmin", c.p_min, "fit range start");
    cp->add_option("--pmax", c.p_max, "fit range end");

    auto* verify = app.add_subcommand("verify", "Run verification suites; JSON report");
    add_common(verify, c);
    verify->add_option("suite", c.target, "structural | inequalities | eta | asymptotic | xi | all")
        ->required()
        ->check(CLI::IsMember({"structural", "inequalities", "eta", "asymptotic", "xi", "all"}));
    verify->add_option("--order", c.order, "derivative cap (structural) or highest k (asymptotic)");
    verify->add_option("--qmax", c.qmax, "highest order for the xi suite");
    verify->add_flag("--quick", c.quick, "smaller sweeps");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    if (c.format.empty()) c.format = verify->parsed() ? "json" : "csv";
    try {
        if (integral->parsed()) {
            c.command = "integral";
            return cmd_integral(c, out);
        }
        if (moments->parsed()) {
            c.command = "moments";
            return cmd_moments(c, out);
        }
        if (eta->parsed()) {
            c.command = "eta";
            return cmd_eta(c, out);
        }
        if (figure->parsed() || cp->parsed()) {
            c.command = "figure";
            if (cp->parsed()) c.target = "cp-table";
            return cmd_figure(c, out);
        }
        if (verify->parsed()) {
            c.command = "verify";
            return cmd_verify(c, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const CapabilityError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        if (!e.diagnostics().empty()) err << e.diagnostics() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    err << "error: no command\n";
    return 2;
}

}  // namespace tg
