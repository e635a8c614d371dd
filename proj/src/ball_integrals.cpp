#include "tg/ball_integrals.hpp"

#include "tg/errors.hpp"
#include "tg/finite_difference.hpp"
#include "tg/parallel.hpp"
#include "tg/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace tg {

// ---------------------------------------------------------------- Spectrum

Spectrum::Spectrum(std::vector<double> lambdas) : l_(std::move(lambdas)) {
    for (double x : l_)
        if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("spectrum entries must be positive and finite");
}

double Spectrum::max() const { return l_.empty() ? 0.0 : *std::max_element(l_.begin(), l_.end()); }
double Spectrum::min() const { return l_.empty() ? 0.0 : *std::min_element(l_.begin(), l_.end()); }

double Spectrum::determinant() const {
    double d = 1.0;
    for (double x : l_) d *= x;
    return d;
}

Spectrum Spectrum::without(std::size_t n) const {
    if (n >= l_.size()) throw DomainError("spectrum index out of range");
    std::vector<double> r;
    for (std::size_t i = 0; i < l_.size(); ++i)
        if (i != n) r.push_back(l_[i]);
    Spectrum s;
    s.l_ = std::move(r);
    return s;
}

Spectrum Spectrum::without(std::size_t n, std::size_t m) const {
    if (n >= l_.size() || m >= l_.size() || n == m) throw DomainError("spectrum index pair invalid");
    std::vector<double> r;
    for (std::size_t i = 0; i < l_.size(); ++i)
        if (i != n && i != m) r.push_back(l_[i]);
    Spectrum s;
    s.l_ = std::move(r);
    return s;
}

// -------------------------------------------------------------- AlphaTable

AlphaTable::AlphaTable(std::vector<int> caps, std::vector<double> values, std::vector<double> errors)
    : caps_(std::move(caps)), values_(std::move(values)), errors_(std::move(errors)) {
    stride_.resize(caps_.size());
    std::size_t s = 1;
    for (std::size_t j = 0; j < caps_.size(); ++j) {
        stride_[j] = s;
        s *= static_cast<std::size_t>(caps_[j] + 1);
    }
}

std::size_t AlphaTable::flat(const MultiIndex& k) const {
    if (k.size() != caps_.size()) throw DomainError("multi-index length does not match the table");
    std::size_t f = 0;
    for (std::size_t j = 0; j < k.size(); ++j) {
        if (k[j] < 0 || k[j] > caps_[j]) throw DomainError("multi-index outside the computed table");
        f += stride_[j] * static_cast<std::size_t>(k[j]);
    }
    return f;
}

double AlphaTable::a() const { return values_[0]; }
double AlphaTable::a1(std::size_t n) const { return values_[stride_.at(n)]; }
double AlphaTable::a2(std::size_t n, std::size_t m) const {
    if (n == m) return values_[2 * stride_.at(n)];
    return values_[stride_.at(n) + stride_.at(m)];
}

// -------------------------------------------------------------- quadrature

const std::vector<std::pair<double, double>>& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, std::vector<std::pair<double, double>>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<std::pair<double, double>> rule(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        rule[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

int quadrature_nodes(std::size_t v) { return v <= 4 ? 48 : 24; }

namespace {

int coarse_nodes(int n) { return n == 48 ? 32 : 16; }

double gauss_density(double x, double lambda) {
    return std::exp(-x * x / (2.0 * lambda)) / std::sqrt(2.0 * std::numbers::pi * lambda);
}

// Nested slice integration. Level j integrates dimension j with dimensions 0..j-1 inside.
class Nested {
public:
    Nested(const std::vector<int>& caps, const Spectrum& sp, int nodes) : caps_(caps), sp_(sp), rule_(&gauss_legendre(nodes)) {
        std::size_t v = caps.size();
        size_.resize(v);
        std::size_t s = 1;
        for (std::size_t j = 0; j < v; ++j) {
            s *= static_cast<std::size_t>(caps[j] + 1);
            size_[j] = s;
        }
        scratch_.resize(v);
        for (std::size_t j = 0; j < v; ++j) scratch_[j].assign(size_[j], 0.0);
        int kmax = *std::max_element(caps.begin(), caps.end());
        dfact_.resize(kmax + 1);
        for (int k = 0; k <= kmax; ++k) dfact_[k] = to_double(double_factorial(2 * k - 1));
    }

    std::size_t size(std::size_t j) const { return size_[j]; }

    void eval(std::size_t j, double r, double* out, const std::vector<std::pair<double, double>>* rule = nullptr) {
        std::fill(out, out + size_[j], 0.0);
        if (!(r > 0.0)) return;
        double lam = sp_[j];
        if (j == 0) {
            auto p = regularized_gamma_p_ladder(0.5, r / (2.0 * lam), caps_[0] + 1);
            for (int k = 0; k <= caps_[0]; ++k) out[k] = dfact_[k] * p[k];
            return;
        }
        if (!rule) rule = rule_;
        const std::size_t inner = size_[j - 1];
        double* buf = scratch_[j - 1].data();
        // x = sqrt(r) sin(theta); the tail beyond x^2 = 100 lambda is below e^-50.
        double smax = std::sqrt(std::min(1.0, 100.0 * lam / r));
        double tmax = std::asin(smax);
        double sr = std::sqrt(r);
        for (const auto& [t, w] : *rule) {
            double th = 0.5 * tmax * (t + 1.0);
            double s = std::sin(th), c = std::cos(th);
            double x = sr * s;
            double weight = 2.0 * 0.5 * tmax * w * sr * c * gauss_density(x, lam);
            eval(j - 1, r * c * c, buf);
            double u = x * x / lam;
            double pw = weight;
            for (int k = 0; k <= caps_[j]; ++k) {
                double* o = out + static_cast<std::size_t>(k) * inner;
                for (std::size_t i = 0; i < inner; ++i) o[i] += pw * buf[i];
                pw *= u;
            }
        }
    }

private:
    std::vector<int> caps_;
    const Spectrum& sp_;
    const std::vector<std::pair<double, double>>* rule_;
    std::vector<std::size_t> size_;
    std::vector<std::vector<double>> scratch_;
    std::vector<double> dfact_;
};

void check_rho(double rho) {
    if (!(rho > 0.0) || std::isnan(rho)) throw DomainError("rho must be positive");
}

}  // namespace

IntegralValue alpha_1d(int k, double rho, double lambda) {
    if (k < 0) throw DomainError("alpha_1d: negative index");
    check_rho(rho);
    if (!(lambda > 0.0)) throw DomainError("alpha_1d: lambda must be positive");
    double v = to_double(double_factorial(2 * k - 1)) * regularized_gamma_p(k + 0.5, rho / (2.0 * lambda));
    return {v, 1e-15 * v};
}

AlphaTable alpha_table(const std::vector<int>& caps, double rho, const Spectrum& spectrum) {
    check_rho(rho);
    const std::size_t v = spectrum.dim();
    if (v == 0) throw DomainError("alpha: empty spectrum");
    if (caps.size() != v) throw DomainError("alpha: index length does not match the spectrum");
    for (int c : caps)
        if (c < 0) throw DomainError("alpha: negative multiplicity");
    if (v > 6) throw CapabilityError("nested quadrature supports v <= 6; use alpha_mc for larger v");

    const int n = quadrature_nodes(v);
    Nested nest(caps, spectrum, n);
    const std::size_t total = nest.size(v - 1);
    std::vector<double> fine(total), coarse(total), err(total);
    nest.eval(v - 1, rho, fine.data());
    if (v == 1) {
        for (std::size_t i = 0; i < total; ++i) err[i] = 1e-15 * fine[i];
    } else {
        nest.eval(v - 1, rho, coarse.data(), &gauss_legendre(coarse_nodes(n)));
        for (std::size_t i = 0; i < total; ++i)
            err[i] = std::fabs(fine[i] - coarse[i]) + 2.0 * std::numeric_limits<double>::epsilon() * fine[i];
    }
    for (std::size_t i = 0; i < total; ++i)
        if (!std::isfinite(fine[i]))
            throw NumericError("alpha: non-finite quadrature result");
    return AlphaTable(caps, std::move(fine), std::move(err));
}

IntegralValue alpha(const MultiIndex& index, double rho, const Spectrum& spectrum) {
    if (spectrum.dim() == 1 && index.size() == 1) return alpha_1d(index[0], rho, spectrum[0]);
    AlphaTable t = alpha_table(index, rho, spectrum);
    return t.at(index);
}

double alpha_plain(double rho, const Spectrum& spectrum) {
    if (spectrum.dim() == 0) return rho > 0.0 ? 1.0 : 0.0;
    if (!(rho > 0.0)) return 0.0;
    return alpha(MultiIndex(spectrum.dim(), 0), rho, spectrum).value;
}

// ------------------------------------------------------------- Monte Carlo

namespace {

std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double unit_open(std::uint64_t h) { return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53; }

struct Partial {
    double sum = 0.0, sum2 = 0.0;
    std::uint64_t kept = 0;
};

}  // namespace

MCEstimate alpha_mc(const MultiIndex& index, double rho, const Spectrum& spectrum, std::uint64_t n_total,
                    std::uint64_t seed) {
    check_rho(rho);
    const std::size_t v = spectrum.dim();
    if (v == 0 || index.size() != v) throw DomainError("alpha_mc: index length does not match the spectrum");
    if (n_total < 10000) throw DomainError("alpha_mc: n_total must be at least 1e4");
    for (int k : index)
        if (k < 0) throw DomainError("alpha_mc: negative multiplicity");

    const std::size_t pairs = (v + 1) / 2;
    const std::uint64_t key = splitmix(seed);
    const std::uint64_t chunk = 1 << 16;
    const std::size_t nchunks = static_cast<std::size_t>((n_total + chunk - 1) / chunk);
    std::vector<Partial> parts(nchunks);
    std::vector<double> sd(v);
    for (std::size_t j = 0; j < v; ++j) sd[j] = std::sqrt(spectrum[j]);

    parallel_for(nchunks, [&](std::size_t c) {
        Partial p;
        std::vector<double> x(2 * pairs);
        std::uint64_t lo = c * chunk, hi = std::min<std::uint64_t>(n_total, lo + chunk);
        for (std::uint64_t s = lo; s < hi; ++s) {
            std::uint64_t base = s * 2 * pairs;
            for (std::size_t q = 0; q < pairs; ++q) {
                double u1 = unit_open(splitmix(key ^ (base + 2 * q)));
                double u2 = unit_open(splitmix(key ^ (base + 2 * q + 1)));
                double rad = std::sqrt(-2.0 * std::log(u1));
                x[2 * q] = rad * std::cos(2.0 * std::numbers::pi * u2);
                x[2 * q + 1] = rad * std::sin(2.0 * std::numbers::pi * u2);
            }
            double r2 = 0.0;
            for (std::size_t j = 0; j < v; ++j) r2 += spectrum[j] * x[j] * x[j];
            if (r2 >= rho) continue;
            double f = 1.0;
            for (std::size_t j = 0; j < v; ++j)
                for (int k = 0; k < index[j]; ++k) f *= x[j] * x[j];
            p.sum += f;
            p.sum2 += f * f;
            ++p.kept;
        }
        parts[c] = p;
    });

    Partial tot;
    for (const auto& p : parts) {
        tot.sum += p.sum;
        tot.sum2 += p.sum2;
        tot.kept += p.kept;
    }
    if (tot.kept == 0) throw NumericError("alpha_mc: no samples accepted; rho too small for the sample budget");
    const double n = static_cast<double>(n_total);
    MCEstimate e;
    e.mean = tot.sum / n;
    double var = tot.sum2 / n - e.mean * e.mean;
    e.std_error = std::sqrt(std::max(var, 0.0) / (n - 1.0));
    e.n_kept = tot.kept;
    e.n_total = n_total;
    e.seed = seed;
    return e;
}

// --------------------------------------------------------------- identities

namespace {

void next_index(MultiIndex& k, const std::vector<int>& caps) {
    for (std::size_t j = 0; j < k.size(); ++j) {
        if (++k[j] <= caps[j]) return;
        k[j] = 0;
    }
}

std::vector<double> table_values(const std::vector<int>& caps, double rho, const Spectrum& sp) {
    AlphaTable t = alpha_table(caps, rho, sp);
    std::vector<double> out;
    std::size_t total = 1;
    for (int c : caps) total *= static_cast<std::size_t>(c + 1);
    out.reserve(total);
    MultiIndex k(caps.size(), 0);
    for (std::size_t f = 0; f < total; ++f, next_index(k, caps)) out.push_back(t.value(k));
    return out;
}

// x * d/dx of every table entry, central differences with one Richardson step.
template <class G>
std::vector<double> log_derivative(G&& g, double x) {
    const double h = 1e-5 * x;
    auto d = [&](double hh) {
        auto p = g(x + hh), m = g(x - hh);
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = x * (p[i] - m[i]) / (2.0 * hh);
        return p;
    };
    auto d1 = d(h), d2 = d(h / 2);
    for (std::size_t i = 0; i < d1.size(); ++i) d1[i] = (4.0 * d2[i] - d1[i]) / 3.0;
    return d1;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

}  // namespace

Report verify_structural(double rho, const Spectrum& sp, int order_cap) {
    check_rho(rho);
    if (order_cap < 0 || order_cap > 4) throw DomainError("verify_structural: order_cap must be in 0..4");
    const std::size_t v = sp.dim();
    std::vector<int> caps(v, order_cap + 1);
    AlphaTable base = alpha_table(caps, rho, sp);

    auto drho = log_derivative([&](double r) { return table_values(caps, r, sp); }, rho);
    std::vector<std::vector<double>> dlam(v);
    for (std::size_t j = 0; j < v; ++j) {
        dlam[j] = log_derivative(
            [&](double l) {
                auto vals = sp.values();
                vals[j] = l;
                return table_values(caps, rho, Spectrum(vals));
            },
            sp[j]);
    }

    std::size_t total = base.flat(caps) + 1;
    double scaling = 0.0, recursion = 0.0, derlk = 0.0;
    double mono_rho = 1e300, mono_lam = 1e300;
    MultiIndex k(v, 0);
    for (std::size_t f = 0; f < total; ++f, next_index(k, caps)) {
        int n = 0;
        for (int x : k) n += x;
        if (n > order_cap) continue;
        double a = base.value(k);
        std::size_t fi = base.flat(k);
        double s = drho[fi];
        for (std::size_t j = 0; j < v; ++j) s += dlam[j][fi];
        scaling = std::max(scaling, std::fabs(s) / a);

        double rhs = 0.5 * (static_cast<double>(v) + 2.0 * n) * a;
        for (std::size_t j = 0; j < v; ++j) {
            MultiIndex kp = k;
            ++kp[j];
            double up = base.value(kp);
            rhs -= 0.5 * up;
            double dl = 0.5 * (up - (2.0 * k[j] + 1.0) * a);
            derlk = std::max(derlk, std::fabs(dlam[j][fi] - dl) / a);
            mono_lam = std::min(mono_lam, -dlam[j][fi] / a);
        }
        recursion = std::max(recursion, std::fabs(drho[fi] - rhs) / a);
        mono_rho = std::min(mono_rho, drho[fi] / a);
    }

    Report r;
    r.suite = "structural";
    const double tol = 1e-6;
    r.add("scaling", scaling < tol, tol - scaling, "max relative residual " + fmt(scaling));
    r.add("recursion", recursion < tol, tol - recursion, "max relative residual " + fmt(recursion));
    r.add("derlk", derlk < tol, tol - derlk, "max relative residual " + fmt(derlk));
    r.add("increasing_in_rho", mono_rho > 0.0, mono_rho, "min rho d/drho log alpha " + fmt(mono_rho));
    r.add("decreasing_in_lambda", mono_lam > 0.0, mono_lam, "min -lambda d/dlambda log alpha " + fmt(mono_lam));

    // One-index hierarchy and the dominance bound.
    double hier = 1e300, dom = 1e300;
    for (std::size_t j = 0; j < v; ++j) {
        MultiIndex e(v, 0);
        std::vector<double> aj;
        for (int n = 0; n <= order_cap + 1; ++n) {
            e[j] = n;
            aj.push_back(base.value(e));
        }
        for (int n = 1; n <= order_cap + 1; ++n) {
            hier = std::min(hier, ((2.0 * n - 1.0) * aj[n - 1] - aj[n]) / aj[n]);
        }
        for (int kk = 1; kk <= order_cap + 1; ++kk)
            for (int p = 0; p < kk; ++p) {
                double bound = std::pow(rho / sp[j], kk - p) * aj[p];
                dom = std::min(dom, (bound - aj[kk]) / aj[kk]);
            }
    }
    double a0 = base.a();
    r.add("momrecurs", hier >= -1e-12 && a0 <= 1.0, hier, "min relative slack " + fmt(hier));
    r.add("lowdominance", dom >= -1e-12, dom, "min relative slack " + fmt(dom));
    return r;
}

}  // namespace tg
