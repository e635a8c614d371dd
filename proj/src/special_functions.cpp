#include "tg/special_functions.hpp"

#include "tg/errors.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

namespace tg {

namespace {

constexpr int kTableMax = 64;
constexpr int kSeriesCap = 500;
constexpr int kFractionCap = 300;

using Table = std::vector<std::vector<BigInt>>;

Table build_stirling2(int n) {
    Table s(n + 1, std::vector<BigInt>(n + 1, 0));
    s[0][0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= i; ++j) s[i][j] = BigInt(j) * s[i - 1][j] + s[i - 1][j - 1];
    return s;
}

Table build_stirling1(int n) {
    Table s(n + 1, std::vector<BigInt>(n + 1, 0));
    s[0][0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= i; ++j) s[i][j] = BigInt(i - 1) * s[i - 1][j] + s[i - 1][j - 1];
    return s;
}

const Table& stirling2_table() {
    static const Table t = build_stirling2(kTableMax);
    return t;
}

const Table& stirling1_table() {
    static const Table t = build_stirling1(kTableMax);
    return t;
}

std::string diag(const char* what, double s, double x, int iters) {
    std::ostringstream os;
    os << what << " s=" << s << " x=" << x << " iterations=" << iters;
    return os.str();
}

// Sum_{n>=0} x^n / ((s+1)...(s+n)); P = x^s e^-x / Gamma(s+1) * sum.
double p_series(double s, double x) {
    double term = 1.0, sum = 1.0;
    for (int n = 1; n <= kSeriesCap; ++n) {
        term *= x / (s + n);
        sum += term;
        if (term < sum * 1e-17) return std::exp(s * std::log(x) - x - std::lgamma(s + 1.0)) * sum;
    }
    throw NumericError("incomplete gamma series did not converge", diag("series", s, x, kSeriesCap));
}

// Modified Lentz evaluation of Q(s,x).
double q_fraction(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kFractionCap; ++i) {
        double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15) return std::exp(s * std::log(x) - x - std::lgamma(s)) * h;
    }
    throw NumericError("incomplete gamma continued fraction did not converge",
                       diag("fraction", s, x, kFractionCap));
}

void check_gamma_args(double s, double x) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("incomplete gamma: s must be positive");
    if (!(x >= 0.0) || std::isnan(x)) throw DomainError("incomplete gamma: x must be nonnegative");
}

}  // namespace

BigInt double_factorial(int n) {
    if (n < -1) throw DomainError("double_factorial: n < -1");
    BigInt r = 1;
    for (int k = n; k > 1; k -= 2) r *= k;
    return r;
}

BigInt factorial(int n) {
    if (n < 0) throw DomainError("factorial: negative argument");
    BigInt r = 1;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

BigInt binomial(int n, int k) {
    if (n < 0) throw DomainError("binomial: negative n");
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

BigInt multinomial(const std::vector<int>& parts) {
    BigInt r = 1;
    int total = 0;
    for (int p : parts) {
        if (p < 0) throw DomainError("multinomial: negative part");
        total += p;
        r *= binomial(total, p);
    }
    return r;
}

BigInt stirling_second(int k, int t) {
    if (k < 0 || t < 0) throw DomainError("stirling_second: negative argument");
    if (t > k) return 0;
    if (k <= kTableMax) return stirling2_table()[k][t];
    return build_stirling2(k)[k][t];
}

BigInt stirling_first_unsigned(int k, int j) {
    if (k < 0 || j < 0) throw DomainError("stirling_first_unsigned: negative argument");
    if (j > k) return 0;
    if (k <= kTableMax) return stirling1_table()[k][j];
    return build_stirling1(k)[k][j];
}

double raising_factorial(double x, int n) {
    if (n < 0) throw DomainError("raising_factorial: negative n");
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x + i;
    return r;
}

Rational raising_factorial(const Rational& x, int n) {
    if (n < 0) throw DomainError("raising_factorial: negative n");
    Rational r = 1;
    for (int i = 0; i < n; ++i) r *= x + i;
    return r;
}

double regularized_gamma_p(double s, double x) {
    check_gamma_args(s, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < s + 12.0) return p_series(s, x);
    return 1.0 - q_fraction(s, x);
}

double lower_incomplete_gamma(double s, double x) {
    check_gamma_args(s, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return std::tgamma(s);
    if (x < s + 12.0) {
        // gamma(s,x) = x^s e^-x / s * M(1, 1+s, x)
        return std::exp(s * std::log(x) - x) / s * kummer_M(1.0, 1.0 + s, x);
    }
    return std::exp(std::lgamma(s)) * (1.0 - q_fraction(s, x));
}

std::vector<double> regularized_gamma_p_ladder(double s, double x, int count) {
    check_gamma_args(s, x);
    std::vector<double> out(count, 0.0);
    if (count <= 0 || x == 0.0) return out;
    if (std::isinf(x)) {
        std::fill(out.begin(), out.end(), 1.0);
        return out;
    }
    // P(a) = P(a+1) + x^a e^-x / Gamma(a+1): all terms positive, so descend.
    double top = s + (count - 1);
    out[count - 1] = regularized_gamma_p(top, x);
    double lx = std::log(x);
    for (int i = count - 2; i >= 0; --i) {
        double a = s + i;
        out[i] = out[i + 1] + std::exp(a * lx - x - std::lgamma(a + 1.0));
    }
    for (double& p : out)
        if (p > 1.0) p = 1.0;
    return out;
}

double kummer_M(double a, double b, double x) {
    if (b <= 0.0 && std::floor(b) == b) throw DomainError("kummer_M: b is a nonpositive integer");
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("kummer_M: x must be finite and nonnegative");
    double term = 1.0, sum = 1.0;
    for (int n = 0; n < kSeriesCap; ++n) {
        term *= (a + n) / (b + n) * x / (n + 1);
        sum += term;
        if (std::fabs(term) <= 1e-16 * std::fabs(sum) && (b + n) > x) return sum;
        if (term == 0.0) return sum;
    }
    throw NumericError("kummer_M series did not converge", diag("kummer", a, x, kSeriesCap));
}

double to_double(const BigInt& v) { return v.convert_to<double>(); }
double to_double(const Rational& v) { return v.convert_to<double>(); }

}  // namespace tg
