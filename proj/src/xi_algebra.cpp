#include "tg/xi_algebra.hpp"

#include "tg/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace tg {

namespace {

std::string tail_str(const std::vector<int>& e) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
    os << ")";
    return os.str();
}

// (2j-1)!!/j!
Rational dfq(int j) { return Rational(double_factorial(2 * j - 1)) / Rational(factorial(j)); }

Rational weight(const ExponentTail& tail) {
    Rational w = 1;
    for (std::size_t j = 0; j < tail.size(); ++j)
        for (int r = 0; r < tail[j]; ++r) w *= dfq(static_cast<int>(j) + 1);
    return w;
}

int total(const std::vector<int>& e) { return std::accumulate(e.begin(), e.end(), 0); }

Rational sign_of(int s) { return (s % 2) ? Rational(-1) : Rational(1); }

std::vector<int> full(int e0, const ExponentTail& tail) {
    std::vector<int> e{e0};
    e.insert(e.end(), tail.begin(), tail.end());
    return e;
}

std::vector<int> pad(std::vector<int> e, std::size_t n) {
    e.resize(n, 0);
    return e;
}

// Calls f(c) for every c <= e componentwise.
template <class F>
void for_each_below(const std::vector<int>& e, F&& f) {
    std::vector<int> c(e.size(), 0);
    while (true) {
        f(c);
        std::size_t i = 0;
        while (i < c.size() && c[i] == e[i]) c[i++] = 0;
        if (i == c.size()) return;
        ++c[i];
    }
}

void check_tail(int q, const ExponentTail& tail) {
    if (q < 0) throw DomainError("negative order");
    if (static_cast<int>(tail.size()) > 12) throw DomainError("tail longer than 12");
    for (int x : tail)
        if (x < 0) throw DomainError("negative exponent");
}

}  // namespace

int power_count(const ExponentTail& tail) {
    int s = 0;
    for (std::size_t k = 0; k < tail.size(); ++k) s += static_cast<int>(k + 1) * tail[k];
    return s;
}

std::vector<ExponentTail> enumerate_exponents(int q, int m) {
    if (q < 0 || q > 12 || m < 0) throw DomainError("enumerate_exponents: need 0 <= m and 0 <= q <= 12");
    std::vector<ExponentTail> out;
    ExponentTail e(q, 0);
    auto rec = [&](auto&& self, int k, int left) -> void {
        if (k > q) {
            if (left == 0) out.push_back(e);
            return;
        }
        for (int x = 0; x * k <= left; ++x) {
            e[k - 1] = x;
            self(self, k + 1, left - x * k);
        }
        e[k - 1] = 0;
    };
    if (q == 0) {
        if (m == 0) out.push_back(e);
        return out;
    }
    rec(rec, 1, m);
    std::sort(out.begin(), out.end());
    return out;
}

XiMap xi_sum(const XiMap& f, const XiMap& g) {
    XiMap r = f;
    for (const auto& [k, v] : g) r[k] += v;
    return r;
}

XiMap xi_product(const XiMap& f, const XiMap& g, int q_max) {
    XiMap r;
    for (const auto& [kf, vf] : f)
        for (const auto& [kg, vg] : g) {
            const int q = kf.q + kg.q;
            if (q > q_max) continue;
            std::vector<int> e = pad(kf.e, q + 1);
            for (std::size_t i = 0; i < kg.e.size(); ++i) e[i] += kg.e[i];
            r[{q, e}] += vf * vg;
        }
    for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
    return r;
}

Rational xi_product(const XiMap& f, const XiMap& g, int q, const std::vector<int>& e) {
    XiMap p = xi_product(f, g, q);
    auto it = p.find({q, pad(e, q + 1)});
    return it == p.end() ? Rational(0) : it->second;
}

XiMap sum_over_e0(const XiMap& f) {
    XiMap r;
    for (const auto& [k, v] : f) {
        XiKey key = k;
        key.e[0] = 0;
        r[key] += v;
    }
    for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
    return r;
}

Rational xi_alpha_nk_limit(int q, const std::vector<int>& e, int k) {
    if (q < 0 || k < 0) throw DomainError("xi_alpha_nk_limit: negative order");
    std::vector<int> want(q + 1, 0);
    want[q] = 1;
    if (pad(e, q + 1) != want || static_cast<int>(e.size()) > q + 1) return 0;
    return Rational(double_factorial(2 * (k + q) - 1)) / Rational(factorial(q));
}

XiMap xi_alpha_nk_map(int k, int q_max) {
    XiMap m;
    for (int q = 0; q <= q_max; ++q) {
        std::vector<int> e(q + 1, 0);
        e[q] = 1;
        m[{q, e}] = xi_alpha_nk_limit(q, e, k);
    }
    return m;
}

XiMap xi_alpha_inverse_map(int q_max) {
    XiMap m;
    for (int q = 0; q <= q_max; ++q)
        for (const auto& t : enumerate_exponents(q, q))
            m[{q, full(0, t)}] = sign_of(total(t)) * Rational(multinomial(t)) * weight(t);
    return m;
}

XiMap xi_dn_limit_map(int q_max) {
    XiMap m;
    for (int q = 1; q <= q_max; ++q)
        for (int l = 0; l <= q; ++l) {
            const int mm = q - l;
            if (mm >= l) continue;
            std::vector<int> e(q + 1, 0);
            e[l] = 1;
            e[mm] = 1;
            m[{q, e}] = Rational(4 * (l - mm) * (l - mm)) * dfq(l) * dfq(mm);
        }
    return m;
}

XiMap xi_dd_limit_map(int q_max) {
    XiMap m;
    for (int q = 0; q <= q_max; ++q)
        for (const auto& t : enumerate_exponents(q, q))
            m[{q, full(0, t)}] = sign_of(total(t)) * weight(t) * Rational(psi(q, t));
    return m;
}

BigInt psi(int p, const ExponentTail& tail) {
    check_tail(p, tail);
    if (power_count(tail) != p) return 0;
    BigInt s = 0;
    for_each_below(tail, [&](const std::vector<int>& c) {
        std::vector<int> d(tail.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = tail[i] - c[i];
        s += multinomial(c) * multinomial(d);
    });
    return s;
}

BigInt psi_alternative(int p, const ExponentTail& tail) {
    check_tail(p, tail);
    if (power_count(tail) != p) return 0;
    const int q = static_cast<int>(tail.size());
    BigInt s = 0;
    for (int n = 0; n <= p; ++n)
        for (const auto& c : enumerate_exponents(q, n)) {
            bool below = true;
            std::vector<int> d(q);
            for (int i = 0; i < q; ++i) {
                d[i] = tail[i] - c[i];
                if (d[i] < 0) below = false;
            }
            if (below) s += multinomial(c) * multinomial(d);
        }
    return s;
}

BigInt omega(int which, int q, const ExponentTail& tail_in) {
    check_tail(q, tail_in);
    if (which != 0 && which != 1) throw DomainError("omega: which must be 0 or 1");
    ExponentTail tail = pad(tail_in, q);
    if (static_cast<int>(tail_in.size()) > q) throw DomainError("omega: tail longer than q");
    if (power_count(tail) != q) throw DomainError("omega: power count of the tail differs from q");
    BigInt s = 0;
    if (which == 1) {
        for (int l = 1; l <= q; ++l) {
            if (tail[l - 1] < 1) continue;
            ExponentTail t = tail;
            --t[l - 1];
            s += BigInt(l * l) * psi(q - l, t);
        }
        return s;
    }
    for (int l = 1; l <= q; ++l)
        for (int r = 1; r < l; ++r) {
            const int sidx = l - r;
            if (sidx < 1 || sidx >= r) continue;
            if (tail[sidx - 1] < 1 || tail[r - 1] < 1) continue;
            ExponentTail t = tail;
            --t[sidx - 1];
            --t[r - 1];
            s += BigInt((r - sidx) * (r - sidx)) * psi(q - l, t);
        }
    return s;
}

Rational delta_limit_coefficient(int q, const ExponentTail& tail) {
    if (q > 8) throw DomainError("delta_limit_coefficient: q must be at most 8");
    const ExponentTail t = pad(tail, q);
    const BigInt o0 = omega(0, q, t), o1 = omega(1, q, t);
    return Rational(4) * sign_of(total(t)) * weight(t) * Rational(o0 - o1);
}

Report omega_inequality_scan(int q_max) {
    if (q_max < 1 || q_max > 8) throw DomainError("omega_inequality_scan: q_max must be in 1..8");
    Report rep;
    rep.suite = "omega";
    for (int q = 1; q <= q_max; ++q) {
        const std::string tag = "[q=" + std::to_string(q) + "]";
        int n_tails = 0, bad_omega = 0, bad_sign = 0;
        double worst_gap = 1e300;
        std::string first_bad;
        for (const auto& t : enumerate_exponents(q, q)) {
            ++n_tails;
            const BigInt o0 = omega(0, q, t), o1 = omega(1, q, t);
            worst_gap = std::min(worst_gap, to_double(BigInt(o1 - o0)));
            if (!(o0 < o1)) {
                ++bad_omega;
                if (first_bad.empty()) first_bad = tail_str(t);
            }
            const Rational lim = delta_limit_coefficient(q, t);
            const int want = ((total(t) - 1) % 2 == 0) ? 1 : -1;
            if (!((want > 0 && lim > 0) || (want < 0 && lim < 0))) ++bad_sign;
        }
        rep.add("omega0_below_omega1" + tag, bad_omega == 0, worst_gap,
                std::to_string(n_tails) + " tails" + (first_bad.empty() ? "" : ", first failure " + first_bad));
        rep.add("sign_law" + tag, bad_sign == 0, bad_sign == 0 ? 0.0 : -static_cast<double>(bad_sign),
                std::to_string(bad_sign) + " sign mismatches");

        // Pointwise weights: strict once sum c >= 2, equality (0 = 0) when sum c = 1.
        int strict_fail = 0, weak_fail = 0, n_c = 0;
        for (int tt = 1; tt <= q; ++tt)
            for (const auto& c : enumerate_exponents(q, tt)) {
                ++n_c;
                long long lhs = 0, rhs = 0;
                const int sc = total(c);
                for (int l = 1; l <= q; ++l) {
                    rhs += static_cast<long long>(l) * l * c[l - 1] * (sc - 1);
                    for (int r = 1; r < l; ++r) {
                        const int s = l - r;
                        if (s < 1 || s >= r) continue;
                        lhs += static_cast<long long>(r - s) * (r - s) * c[s - 1] * c[r - 1];
                    }
                }
                if (sc >= 2 && !(lhs < rhs)) ++strict_fail;
                if (sc == 1 && lhs != rhs) ++weak_fail;
            }
        rep.add("pointwise_weights" + tag, strict_fail == 0 && weak_fail == 0,
                -static_cast<double>(strict_fail + weak_fail),
                std::to_string(n_c) + " vectors; strict for sum c >= 2, equality for sum c = 1");
    }
    return rep;
}

Report xi_dn_dd_convolution_check(int q_max) {
    if (q_max < 1 || q_max > 6) throw DomainError("xi_dn_dd_convolution_check: q_max must be in 1..6");
    Report rep;
    rep.suite = "xi_convolution";
    const XiMap a0 = xi_alpha_nk_map(0, q_max), a1 = xi_alpha_nk_map(1, q_max), a2 = xi_alpha_nk_map(2, q_max);
    const XiMap ainv = xi_alpha_inverse_map(q_max);

    XiMap neg;
    for (const auto& [k, v] : xi_product(a1, a1, q_max)) neg[k] -= v;
    for (const auto& [k, v] : xi_product(a1, a0, q_max)) neg[k] -= 2 * v;
    XiMap dn_alpha = xi_sum(xi_product(a2, a0, q_max), neg);
    for (auto it = dn_alpha.begin(); it != dn_alpha.end();) it = it->second == 0 ? dn_alpha.erase(it) : std::next(it);
    const XiMap dn_closed = xi_dn_limit_map(q_max);
    // Order 0 of the numerator is 3 - 1 - 2 = 0, so both maps start at q = 1.
    rep.add("dn_alpha_route_matches_closed_form", dn_alpha == dn_closed, dn_alpha == dn_closed ? 0.0 : -1.0,
            std::to_string(dn_closed.size()) + " nonzero coefficients");

    const XiMap dd_alpha = xi_product(ainv, ainv, q_max);
    const XiMap dd_closed = xi_dd_limit_map(q_max);
    rep.add("dd_alpha_route_matches_closed_form", dd_alpha == dd_closed, dd_alpha == dd_closed ? 0.0 : -1.0);
    bool e0_zero = true;
    for (const auto& [k, v] : dd_alpha)
        if (k.e[0] != 0 && v != 0) e0_zero = false;
    rep.add("dd_vanishes_unless_e0_zero", e0_zero, e0_zero ? 0.0 : -1.0);

    const XiMap ident = sum_over_e0(xi_product(ainv, a0, q_max));
    bool id_ok = ident.size() == 1 && ident.begin()->first == XiKey{0, {0}} && ident.begin()->second == 1;
    rep.add("alpha_inverse_times_alpha_is_identity", id_ok, id_ok ? 0.0 : -1.0);

    const XiMap delta_closed = sum_over_e0(xi_product(dn_closed, dd_closed, q_max));
    const XiMap delta_alpha = sum_over_e0(xi_product(dn_alpha, dd_alpha, q_max));
    for (int q = 1; q <= q_max; ++q) {
        int mism = 0, n = 0;
        std::string first;
        for (const auto& t : enumerate_exponents(q, q)) {
            ++n;
            const XiKey key{q, full(0, t)};
            const Rational th = delta_limit_coefficient(q, t);
            auto get = [&](const XiMap& m) {
                auto it = m.find(key);
                return it == m.end() ? Rational(0) : it->second;
            };
            if (get(delta_closed) != th || get(delta_alpha) != th) {
                ++mism;
                if (first.empty()) first = tail_str(t);
            }
        }
        rep.add("delta_routes_agree[q=" + std::to_string(q) + "]", mism == 0, -static_cast<double>(mism),
                std::to_string(n) + " tails" + (first.empty() ? "" : ", first mismatch " + first));
    }
    return rep;
}

}  // namespace tg
