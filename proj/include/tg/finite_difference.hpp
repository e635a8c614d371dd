#pragma once

#include "tg/errors.hpp"

#include <cmath>

namespace tg {

// Central difference of order k (1..4) with step h.
template <class F>
double central_difference(F&& f, double x, double h, int k) {
    switch (k) {
        case 1: return (f(x + h) - f(x - h)) / (2.0 * h);
        case 2: return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        case 3: return (f(x + 2 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2 * h)) / (2.0 * h * h * h);
        case 4:
            return (f(x + 2 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2 * h)) /
                   (h * h * h * h);
        default: throw DomainError("central_difference: order must be 1..4");
    }
}

// `levels` Richardson steps on the h^2 error expansion; levels = 1 is (4D(h/2) - D(h))/3.
template <class F>
double richardson_derivative(F&& f, double x, double h, int k, int levels = 1) {
    if (!(h > 0.0) || x - 2 * h == x) throw NumericError("finite difference step underflow");
    double t[8][8];
    if (levels > 6) levels = 6;
    for (int i = 0; i <= levels; ++i) {
        t[i][0] = central_difference(f, x, h / std::ldexp(1.0, i), k);
        double fac = 4.0;
        for (int j = 1; j <= i; ++j) {
            t[i][j] = (fac * t[i][j - 1] - t[i - 1][j - 1]) / (fac - 1.0);
            fac *= 4.0;
        }
    }
    return t[levels][levels];
}

}  // namespace tg
