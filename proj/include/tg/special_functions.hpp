#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace tg {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// n!! with (-1)!! = 0!! = 1.
BigInt double_factorial(int n);
BigInt factorial(int n);
BigInt binomial(int n, int k);
// (sum parts)! / prod(parts!)
BigInt multinomial(const std::vector<int>& parts);

BigInt stirling_second(int k, int t);
BigInt stirling_first_unsigned(int k, int j);

double raising_factorial(double x, int n);
Rational raising_factorial(const Rational& x, int n);

double lower_incomplete_gamma(double s, double x);
// P(s,x) = gamma(s,x)/Gamma(s)
double regularized_gamma_p(double s, double x);
// Regularized P for s, s+1, ..., s+count-1 at one x. Returns count values.
std::vector<double> regularized_gamma_p_ladder(double s, double x, int count);

double kummer_M(double a, double b, double x);

double to_double(const BigInt& v);
double to_double(const Rational& v);

}  // namespace tg
