#include "qcomp/bessel.hpp"

#include <cmath>
#include <numbers>

#include "qcomp/errors.hpp"

namespace qcomp {

namespace {

constexpr double kSeriesLimit = 15.0;

// sum_{k>=1} (x^2/4)^k / (k!)^2
double series_tail(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (double(k) * double(k));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// I0(x) sqrt(2 pi x) e^{-x} = sum_k ((2k-1)!!)^2 / (k! 8^k x^k), summed until
// the terms stop decreasing.
double asymptotic_factor(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

void check_argument(double x) {
  detail::require(x >= 0.0 && !std::isnan(x),
                  "Bessel I0 argument must be nonnegative");
}

}  // namespace

double bessel_i0(double x) {
  check_argument(x);
  if (x < kSeriesLimit) return 1.0 + series_tail(x);
  return std::exp(x) / std::sqrt(2.0 * std::numbers::pi * x) *
         asymptotic_factor(x);
}

double bessel_i0m1(double x) {
  check_argument(x);
  if (x < kSeriesLimit) return series_tail(x);
  return bessel_i0(x) - 1.0;
}

double log_bessel_i0(double x) {
  check_argument(x);
  if (x < kSeriesLimit) return std::log1p(series_tail(x));
  return x - 0.5 * std::log(2.0 * std::numbers::pi * x) +
         std::log(asymptotic_factor(x));
}

}  // namespace qcomp
