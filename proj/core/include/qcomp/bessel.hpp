#pragma once

namespace qcomp {

/// Modified Bessel function of the first kind, order 0, for x >= 0.
/// Power series below x = 15, Hankel asymptotic expansion above.
double bessel_i0(double x);

/// log I0(x); finite for all x >= 0 (no overflow for large x).
double log_bessel_i0(double x);

/// I0(x) - 1 without cancellation for small x.
double bessel_i0m1(double x);

}  // namespace qcomp
