#pragma once

// Closed-form resummation of the unsplit-line power series, used as an
// independent check of the propagation kernel.

#include "nfs/jones.hpp"

namespace nfs {

/// Bessel J1 from its ascending power series, summed in extended precision.
double bessel_j1_series(double x);

/// First positive zero of J1, located on the series by bracketing and bisection.
double bessel_j1_first_zero();

/// Scattered amplitude behind an unsplit target for a unit delta pulse:
///   -sqrt(xi_eff/tau) J1(2 sqrt(xi_eff tau)) exp(-tau/2),
/// with xi_eff = xi * f_lm. Tends to -xi_eff exp(-tau/2) as tau -> 0.
double single_line_oracle(double xi_eff, double tau);

}  // namespace nfs
