#include "nfs/oracle.hpp"

#include <cmath>

namespace nfs {

double bessel_j1_series(double x) {
    // J1(x) = sum_k (-1)^k (x/2)^(2k+1) / (k! (k+1)!)
    const long double half = 0.5L * static_cast<long double>(x);
    const long double q = -half * half;
    long double term = half;
    long double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<long double>(k) * static_cast<long double>(k + 1));
        sum += term;
        const bool past_peak = static_cast<long double>(k) > std::fabs(half) + 2.0L;
        if (past_peak && std::fabs(term) <= 1e-22L * std::fabs(sum)) break;
    }
    return static_cast<double>(sum);
}

double bessel_j1_first_zero() {
    double lo = 3.0, hi = 4.5;  // J1(3) > 0 > J1(4.5)
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (bessel_j1_series(mid) > 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double single_line_oracle(double xi_eff, double tau) {
    if (!(xi_eff >= 0.0)) throw ConfigError("oracle thickness must be >= 0");
    if (!(tau >= 0.0)) throw ConfigError("oracle time must be >= 0");
    const double envelope = std::exp(-0.5 * tau);
    if (tau == 0.0 || xi_eff == 0.0) return -xi_eff * envelope;
    const double z = std::sqrt(xi_eff * tau);
    return -std::sqrt(xi_eff / tau) * bessel_j1_series(2.0 * z) * envelope;
}

}  // namespace nfs
