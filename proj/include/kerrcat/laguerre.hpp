#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace kerrcat {

/// Generalized Laguerre polynomial L_n^k(x) by the three-term recurrence
/// (m+1) L_{m+1} = (2m+1+k-x) L_m - (m+k) L_{m-1}.
inline double laguerre(std::size_t n, std::size_t k, double x) {
    const double kd = static_cast<double>(k);
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = 1.0 + kd - x;
    for (std::size_t m = 1; m < n; ++m) {
        const double md = static_cast<double>(m);
        const double next = ((2.0 * md + 1.0 + kd - x) * cur - (md + kd) * prev) / (md + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Magnitude-carrying part of the displacement matrix element,
/// <m|exp(i eta (a + a^dag))|n> = (i)^{|m-n|} * displacementFactor(min, |m-n|, eta).
///
/// displacementFactor(n, k, eta) = exp(-eta^2/2) eta^k sqrt(n!/(n+k)!) L_n^k(eta^2).
inline double displacementFactor(std::size_t n, std::size_t k, double eta) {
    const double x = eta * eta;
    double logPrefactor = -0.5 * x;
    if (k > 0) {
        logPrefactor += static_cast<double>(k) * std::log(std::abs(eta));
        logPrefactor += 0.5 * (std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(n + k) + 1.0));
    }
    const double sign = (k % 2 == 1 && eta < 0.0) ? -1.0 : 1.0;
    return sign * std::exp(logPrefactor) * laguerre(n, k, x);
}

}  // namespace kerrcat
