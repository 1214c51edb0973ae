/**
 * @file
 * @brief Kerr-medium evolution of coherent states, quadrature variances and
 *        fractional-revival decomposition into coherent-state superpositions.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kerrcat/fock.hpp"

namespace kerrcat {

/// Initial coherent amplitude and dimensionless evolution parameter tau.
struct KerrParams {
    Complex alpha{};
    double tau = 0.0;
};

/// tau expressed as an exact multiple of pi, tau = (num/den) * pi.
struct PiFraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double value() const { return pi * static_cast<double>(num) / static_cast<double>(den); }
};

/// tau = 2 pi pNum / q in lowest terms with q > 0.
struct RevivalFraction {
    std::int64_t pNum = 0;
    std::int64_t q = 1;

    double tau() const { return 2.0 * pi * static_cast<double>(pNum) / static_cast<double>(q); }
};

inline RevivalFraction toRevivalFraction(PiFraction f) {
    if (f.den == 0) {
        throw std::invalid_argument("PiFraction: zero denominator");
    }
    std::int64_t p = f.num;
    std::int64_t q = 2 * f.den;
    if (q < 0) {
        p = -p;
        q = -q;
    }
    const std::int64_t g = std::gcd(p < 0 ? -p : p, q);
    return {p / g, q / g};
}

struct SuperpositionTerm {
    Complex coefficient{};
    double angle = 0.0;  ///< radians in [0, 2pi)
};

/// sum_j d_j |alphaMagnitude * exp(i theta_j)>.
struct CoherentSuperposition {
    double alphaMagnitude = 0.0;
    std::vector<SuperpositionTerm> terms;
};

struct Reconstruction {
    StateVector state;
    double rawNorm = 0.0;  ///< norm before renormalization
};

namespace detail {

inline void requireFiniteParams(const KerrParams& p) {
    if (!isFinite(p.alpha) || !std::isfinite(p.tau)) {
        throw std::invalid_argument("Kerr parameters must be finite");
    }
}

inline double wrapAngle(double a) {
    double r = std::fmod(a, 2.0 * pi);
    if (r < 0.0) r += 2.0 * pi;
    if (r >= 2.0 * pi) r = 0.0;
    return r;
}

/// exp(i pi pNum n(n-1) / q) with the exponent reduced in integers.
inline Complex exactRevivalPhase(std::int64_t n, RevivalFraction f) {
    const std::int64_t tri = (n * (n - 1) / 2) % f.q;
    std::int64_t r = (((f.pNum % f.q) * tri) % f.q + f.q) % f.q;
    const double angle = 2.0 * pi * static_cast<double>(r) / static_cast<double>(f.q);
    return std::polar(1.0, angle);
}

}  // namespace detail

/// Kerr state exp(-iHt)|alpha> on dim levels: amplitudes of coherent(alpha, dim)
/// multiplied by exp(i tau/2 n(n-1)).
inline StateVector kerrEvolve(const KerrParams& p, std::size_t dim) {
    detail::requireFiniteParams(p);
    const StateVector base = coherent(p.alpha, dim);
    if (p.tau == 0.0) return base;
    std::vector<Complex> amps(base.amps().begin(), base.amps().end());
    for (std::size_t n = 2; n < dim; ++n) {
        const double nd = static_cast<double>(n);
        amps[n] *= std::polar(1.0, 0.5 * p.tau * nd * (nd - 1.0));
    }
    return StateVector(std::move(amps));
}

/// Same as kerrEvolve for tau = 2 pi pNum / q, with phases reduced exactly.
inline StateVector kerrEvolveExact(Complex alpha, RevivalFraction f, std::size_t dim) {
    if (f.q <= 0) {
        throw std::invalid_argument("kerrEvolveExact: q must be positive");
    }
    const StateVector base = coherent(alpha, dim);
    std::vector<Complex> amps(base.amps().begin(), base.amps().end());
    for (std::size_t n = 2; n < dim; ++n) {
        amps[n] *= detail::exactRevivalPhase(static_cast<std::int64_t>(n), f);
    }
    return StateVector(std::move(amps));
}

/// Closed-form quadrature variances of the Kerr state for real alpha:
///
///   var X1,2 = 1 + 2a^2 (1 - e^{2a^2(cos tau - 1)}
///                        +- Re{ e^{i tau + a^2(e^{2i tau} - 1)} - e^{2a^2(e^{i tau} - 1)} })
///
/// The printed exponents are read as (e^{2i tau} - 1) and (e^{i tau} - 1).
inline std::pair<double, double> quadratureVariancesClosedForm(const KerrParams& p) {
    detail::requireFiniteParams(p);
    if (p.alpha.imag() != 0.0) {
        throw std::invalid_argument("quadratureVariancesClosedForm: alpha must be real");
    }
    const double a2 = p.alpha.real() * p.alpha.real();
    const Complex i{0.0, 1.0};
    const double decay = std::exp(2.0 * a2 * (std::cos(p.tau) - 1.0));
    const Complex second = std::exp(i * p.tau + a2 * (std::exp(2.0 * i * p.tau) - 1.0));
    const Complex firstSquared = std::exp(2.0 * a2 * (std::exp(i * p.tau) - 1.0));
    const double re = (second - firstSquared).real();
    return {1.0 + 2.0 * a2 * (1.0 - decay + re), 1.0 + 2.0 * a2 * (1.0 - decay - re)};
}

/// Sum_j d_j coherent(|alpha| e^{i theta_j}), normalized; rawNorm is the norm before that.
inline Reconstruction reconstructSuperposition(const CoherentSuperposition& s, std::size_t dim) {
    if (s.terms.empty()) {
        throw std::invalid_argument("reconstructSuperposition: empty term list");
    }
    std::vector<Complex> amps(dim, Complex{});
    for (const auto& t : s.terms) {
        // Unnormalized coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!) so the
        // coefficients keep their physical meaning.
        Complex c = std::exp(-0.5 * s.alphaMagnitude * s.alphaMagnitude);
        const Complex a = std::polar(s.alphaMagnitude, t.angle);
        for (std::size_t n = 0; n < dim; ++n) {
            if (n > 0) c *= a / std::sqrt(static_cast<double>(n));
            amps[n] += t.coefficient * c;
        }
    }
    StateVector raw(std::move(amps));
    const double rawNorm = raw.norm();
    return {raw.normalized(), rawNorm};
}

/// Decompose the Kerr state at tau = 2 pi pNum / q into a finite sum of coherent
/// states of magnitude |alpha|.
///
/// The Kerr phase f(n) = exp(i pi pNum n(n-1)/q) is fitted on n = 0..4q-1 by
/// sum_j d_j exp(i n theta_j) with theta_j = theta0 + 2 pi j / N. Candidates are
/// tried in the order (N=q, theta0=0), (q, pi/q), (2q, 0), (2q, pi/2q); the first
/// with relative residual below 1e-9 wins.
inline CoherentSuperposition revivalDecompose(Complex alpha, std::int64_t pNum, std::int64_t q) {
    if (q <= 0) {
        throw std::invalid_argument("revivalDecompose: q must be positive");
    }
    if (std::gcd(pNum < 0 ? -pNum : pNum, q) != 1) {
        throw std::invalid_argument("revivalDecompose: pNum=" + std::to_string(pNum) + " and q=" + std::to_string(q) + " are not coprime");
    }
    if (!isFinite(alpha)) {
        throw std::invalid_argument("revivalDecompose: non-finite alpha");
    }
    const RevivalFraction frac{pNum, q};
    const auto samples = static_cast<Eigen::Index>(4 * q);
    Eigen::VectorXcd target(samples);
    for (Eigen::Index n = 0; n < samples; ++n) {
        target(n) = detail::exactRevivalPhase(n, frac);
    }

    constexpr double residualTol = 1e-9;
    const std::int64_t sizes[] = {q, 2 * q};
    for (const std::int64_t N : sizes) {
        for (int offsetIndex = 0; offsetIndex < 2; ++offsetIndex) {
            // theta_j = (2j + offsetIndex) pi / N
            Eigen::MatrixXcd basis(samples, static_cast<Eigen::Index>(N));
            std::vector<std::int64_t> angleUnits(static_cast<std::size_t>(N));
            for (std::int64_t j = 0; j < N; ++j) {
                angleUnits[static_cast<std::size_t>(j)] = 2 * j + offsetIndex;
                for (Eigen::Index n = 0; n < samples; ++n) {
                    const std::int64_t units = (n * (2 * j + offsetIndex)) % (2 * N);
                    basis(n, j) = std::polar(1.0, pi * static_cast<double>(units) / static_cast<double>(N));
                }
            }
            const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(basis);
            if (qr.rank() < basis.cols()) {
                throw std::runtime_error("revivalDecompose: singular projection system for N=" + std::to_string(N));
            }
            const Eigen::VectorXcd d = qr.solve(target);
            const double residual = (basis * d - target).norm() / target.norm();
            if (residual >= residualTol) continue;

            CoherentSuperposition out;
            out.alphaMagnitude = std::abs(alpha);
            const double alphaPhase = std::arg(alpha);
            for (std::int64_t j = 0; j < N; ++j) {
                const Complex dj = d(static_cast<Eigen::Index>(j));
                if (std::abs(dj) < 1e-10) continue;
                const double theta = pi * static_cast<double>(angleUnits[static_cast<std::size_t>(j)]) / static_cast<double>(N);
                out.terms.push_back({dj, detail::wrapAngle(theta + alphaPhase)});
            }
            std::sort(out.terms.begin(), out.terms.end(), [](const auto& a, const auto& b) { return a.angle < b.angle; });
            return out;
        }
    }
    throw std::runtime_error("revivalDecompose: no candidate angle set reproduces the Kerr phases");
}

}  // namespace kerrcat
