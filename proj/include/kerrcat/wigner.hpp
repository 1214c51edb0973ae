/**
 * @file
 * @brief Wigner function evaluation on points and rectangular grids.
 *
 * Convention: W(gamma) = (2/pi) Tr[rho D(gamma) P D(gamma)^dag] with P the parity
 * operator, so a coherent state |alpha> peaks at gamma = alpha with height 2/pi
 * and the integral over d(Re gamma) d(Im gamma) is 1.
 */

#pragma once

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "kerrcat/fock.hpp"
#include "kerrcat/kerr.hpp"

namespace kerrcat {

struct PhaseSpacePoint {
    double gammaRe = 0.0;
    double gammaIm = 0.0;

    Complex gamma() const { return {gammaRe, gammaIm}; }
};

struct Window {
    double xMin = -1.0;
    double xMax = 1.0;
    double yMin = -1.0;
    double yMax = 1.0;
};

/// [-(|alpha| + 3.5), |alpha| + 3.5] on both axes.
inline Window defaultWindow(Complex alpha) {
    const double h = std::abs(alpha) + 3.5;
    return {-h, h, -h, h};
}

enum class WignerMethod { KerrSeries, FockParity };

inline const char* toString(WignerMethod m) {
    return m == WignerMethod::KerrSeries ? "KerrSeries" : "FockParity";
}

/// Samples on an inclusive nx-by-ny lattice; values are row-major with rows
/// ordered by increasing gammaIm and columns by increasing gammaRe.
struct WignerGrid {
    Window window;
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<double> values;
    WignerMethod method = WignerMethod::FockParity;

    double x(std::size_t i) const { return window.xMin + static_cast<double>(i) * dx(); }
    double y(std::size_t j) const { return window.yMin + static_cast<double>(j) * dy(); }
    double dx() const { return (window.xMax - window.xMin) / static_cast<double>(nx - 1); }
    double dy() const { return (window.yMax - window.yMin) / static_cast<double>(ny - 1); }
    double at(std::size_t i, std::size_t j) const { return values.at(j * nx + i); }
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fock-basis evaluation: W = (2/pi) Re sum_{m, k} w_k c_m conj(c_{m+k}) (-1)^m T_m^k(gamma)
/// with w_0 = 1, w_k = 2 e^{ik arg gamma}, and
/// T_m^k = e^{-2|gamma|^2} (2|gamma|)^k sqrt(m!/(m+k)!) L_m^k(4|gamma|^2).
///
/// T is advanced in m by the Laguerre three-term recurrence rewritten for the
/// scaled quantity; the starting value T_0^k is formed in log space.
inline double wignerFock(const StateVector& s, PhaseSpacePoint pt) {
    const auto c = s.amps();
    const std::size_t dim = c.size();
    const Complex g = pt.gamma();
    const double r = std::abs(g);
    const double x = 4.0 * r * r;
    const Complex unit = r > 0.0 ? g / r : Complex{1.0, 0.0};

    Complex total{};
    Complex rotation{1.0, 0.0};
    for (std::size_t k = 0; k < dim; ++k) {
        if (k > 0) rotation *= unit;
        const double kd = static_cast<double>(k);
        double t0;
        if (k == 0) {
            t0 = std::exp(-0.5 * x);
        } else if (r == 0.0) {
            break;
        } else {
            t0 = std::exp(-0.5 * x + kd * std::log(2.0 * r) - 0.5 * std::lgamma(kd + 1.0));
        }
        double prev = 0.0;
        double cur = t0;
        Complex acc{};
        for (std::size_t m = 0; m + k < dim; ++m) {
            const double md = static_cast<double>(m);
            const Complex rho = c[m] * std::conj(c[m + k]);
            acc += (m % 2 == 0 ? 1.0 : -1.0) * cur * rho;
            const double next = ((2.0 * md + 1.0 + kd - x) * cur - std::sqrt(md * (md + kd)) * prev) / std::sqrt((md + 1.0) * (md + kd + 1.0));
            prev = cur;
            cur = next;
        }
        total += (k == 0 ? 1.0 : 2.0) * rotation * acc;
    }
    return (2.0 / pi) * total.real();
}

namespace detail {

/// Running-sum termination: stop after `patience` consecutive terms satisfying
/// |term| <= tol * (|partial| + 1e-300).
class SeriesMonitor {
public:
    SeriesMonitor(double tol, int patience = 5) : tol_(tol), patience_(patience) {}

    bool accept(Complex term, Complex partial) {
        if (std::abs(term) <= tol_ * (std::abs(partial) + 1e-300)) {
            ++quiet_;
        } else {
            quiet_ = 0;
        }
        return quiet_ >= patience_;
    }

private:
    double tol_;
    int patience_;
    int quiet_ = 0;
};

}  // namespace detail

/// Direct evaluation of the Kerr-state Wigner function as the double series
///
///   W = (2/pi) e^{-2|g|^2} e^{-|a|^2} sum_q (2 a* g e^{i tau/2})^q / q! e^{-i tau q^2 / 2}
///         * sum_k (2 a g* e^{-i tau/2})^k / k! e^{i tau k^2 / 2} e^{-|a|^2 e^{i tau (k-q)}}.
///
/// Both sums stop once five consecutive terms fall below tol relative to the
/// running partial sum. Throws ConvergenceError after 500 terms, when the terms
/// would leave the double range, and when
/// the summed term magnitudes put the rounding error of the result above 1e-9.
/// That happens for large |alpha| |gamma| once tau is big enough for the
/// overlap factors to grow (alpha = 5, tau = 0.08 already does it).
inline double wignerKerrSeries(const KerrParams& p, PhaseSpacePoint pt, double tol = 1e-13) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("wignerKerrSeries: tol must be positive");
    }
    detail::requireFiniteParams(p);
    // Terms are summed unscaled, so their size e^{4|alpha||gamma| + |alpha|^2} must fit in a double.
    if (4.0 * std::abs(p.alpha) * std::abs(pt.gamma()) + std::norm(p.alpha) >= 700.0) {
        throw ConvergenceError("wignerKerrSeries: alpha and gamma too large for the unscaled series");
    }
    constexpr int maxTerms = 500;
    const Complex i{0.0, 1.0};
    const Complex g = pt.gamma();
    const double a2 = std::norm(p.alpha);
    const Complex outerBase = 2.0 * std::conj(p.alpha) * g * std::exp(0.5 * i * p.tau);
    const Complex innerBase = 2.0 * p.alpha * std::conj(g) * std::exp(-0.5 * i * p.tau);

    // Inner-sum factors depend on k only; the overlap factor on k - q only.
    std::vector<Complex> innerPower{Complex{1.0, 0.0}};
    std::vector<Complex> innerFactor;
    auto innerTerm = [&](int k) {
        while (static_cast<int>(innerFactor.size()) <= k) {
            const int kk = static_cast<int>(innerFactor.size());
            if (kk > 0) innerPower.push_back(innerPower.back() * innerBase / static_cast<double>(kk));
            innerFactor.push_back(innerPower[static_cast<std::size_t>(kk)] * std::polar(1.0, 0.5 * p.tau * kk * kk));
        }
        return innerFactor[static_cast<std::size_t>(k)];
    };
    std::vector<Complex> overlapCache(2 * maxTerms + 1);
    std::vector<bool> overlapReady(2 * maxTerms + 1, false);
    auto overlap = [&](int d) {
        const auto idx = static_cast<std::size_t>(d + maxTerms);
        if (!overlapReady[idx]) {
            overlapCache[idx] = std::exp(-a2 * std::polar(1.0, p.tau * d));
            overlapReady[idx] = true;
        }
        return overlapCache[idx];
    };

    Complex outerSum{};
    double magnitudeSum = 0.0;
    Complex outerPower{1.0, 0.0};
    detail::SeriesMonitor outerMonitor(tol);
    for (int q = 0;; ++q) {
        if (q >= maxTerms) {
            throw ConvergenceError("wignerKerrSeries: outer sum did not converge in 500 terms");
        }
        if (q > 0) outerPower *= outerBase / static_cast<double>(q);
        Complex innerSum{};
        double innerMagnitude = 0.0;
        detail::SeriesMonitor innerMonitor(tol);
        for (int k = 0;; ++k) {
            if (k >= maxTerms) {
                throw ConvergenceError("wignerKerrSeries: inner sum did not converge in 500 terms");
            }
            const Complex term = innerTerm(k) * overlap(k - q);
            innerSum += term;
            innerMagnitude += std::abs(term);
            if (innerMonitor.accept(term, innerSum)) break;
        }
        const Complex term = outerPower * std::polar(1.0, -0.5 * p.tau * q * q) * innerSum;
        outerSum += term;
        magnitudeSum += std::abs(outerPower) * innerMagnitude;
        if (outerMonitor.accept(term, outerSum)) break;
    }
    const double scale = (2.0 / pi) * std::exp(-2.0 * std::norm(g) - a2);
    constexpr double maxRoundingError = 1e-9;
    const double roundingError = scale * magnitudeSum * std::numeric_limits<double>::epsilon();
    if (!(roundingError <= maxRoundingError)) {
        throw ConvergenceError(fmt::format("wignerKerrSeries: cancellation at gamma=({}, {}) leaves an estimated error of {:.3g}", g.real(), g.imag(), roundingError));
    }
    return scale * outerSum.real();
}

namespace detail {

inline void requireGridShape(const Window& w, std::size_t nx, std::size_t ny) {
    if (nx < 2 || ny < 2) {
        throw std::invalid_argument("wigner grid: nx and ny must be >= 2");
    }
    if (!(w.xMax > w.xMin) || !(w.yMax > w.yMin)) {
        throw std::invalid_argument("wigner grid: degenerate window (zero area)");
    }
}

template <class PointFn>
WignerGrid sampleGrid(const Window& w, std::size_t nx, std::size_t ny, WignerMethod method, unsigned threads, PointFn&& fn) {
    requireGridShape(w, nx, ny);
    WignerGrid grid{w, nx, ny, std::vector<double>(nx * ny), method};
    auto rows = [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            for (std::size_t i = 0; i < nx; ++i) {
                grid.values[j * nx + i] = fn(PhaseSpacePoint{grid.x(i), grid.y(j)});
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, ny));
    if (threads <= 1) {
        rows(0, ny);
        return grid;
    }
    const std::size_t chunk = (ny + threads - 1) / threads;
    std::vector<std::exception_ptr> failures((ny + chunk - 1) / chunk);
    {
        std::vector<std::jthread> workers;
        for (std::size_t begin = 0, w = 0; begin < ny; begin += chunk, ++w) {
            workers.emplace_back([&, begin, w] {
                try {
                    rows(begin, std::min(ny, begin + chunk));
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
    return grid;
}

}  // namespace detail

/// Fock-basis Wigner grid of any state. threads = 0 picks the hardware concurrency.
inline WignerGrid wignerGrid(const StateVector& s, const Window& w, std::size_t nx, std::size_t ny, unsigned threads = 0) {
    return detail::sampleGrid(w, nx, ny, WignerMethod::FockParity, threads, [&](PhaseSpacePoint pt) { return wignerFock(s, pt); });
}

/// Same lattice evaluated with the Kerr double series.
inline WignerGrid wignerGridSeries(const KerrParams& p, const Window& w, std::size_t nx, std::size_t ny, double tol = 1e-13, unsigned threads = 0) {
    return detail::sampleGrid(w, nx, ny, WignerMethod::KerrSeries, threads, [&](PhaseSpacePoint pt) { return wignerKerrSeries(p, pt, tol); });
}

/// Midpoint-rule integral: each sample stands for a dx-by-dy cell centred on it.
inline double gridIntegral(const WignerGrid& g) {
    double s = 0.0;
    for (double v : g.values) s += v;
    return s * g.dx() * g.dy();
}

/// Integral of |min(W, 0)| over the grid cells. Meaningful when gridIntegral is close to 1.
inline double negativityVolume(const WignerGrid& g) {
    double s = 0.0;
    for (double v : g.values) s += std::max(-v, 0.0);
    return s * g.dx() * g.dy();
}

inline double maxAbsDifference(const WignerGrid& a, const WignerGrid& b) {
    if (a.nx != b.nx || a.ny != b.ny) {
        throw std::invalid_argument("maxAbsDifference: grid shapes differ");
    }
    double m = 0.0;
    for (std::size_t n = 0; n < a.values.size(); ++n) m = std::max(m, std::abs(a.values[n] - b.values[n]));
    return m;
}

}  // namespace kerrcat
