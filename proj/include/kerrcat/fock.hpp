/**
 * @file
 * @brief Truncated Fock-space states and the elementary primitives built on them.
 *
 * A StateVector holds complex amplitudes over motional/photon number states
 * |0>, |1>, ..., |D-1>. All functions here are pure and operate on values.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kerrcat {

using Complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

inline bool isFinite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Amplitudes over Fock levels 0..dim-1. Always dim >= 1 and finite.
class StateVector {
public:
    explicit StateVector(std::vector<Complex> amps) : amps_(std::move(amps)) {
        if (amps_.empty()) {
            throw std::invalid_argument("StateVector: dim must be >= 1");
        }
        for (const auto& a : amps_) {
            if (!isFinite(a)) {
                throw std::invalid_argument("StateVector: non-finite amplitude");
            }
        }
    }

    /// |n> in a space of dimension dim.
    static StateVector fock(std::size_t n, std::size_t dim) {
        if (n >= dim) {
            throw std::invalid_argument("StateVector::fock: level " + std::to_string(n) + " outside dim " + std::to_string(dim));
        }
        std::vector<Complex> amps(dim, Complex{});
        amps[n] = 1.0;
        return StateVector(std::move(amps));
    }

    std::size_t dim() const noexcept { return amps_.size(); }
    std::span<const Complex> amps() const noexcept { return amps_; }
    Complex operator[](std::size_t n) const { return amps_.at(n); }

    double normSquared() const noexcept {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }
    double norm() const noexcept { return std::sqrt(normSquared()); }

    bool isNormalized(double tol = 1e-9) const noexcept { return std::abs(norm() - 1.0) <= tol; }

    StateVector normalized() const {
        const double nrm = norm();
        if (nrm == 0.0) {
            throw std::domain_error("StateVector::normalized: zero vector");
        }
        std::vector<Complex> out(amps_);
        for (auto& a : out) a /= nrm;
        return StateVector(std::move(out));
    }

    /// Zero-pad (or keep) to a larger dimension.
    StateVector paddedTo(std::size_t dim) const {
        if (dim < amps_.size()) {
            throw std::invalid_argument("StateVector::paddedTo: cannot shrink from " + std::to_string(amps_.size()) + " to " + std::to_string(dim));
        }
        std::vector<Complex> out(amps_);
        out.resize(dim, Complex{});
        return StateVector(std::move(out));
    }

    std::vector<double> populations() const {
        std::vector<double> p(amps_.size());
        std::transform(amps_.begin(), amps_.end(), p.begin(), [](Complex a) { return std::norm(a); });
        return p;
    }

private:
    std::vector<Complex> amps_;
};

struct TruncationReport {
    std::size_t M = 0;
    double keptProbability = 1.0;
    double fidelityToFull = 1.0;
};

struct QuadratureMoments {
    double meanX1 = 0.0;
    double meanX2 = 0.0;
    double varX1 = 0.0;
    double varX2 = 0.0;
};

/// Truncation dimension used for coherent-state workloads: ceil(|a|^2 + 8|a| + 20).
inline std::size_t defaultDimension(Complex alpha) {
    const double r = std::abs(alpha);
    return static_cast<std::size_t>(std::ceil(r * r + 8.0 * r + 20.0));
}

/// Coherent state |alpha> restricted to dim levels and renormalized there.
///
/// Amplitudes come from the ratio recurrence c[n+1] = c[n] * alpha / sqrt(n+1),
/// so no factorial is ever formed.
inline StateVector coherent(Complex alpha, std::size_t dim) {
    if (dim == 0) {
        throw std::invalid_argument("coherent: dim must be >= 1");
    }
    if (!isFinite(alpha)) {
        throw std::invalid_argument("coherent: non-finite alpha");
    }
    std::vector<Complex> amps(dim);
    amps[0] = 1.0;
    for (std::size_t n = 1; n < dim; ++n) {
        amps[n] = amps[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    }
    // Divide out the largest magnitude first so large |alpha| cannot overflow the norm sum.
    double peak = 0.0;
    for (const auto& a : amps) peak = std::max(peak, std::abs(a));
    double s = 0.0;
    for (auto& a : amps) {
        a /= peak;
        s += std::norm(a);
    }
    const double nrm = std::sqrt(s);
    for (auto& a : amps) a /= nrm;
    return StateVector(std::move(amps));
}

inline void requireSameDim(const StateVector& a, const StateVector& b, const char* where) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument(std::string(where) + ": dimension mismatch (" + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
    }
}

/// <a|b> = sum conj(a[n]) b[n].
inline Complex innerProduct(const StateVector& a, const StateVector& b) {
    requireSameDim(a, b, "innerProduct");
    Complex s{};
    const auto x = a.amps();
    const auto y = b.amps();
    for (std::size_t n = 0; n < x.size(); ++n) s += std::conj(x[n]) * y[n];
    return s;
}

/// |<a|b>|^2 for normalized states.
inline double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(innerProduct(a, b));
}

/// Keep levels 0..M and renormalize. The report's fidelityToFull is the
/// overlap of the (padded) result with the normalized source.
inline std::pair<StateVector, TruncationReport> truncate(const StateVector& s, std::size_t M) {
    if (M >= s.dim()) {
        throw std::invalid_argument("truncate: M=" + std::to_string(M) + " must be < dim=" + std::to_string(s.dim()));
    }
    const auto src = s.amps();
    std::vector<Complex> kept(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(M + 1));
    double keptNorm2 = 0.0;
    for (const auto& a : kept) keptNorm2 += std::norm(a);
    const double total = s.normSquared();
    if (keptNorm2 == 0.0) {
        throw std::domain_error("truncate: no weight on levels 0..M");
    }
    TruncationReport report;
    report.M = M;
    report.keptProbability = keptNorm2 / total;
    report.fidelityToFull = report.keptProbability;
    const double nrm = std::sqrt(keptNorm2);
    for (auto& a : kept) a /= nrm;
    return {StateVector(std::move(kept)), report};
}

/// Quadrature moments for X1 = a + a^dag and X2 = -i(a - a^dag); vacuum variance is 1.
///
/// Uses <a>, <a^2>, <n> evaluated on the stored levels. Because aa^dag = n + 1,
/// the second moments are exact for any state supported on 0..D-1.
inline QuadratureMoments quadratureMoments(const StateVector& s) {
    const auto c = s.amps();
    Complex meanA{};
    Complex meanA2{};
    double meanN = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) {
        const double nd = static_cast<double>(n);
        meanN += nd * std::norm(c[n]);
        if (n + 1 < c.size()) meanA += std::conj(c[n]) * c[n + 1] * std::sqrt(nd + 1.0);
        if (n + 2 < c.size()) meanA2 += std::conj(c[n]) * c[n + 2] * std::sqrt((nd + 1.0) * (nd + 2.0));
    }
    QuadratureMoments m;
    m.meanX1 = 2.0 * meanA.real();
    m.meanX2 = 2.0 * meanA.imag();
    const double x1sq = 2.0 * meanA2.real() + 2.0 * meanN + 1.0;
    const double x2sq = -2.0 * meanA2.real() + 2.0 * meanN + 1.0;
    m.varX1 = std::max(0.0, x1sq - m.meanX1 * m.meanX1);
    m.varX2 = std::max(0.0, x2sq - m.meanX2 * m.meanX2);
    return m;
}

/// <(-1)^n>.
inline double parityExpectation(const StateVector& s) {
    double p = 0.0;
    const auto c = s.amps();
    for (std::size_t n = 0; n < c.size(); ++n) p += (n % 2 == 0 ? 1.0 : -1.0) * std::norm(c[n]);
    return p;
}

}  // namespace kerrcat
