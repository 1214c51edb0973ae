// Closed-form coherent-state superpositions of the alpha = 2 Kerr state at
// tau = pi/3, 2pi/5, pi/2, 2pi/3 and pi.
#pragma once

#include <complex>
#include <string>
#include <vector>

#include "kerrcat/kerr.hpp"

namespace kitten {

using kerrcat::Complex;
using kerrcat::pi;

inline Complex e(double x) { return std::polar(1.0, x); }

struct Case {
    std::string name;
    kerrcat::PiFraction tau;
    kerrcat::CoherentSuperposition superposition;
};

inline std::vector<Case> cases() {
    std::vector<Case> out;
    {
        const Complex c1 = (2.0 + 2.0 * Complex(0, 1) + e(-pi / 6) + e(-2 * pi / 3)) / 6.0;
        const Complex c2 = (2.0 - 2.0 * Complex(0, 1) + e(5 * pi / 6) + e(-2 * pi / 3)) / 6.0;
        const Complex c3 = (Complex(1, 1) + 2.0 * e(-5 * pi / 6) + 2.0 * e(2 * pi / 3)) / 6.0;
        const Complex c4 = (Complex(1, -1) + 2.0 * e(pi / 6) + 2.0 * e(2 * pi / 3)) / 6.0;
        out.push_back({"six", {1, 3}, {2.0, {{c1, pi / 6}, {c2, pi / 2}, {c3, 5 * pi / 6}, {c2, 7 * pi / 6}, {c1, 3 * pi / 2}, {c4, 11 * pi / 6}}}});
    }
    {
        const Complex c1 = (2.0 + 2.0 * e(2 * pi / 5) + e(-4 * pi / 5)) / 5.0;
        const Complex c2 = (2.0 + 2.0 * e(-2 * pi / 5) + e(4 * pi / 5)) / 5.0;
        const Complex c3 = (1.0 + 2.0 * e(4 * pi / 5) + 2.0 * e(-4 * pi / 5)) / 5.0;
        out.push_back({"five", {2, 5}, {2.0, {{c1, 0.0}, {c2, 2 * pi / 5}, {c3, 4 * pi / 5}, {c2, 6 * pi / 5}, {c1, 8 * pi / 5}}}});
    }
    {
        const Complex c1 = (2.0 + e(-pi / 4) + e(3 * pi / 4)) / 4.0;
        const Complex c2 = 0.5 * e(-3 * pi / 4);
        out.push_back({"four", {1, 2}, {2.0, {{c1, pi / 4}, {c2, 3 * pi / 4}, {c1, 5 * pi / 4}, {-c2, 7 * pi / 4}}}});
    }
    {
        const Complex c1 = (2.0 + e(2 * pi / 3)) / 3.0;
        const Complex c2 = (1.0 + 2.0 * e(-2 * pi / 3)) / 3.0;
        out.push_back({"three", {2, 3}, {2.0, {{c1, 0.0}, {c2, 2 * pi / 3}, {c1, 4 * pi / 3}}}});
    }
    out.push_back({"two", {1, 1}, {2.0, {{Complex(0.5, -0.5), pi / 2}, {Complex(0.5, 0.5), 3 * pi / 2}}}});
    return out;
}

/// Largest |a_j - u b_j| over terms paired by angle, with u the best unit phase; -1 on shape mismatch.
inline double coefficientDistance(const kerrcat::CoherentSuperposition& a, const kerrcat::CoherentSuperposition& b) {
    if (a.terms.size() != b.terms.size()) return -1.0;
    Complex overlap{};
    for (std::size_t j = 0; j < a.terms.size(); ++j) {
        if (std::abs(std::remainder(a.terms[j].angle - b.terms[j].angle, 2 * pi)) > 1e-12) return -1.0;
        overlap += a.terms[j].coefficient * std::conj(b.terms[j].coefficient);
    }
    const Complex u = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0, 0.0};
    double worst = 0.0;
    for (std::size_t j = 0; j < a.terms.size(); ++j) worst = std::max(worst, std::abs(a.terms[j].coefficient - u * b.terms[j].coefficient));
    return worst;
}

}  // namespace kitten
