/**
 * @file
 * @brief Single trapped ion: joint motional/electronic states, carrier and
 *        red-sideband pulses with exact Lamb-Dicke matrix elements, and the
 *        alternating-pulse synthesis of arbitrary finite Fock superpositions.
 *
 * Pulse convention: on a coupled pair (|g>, |e>) a pulse of effective angle T and
 * phase phi acts as
 *
 *     g' = cos(T/2) g - i e^{-i phi} sin(T/2) e
 *     e' = cos(T/2) e - i e^{+i phi} sin(T/2) g
 *
 * The effective angle on pair n is the bare pulse area times the coupling
 * <m|exp(i eta (a + a^dag))|n> of that pair (the factor i^{|m-n|} is absorbed
 * into phi). A Pulse stores the effective angle on its own target pair, so the
 * bare area is Pulse::theta / coupling(kind, index).
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kerrcat/fock.hpp"
#include "kerrcat/laguerre.hpp"

namespace kerrcat {

class JointState {
public:
    JointState(std::vector<Complex> ground, std::vector<Complex> excited) : g_(std::move(ground)), e_(std::move(excited)) {
        if (g_.empty() || g_.size() != e_.size()) {
            throw std::invalid_argument("JointState: ground/excited lists must be non-empty and equally long");
        }
    }

    /// amplitude * |0, g> in dim motional levels.
    static JointState groundState(std::size_t dim, Complex amplitude = 1.0) {
        std::vector<Complex> g(dim, Complex{});
        if (dim == 0) throw std::invalid_argument("JointState: dim must be >= 1");
        g[0] = amplitude;
        return JointState(std::move(g), std::vector<Complex>(dim, Complex{}));
    }

    /// sum_n c_n |n, g>, zero-padded to dim.
    static JointState fromMotional(const StateVector& s, std::size_t dim) {
        const StateVector padded = s.paddedTo(dim);
        return JointState(std::vector<Complex>(padded.amps().begin(), padded.amps().end()), std::vector<Complex>(dim, Complex{}));
    }

    std::size_t dim() const noexcept { return g_.size(); }
    const std::vector<Complex>& ground() const noexcept { return g_; }
    const std::vector<Complex>& excited() const noexcept { return e_; }

    double normSquared() const noexcept {
        double s = 0.0;
        for (std::size_t n = 0; n < g_.size(); ++n) s += std::norm(g_[n]) + std::norm(e_[n]);
        return s;
    }

    double excitedPopulation() const noexcept {
        double s = 0.0;
        for (const auto& a : e_) s += std::norm(a);
        return s;
    }

    /// The |g> manifold as a (not renormalized) motional state.
    StateVector groundMotional() const { return StateVector(g_); }

private:
    std::vector<Complex> g_;
    std::vector<Complex> e_;
};

enum class PulseKind { Carrier, RedSideband };

inline const char* toString(PulseKind k) { return k == PulseKind::Carrier ? "carrier" : "red"; }

struct Pulse {
    PulseKind kind = PulseKind::Carrier;
    double phase = 0.0;     ///< radians, reduced to (-pi, pi]
    double theta = 0.0;     ///< effective rotation angle on the target pair, [0, pi]
    std::size_t index = 0;  ///< k of C_k (pair |k,g>,|k,e>) or R_k (pair |k,g>,|k-1,e>)
    double rawPhase = 0.0;  ///< phase before reduction
};

/// exp(-eta^2/2) L_n(eta^2): Rabi reduction of the carrier on level n.
inline double carrierCoupling(std::size_t n, double eta) { return displacementFactor(n, 0, eta); }

/// Red-sideband coupling of (|n,g>, |n-1,e>), n >= 1; tends to eta sqrt(n) for small eta.
inline double redCoupling(std::size_t n, double eta) {
    if (n == 0) return 0.0;
    return displacementFactor(n - 1, 1, eta);
}

inline double pulseCoupling(const Pulse& p, double eta) {
    return p.kind == PulseKind::Carrier ? carrierCoupling(p.index, eta) : redCoupling(p.index, eta);
}

namespace detail {

inline void rotatePair(Complex& g, Complex& e, double phase, double angle) {
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    const Complex i{0.0, 1.0};
    const Complex gNew = c * g - i * std::polar(1.0, -phase) * s * e;
    const Complex eNew = c * e - i * std::polar(1.0, phase) * s * g;
    g = gNew;
    e = eNew;
}

inline double reducePhase(double phi) {
    double r = std::remainder(phi, 2.0 * pi);  // [-pi, pi]
    if (r <= -pi) r += 2.0 * pi;
    return r;
}

}  // namespace detail

/// Carrier pulse of bare area theta: pair (|n,g>, |n,e>) rotates by theta * carrierCoupling(n).
inline JointState applyCarrier(const JointState& s, double phase, double theta, double eta) {
    std::vector<Complex> g = s.ground();
    std::vector<Complex> e = s.excited();
    for (std::size_t n = 0; n < g.size(); ++n) {
        detail::rotatePair(g[n], e[n], phase, theta * carrierCoupling(n, eta));
    }
    return JointState(std::move(g), std::move(e));
}

/// Red-sideband pulse of bare area theta: pair (|n,g>, |n-1,e>) rotates by theta * redCoupling(n).
/// |0,g> and |dim-1,e> have no partner and are left alone.
inline JointState applyRedSideband(const JointState& s, double phase, double theta, double eta) {
    if (!(eta > 0.0)) {
        throw std::invalid_argument("applyRedSideband: eta must be positive");
    }
    std::vector<Complex> g = s.ground();
    std::vector<Complex> e = s.excited();
    for (std::size_t n = 1; n < g.size(); ++n) {
        detail::rotatePair(g[n], e[n - 1], phase, theta * redCoupling(n, eta));
    }
    return JointState(std::move(g), std::move(e));
}

inline double bareArea(const Pulse& p, double eta) {
    const double coupling = pulseCoupling(p, eta);
    if (std::abs(coupling) < 1e-12) {
        throw std::domain_error(std::string("pulse ") + toString(p.kind) + " " + std::to_string(p.index) + " has vanishing coupling at eta=" + std::to_string(eta));
    }
    return p.theta / coupling;
}

inline JointState applyPulse(const JointState& s, const Pulse& p, double eta, double area) {
    return p.kind == PulseKind::Carrier ? applyCarrier(s, p.phase, area, eta) : applyRedSideband(s, p.phase, area, eta);
}

inline std::size_t requiredDimension(const std::vector<Pulse>& pulses) {
    std::size_t top = 0;
    for (const auto& p : pulses) top = std::max(top, p.index);
    return pulses.empty() ? 1 : top + 2;
}

inline void requireDimension(const std::vector<Pulse>& pulses, const JointState& s) {
    const std::size_t need = requiredDimension(pulses);
    if (s.dim() < need) {
        throw std::invalid_argument("simulate: dim=" + std::to_string(s.dim()) + " too small, schedule needs >= " + std::to_string(need));
    }
}

/// Apply pulses in list order.
inline JointState simulatePulses(const std::vector<Pulse>& pulses, double eta, const JointState& initial) {
    requireDimension(pulses, initial);
    JointState s = initial;
    for (const auto& p : pulses) {
        if (p.theta == 0.0) continue;
        s = applyPulse(s, p, eta, bareArea(p, eta));
    }
    return s;
}

struct SynthesisResult {
    std::vector<Pulse> pulses;  ///< application order C_0, R_1, C_1, ..., C_{M-1}, R_M
    Complex globalPhase{1.0, 0.0};  ///< start from globalPhase |0,g> to land exactly on the target
    std::size_t M = 0;
};

/// Highest level with |c_n| > 1e-12.
inline std::size_t effectiveTop(const StateVector& target) {
    const auto c = target.amps();
    for (std::size_t n = c.size(); n-- > 0;) {
        if (std::abs(c[n]) > 1e-12) return n;
    }
    throw std::invalid_argument("synthesize: all-zero target");
}

/// Pulse schedule preparing sum_n c_n |n,g> from |0,g>.
///
/// The target is taken apart from the top: for k = M..1 an inverse red pulse
/// empties |k,g> into |k-1,e>, then an inverse carrier empties |k-1,e> into
/// |k-1,g>. What remains is a phase times |0,g>; reversing the recorded pulses
/// gives the forward schedule.
inline SynthesisResult synthesize(const StateVector& target, double eta, std::size_t guardLevels = 5) {
    const std::size_t M = effectiveTop(target);
    if (!target.isNormalized(1e-9)) {
        throw std::invalid_argument("synthesize: target must be normalized (norm=" + std::to_string(target.norm()) + ")");
    }
    if (M > 0 && !(eta > 0.0)) {
        throw std::invalid_argument("synthesize: eta must be positive");
    }
    const std::size_t dim = std::max(target.dim(), M + 1 + guardLevels);
    JointState s = JointState::fromMotional(target, dim);

    constexpr double nullTol = 1e-12;
    std::vector<Pulse> reversed;
    reversed.reserve(2 * M);
    for (std::size_t k = M; k >= 1; --k) {
        {
            const Complex g = s.ground()[k];
            const Complex e = s.excited()[k - 1];
            Pulse p{PulseKind::RedSideband, 0.0, 0.0, k, 0.0};
            if (std::abs(g) >= nullTol) {
                p.theta = 2.0 * std::atan2(std::abs(g), std::abs(e));
                p.rawPhase = std::arg(e) - std::arg(g) - 0.5 * pi;
                p.phase = detail::reducePhase(p.rawPhase);
                s = applyPulse(s, p, eta, -bareArea(p, eta));
            }
            reversed.push_back(p);
        }
        {
            const Complex g = s.ground()[k - 1];
            const Complex e = s.excited()[k - 1];
            Pulse p{PulseKind::Carrier, 0.0, 0.0, k - 1, 0.0};
            if (std::abs(e) >= nullTol) {
                p.theta = 2.0 * std::atan2(std::abs(e), std::abs(g));
                p.rawPhase = 0.5 * pi + std::arg(e) - std::arg(g);
                p.phase = detail::reducePhase(p.rawPhase);
                s = applyPulse(s, p, eta, -bareArea(p, eta));
            }
            reversed.push_back(p);
        }
    }
    SynthesisResult out;
    out.M = M;
    out.pulses.assign(reversed.rbegin(), reversed.rend());
    const Complex residual = s.ground()[0];
    out.globalPhase = std::abs(residual) > 0.0 ? residual / std::abs(residual) : Complex{1.0, 0.0};
    return out;
}

enum class ScheduleMode { FixedRabi, FixedDuration };

inline const char* toString(ScheduleMode m) { return m == ScheduleMode::FixedRabi ? "fixed-rabi" : "fixed-duration"; }

struct PulseTiming {
    double durationS = 0.0;  ///< FixedRabi: per-pulse duration; FixedDuration: the shared duration
    double rabiHz = 0.0;     ///< FixedDuration: per-pulse Rabi rate; FixedRabi: the kind's rate
    bool skippable = false;  ///< zero-area pulse
};

/// Pulses with laboratory parameters. Rabi rates are used as rates in 1/s,
/// so the bare area of a pulse is rabi * duration / conventionFactor.
struct PhysicalSchedule {
    std::vector<Pulse> pulses;
    ScheduleMode mode = ScheduleMode::FixedRabi;
    double carrierRabiHz = 1e6;
    double redRabiHz = 1e5;
    double fixedDurationS = 1e-6;
    double eta = 0.02;
    double conventionFactor = 1.0;
    Complex globalPhase{1.0, 0.0};
    std::vector<PulseTiming> perPulse;
};

struct PhysicalParameters {
    ScheduleMode mode = ScheduleMode::FixedRabi;
    double carrierRabiHz = 1e6;
    double redRabiHz = 1e5;
    double fixedDurationS = 1e-6;
    double eta = 0.02;
    double conventionFactor = 1.0;  ///< 1: area = rabi * t; 2: area = rabi * t / 2
};

/// Attach durations (FixedRabi) or Rabi rates (FixedDuration) to each pulse; phases are copied.
inline PhysicalSchedule toPhysical(const std::vector<Pulse>& pulses, const PhysicalParameters& params, Complex globalPhase = {1.0, 0.0}) {
    if (!(params.carrierRabiHz > 0.0) || !(params.redRabiHz > 0.0)) {
        throw std::invalid_argument("toPhysical: Rabi rates must be positive");
    }
    if (params.mode == ScheduleMode::FixedDuration && !(params.fixedDurationS > 0.0)) {
        throw std::invalid_argument("toPhysical: fixed duration must be positive");
    }
    if (!(params.conventionFactor > 0.0)) {
        throw std::invalid_argument("toPhysical: convention factor must be positive");
    }
    PhysicalSchedule out;
    out.pulses = pulses;
    out.mode = params.mode;
    out.carrierRabiHz = params.carrierRabiHz;
    out.redRabiHz = params.redRabiHz;
    out.fixedDurationS = params.fixedDurationS;
    out.eta = params.eta;
    out.conventionFactor = params.conventionFactor;
    out.globalPhase = globalPhase;
    out.perPulse.reserve(pulses.size());
    for (const auto& p : pulses) {
        PulseTiming t;
        const double kindRabi = p.kind == PulseKind::Carrier ? params.carrierRabiHz : params.redRabiHz;
        if (p.theta == 0.0) {
            t.skippable = true;
            t.durationS = params.mode == ScheduleMode::FixedRabi ? 0.0 : params.fixedDurationS;
            t.rabiHz = params.mode == ScheduleMode::FixedRabi ? kindRabi : 0.0;
        } else {
            const double area = bareArea(p, params.eta) * params.conventionFactor;
            if (area < 0.0) {
                throw std::domain_error("toPhysical: negative effective coupling for pulse index " + std::to_string(p.index));
            }
            if (params.mode == ScheduleMode::FixedRabi) {
                t.rabiHz = kindRabi;
                t.durationS = area / kindRabi;
            } else {
                t.durationS = params.fixedDurationS;
                t.rabiHz = area / params.fixedDurationS;
            }
        }
        out.perPulse.push_back(t);
    }
    return out;
}

/// Apply a physical schedule; bare areas are recovered from rabi * duration.
inline JointState simulateSchedule(const PhysicalSchedule& sched, const JointState& initial) {
    if (sched.perPulse.size() != sched.pulses.size()) {
        throw std::invalid_argument("simulateSchedule: timing list does not match pulse list");
    }
    requireDimension(sched.pulses, initial);
    JointState s = initial;
    for (std::size_t i = 0; i < sched.pulses.size(); ++i) {
        const auto& t = sched.perPulse[i];
        if (t.skippable) continue;
        s = applyPulse(s, sched.pulses[i], sched.eta, t.rabiHz * t.durationS / sched.conventionFactor);
    }
    return s;
}

/// |<target|ground manifold>|^2, insensitive to global phase.
inline double preparationFidelity(const JointState& s, const StateVector& target) {
    const StateVector padded = target.paddedTo(std::max(target.dim(), s.dim()));
    std::vector<Complex> g = s.ground();
    g.resize(padded.dim(), Complex{});
    return std::norm(innerProduct(padded, StateVector(std::move(g))));
}

}  // namespace kerrcat
