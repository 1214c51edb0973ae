// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "kerrcat/kerrcat.hpp"
#include "kittens.hpp"
#include "oracles.hpp"

#ifndef KERRCAT_CLI_PATH
#error "KERRCAT_CLI_PATH must point at the kerrcat executable"
#endif

using namespace kerrcat;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double limitSeconds;  // <= 0: no runtime limit
    std::function<Outcome()> check;
};

// ---------------------------------------------------------------- 1

Outcome fullRevival() {
    const double f = fidelity(kerrEvolve({2.0, 2 * pi}, 40), coherent(2.0, 40));
    return {std::abs(f - 1.0) <= 1e-12, fmt::format("|F - 1| = {:.2e}", std::abs(f - 1.0))};
}

// ---------------------------------------------------------------- 2

Outcome kittens() {
    double worstInfidelity = 0.0;
    double worstCoefficient = 0.0;
    bool shapes = true;
    for (const auto& c : kitten::cases()) {
        const auto r = reconstructSuperposition(c.superposition, 40);
        worstInfidelity = std::max(worstInfidelity, 1.0 - fidelity(r.state, kerrEvolve({2.0, c.tau.value()}, 40)));
        const auto f = toRevivalFraction(c.tau);
        const double d = kitten::coefficientDistance(revivalDecompose(2.0, f.pNum, f.q), c.superposition);
        if (d < 0.0) shapes = false;
        worstCoefficient = std::max(worstCoefficient, d);
    }
    const bool pass = shapes && worstInfidelity <= 1e-9 && worstCoefficient < 1e-8;
    return {pass, fmt::format("5 cases, worst 1 - F = {:.2e}, worst coefficient error = {:.2e}{}", worstInfidelity, worstCoefficient, shapes ? "" : ", term sets differ")};
}

// ---------------------------------------------------------------- 3

Outcome quadratures() {
    double worst = 0.0;
    double zeroDeviation = 0.0;
    for (double a : {0.5, 1.0, 2.0}) {
        const std::size_t dim = defaultDimension(a);
        for (int i = 0; i < 100; ++i) {
            const double tau = 2 * pi * i / 99.0;
            const auto [c1, c2] = quadratureVariancesClosedForm({a, tau});
            const auto m = quadratureMoments(kerrEvolve({a, tau}, dim));
            worst = std::max({worst, std::abs(c1 - m.varX1), std::abs(c2 - m.varX2)});
            if (i == 0) zeroDeviation = std::max({zeroDeviation, std::abs(c1 - 1.0), std::abs(c2 - 1.0), std::abs(m.varX1 - 1.0), std::abs(m.varX2 - 1.0)});
        }
    }
    return {worst < 1e-8 && zeroDeviation <= 1e-10, fmt::format("max |closed - numeric| = {:.2e} over 3 x 100 points, tau=0 deviation {:.2e}", worst, zeroDeviation)};
}

// ---------------------------------------------------------------- 4

Outcome dualMethod() {
    struct Pair {
        double alpha;
        double tau;
        const char* label;
    };
    const Pair pairs[] = {{5.0, 0.01, "0.01"}, {5.0, 0.08, "0.08"}, {2.0, pi / 3, "pi/3"}, {2.0, 2 * pi / 5, "2pi/5"}, {2.0, pi / 2, "pi/2"}, {2.0, 2 * pi / 3, "2pi/3"}, {2.0, pi, "pi"}};
    const Window w{-3.5, 3.5, -3.5, 3.5};
    bool pass = true;
    std::vector<std::string> problems;
    double worstDiff = 0.0;
    double worstIntegralOk = 0.0;
    double worstParity = 0.0;
    for (const auto& p : pairs) {
        const auto s = kerrEvolve({p.alpha, p.tau}, defaultDimension(p.alpha));
        const auto fock = wignerGrid(s, w, 21, 21);
        const double parity = 2.0 / pi * parityExpectation(s);
        double parityError = std::abs(wignerFock(s, {0.0, 0.0}) - parity);
        const double integral = gridIntegral(fock);
        if (std::abs(integral - 1.0) > 5e-3) {
            pass = false;
            problems.push_back(fmt::format("alpha={} tau={}: integral {:.4f} (state centred at |gamma| = {}, outside the window)", p.alpha, p.label, integral, p.alpha));
        } else {
            worstIntegralOk = std::max(worstIntegralOk, std::abs(integral - 1.0));
        }
        try {
            const auto series = wignerGridSeries({p.alpha, p.tau}, w, 21, 21);
            const double diff = maxAbsDifference(fock, series);
            parityError = std::max(parityError, std::abs(wignerKerrSeries({p.alpha, p.tau}, {0.0, 0.0}) - parity));
            if (diff >= 1e-7) {
                pass = false;
                problems.push_back(fmt::format("alpha={} tau={}: max diff {:.2e}", p.alpha, p.label, diff));
            } else {
                worstDiff = std::max(worstDiff, diff);
            }
        } catch (const ConvergenceError&) {
            pass = false;
            problems.push_back(fmt::format("alpha={} tau={}: series unusable in double precision", p.alpha, p.label));
        }
        worstParity = std::max(worstParity, parityError);
    }
    if (worstParity > 1e-10) pass = false;
    std::string detail = fmt::format("agreeing pairs max diff {:.2e}, parity at origin {:.2e}, in-window integrals within {:.1e} of 1", worstDiff, worstParity, worstIntegralOk);
    for (const auto& p : problems) detail += "; " + p;
    return {pass, detail};
}

// ---------------------------------------------------------------- 5

Outcome squeezingNegativity() {
    const Window w = defaultWindow(5.0);
    const auto squeezed = wignerGrid(kerrEvolve({5.0, 0.01}, defaultDimension(5.0)), w, 86, 86);
    const auto banana = wignerGrid(kerrEvolve({5.0, 0.08}, defaultDimension(5.0)), w, 86, 86);
    const double n1 = negativityVolume(squeezed);
    const double n2 = negativityVolume(banana);
    return {n1 < 1e-4 && n2 > 1e-3, fmt::format("86x86 on [-8.5,8.5]^2: tau=0.01 negativity {:.3e}, tau=0.08 negativity {:.4f}", n1, n2)};
}

// ---------------------------------------------------------------- 6

Outcome truncationClaim() {
    const auto full = kerrEvolve({2.0, pi / 2}, defaultDimension(2.0));
    const double kept = truncate(full, 10).second.keptProbability;
    const double cdf = oracle::poissonCdf(4.0, 10);
    const Window w = defaultWindow(2.0);
    const auto g30 = wignerGrid(truncate(full, 30).first, w, 56, 56);
    const double d10 = maxAbsDifference(wignerGrid(truncate(full, 10).first, w, 56, 56), g30);
    const double d5 = maxAbsDifference(wignerGrid(truncate(full, 5).first, w, 56, 56), g30);
    const bool pass = std::abs(kept - cdf) < 1e-12 && d5 >= 10.0 * d10;
    return {pass, fmt::format("kept(M=10) = {:.12f} vs Poisson {:.12f}; max diff M10/M30 {:.4f}, M5/M30 {:.4f}, ratio {:.2f}", kept, cdf, d10, d5, d5 / d10)};
}

// ---------------------------------------------------------------- 7

Outcome synthesisRoundTrip() {
    const auto target = truncate(kerrEvolve({2.0, pi / 2}, defaultDimension(2.0)), 10).first;
    const auto r = synthesize(target, 0.02);
    const auto end = simulatePulses(r.pulses, 0.02, JointState::groundState(16));
    const double f = preparationFidelity(end, target);
    const double leak = end.excitedPopulation();
    bool pass = r.pulses.size() == 20 && f >= 1.0 - 1e-9 && leak < 1e-12;

    std::mt19937_64 rng(20240601);
    int randomPassed = 0;
    double worstRandom = 0.0;
    double worstLeak = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t M = 1 + static_cast<std::size_t>(trial % 12);
        const auto t = oracle::randomState(rng, M + 1);
        const auto rr = synthesize(t, 0.02);
        const auto e = simulatePulses(rr.pulses, 0.02, JointState::groundState(M + 6));
        const double ff = preparationFidelity(e, t);
        worstRandom = std::max(worstRandom, 1.0 - ff);
        worstLeak = std::max(worstLeak, e.excitedPopulation());
        if (rr.pulses.size() == 2 * M && ff >= 1.0 - 1e-9 && e.excitedPopulation() < 1e-12) ++randomPassed;
    }
    pass = pass && randomPassed == 50;
    return {pass, fmt::format("{} pulses, 1 - F = {:.2e}, leakage {:.2e}; random targets {}/50 (worst 1 - F {:.2e}, leakage {:.2e})", r.pulses.size(), 1.0 - f, leak, randomPassed, worstRandom, worstLeak)};
}

// ---------------------------------------------------------------- 8

Outcome modeEquivalence() {
    const auto target = truncate(kerrEvolve({2.0, pi / 2}, defaultDimension(2.0)), 10).first;
    const auto r = synthesize(target, 0.02);
    PhysicalParameters rabi;
    PhysicalParameters fixed;
    fixed.mode = ScheduleMode::FixedDuration;
    fixed.fixedDurationS = 1e-6;
    const auto a = toPhysical(r.pulses, rabi, r.globalPhase);
    const auto b = toPhysical(r.pulses, fixed, r.globalPhase);
    const double fa = preparationFidelity(simulateSchedule(a, JointState::groundState(16)), target);
    const double fb = preparationFidelity(simulateSchedule(b, JointState::groundState(16)), target);
    bool samePhases = a.pulses.size() == b.pulses.size();
    for (std::size_t i = 0; samePhases && i < a.pulses.size(); ++i) samePhases = a.pulses[i].phase == b.pulses[i].phase;
    return {samePhases && std::abs(fa - fb) < 1e-12, fmt::format("|F_rabi - F_duration| = {:.2e}, phase columns {}", std::abs(fa - fb), samePhases ? "identical" : "differ")};
}

// ---------------------------------------------------------------- 9

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const fs::path dir = fs::temp_directory_path() / "kerrcat_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream(dir / "synth.conf") << "alpha = 2\ntau = 1/2 pi\nM = 10\neta = 0.02\n";
    }
    const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
        {"synth --config {dir}/synth.conf --out {dir}/{run}/schedule.json", {"schedule.json", "schedule.table.txt", "schedule.report.json"}},
        {"wigner-grid --alpha 2 --tau '1/1 pi' --nx 31 --ny 31 --format json --both-methods --out {dir}/{run}/cat.json", {"cat.json", "cat.series.json"}},
        {"kerr-evolve --alpha 5 --tau 0.08 --out {dir}/{run}/state.json", {"state.json"}},
        {"truncation-scan --alphas 1,2,5 --m-max 60 --out {dir}/{run}/scan.csv", {"scan.csv"}},
    };
    std::size_t compared = 0;
    std::vector<std::string> problems;
    for (const auto& [args, files] : commands) {
        for (const char* run : {"first", "second"}) {
            std::string line = args;
            for (std::string::size_type pos; (pos = line.find("{dir}")) != std::string::npos;) line.replace(pos, 5, dir.string());
            for (std::string::size_type pos; (pos = line.find("{run}")) != std::string::npos;) line.replace(pos, 5, run);
            const std::string command = std::string("'") + KERRCAT_CLI_PATH + "' " + line + " > /dev/null 2>&1";
            if (std::system(command.c_str()) != 0) problems.push_back("command failed: " + line);
        }
        for (const auto& f : files) {
            const auto a = dir / "first" / f;
            const auto b = dir / "second" / f;
            if (!fs::exists(a) || !fs::exists(b)) {
                problems.push_back("missing " + f);
            } else if (slurp(a) != slurp(b)) {
                problems.push_back(f + " differs");
            } else {
                ++compared;
            }
        }
    }
    fs::remove_all(dir);
    std::string detail = fmt::format("{} payload files byte-identical across two runs", compared);
    for (const auto& p : problems) detail += "; " + p;
    return {problems.empty(), detail};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "full revival at tau = 2pi", 1e-3, fullRevival},
        {2, "kitten superpositions and revival decomposition", 1.0, kittens},
        {3, "closed-form quadrature variances", 0.0, quadratures},
        {4, "Wigner series vs Fock parity on [-3.5,3.5]^2", 30.0, dualMethod},
        {5, "squeezing and negativity at alpha = 5", 0.0, squeezingNegativity},
        {6, "truncation at M = 10", 0.0, truncationClaim},
        {7, "synthesis round trip", 5.0, synthesisRoundTrip},
        {8, "fixed-Rabi vs fixed-duration schedules", 0.0, modeEquivalence},
        {9, "CLI determinism", 0.0, determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::string timing = seconds < 1e-2 ? fmt::format("{:.3f} ms", seconds * 1e3) : fmt::format("{:.2f} s", seconds);
        if (c.limitSeconds > 0.0) {
            const bool inTime = seconds < c.limitSeconds;
            timing += inTime ? fmt::format(" < {} s", c.limitSeconds) : fmt::format(" exceeds {} s", c.limitSeconds);
            o.pass = o.pass && inTime;
        }
        if (!o.pass) ++failures;
        std::printf("%s  %d. %s: %s [%s]\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), o.detail.c_str(), timing.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
