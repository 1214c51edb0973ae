/**
 * @file
 * @brief File formats: state and schedule JSON, CSV tables, Wigner grid
 *        writers (CSV, gnuplot matrix, JSON) and a text pulse table.
 *
 * Numbers in CSV, gnuplot and grid JSON are printed with 17 significant digits.
 * State and schedule JSON use nlohmann's shortest round-trip representation.
 */

#pragma once

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kerrcat/fock.hpp"
#include "kerrcat/ion.hpp"
#include "kerrcat/kerr.hpp"
#include "kerrcat/wigner.hpp"

namespace kerrcat::io {

using nlohmann::json;

inline std::string num(double v) { return fmt::format("{:.17g}", v); }

// ---------------------------------------------------------------- states

inline json stateToJson(const StateVector& s) {
    json amps = json::array();
    for (const auto& a : s.amps()) amps.push_back({a.real(), a.imag()});
    return json{{"dim", s.dim()}, {"amps", std::move(amps)}};
}

/// Validates shape and finiteness; does not normalize.
inline StateVector stateFromJson(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("amps")) {
        throw std::invalid_argument("state JSON: expected object with \"dim\" and \"amps\"");
    }
    if (!j.at("dim").is_number_unsigned()) {
        throw std::invalid_argument("state JSON: \"dim\" must be a positive integer");
    }
    const auto dim = j.at("dim").get<std::size_t>();
    const json& amps = j.at("amps");
    if (!amps.is_array() || amps.size() != dim) {
        throw std::invalid_argument("state JSON: \"amps\" length does not match dim=" + std::to_string(dim));
    }
    std::vector<Complex> out;
    out.reserve(dim);
    for (const auto& pair : amps) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
            throw std::invalid_argument("state JSON: each amplitude must be [re, im]");
        }
        out.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return StateVector(std::move(out));
}

inline void writeState(std::ostream& os, const StateVector& s) { os << stateToJson(s).dump(2) << '\n'; }

inline StateVector readState(std::istream& is) {
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("state JSON: ") + e.what());
    }
    return stateFromJson(j);
}

// ---------------------------------------------------------------- schedules

inline json scheduleToJson(const PhysicalSchedule& s) {
    json header{
        {"mode", toString(s.mode)},
        {"eta", s.eta},
        {"carrier_rabi_hz", s.carrierRabiHz},
        {"red_rabi_hz", s.redRabiHz},
        {"convention_factor", s.conventionFactor},
        {"global_phase", {s.globalPhase.real(), s.globalPhase.imag()}},
    };
    if (s.mode == ScheduleMode::FixedDuration) header["fixed_duration_s"] = s.fixedDurationS;
    json pulses = json::array();
    for (std::size_t i = 0; i < s.pulses.size(); ++i) {
        const auto& p = s.pulses[i];
        json entry{
            {"kind", toString(p.kind)},
            {"index", p.index},
            {"phase_rad", p.phase},
            {"theta_rad", p.theta},
        };
        if (i < s.perPulse.size()) {
            if (s.mode == ScheduleMode::FixedRabi) {
                entry["duration_s"] = s.perPulse[i].durationS;
            } else {
                entry["rabi_hz"] = s.perPulse[i].rabiHz;
            }
            if (s.perPulse[i].skippable) entry["skippable"] = true;
        }
        pulses.push_back(std::move(entry));
    }
    return json{{"header", std::move(header)}, {"pulses", std::move(pulses)}};
}

inline PhysicalSchedule scheduleFromJson(const json& j) {
    try {
        PhysicalSchedule s;
        const json& h = j.at("header");
        const auto mode = h.at("mode").get<std::string>();
        if (mode == "fixed-rabi") {
            s.mode = ScheduleMode::FixedRabi;
        } else if (mode == "fixed-duration") {
            s.mode = ScheduleMode::FixedDuration;
            s.fixedDurationS = h.at("fixed_duration_s").get<double>();
        } else {
            throw std::invalid_argument("schedule JSON: unknown mode \"" + mode + "\"");
        }
        s.eta = h.at("eta").get<double>();
        s.carrierRabiHz = h.at("carrier_rabi_hz").get<double>();
        s.redRabiHz = h.at("red_rabi_hz").get<double>();
        s.conventionFactor = h.value("convention_factor", 1.0);
        const auto gp = h.at("global_phase");
        s.globalPhase = {gp.at(0).get<double>(), gp.at(1).get<double>()};
        for (const auto& e : j.at("pulses")) {
            Pulse p;
            const auto kind = e.at("kind").get<std::string>();
            if (kind == "carrier") {
                p.kind = PulseKind::Carrier;
            } else if (kind == "red") {
                p.kind = PulseKind::RedSideband;
            } else {
                throw std::invalid_argument("schedule JSON: unknown pulse kind \"" + kind + "\"");
            }
            p.index = e.at("index").get<std::size_t>();
            p.phase = e.at("phase_rad").get<double>();
            p.rawPhase = p.phase;
            p.theta = e.at("theta_rad").get<double>();
            PulseTiming t;
            t.skippable = e.value("skippable", false);
            if (s.mode == ScheduleMode::FixedRabi) {
                t.durationS = e.at("duration_s").get<double>();
                t.rabiHz = p.kind == PulseKind::Carrier ? s.carrierRabiHz : s.redRabiHz;
            } else {
                t.durationS = s.fixedDurationS;
                t.rabiHz = e.at("rabi_hz").get<double>();
            }
            s.pulses.push_back(p);
            s.perPulse.push_back(t);
        }
        return s;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("schedule JSON: ") + e.what());
    }
}

/// Two columns per row, R_k beside C_{k-1}, from the top level down.
inline std::string scheduleTable(const PhysicalSchedule& s) {
    const bool fixedRabi = s.mode == ScheduleMode::FixedRabi;
    std::string out = fmt::format("# mode={} eta={} carrier_rabi_hz={} red_rabi_hz={} convention_factor={}\n", toString(s.mode), s.eta, s.carrierRabiHz, s.redRabiHz, s.conventionFactor);
    out += fmt::format("# global phase: ({:.4f} {:+.4f}i)\n", s.globalPhase.real(), s.globalPhase.imag());
    auto cell = [&](std::size_t i) {
        const auto& p = s.pulses[i];
        const auto& t = s.perPulse[i];
        const std::string label = fmt::format("{}{}:", p.kind == PulseKind::Carrier ? 'C' : 'R', p.index);
        const std::string value = fixedRabi ? fmt::format("t = {:.4g} us", t.durationS * 1e6) : fmt::format("Omega = {:.4g} MHz", t.rabiHz * 1e-6);
        return fmt::format("{:<5} phi = {:>6.2f} (raw {:>6.2f}), {:<22}", label, p.phase, p.rawPhase, value);
    };
    // forward order is C0 R1 C1 R2 ... ; rows pair R_k (index 2k-1) with C_{k-1} (index 2k-2)
    for (std::size_t k = s.pulses.size() / 2; k >= 1; --k) {
        out += cell(2 * k - 1) + "  " + cell(2 * k - 2) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------- CSV tables

inline std::string superpositionCsv(const CoherentSuperposition& s) {
    std::string out = "angle,coeff_re,coeff_im\n";
    for (const auto& t : s.terms) out += num(t.angle) + "," + num(t.coefficient.real()) + "," + num(t.coefficient.imag()) + "\n";
    return out;
}

struct VarianceRow {
    double tau = 0.0;
    double varX1 = 0.0;
    double varX2 = 0.0;
};

inline std::string varianceCsv(const std::vector<VarianceRow>& rows) {
    std::string out = "tau,varX1,varX2\n";
    for (const auto& r : rows) out += num(r.tau) + "," + num(r.varX1) + "," + num(r.varX2) + "\n";
    return out;
}

// ---------------------------------------------------------------- Wigner grids

struct GridSummary {
    double integral = 0.0;
    double negativityVolume = 0.0;
};

inline GridSummary summarize(const WignerGrid& g) { return {gridIntegral(g), negativityVolume(g)}; }

inline std::string gridHeaderLines(const WignerGrid& g) {
    const auto sum = summarize(g);
    return fmt::format("# window x=[{}, {}] y=[{}, {}]\n# resolution nx={} ny={}\n# method={} integral={} negativity_volume={}\n", num(g.window.xMin), num(g.window.xMax), num(g.window.yMin), num(g.window.yMax), g.nx, g.ny, toString(g.method), num(sum.integral), num(sum.negativityVolume));
}

inline std::string gridCsv(const WignerGrid& g) {
    std::string out = gridHeaderLines(g) + "x,y,w\n";
    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) out += num(g.x(i)) + "," + num(g.y(j)) + "," + num(g.at(i, j)) + "\n";
    }
    return out;
}

/// `plot 'file' matrix` ready: ny rows of nx values, rows by increasing y.
inline std::string gridGnuplot(const WignerGrid& g) {
    std::string out = gridHeaderLines(g);
    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) {
            if (i > 0) out += ' ';
            out += num(g.at(i, j));
        }
        out += '\n';
    }
    return out;
}

inline std::string gridJson(const WignerGrid& g) {
    const auto sum = summarize(g);
    std::string out = "{\n";
    out += fmt::format("  \"method\": \"{}\",\n", toString(g.method));
    out += fmt::format("  \"window\": {{\"x_min\": {}, \"x_max\": {}, \"y_min\": {}, \"y_max\": {}}},\n", num(g.window.xMin), num(g.window.xMax), num(g.window.yMin), num(g.window.yMax));
    out += fmt::format("  \"nx\": {},\n  \"ny\": {},\n", g.nx, g.ny);
    out += fmt::format("  \"integral\": {},\n  \"negativity_volume\": {},\n", num(sum.integral), num(sum.negativityVolume));
    out += "  \"values\": [\n";
    for (std::size_t j = 0; j < g.ny; ++j) {
        out += "    [";
        for (std::size_t i = 0; i < g.nx; ++i) {
            if (i > 0) out += ", ";
            out += num(g.at(i, j));
        }
        out += j + 1 < g.ny ? "],\n" : "]\n";
    }
    out += "  ]\n}\n";
    return out;
}

inline WignerGrid gridFromJson(const json& j) {
    try {
        WignerGrid g;
        const auto m = j.at("method").get<std::string>();
        g.method = m == "KerrSeries" ? WignerMethod::KerrSeries : WignerMethod::FockParity;
        const auto& w = j.at("window");
        g.window = {w.at("x_min").get<double>(), w.at("x_max").get<double>(), w.at("y_min").get<double>(), w.at("y_max").get<double>()};
        g.nx = j.at("nx").get<std::size_t>();
        g.ny = j.at("ny").get<std::size_t>();
        for (const auto& row : j.at("values")) {
            for (const auto& v : row) g.values.push_back(v.get<double>());
        }
        if (g.values.size() != g.nx * g.ny) throw std::invalid_argument("grid JSON: value count does not match nx*ny");
        return g;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("grid JSON: ") + e.what());
    }
}

}  // namespace kerrcat::io
