#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "kerrcat/fock.hpp"
#include "kerrcat/io.hpp"
#include "kerrcat/ion.hpp"
#include "kerrcat/kerr.hpp"
#include "kerrcat/wigner.hpp"

namespace kerrcat::cli {

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parseDouble(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ParamError(key, "cannot parse '" + text + "' as a number");
    }
    if (!std::isfinite(v)) throw ParamError(key, "value must be finite");
    return v;
}

std::int64_t parseInt(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ParamError(key, "cannot parse '" + text + "' as an integer");
    }
    return v;
}

/// Payload files are written verbatim; relative paths go under $KERRCAT_OUTPUT_DIR when set.
std::filesystem::path resolveOut(const std::string& out) {
    std::filesystem::path p(out);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("KERRCAT_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
            p = std::filesystem::path(dir) / p;
        }
    }
    return p;
}

void writeFile(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    os << content;
    if (!os) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::string readFile(const std::string& path, const std::string& key) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ParamError(key, "cannot read '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

StateVector readStateFile(const std::string& path, const std::string& key) {
    std::istringstream is(readFile(path, key));
    try {
        return io::readState(is);
    } catch (const std::invalid_argument& e) {
        throw ParamError(key, e.what());
    }
}

/// "dir/name.ext" -> "dir/name<suffix>.ext"
std::filesystem::path withSuffix(const std::filesystem::path& p, const std::string& suffix) {
    return p.parent_path() / (p.stem().string() + suffix + p.extension().string());
}

/// Payload goes to --out when given (summary on `out`), else to `out` (summary on `err`).
struct Sink {
    std::string outPath;
    std::ostream& out;
    std::ostream& err;

    std::ostream& summary() const { return outPath.empty() ? err : out; }

    void payload(const std::string& content) const {
        if (outPath.empty()) {
            out << content;
        } else {
            writeFile(resolveOut(outPath), content);
        }
    }
};

std::size_t dimensionFor(Complex alpha, std::int64_t requested, const std::string& key = "dim") {
    if (requested < 0) throw ParamError(key, "must be >= 1");
    if (requested == 0) return defaultDimension(alpha);
    return static_cast<std::size_t>(requested);
}

StateVector kerrState(Complex alpha, const TauValue& tau, std::size_t dim) {
    if (tau.exact) return kerrEvolveExact(alpha, toRevivalFraction(*tau.exact), dim);
    return kerrEvolve({alpha, tau.value}, dim);
}

std::string topPopulations(const StateVector& s, std::size_t count) {
    const auto pops = s.populations();
    std::vector<std::size_t> order(pops.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pops[a] > pops[b]; });
    std::string out;
    for (std::size_t i = 0; i < std::min(count, order.size()); ++i) {
        out += fmt::format("  n={:<3} p={:.4f}\n", order[i], pops[order[i]]);
    }
    return out;
}

// ------------------------------------------------------------------ options

struct KerrEvolveOpts {
    std::string alpha;
    std::string tau = "0";
    std::int64_t dim = 0;
    std::int64_t truncate = -1;
    std::string out;
};

struct QuadratureOpts {
    std::string alpha;
    std::string tauMin = "0";
    std::string tauMax = "2/1 pi";
    std::int64_t steps = 100;
    std::string method = "numeric";
    std::int64_t dim = 0;
    std::string out;
};

struct WignerOpts {
    std::string alpha;
    std::string tau = "0";
    std::int64_t dim = 0;
    std::int64_t truncate = -1;
    std::string state;
    std::optional<double> xmin, xmax, ymin, ymax;
    std::int64_t nx = 101;
    std::int64_t ny = 101;
    std::string format = "csv";
    bool bothMethods = false;
    double tol = 1e-13;
    std::int64_t threads = 0;
    std::string out;
};

struct DecomposeOpts {
    std::string alpha;
    std::string tau;
    std::string out;
};

struct ScanOpts {
    std::string alphas;
    std::int64_t mMin = 0;
    std::int64_t mMax = 30;
    double threshold = 0.999;
    std::int64_t dim = 0;
    std::string out;
};

struct SynthOpts {
    std::string alpha;
    std::string tau = "0";
    std::int64_t M = 10;
    double eta = 0.02;
    std::string mode = "fixed-rabi";
    double carrierRabi = 1e6;
    double redRabi = 1e5;
    double duration = 1e-6;
    int conventionFactor = 1;
    std::string out;
    std::string table;
    std::string report;
};

struct SimulateOpts {
    std::string schedule;
    std::string target;
    bool applyGlobalPhase = false;
    std::int64_t dim = 0;
    std::string out;
    std::string report;
};

// ------------------------------------------------------------------ commands

int runKerrEvolve(const KerrEvolveOpts& o, const Sink& sink) {
    const Complex alpha = parseAlpha(o.alpha);
    const TauValue tau = parseTau(o.tau);
    StateVector s = kerrState(alpha, tau, dimensionFor(alpha, o.dim));
    if (o.truncate >= 0) {
        if (static_cast<std::size_t>(o.truncate) >= s.dim()) throw ParamError("truncate", "must be < dim=" + std::to_string(s.dim()));
        s = truncate(s, static_cast<std::size_t>(o.truncate)).first;
    }
    std::ostringstream os;
    io::writeState(os, s);
    sink.payload(os.str());
    sink.summary() << fmt::format("dim={} norm={:.4f}\ntop populations:\n", s.dim(), s.norm()) << topPopulations(s, 5);
    return 0;
}

int runQuadratures(const QuadratureOpts& o, const Sink& sink) {
    const Complex alpha = parseAlpha(o.alpha);
    const double lo = parseTau(o.tauMin, "tau-min").value;
    const double hi = parseTau(o.tauMax, "tau-max").value;
    if (o.steps < 2) throw ParamError("steps", "must be >= 2");
    if (o.method != "numeric" && o.method != "closed") throw ParamError("method", "expected 'numeric' or 'closed'");
    if (o.method == "closed" && alpha.imag() != 0.0) throw ParamError("alpha", "closed form needs a real alpha");
    const std::size_t dim = dimensionFor(alpha, o.dim);
    std::vector<io::VarianceRow> rows;
    double minX1 = 1e300, minX2 = 1e300;
    for (std::int64_t i = 0; i < o.steps; ++i) {
        const double tau = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(o.steps - 1);
        io::VarianceRow row{tau, 0.0, 0.0};
        if (o.method == "closed") {
            std::tie(row.varX1, row.varX2) = quadratureVariancesClosedForm({alpha, tau});
        } else {
            const auto m = quadratureMoments(kerrEvolve({alpha, tau}, dim));
            row.varX1 = m.varX1;
            row.varX2 = m.varX2;
        }
        minX1 = std::min(minX1, row.varX1);
        minX2 = std::min(minX2, row.varX2);
        rows.push_back(row);
    }
    sink.payload(io::varianceCsv(rows));
    sink.summary() << fmt::format("{} points, min varX1={:.4f} min varX2={:.4f} (vacuum 1)\n", rows.size(), minX1, minX2);
    return 0;
}

int runWignerGrid(const WignerOpts& o, const Sink& sink) {
    if (o.nx < 2) throw ParamError("nx", "must be >= 2");
    if (o.ny < 2) throw ParamError("ny", "must be >= 2");
    if (o.format != "csv" && o.format != "json" && o.format != "gnuplot") throw ParamError("format", "expected csv, json or gnuplot");
    if (o.threads < 0) throw ParamError("threads", "must be >= 0");

    std::optional<StateVector> state;
    Complex alpha{};
    TauValue tau;
    Window window;
    if (!o.state.empty()) {
        if (!o.alpha.empty()) throw ParamError("state", "give either --state or --alpha, not both");
        if (o.bothMethods) throw ParamError("both-methods", "needs inline --alpha/--tau, not --state");
        state = readStateFile(o.state, "state");
        if (!state->isNormalized(1e-9)) {
            throw ParamError("state", fmt::format("state is not normalized (norm={:.12g}); refusing", state->norm()));
        }
        double meanN = 0.0;
        const auto pops = state->populations();
        for (std::size_t n = 0; n < pops.size(); ++n) meanN += static_cast<double>(n) * pops[n];
        window = defaultWindow(std::sqrt(meanN));
    } else {
        if (o.alpha.empty()) throw ParamError("alpha", "required unless --state is given");
        alpha = parseAlpha(o.alpha);
        tau = parseTau(o.tau);
        StateVector s = kerrState(alpha, tau, dimensionFor(alpha, o.dim));
        if (o.truncate >= 0) {
            if (o.bothMethods) throw ParamError("both-methods", "cannot compare a truncated state with the untruncated series");
            if (static_cast<std::size_t>(o.truncate) >= s.dim()) throw ParamError("truncate", "must be < dim=" + std::to_string(s.dim()));
            s = truncate(s, static_cast<std::size_t>(o.truncate)).first;
        }
        state = std::move(s);
        window = defaultWindow(alpha);
    }
    if (o.xmin) window.xMin = *o.xmin;
    if (o.xmax) window.xMax = *o.xmax;
    if (o.ymin) window.yMin = *o.ymin;
    if (o.ymax) window.yMax = *o.ymax;
    if (!(window.xMax > window.xMin) || !(window.yMax > window.yMin)) throw ParamError("xmin", "degenerate window (zero area)");

    const auto nx = static_cast<std::size_t>(o.nx);
    const auto ny = static_cast<std::size_t>(o.ny);
    const auto threads = static_cast<unsigned>(o.threads);
    const WignerGrid grid = wignerGrid(*state, window, nx, ny, threads);
    auto render = [&](const WignerGrid& g) {
        if (o.format == "json") return io::gridJson(g);
        if (o.format == "gnuplot") return io::gridGnuplot(g);
        return io::gridCsv(g);
    };
    const auto summary = io::summarize(grid);

    if (o.bothMethods) {
        if (o.out.empty()) throw ParamError("out", "required with --both-methods (two grids are written)");
        const WignerGrid series = wignerGridSeries({alpha, tau.value}, window, nx, ny, o.tol, threads);
        const auto main = resolveOut(o.out);
        writeFile(main, render(grid));
        writeFile(withSuffix(main, ".series"), render(series));
        sink.summary() << fmt::format("integral={:.4f} negativity_volume={:.4g}\nmax |series - fock| = {:.4g}\n", summary.integral, summary.negativityVolume, maxAbsDifference(grid, series));
        return 0;
    }
    sink.payload(render(grid));
    sink.summary() << fmt::format("integral={:.4f} negativity_volume={:.4g} min={:.4g} max={:.4g}\n", summary.integral, summary.negativityVolume, *std::min_element(grid.values.begin(), grid.values.end()), *std::max_element(grid.values.begin(), grid.values.end()));
    return 0;
}

int runDecompose(const DecomposeOpts& o, const Sink& sink) {
    const Complex alpha = parseAlpha(o.alpha);
    if (o.tau.empty()) throw ParamError("tau", "required");
    const TauValue tau = parseTau(o.tau);
    if (!tau.exact) throw ParamError("tau", "decompose needs the exact form 'p/q pi'");
    const RevivalFraction f = toRevivalFraction(*tau.exact);
    const CoherentSuperposition sup = revivalDecompose(alpha, f.pNum, f.q);
    const std::size_t dim = defaultDimension(alpha);
    const double fid = fidelity(reconstructSuperposition(sup, dim).state, kerrEvolveExact(alpha, f, dim));
    sink.payload(io::superpositionCsv(sup));
    sink.summary() << fmt::format("{} terms, |alpha|={:.4f}, reconstruction fidelity 1 - {:.3g}\n", sup.terms.size(), sup.alphaMagnitude, 1.0 - fid);
    return 0;
}

int runTruncationScan(const ScanOpts& o, const Sink& sink) {
    if (o.alphas.empty()) throw ParamError("alphas", "empty alpha list");
    std::vector<double> alphas;
    std::stringstream ss(o.alphas);
    for (std::string item; std::getline(ss, item, ',');) {
        if (trim(item).empty()) continue;
        alphas.push_back(parseDouble(item, "alphas"));
    }
    if (alphas.empty()) throw ParamError("alphas", "empty alpha list");
    if (o.mMin < 0 || o.mMax < o.mMin) throw ParamError("m-max", "empty M range");
    if (o.dim < 0) throw ParamError("dim", "must be >= 1");

    std::string csv = "alpha,M,keptProbability,fidelityToFull\n";
    std::string notes;
    for (const double a : alphas) {
        std::size_t dim = o.dim > 0 ? static_cast<std::size_t>(o.dim) : std::max<std::size_t>(defaultDimension(a), static_cast<std::size_t>(o.mMax) + 1);
        if (static_cast<std::size_t>(o.mMax) >= dim) throw ParamError("dim", "must exceed m-max");
        const StateVector source = coherent(a, dim);
        std::optional<std::int64_t> first;
        for (std::int64_t M = o.mMin; M <= o.mMax; ++M) {
            const auto report = truncate(source, static_cast<std::size_t>(M)).second;
            csv += io::num(a) + "," + std::to_string(M) + "," + io::num(report.keptProbability) + "," + io::num(report.fidelityToFull) + "\n";
            if (!first && report.keptProbability > o.threshold) first = M;
        }
        notes += first ? fmt::format("alpha={:.4g}: smallest M with keptProbability > {} is {} ({} pulses)\n", a, o.threshold, *first, 2 * *first)
                       : fmt::format("alpha={:.4g}: threshold {} not reached for M <= {}\n", a, o.threshold, o.mMax);
    }
    sink.payload(csv);
    sink.summary() << notes;
    return 0;
}

ScheduleMode parseMode(const std::string& m) {
    if (m == "fixed-rabi") return ScheduleMode::FixedRabi;
    if (m == "fixed-duration") return ScheduleMode::FixedDuration;
    throw ParamError("mode", "expected fixed-rabi or fixed-duration");
}

std::string reportJson(double fid, std::size_t pulseCount, double leakage, Complex globalPhase, std::size_t M) {
    nlohmann::json j{
        {"fidelity", fid},
        {"pulseCount", pulseCount},
        {"excitedLeakage", leakage},
        {"globalPhase", {globalPhase.real(), globalPhase.imag()}},
        {"M", M},
    };
    return j.dump(2) + "\n";
}

int runSynth(const SynthOpts& o, const Sink& sink) {
    const Complex alpha = parseAlpha(o.alpha);
    const TauValue tau = parseTau(o.tau);
    if (o.M < 0) throw ParamError("M", "must be >= 0");
    if (!(o.eta > 0.0)) throw ParamError("eta", "must be positive");
    if (!(o.carrierRabi > 0.0)) throw ParamError("carrier-rabi", "must be positive");
    if (!(o.redRabi > 0.0)) throw ParamError("red-rabi", "must be positive");
    if (!(o.duration > 0.0)) throw ParamError("duration", "must be positive");
    PhysicalParameters params;
    params.mode = parseMode(o.mode);
    params.carrierRabiHz = o.carrierRabi;
    params.redRabiHz = o.redRabi;
    params.fixedDurationS = o.duration;
    params.eta = o.eta;
    params.conventionFactor = o.conventionFactor;

    const auto M = static_cast<std::size_t>(o.M);
    const StateVector target = kerrState(alpha, tau, M + 1);
    SynthesisResult synth;
    try {
        synth = synthesize(target, o.eta);
    } catch (const std::exception& e) {
        throw std::runtime_error(fmt::format("synthesis failed for alpha={}, tau={}, M={}: {}", o.alpha, o.tau, o.M, e.what()));
    }
    const PhysicalSchedule sched = toPhysical(synth.pulses, params, synth.globalPhase);
    const JointState final = simulateSchedule(sched, JointState::groundState(synth.M + 6));
    const double fid = preparationFidelity(final, target);
    const double leakage = final.excitedPopulation();

    const std::string schedule = io::scheduleToJson(sched).dump(2) + "\n";
    const std::string report = reportJson(fid, sched.pulses.size(), leakage, synth.globalPhase, synth.M);
    if (o.out.empty()) {
        sink.out << schedule;
    } else {
        const auto main = resolveOut(o.out);
        writeFile(main, schedule);
        writeFile(o.table.empty() ? withSuffix(main, ".table").replace_extension(".txt") : resolveOut(o.table), io::scheduleTable(sched));
        writeFile(o.report.empty() ? withSuffix(main, ".report") : resolveOut(o.report), report);
    }
    sink.summary() << fmt::format("{} pulses, fidelity 1 - {:.3g}, excited leakage {:.3g}, global phase ({:.4f} {:+.4f}i)\n", sched.pulses.size(), 1.0 - fid, leakage, synth.globalPhase.real(), synth.globalPhase.imag());
    return 0;
}

int runSimulate(const SimulateOpts& o, const Sink& sink) {
    if (o.schedule.empty()) throw ParamError("schedule", "required");
    PhysicalSchedule sched;
    try {
        sched = io::scheduleFromJson(nlohmann::json::parse(readFile(o.schedule, "schedule")));
    } catch (const std::exception& e) {
        throw ParamError("schedule", e.what());
    }
    if (o.dim < 0) throw ParamError("dim", "must be >= 1");
    const std::size_t dim = o.dim > 0 ? static_cast<std::size_t>(o.dim) : requiredDimension(sched.pulses) + 4;
    if (dim < requiredDimension(sched.pulses)) throw ParamError("dim", "too small for schedule, need >= " + std::to_string(requiredDimension(sched.pulses)));
    const JointState initial = JointState::groundState(dim, o.applyGlobalPhase ? sched.globalPhase : Complex{1.0, 0.0});
    const JointState final = simulateSchedule(sched, initial);
    const StateVector motional = final.groundMotional();

    std::ostringstream os;
    io::writeState(os, motional);
    sink.payload(os.str());
    auto& log = sink.summary();
    log << fmt::format("{} pulses, final norm {:.4f}, excited leakage {:.3g}\n", sched.pulses.size(), std::sqrt(final.normSquared()), final.excitedPopulation());
    if (!o.target.empty()) {
        const StateVector target = readStateFile(o.target, "target");
        const double fid = preparationFidelity(final, target);
        log << fmt::format("fidelity to target 1 - {:.3g}\n", 1.0 - fid);
        if (!o.report.empty()) {
            std::size_t top = 0;
            for (const auto& p : sched.pulses) top = std::max(top, p.index);
            writeFile(resolveOut(o.report), reportJson(fid, sched.pulses.size(), final.excitedPopulation(), sched.globalPhase, top));
        }
    }
    return 0;
}

template <class T>
CLI::Option* scalar(CLI::App* app, const std::string& name, T& value, const std::string& help) {
    return app->add_option(name, value, help)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

/// Insert config-file values as `--key=value` right after the subcommand, so
/// later command-line flags win.
std::vector<std::string> applyConfig(const std::vector<std::string>& args, CLI::App& app) {
    std::string configPath;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            configPath = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            configPath = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (configPath.empty()) return rest;
    const auto config = parseConfig(readFile(configPath, "config"));
    std::size_t subIndex = 1;
    while (subIndex < rest.size() && rest[subIndex].rfind('-', 0) == 0) ++subIndex;
    if (subIndex >= rest.size()) return rest;
    CLI::App* sub = nullptr;
    try {
        sub = app.get_subcommand(rest[subIndex]);
    } catch (const CLI::OptionNotFound&) {
        return rest;
    }
    std::vector<std::string> injected;
    for (const auto& [key, value] : config) {
        const CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr) continue;
        if (opt->get_expected_min() == 0) {
            if (value == "true" || value == "1" || value == "yes") injected.push_back("--" + key);
        } else {
            injected.push_back("--" + key + "=" + value);
        }
    }
    rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(subIndex) + 1, injected.begin(), injected.end());
    return rest;
}

}  // namespace

TauValue parseTau(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    if (t.empty()) throw ParamError(key, "empty value");
    TauValue out;
    const auto piPos = t.find("pi");
    if (piPos == std::string::npos) {
        out.value = parseDouble(t, key);
        return out;
    }
    if (piPos + 2 != t.size()) throw ParamError(key, "expected 'p/q pi', got '" + text + "'");
    std::string frac = trim(t.substr(0, piPos));
    if (!frac.empty() && frac.back() == '*') frac = trim(frac.substr(0, frac.size() - 1));
    PiFraction f{1, 1};
    if (!frac.empty()) {
        const auto slash = frac.find('/');
        if (slash == std::string::npos) {
            f.num = parseInt(frac, key);
        } else {
            f.num = parseInt(frac.substr(0, slash), key);
            f.den = parseInt(frac.substr(slash + 1), key);
        }
    }
    if (f.den <= 0) throw ParamError(key, "denominator must be positive");
    out.exact = f;
    out.value = f.value();
    return out;
}

Complex parseAlpha(const std::string& text, const std::string& key) {
    if (trim(text).empty()) throw ParamError(key, "required");
    const auto comma = text.find(',');
    if (comma == std::string::npos) return {parseDouble(text, key), 0.0};
    return {parseDouble(text.substr(0, comma), key), parseDouble(text.substr(comma + 1), key)};
}

std::map<std::string, std::string> parseConfig(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream is(text);
    std::size_t lineNo = 0;
    for (std::string line; std::getline(is, line);) {
        ++lineNo;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParamError("config", fmt::format("line {}: expected key = value", lineNo));
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.empty()) throw ParamError("config", fmt::format("line {}: empty key", lineNo));
        out[key] = value;
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kerr-state, Wigner-function and trapped-ion pulse synthesis toolkit", "kerrcat"};
    app.require_subcommand(1);
    std::string configHelp;
    app.add_option("--config", configHelp, "flat key = value file; command-line flags take precedence");

    std::string outPath;
    std::function<int(const Sink&)> action;

    KerrEvolveOpts ke;
    auto* keCmd = app.add_subcommand("kerr-evolve", "Kerr-evolved coherent state as state JSON");
    scalar(keCmd, "--alpha", ke.alpha, "coherent amplitude: re or re,im")->required();
    scalar(keCmd, "--tau", ke.tau, "evolution parameter: float or 'p/q pi'");
    scalar(keCmd, "--dim", ke.dim, "Fock dimension (0: ceil(|a|^2 + 8|a| + 20))");
    scalar(keCmd, "--truncate", ke.truncate, "keep levels 0..M and renormalize");
    scalar(keCmd, "--out", ke.out, "output path (default stdout)");
    keCmd->callback([&] { action = [&](const Sink& s) { return runKerrEvolve(ke, s); }; outPath = ke.out; });

    QuadratureOpts qo;
    auto* qCmd = app.add_subcommand("quadratures", "quadrature variance curve as CSV (tau,varX1,varX2)");
    scalar(qCmd, "--alpha", qo.alpha, "coherent amplitude")->required();
    scalar(qCmd, "--tau-min", qo.tauMin, "first tau");
    scalar(qCmd, "--tau-max", qo.tauMax, "last tau");
    scalar(qCmd, "--steps", qo.steps, "number of tau points");
    scalar(qCmd, "--method", qo.method, "numeric or closed");
    scalar(qCmd, "--dim", qo.dim, "Fock dimension for the numeric method");
    scalar(qCmd, "--out", qo.out, "output path (default stdout)");
    qCmd->callback([&] { action = [&](const Sink& s) { return runQuadratures(qo, s); }; outPath = qo.out; });

    WignerOpts wo;
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    auto* wCmd = app.add_subcommand("wigner-grid", "Wigner function on a rectangular grid");
    scalar(wCmd, "--alpha", wo.alpha, "coherent amplitude");
    scalar(wCmd, "--tau", wo.tau, "evolution parameter: float or 'p/q pi'");
    scalar(wCmd, "--dim", wo.dim, "Fock dimension");
    scalar(wCmd, "--truncate", wo.truncate, "keep levels 0..M and renormalize");
    scalar(wCmd, "--state", wo.state, "state JSON file instead of --alpha/--tau");
    auto* xminOpt = scalar(wCmd, "--xmin", xmin, "window");
    auto* xmaxOpt = scalar(wCmd, "--xmax", xmax, "window");
    auto* yminOpt = scalar(wCmd, "--ymin", ymin, "window");
    auto* ymaxOpt = scalar(wCmd, "--ymax", ymax, "window");
    scalar(wCmd, "--nx", wo.nx, "points along Re(gamma)");
    scalar(wCmd, "--ny", wo.ny, "points along Im(gamma)");
    scalar(wCmd, "--format", wo.format, "csv, json or gnuplot");
    wCmd->add_flag("--both-methods", wo.bothMethods, "also evaluate the Kerr double series and report the difference");
    scalar(wCmd, "--tol", wo.tol, "series tolerance");
    scalar(wCmd, "--threads", wo.threads, "worker threads (0: hardware)");
    scalar(wCmd, "--out", wo.out, "output path (default stdout)");
    wCmd->callback([&] {
        if (xminOpt->count() > 0) wo.xmin = xmin;
        if (xmaxOpt->count() > 0) wo.xmax = xmax;
        if (yminOpt->count() > 0) wo.ymin = ymin;
        if (ymaxOpt->count() > 0) wo.ymax = ymax;
        action = [&](const Sink& s) { return runWignerGrid(wo, s); };
        outPath = wo.out;
    });

    DecomposeOpts dOpts;
    auto* dCmd = app.add_subcommand("decompose", "fractional-revival superposition as CSV (angle,coeff_re,coeff_im)");
    scalar(dCmd, "--alpha", dOpts.alpha, "coherent amplitude")->required();
    scalar(dCmd, "--tau", dOpts.tau, "exact 'p/q pi'")->required();
    scalar(dCmd, "--out", dOpts.out, "output path (default stdout)");
    dCmd->callback([&] { action = [&](const Sink& s) { return runDecompose(dOpts, s); }; outPath = dOpts.out; });

    ScanOpts so;
    auto* sCmd = app.add_subcommand("truncation-scan", "kept probability versus cutoff M as CSV");
    scalar(sCmd, "--alphas", so.alphas, "comma-separated real amplitudes")->required();
    scalar(sCmd, "--m-min", so.mMin, "first cutoff");
    scalar(sCmd, "--m-max", so.mMax, "last cutoff");
    scalar(sCmd, "--threshold", so.threshold, "kept probability reported in the summary");
    scalar(sCmd, "--dim", so.dim, "source dimension");
    scalar(sCmd, "--out", so.out, "output path (default stdout)");
    sCmd->callback([&] { action = [&](const Sink& s) { return runTruncationScan(so, s); }; outPath = so.out; });

    SynthOpts sy;
    auto* syCmd = app.add_subcommand("synth", "synthesize and verify the pulse schedule for a truncated Kerr state");
    scalar(syCmd, "--alpha", sy.alpha, "coherent amplitude")->required();
    scalar(syCmd, "--tau", sy.tau, "evolution parameter: float or 'p/q pi'");
    scalar(syCmd, "--M", sy.M, "highest Fock level of the target");
    scalar(syCmd, "--eta", sy.eta, "Lamb-Dicke parameter");
    scalar(syCmd, "--mode", sy.mode, "fixed-rabi or fixed-duration");
    scalar(syCmd, "--carrier-rabi", sy.carrierRabi, "carrier Rabi rate [1/s]");
    scalar(syCmd, "--red-rabi", sy.redRabi, "red-sideband Rabi rate [1/s]");
    scalar(syCmd, "--duration", sy.duration, "pulse duration in fixed-duration mode [s]");
    scalar(syCmd, "--convention-factor", sy.conventionFactor, "1: area = rabi*t, 2: area = rabi*t/2")->check(CLI::IsMember({1, 2}));
    scalar(syCmd, "--out", sy.out, "schedule JSON path (default stdout)");
    scalar(syCmd, "--table", sy.table, "text table path (default <out>.table.txt)");
    scalar(syCmd, "--report", sy.report, "report JSON path (default <out>.report.json)");
    syCmd->callback([&] { action = [&](const Sink& s) { return runSynth(sy, s); }; outPath = sy.out; });

    SimulateOpts si;
    auto* siCmd = app.add_subcommand("simulate", "forward-simulate a schedule JSON from |0,g>");
    scalar(siCmd, "--schedule", si.schedule, "schedule JSON")->required();
    scalar(siCmd, "--target", si.target, "state JSON to compare against");
    siCmd->add_flag("--apply-global-phase", si.applyGlobalPhase, "start from the recorded global phase times |0,g>");
    scalar(siCmd, "--dim", si.dim, "motional dimension");
    scalar(siCmd, "--out", si.out, "final |g>-manifold state JSON (default stdout)");
    scalar(siCmd, "--report", si.report, "report JSON path (needs --target)");
    siCmd->callback([&] { action = [&](const Sink& s) { return runSimulate(si, s); }; outPath = si.out; });

    try {
        std::vector<std::string> effective = applyConfig(args, app);
        if (effective.empty()) effective.emplace_back("kerrcat");
        std::vector<std::string> reversed(effective.rbegin(), effective.rend() - 1);
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        return action(Sink{outPath, out, err});
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace kerrcat::cli
