// Copyright 2026 The focksim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Config-driven experiment runner behind the focksim tool.
//
// A config is a flat text file of `key = value` lines with `#` comments. The
// keys `experiment`, `seed` and `output` are reserved; everything else is an
// experiment parameter checked against that experiment's schema. Each run
// writes one output file plus `<output>.meta` listing every resolved
// parameter.

#ifndef FOCKSIM_EXPERIMENTS_HPP
#define FOCKSIM_EXPERIMENTS_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "focksim/circuit.hpp"
#include "focksim/entanglement.hpp"
#include "focksim/kerr_probe.hpp"
#include "focksim/pdc_source.hpp"
#include "focksim/rng.hpp"
#include "focksim/state_io.hpp"
#include "focksim/symmetry_detector.hpp"

namespace focksim::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Bad config: exit status 2.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numeric or capacity failure during a run: exit status 3.
class NumericError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ParamKind { number, integer, text };

inline const char* kind_name(ParamKind k) {
    switch (k) {
        case ParamKind::number: return "number";
        case ParamKind::integer: return "integer";
        case ParamKind::text: return "text";
    }
    return "?";
}

struct ParamSpec {
    std::string name;
    ParamKind kind;
    std::optional<std::string> default_value;  // nullopt: required unless `optional`
    std::string help;
    bool optional = false;
};

struct ExperimentConfig {
    std::string experiment;
    std::map<std::string, std::string> parameters;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::optional<double> to_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline std::optional<long long> to_integer(const std::string& s) {
    long long v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::uint64_t to_seed(const std::string& s, const std::string& where) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw ConfigError(where + "seed must be an unsigned 64-bit integer, got '" + s + "'");
    return v;
}

inline void assign(ExperimentConfig& c, const std::string& key, const std::string& value, const std::string& where, bool allow_repeat) {
    if (key.empty()) throw ConfigError(where + "missing key before '='");
    if (value.empty()) throw ConfigError(where + "missing value for '" + key + "'");
    if (key == "experiment") {
        c.experiment = value;
    } else if (key == "seed") {
        c.seed = to_seed(value, where);
    } else if (key == "output") {
        c.output = value;
    } else {
        if (!allow_repeat && c.parameters.count(key)) throw ConfigError(where + "duplicate parameter '" + key + "'");
        c.parameters[key] = value;
    }
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig c;
    std::string line;
    int line_no = 0;
    std::map<std::string, int> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value', got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        if (auto [it, fresh] = seen.emplace(key, line_no); !fresh)
            throw ConfigError(where + "duplicate key '" + key + "' (first set on line " + std::to_string(it->second) + ")");
        detail::assign(c, key, detail::trim(line.substr(eq + 1)), where, false);
    }
    return c;
}

inline ExperimentConfig parse_config(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    try {
        return parse_config(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

/// Applies one `key=value` command-line override; later values win.
inline void apply_override(ExperimentConfig& c, const std::string& arg) {
    const auto eq = arg.find('=');
    const std::string where = "override '" + arg + "': ";
    if (eq == std::string::npos) throw ConfigError(where + "expected key=value");
    detail::assign(c, detail::trim(arg.substr(0, eq)), detail::trim(arg.substr(eq + 1)), where, true);
}

/// Parameters after defaults are filled in and types checked.
class Params {
   public:
    explicit Params(std::map<std::string, std::string> values) : values_(std::move(values)) {}

    bool has(const std::string& name) const { return values_.count(name) != 0; }
    const std::map<std::string, std::string>& values() const { return values_; }

    double number(const std::string& name) const { return *detail::to_number(at(name)); }
    long long integer(const std::string& name) const { return *detail::to_integer(at(name)); }
    const std::string& text(const std::string& name) const { return at(name); }

   private:
    const std::string& at(const std::string& name) const {
        const auto it = values_.find(name);
        if (it == values_.end()) throw std::logic_error("parameter '" + name + "' was not resolved");
        return it->second;
    }
    std::map<std::string, std::string> values_;
};

struct ResolvedConfig;

struct ExperimentSpec {
    std::string name;
    std::string summary;
    std::vector<ParamSpec> params;
    std::string default_output;
    std::function<bool(const Params&)> sampled;  // true when the run needs a seed
    std::function<void(const Params&)> check;    // semantic checks, throws ConfigError
    std::function<std::string(const ResolvedConfig&)> run;
};

struct ResolvedConfig {
    const ExperimentSpec* spec;
    Params params;
    std::optional<std::uint64_t> seed;
    std::string output;
};

namespace detail {

using focksim::format_real;

inline std::string csv_real(double v) {
    if (std::isnan(v)) return "nan";
    return format_real(v);
}

inline void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

inline void require_positive(const Params& p, const std::string& name) {
    require(p.number(name) > 0, "parameter '" + name + "' must be > 0, got " + p.text(name));
}

inline CoefficientPair start_pair(const Params& p) {
    return CoefficientPair{p.number("m0"), p.number("n0")}.normalized();
}

inline void check_pair(const Params& p) {
    require(p.number("m0") != 0 || p.number("n0") != 0, "parameters 'm0' and 'n0' cannot both be 0");
}

/// Runs `body`, converting library failures into NumericError tagged with the
/// parameter that drives them.
template <class F>
auto numeric(const std::string& param, const Params& p, F&& body) {
    try {
        return body();
    } catch (const CapacityError& e) {
        throw NumericError("parameter '" + param + "' = " + p.text(param) + ": " + e.what());
    } catch (const InvalidInput& e) {
        throw NumericError("parameter '" + param + "' = " + p.text(param) + ": " + e.what());
    }
}

inline ParamSpec alpha_param() { return {"alpha", ParamKind::number, "1000", "probe amplitude"}; }
inline ParamSpec theta_param() { return {"theta", ParamKind::number, "0.1", "Kerr phase per photon"}; }

// ---- cascade --------------------------------------------------------------

inline std::string run_cascade(const ResolvedConfig& c) {
    const Params& p = c.params;
    const CoefficientPair p0 = start_pair(p);
    const long long k = p.integer("k");
    if (k > kMaxCascadeSteps)
        throw NumericError("parameter 'k' = " + p.text("k") + ": cascade length is limited to " + std::to_string(kMaxCascadeSteps) +
                           " (A^k leaves 64-bit range)");
    const CascadeRun run = numeric("k", p, [&] { return cascade_simulate(p0, static_cast<int>(k), p.number("alpha"), p.number("theta")); });
    const FockKet psi3 = psi_n(3);
    std::ostringstream out;
    out << "k,m_k,n_k,ratio,C_k,step_success_prob,cumulative_prob,fidelity_psi3\n";
    double cumulative = 1.0;
    for (int j = 0; j <= k; ++j) {
        const CascadeClosedForm cf = cascade_closed_form(p0, j);
        const double step = j == 0 ? 1.0 : run.step_probabilities[j - 1];
        cumulative *= step;
        const double f = fidelity(twin_beam_state(run.pairs[j].normalized()), psi3);
        out << j << ',' << csv_real(cf.m_k) << ',' << csv_real(cf.n_k) << ',' << csv_real(cf.ratio) << ',' << csv_real(cf.c_k) << ','
            << csv_real(step) << ',' << csv_real(cumulative) << ',' << csv_real(f) << '\n';
    }
    return out.str();
}

// ---- symmetry-detect -------------------------------------------------------

inline std::string run_symmetry_detect(const ResolvedConfig& c) {
    const Params& p = c.params;
    const double alpha = p.number("alpha"), theta = p.number("theta");
    const FockKet input = twin_beam_state(start_pair(p));
    std::map<Branch, FockKet> expected;
    for (Branch b : {Branch::symmetric, Branch::asymmetric})
        if (auto o = detect(input, alpha, theta, Forced{b})) expected.emplace(b, o->state);

    std::ostringstream out;
    out << "row,branch,x,branch_probability,phi,fidelity\n";
    const long long samples = p.integer("samples");
    if (samples == 0) {
        // Conditioning at each peak centre, compared with the ideal branch state.
        const ProbeTaggedState probe = detector_probe_state(input, alpha, theta);
        const double p_sym = homodyne_mass_above(probe, symmetry_threshold(alpha, theta)) / probe.norm_squared();
        int row = 0;
        for (Branch b : {Branch::symmetric, Branch::asymmetric}) {
            const double x = b == Branch::symmetric ? 2 * alpha : 2 * alpha * std::cos(theta);
            const double prob = b == Branch::symmetric ? p_sym : 1 - p_sym;
            double phi = 0, f = std::nan("");
            if (auto cond = homodyne_condition(probe, x); cond && expected.count(b)) {
                FockKet state = *cond;
                if (b == Branch::asymmetric) {
                    phi = asymmetric_phase(alpha, theta, x);
                    state = apply_phase_correction(state, phi, "b");
                }
                f = fidelity(state, expected.at(b));
            }
            out << row++ << ',' << branch_name(b) << ',' << csv_real(x) << ',' << csv_real(prob) << ',' << csv_real(phi) << ','
                << csv_real(f) << '\n';
        }
        return out.str();
    }
    CounterRng rng(*c.seed);
    for (long long i = 0; i < samples; ++i) {
        const DetectorOutcome o = detect_sampled(input, alpha, theta, rng);
        const auto it = expected.find(o.branch);
        const double f = it == expected.end() ? std::nan("") : fidelity(o.state, it->second);
        out << i << ',' << branch_name(o.branch) << ',' << csv_real(*o.measured_x) << ',' << csv_real(o.probability) << ','
            << csv_real(o.phi) << ',' << csv_real(f) << '\n';
    }
    return out.str();
}

// ---- psi-theta ---------------------------------------------------------------

inline std::string run_psi_theta(const ResolvedConfig& c) {
    const long long grid = c.params.integer("grid");
    std::ostringstream out;
    out << "theta,postselect_prob,ghz_weight,w_pair_weight,fidelity_vs_reference\n";
    for (long long j = 0; j < grid; ++j) {
        const double theta = grid == 1 ? 0.0 : (std::numbers::pi / 2) * static_cast<double>(j) / static_cast<double>(grid - 1);
        const SchemeResult r = build_psi_theta(theta);
        out << csv_real(theta) << ',' << csv_real(r.postselect_probability) << ',' << csv_real(ghz_weight(r.state)) << ','
            << csv_real(w_pair_weight(r.state)) << ',' << csv_real(fidelity(r.state, psi_theta_reference(theta))) << '\n';
    }
    return out.str();
}

// ---- ghz-circuit -------------------------------------------------------------

inline std::string run_ghz_circuit(const ResolvedConfig& c) {
    const Params& p = c.params;
    const double alpha = p.number("alpha"), theta = p.number("theta");
    const GhzDecodeTable table = decode_table(alpha, theta);
    const ProbeTaggedState tagged = ghz_probe_state(build_psi_theta(std::numbers::pi / 2).state, alpha, theta);
    const FockKet target = ghz6(ghz_output_modes());

    std::array<double, kGhzIntervals> prob{}, fid{};
    const long long samples = p.integer("samples");
    if (samples == 0) {
        prob = interval_probabilities(tagged, table);
        for (const auto& iv : table.intervals) {
            const auto o = ghz_decode(tagged, table, 2 * alpha * std::cos(iv.k * theta));
            fid[iv.index] = o ? fidelity(o->corrected, target) : std::nan("");
        }
    } else {
        std::array<long long, kGhzIntervals> count{};
        CounterRng rng(*c.seed);
        for (long long i = 0; i < samples; ++i) {
            const GhzOutcome o = ghz_decode_sampled(tagged, table, rng);
            ++count[o.interval];
            fid[o.interval] += fidelity(o.corrected, target);
        }
        for (int i = 0; i < kGhzIntervals; ++i) {
            prob[i] = static_cast<double>(count[i]) / static_cast<double>(samples);
            fid[i] = count[i] ? fid[i] / static_cast<double>(count[i]) : std::nan("");
        }
    }
    std::ostringstream out;
    out << "interval,k,x_lo,x_hi,probability,fidelity_after_correction\n";
    for (const auto& iv : table.intervals)
        out << iv.index << ',' << iv.k << ',' << csv_real(iv.x_lo) << ',' << csv_real(iv.x_hi) << ',' << csv_real(prob[iv.index]) << ','
            << csv_real(fid[iv.index]) << '\n';
    return out.str();
}

// ---- pdc-weights -------------------------------------------------------------

inline constexpr long long kMaxSeriesOrder = 100000;
inline constexpr double kAutoTruncation = 1e-17;

inline std::string run_pdc_weights(const ResolvedConfig& c) {
    const Params& p = c.params;
    const double tau = p.number("tau");
    long long n_max = 0;
    if (p.has("n_max")) {
        n_max = p.integer("n_max");
        if (n_max > kMaxSeriesOrder)
            throw NumericError("parameter 'n_max' = " + p.text("n_max") + ": series order is limited to " + std::to_string(kMaxSeriesOrder));
    } else {
        // Smallest order whose tail bound drops below kAutoTruncation.
        while (SqueezedExpansion{tau, static_cast<int>(n_max), {}}.truncation_bound() >= kAutoTruncation) {
            if (++n_max > kMaxSeriesOrder)
                throw NumericError("parameter 'tau' = " + p.text("tau") + ": series needs more than " + std::to_string(kMaxSeriesOrder) +
                                   " terms; set n_max explicitly");
        }
    }
    const SqueezedExpansion e = squeezed_weights(tau, static_cast<int>(n_max));
    std::ostringstream out;
    out << "n,amplitude,probability\n";
    for (std::size_t n = 0; n < e.weights.size(); ++n)
        out << n << ',' << csv_real(e.weights[n]) << ',' << csv_real(e.weights[n] * e.weights[n]) << '\n';
    return out.str();
}

// ---- mixture -----------------------------------------------------------------

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) out.push_back(trim(item));
    return out;
}

inline std::string run_mixture(const ResolvedConfig& c) {
    std::ostringstream out;
    out << "k,a3,a21,a111\n";
    for (const auto& item : split_list(c.params.text("k"))) {
        const double k = *to_number(item);
        std::array<double, 3> a{};
        try {
            a = six_photon_mixture(k).amplitudes();
        } catch (const InvalidInput& e) {
            throw NumericError("parameter 'k' = " + item + ": " + e.what());
        }
        out << csv_real(k) << ',' << csv_real(a[0]) << ',' << csv_real(a[1]) << ',' << csv_real(a[2]) << '\n';
    }
    return out.str();
}

// ---- homodyne-sweep ------------------------------------------------------------

inline std::string run_homodyne_sweep(const ResolvedConfig& c) {
    const Params& p = c.params;
    const double alpha = p.number("alpha"), theta = p.number("theta");
    const bool ghz = p.text("source") == "ghz";
    const long long points = p.integer("points");

    std::optional<ProbeTaggedState> tagged;
    std::optional<GhzDecodeTable> table;
    std::map<Branch, FockKet> expected;
    FockKet target;
    if (ghz) {
        table = decode_table(alpha, theta);
        tagged = ghz_probe_state(build_psi_theta(std::numbers::pi / 2).state, alpha, theta);
        target = ghz6(ghz_output_modes());
    } else {
        const FockKet input = twin_beam_state(start_pair(p));
        tagged = detector_probe_state(input, alpha, theta);
        for (Branch b : {Branch::symmetric, Branch::asymmetric})
            if (auto o = detect(input, alpha, theta, Forced{b})) expected.emplace(b, o->state);
    }
    const double lowest = ghz ? 2 * alpha * std::cos(12 * theta) : 2 * alpha * std::cos(theta);
    const double x_min = p.has("x_min") ? p.number("x_min") : lowest - 6;
    const double x_max = p.has("x_max") ? p.number("x_max") : 2 * alpha + 6;

    std::ostringstream out;
    out << "x,pdf,interval_index,fidelity_after_correction\n";
    for (long long i = 0; i < points; ++i) {
        const double x = points == 1 ? x_min : x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(points - 1);
        int interval = 0;
        double f = std::nan("");
        if (ghz) {
            interval = table->decode(x).index;
            if (auto o = ghz_decode(*tagged, *table, x)) f = fidelity(o->corrected, target);
        } else {
            const Branch b = x > symmetry_threshold(alpha, theta) ? Branch::symmetric : Branch::asymmetric;
            interval = b == Branch::symmetric ? 1 : 0;
            if (auto cond = homodyne_condition(*tagged, x); cond && expected.count(b)) {
                const FockKet state = b == Branch::asymmetric ? apply_phase_correction(*cond, asymmetric_phase(alpha, theta, x), "b") : *cond;
                f = fidelity(state, expected.at(b));
            }
        }
        out << csv_real(x) << ',' << csv_real(homodyne_pdf(*tagged, x)) << ',' << interval << ',' << csv_real(f) << '\n';
    }
    return out.str();
}

// ---- circuit -----------------------------------------------------------------

inline std::string read_file(const std::string& path, const std::string& param) {
    std::ifstream in(path);
    if (!in) throw ConfigError("parameter '" + param + "': cannot open '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// `psi0`..`psi5` name built-in singlet states; anything else is a state file.
inline std::optional<int> builtin_psi(const std::string& name) {
    if (name.size() < 4 || name.compare(0, 3, "psi") != 0) return std::nullopt;
    const auto n = to_integer(name.substr(3));
    if (!n) return std::nullopt;
    return static_cast<int>(*n);
}

inline FockKet load_input_state(const Params& p) {
    const std::string& name = p.text("input");
    if (auto n = builtin_psi(name)) return numeric("input", p, [&] { return psi_n(*n); });
    try {
        return read_state(read_file(name, "input"));
    } catch (const InvalidInput& e) {
        throw ConfigError("parameter 'input' (" + name + "): " + e.what());
    }
}

inline Circuit load_circuit(const Params& p) {
    try {
        return parse_circuit(read_file(p.text("circuit"), "circuit"));
    } catch (const InvalidInput& e) {
        throw ConfigError("parameter 'circuit' (" + p.text("circuit") + "): " + e.what());
    }
}

inline std::string run_circuit_experiment(const ResolvedConfig& c) {
    const FockKet input = load_input_state(c.params);
    const Circuit circuit = load_circuit(c.params);
    return write_state(numeric("circuit", c.params, [&] { return run_circuit(input, circuit); }));
}

}  // namespace detail

inline const std::vector<ExperimentSpec>& experiments() {
    using detail::require;
    using detail::require_positive;
    static const std::vector<ExperimentSpec> all = [] {
        const auto never = [](const Params&) { return false; };
        const auto when_samples = [](const Params& p) { return p.integer("samples") > 0; };
        const auto samples_ok = [](const Params& p) {
            require(p.integer("samples") >= 0, "parameter 'samples' must be >= 0, got " + p.text("samples"));
        };
        std::vector<ExperimentSpec> v;
        v.push_back({"cascade",
                     "repeated symmetric detections on a twin-beam pair (m0, n0)",
                     {{"m0", ParamKind::number, std::nullopt, "start coefficient of |3,0;0,3> (rescaled with n0)"},
                      {"n0", ParamKind::number, std::nullopt, "start coefficient of |1,2;2,1> (rescaled with m0)"},
                      {"k", ParamKind::integer, "10", "number of detections"},
                      detail::alpha_param(),
                      detail::theta_param()},
                     "cascade.csv",
                     never,
                     [](const Params& p) {
                         detail::check_pair(p);
                         require(p.integer("k") >= 0, "parameter 'k' must be >= 0, got " + p.text("k"));
                         require_positive(p, "alpha");
                         require_positive(p, "theta");
                     },
                     detail::run_cascade});
        v.push_back({"symmetry-detect",
                     "one symmetry detection: peak-centre conditioning (samples=0) or sampled trials",
                     {{"m0", ParamKind::number, std::nullopt, "coefficient of |3,0;0,3> (rescaled with n0)"},
                      {"n0", ParamKind::number, std::nullopt, "coefficient of |1,2;2,1> (rescaled with m0)"},
                      detail::alpha_param(),
                      detail::theta_param(),
                      {"samples", ParamKind::integer, "0", "sampled trials; 0 conditions at the peak centres"}},
                     "symmetry-detect.csv",
                     when_samples,
                     [samples_ok](const Params& p) {
                         detail::check_pair(p);
                         require_positive(p, "alpha");
                         require_positive(p, "theta");
                         samples_ok(p);
                     },
                     detail::run_symmetry_detect});
        v.push_back({"psi-theta",
                     "post-selected six-photon state over a theta grid on [0, pi/2]",
                     {{"grid", ParamKind::integer, "20", "number of theta points"}},
                     "psi-theta.csv",
                     never,
                     [](const Params& p) { require(p.integer("grid") >= 1, "parameter 'grid' must be >= 1, got " + p.text("grid")); },
                     detail::run_psi_theta});
        v.push_back({"ghz-circuit",
                     "GHZ conversion of the theta = pi/2 state: per-interval probability and corrected fidelity",
                     {detail::alpha_param(), detail::theta_param(),
                      {"samples", ParamKind::integer, "0", "sampled draws; 0 gives exact interval probabilities"}},
                     "ghz-circuit.csv",
                     when_samples,
                     [samples_ok](const Params& p) {
                         require_positive(p, "alpha");
                         samples_ok(p);
                         try {
                             decode_table(p.number("alpha"), p.number("theta"));
                         } catch (const InvalidInput& e) {
                             throw ConfigError(std::string("parameter 'theta': ") + e.what());
                         }
                     },
                     detail::run_ghz_circuit});
        v.push_back({"pdc-weights",
                     "two-mode squeezed emission amplitudes per order n",
                     {{"tau", ParamKind::number, std::nullopt, "interaction strength kappa t / hbar"},
                      {"n_max", ParamKind::integer, std::nullopt, "highest order (default: tail below 1e-17)", true}},
                     "pdc-weights.csv",
                     never,
                     [](const Params& p) {
                         require(p.number("tau") >= 0, "parameter 'tau' must be >= 0, got " + p.text("tau"));
                         if (p.has("n_max")) require(p.integer("n_max") >= 0, "parameter 'n_max' must be >= 0, got " + p.text("n_max"));
                     },
                     detail::run_pdc_weights});
        v.push_back({"homodyne-sweep",
                     "homodyne density and corrected fidelity along a grid of outcomes x",
                     {{"source", ParamKind::text, "detector", "detector (twin-beam pair m0, n0) or ghz"},
                      {"m0", ParamKind::number, std::nullopt, "detector source: coefficient of |3,0;0,3>", true},
                      {"n0", ParamKind::number, std::nullopt, "detector source: coefficient of |1,2;2,1>", true},
                      detail::alpha_param(),
                      detail::theta_param(),
                      {"points", ParamKind::integer, "201", "grid size"},
                      {"x_min", ParamKind::number, std::nullopt, "grid start (default: lowest peak - 6)", true},
                      {"x_max", ParamKind::number, std::nullopt, "grid end (default: 2 alpha + 6)", true}},
                     "homodyne-sweep.csv",
                     never,
                     [](const Params& p) {
                         const std::string& s = p.text("source");
                         require(s == "detector" || s == "ghz", "parameter 'source' must be 'detector' or 'ghz', got '" + s + "'");
                         require_positive(p, "alpha");
                         require_positive(p, "theta");
                         require(p.integer("points") >= 1, "parameter 'points' must be >= 1, got " + p.text("points"));
                         if (s == "detector") {
                             require(p.has("m0") && p.has("n0"), "source 'detector' needs parameters 'm0' and 'n0'");
                             detail::check_pair(p);
                         } else {
                             require(!p.has("m0") && !p.has("n0"), "source 'ghz' takes no 'm0' or 'n0'");
                             try {
                                 decode_table(p.number("alpha"), p.number("theta"));
                             } catch (const InvalidInput& e) {
                                 throw ConfigError(std::string("parameter 'theta': ") + e.what());
                             }
                         }
                         if (p.has("x_min") && p.has("x_max"))
                             require(p.number("x_min") <= p.number("x_max"), "parameter 'x_min' must not exceed 'x_max'");
                     },
                     detail::run_homodyne_sweep});
        v.push_back({"mixture",
                     "six-photon component weights for k emission processes",
                     {{"k", ParamKind::text, "1,2,3,10,1000000", "comma-separated process counts (each >= 1)"}},
                     "mixture.csv",
                     never,
                     [](const Params& p) {
                         const auto items = detail::split_list(p.text("k"));
                         require(!items.empty(), "parameter 'k' is empty");
                         for (const auto& item : items) {
                             const auto k = detail::to_number(item);
                             require(k.has_value(), "parameter 'k': '" + item + "' is not a number");
                             require(*k >= 1, "parameter 'k': process count must be >= 1, got " + item);
                         }
                     },
                     detail::run_mixture});
        v.push_back({"circuit",
                     "runs a circuit file on a state file or a built-in psi0..psi5, writes the output state",
                     {{"circuit", ParamKind::text, std::nullopt, "circuit description file"},
                      {"input", ParamKind::text, std::nullopt, "state file, or psi0..psi5"}},
                     "circuit.state",
                     never,
                     [](const Params& p) {
                         detail::load_circuit(p);
                         if (!detail::builtin_psi(p.text("input"))) detail::load_input_state(p);
                     },
                     detail::run_circuit_experiment});
        return v;
    }();
    return all;
}

inline const ExperimentSpec* find_experiment(const std::string& name) {
    for (const auto& e : experiments())
        if (e.name == name) return &e;
    return nullptr;
}

/// Full syntax and semantic check. Throws ConfigError naming the field.
inline ResolvedConfig resolve(const ExperimentConfig& c) {
    if (c.experiment.empty()) throw ConfigError("field 'experiment' is missing");
    const ExperimentSpec* spec = find_experiment(c.experiment);
    if (!spec) throw ConfigError("field 'experiment': unknown experiment '" + c.experiment + "'");

    std::map<std::string, std::string> values;
    for (const auto& [key, value] : c.parameters) {
        const auto it = std::find_if(spec->params.begin(), spec->params.end(), [&](const ParamSpec& s) { return s.name == key; });
        if (it == spec->params.end()) throw ConfigError("unknown parameter '" + key + "' for experiment '" + spec->name + "'");
        if (it->kind == ParamKind::number && !detail::to_number(value))
            throw ConfigError("parameter '" + key + "': expected a number, got '" + value + "'");
        if (it->kind == ParamKind::integer && !detail::to_integer(value))
            throw ConfigError("parameter '" + key + "': expected an integer, got '" + value + "'");
        values[key] = value;
    }
    for (const auto& s : spec->params) {
        if (values.count(s.name)) continue;
        if (s.default_value) values[s.name] = *s.default_value;
        else if (!s.optional) throw ConfigError("missing required parameter '" + s.name + "' for experiment '" + spec->name + "'");
    }
    Params params(std::move(values));
    spec->check(params);
    if (spec->sampled(params) && !c.seed) throw ConfigError("field 'seed' is required for sampled runs of '" + spec->name + "'");
    return ResolvedConfig{spec, std::move(params), c.seed, c.output.value_or(spec->default_output)};
}

/// The `.meta` sidecar: reserved fields, then parameters in key order.
inline std::string meta_text(const ResolvedConfig& r) {
    std::ostringstream out;
    out << "experiment = " << r.spec->name << '\n';
    out << "version = " << kVersion << '\n';
    if (r.seed) out << "seed = " << *r.seed << '\n';
    for (const auto& [k, v] : r.params.values()) out << k << " = " << v << '\n';
    return out.str();
}

/// Output location: `output` as given, or its file name inside
/// FOCKSIM_OUT_DIR when that variable is set.
inline std::filesystem::path output_path(const ResolvedConfig& r) {
    std::filesystem::path out(r.output);
    if (const char* dir = std::getenv("FOCKSIM_OUT_DIR"); dir && *dir) out = std::filesystem::path(dir) / out.filename();
    return out;
}

struct RunResult {
    std::filesystem::path output;
    std::filesystem::path meta;
};

inline RunResult run(const ExperimentConfig& config) {
    const ResolvedConfig r = resolve(config);
    std::string body;
    try {
        body = r.spec->run(r);
    } catch (const CapacityError& e) {
        throw NumericError(r.spec->name + ": " + e.what());
    }
    const std::filesystem::path out = output_path(r);
    if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
    std::filesystem::path meta = out;
    meta += ".meta";
    for (const auto& [path, text] : {std::pair{out, body}, std::pair{meta, meta_text(r)}}) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ConfigError("cannot write '" + path.string() + "'");
        f << text;
    }
    return {out, meta};
}

/// Experiment names with their parameter schemas, for `focksim list`.
inline std::string describe_experiments() {
    std::ostringstream out;
    for (const auto& e : experiments()) {
        out << e.name << ": " << e.summary << '\n';
        for (const auto& p : e.params) {
            out << "  " << p.name << " (" << kind_name(p.kind);
            if (p.default_value) out << ", default " << *p.default_value;
            else if (p.optional) out << ", optional";
            else out << ", required";
            out << ")  " << p.help << '\n';
        }
    }
    return out.str();
}

}  // namespace focksim::cli

#endif
