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

// Twin-beam symmetry detector and the cascade it induces.
//
// The detector sends a six-photon state on (aH, aV, bH, bV) through a 50:50
// beam splitter, couples each a photon to the probe with phase theta and each
// b photon with theta/2, shifts the probe by -9 theta/2 and reads X. States
// with three photons per spatial mode leave the probe at phase 0; the 5+1 and
// 1+5 splits leave it at +theta and -theta.
//
// On the family m(|3,0;0,3> - |0,3;3,0>) + n(|1,2;2,1> - |2,1;1,2>) a
// symmetric outcome maps (m, n) to (m + 3n, 3m + n) up to normalization, so k
// detections apply A^k with A = [[1, 3], [3, 1]].

#ifndef FOCKSIM_SYMMETRY_DETECTOR_HPP
#define FOCKSIM_SYMMETRY_DETECTOR_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "focksim/kerr_probe.hpp"
#include "focksim/optics.hpp"
#include "focksim/pdc_source.hpp"

namespace focksim {

inline constexpr std::array<int, 4> kDetectorKerrWeights{2, 2, 1, 1};
inline constexpr int kDetectorProbeShift = -9;
inline constexpr int kMaxCascadeSteps = 30;

struct CoefficientPair {
    double m = 0;
    double n = 0;

    bool is_normalized(double tol = 1e-12) const { return std::abs(m * m + n * n - 0.5) <= tol; }

    /// Rescaled so that m^2 + n^2 = 1/2.
    CoefficientPair normalized() const {
        const double s = std::sqrt(2.0 * (m * m + n * n));
        if (s == 0) throw InvalidInput("coefficient pair (0, 0) cannot be normalized");
        return {m / s, n / s};
    }
};

namespace twin {
inline Occupation k3003() { return make_occupation({3, 0, 0, 3}); }
inline Occupation k0330() { return make_occupation({0, 3, 3, 0}); }
inline Occupation k1221() { return make_occupation({1, 2, 2, 1}); }
inline Occupation k2112() { return make_occupation({2, 1, 1, 2}); }
}  // namespace twin

/// m(|3,0;0,3> - |0,3;3,0>) + n(|1,2;2,1> - |2,1;1,2>) on (aH, aV, bH, bV).
inline FockKet twin_beam_state(const CoefficientPair& p) {
    if (!p.is_normalized())
        throw InvalidInput("coefficient pair must satisfy m^2 + n^2 = 1/2 (got " + std::to_string(p.m * p.m + p.n * p.n) + ")");
    TermMap t{{twin::k3003(), p.m}, {twin::k0330(), -p.m}, {twin::k1221(), p.n}, {twin::k2112(), -p.n}};
    return FockKet(twin_beam_register(), std::move(t));
}

/// Reads (m, n) back from a twin-beam ket.
inline CoefficientPair pair_of(const FockKet& ket) {
    detail::require_same_register(ket.reg(), twin_beam_register(), "pair_of");
    return {ket.amplitude(twin::k3003()).real(), ket.amplitude(twin::k1221()).real()};
}

/// (5 + 12 m n) / 8: probability of the symmetric outcome on a normalized pair.
inline double symmetric_probability(const CoefficientPair& p) { return (5.0 + 12.0 * p.m * p.n) / 8.0; }

enum class Branch { symmetric, asymmetric };

inline const char* branch_name(Branch b) { return b == Branch::symmetric ? "symmetric" : "asymmetric"; }

struct Sampled {
    std::uint64_t seed;
};
struct Forced {
    Branch branch;
};
using OutcomeSelector = std::variant<Sampled, Forced>;

struct DetectorOutcome {
    Branch branch;
    FockKet state;
    double probability;                 // probability of this branch
    std::optional<double> measured_x;  // sampled mode only
    double phi = 0;                     // correction phase applied (asymmetric branch)
};

/// Beam splitter, Kerr coupling and probe shift, before the homodyne.
inline ProbeTaggedState detector_probe_state(const FockKet& input, double alpha, double theta) {
    detail::require_same_register(input.reg(), twin_beam_register(), "symmetry detector input");
    const FockKet mixed = apply_mode_transform(input, bs_5050(input.reg(), "a", "b"));
    return apply_probe_phase(apply_cross_kerr(attach_probe(mixed, alpha, theta), kDetectorKerrWeights), kDetectorProbeShift);
}

/// Multiplies each term by exp(i phi/2 (n_spatial - N/2)), N the term's total
/// photon number. The -N/2 offset removes the global phase, which maps the
/// e^{+-i phi} asymmetric outcome onto its phase-free form.
inline FockKet apply_phase_correction(const FockKet& state, double phi, const std::string& spatial) {
    const auto idx = state.reg().indices_of(spatial);
    if (idx.empty()) throw InvalidInput("phase correction: spatial mode '" + spatial + "' not in register");
    TermMap t;
    for (const auto& [occ, amp] : state.terms()) {
        int total = 0;
        for (auto c : occ) total += c;
        const double exponent = phi / 2.0 * (photons_in(occ, idx) - total / 2.0);
        t.emplace_hint(t.end(), occ, amp * std::polar(1.0, exponent));
    }
    return FockKet(state.reg(), std::move(t));
}

/// Decision threshold between the phase-0 peak and the +-theta peaks.
inline double symmetry_threshold(double alpha, double theta) { return alpha * (1.0 + std::cos(theta)); }

/// Correction phase alpha sin(theta) (x - 2 alpha cos(theta)).
inline double asymmetric_phase(double alpha, double theta, double x) {
    return alpha * std::sin(theta) * (x - 2.0 * alpha * std::cos(theta));
}

namespace detail {

inline void require_six_photons(const FockKet& input) {
    if (input.empty()) throw InvalidInput("symmetry detector: empty input");
    if (input.photon_numbers() != std::set<int>{6}) throw InvalidInput("symmetry detector needs a six-photon input");
}

}  // namespace detail

/// One sampled detection: draw x, classify it against alpha (1 + cos theta),
/// and on the asymmetric side remove the measured phase with
/// apply_phase_correction on beam b.
inline DetectorOutcome detect_sampled(const FockKet& input, double alpha, double theta, CounterRng& rng) {
    detail::require_six_photons(input);
    const ProbeTaggedState probe = detector_probe_state(input, alpha, theta);
    const double total = probe.norm_squared();
    const HomodyneOutcome h = sample_homodyne(probe, rng);
    const double x0 = symmetry_threshold(alpha, theta);
    const double p_sym = homodyne_mass_above(probe, x0) / total;
    if (h.x > x0) return DetectorOutcome{Branch::symmetric, h.conditional, p_sym, h.x, 0.0};
    const double phi = asymmetric_phase(alpha, theta, h.x);
    return DetectorOutcome{Branch::asymmetric, apply_phase_correction(h.conditional, phi, "b"), 1.0 - p_sym, h.x, phi};
}

/// Runs one detection. Forced selection picks a branch by its exact probe
/// phase group (ideal thresholds, peak-centre phases); sampled selection
/// behaves as detect_sampled with a fresh generator. Returns nullopt when the
/// forced branch has zero probability.
inline std::optional<DetectorOutcome> detect(const FockKet& input, double alpha, double theta, const OutcomeSelector& selector) {
    if (const auto* sampled = std::get_if<Sampled>(&selector)) {
        CounterRng rng(sampled->seed);
        return detect_sampled(input, alpha, theta, rng);
    }
    detail::require_six_photons(input);
    const Branch wanted = std::get<Forced>(selector).branch;
    const ProbeTaggedState probe = detector_probe_state(input, alpha, theta);
    TermMap t;
    for (const auto& [key, amp] : probe.branches()) {
        const bool sym = key.phase_index == 0;
        if (sym == (wanted == Branch::symmetric)) detail::accumulate(t, key.occ, amp);
    }
    FockKet part(probe.reg(), std::move(t));
    const double p = part.norm_squared();
    if (p == 0) return std::nullopt;
    return DetectorOutcome{wanted, part.scaled(1.0 / std::sqrt(p)), p / probe.norm_squared(), std::nullopt, 0.0};
}

/// A^k with A = [[1, 3], [3, 1]], exact in 64-bit integers.
inline std::array<std::array<std::int64_t, 2>, 2> a_matrix_power_exact(int k) {
    if (k < 0) throw InvalidInput("matrix power must be >= 0");
    if (k > kMaxCascadeSteps) throw CapacityError("A^k overflows 64-bit integers for k > 30 (k=" + std::to_string(k) + ")");
    const std::int64_t four = std::int64_t{1} << (2 * k);
    const std::int64_t minus_two = (k % 2 == 0 ? 1 : -1) * (std::int64_t{1} << k);
    const std::int64_t diag = (four + minus_two) / 2, off = (four - minus_two) / 2;
    return {{{diag, off}, {off, diag}}};
}

inline Eigen::Matrix2d a_matrix_power(int k) {
    const auto e = a_matrix_power_exact(k);
    Eigen::Matrix2d m;
    m << static_cast<double>(e[0][0]), static_cast<double>(e[0][1]), static_cast<double>(e[1][0]), static_cast<double>(e[1][1]);
    return m;
}

struct CascadeClosedForm {
    int k;
    double m_k;    // unnormalized
    double n_k;    // unnormalized
    double ratio;  // m_k / n_k; +-infinity when n_k = 0
    double c_k;    // (m_k, n_k) / sqrt(c_k) satisfies m^2 + n^2 = 1/2

    CoefficientPair normalized_pair() const { return {m_k / std::sqrt(c_k), n_k / std::sqrt(c_k)}; }
};

inline CascadeClosedForm cascade_closed_form(const CoefficientPair& p0, int k) {
    if (!p0.is_normalized()) throw InvalidInput("cascade start pair must satisfy m^2 + n^2 = 1/2");
    const Eigen::Vector2d mn = a_matrix_power(k) * Eigen::Vector2d(p0.m, p0.n);
    const double s = p0.m + p0.n, d = p0.m - p0.n;
    const double g = std::pow(-2.0, -k) * d;
    double ratio;
    if (s - g == 0) {
        ratio = (s + g) >= 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    } else {
        ratio = (s + g) / (s - g);
    }
    const double c_k = std::ldexp(std::ldexp(1.0, 2 * k) + 1.0, 2 * k - 1) +
                       std::ldexp(std::ldexp(1.0, 2 * k) - 1.0, 2 * k + 1) * p0.m * p0.n;
    return {k, mn(0), mn(1), ratio, c_k};
}

struct CascadeRun {
    FockKet state;                          // after the last detection
    std::vector<CoefficientPair> pairs;     // pairs[i] after i detections
    std::vector<double> step_probabilities;  // symmetric probability of step i+1
    double cumulative_probability = 1.0;
};

/// k successive detections keeping the symmetric outcome each time.
inline CascadeRun cascade_simulate(const CoefficientPair& p0, int k, double alpha, double theta) {
    if (k < 0) throw InvalidInput("cascade length must be >= 0");
    if (k > kMaxCascadeSteps) throw CapacityError("cascade length exceeds 30");
    CascadeRun run{twin_beam_state(p0), {p0}, {}, 1.0};
    for (int step = 0; step < k; ++step) {
        auto out = detect(run.state, alpha, theta, Forced{Branch::symmetric});
        if (!out) throw InvalidInput("cascade reached a state with no symmetric component");
        run.state = out->state;
        run.step_probabilities.push_back(out->probability);
        run.cumulative_probability *= out->probability;
        run.pairs.push_back(pair_of(run.state));
    }
    return run;
}

}  // namespace focksim

#endif
