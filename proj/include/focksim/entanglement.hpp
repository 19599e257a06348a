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

// Six-mode polarization/path entangled states from |psi_3->.
//
// Preparation: rotate the polarization of beam b by theta, split a into
// (c1, c0) and b into (d1, d0) with T = 2/3, split c0 into (c2, c3) and d0 into
// (d2, d3) at 50:50, then keep one photon in each of c1..c3, d1..d3.
//
// GHZ extraction (theta = pi/2 input): each photon's H path couples to a
// common probe with phases (1, 2, 3, 3, 6, 9) theta for (c1, c2, c3, d1, d2,
// d3), the probe is shifted by -12 theta, and the X readout falls into one of
// ten intervals. Each interval fixes which pair of polarization strings
// survived, so at most two spin flips plus one phase shifter give GHZ_6.

#ifndef FOCKSIM_ENTANGLEMENT_HPP
#define FOCKSIM_ENTANGLEMENT_HPP

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "focksim/kerr_probe.hpp"
#include "focksim/optics.hpp"
#include "focksim/pdc_source.hpp"

namespace focksim {

inline const std::vector<std::string>& scheme_spatial_modes() {
    static const std::vector<std::string> names{"c1", "c2", "c3", "d1", "d2", "d3"};
    return names;
}
inline ModeRegister scheme_register() { return ModeRegister::spatial(scheme_spatial_modes()); }

inline const std::vector<std::string>& ghz_output_modes() {
    static const std::vector<std::string> names{"e1", "e2", "e3", "e4", "e5", "e6"};
    return names;
}

/// One photon per listed spatial mode with the given polarization string.
inline FockKet polarization_ket(const std::string& pols, const std::vector<std::string>& spatial, Amplitude amp = 1.0) {
    if (pols.size() != spatial.size()) throw InvalidInput("polarization string length must equal the number of spatial modes");
    const ModeRegister reg = ModeRegister::spatial(spatial);
    Occupation occ(reg.size(), 0);
    for (std::size_t i = 0; i < pols.size(); ++i) {
        if (pols[i] != 'H' && pols[i] != 'V') throw InvalidInput("polarization string must use H and V");
        ++occ[reg.index(spatial[i], pols[i] == 'H' ? Polarization::H : Polarization::V)];
    }
    return FockKet::basis(reg, std::move(occ), amp);
}

/// Polarization string of a one-photon-per-spatial-mode occupation, in the
/// register's spatial order. Throws when a spatial mode is not singly occupied.
inline std::string polarization_string(const ModeRegister& reg, const Occupation& occ) {
    std::string out;
    for (const auto& s : reg.spatial_names()) {
        auto h = reg.find(s, Polarization::H), v = reg.find(s, Polarization::V);
        const int nh = h ? occ[*h] : 0, nv = v ? occ[*v] : 0;
        if (nh + nv != 1) throw InvalidInput("spatial mode '" + s + "' does not hold exactly one photon");
        out += nh == 1 ? 'H' : 'V';
    }
    return out;
}

inline FockKet ghz6(const std::vector<std::string>& spatial) {
    const double h = 1.0 / std::numbers::sqrt2;
    return polarization_ket("HHHHHH", spatial, h) + polarization_ket("VVVVVV", spatial, h);
}

/// |W_3>|W_3> (or its spin flip) across the first and last three modes.
inline FockKet w3_pair(const std::vector<std::string>& spatial, bool flipped) {
    const std::array<std::string, 3> w{"HHV", "HVH", "VHH"};
    FockKet out = polarization_ket("HHHHHH", spatial, 0.0);
    for (const auto& x : w) {
        for (const auto& y : w) {
            std::string s = x + y;
            if (flipped)
                for (auto& c : s) c = c == 'H' ? 'V' : 'H';
            out = out + polarization_ket(s, spatial, 1.0 / 3.0);
        }
    }
    return out;
}

struct SchemeResult {
    FockKet state;  // normalized, one photon per c_i and d_i
    double postselect_probability;
    double theta;
};

inline SchemeResult build_psi_theta(double theta) {
    FockKet k = psi_n(3);
    k = apply_mode_transform(k, polarization_rotation(k.reg(), "b", theta));
    k = with_vacuum_modes(k, ModeRegister::spatial({"c1", "d1"}));
    k = apply_mode_transform(k, bs_unbalanced(k.reg(), "a", "c1", "c0", 2.0 / 3.0));
    k = apply_mode_transform(k, bs_unbalanced(k.reg(), "b", "d1", "d0", 2.0 / 3.0));
    k = with_vacuum_modes(k, ModeRegister::spatial({"c3", "d3"}));
    k = apply_mode_transform(k, bs_unbalanced(k.reg(), "c0", "c3", "c2", 0.5));
    k = apply_mode_transform(k, bs_unbalanced(k.reg(), "d0", "d3", "d2", 0.5));
    k = reorder(k, scheme_register());
    auto selected = project_occupation_pattern(k, one_photon_per_spatial(k.reg(), scheme_spatial_modes()));
    if (!selected) throw std::logic_error("post-selection on one photon per mode came back empty");
    return {std::move(selected->state), selected->probability, theta};
}

/// The closed-form polarization/path expansion of the post-selected state,
/// assembled term by term from its coefficient families and normalized.
inline FockKet psi_theta_reference(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const ModeRegister reg = scheme_register();
    using Path = std::array<const char*, 3>;
    const std::vector<Path> c_fixed{{"c1", "c2", "c3"}};
    const std::vector<Path> d_fixed{{"d1", "d2", "d3"}};
    const std::vector<Path> c_sum{{"c1", "c2", "c3"}, {"c1", "c3", "c2"}, {"c2", "c3", "c1"}};
    const std::vector<Path> d_sum{{"d1", "d2", "d3"}, {"d1", "d3", "d2"}, {"d2", "d3", "d1"}};

    TermMap t;
    auto family = [&](const char* plus, const char* minus, double sign, double coeff, const std::vector<Path>& cs,
                      const std::vector<Path>& ds) {
        for (auto [pols, sg] : {std::pair{plus, 1.0}, std::pair{minus, sign}}) {
            for (const auto& cp : cs) {
                for (const auto& dp : ds) {
                    Occupation occ(reg.size(), 0);
                    for (int i = 0; i < 3; ++i) {
                        ++occ[reg.index(cp[i], pols[i] == 'H' ? Polarization::H : Polarization::V)];
                        ++occ[reg.index(dp[i], pols[3 + i] == 'H' ? Polarization::H : Polarization::V)];
                    }
                    detail::accumulate(t, occ, sg * coeff);
                }
            }
        }
    };
    family("HHHVVV", "VVVHHH", -1, c * c * c, c_fixed, d_fixed);
    family("HHHHHH", "VVVVVV", +1, s * s * s, c_fixed, d_fixed);
    family("HHVVVH", "VVHHHV", -1, c * (2 * s * s - c * c) / 3.0, c_sum, d_sum);
    family("HHVHHV", "VVHVVH", +1, s * (s * s - 2 * c * c) / 3.0, c_sum, d_sum);
    family("HHVVVV", "VVHHHH", +1, c * c * s, c_sum, d_fixed);
    family("HHHVVH", "VVVHHV", +1, c * c * s, c_fixed, d_sum);
    family("HHHHHV", "VVVVVH", -1, c * s * s, c_fixed, d_sum);
    family("HHVHHH", "VVHVVV", -1, -c * s * s, c_sum, d_fixed);
    return normalize(FockKet(reg, std::move(t)));
}

/// |<GHZ_6|psi>|^2 over (c1, c2, c3, d1, d2, d3).
inline double ghz_weight(const FockKet& state) { return std::norm(inner_product(ghz6(scheme_spatial_modes()), state)); }

/// |<W3 W3|psi>|^2 + |<~W3 ~W3|psi>|^2.
inline double w_pair_weight(const FockKet& state) {
    return std::norm(inner_product(w3_pair(scheme_spatial_modes(), false), state)) +
           std::norm(inner_product(w3_pair(scheme_spatial_modes(), true), state));
}

/// Swaps H and V in the spatial modes at the given 1-based positions (in the
/// register's spatial order).
inline FockKet spin_flip(const FockKet& state, const std::set<int>& positions) {
    const auto names = state.reg().spatial_names();
    std::vector<std::pair<std::size_t, std::size_t>> swaps;
    for (int p : positions) {
        if (p < 1 || p > static_cast<int>(names.size())) throw InvalidInput("spin flip position " + std::to_string(p) + " out of range");
        const auto& s = names[static_cast<std::size_t>(p - 1)];
        swaps.emplace_back(state.reg().index(s, Polarization::H), state.reg().index(s, Polarization::V));
    }
    TermMap t;
    for (const auto& [occ, amp] : state.terms()) {
        Occupation next = occ;
        for (auto [h, v] : swaps) std::swap(next[h], next[v]);
        t.emplace(std::move(next), amp);
    }
    return FockKet(state.reg(), std::move(t));
}

// Kerr phases on the H path of (c1, c2, c3, d1, d2, d3) in units of theta/2,
// and the probe shift -12 theta.
inline constexpr std::array<int, 6> kGhzKerrWeights{2, 4, 6, 6, 12, 18};
inline constexpr int kGhzProbeShift = -24;
inline constexpr int kGhzIntervals = 10;

/// PBS per photon, Kerr coupling of the H paths, probe shift, PBS recombination
/// into e1..e6. Returns the tagged state before the homodyne.
inline ProbeTaggedState ghz_probe_state(const FockKet& input, double alpha, double theta) {
    detail::require_same_register(input.reg(), scheme_register(), "GHZ circuit input");
    const auto& in = scheme_spatial_modes();
    const auto& out = ghz_output_modes();
    const auto pattern = one_photon_per_spatial(input.reg(), in);
    for (const auto& [occ, amp] : input.terms())
        if (!matches(occ, pattern)) throw InvalidInput("GHZ circuit input must hold one photon per spatial mode");

    FockKet split = input;
    for (const auto& s : in) split = apply_mode_transform(split, pbs(split.reg(), s, s + "h", s + "v"));
    std::vector<int> weights(split.reg().size(), 0);
    for (std::size_t i = 0; i < in.size(); ++i) weights[split.reg().index(in[i] + "h", Polarization::H)] = kGhzKerrWeights[i];

    ProbeTaggedState tagged = apply_probe_phase(apply_cross_kerr(attach_probe(split, alpha, theta), weights), kGhzProbeShift);
    for (std::size_t i = 0; i < in.size(); ++i)
        tagged = apply_mode_transform(tagged, pbs_combine(tagged.reg(), in[i] + "h", in[i] + "v", out[i]));
    return tagged;
}

struct GhzBranch {
    std::string polarizations;  // over e1..e6
    int phase_index;            // units of theta/2
    Amplitude amplitude;
};

/// Every (polarization string, probe phase) branch of the tagged state.
inline std::vector<GhzBranch> ghz_branch_census(const ProbeTaggedState& tagged) {
    std::vector<GhzBranch> out;
    for (const auto& [key, amp] : tagged.branches()) out.push_back({polarization_string(tagged.reg(), key.occ), key.phase_index, amp});
    return out;
}

struct GhzInterval {
    int index;
    double x_lo;
    double x_hi;
    int k;                // branch probe phase k * theta (k >= 0; +-k share the interval)
    std::set<int> flips;  // 1-based output positions to spin-flip
};

struct GhzDecodeTable {
    double alpha;
    double theta;
    std::array<GhzInterval, kGhzIntervals> intervals;

    const GhzInterval& decode(double x) const {
        for (const auto& iv : intervals)
            if (x < iv.x_hi) return iv;
        return intervals.back();
    }

    /// Residual phase alpha sin(k theta) (x - 2 alpha cos(k theta)) carried by
    /// the +k string of interval `iv` after conditioning on x.
    double phase(const GhzInterval& iv, double x) const {
        return alpha * std::sin(iv.k * theta) * (x - 2.0 * alpha * std::cos(iv.k * theta));
    }
};

namespace detail {

/// Positions holding V in the +k string: the c and d photon whose H-path Kerr
/// weights are missing from the total.
inline std::set<int> ghz_flips_for(int k) {
    if (k == 12) return {};
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
            if (-kGhzProbeShift - kGhzKerrWeights[p] - kGhzKerrWeights[3 + q] == 2 * k) return {p + 1, q + 4};
    throw std::logic_error("no GHZ branch with phase index " + std::to_string(k));
}

}  // namespace detail

/// The ten homodyne intervals: x < x_0 = alpha (cos 12 theta + cos 8 theta)
/// decodes k = 12, x_{i-1} < x < x_i = alpha [cos (9-i) theta + cos (8-i) theta]
/// decodes k = 9 - i, and x > x_8 decodes k = 0.
inline GhzDecodeTable decode_table(double alpha, double theta) {
    if (!(alpha > 0)) throw InvalidInput("GHZ decoding needs alpha > 0");
    if (!(theta > 0) || theta > std::numbers::pi / 12.0)
        throw InvalidInput("GHZ decoding needs 0 < theta <= pi/12 so that the peaks 2 alpha cos(k theta) are ordered (theta=" +
                           std::to_string(theta) + ")");
    std::array<double, 9> x{};
    x[0] = alpha * (std::cos(12 * theta) + std::cos(8 * theta));
    for (int i = 1; i <= 8; ++i) x[i] = alpha * (std::cos((9 - i) * theta) + std::cos((8 - i) * theta));
    for (int i = 1; i <= 8; ++i)
        if (!(x[i] > x[i - 1])) throw InvalidInput("GHZ thresholds are not strictly increasing for theta=" + std::to_string(theta));

    GhzDecodeTable t{alpha, theta, {}};
    const double inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGhzIntervals; ++i) {
        const double lo = i == 0 ? -inf : x[i - 1];
        const double hi = i == kGhzIntervals - 1 ? inf : x[i];
        const int k = i == 0 ? 12 : 9 - i;
        t.intervals[i] = GhzInterval{i, lo, hi, k, detail::ghz_flips_for(k)};
    }
    return t;
}

/// Born probability of each interval under the tagged state.
inline std::array<double, kGhzIntervals> interval_probabilities(const ProbeTaggedState& tagged, const GhzDecodeTable& table) {
    std::array<double, kGhzIntervals> p{};
    for (const auto& iv : table.intervals) p[iv.index] = homodyne_mass_above(tagged, iv.x_lo) - homodyne_mass_above(tagged, iv.x_hi);
    return p;
}

/// Undoes the residual e^{+-i phi} between the HHHHHH and VVVVVV strings with a
/// polarization-dependent phase in the first output mode.
inline FockKet ghz_phase_correction(const FockKet& state, double phi) {
    const std::string first = state.reg().spatial_names().front();
    const auto h = state.reg().index(first, Polarization::H), v = state.reg().index(first, Polarization::V);
    TermMap t;
    for (const auto& [occ, amp] : state.terms())
        t.emplace_hint(t.end(), occ, amp * std::polar(1.0, -phi * (occ[h] - occ[v])));
    return FockKet(state.reg(), std::move(t));
}

struct GhzOutcome {
    double x;
    int interval;
    FockKet conditioned;  // after the homodyne, before corrections
    FockKet corrected;    // after spin flips and the phase shifter
    double phi;
};

/// Homodyne at x on a prepared tagged state, then decoding and correction.
inline std::optional<GhzOutcome> ghz_decode(const ProbeTaggedState& tagged, const GhzDecodeTable& table, double x) {
    auto conditioned = homodyne_condition(tagged, x);
    if (!conditioned) return std::nullopt;
    const GhzInterval& iv = table.decode(x);
    const double phi = table.phase(iv, x);
    FockKet corrected = ghz_phase_correction(spin_flip(*conditioned, iv.flips), phi);
    return GhzOutcome{x, iv.index, std::move(*conditioned), std::move(corrected), phi};
}

inline std::optional<GhzOutcome> ghz_circuit(const FockKet& input, double alpha, double theta, double x) {
    const GhzDecodeTable table = decode_table(alpha, theta);
    return ghz_decode(ghz_probe_state(input, alpha, theta), table, x);
}

inline GhzOutcome ghz_decode_sampled(const ProbeTaggedState& tagged, const GhzDecodeTable& table, CounterRng& rng) {
    const HomodyneOutcome h = sample_homodyne(tagged, rng);
    auto out = ghz_decode(tagged, table, h.x);
    if (!out) throw std::logic_error("sampled homodyne outcome has vanishing density");
    return std::move(*out);
}

inline GhzOutcome ghz_circuit_sampled(const FockKet& input, double alpha, double theta, CounterRng& rng) {
    const GhzDecodeTable table = decode_table(alpha, theta);
    return ghz_decode_sampled(ghz_probe_state(input, alpha, theta), table, rng);
}

inline GhzOutcome ghz_circuit_sampled(const FockKet& input, double alpha, double theta, std::uint64_t seed) {
    CounterRng rng(seed);
    return ghz_circuit_sampled(input, alpha, theta, rng);
}

}  // namespace focksim

#endif
