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

// Cross-Kerr coupling to a coherent probe and X-homodyne readout.
//
// Every branch of a ProbeTaggedState carries an integer phase index k; its
// probe is the coherent state |alpha e^{i k theta/2}>. Integer indices make
// branches with the same probe phase merge exactly.
//
// Quadrature convention: |<x|beta>|^2 is a unit-variance Gaussian centred at
// 2 Re(beta). Conditioning on x multiplies a branch at probe phase phi by
//   exp[-(x - 2 alpha cos phi)^2 / 4] * exp[i alpha sin phi (x - 2 alpha cos phi)].

#ifndef FOCKSIM_KERR_PROBE_HPP
#define FOCKSIM_KERR_PROBE_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>

#include "focksim/fock.hpp"
#include "focksim/optics.hpp"
#include "focksim/rng.hpp"

namespace focksim {

/// Densities below this are reported as an empty outcome.
inline constexpr double kMinHomodyneDensity = 1e-300;

struct BranchKey {
    Occupation occ;
    int phase_index;
    auto operator<=>(const BranchKey&) const = default;
};

class ProbeTaggedState {
   public:
    using BranchMap = std::map<BranchKey, Amplitude>;

    ProbeTaggedState(ModeRegister reg, BranchMap branches, double alpha, double theta)
        : reg_(std::move(reg)), alpha_(alpha), theta_(theta) {
        if (!(alpha >= 0)) throw InvalidInput("probe amplitude alpha must be >= 0");
        if (!(theta > 0)) throw InvalidInput("Kerr phase theta must be > 0");
        for (auto& [key, amp] : branches) {
            if (key.occ.size() != reg_.size()) throw InvalidInput("branch occupation length != register size");
            if (std::abs(amp) >= kPruneThreshold) branches_.emplace_hint(branches_.end(), key, amp);
        }
    }

    const ModeRegister& reg() const { return reg_; }
    const BranchMap& branches() const { return branches_; }
    double alpha() const { return alpha_; }
    double theta() const { return theta_; }

    /// Probe phase of index k, in radians.
    double phase_of(int k) const { return k * theta_ / 2.0; }
    /// Homodyne peak position for index k.
    double peak_of(int k) const { return 2.0 * alpha_ * std::cos(phase_of(k)); }

    double norm_squared() const {
        double s = 0;
        for (const auto& [key, amp] : branches_) s += std::norm(amp);
        return s;
    }

    /// Total squared amplitude per phase index.
    std::map<int, double> phase_weights() const {
        std::map<int, double> w;
        for (const auto& [key, amp] : branches_) w[key.phase_index] += std::norm(amp);
        return w;
    }

    /// Signal ket of the branches at one phase index (unnormalized).
    FockKet signal_at(int phase_index) const {
        TermMap t;
        for (const auto& [key, amp] : branches_)
            if (key.phase_index == phase_index) detail::accumulate(t, key.occ, amp);
        return FockKet(reg_, std::move(t));
    }

   private:
    ModeRegister reg_;
    BranchMap branches_;
    double alpha_;
    double theta_;
};

inline ProbeTaggedState attach_probe(const FockKet& ket, double alpha, double theta) {
    ProbeTaggedState::BranchMap b;
    for (const auto& [occ, amp] : ket.terms()) b.emplace(BranchKey{occ, 0}, amp);
    return ProbeTaggedState(ket.reg(), std::move(b), alpha, theta);
}

/// Each branch's phase index grows by sum_i weights[i] * occupation[i]
/// (weights in units of theta/2).
inline ProbeTaggedState apply_cross_kerr(const ProbeTaggedState& s, std::span<const int> weights) {
    if (weights.size() != s.reg().size())
        throw InvalidInput("Kerr weights length " + std::to_string(weights.size()) + " != register size " + std::to_string(s.reg().size()));
    ProbeTaggedState::BranchMap out;
    for (const auto& [key, amp] : s.branches()) {
        int shift = 0;
        for (std::size_t i = 0; i < weights.size(); ++i) shift += weights[i] * key.occ[i];
        auto [it, inserted] = out.try_emplace(BranchKey{key.occ, key.phase_index + shift}, amp);
        if (!inserted) it->second += amp;
    }
    return ProbeTaggedState(s.reg(), std::move(out), s.alpha(), s.theta());
}

/// Linear phase shifter on the probe: every index moves by shift_index.
inline ProbeTaggedState apply_probe_phase(const ProbeTaggedState& s, int shift_index) {
    ProbeTaggedState::BranchMap out;
    for (const auto& [key, amp] : s.branches()) out.emplace(BranchKey{key.occ, key.phase_index + shift_index}, amp);
    return ProbeTaggedState(s.reg(), std::move(out), s.alpha(), s.theta());
}

/// Passive optics acting on the signal of every probe branch.
inline ProbeTaggedState apply_mode_transform(const ProbeTaggedState& s, const ModeTransform& t) {
    ProbeTaggedState::BranchMap out;
    for (const auto& [k, w] : s.phase_weights()) {
        const FockKet moved = apply_mode_transform(s.signal_at(k), t);
        for (const auto& [occ, amp] : moved.terms()) {
            auto [it, inserted] = out.try_emplace(BranchKey{occ, k}, amp);
            if (!inserted) it->second += amp;
        }
    }
    return ProbeTaggedState(t.output(), std::move(out), s.alpha(), s.theta());
}

namespace detail {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2 pi))

inline double log_sum_exp(const std::vector<double>& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

/// exp(z^2) erfc(z) for z >= 5 by continued fraction.
inline double erfcx_large(double z) {
    double t = z;
    for (int n = 80; n >= 1; --n) t = z + (n / 2.0) / t;
    return 1.0 / (t * std::sqrt(std::numbers::pi));
}

/// log(erfc(z)), finite far into the tail.
inline double log_erfc(double z) {
    if (z < 5.0) return std::log(std::erfc(z));
    return std::log(erfcx_large(z)) - z * z;
}

/// Upper tail of the standard normal, P(N > t).
inline double normal_upper_tail(double t) { return 0.5 * std::erfc(t / std::numbers::sqrt2); }

}  // namespace detail

/// log p(x) of the homodyne outcome.
inline double log_homodyne_pdf(const ProbeTaggedState& s, double x) {
    std::vector<double> terms;
    for (const auto& [k, w] : s.phase_weights()) {
        if (w <= 0) continue;
        const double d = x - s.peak_of(k);
        terms.push_back(std::log(w) - d * d / 2.0);
    }
    return detail::log_sum_exp(terms) - detail::kLogSqrt2Pi;
}

/// p(x) = sum_k W_k N(x; 2 alpha cos(k theta/2), 1).
inline double homodyne_pdf(const ProbeTaggedState& s, double x) { return std::exp(log_homodyne_pdf(s, x)); }

/// Conditional signal ket after observing x, renormalized, probe discarded.
/// nullopt when p(x) is below kMinHomodyneDensity.
inline std::optional<FockKet> homodyne_condition(const ProbeTaggedState& s, double x) {
    if (s.branches().empty() || log_homodyne_pdf(s, x) < std::log(kMinHomodyneDensity)) return std::nullopt;
    double max_exponent = -std::numeric_limits<double>::infinity();
    for (const auto& [key, amp] : s.branches()) {
        const double d = x - s.peak_of(key.phase_index);
        max_exponent = std::max(max_exponent, -d * d / 4.0);
    }
    TermMap t;
    for (const auto& [key, amp] : s.branches()) {
        const double phi = s.phase_of(key.phase_index);
        const double d = x - s.peak_of(key.phase_index);
        const double magnitude = std::exp(-d * d / 4.0 - max_exponent);
        const double phase = s.alpha() * std::sin(phi) * d;
        detail::accumulate(t, key.occ, amp * magnitude * std::polar(1.0, phase));
    }
    FockKet k(s.reg(), std::move(t));
    if (k.empty()) return std::nullopt;
    return normalize(k);
}

/// Probability that the outcome lands above `threshold`.
inline double homodyne_mass_above(const ProbeTaggedState& s, double threshold) {
    double p = 0;
    for (const auto& [k, w] : s.phase_weights()) p += w * detail::normal_upper_tail(threshold - s.peak_of(k));
    return p;
}

/// Overlap error between the peaks at phase 0 and phase theta with the
/// decision threshold at their midpoint: erfc(2 alpha (1 - cos theta) / 2 sqrt 2) / 2.
inline double discrimination_error(double alpha, double theta) {
    if (!(alpha >= 0) || !(theta >= 0)) throw InvalidInput("discrimination_error needs alpha >= 0 and theta >= 0");
    const double one_minus_cos = 2.0 * std::sin(theta / 2.0) * std::sin(theta / 2.0);
    return 0.5 * std::erfc(2.0 * alpha * one_minus_cos / (2.0 * std::numbers::sqrt2));
}

/// Natural log of discrimination_error, accurate where the value underflows.
inline double log_discrimination_error(double alpha, double theta) {
    if (!(alpha >= 0) || !(theta >= 0)) throw InvalidInput("discrimination_error needs alpha >= 0 and theta >= 0");
    const double one_minus_cos = 2.0 * std::sin(theta / 2.0) * std::sin(theta / 2.0);
    return detail::log_erfc(2.0 * alpha * one_minus_cos / (2.0 * std::numbers::sqrt2)) - std::numbers::ln2;
}

struct HomodyneOutcome {
    double x;
    int interval_index;  // |k| of the nearest peak
    FockKet conditional;
    double probability_density;
};

/// Index magnitude |k| of the peak nearest to x among the state's groups.
inline int nearest_peak(const ProbeTaggedState& s, double x) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& [k, w] : s.phase_weights()) {
        const double d = std::abs(x - s.peak_of(k));
        if (d < best_d) {
            best_d = d;
            best = std::abs(k);
        }
    }
    return best;
}

/// Draws x from the homodyne distribution: a phase group by weight, then a
/// unit Gaussian around its peak.
inline HomodyneOutcome sample_homodyne(const ProbeTaggedState& s, CounterRng& rng) {
    const auto weights = s.phase_weights();
    if (weights.empty()) throw InvalidInput("sample_homodyne: empty state");
    double total = 0;
    for (const auto& [k, w] : weights) total += w;
    double u = rng.uniform() * total;
    int chosen = weights.rbegin()->first;
    for (const auto& [k, w] : weights) {
        if (u < w) {
            chosen = k;
            break;
        }
        u -= w;
    }
    const double x = s.peak_of(chosen) + rng.normal();
    auto cond = homodyne_condition(s, x);
    if (!cond) throw InvalidInput("sample_homodyne: drew an outcome with vanishing density");
    return HomodyneOutcome{x, nearest_peak(s, x), std::move(*cond), homodyne_pdf(s, x)};
}

inline HomodyneOutcome sample_homodyne(const ProbeTaggedState& s, std::uint64_t seed) {
    CounterRng rng(seed);
    return sample_homodyne(s, rng);
}

}  // namespace focksim

#endif
