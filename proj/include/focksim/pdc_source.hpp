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

// Down-conversion emission: the two-mode squeezed expansion, the 2n-photon
// singlet states |psi_n->, and the six-photon component of a pulse containing
// k independent emission processes.

#ifndef FOCKSIM_PDC_SOURCE_HPP
#define FOCKSIM_PDC_SOURCE_HPP

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "focksim/fock.hpp"

namespace focksim {

inline constexpr int kMaxSingletOrder = 5;

/// (aH, aV, bH, bV).
inline ModeRegister twin_beam_register() { return ModeRegister::spatial({"a", "b"}); }

/// |psi_n-> = (aH bV - aV bH)^n |0> / sqrt(n! (n+1)!) over spatial modes a, b.
inline FockKet psi_n(int n, const std::string& a = "a", const std::string& b = "b") {
    if (n < 0 || n > kMaxSingletOrder)
        throw CapacityError("psi_n order must lie in 0.." + std::to_string(kMaxSingletOrder) + ", got " + std::to_string(n));
    const ModeRegister reg = ModeRegister::spatial({a, b});
    const double scale = detail::sqrt_factorial(n) * detail::sqrt_factorial(n + 1);
    return expand_bilinear_power(singlet_form(reg, a, b), n, reg).scaled(1.0 / scale);
}

/// Truncated two-mode squeezed vacuum, amplitude per emission order n:
/// sqrt(n+1) tanh^n(tau) / cosh^2(tau). tau = kappa t / hbar.
struct SqueezedExpansion {
    double tau = 0;
    int n_max = 0;
    std::vector<double> weights;

    /// Closed-form mean order <n> = 2 sinh^2 tau (photons per beam).
    double mean_photon_number() const { return 2.0 * std::sinh(tau) * std::sinh(tau); }

    /// sum_n n * weights[n]^2 over the truncated series.
    double truncated_mean_order() const {
        double s = 0;
        for (std::size_t n = 0; n < weights.size(); ++n) s += static_cast<double>(n) * weights[n] * weights[n];
        return s;
    }

    /// sum_n weights[n]^2 (approaches 1 as n_max grows).
    double captured_probability() const {
        double s = 0;
        for (double w : weights) s += w * w;
        return s;
    }

    /// Upper bound on 1 - captured_probability():
    /// (n_max + 2) tanh^{2 n_max + 2}(tau).
    double truncation_bound() const {
        const double x = std::tanh(tau) * std::tanh(tau);
        return (n_max + 2) * std::pow(x, n_max + 1);
    }
};

inline SqueezedExpansion squeezed_weights(double tau, int n_max) {
    if (!(tau >= 0)) throw InvalidInput("tau must be >= 0");
    if (n_max < 0) throw InvalidInput("n_max must be >= 0");
    SqueezedExpansion e{tau, n_max, {}};
    const double t = std::tanh(tau), c2 = std::cosh(tau) * std::cosh(tau);
    double tn = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        e.weights.push_back(std::sqrt(n + 1.0) * tn / c2);
        tn *= t;
    }
    return e;
}

/// Six-photon component of a pulse with k = t_d / t_c independent processes.
/// Stores the squared amplitudes of |psi_3->, |psi_2->|psi_1->, |psi_1->^3;
/// they sum to 1 for every real k, but the last one is negative for 1 < k < 2
/// where no real amplitude exists.
struct SixPhotonMixtureWeights {
    double k = 1;
    std::array<double, 3> squared;

    bool physical() const { return squared[0] >= 0 && squared[1] >= 0 && squared[2] >= 0; }

    std::array<double, 3> amplitudes() const {
        if (!physical())
            throw InvalidInput("six-photon mixture at k=" + std::to_string(k) + " has a negative component weight (1 < k < 2)");
        return {std::sqrt(squared[0]), std::sqrt(squared[1]), std::sqrt(squared[2])};
    }
};

inline SixPhotonMixtureWeights six_photon_mixture(double k) {
    if (!(k >= 1)) throw InvalidInput("process count k must be >= 1, got " + std::to_string(k));
    const double d = (k + 1) * (k + 2);
    // + 0.0 turns the -0 produced at k = 1 into +0.
    return {k, {6.0 / d, 6.0 * (k - 1) / d + 0.0, (k - 1) * (k - 2) / d + 0.0}};
}

/// Process slot s (1-based) uses spatial modes "a<s>", "b<s>".
inline ModeRegister process_slots_register(int slots) {
    std::vector<std::string> names;
    for (int s = 1; s <= slots; ++s) {
        names.push_back("a" + std::to_string(s));
        names.push_back("b" + std::to_string(s));
    }
    return ModeRegister::spatial(names);
}

/// Normalized six-photon ket over three process slots:
/// a3 |psi_3>|0>|0> + a21 |psi_2>|psi_1>|0> + a111 |psi_1>|psi_1>|psi_1>.
inline FockKet six_photon_mixture_state(double k) {
    const auto amps = six_photon_mixture(k).amplitudes();
    auto slots = [](int o1, int o2, int o3) {
        return tensor(tensor(psi_n(o1, "a1", "b1"), psi_n(o2, "a2", "b2")), psi_n(o3, "a3", "b3"));
    };
    FockKet out = slots(3, 0, 0).scaled(amps[0]);
    if (amps[1] != 0) out = out + slots(2, 1, 0).scaled(amps[1]);
    if (amps[2] != 0) out = out + slots(1, 1, 1).scaled(amps[2]);
    return out;
}

}  // namespace focksim

#endif
