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

// Sparse multimode Fock-state algebra.
//
// A FockKet is a map from occupation vectors to complex amplitudes over an
// ordered register of (spatial, polarization) modes. Kets are values: every
// operation returns a new ket and amplitudes below kPruneThreshold are dropped
// on construction.

#ifndef FOCKSIM_FOCK_HPP
#define FOCKSIM_FOCK_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "focksim/errors.hpp"

namespace focksim {

using Amplitude = std::complex<double>;
using Occupation = std::vector<std::uint8_t>;
using TermMap = std::map<Occupation, Amplitude>;

inline constexpr double kPruneThreshold = 1e-14;
inline constexpr int kMaxPhotonsPerMode = 15;
inline constexpr int kMaxBilinearPower = 8;

enum class Polarization : std::uint8_t { H, V };

inline char polarization_char(Polarization p) { return p == Polarization::H ? 'H' : 'V'; }
inline Polarization flipped(Polarization p) { return p == Polarization::H ? Polarization::V : Polarization::H; }

struct Mode {
    std::string spatial;
    Polarization pol = Polarization::H;

    std::string label() const { return spatial + polarization_char(pol); }
    auto operator<=>(const Mode&) const = default;
};

/// Parses "aH", "c1V", ... into a Mode. The last character is the polarization.
inline Mode parse_mode_label(const std::string& label) {
    if (label.size() < 2) throw InvalidInput("mode label too short: '" + label + "'");
    char p = label.back();
    if (p != 'H' && p != 'V') throw InvalidInput("mode label must end in H or V: '" + label + "'");
    return Mode{label.substr(0, label.size() - 1), p == 'H' ? Polarization::H : Polarization::V};
}

/// Ordered list of modes. Labels are unique; order fixes the meaning of
/// occupation vectors.
class ModeRegister {
   public:
    ModeRegister() = default;
    explicit ModeRegister(std::vector<Mode> modes) : modes_(std::move(modes)) {
        std::set<Mode> seen;
        for (const auto& m : modes_) {
            if (m.spatial.empty()) throw InvalidInput("empty spatial mode name");
            if (!seen.insert(m).second) throw InvalidInput("duplicate mode label '" + m.label() + "'");
        }
    }

    /// Both polarizations of each named spatial mode, H before V.
    static ModeRegister spatial(const std::vector<std::string>& names) {
        std::vector<Mode> modes;
        for (const auto& n : names) {
            modes.push_back({n, Polarization::H});
            modes.push_back({n, Polarization::V});
        }
        return ModeRegister(std::move(modes));
    }

    std::size_t size() const { return modes_.size(); }
    const Mode& operator[](std::size_t i) const { return modes_[i]; }
    const std::vector<Mode>& modes() const { return modes_; }
    auto begin() const { return modes_.begin(); }
    auto end() const { return modes_.end(); }

    std::optional<std::size_t> find(const Mode& m) const {
        for (std::size_t i = 0; i < modes_.size(); ++i)
            if (modes_[i] == m) return i;
        return std::nullopt;
    }
    std::optional<std::size_t> find(const std::string& spatial, Polarization pol) const {
        return find(Mode{spatial, pol});
    }
    std::size_t index(const std::string& spatial, Polarization pol) const {
        auto i = find(spatial, pol);
        if (!i) throw InvalidInput("mode '" + Mode{spatial, pol}.label() + "' not in register");
        return *i;
    }
    bool has_spatial(const std::string& spatial) const {
        for (const auto& m : modes_)
            if (m.spatial == spatial) return true;
        return false;
    }

    /// Distinct spatial names in order of first appearance.
    std::vector<std::string> spatial_names() const {
        std::vector<std::string> out;
        for (const auto& m : modes_) {
            bool known = false;
            for (const auto& s : out) known = known || s == m.spatial;
            if (!known) out.push_back(m.spatial);
        }
        return out;
    }

    /// Indices of all modes belonging to a spatial name.
    std::vector<std::size_t> indices_of(const std::string& spatial) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < modes_.size(); ++i)
            if (modes_[i].spatial == spatial) out.push_back(i);
        return out;
    }

    ModeRegister concat(const ModeRegister& other) const {
        auto modes = modes_;
        modes.insert(modes.end(), other.modes_.begin(), other.modes_.end());
        return ModeRegister(std::move(modes));
    }

    std::string describe() const {
        std::string out;
        for (const auto& m : modes_) {
            if (!out.empty()) out += ' ';
            out += m.label();
        }
        return out;
    }

    bool operator==(const ModeRegister&) const = default;

   private:
    std::vector<Mode> modes_;
};

namespace detail {

/// sqrt(n!) for n = 0..16.
inline const std::array<double, 17>& sqrt_factorials() {
    static const std::array<double, 17> table = [] {
        std::array<double, 17> t{};
        double f = 1.0;
        for (int n = 0; n <= 16; ++n) {
            if (n > 0) f *= n;
            t[n] = std::sqrt(f);
        }
        return t;
    }();
    return table;
}

inline double sqrt_factorial(int n) {
    if (n < 0 || n > 16) throw CapacityError("factorial table covers 0..16, got " + std::to_string(n));
    return sqrt_factorials()[n];
}

inline void accumulate(TermMap& terms, const Occupation& occ, Amplitude amp) {
    auto [it, inserted] = terms.try_emplace(occ, amp);
    if (!inserted) it->second += amp;
}

inline void require_same_register(const ModeRegister& a, const ModeRegister& b, const char* what) {
    if (!(a == b)) throw InvalidInput(std::string(what) + ": register mismatch [" + a.describe() + "] vs [" + b.describe() + "]");
}

}  // namespace detail

class FockKet {
   public:
    FockKet() = default;
    explicit FockKet(ModeRegister reg) : reg_(std::move(reg)) {}
    FockKet(ModeRegister reg, TermMap terms) : reg_(std::move(reg)) {
        for (auto& [occ, amp] : terms) {
            if (occ.size() != reg_.size())
                throw InvalidInput("occupation length " + std::to_string(occ.size()) + " != register size " + std::to_string(reg_.size()));
            for (auto n : occ)
                if (n > kMaxPhotonsPerMode) throw CapacityError("more than 15 photons in one mode");
            if (std::abs(amp) >= kPruneThreshold) terms_.emplace_hint(terms_.end(), occ, amp);
        }
    }

    static FockKet vacuum(ModeRegister reg) {
        Occupation zero(reg.size(), 0);
        TermMap t{{zero, 1.0}};
        return FockKet(std::move(reg), std::move(t));
    }
    static FockKet basis(ModeRegister reg, Occupation occ, Amplitude amp = 1.0) {
        TermMap t{{std::move(occ), amp}};
        return FockKet(std::move(reg), std::move(t));
    }

    const ModeRegister& reg() const { return reg_; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    Amplitude amplitude(const Occupation& occ) const {
        auto it = terms_.find(occ);
        return it == terms_.end() ? Amplitude{} : it->second;
    }

    double norm_squared() const {
        double s = 0;
        for (const auto& [occ, amp] : terms_) s += std::norm(amp);
        return s;
    }
    double norm() const { return std::sqrt(norm_squared()); }
    bool is_normalized(double tol = 1e-12) const { return std::abs(norm_squared() - 1.0) <= tol; }

    FockKet scaled(Amplitude factor) const {
        TermMap t;
        for (const auto& [occ, amp] : terms_) t.emplace_hint(t.end(), occ, amp * factor);
        return FockKet(reg_, std::move(t));
    }

    /// Set of total photon numbers appearing in the support.
    std::set<int> photon_numbers() const {
        std::set<int> out;
        for (const auto& [occ, amp] : terms_) {
            int n = 0;
            for (auto x : occ) n += x;
            out.insert(n);
        }
        return out;
    }

   private:
    ModeRegister reg_;
    TermMap terms_;
};

inline Occupation make_occupation(std::initializer_list<int> counts) {
    Occupation occ;
    for (int c : counts) {
        if (c < 0 || c > kMaxPhotonsPerMode) throw CapacityError("occupation out of range");
        occ.push_back(static_cast<std::uint8_t>(c));
    }
    return occ;
}

inline int photons_in(const Occupation& occ, std::span<const std::size_t> modes) {
    int n = 0;
    for (auto i : modes) n += occ[i];
    return n;
}

inline FockKet operator+(const FockKet& a, const FockKet& b) {
    detail::require_same_register(a.reg(), b.reg(), "ket sum");
    TermMap t = a.terms();
    for (const auto& [occ, amp] : b.terms()) detail::accumulate(t, occ, amp);
    return FockKet(a.reg(), std::move(t));
}
inline FockKet operator-(const FockKet& a, const FockKet& b) { return a + b.scaled(-1.0); }
inline FockKet operator*(Amplitude c, const FockKet& k) { return k.scaled(c); }

/// Applies prod_i (a_i^dagger)^{powers[i]} to every term.
inline FockKet apply_creation_monomial(const FockKet& ket, std::span<const int> powers) {
    if (powers.size() != ket.reg().size())
        throw InvalidInput("creation powers length " + std::to_string(powers.size()) + " != register size " +
                           std::to_string(ket.reg().size()));
    for (int p : powers)
        if (p < 0) throw InvalidInput("negative creation power");
    TermMap out;
    for (const auto& [occ, amp] : ket.terms()) {
        Occupation next = occ;
        double factor = 1.0;
        for (std::size_t i = 0; i < occ.size(); ++i) {
            int total = occ[i] + powers[i];
            if (total > kMaxPhotonsPerMode) throw CapacityError("more than 15 photons in mode " + ket.reg()[i].label());
            factor *= detail::sqrt_factorial(total) / detail::sqrt_factorial(occ[i]);
            next[i] = static_cast<std::uint8_t>(total);
        }
        detail::accumulate(out, next, amp * factor);
    }
    return FockKet(ket.reg(), std::move(out));
}

/// Applies sum_j coeffs[j] a_j^dagger.
inline FockKet apply_linear_creation(const FockKet& ket, std::span<const Amplitude> coeffs) {
    if (coeffs.size() != ket.reg().size()) throw InvalidInput("linear creation: coefficient count != register size");
    TermMap out;
    for (const auto& [occ, amp] : ket.terms()) {
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            if (coeffs[j] == Amplitude{}) continue;
            if (occ[j] >= kMaxPhotonsPerMode) throw CapacityError("more than 15 photons in mode " + ket.reg()[j].label());
            Occupation next = occ;
            ++next[j];
            detail::accumulate(out, next, amp * coeffs[j] * std::sqrt(static_cast<double>(next[j])));
        }
    }
    return FockKet(ket.reg(), std::move(out));
}

/// Quadratic form sum_{ij} c_ij a_i^dagger a_j^dagger over register indices.
class BilinearForm {
   public:
    using Key = std::pair<std::size_t, std::size_t>;

    BilinearForm() = default;
    explicit BilinearForm(std::map<Key, Amplitude> coefficients) : coefficients_(std::move(coefficients)) {}

    BilinearForm& add(std::size_t i, std::size_t j, Amplitude c) {
        coefficients_[{i, j}] += c;
        return *this;
    }

    const std::map<Key, Amplitude>& coefficients() const { return coefficients_; }

    void check_against(const ModeRegister& reg) const {
        for (const auto& [key, c] : coefficients_)
            if (key.first >= reg.size() || key.second >= reg.size())
                throw InvalidInput("bilinear form index out of range for register [" + reg.describe() + "]");
    }

   private:
    std::map<Key, Amplitude> coefficients_;
};

/// a_H^dagger b_V^dagger - a_V^dagger b_H^dagger across two spatial modes.
inline BilinearForm singlet_form(const ModeRegister& reg, const std::string& a, const std::string& b) {
    BilinearForm f;
    f.add(reg.index(a, Polarization::H), reg.index(b, Polarization::V), 1.0);
    f.add(reg.index(a, Polarization::V), reg.index(b, Polarization::H), -1.0);
    return f;
}

/// Applies the bilinear operator once.
inline FockKet apply_bilinear(const BilinearForm& form, const FockKet& ket) {
    form.check_against(ket.reg());
    const std::size_t m = ket.reg().size();
    TermMap out;
    std::vector<int> powers(m, 0);
    for (const auto& [key, c] : form.coefficients()) {
        if (c == Amplitude{}) continue;
        std::fill(powers.begin(), powers.end(), 0);
        ++powers[key.first];
        ++powers[key.second];
        const FockKet raised = apply_creation_monomial(ket, powers);
        for (const auto& [occ, amp] : raised.terms()) detail::accumulate(out, occ, amp * c);
    }
    return FockKet(ket.reg(), std::move(out));
}

/// (form)^n |0>, unnormalized.
inline FockKet expand_bilinear_power(const BilinearForm& form, int n, const ModeRegister& reg) {
    if (n < 0) throw InvalidInput("negative bilinear power");
    if (n > kMaxBilinearPower)
        throw CapacityError("bilinear power " + std::to_string(n) + " exceeds maximum " + std::to_string(kMaxBilinearPower));
    form.check_against(reg);
    FockKet ket = FockKet::vacuum(reg);
    for (int i = 0; i < n; ++i) ket = apply_bilinear(form, ket);
    return ket;
}

/// <a|b>, conjugate-linear in a.
inline Amplitude inner_product(const FockKet& a, const FockKet& b) {
    detail::require_same_register(a.reg(), b.reg(), "inner product");
    const FockKet& small = a.size() <= b.size() ? a : b;
    const FockKet& large = a.size() <= b.size() ? b : a;
    Amplitude s{};
    for (const auto& [occ, amp] : small.terms()) {
        Amplitude other = large.amplitude(occ);
        if (other == Amplitude{}) continue;
        s += (&small == &a) ? std::conj(amp) * other : std::conj(other) * amp;
    }
    return s;
}

/// |<a|b>|^2 / (<a|a><b|b>).
inline double fidelity(const FockKet& a, const FockKet& b) {
    double na = a.norm_squared(), nb = b.norm_squared();
    if (na == 0 || nb == 0) return 0.0;
    return std::norm(inner_product(a, b)) / (na * nb);
}

inline FockKet normalize(const FockKet& ket) {
    double n = ket.norm();
    if (n == 0) throw InvalidInput("cannot normalize the zero ket");
    return ket.scaled(1.0 / n);
}

/// Kronecker product; the result register is a's modes followed by b's.
inline FockKet tensor(const FockKet& a, const FockKet& b) {
    ModeRegister reg = a.reg().concat(b.reg());
    TermMap out;
    for (const auto& [oa, xa] : a.terms()) {
        for (const auto& [ob, xb] : b.terms()) {
            Occupation occ = oa;
            occ.insert(occ.end(), ob.begin(), ob.end());
            out.emplace(std::move(occ), xa * xb);
        }
    }
    return FockKet(std::move(reg), std::move(out));
}

/// Appends the given modes in vacuum.
inline FockKet with_vacuum_modes(const FockKet& ket, const ModeRegister& extra) {
    if (extra.size() == 0) return ket;
    return tensor(ket, FockKet::vacuum(extra));
}

/// Re-expresses a ket over a permutation of its register. Both registers must
/// hold the same mode set.
inline FockKet reorder(const FockKet& ket, const ModeRegister& target) {
    if (target.size() != ket.reg().size()) throw InvalidInput("reorder: register sizes differ");
    std::vector<std::size_t> src(target.size());
    for (std::size_t i = 0; i < target.size(); ++i) {
        auto j = ket.reg().find(target[i]);
        if (!j) throw InvalidInput("reorder: mode '" + target[i].label() + "' not in ket register");
        src[i] = *j;
    }
    TermMap out;
    for (const auto& [occ, amp] : ket.terms()) {
        Occupation next(target.size());
        for (std::size_t i = 0; i < target.size(); ++i) next[i] = occ[src[i]];
        out.emplace(std::move(next), amp);
    }
    return FockKet(target, std::move(out));
}

/// Exact photon count in one mode.
struct ModeCount {
    std::size_t mode;
    int count;
};

/// Exact total photon count over a group of modes (e.g. both polarizations of
/// one spatial mode).
struct GroupCount {
    std::vector<std::size_t> modes;
    int total;
};

using OccupationConstraint = std::variant<ModeCount, GroupCount>;
using OccupationPattern = std::vector<OccupationConstraint>;

/// One photon in each listed spatial mode, polarization unconstrained.
inline OccupationPattern one_photon_per_spatial(const ModeRegister& reg, const std::vector<std::string>& spatials) {
    OccupationPattern p;
    for (const auto& s : spatials) {
        auto idx = reg.indices_of(s);
        if (idx.empty()) throw InvalidInput("spatial mode '" + s + "' not in register");
        p.push_back(GroupCount{std::move(idx), 1});
    }
    return p;
}

inline bool matches(const Occupation& occ, const OccupationPattern& pattern) {
    for (const auto& c : pattern) {
        if (const auto* mc = std::get_if<ModeCount>(&c)) {
            if (occ[mc->mode] != mc->count) return false;
        } else {
            const auto& gc = std::get<GroupCount>(c);
            if (photons_in(occ, gc.modes) != gc.total) return false;
        }
    }
    return true;
}

struct Projection {
    FockKet state;       // renormalized conditional ket
    double probability;  // Born probability of the pattern
};

/// Projects onto the occupation pattern. Returns nullopt when the pattern has
/// zero probability.
inline std::optional<Projection> project_occupation_pattern(const FockKet& ket, const OccupationPattern& pattern) {
    for (const auto& c : pattern) {
        if (const auto* mc = std::get_if<ModeCount>(&c)) {
            if (mc->mode >= ket.reg().size()) throw InvalidInput("pattern mode index out of range");
        } else {
            for (auto i : std::get<GroupCount>(c).modes)
                if (i >= ket.reg().size()) throw InvalidInput("pattern mode index out of range");
        }
    }
    double total = ket.norm_squared();
    if (total == 0) return std::nullopt;
    TermMap kept;
    for (const auto& [occ, amp] : ket.terms())
        if (matches(occ, pattern)) kept.emplace_hint(kept.end(), occ, amp);
    FockKet selected(ket.reg(), std::move(kept));
    double p = selected.norm_squared();
    if (p == 0) return std::nullopt;
    return Projection{selected.scaled(1.0 / std::sqrt(p)), p / total};
}

}  // namespace focksim

#endif
