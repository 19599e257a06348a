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

// Passive linear optics as creation-operator substitutions.
//
// A ModeTransform maps the creation operator of input mode i to
// sum_j matrix(i, j) * (creation operator of output mode j). Input and output
// registers have equal size; they differ only when an element renames ports
// (a beam splitter whose transmitted port gets a new label, a PBS routing
// polarizations to new paths).
//
// Beam splitter sign convention: a -> (a + b)/sqrt(2), b -> (b - a)/sqrt(2),
// identical for both polarizations.

#ifndef FOCKSIM_OPTICS_HPP
#define FOCKSIM_OPTICS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "focksim/fock.hpp"

namespace focksim {

inline constexpr double kUnitarityTolerance = 1e-12;

class ModeTransform {
   public:
    ModeTransform(ModeRegister input, ModeRegister output, Eigen::MatrixXcd matrix)
        : input_(std::move(input)), output_(std::move(output)), matrix_(std::move(matrix)) {
        const auto n = static_cast<Eigen::Index>(input_.size());
        if (output_.size() != input_.size()) throw InvalidInput("mode transform: input and output registers differ in size");
        if (matrix_.rows() != n || matrix_.cols() != n)
            throw InvalidInput("mode transform: matrix is " + std::to_string(matrix_.rows()) + "x" + std::to_string(matrix_.cols()) +
                               ", register has " + std::to_string(n) + " modes");
        double dev = n > 0 ? (matrix_ * matrix_.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() : 0.0;
        if (!(dev <= kUnitarityTolerance))
            throw InvalidInput("mode transform is not unitary (max deviation " + std::to_string(dev) + ")");
    }
    ModeTransform(const ModeRegister& reg, Eigen::MatrixXcd matrix) : ModeTransform(reg, reg, std::move(matrix)) {}

    static ModeTransform identity(const ModeRegister& reg) {
        const auto n = static_cast<Eigen::Index>(reg.size());
        return ModeTransform(reg, Eigen::MatrixXcd::Identity(n, n));
    }

    const ModeRegister& input() const { return input_; }
    const ModeRegister& output() const { return output_; }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }

   private:
    ModeRegister input_;
    ModeRegister output_;
    Eigen::MatrixXcd matrix_;
};

/// `first` followed by `second`.
inline ModeTransform then(const ModeTransform& first, const ModeTransform& second) {
    detail::require_same_register(first.output(), second.input(), "transform composition");
    return ModeTransform(first.input(), second.output(), first.matrix() * second.matrix());
}

inline FockKet apply_mode_transform(const FockKet& ket, const ModeTransform& t) {
    detail::require_same_register(ket.reg(), t.input(), "apply_mode_transform");
    const std::size_t n = t.input().size();
    std::vector<std::vector<Amplitude>> rows(n, std::vector<Amplitude>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rows[i][j] = t.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));

    TermMap out;
    for (const auto& [occ, amp] : ket.terms()) {
        double denom = 1.0;
        for (auto k : occ) denom *= detail::sqrt_factorial(k);
        FockKet branch = FockKet::vacuum(t.output()).scaled(amp / denom);
        for (std::size_t i = 0; i < n; ++i)
            for (int c = 0; c < occ[i]; ++c) branch = apply_linear_creation(branch, rows[i]);
        for (const auto& [o, a] : branch.terms()) detail::accumulate(out, o, a);
    }
    return FockKet(t.output(), std::move(out));
}

namespace detail {

inline ModeRegister renamed(const ModeRegister& reg, const std::vector<std::pair<Mode, Mode>>& renames) {
    std::vector<Mode> modes = reg.modes();
    for (const auto& [from, to] : renames) {
        auto i = reg.find(from);
        if (!i) throw InvalidInput("mode '" + from.label() + "' not in register");
        modes[*i] = to;
    }
    return ModeRegister(std::move(modes));
}

inline void require_spatial(const ModeRegister& reg, const std::string& spatial) {
    if (!reg.find(spatial, Polarization::H) || !reg.find(spatial, Polarization::V))
        throw InvalidInput("spatial mode '" + spatial + "' needs both H and V entries in the register");
}

inline Eigen::MatrixXcd identity_matrix(const ModeRegister& reg) {
    const auto n = static_cast<Eigen::Index>(reg.size());
    return Eigen::MatrixXcd::Identity(n, n);
}

inline Eigen::Index at(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace detail

/// Symmetric 50:50 beam splitter across spatial modes a and b.
inline ModeTransform bs_5050(const ModeRegister& reg, const std::string& a, const std::string& b) {
    if (a == b) throw InvalidInput("bs_5050: ports must differ");
    detail::require_spatial(reg, a);
    detail::require_spatial(reg, b);
    auto m = detail::identity_matrix(reg);
    const double h = 1.0 / std::sqrt(2.0);
    for (auto p : {Polarization::H, Polarization::V}) {
        auto ia = detail::at(reg.index(a, p)), ib = detail::at(reg.index(b, p));
        m(ia, ia) = h;
        m(ia, ib) = h;
        m(ib, ia) = -h;
        m(ib, ib) = h;
    }
    return ModeTransform(reg, std::move(m));
}

/// Beam splitter with transmissivity T: in -> sqrt(T) t + sqrt(1-T) r.
/// The input port `in` is relabelled `t` on the output side; `r` is the second
/// input port (normally vacuum) and keeps its label.
inline ModeTransform bs_unbalanced(const ModeRegister& reg, const std::string& in, const std::string& r, const std::string& t,
                                   double transmissivity) {
    if (!(transmissivity > 0.0 && transmissivity < 1.0))
        throw InvalidInput("beam splitter transmissivity must lie in (0, 1), got " + std::to_string(transmissivity));
    if (in == r || t == r) throw InvalidInput("bs_unbalanced: reflected port must differ from the other ports");
    detail::require_spatial(reg, in);
    detail::require_spatial(reg, r);
    if (t != in && reg.has_spatial(t)) throw InvalidInput("bs_unbalanced: output label '" + t + "' already in use");

    std::vector<std::pair<Mode, Mode>> renames;
    if (t != in)
        for (auto p : {Polarization::H, Polarization::V}) renames.push_back({Mode{in, p}, Mode{t, p}});
    ModeRegister out = detail::renamed(reg, renames);

    auto m = detail::identity_matrix(reg);
    const double st = std::sqrt(transmissivity), sr = std::sqrt(1.0 - transmissivity);
    for (auto p : {Polarization::H, Polarization::V}) {
        // Output columns share positions with the input rows after renaming.
        auto ii = detail::at(reg.index(in, p)), ir = detail::at(reg.index(r, p));
        m(ii, ii) = st;
        m(ii, ir) = sr;
        m(ir, ii) = -sr;
        m(ir, ir) = st;
    }
    return ModeTransform(reg, out, std::move(m));
}

/// Rotates polarization in one spatial mode:
/// V -> cos(theta) V + sin(theta) H, H -> cos(theta) H - sin(theta) V.
inline ModeTransform polarization_rotation(const ModeRegister& reg, const std::string& spatial, double theta) {
    if (!std::isfinite(theta)) throw InvalidInput("polarization rotation angle must be finite");
    detail::require_spatial(reg, spatial);
    auto m = detail::identity_matrix(reg);
    auto ih = detail::at(reg.index(spatial, Polarization::H)), iv = detail::at(reg.index(spatial, Polarization::V));
    const double c = std::cos(theta), s = std::sin(theta);
    m(iv, iv) = c;
    m(iv, ih) = s;
    m(ih, ih) = c;
    m(ih, iv) = -s;
    return ModeTransform(reg, std::move(m));
}

/// Polarizing beam splitter: H photons of `in` go to `out_h`, V photons to
/// `out_v`. The output register holds (out_h, H) and (out_v, V) in place of
/// the two input modes.
inline ModeTransform pbs(const ModeRegister& reg, const std::string& in, const std::string& out_h, const std::string& out_v) {
    if (out_h == out_v) throw InvalidInput("pbs: output paths must differ");
    detail::require_spatial(reg, in);
    for (const auto& o : {out_h, out_v})
        if (o != in && reg.has_spatial(o)) throw InvalidInput("pbs: output label '" + o + "' already in use");
    ModeRegister out = detail::renamed(reg, {{Mode{in, Polarization::H}, Mode{out_h, Polarization::H}},
                                             {Mode{in, Polarization::V}, Mode{out_v, Polarization::V}}});
    return ModeTransform(reg, out, detail::identity_matrix(reg));
}

/// Inverse routing of pbs: (h_path, H) and (v_path, V) merge into `out`.
inline ModeTransform pbs_combine(const ModeRegister& reg, const std::string& h_path, const std::string& v_path,
                                 const std::string& out) {
    if (h_path == v_path) throw InvalidInput("pbs_combine: input paths must differ");
    if (!reg.find(h_path, Polarization::H)) throw InvalidInput("pbs_combine: mode '" + h_path + "H' not in register");
    if (!reg.find(v_path, Polarization::V)) throw InvalidInput("pbs_combine: mode '" + v_path + "V' not in register");
    if (out != h_path && out != v_path && reg.has_spatial(out)) throw InvalidInput("pbs_combine: output label '" + out + "' already in use");
    ModeRegister renamed = detail::renamed(reg, {{Mode{h_path, Polarization::H}, Mode{out, Polarization::H}},
                                                 {Mode{v_path, Polarization::V}, Mode{out, Polarization::V}}});
    return ModeTransform(reg, renamed, detail::identity_matrix(reg));
}

}  // namespace focksim

#endif
