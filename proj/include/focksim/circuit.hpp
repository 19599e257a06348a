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

// Circuit description files, one element per line:
//
//   BS50 a b                      50:50 beam splitter across a and b
//   BSU a c0 c1 T=0.666...        a -> sqrt(T) c0 + sqrt(1-T) c1
//   ROT b theta=1.5707963267948966
//   PBS c1 e1h e1v                H of c1 -> e1h, V of c1 -> e1v
//   PBSJ e1h e1v e1               recombine the two PBS paths into e1
//
// '#' starts a comment. Second input ports missing from the state's register
// (the b of BS50, the reflected port of BSU) are added in vacuum.

#ifndef FOCKSIM_CIRCUIT_HPP
#define FOCKSIM_CIRCUIT_HPP

#include <cmath>
#include <cstdlib>
#include <istream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "focksim/optics.hpp"

namespace focksim {

struct BeamSplitter5050 {
    std::string a, b;
};
struct BeamSplitterUnbalanced {
    std::string in, transmitted, reflected;
    double transmissivity;
};
struct PolarizationRotation {
    std::string spatial;
    double theta;
};
struct PolarizingSplit {
    std::string in, out_h, out_v;
};
struct PolarizingJoin {
    std::string h_path, v_path, out;
};

using CircuitElement = std::variant<BeamSplitter5050, BeamSplitterUnbalanced, PolarizationRotation, PolarizingSplit, PolarizingJoin>;

struct Circuit {
    std::vector<CircuitElement> elements;
};

namespace detail {

inline double parse_keyed_number(const std::string& token, const std::string& key, const std::string& where) {
    const std::string prefix = key + "=";
    if (token.rfind(prefix, 0) != 0) throw InvalidInput(where + "expected '" + prefix + "<number>', got '" + token + "'");
    const std::string num = token.substr(prefix.size());
    char* end = nullptr;
    double v = std::strtod(num.c_str(), &end);
    if (num.empty() || *end != '\0' || !std::isfinite(v)) throw InvalidInput(where + "bad number '" + num + "'");
    return v;
}

}  // namespace detail

inline Circuit parse_circuit(std::istream& in) {
    Circuit c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = "circuit line " + std::to_string(lineno) + ": ";
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        auto need = [&](std::size_t n) {
            if (tok.size() != n) throw InvalidInput(where + tok[0] + " takes " + std::to_string(n - 1) + " arguments");
        };
        const std::string& op = tok[0];
        if (op == "BS50") {
            need(3);
            c.elements.push_back(BeamSplitter5050{tok[1], tok[2]});
        } else if (op == "BSU") {
            need(5);
            c.elements.push_back(BeamSplitterUnbalanced{tok[1], tok[2], tok[3], detail::parse_keyed_number(tok[4], "T", where)});
        } else if (op == "ROT") {
            need(3);
            c.elements.push_back(PolarizationRotation{tok[1], detail::parse_keyed_number(tok[2], "theta", where)});
        } else if (op == "PBS") {
            need(4);
            c.elements.push_back(PolarizingSplit{tok[1], tok[2], tok[3]});
        } else if (op == "PBSJ") {
            need(4);
            c.elements.push_back(PolarizingJoin{tok[1], tok[2], tok[3]});
        } else {
            throw InvalidInput(where + "unknown element '" + op + "'");
        }
    }
    return c;
}

inline Circuit parse_circuit(const std::string& text) {
    std::istringstream in(text);
    return parse_circuit(in);
}

namespace detail {

inline FockKet ensure_spatial(const FockKet& ket, const std::string& spatial) {
    if (ket.reg().has_spatial(spatial)) return ket;
    return with_vacuum_modes(ket, ModeRegister::spatial({spatial}));
}

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace detail

/// The transform an element performs on a ket over `reg`.
inline ModeTransform element_transform(const ModeRegister& reg, const CircuitElement& e) {
    return std::visit(detail::overloaded{
                          [&](const BeamSplitter5050& x) { return bs_5050(reg, x.a, x.b); },
                          [&](const BeamSplitterUnbalanced& x) { return bs_unbalanced(reg, x.in, x.reflected, x.transmitted, x.transmissivity); },
                          [&](const PolarizationRotation& x) { return polarization_rotation(reg, x.spatial, x.theta); },
                          [&](const PolarizingSplit& x) { return pbs(reg, x.in, x.out_h, x.out_v); },
                          [&](const PolarizingJoin& x) { return pbs_combine(reg, x.h_path, x.v_path, x.out); },
                      },
                      e);
}

inline FockKet run_circuit(FockKet ket, const Circuit& circuit) {
    for (const auto& e : circuit.elements) {
        if (const auto* bs = std::get_if<BeamSplitter5050>(&e)) ket = detail::ensure_spatial(ket, bs->b);
        if (const auto* bs = std::get_if<BeamSplitterUnbalanced>(&e)) ket = detail::ensure_spatial(ket, bs->reflected);
        ket = apply_mode_transform(ket, element_transform(ket.reg(), e));
    }
    return ket;
}

}  // namespace focksim

#endif
