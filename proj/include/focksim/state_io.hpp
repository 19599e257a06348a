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

// Plain-text ket format:
//
//   # modes: aH aV bH bV
//   <re> <im> : <n1> <n2> ... <nm>
//
// Amplitudes are printed with 17 significant digits and terms appear in
// lexicographic occupation order, so equal kets serialize to equal bytes.

#ifndef FOCKSIM_STATE_IO_HPP
#define FOCKSIM_STATE_IO_HPP

#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "focksim/fock.hpp"

namespace focksim {

inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string write_state(const FockKet& ket) {
    std::string out = "# modes:";
    for (const auto& m : ket.reg()) out += " " + m.label();
    out += '\n';
    for (const auto& [occ, amp] : ket.terms()) {
        out += format_real(amp.real()) + " " + format_real(amp.imag()) + " :";
        for (auto n : occ) out += " " + std::to_string(n);
        out += '\n';
    }
    return out;
}

inline FockKet read_state(std::istream& in) {
    std::string line;
    int lineno = 0;
    std::optional<ModeRegister> reg;
    TermMap terms;
    while (std::getline(in, line)) {
        ++lineno;
        auto where = [&] { return "state line " + std::to_string(lineno) + ": "; };
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (!reg) {
            const std::string tag = "# modes:";
            if (line.rfind(tag, 0) != 0) throw InvalidInput(where() + "expected '# modes:' header");
            std::istringstream ls(line.substr(tag.size()));
            std::vector<Mode> modes;
            std::string label;
            while (ls >> label) modes.push_back(parse_mode_label(label));
            reg = ModeRegister(std::move(modes));
            continue;
        }
        if (line[0] == '#') continue;
        std::istringstream ls(line);
        double re, im;
        std::string colon;
        if (!(ls >> re >> im >> colon) || colon != ":") throw InvalidInput(where() + "expected '<re> <im> : <occupations>'");
        if (!std::isfinite(re) || !std::isfinite(im)) throw InvalidInput(where() + "amplitude is not finite");
        Occupation occ;
        long n;
        while (ls >> n) {
            if (n < 0 || n > kMaxPhotonsPerMode) throw InvalidInput(where() + "occupation out of range");
            occ.push_back(static_cast<std::uint8_t>(n));
        }
        if (!ls.eof()) throw InvalidInput(where() + "trailing garbage");
        if (occ.size() != reg->size())
            throw InvalidInput(where() + "expected " + std::to_string(reg->size()) + " occupations, got " + std::to_string(occ.size()));
        detail::accumulate(terms, occ, Amplitude{re, im});
    }
    if (!reg) throw InvalidInput("state: missing '# modes:' header");
    return FockKet(*reg, std::move(terms));
}

inline FockKet read_state(const std::string& text) {
    std::istringstream in(text);
    return read_state(in);
}

}  // namespace focksim

#endif
