#pragma once

#include <iostream>
#include <sstream>
#include <string>

#include "prgkit/robp.hpp"

namespace prgkit {

// Text format:
//   robp T D w_0 w_1 ... w_T
//   one line per state per layer: the 2^D edge targets, layers in order
//   one final line: w_T accept labels (0/1)
// Whitespace-separated decimal throughout; round-trips exactly.
inline void write_robp(std::ostream& os, const branching_program& m) {
    os << "robp " << m.length() << ' ' << m.word_bits;
    for (std::uint32_t w : m.widths) os << ' ' << w;
    os << '\n';
    for (int i = 0; i < m.length(); ++i) {
        for (const auto& edges : m.next[i]) {
            for (std::size_t z = 0; z < edges.size(); ++z) os << (z ? " " : "") << edges[z];
            os << '\n';
        }
    }
    for (std::uint32_t s = 0; s < m.widths.back(); ++s)
        os << (s ? " " : "") << static_cast<int>(m.accept[s]);
    os << '\n';
}

inline branching_program read_robp(std::istream& is) {
    std::string magic;
    if (!(is >> magic) || magic != "robp") throw format_error("robp: missing 'robp' header");
    int T = 0, D = 0;
    if (!(is >> T >> D) || T < 1 || D < 1) throw format_error("robp: bad T or D");
    branching_program m;
    m.word_bits = D;
    m.widths.resize(T + 1);
    for (auto& w : m.widths)
        if (!(is >> w)) throw format_error("robp: truncated width list");
    m.next.resize(T);
    for (int i = 0; i < T; ++i) {
        m.next[i].assign(m.widths[i], std::vector<std::uint32_t>(m.words_per_state()));
        for (auto& edges : m.next[i])
            for (auto& tgt : edges)
                if (!(is >> tgt)) throw format_error("robp: truncated transition table");
    }
    m.accept.resize(m.widths.back());
    for (auto& a : m.accept) {
        int v;
        if (!(is >> v) || (v != 0 && v != 1)) throw format_error("robp: bad accept label");
        a = static_cast<std::uint8_t>(v);
    }
    m.validate();
    return m;
}

inline std::string robp_to_string(const branching_program& m) {
    std::ostringstream os;
    write_robp(os, m);
    return os.str();
}

inline branching_program robp_from_string(const std::string& text) {
    std::istringstream is(text);
    return read_robp(is);
}

}  // namespace prgkit
