#pragma once

// Small exhaustive checks used as independent references in the tests.

#include "oddcover/congruence.hpp"

#include <numeric>
#include <vector>

namespace oracle {

inline unsigned long lcm_small(const oddcover::CoveringSystem& s) {
    unsigned long l = 1;
    for (const auto& c : s.congruences) l = std::lcm(l, c.modulus.get_ui());
    return l;
}

inline bool covered(const oddcover::CoveringSystem& s, long x) {
    for (const auto& c : s.congruences) {
        const long m = c.modulus.get_si();
        if (((x % m) + m) % m == c.residue.get_si()) return true;
    }
    return false;
}

// Residues in [0, lcm) hit by no congruence.
inline std::vector<unsigned long> uncovered_residues(const oddcover::CoveringSystem& s) {
    std::vector<unsigned long> out;
    const unsigned long l = lcm_small(s);
    for (unsigned long x = 0; x < l; ++x) {
        if (!covered(s, static_cast<long>(x))) out.push_back(x);
    }
    return out;
}

inline bool covers(const oddcover::CoveringSystem& s) { return uncovered_residues(s).empty(); }

}  // namespace oracle
