#pragma once

#include "oddcover/congruence.hpp"

#include <json.hpp>
#include <set>
#include <string>
#include <vector>

namespace oddcover {

enum class SequenceId { TwoSquares, TwoCubes, Powerful, PrimePowers, Derangements, Fermat, Perfect };

const std::vector<SequenceId>& all_sequences();
std::string sequence_name(SequenceId id);
SequenceId parse_sequence(const std::string& name);  // InvalidParameters
std::string oeis_id(SequenceId id);

// Members <= limit, sorted and without repeats.
std::vector<Natural> generate(SequenceId id, const Natural& limit);

// d_n mod m via d_0 = 1, d_n = n d_{n-1} + (-1)^n.
Natural derangement_mod(unsigned long n, const Natural& m);

std::set<Natural> attainable_residues(SequenceId id, const Natural& modulus, const Natural& limit);

bool in_S(const Integer& a);                    // 3 does not divide a, or 9 divides a
bool in_S_j(const Integer& a, long j);          // a = j - 3 or j + 3 (mod 9)
bool touchard_admissible(const Integer& n);     // n = 1 (mod 12) or n = 9 (mod 36)

// Which members of the chosen sequences in [1, limit] escape `system`.
nlohmann::json sequence_coverage(const CoveringSystem& system, const std::vector<SequenceId>& ids,
                                 const Natural& limit);

// Builds the mod-9 subset covering with the union's members outside S as
// exceptions and checks that it catches every member in [1, limit].
nlohmann::json union_covering_check(const Natural& limit);

}  // namespace oddcover
