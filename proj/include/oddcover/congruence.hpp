#pragma once

#include "oddcover/intmath.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oddcover {

struct Congruence {
    Natural residue;
    Natural modulus;

    bool operator==(const Congruence&) const = default;
    auto operator<=>(const Congruence& o) const {
        if (auto c = cmp(modulus, o.modulus); c != 0) return c <=> 0;
        return cmp(residue, o.residue) <=> 0;
    }
};

struct ResidueClass {
    Natural representative;
    Natural modulus;

    bool operator==(const ResidueClass&) const = default;
    bool contains(const Integer& x) const;
};

struct CoveringSystem {
    std::vector<Congruence> congruences;
    std::optional<Natural> declared_k;
    std::optional<long> declared_t;

    // Multiset equality of the (residue, modulus) pairs.
    bool operator==(const CoveringSystem& other) const;
};

struct ModulusAudit {
    std::map<Natural, long> multiplicities;
    bool all_odd = true;
    bool all_greater_than_one = true;
    bool repeated_ok = true;
    long k_count = 0;
    std::vector<std::pair<Natural, long>> offending;

    long multiplicity(const Natural& m) const;
};

std::string to_string(const Congruence& c);     // "r mod m"
std::string to_string(const ResidueClass& c);

Congruence normalize(const Integer& residue, const Natural& modulus);
bool satisfies(const Integer& x, const Congruence& c);

std::optional<ResidueClass> intersect_class(const ResidueClass& a, const ResidueClass& b);
bool congruence_contains_class(const Congruence& c, const ResidueClass& x);

CoveringSystem shift_system(const CoveringSystem& s, const Integer& j);
CoveringSystem dedupe(const CoveringSystem& s);
ModulusAudit audit_moduli(const CoveringSystem& s);
Rational density_sum(const CoveringSystem& s);

Natural lcm_of_moduli(const CoveringSystem& s);

nlohmann::json to_json(const CoveringSystem& s);
CoveringSystem system_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ModulusAudit& a);

}  // namespace oddcover
