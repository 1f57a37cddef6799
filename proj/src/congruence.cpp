#include "oddcover/congruence.hpp"

#include "oddcover/errors.hpp"

#include <algorithm>
#include <set>

namespace oddcover {

bool ResidueClass::contains(const Integer& x) const {
    Integer r = x % modulus;
    if (r < 0) r += modulus;
    return r == representative;
}

bool CoveringSystem::operator==(const CoveringSystem& other) const {
    if (congruences.size() != other.congruences.size()) return false;
    auto a = congruences;
    auto b = other.congruences;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

long ModulusAudit::multiplicity(const Natural& m) const {
    auto it = multiplicities.find(m);
    return it == multiplicities.end() ? 0 : it->second;
}

std::string to_string(const Congruence& c) { return to_decimal(c.residue) + " mod " + to_decimal(c.modulus); }
std::string to_string(const ResidueClass& c) {
    return to_decimal(c.representative) + " mod " + to_decimal(c.modulus);
}

Congruence normalize(const Integer& residue, const Natural& modulus) {
    if (modulus < 1) throw ZeroModulus("modulus must be at least 1, got " + to_decimal(modulus));
    Integer r = residue % modulus;
    if (r < 0) r += modulus;
    return {r, modulus};
}

bool satisfies(const Integer& x, const Congruence& c) {
    return mpz_congruent_p(x.get_mpz_t(), c.residue.get_mpz_t(), c.modulus.get_mpz_t()) != 0;
}

std::optional<ResidueClass> intersect_class(const ResidueClass& a, const ResidueClass& b) {
    auto hit = crt_pair(a.representative, a.modulus, b.representative, b.modulus);
    if (!hit) return std::nullopt;
    return ResidueClass{hit->first, hit->second};
}

bool congruence_contains_class(const Congruence& c, const ResidueClass& x) {
    if (mpz_divisible_p(x.modulus.get_mpz_t(), c.modulus.get_mpz_t()) == 0) return false;
    return mpz_congruent_p(x.representative.get_mpz_t(), c.residue.get_mpz_t(), c.modulus.get_mpz_t()) != 0;
}

CoveringSystem shift_system(const CoveringSystem& s, const Integer& j) {
    CoveringSystem out = s;
    for (auto& c : out.congruences) c = normalize(c.residue + j, c.modulus);
    return out;
}

CoveringSystem dedupe(const CoveringSystem& s) {
    CoveringSystem out;
    out.declared_k = s.declared_k;
    out.declared_t = s.declared_t;
    std::set<Congruence> seen;
    for (const auto& c : s.congruences) {
        if (seen.insert(c).second) out.congruences.push_back(c);
    }
    return out;
}

ModulusAudit audit_moduli(const CoveringSystem& s) {
    ModulusAudit a;
    const CoveringSystem unique = dedupe(s);
    for (const auto& c : unique.congruences) {
        ++a.multiplicities[c.modulus];
        if (c.modulus % 2 == 0) a.all_odd = false;
        if (c.modulus <= 1) a.all_greater_than_one = false;
    }
    for (const auto& [m, count] : a.multiplicities) {
        if (s.declared_k && m == *s.declared_k) {
            a.k_count = count;
            continue;
        }
        if (count > 1) a.offending.emplace_back(m, count);
    }
    const bool k_within = !s.declared_t || a.k_count <= *s.declared_t;
    a.repeated_ok = a.offending.empty() && k_within;
    return a;
}

Rational density_sum(const CoveringSystem& s) {
    Rational total = 0;
    for (const auto& c : dedupe(s).congruences) total += Rational(Natural(1), c.modulus);
    total.canonicalize();
    return total;
}

Natural lcm_of_moduli(const CoveringSystem& s) {
    Natural l = 1;
    for (const auto& c : s.congruences) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.modulus.get_mpz_t());
    return l;
}

nlohmann::json to_json(const CoveringSystem& s) {
    nlohmann::json j;
    j["k"] = s.declared_k ? nlohmann::json(to_decimal(*s.declared_k)) : nlohmann::json(nullptr);
    j["t"] = s.declared_t ? nlohmann::json(*s.declared_t) : nlohmann::json(nullptr);
    auto& list = j["congruences"] = nlohmann::json::array();
    for (const auto& c : s.congruences) {
        list.push_back({{"r", to_decimal(c.residue)}, {"m", to_decimal(c.modulus)}});
    }
    return j;
}

CoveringSystem system_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("congruences") || !j["congruences"].is_array()) {
        throw FormatError("covering system JSON needs a \"congruences\" array");
    }
    auto big = [](const nlohmann::json& v, const char* what) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return v.dump();
        throw FormatError(std::string("field '") + what + "' must be a decimal string");
    };
    CoveringSystem s;
    if (j.contains("k") && !j["k"].is_null()) s.declared_k = natural_from_decimal(big(j["k"], "k"));
    if (j.contains("t") && !j["t"].is_null()) {
        if (!j["t"].is_number_integer()) throw FormatError("field 't' must be an integer or null");
        s.declared_t = j["t"].get<long>();
    }
    for (const auto& item : j["congruences"]) {
        if (!item.is_object() || !item.contains("r") || !item.contains("m")) {
            throw FormatError("each congruence needs \"r\" and \"m\"");
        }
        s.congruences.push_back(normalize(integer_from_decimal(big(item["r"], "r")),
                                          natural_from_decimal(big(item["m"], "m"))));
    }
    return s;
}

nlohmann::json to_json(const ModulusAudit& a) {
    nlohmann::json mult = nlohmann::json::object();
    for (const auto& [m, count] : a.multiplicities) mult[to_decimal(m)] = count;
    nlohmann::json off = nlohmann::json::array();
    for (const auto& [m, count] : a.offending) off.push_back({{"modulus", to_decimal(m)}, {"count", count}});
    return {{"multiplicities", mult},
            {"all_odd", a.all_odd},
            {"all_greater_than_one", a.all_greater_than_one},
            {"repeated_ok", a.repeated_ok},
            {"k_count", a.k_count},
            {"offending", off}};
}

}  // namespace oddcover
