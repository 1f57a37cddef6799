#include "oddcover/sequences.hpp"

#include "oddcover/constructions.hpp"
#include "oddcover/errors.hpp"
#include "oddcover/verifier.hpp"

#include <algorithm>
#include <cstdint>

namespace oddcover {

namespace {

struct SequenceEntry {
    SequenceId id;
    const char* name;
    const char* oeis;
};

constexpr SequenceEntry kSequences[] = {
    {SequenceId::TwoSquares, "two_squares", "A001481"},
    {SequenceId::TwoCubes, "two_cubes", "A045980"},
    {SequenceId::Powerful, "powerful", "A001694"},
    {SequenceId::PrimePowers, "prime_powers", "A000961"},
    {SequenceId::Derangements, "derangements", "A000166"},
    {SequenceId::Fermat, "fermat", "A000215"},
    {SequenceId::Perfect, "perfect", "A000396"},
};

// Exponents p with 2^p - 1 prime, enough for every even perfect number below 2^62.
constexpr unsigned kMersenneExponents[] = {2, 3, 5, 7, 13, 17, 19, 31};

// Sieve-based sequences are generated in machine words.
constexpr std::uint64_t kDenseLimit = 2000000000ULL;

std::uint64_t dense_limit(SequenceId id, const Natural& limit) {
    if (limit > kDenseLimit) {
        throw InvalidParameters(sequence_name(id) + " is generated up to " + std::to_string(kDenseLimit) + " only");
    }
    return limit.get_ui();
}

std::vector<Natural> from_marks(const std::vector<bool>& marks) {
    std::vector<Natural> out;
    for (std::size_t i = 0; i < marks.size(); ++i) {
        if (marks[i]) out.emplace_back(static_cast<unsigned long>(i));
    }
    return out;
}

std::vector<Natural> two_squares(std::uint64_t n) {
    std::vector<bool> marks(n + 1, false);
    for (std::uint64_t x = 0; x * x <= n; ++x) {
        for (std::uint64_t y = x; x * x + y * y <= n; ++y) marks[x * x + y * y] = true;
    }
    return from_marks(marks);
}

std::vector<Natural> two_cubes(std::uint64_t n) {
    std::vector<bool> marks(n + 1, false);
    for (std::uint64_t x = 0; x * x * x <= n; ++x) {
        for (std::uint64_t y = x; x * x * x + y * y * y <= n; ++y) marks[x * x * x + y * y * y] = true;
    }
    return from_marks(marks);
}

// Every powerful number is a^2 b^3.
std::vector<Natural> powerful(std::uint64_t n) {
    std::vector<bool> marks(n + 1, false);
    for (std::uint64_t b = 1; b * b * b <= n; ++b) {
        for (std::uint64_t a = 1; a * a * b * b * b <= n; ++a) marks[a * a * b * b * b] = true;
    }
    return from_marks(marks);
}

std::vector<Natural> prime_powers(std::uint64_t n) {
    std::vector<bool> composite(n + 1, false);
    std::vector<bool> marks(n + 1, false);
    if (n >= 1) marks[1] = true;
    for (std::uint64_t p = 2; p <= n; ++p) {
        if (composite[p]) continue;
        for (std::uint64_t m = p * p; m <= n; m += p) composite[m] = true;
        for (std::uint64_t pe = p;; pe *= p) {
            marks[pe] = true;
            if (pe > n / p) break;
        }
    }
    return from_marks(marks);
}

std::vector<Natural> derangements(const Natural& limit) {
    std::set<Natural> seen;
    Natural d = 1;  // d_0
    for (unsigned long n = 0;; ++n) {
        if (n > 0) d = n * d + (n % 2 == 0 ? 1 : -1);
        if (d > limit) break;
        seen.insert(d);
    }
    return {seen.begin(), seen.end()};
}

std::vector<Natural> fermat(const Natural& limit) {
    std::vector<Natural> out;
    for (unsigned long a = 1;; ++a) {
        const Natural f = pow_natural(2, 1UL << a) + 1;
        if (f > limit) break;
        out.push_back(f);
    }
    return out;
}

std::vector<Natural> perfect(const Natural& limit) {
    std::vector<Natural> out;
    for (unsigned p : kMersenneExponents) {
        const Natural v = pow_natural(2, p - 1) * (pow_natural(2, p) - 1);
        if (v <= limit) out.push_back(v);
    }
    return out;
}

}  // namespace

const std::vector<SequenceId>& all_sequences() {
    static const std::vector<SequenceId> ids = [] {
        std::vector<SequenceId> v;
        for (const auto& s : kSequences) v.push_back(s.id);
        return v;
    }();
    return ids;
}

std::string sequence_name(SequenceId id) {
    for (const auto& s : kSequences) {
        if (s.id == id) return s.name;
    }
    return "unknown";
}

std::string oeis_id(SequenceId id) {
    for (const auto& s : kSequences) {
        if (s.id == id) return s.oeis;
    }
    return "";
}

SequenceId parse_sequence(const std::string& name) {
    for (const auto& s : kSequences) {
        if (name == s.name) return s.id;
    }
    throw InvalidParameters("unknown sequence '" + name + "'");
}

std::vector<Natural> generate(SequenceId id, const Natural& limit) {
    if (limit < 0) throw InvalidParameters("limit must be nonnegative");
    switch (id) {
        case SequenceId::TwoSquares: return two_squares(dense_limit(id, limit));
        case SequenceId::TwoCubes: return two_cubes(dense_limit(id, limit));
        case SequenceId::Powerful: return powerful(dense_limit(id, limit));
        case SequenceId::PrimePowers: return prime_powers(dense_limit(id, limit));
        case SequenceId::Derangements: return derangements(limit);
        case SequenceId::Fermat: return fermat(limit);
        case SequenceId::Perfect: return perfect(limit);
    }
    return {};
}

Natural derangement_mod(unsigned long n, const Natural& m) {
    if (m < 1) throw InvalidParameters("modulus must be positive");
    Natural d = Natural(1) % m;
    for (unsigned long i = 1; i <= n; ++i) {
        d = i * d + (i % 2 == 0 ? 1 : -1);
        d = normalize(d, m).residue;
    }
    return d;
}

std::set<Natural> attainable_residues(SequenceId id, const Natural& modulus, const Natural& limit) {
    if (modulus < 1) throw InvalidParameters("modulus must be positive");
    std::set<Natural> out;
    for (const auto& x : generate(id, limit)) out.insert(Natural(x % modulus));
    return out;
}

bool in_S(const Integer& a) {
    return mpz_divisible_ui_p(a.get_mpz_t(), 3) == 0 || mpz_divisible_ui_p(a.get_mpz_t(), 9) != 0;
}

bool in_S_j(const Integer& a, long j) {
    const Natural r = normalize(a, 9).residue;
    return r == normalize(Integer(j - 3), 9).residue || r == normalize(Integer(j + 3), 9).residue;
}

bool touchard_admissible(const Integer& n) {
    return normalize(n, 12).residue == 1 || normalize(n, 36).residue == 9;
}

namespace {

nlohmann::json to_json_list(const std::vector<Natural>& values) {
    auto out = nlohmann::json::array();
    for (const auto& v : values) out.push_back(to_decimal(v));
    return out;
}

nlohmann::json to_json_list(const std::set<Natural>& values) {
    auto out = nlohmann::json::array();
    for (const auto& v : values) out.push_back(v.get_si());
    return out;
}

std::vector<Natural> positive_members(SequenceId id, const Natural& limit) {
    auto all = generate(id, limit);
    all.erase(std::remove_if(all.begin(), all.end(), [](const Natural& x) { return x < 1; }), all.end());
    return all;
}

}  // namespace

nlohmann::json sequence_coverage(const CoveringSystem& system, const std::vector<SequenceId>& ids,
                                 const Natural& limit) {
    nlohmann::json report;
    report["limit"] = to_decimal(limit);
    report["sequences"] = nlohmann::json::object();
    long violations = 0;
    for (SequenceId id : ids) {
        const auto members = positive_members(id, limit);
        const auto missed = covers_subset(system, {members.begin(), members.end()});
        nlohmann::json entry;
        entry["oeis"] = oeis_id(id);
        entry["count"] = members.size();
        entry["residues_mod_9"] = to_json_list(attainable_residues(id, 9, limit));
        entry["uncovered"] = to_json_list(missed);
        violations += static_cast<long>(missed.size());
        report["sequences"][sequence_name(id)] = entry;
    }
    report["violations"] = violations;
    report["passed"] = violations == 0;
    return report;
}

nlohmann::json union_covering_check(const Natural& limit) {
    std::set<Natural> members;
    for (SequenceId id : all_sequences()) {
        for (const auto& x : positive_members(id, limit)) members.insert(x);
    }
    std::vector<Integer> exceptions;
    for (const auto& x : members) {
        if (!in_S(x)) exceptions.push_back(x);
    }

    nlohmann::json report;
    report["limit"] = to_decimal(limit);
    report["union_size"] = members.size();
    report["exceptions"] = nlohmann::json::array();
    for (const auto& e : exceptions) report["exceptions"].push_back(to_decimal(e));

    if (members.empty()) {
        report["sequences"] = nlohmann::json::object();
        report["violations"] = 0;
        report["passed"] = true;
        return report;
    }
    try {
        const CoveringSystem cover = subset_covering_mod9(0, exceptions);
        nlohmann::json coverage = sequence_coverage(cover, all_sequences(), limit);
        report["congruences"] = cover.congruences.size();
        report["sequences"] = coverage["sequences"];
        report["violations"] = coverage["violations"];
        report["passed"] = coverage["passed"];
    } catch (const Error& e) {
        report["construction_error"] = {{"kind", e.kind()}, {"message", e.what()}};
        report["sequences"] = nlohmann::json::object();
        report["violations"] = nullptr;
        report["passed"] = false;
    }
    return report;
}

}  // namespace oddcover
