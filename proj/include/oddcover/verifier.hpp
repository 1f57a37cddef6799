#pragma once

#include "oddcover/congruence.hpp"

#include <optional>
#include <vector>

namespace oddcover {

enum class Verdict { Covers, Uncovered };
enum class VerifyMode { Auto, Recursive, Bruteforce };

struct CoverageResult {
    Verdict verdict = Verdict::Covers;
    std::optional<ResidueClass> witness;  // present iff Uncovered
};

struct UncoveredReport {
    std::vector<ResidueClass> classes;  // sorted by (modulus, representative)
    Rational total_density = 0;
};

inline const Natural& default_bf_threshold() {
    static const Natural threshold = 10000000;
    return threshold;
}

CoverageResult verify(const CoveringSystem& s, VerifyMode mode = VerifyMode::Auto,
                      const Natural& bf_threshold = default_bf_threshold());
CoverageResult verify_recursive(const CoveringSystem& s);
CoverageResult verify_bruteforce(const CoveringSystem& s, const Natural& threshold = default_bf_threshold());
UncoveredReport enumerate_uncovered(const CoveringSystem& s);

// Elements of `elements` that satisfy no congruence, in input order.
std::vector<Integer> covers_subset(const CoveringSystem& s, const std::vector<Integer>& elements);

const char* verdict_name(Verdict v);
VerifyMode parse_mode(const std::string& text);

}  // namespace oddcover
