#include "oddcover/errors.hpp"
#include "oddcover/sequences.hpp"

#include <doctest.h>

using namespace oddcover;

namespace {

std::vector<Natural> nat(std::initializer_list<long> xs) {
    std::vector<Natural> out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

bool is_two_squares(long n) {
    for (long x = 0; x * x <= n; ++x) {
        for (long y = 0; x * x + y * y <= n; ++y) {
            if (x * x + y * y == n) return true;
        }
    }
    return false;
}

bool is_two_cubes(long n) {
    for (long x = 0; x * x * x <= n; ++x) {
        for (long y = 0; x * x * x + y * y * y <= n; ++y) {
            if (x * x * x + y * y * y == n) return true;
        }
    }
    return false;
}

bool is_powerful(long n) {
    if (n < 1) return false;
    for (long p = 2; p <= n; ++p) {
        if (n % p != 0) continue;
        if (n % (p * p) != 0) return false;
        while (n % p == 0) n /= p;
    }
    return true;
}

bool is_prime_power(long n) {
    if (n == 1) return true;
    if (n < 1) return false;
    long p = 2;
    while (n % p != 0) ++p;
    while (n % p == 0) n /= p;
    return n == 1;
}

long sigma(long n) {
    long s = 0;
    for (long d = 1; d <= n; ++d) s += n % d == 0 ? d : 0;
    return s;
}

// d_n from n! * sum (-1)^i / i!, exactly.
Natural derangement_exact(unsigned long n) {
    Rational sum = 0;
    Natural fact = 1;
    for (unsigned long i = 0; i <= n; ++i) {
        if (i > 0) fact *= i;
        sum += Rational(i % 2 == 0 ? 1 : -1) / Rational(fact);
    }
    Rational total = sum * Rational(fact);
    total.canonicalize();
    return total.get_num();
}

}  // namespace

TEST_CASE("generate examples") {
    CHECK(generate(SequenceId::Fermat, 300) == nat({5, 17, 257}));
    CHECK(generate(SequenceId::Perfect, 10000) == nat({6, 28, 496, 8128}));
    CHECK(generate(SequenceId::Powerful, 50) == nat({1, 4, 8, 9, 16, 25, 27, 32, 36, 49}));
    CHECK(generate(SequenceId::Derangements, 50) == nat({0, 1, 2, 9, 44}));
    CHECK(generate(SequenceId::PrimePowers, 10) == nat({1, 2, 3, 4, 5, 7, 8, 9}));
    CHECK(generate(SequenceId::TwoSquares, 10) == nat({0, 1, 2, 4, 5, 8, 9, 10}));
    CHECK(generate(SequenceId::TwoCubes, 30) == nat({0, 1, 2, 8, 9, 16, 27, 28}));
    CHECK(generate(SequenceId::Perfect, 5).empty());
    CHECK(generate(SequenceId::Perfect, Natural("10000000000000000000")).size() == 8);
}

TEST_CASE("generated members match their definitions") {
    const long limit = 3000;
    std::map<SequenceId, bool (*)(long)> defs = {{SequenceId::TwoSquares, is_two_squares},
                                                  {SequenceId::TwoCubes, is_two_cubes},
                                                  {SequenceId::Powerful, is_powerful},
                                                  {SequenceId::PrimePowers, is_prime_power}};
    for (auto [id, pred] : defs) {
        CAPTURE(sequence_name(id));
        std::vector<Natural> expected;
        for (long n = 0; n <= limit; ++n) {
            if (pred(n)) expected.emplace_back(n);
        }
        CHECK(generate(id, limit) == expected);
    }
    std::vector<Natural> perfect;
    for (long n = 1; n <= 10000; ++n) {
        if (sigma(n) == 2 * n) perfect.emplace_back(n);
    }
    CHECK(generate(SequenceId::Perfect, 10000) == perfect);
    std::set<Natural> der;
    for (unsigned long n = 0; n < 25; ++n) {
        if (derangement_exact(n) <= Natural("1000000000000000")) der.insert(derangement_exact(n));
    }
    CHECK(generate(SequenceId::Derangements, Natural("1000000000000000")) == std::vector<Natural>(der.begin(), der.end()));
    for (const auto& f : generate(SequenceId::Fermat, Natural("100000000000000000000"))) {
        const Natural m = f - 1;
        CHECK(mpz_popcount(m.get_mpz_t()) == 1);
        CHECK(mpz_scan1(m.get_mpz_t(), 0) % 2 == 0);
    }
    for (SequenceId id : all_sequences()) {
        const auto xs = generate(id, 5000);
        CHECK(std::adjacent_find(xs.begin(), xs.end(), [](auto& a, auto& b) { return !(a < b); }) == xs.end());
        CHECK(parse_sequence(sequence_name(id)) == id);
    }
    CHECK_THROWS_AS(parse_sequence("primes"), InvalidParameters);
}

TEST_CASE("derangement_mod") {
    CHECK(derangement_mod(4, 9) == 0);
    CHECK(derangement_mod(0, 7) == 1);
    CHECK(derangement_mod(7, 9) == 0);
    for (unsigned long n = 0; n < 40; ++n) CHECK(derangement_mod(n, 1000003) == derangement_exact(n) % 1000003);
    for (unsigned long n = 0; n <= 2000; ++n) {
        if (n % 3 == 1) {
            CHECK(derangement_mod(n, 9) == 0);
        } else {
            CHECK(derangement_mod(n, 3) != 0);
        }
    }
}

TEST_CASE("attainable residues") {
    CHECK(attainable_residues(SequenceId::TwoSquares, 9, 10000) == std::set<Natural>{0, 1, 2, 4, 5, 7, 8});
    CHECK(attainable_residues(SequenceId::TwoCubes, 9, 10000) == std::set<Natural>{0, 1, 2, 7, 8});
    CHECK(attainable_residues(SequenceId::Fermat, 3, 1000000000) == std::set<Natural>{2});
    std::set<long> squares, cubes;
    for (long x = -50; x <= 50; ++x) {
        squares.insert(((x * x) % 9 + 9) % 9);
        cubes.insert(((x * x * x) % 9 + 9) % 9);
    }
    CHECK(squares == std::set<long>{0, 1, 4, 7});
    CHECK(cubes == std::set<long>{0, 1, 8});
}

TEST_CASE("membership in S") {
    CHECK(in_S(7));
    CHECK(in_S(9));
    CHECK_FALSE(in_S(6));
    CHECK(in_S(0));
    CHECK_FALSE(in_S(-3));
    for (long a = -100; a <= 100; ++a) CHECK(in_S(a) == !in_S_j(a, 0));
    CHECK(in_S_j(1, 4));
    CHECK(in_S_j(7, 4));
    CHECK_FALSE(in_S_j(4, 4));
    // the prime 3 and the perfect number 6 are the only members outside S
    std::set<Natural> outside;
    for (SequenceId id : all_sequences()) {
        for (const auto& x : generate(id, 100000)) {
            if (!in_S(x)) outside.insert(x);
        }
    }
    CHECK(outside == std::set<Natural>{3, 6});
    for (const auto& p : generate(SequenceId::Perfect, Natural("100000000"))) {
        if (p != 6) CHECK(p % 3 == 1);
    }
}

TEST_CASE("touchard predicate") {
    CHECK(touchard_admissible(13));
    CHECK(touchard_admissible(45));
    CHECK(touchard_admissible(117));
    CHECK_FALSE(touchard_admissible(21));
    CHECK_FALSE(touchard_admissible(15));
    for (long n = 1; n < 2000; n += 2) CHECK(touchard_admissible(n) == (n % 12 == 1 || n % 36 == 9));
}

TEST_CASE("union check with limit 0 is vacuous") {
    const auto report = union_covering_check(0);
    CHECK(report["passed"] == true);
    CHECK(report["violations"] == 0);
    CHECK(report["exceptions"].empty());
}

TEST_CASE("sequence_coverage reports escapes") {
    CoveringSystem zero3;
    zero3.congruences.push_back({0, 3});
    const auto report = sequence_coverage(zero3, {SequenceId::Fermat}, 300);
    CHECK(report["passed"] == false);
    CHECK(report["sequences"]["fermat"]["uncovered"] == nlohmann::json::array({"5", "17", "257"}));
    CoveringSystem halves;
    halves.congruences.push_back({0, 2});
    halves.congruences.push_back({1, 2});
    CHECK(sequence_coverage(halves, all_sequences(), 1000)["passed"] == true);
}
