#pragma once

/**
 * @file intmath.hpp
 * @brief Exact integer and rational primitives.
 *
 * Natural and Rational are GMP values. Decimal strings are the canonical
 * serialization; every other module moves numbers around in this form.
 */

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oddcover {

using Natural = mpz_class;
using Integer = mpz_class;
using Rational = mpq_class;

struct PrimePower {
    Natural prime;
    unsigned long exponent = 0;

    bool operator==(const PrimePower&) const = default;
};

// Prime factors in strictly increasing order.
using Factorization = std::vector<PrimePower>;

std::string to_decimal(const Natural& n);
Natural natural_from_decimal(const std::string& text);  // FormatError on junk or sign
Integer integer_from_decimal(const std::string& text);  // accepts a leading '-'
Natural pow_natural(const Natural& base, unsigned long exponent);

std::pair<Natural, Natural> gcd_lcm(const Natural& a, const Natural& b);

// Returns u in [0, m) with a*u = 1 (mod m); 0 when m = 1.
Natural mod_inverse(const Natural& a, const Natural& m);

// The class mod lcm(m1, m2) inside both r1 mod m1 and r2 mod m2, if any.
std::optional<std::pair<Natural, Natural>> crt_pair(const Natural& r1, const Natural& m1,
                                                    const Natural& r2, const Natural& m2);

bool is_prime(const Natural& n);
Natural next_usable_prime(const Natural& lower_bound, const std::set<Natural>& excluded);

Factorization factorize(const Natural& n);
Natural reconstruct(const Factorization& f);

// Exponent of prime p in n (n > 0).
unsigned long valuation(const Natural& n, const Natural& p);

}  // namespace oddcover
