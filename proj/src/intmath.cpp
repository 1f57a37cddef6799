#include "oddcover/intmath.hpp"

#include "oddcover/errors.hpp"

#include <algorithm>
#include <map>

namespace oddcover {

namespace {

constexpr std::uint32_t kTrialLimit = 1000000;

const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        std::vector<bool> composite(kTrialLimit + 1, false);
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 2; i <= kTrialLimit; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (std::uint64_t j = std::uint64_t(i) * i; j <= kTrialLimit; j += i) composite[j] = true;
        }
        return out;
    }();
    return primes;
}

const Natural& two_to_64() {
    static const Natural value = pow_natural(2, 64);
    return value;
}

bool miller_rabin_round(const Natural& n, const Natural& d, unsigned long s, unsigned long a) {
    Natural x;
    Natural base = a;
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    const Natural n_minus_1 = n - 1;
    if (x == 1 || x == n_minus_1) return true;
    for (unsigned long r = 1; r < s; ++r) {
        x = (x * x) % n;
        if (x == n_minus_1) return true;
    }
    return false;
}

// Brent's variant of Pollard rho. Returns a nontrivial divisor or 0.
Natural pollard_rho(const Natural& n, unsigned long seed, unsigned long budget) {
    if (n % 2 == 0) return 2;
    Natural y = seed % n;
    Natural c = (seed * 7 + 1) % n;
    Natural g = 1, q = 1, x, ys;
    unsigned long r = 1, spent = 0;
    constexpr unsigned long m = 128;
    auto f = [&](const Natural& v) -> Natural { return (v * v + c) % n; };
    while (g == 1) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) y = f(y);
        unsigned long k = 0;
        while (k < r && g == 1) {
            ys = y;
            const unsigned long steps = std::min(m, r - k);
            for (unsigned long i = 0; i < steps; ++i) {
                y = f(y);
                Natural diff = abs(x - y);
                q = (q * diff) % n;
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            k += steps;
            spent += steps;
            if (spent > budget) return 0;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = f(ys);
            Natural diff = abs(x - ys);
            mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    return g == n ? Natural(0) : g;
}

void split_cofactor(const Natural& n, std::map<Natural, unsigned long>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    constexpr unsigned long kBudget = 1UL << 22;
    for (unsigned long seed = 2; seed < 40; ++seed) {
        Natural d = pollard_rho(n, seed, kBudget);
        if (d != 0 && d != 1 && d != n) {
            split_cofactor(d, out);
            split_cofactor(n / d, out);
            return;
        }
    }
    throw FactorizationTooHard("cofactor " + to_decimal(n) + " resisted Pollard rho");
}

}  // namespace

std::string to_decimal(const Natural& n) { return n.get_str(10); }

Integer integer_from_decimal(const std::string& text) {
    std::size_t start = (!text.empty() && text[0] == '-') ? 1 : 0;
    if (text.size() == start) throw FormatError("empty integer literal");
    for (std::size_t i = start; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9') throw FormatError("not a decimal integer: '" + text + "'");
    }
    return Integer(text, 10);
}

Natural natural_from_decimal(const std::string& text) {
    if (!text.empty() && text[0] == '-') throw FormatError("negative value where a natural is required: " + text);
    return integer_from_decimal(text);
}

Natural pow_natural(const Natural& base, unsigned long exponent) {
    Natural out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
    return out;
}

std::pair<Natural, Natural> gcd_lcm(const Natural& a, const Natural& b) {
    Natural g, l;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return {g, l};
}

Natural mod_inverse(const Natural& a, const Natural& m) {
    if (m < 1) throw ZeroModulus("mod_inverse needs m >= 1");
    if (m == 1) return 0;
    Natural u;
    if (mpz_invert(u.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
        throw NotCoprime(to_decimal(a) + " has no inverse modulo " + to_decimal(m));
    }
    return u;
}

std::optional<std::pair<Natural, Natural>> crt_pair(const Natural& r1, const Natural& m1,
                                                    const Natural& r2, const Natural& m2) {
    auto [g, l] = gcd_lcm(m1, m2);
    Natural delta = r2 - r1;
    if (delta % g != 0) return std::nullopt;
    // x = r1 + m1 * t with m1 * t = delta (mod m2)
    const Natural m2g = m2 / g;
    const Natural t0 = (delta / g) * mod_inverse((m1 / g) % m2g, m2g);
    Natural t = t0 % m2g;
    if (t < 0) t += m2g;
    Natural x = (r1 + m1 * t) % l;
    if (x < 0) x += l;
    return std::make_pair(x, l);
}

bool is_prime(const Natural& n) {
    if (n < 2) return false;
    if (n < kTrialLimit) {
        const auto v = n.get_ui();
        for (std::uint32_t p : small_primes()) {
            if (std::uint64_t(p) * p > v) return true;
            if (v % p == 0) return false;
        }
        return true;
    }
    for (std::uint32_t p : small_primes()) {
        if (p > 50) break;
        if (n % p == 0) return false;
    }
    if (n >= two_to_64()) return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
    // Witness set {2,...,37} is deterministic for every n < 2^64.
    Natural d = n - 1;
    unsigned long s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    for (unsigned long a : {2UL, 3UL, 5UL, 7UL, 11UL, 13UL, 17UL, 19UL, 23UL, 29UL, 31UL, 37UL}) {
        if (!miller_rabin_round(n, d, s, a)) return false;
    }
    return true;
}

Natural next_usable_prime(const Natural& lower_bound, const std::set<Natural>& excluded) {
    Natural candidate = lower_bound + 1;
    if (candidate < 2) candidate = 2;
    while (!is_prime(candidate) || excluded.count(candidate) != 0) ++candidate;
    return candidate;
}

Factorization factorize(const Natural& n) {
    if (n < 1) throw InvalidParameters("factorize needs n >= 1");
    Factorization out;
    Natural rest = n;
    for (std::uint32_t p : small_primes()) {
        if (rest == 1) break;
        if (Natural(p) * p > rest) break;
        if (mpz_divisible_ui_p(rest.get_mpz_t(), p) == 0) continue;
        unsigned long e = 0;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            ++e;
        }
        out.push_back({Natural(p), e});
    }
    if (rest != 1) {
        std::map<Natural, unsigned long> big;
        split_cofactor(rest, big);
        for (auto& [p, e] : big) out.push_back({p, e});
    }
    return out;
}

Natural reconstruct(const Factorization& f) {
    Natural out = 1;
    for (const auto& pp : f) out *= pow_natural(pp.prime, pp.exponent);
    return out;
}

unsigned long valuation(const Natural& n, const Natural& p) {
    if (n == 0) return 0;
    Natural rest = n;
    unsigned long e = 0;
    while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t()) != 0) {
        mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
        ++e;
    }
    return e;
}

}  // namespace oddcover
