#include "oddcover/verifier.hpp"

#include "oddcover/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_set>

namespace oddcover {

namespace {

// Per-congruence data for the class-splitting search: exponents are indexed
// by position in the sorted list of primes dividing any modulus.
struct Prepared {
    Natural residue;
    Natural modulus;
    std::vector<unsigned long> exps;
};

struct Active {
    std::size_t index;
    Natural g;  // gcd(modulus, M) of the current class
};

class Splitter {
public:
    explicit Splitter(const CoveringSystem& s) {
        std::map<Natural, std::size_t> prime_index;
        std::vector<Factorization> facts;
        for (const auto& c : s.congruences) {
            if (c.modulus < 1) throw ZeroModulus("congruence with modulus 0");
            facts.push_back(factorize(c.modulus));
            for (const auto& pp : facts.back()) prime_index.emplace(pp.prime, 0);
        }
        for (auto& [p, idx] : prime_index) {
            if (!p.fits_ulong_p()) throw FactorizationTooHard("split prime does not fit a machine word");
            idx = primes_.size();
            primes_.push_back(p.get_ui());
        }
        max_exp_.assign(primes_.size(), 0);
        for (std::size_t i = 0; i < s.congruences.size(); ++i) {
            Prepared p{s.congruences[i].residue, s.congruences[i].modulus,
                       std::vector<unsigned long>(primes_.size(), 0)};
            for (const auto& pp : facts[i]) {
                const auto idx = prime_index[pp.prime];
                p.exps[idx] = pp.exponent;
                max_exp_[idx] = std::max(max_exp_[idx], pp.exponent);
            }
            cong_.push_back(std::move(p));
        }
        for (auto e : max_exp_) depth_bound_ += e;
    }

    // Visits uncovered leaves in DFS order; the visitor returns false to stop.
    void run(const std::function<bool(const ResidueClass&)>& visit) {
        std::vector<Active> active;
        active.reserve(cong_.size());
        for (std::size_t i = 0; i < cong_.size(); ++i) active.push_back({i, 1});
        std::vector<unsigned long> mexp(primes_.size(), 0);
        descend(Natural(0), Natural(1), mexp, active, 0, visit);
    }

private:
    bool descend(const Natural& c, const Natural& M, std::vector<unsigned long>& mexp,
                 const std::vector<Active>& active, unsigned long depth,
                 const std::function<bool(const ResidueClass&)>& visit) {
        if (depth > depth_bound_) throw std::logic_error("verifier recursion exceeded its depth bound");
        if (active.empty()) return visit(ResidueClass{c, M});
        for (const auto& a : active) {
            if (a.g == cong_[a.index].modulus) return true;
        }
        std::size_t split = primes_.size();
        for (const auto& a : active) {
            const auto& e = cong_[a.index].exps;
            for (std::size_t k = 0; k < split; ++k) {
                if (e[k] > mexp[k]) {
                    split = k;
                    break;
                }
            }
        }
        if (split == primes_.size()) throw std::logic_error("no split prime for a partially covered class");
        const unsigned long p = primes_[split];
        const Natural pM = M * p;
        ++mexp[split];
        std::vector<Active> child;
        child.reserve(active.size());
        bool keep_going = true;
        for (unsigned long u = 0; u < p && keep_going; ++u) {
            const Natural cu = c + M * u;
            child.clear();
            for (const auto& a : active) {
                const auto& cg = cong_[a.index];
                if (cg.exps[split] < mexp[split]) {
                    child.push_back(a);
                    continue;
                }
                Natural g = a.g * p;
                if (mpz_congruent_p(cu.get_mpz_t(), cg.residue.get_mpz_t(), g.get_mpz_t()) != 0) {
                    child.push_back({a.index, std::move(g)});
                }
            }
            keep_going = descend(cu, pM, mexp, child, depth + 1, visit);
        }
        --mexp[split];
        return keep_going;
    }

    std::vector<unsigned long> primes_;
    std::vector<unsigned long> max_exp_;
    std::vector<Prepared> cong_;
    unsigned long depth_bound_ = 0;
};

}  // namespace

const char* verdict_name(Verdict v) { return v == Verdict::Covers ? "Covers" : "Uncovered"; }

VerifyMode parse_mode(const std::string& text) {
    if (text == "auto") return VerifyMode::Auto;
    if (text == "recursive") return VerifyMode::Recursive;
    if (text == "bruteforce") return VerifyMode::Bruteforce;
    throw InvalidParameters("unknown verification mode '" + text + "'");
}

CoverageResult verify_recursive(const CoveringSystem& s) {
    CoverageResult result;
    Splitter(s).run([&](const ResidueClass& leaf) {
        result.verdict = Verdict::Uncovered;
        result.witness = leaf;
        return false;
    });
    return result;
}

CoverageResult verify_bruteforce(const CoveringSystem& s, const Natural& threshold) {
    const Natural L = lcm_of_moduli(s);
    if (L > threshold) {
        throw LcmOverflow("lcm " + to_decimal(L) + " exceeds brute-force threshold " + to_decimal(threshold));
    }
    const std::size_t n = L.get_ui();
    std::vector<unsigned char> marked(n, 0);
    for (const auto& c : s.congruences) {
        const std::size_t m = c.modulus.get_ui();
        for (std::size_t x = c.residue.get_ui(); x < n; x += m) marked[x] = 1;
    }
    for (std::size_t x = 0; x < n; ++x) {
        if (!marked[x]) return {Verdict::Uncovered, ResidueClass{Natural(static_cast<unsigned long>(x)), L}};
    }
    return {Verdict::Covers, std::nullopt};
}

CoverageResult verify(const CoveringSystem& s, VerifyMode mode, const Natural& bf_threshold) {
    switch (mode) {
        case VerifyMode::Recursive:
            return verify_recursive(s);
        case VerifyMode::Bruteforce:
            return verify_bruteforce(s, bf_threshold);
        case VerifyMode::Auto:
            break;
    }
    if (lcm_of_moduli(s) <= bf_threshold) return verify_bruteforce(s, bf_threshold);
    return verify_recursive(s);
}

UncoveredReport enumerate_uncovered(const CoveringSystem& s) {
    UncoveredReport report;
    Splitter(s).run([&](const ResidueClass& leaf) {
        report.classes.push_back(leaf);
        return true;
    });
    std::sort(report.classes.begin(), report.classes.end(), [](const ResidueClass& a, const ResidueClass& b) {
        if (a.modulus != b.modulus) return a.modulus < b.modulus;
        return a.representative < b.representative;
    });
    for (const auto& c : report.classes) report.total_density += Rational(Natural(1), c.modulus);
    report.total_density.canonicalize();
    return report;
}

std::vector<Integer> covers_subset(const CoveringSystem& s, const std::vector<Integer>& elements) {
    // Residues grouped by modulus; small moduli first since they cover the most.
    constexpr unsigned long kBitmapLimit = 1UL << 22;
    struct Group {
        Natural modulus;
        unsigned long small = 0;  // nonzero when the modulus fits a machine word
        std::vector<bool> bitmap;
        std::unordered_set<unsigned long> residues;
        std::vector<Natural> big;
    };
    std::map<Natural, std::vector<Natural>> by_modulus;
    for (const auto& c : dedupe(s).congruences) by_modulus[c.modulus].push_back(c.residue);
    std::vector<Group> groups;
    for (auto& [m, rs] : by_modulus) {
        Group g;
        g.modulus = m;
        if (m.fits_ulong_p()) {
            g.small = m.get_ui();
            if (g.small <= kBitmapLimit) {
                g.bitmap.assign(g.small, false);
                for (const auto& r : rs) g.bitmap[r.get_ui()] = true;
            } else {
                for (const auto& r : rs) g.residues.insert(r.get_ui());
            }
        } else {
            g.big = rs;
        }
        groups.push_back(std::move(g));
    }
    std::vector<Integer> uncovered;
    for (const auto& x : elements) {
        bool hit = false;
        const bool word = x.fits_slong_p();
        const long xv = word ? x.get_si() : 0;
        for (const auto& g : groups) {
            if (g.small != 0 && word) {
                long r = xv % static_cast<long>(g.small);
                if (r < 0) r += static_cast<long>(g.small);
                const auto ur = static_cast<unsigned long>(r);
                hit = g.bitmap.empty() ? g.residues.count(ur) != 0 : g.bitmap[ur];
            } else {
                Integer r = x % g.modulus;
                if (r < 0) r += g.modulus;
                if (g.small != 0) {
                    hit = g.bitmap.empty() ? g.residues.count(r.get_ui()) != 0 : g.bitmap[r.get_ui()];
                } else {
                    hit = std::find(g.big.begin(), g.big.end(), r) != g.big.end();
                }
            }
            if (hit) break;
        }
        if (!hit) uncovered.push_back(x);
    }
    return uncovered;
}

}  // namespace oddcover
