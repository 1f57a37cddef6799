#include "oddcover/errors.hpp"
#include "oddcover/treedsl.hpp"

#include <algorithm>

namespace oddcover {

namespace {

Natural product(const std::vector<Expr>& factors, const Bindings& b) {
    Natural out = 1;
    for (const auto& f : factors) out *= evaluate(f, b);
    return out;
}

long small_count(const Expr& e, const Bindings& b, const char* what) {
    const Integer v = evaluate(e, b);
    if (v < 0 || !v.fits_slong_p()) throw InvalidParameters(std::string(what) + " evaluates to " + to_decimal(v));
    return v.get_si();
}

std::string where(int line, int column) { return " at " + std::to_string(line) + ":" + std::to_string(column); }

std::vector<Natural> branch_wedge(const Branch& br, const Bindings& b) {
    auto all = wedge_moduli(br.groups, product(br.base, b), b);
    if (br.take) {
        const long take = small_count(*br.take, b, "wedge :take");
        if (static_cast<std::size_t>(take) > all.size()) {
            throw SlotCountMismatch("wedge takes " + std::to_string(take) + " of " + std::to_string(all.size()) +
                                    " moduli" + where(br.line, br.column));
        }
        all.resize(static_cast<std::size_t>(take));
    }
    return all;
}

long slot_count(const Branch& br, const Bindings& b) {
    switch (br.kind) {
        case Branch::Kind::Rep:
            return small_count(*br.count, b, "rep :count");
        case Branch::Kind::Wedge:
            return static_cast<long>(branch_wedge(br, b).size());
        default:
            return 1;
    }
}

void collect_primes(const Node& n, const Bindings& b, std::set<Natural>& out) {
    auto add = [&](const Natural& v) {
        if (v < 2) return;
        for (const auto& pp : factorize(v)) out.insert(pp.prime);
    };
    add(evaluate(n.split_prime, b));
    for (const auto& br : n.branches) {
        switch (br.kind) {
            case Branch::Kind::Leaf:
            case Branch::Kind::Rep:
                add(product(br.factors, b));
                break;
            case Branch::Kind::Wedge:
                add(product(br.base, b));
                for (const auto& g : br.groups) {
                    if (g.kind == WedgeGroup::Kind::Power) add(evaluate(g.base, b));
                    for (const auto& m : g.members) add(evaluate(m, b));
                }
                break;
            case Branch::Kind::Sub:
                collect_primes(*br.node, b, out);
                break;
            case Branch::Kind::Arrow:
                break;
        }
    }
}

// A slot is one of the p classes c + uM mod pM at a node.
struct Slot {
    const Branch* branch;
    Natural modulus;  // emitted modulus for leaf/rep/wedge slots, 0 otherwise
    int order;
};

class Expander {
public:
    Expander(const TreeDoc& doc, const Bindings& bindings, const Natural& q)
        : bindings_(bindings), q_(q), k_(evaluate(doc.k_expr, bindings)) {}

    void run(const Node& root) { expand_node(root, Natural(0), Natural(1)); }

    CoveringSystem system;
    std::vector<LeftoverClass> leftovers;

private:
    bool conflicts(const Congruence& c) const {
        if (c.modulus == k_) return false;
        auto it = residue_of_.find(c.modulus);
        return it != residue_of_.end() && it->second != c.residue;
    }

    void emit(const Congruence& c, int line, int column) {
        if (emitted_.count(c) != 0) return;
        if (conflicts(c)) {
            throw DuplicateModulus("modulus " + to_decimal(c.modulus) + " already used with residue " +
                                   to_decimal(residue_of_.at(c.modulus)) + ", now " + to_decimal(c.residue) +
                                   where(line, column));
        }
        emitted_.insert(c);
        residue_of_.emplace(c.modulus, c.residue);
        system.congruences.push_back(c);
    }

    void expand_node(const Node& n, const Natural& c, const Natural& M) {
        const Natural p = evaluate(n.split_prime, bindings_);
        if (!is_prime(p)) throw InvalidParameters("split prime " + to_decimal(p) + " is not prime" + where(n.line, n.column));
        const Natural pM = p * M;

        std::vector<Slot> slots;
        int order = 0;
        for (const auto& br : n.branches) {
            switch (br.kind) {
                case Branch::Kind::Leaf:
                    slots.push_back({&br, product(br.factors, bindings_), order++});
                    break;
                case Branch::Kind::Rep: {
                    const Natural m = product(br.factors, bindings_);
                    const long count = small_count(*br.count, bindings_, "rep :count");
                    for (long i = 0; i < count; ++i) slots.push_back({&br, m, order++});
                    break;
                }
                case Branch::Kind::Wedge:
                    for (const auto& m : branch_wedge(br, bindings_)) slots.push_back({&br, m, order++});
                    break;
                case Branch::Kind::Arrow:
                case Branch::Kind::Sub:
                    slots.push_back({&br, Natural(0), order++});
                    break;
            }
        }
        if (Natural(static_cast<unsigned long>(slots.size())) != p) {
            throw SlotCountMismatch("node splits by " + to_decimal(p) + " but has " + std::to_string(slots.size()) +
                                    " slots" + where(n.line, n.column));
        }
        for (const auto& s : slots) {
            if (s.modulus != 0 && mpz_divisible_p(pM.get_mpz_t(), s.modulus.get_mpz_t()) == 0) {
                throw NonDividingModulus("modulus " + to_decimal(s.modulus) + " does not divide " + to_decimal(pM) +
                                         where(s.branch->line, s.branch->column));
            }
        }

        const std::size_t count = slots.size();
        std::vector<Natural> classes(count);
        for (std::size_t u = 0; u < count; ++u) classes[u] = c + M * static_cast<unsigned long>(u);
        std::vector<bool> taken(count, false);
        std::vector<std::size_t> chosen(count, count);

        auto emit_concrete = [&](std::size_t slot, std::size_t u) {
            chosen[slot] = u;
            taken[u] = true;
            const auto& s = slots[slot];
            emit(normalize(classes[u], s.modulus), s.branch->line, s.branch->column);
        };

        // Pinned leaves, then concrete slots by greedy duplicate count.
        for (std::size_t i = 0; i < count; ++i) {
            const auto& s = slots[i];
            if (s.branch->kind != Branch::Kind::Leaf || !s.branch->pin) continue;
            const Congruence want = normalize(evaluate(*s.branch->pin, bindings_), s.modulus);
            std::size_t pick = count;
            for (std::size_t u = 0; u < count && pick == count; ++u) {
                if (!taken[u] && normalize(classes[u], s.modulus) == want) pick = u;
            }
            if (pick == count) {
                throw AssignmentInfeasible("no free class matches pin " + to_string(want) +
                                           where(s.branch->line, s.branch->column));
            }
            emit_concrete(i, pick);
        }
        for (std::size_t i = 0; i < count; ++i) {
            const auto& s = slots[i];
            if (s.modulus == 0 || chosen[i] != count) continue;
            std::size_t best = count;
            bool best_dup = false;
            for (std::size_t u = 0; u < count; ++u) {
                if (taken[u]) continue;
                const Congruence cg = normalize(classes[u], s.modulus);
                if (conflicts(cg)) continue;
                const bool dup = emitted_.count(cg) != 0;
                if (best == count || (dup && !best_dup)) {
                    best = u;
                    best_dup = dup;
                }
            }
            if (best == count) {
                throw AssignmentInfeasible("every free class clashes with an existing congruence of modulus " +
                                           to_decimal(s.modulus) + where(s.branch->line, s.branch->column));
            }
            emit_concrete(i, best);
        }
        for (std::size_t i = 0; i < count; ++i) {
            if (chosen[i] != count) continue;
            for (std::size_t u = 0; u < count; ++u) {
                if (!taken[u]) {
                    chosen[i] = u;
                    taken[u] = true;
                    break;
                }
            }
        }

        for (std::size_t i = 0; i < count; ++i) {
            const auto& s = slots[i];
            if (s.branch->kind == Branch::Kind::Arrow) {
                tower(classes[chosen[i]], pM, p, *s.branch);
            } else if (s.branch->kind == Branch::Kind::Sub) {
                expand_node(*s.branch->node, classes[chosen[i]], pM);
            }
        }
    }

    void tower(const Natural& cls, const Natural& modulus, const Natural& p, const Branch& br) {
        const unsigned long v = valuation(modulus, p);
        Natural s = modulus / pow_natural(p, v);
        Natural x = cls;
        Natural X = modulus;
        const unsigned long top = q_.get_ui() - 1;
        for (unsigned long j = v + 1; j <= top; ++j) {
            const Natural next = X * p;
            emit(Congruence{x, next}, br.line, br.column);
            x += X;
            X = next;
        }
        leftovers.push_back({ResidueClass{x, X}, p, s});
    }

    const Bindings& bindings_;
    Natural q_;
    Natural k_;
    std::set<Congruence> emitted_;
    std::map<Natural, Natural> residue_of_;
};

Bindings with_defaults(const TreeDoc& doc, const Bindings& given) {
    Bindings b = given;
    for (const auto& s : doc.symbol_params) b.emplace(s, Natural(17));
    return b;
}

void check_node(const Node& n, const Bindings& b, std::vector<Diagnostic>& out) {
    auto note = [&](const std::string& kind, const std::string& msg, int line, int column) {
        out.push_back({kind, msg, line, column});
    };
    Natural p = 0;
    try {
        p = evaluate(n.split_prime, b);
        if (!is_prime(p)) note("SplitPrimeNotPrime", "split prime " + to_decimal(p) + " is not prime", n.line, n.column);
    } catch (const UnboundSymbol& e) {
        note("UnboundSymbol", e.what(), n.line, n.column);
    }
    long total = 0;
    bool known = true;
    for (const auto& br : n.branches) {
        try {
            if (br.kind == Branch::Kind::Wedge && br.take) {
                const Integer take = evaluate(*br.take, b);
                const auto size = wedge_moduli(br.groups, product(br.base, b), b).size();
                if (take < 0 || take > Natural(static_cast<unsigned long>(size))) {
                    note("WedgeTakeOutOfRange",
                         "wedge takes " + to_decimal(take) + " of " + std::to_string(size) + " moduli", br.line,
                         br.column);
                    known = false;
                    continue;
                }
            }
            if (br.kind == Branch::Kind::Rep && evaluate(*br.count, b) < 0) {
                note("NegativeCount", "rep count is negative", br.line, br.column);
                known = false;
                continue;
            }
            total += slot_count(br, b);
        } catch (const UnboundSymbol& e) {
            note("UnboundSymbol", e.what(), br.line, br.column);
            known = false;
        }
        if (br.kind == Branch::Kind::Sub) check_node(*br.node, b, out);
    }
    if (known && p != 0 && Natural(total) != p) {
        note("SlotCountMismatch",
             "node splits by " + to_decimal(p) + " but its branches fill " + std::to_string(total) + " slots", n.line,
             n.column);
    }
}

}  // namespace

std::vector<Natural> wedge_moduli(const std::vector<WedgeGroup>& groups, const Natural& base,
                                  const Bindings& bindings) {
    // One mixed-radix digit per set member (choices 1, m) or per power group
    // (choices 1, m, ..., m^alpha); the first digit varies fastest.
    std::vector<std::vector<Natural>> digits;
    for (const auto& g : groups) {
        if (g.kind == WedgeGroup::Kind::Power) {
            const Natural m = evaluate(g.base, bindings);
            std::vector<Natural> choices{1};
            for (unsigned long a = 1; a <= g.alpha; ++a) choices.push_back(choices.back() * m);
            digits.push_back(std::move(choices));
        } else {
            for (const auto& member : g.members) digits.push_back({Natural(1), evaluate(member, bindings)});
        }
    }
    std::vector<Natural> out{base};
    for (const auto& d : digits) {
        std::vector<Natural> next;
        next.reserve(out.size() * d.size());
        for (const auto& factor : d) {
            for (const auto& v : out) next.push_back(v * factor);
        }
        out = std::move(next);
    }
    return out;
}

std::set<Natural> figure_primes(const TreeDoc& doc, const Bindings& bindings) {
    std::set<Natural> out;
    collect_primes(*doc.root, bindings, out);
    const Natural k = evaluate(doc.k_expr, bindings);
    if (k >= 2) {
        for (const auto& pp : factorize(k)) out.insert(pp.prime);
    }
    return out;
}

Natural default_q(const TreeDoc& doc, const Bindings& bindings) {
    std::set<Natural> excluded = figure_primes(doc, bindings);
    for (const auto& [name, value] : bindings) excluded.insert(value);
    return next_usable_prime(doc.q_min, excluded);
}

Expansion expand(const TreeDoc& doc, const ExpansionParams& params) {
    for (const auto& s : doc.symbol_params) {
        if (params.bindings.count(s) == 0) throw UnboundSymbol("no value bound for symbol '" + s + "'");
    }
    const Natural q = params.q ? *params.q : default_q(doc, params.bindings);
    if (!is_prime(q)) throw InvalidParameters("q = " + to_decimal(q) + " is not prime");
    if (q <= doc.q_min) throw InvalidParameters("q = " + to_decimal(q) + " must exceed " + to_decimal(doc.q_min));
    if (figure_primes(doc, params.bindings).count(q) != 0) {
        throw InvalidParameters("q = " + to_decimal(q) + " divides a modulus of the tree");
    }
    if (!q.fits_ulong_p()) throw InvalidParameters("q is too large");

    Expander ex(doc, params.bindings, q);
    ex.run(*doc.root);
    Expansion out;
    out.system = std::move(ex.system);
    out.system.declared_k = evaluate(doc.k_expr, params.bindings);
    out.system.declared_t = evaluate(doc.t_expr, params.bindings).get_si();
    out.leftovers = std::move(ex.leftovers);
    out.q = q;
    return out;
}

std::vector<Congruence> mop_up(const std::vector<LeftoverClass>& leftovers, const Natural& q,
                               const std::set<Natural>& used_moduli) {
    if (!is_prime(q)) throw InvalidParameters("mop-up q = " + to_decimal(q) + " is not prime");
    std::vector<Congruence> out;
    std::set<Natural> mine;
    for (const auto& lo : leftovers) {
        if (gcd_lcm(q, lo.s * lo.p).first != 1) {
            throw InvalidParameters("q = " + to_decimal(q) + " shares a factor with s*p = " + to_decimal(lo.s * lo.p));
        }
        Natural pj = 1;
        for (unsigned long j = 0; Natural(j) < q; ++j, pj *= lo.p) {
            const Natural inner = lo.s * pj;
            const Natural modulus = q * inner;
            if (used_moduli.count(modulus) != 0 || !mine.insert(modulus).second) {
                throw MopUpCollision("mop-up modulus " + to_decimal(modulus) + " is already in use");
            }
            const auto hit = crt_pair(lo.cls.representative % inner, inner, Natural(j), q);
            out.push_back({hit->first, modulus});
        }
    }
    return out;
}

std::vector<Diagnostic> validate_doc(const TreeDoc& doc, const Bindings& sample) {
    std::vector<Diagnostic> out;
    const Bindings b = with_defaults(doc, sample);
    try {
        evaluate(doc.k_expr, b);
        evaluate(doc.t_expr, b);
    } catch (const UnboundSymbol& e) {
        out.push_back({"UnboundSymbol", e.what(), doc.k_expr.line, doc.k_expr.column});
    }
    if (doc.root) check_node(*doc.root, b, out);
    return out;
}

}  // namespace oddcover
