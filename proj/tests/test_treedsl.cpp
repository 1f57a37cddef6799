#include "oddcover/constructions.hpp"
#include "oddcover/errors.hpp"
#include "oddcover/treedsl.hpp"
#include "oddcover/verifier.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace oddcover;

namespace {

std::string doc_text(const std::string& body, const std::string& qmin = "3", long k = 3) {
    return "(cover-tree :id sample :qmin " + qmin + " :k " + std::to_string(k) + " :t 9 " + body + ")";
}

Expansion expand_text(const std::string& body, long q, const std::string& qmin = "3", long k = 3) {
    return expand(parse_doc(doc_text(body, qmin, k)), ExpansionParams{Natural(q), {}});
}

bool has(const CoveringSystem& s, long r, long m) {
    return std::find(s.congruences.begin(), s.congruences.end(), Congruence{r, m}) != s.congruences.end();
}

// Mixed-radix reference: the first group is the fastest digit, a set member is
// a binary digit and a power group is one digit with alpha + 1 values.
std::vector<Natural> wedge_reference(const std::vector<std::pair<long, long>>& digits, long base) {
    std::vector<Natural> out;
    long total = 1;
    for (auto [m, radix] : digits) total *= radix;
    for (long i = 0; i < total; ++i) {
        Natural v = base;
        long rest = i;
        for (auto [m, radix] : digits) {
            const long d = rest % radix;
            rest /= radix;
            for (long e = 0; e < d; ++e) v *= m;
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace

TEST_CASE("parse_doc") {
    const auto doc = parse_doc("(cover-tree :id t15 :qmin 13 :k 15 :t 4 (node 3 (leaf 3) (leaf 3) (leaf 3)))");
    CHECK(doc.id == "t15");
    CHECK(doc.q_min == 13);
    CHECK(evaluate(doc.k_expr, {}) == 15);
    CHECK(evaluate(doc.t_expr, {}) == 4);
    REQUIRE(doc.root);
    CHECK(doc.root->branches.size() == 3);

    const auto quoted = parse_doc("; comment line\n(cover-tree :id \"x y\" :qmin 3 :k P :t (- P 5) :params (P)\n"
                                  "  (node 3 (leaf 3) (leaf 3) (leaf 3))) ; trailing");
    CHECK(quoted.id == "x y");
    CHECK(quoted.symbol_params == std::vector<std::string>{"P"});
    CHECK(evaluate(quoted.t_expr, {{"P", 17}}) == 12);

    CHECK_THROWS_AS(parse_doc("(node 3"), ParseError);
    CHECK_THROWS_AS(parse_doc(doc_text("(node 3")), ParseError);
    CHECK_THROWS_AS(parse_doc(doc_text("(node 3 (leaf Q) (leaf 3) (leaf 3))")), UnknownSymbol);
    CHECK_THROWS_AS(parse_doc(doc_text("(node 3 (blossom 3))")), ParseError);
    try {
        parse_doc("(cover-tree :id a :qmin 3 :k 3 :t 3\n  (node 3 (leaf 3) (leaf)))");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("evaluate count expressions") {
    const auto doc = parse_doc(
        "(cover-tree :id e :qmin 3 :k (^ P 2) :t (+ (* P 2) (- P 5)) :params (P) (node 3 (leaf 3) (leaf 3) (leaf 3)))");
    CHECK(evaluate(doc.k_expr, {{"P", 17}}) == 289);
    CHECK(evaluate(doc.t_expr, {{"P", 17}}) == 46);
    CHECK_THROWS_AS(evaluate(doc.k_expr, {}), UnboundSymbol);
}

TEST_CASE("wedge_moduli order") {
    CHECK(wedge_moduli({WedgeGroup::set({3, 5})}, 7) == std::vector<Natural>{7, 21, 35, 105});
    CHECK(wedge_moduli({WedgeGroup::power(3, 2), WedgeGroup::set({5})}, 7) ==
          std::vector<Natural>{7, 21, 63, 35, 105, 315});
    CHECK(wedge_moduli({}, 11) == std::vector<Natural>{11});
    CHECK(wedge_moduli({WedgeGroup::set({})}, 11) == std::vector<Natural>{11});

    const long primes[] = {3, 5, 7, 11};
    for (int l = 1; l <= 4; ++l) {
        std::vector<Natural> members;
        std::vector<std::pair<long, long>> digits;
        for (int i = 0; i < l; ++i) {
            members.emplace_back(primes[i]);
            digits.emplace_back(primes[i], 2);
        }
        const auto got = wedge_moduli({WedgeGroup::set(members)}, 13);
        CHECK(got.size() == (1u << l));
        CHECK(got == wedge_reference(digits, 13));
        for (long alpha = 1; alpha <= 3; ++alpha) {
            std::vector<Natural> rest(members.begin() + 1, members.end());
            std::vector<std::pair<long, long>> pd = {{primes[0], alpha + 1}};
            for (std::size_t i = 1; i < digits.size(); ++i) pd.push_back(digits[i]);
            const auto pw = wedge_moduli({WedgeGroup::power(primes[0], alpha), WedgeGroup::set(rest)}, 13);
            CHECK(pw.size() == static_cast<std::size_t>((alpha + 1) << (l - 1)));
            CHECK(pw == wedge_reference(pd, 13));
        }
    }
}

TEST_CASE("expand simple nodes") {
    const auto e = expand_text("(node 3 (leaf 3) (leaf 3) (leaf 3))", 5);
    CHECK(e.system == CoveringSystem{{{0, 3}, {1, 3}, {2, 3}}});
    CHECK(e.leftovers.empty());
    CHECK(e.system.declared_k == Natural(3));
    CHECK(e.system.declared_t == 9);

    const auto rep =
        expand_text("(node 3 (leaf 3) (node 3 (leaf 9) (leaf 9) (leaf 9)) (node 3 (rep 9 :count 3)))", 5, "3", 9);
    CHECK(has(rep.system, 2, 9));
    CHECK(has(rep.system, 5, 9));
    CHECK(has(rep.system, 8, 9));
    CHECK(oracle::covers(rep.system));

    const auto pinned = expand_text(
        "(node 3 (leaf 3 @pin 1) (node 3 (leaf 9) (leaf 9) (leaf 9)) (node 3 (leaf 9) (leaf 9) (leaf 9)))", 5, "3", 9);
    CHECK(has(pinned.system, 1, 3));
    for (long r : {0, 2, 3, 5, 6, 8}) CHECK(has(pinned.system, r, 9));
    CHECK(oracle::covers(pinned.system));
}

TEST_CASE("every leaf and wedge congruence contains its class") {
    const auto e = expand_text("(node 3 (leaf 3) (node 5 (leaf 5) (leaf 5) (leaf 5) (leaf 5) (leaf 5))"
                               " (node 5 (wedge (set 3) :base 5) (leaf 5) (leaf 5) (leaf 5)))",
                               7, "3", 5);
    const Natural first = e.system.congruences.front().residue % 3;
    for (const auto& c : e.system.congruences) {
        if (c.modulus == 15) CHECK(c.residue % 3 != first);
    }
    CHECK(audit_moduli(e.system).multiplicity(15) == 1);
    CHECK(verify(e.system).verdict == Verdict::Covers);

    const auto full = expand_text(
        "(node 3 (leaf 3) (node 3 (leaf 9) (leaf 9) (leaf 9)) (node 3 (leaf 9) (leaf 9) (leaf 9)))", 5, "3", 9);
    for (const auto& c : full.system.congruences) {
        if (c.modulus == 9) CHECK(c.residue % 3 != full.system.congruences[0].residue % 3);
    }
    CHECK(verify(full.system).verdict == Verdict::Covers);
}

TEST_CASE("sibling subtrees align shared leaves") {
    const std::string sub = "(node 5 (leaf 5) (leaf 5) (leaf 5) (leaf 5) (leaf 5))";
    const auto e = expand_text("(node 3 (leaf 3) " + sub + " " + sub + ")", 7, "3", 5);
    CHECK(e.system.congruences.size() == 6);
    CHECK(oracle::covers(e.system));
    CHECK(audit_moduli(e.system).multiplicity(5) == 5);
}

TEST_CASE("expansion errors") {
    CHECK_THROWS_AS(expand_text("(node 3 (leaf 3) (leaf 3))", 5), SlotCountMismatch);
    CHECK_THROWS_AS(expand_text("(node 3 (leaf 3) (leaf 3) (leaf 5))", 7), NonDividingModulus);
    // a non-repeated modulus needed twice with different residues has no valid placement
    CHECK_THROWS_AS(expand_text("(node 3 (leaf 3) (leaf 3) (node 5 (leaf 15) (leaf 15) (leaf 15) (leaf 15) (leaf 15)))", 7),
                    AssignmentInfeasible);
    // two towers with the same prime and context emit the same moduli
    CHECK_THROWS_AS(expand_text("(node 3 (arrow) (leaf 3) (node 3 (arrow) (leaf 9) (leaf 9)))", 5, "3", 9),
                    DuplicateModulus);
    CHECK_THROWS_AS(expand_text("(node 3 (leaf 3) (leaf 3) (leaf 3))", 4), InvalidParameters);
    CHECK_THROWS_AS(expand_text("(node 3 (leaf 3) (leaf 3) (leaf 3))", 3), InvalidParameters);
    const auto doc = parse_doc("(cover-tree :id a :qmin 3 :k P :t 1 :params (P) (node 3 (leaf 3) (leaf 3) (leaf 3)))");
    CHECK_THROWS_AS(expand(doc, ExpansionParams{Natural(5), {}}), UnboundSymbol);
}

TEST_CASE("arrow towers") {
    // p = 2: every tower step covers one half and descends into the other
    const auto two = expand_text("(node 2 (leaf 2) (arrow))", 5, "2");
    CHECK(two.system == CoveringSystem{{{0, 2}, {1, 4}, {3, 8}, {7, 16}}});
    REQUIRE(two.leftovers.size() == 1);
    CHECK(two.leftovers[0] == LeftoverClass{{15, 16}, 2, 1});
    const auto holes = enumerate_uncovered(two.system);
    CHECK(holes.classes == std::vector<ResidueClass>{{15, 16}});

    // root arrow at p = 3: tower moduli 3^2 .. 3^(q-1)
    const auto three = expand_text("(node 3 (leaf 3) (leaf 3) (arrow))", 7);
    std::vector<Natural> moduli;
    for (const auto& c : three.system.congruences) moduli.push_back(c.modulus);
    CHECK(moduli == std::vector<Natural>{3, 3, 9, 27, 81, 243, 729});
    REQUIRE(three.leftovers.size() == 1);
    CHECK(three.leftovers[0].cls.modulus == 729);
    CHECK(three.leftovers[0].p == 3);
    CHECK(three.leftovers[0].s == 1);

    // arrow at a class mod 3 splitting by 5: context factor 3 multiplies every tower modulus
    const auto ctx =
        expand_text("(node 3 (leaf 3) (arrow) (node 5 (arrow) (leaf 15) (leaf 15) (leaf 15) (leaf 15)))", 7, "3", 15);
    REQUIRE(ctx.leftovers.size() == 2);
    CHECK(ctx.leftovers[0].p == 3);
    CHECK(ctx.leftovers[1].s == 3);
    CHECK(ctx.leftovers[1].p == 5);
    CHECK(ctx.leftovers[1].cls.modulus == 3 * pow_natural(5, 6));
    for (unsigned long j = 2; j <= 6; ++j) {
        CHECK(audit_moduli(ctx.system).multiplicity(3 * pow_natural(5, j)) == 1);
    }
    // the tower congruences are nested: each contains the leftover class
    for (const auto& c : ctx.system.congruences) {
        if (c.modulus % 25 == 0) {
            CHECK_FALSE(congruence_contains_class(c, ctx.leftovers[1].cls));
            CHECK(ctx.leftovers[1].cls.representative % (c.modulus / 5) == c.residue % (c.modulus / 5));
        }
    }
}

TEST_CASE("mop_up") {
    const auto mop = mop_up({LeftoverClass{{0, 81}, 3, 1}}, 5, {});
    std::vector<Congruence> expected;
    for (long j = 0; j < 5; ++j) {
        long m = 5;
        for (long e = 0; e < j; ++e) m *= 3;
        // smallest x with x = 0 mod 3^j and x = j mod 5
        long x = 0;
        while (x % (m / 5) != 0 || x % 5 != j) ++x;
        expected.push_back({x, m});
    }
    CHECK(mop == expected);
    // the five congruences tile 0 mod 81 exactly: each x in 0 mod 81 (mod 405) is hit once
    for (long x = 0; x < 405; x += 81) {
        int hits = 0;
        for (const auto& c : mop) hits += satisfies(x, c) ? 1 : 0;
        CHECK(hits == 1);
    }

    const auto big = mop_up({LeftoverClass{{7, 3 * pow_natural(5, 36)}, 5, 3}}, 37, {});
    CHECK(big.size() == 37);
    std::set<Natural> ms;
    for (std::size_t j = 0; j < big.size(); ++j) {
        CHECK(big[j].modulus == 37 * 3 * pow_natural(5, j));
        ms.insert(big[j].modulus);
    }
    CHECK(ms.size() == 37);
    CHECK(mop_up({}, 37, {}).empty());
    CHECK_THROWS_AS(mop_up({LeftoverClass{{0, 81}, 3, 1}}, 5, {135}), MopUpCollision);
    CHECK_THROWS_AS(mop_up({LeftoverClass{{0, 81}, 3, 1}, LeftoverClass{{1, 81}, 3, 1}}, 5, {}), MopUpCollision);
    CHECK_THROWS_AS(mop_up({LeftoverClass{{0, 81}, 3, 1}}, 3, {}), InvalidParameters);
}

TEST_CASE("p = 2 arrow plus mop-up covers") {
    const auto e = expand_text("(node 2 (leaf 2) (arrow))", 5, "2");
    std::set<Natural> used;
    for (const auto& c : e.system.congruences) used.insert(c.modulus);
    CoveringSystem all = e.system;
    for (const auto& c : mop_up(e.leftovers, e.q, used)) all.congruences.push_back(c);
    CHECK(oracle::covers(all));
    CHECK(verify(all, VerifyMode::Recursive).verdict == Verdict::Covers);
}

TEST_CASE("validate_doc") {
    CHECK(validate_doc(parse_doc(doc_text("(node 3 (leaf 3) (leaf 3) (leaf 3))"))).empty());
    const auto slots = validate_doc(parse_doc(doc_text("(node 3 (leaf 3) (leaf 3) (leaf 3) (leaf 3))")));
    REQUIRE(slots.size() == 1);
    CHECK(slots[0].kind == "SlotCountMismatch");
    CHECK(validate_doc(parse_doc(doc_text("(node 29 (arrow) (wedge (set 3 5 17 7 11) :base 29 :take 28))"))).empty());
    auto kinds = [](const std::vector<Diagnostic>& ds) {
        std::set<std::string> out;
        for (const auto& d : ds) out.insert(d.kind);
        return out;
    };
    CHECK(kinds(validate_doc(parse_doc(doc_text("(node 3 (arrow) (wedge (set 5) :base 3 :take 3))"))))
              .count("WedgeTakeOutOfRange") == 1);
    CHECK(kinds(validate_doc(parse_doc(doc_text("(node 9 (rep 9 :count 9))")))).count("SplitPrimeNotPrime") == 1);
    CHECK(kinds(validate_doc(parse_doc(doc_text("(node 3 (rep 3 :count (- 1 2)) (leaf 3) (leaf 3))"))))
              .count("NegativeCount") == 1);
}

TEST_CASE("built-in figure encodings") {
    const Bindings p17 = {{"P", 17}};
    for (FigureId id : all_figures()) {
        CAPTURE(figure_name(id));
        const TreeDoc doc = builtin_doc(id);
        CHECK(doc.id == figure_name(id));
        CHECK(validate_doc(doc, p17).empty());
    }
    CHECK(builtin_doc(FigureId::FifteenTimes4).q_min == 13);
    CHECK(evaluate(builtin_doc(FigureId::FifteenTimes4).k_expr, {}) == 15);
    CHECK(evaluate(builtin_doc(FigureId::FifteenTimes4).t_expr, {}) == 4);
    CHECK(evaluate(builtin_doc(FigureId::TwentyFiveTimes8).k_expr, {}) == 25);
    CHECK(evaluate(builtin_doc(FigureId::TwentyFiveTimes8).t_expr, {}) == 8);
    const TreeDoc pm5 = builtin_doc(FigureId::PMinus5);
    CHECK(pm5.symbol_params == std::vector<std::string>{"P"});
    CHECK(evaluate(pm5.k_expr, p17) == 17);
    CHECK(evaluate(pm5.t_expr, p17) == 12);
    CHECK(builtin_doc(FigureId::NineTimes3).q_min == 29);
    CHECK(builtin_doc(FigureId::TwentyOneTimes5).q_min == 31);
    CHECK(pm5.q_min == 31);

    CHECK(default_q(builtin_doc(FigureId::FifteenTimes4), {}) == 17);
    CHECK(default_q(builtin_doc(FigureId::NineTimes3), {}) == 31);
    CHECK(default_q(builtin_doc(FigureId::TwentyOneTimes5), {}) == 37);
    CHECK(default_q(builtin_doc(FigureId::TwentyFiveTimes8), {}) == 37);
    CHECK(default_q(pm5, p17) == 37);
    CHECK_THROWS_AS(parse_figure("thm_7_times_2"), UnknownFigure);
}
