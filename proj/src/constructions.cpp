#include "oddcover/constructions.hpp"

#include "oddcover/errors.hpp"
#include "oddcover/verifier.hpp"

#include <algorithm>
#include <map>

namespace oddcover {

namespace {

struct FigureEntry {
    FigureId id;
    const char* name;
};

constexpr FigureEntry kFigures[] = {
    {FigureId::PMinus5, "thm_p_minus_5"},
    {FigureId::NineTimes3, "thm_9_times_3"},
    {FigureId::FifteenTimes4, "thm_15_times_4"},
    {FigureId::TwentyOneTimes5, "thm_21_times_5"},
    {FigureId::TwentyFiveTimes8, "thm_25_times_8"},
};

void check_figure_bindings(FigureId id, const Bindings& bindings) {
    if (id != FigureId::PMinus5) return;
    auto it = bindings.find("P");
    if (it == bindings.end()) throw UnboundSymbol("thm_p_minus_5 needs a value for P");
    if (it->second < 17 || !is_prime(it->second)) {
        throw InvalidParameters("P must be a prime >= 17, got " + to_decimal(it->second));
    }
}

}  // namespace

const std::vector<FigureId>& all_figures() {
    static const std::vector<FigureId> ids = [] {
        std::vector<FigureId> v;
        for (const auto& f : kFigures) v.push_back(f.id);
        return v;
    }();
    return ids;
}

std::string figure_name(FigureId id) {
    for (const auto& f : kFigures) {
        if (f.id == id) return f.name;
    }
    throw UnknownFigure("unrecognised figure id");
}

FigureId parse_figure(const std::string& name) {
    for (const auto& f : kFigures) {
        if (name == f.name) return f.id;
    }
    throw UnknownFigure("no built-in figure named '" + name + "'");
}

const std::string& builtin_source(FigureId id) {
    static const std::map<FigureId, std::string> sources = [] {
        std::map<FigureId, std::string> out;
        for (const auto& [name, text] : detail::embedded_figures()) {
            out.emplace(parse_figure(std::string(name)), std::string(text));
        }
        return out;
    }();
    auto it = sources.find(id);
    if (it == sources.end()) throw UnknownFigure("figure " + figure_name(id) + " has no stored encoding");
    return it->second;
}

TreeDoc builtin_doc(FigureId id) { return parse_doc(builtin_source(id)); }

FigureTarget figure_target(FigureId id, const Bindings& bindings) {
    check_figure_bindings(id, bindings);
    const TreeDoc doc = builtin_doc(id);
    return {evaluate(doc.k_expr, bindings), evaluate(doc.t_expr, bindings).get_si()};
}

FigureBuild build_figure_detailed(FigureId id, const Bindings& bindings, std::optional<Natural> q) {
    check_figure_bindings(id, bindings);
    const TreeDoc doc = builtin_doc(id);

    FigureBuild out;
    out.expansion = expand(doc, ExpansionParams{q, bindings});
    std::set<Natural> used;
    for (const auto& c : out.expansion.system.congruences) used.insert(c.modulus);
    out.mop = mop_up(out.expansion.leftovers, out.expansion.q, used);

    CoveringSystem all = out.expansion.system;
    all.congruences.insert(all.congruences.end(), out.mop.begin(), out.mop.end());
    out.system = dedupe(all);

    const std::string name = figure_name(id);
    const Natural k = *out.system.declared_k;
    const long t = *out.system.declared_t;
    const ModulusAudit audit = audit_moduli(out.system);
    if (!audit.all_odd || !audit.all_greater_than_one) {
        throw PostconditionFailed(name + ": a modulus is even or equal to 1");
    }
    if (audit.k_count != t) {
        throw PostconditionFailed(name + ": modulus " + to_decimal(k) + " used " + std::to_string(audit.k_count) +
                                  " times, expected " + std::to_string(t));
    }
    if (!audit.offending.empty()) {
        throw PostconditionFailed(name + ": modulus " + to_decimal(audit.offending.front().first) + " repeated");
    }
    if (id == FigureId::PMinus5 && audit.multiplicity(k * k) != 0) {
        throw PostconditionFailed(name + ": " + to_decimal(k * k) + " appears as a modulus");
    }
    const CoverageResult cover = verify(out.system, VerifyMode::Auto);
    if (cover.verdict != Verdict::Covers) {
        throw PostconditionFailed(name + ": not a covering, first uncovered class " + to_string(*cover.witness));
    }
    return out;
}

CoveringSystem build_figure(FigureId id, const Bindings& bindings, std::optional<Natural> q) {
    return build_figure_detailed(id, bindings, std::move(q)).system;
}

SplitVariant parse_split_variant(const std::string& text) {
    if (text == "general") return SplitVariant::General;
    if (text == "coprime") return SplitVariant::Coprime;
    throw InvalidParameters("split variant must be 'general' or 'coprime', got '" + text + "'");
}

SplitResult split_covering(const CoveringSystem& s, const SplitSpec& spec) {
    const Natural& k = spec.k;
    const Natural& m = spec.m;
    if (k < 3 || k % 2 == 0) throw InvalidParameters("k must be odd and at least 3");
    if (m < 2 || m % 2 == 0) throw InvalidParameters("m must be odd and at least 2");
    if (!m.fits_ulong_p()) throw InvalidParameters("m is too large");
    const bool coprime = spec.variant == SplitVariant::Coprime;
    if (coprime && gcd_lcm(k, m).first != 1) {
        throw NotCoprime("gcd(" + to_decimal(k) + ", " + to_decimal(m) + ") != 1");
    }

    CoveringSystem base = s;
    if (coprime) {
        auto it = std::find_if(base.congruences.begin(), base.congruences.end(),
                               [&](const Congruence& c) { return c.modulus == m; });
        if (it != base.congruences.end()) base = shift_system(base, -Integer(it->residue));
    }

    std::vector<std::size_t> k_positions;
    for (std::size_t i = 0; i < base.congruences.size(); ++i) {
        if (base.congruences[i].modulus == k) k_positions.push_back(i);
    }
    if (k_positions.empty()) throw MissingRepeatedModulus("no congruence has modulus " + to_decimal(k));
    const long t = static_cast<long>(k_positions.size());
    if (s.declared_t && t > *s.declared_t) {
        throw InvalidParameters("modulus " + to_decimal(k) + " appears " + std::to_string(t) +
                                " times, more than the declared " + std::to_string(*s.declared_t));
    }

    const Natural km = k * m;
    bool km_present = false;
    for (const auto& c : base.congruences) km_present = km_present || c.modulus == km;

    const unsigned long mm = m.get_ui();
    CoveringSystem out;
    for (std::size_t i = 0; i < base.congruences.size(); ++i) {
        const Congruence& c = base.congruences[i];
        const bool replaced = c.modulus == k && i != k_positions.back();
        if (!replaced) {
            out.congruences.push_back(c);
            continue;
        }
        Natural skip = m;  // no value of j is skipped in the general variant
        if (coprime) {
            Natural neg = -Integer(mod_inverse(k, m) * c.residue);
            skip = normalize(neg, m).residue;
        }
        for (unsigned long j = 0; j < mm; ++j) {
            if (coprime && Natural(j) == skip) continue;
            out.congruences.push_back({k * j + c.residue, km});
        }
    }
    if (coprime) out.congruences.push_back({Natural(0), m});
    out = dedupe(out);

    SplitResult result;
    result.km_multiplicity = audit_moduli(out).multiplicity(km);
    const long per = static_cast<long>(coprime ? mm - 1 : mm);
    result.bound = per * (t - 1) + (km_present ? 1 : 0);
    out.declared_k = km;
    out.declared_t = result.km_multiplicity;
    result.system = std::move(out);
    return result;
}

CoveringSystem subset_covering_mod9(long j, const std::vector<Integer>& exceptions) {
    if (j < 0 || j > 8) throw InvalidParameters("j must lie in 0..8");
    const CoveringSystem nine = build_figure(FigureId::NineTimes3, {});

    std::vector<Natural> nine_residues;
    for (const auto& c : nine.congruences) {
        if (c.modulus == 9) nine_residues.push_back(c.residue);
    }
    std::sort(nine_residues.begin(), nine_residues.end());
    const Natural c0 = nine_residues.empty() ? Natural(0) : nine_residues.front();
    if (nine_residues.size() != 3 || nine_residues[1] != c0 + 3 || nine_residues[2] != c0 + 6) {
        throw PostconditionFailed("the 9-congruences of thm_9_times_3 are not one class mod 3");
    }

    const Integer d = Integer(j) - Integer(c0 % 3);
    const CoveringSystem shifted = shift_system(nine, d);
    CoveringSystem out;
    Natural largest = 0;
    for (const auto& c : shifted.congruences) {
        if (c.modulus == 9 && c.residue != Natural(j)) continue;
        out.congruences.push_back(c);
        largest = std::max(largest, c.modulus);
    }
    for (std::size_t l = 0; l < exceptions.size(); ++l) {
        const Natural modulus = largest + 2 * Natural(static_cast<unsigned long>(l + 1));
        out.congruences.push_back(normalize(exceptions[l], modulus));
    }
    return out;
}

}  // namespace oddcover
