// Command-line front end. Machine-readable output goes to stdout,
// diagnostics to stderr. Exit codes: 0 success, 1 negative result, 2 bad input.

#include "oddcover/constructions.hpp"
#include "oddcover/errors.hpp"
#include "oddcover/sequences.hpp"
#include "oddcover/treedsl.hpp"
#include "oddcover/verifier.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace oddcover;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kBadInput = 2;

// Raised for input problems that map to exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

CoveringSystem load_system(const std::string& path) {
    const std::string text = read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    return system_from_json(j);
}

void emit_system(const CoveringSystem& s, const std::string& out_path) {
    const std::string text = to_json(s).dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_file(out_path, text);
    }
}

Natural parse_natural(const std::string& text, const char* flag) {
    try {
        return natural_from_decimal(text);
    } catch (const Error&) {
        throw InputError(std::string(flag) + " expects a nonnegative integer, got '" + text + "'");
    }
}

bool is_input_error(const Error& e) {
    static const std::set<std::string> kinds = {"ParseError",    "FormatError",  "UnknownSymbol",   "UnboundSymbol",
                                                "UnknownFigure", "LcmOverflow",  "InvalidParameters", "ZeroModulus",
                                                "NotCoprime",    "MissingRepeatedModulus"};
    return kinds.count(e.kind()) != 0;
}

struct Options {
    std::string figure, file, out, q, p;
    std::string mode = "auto";
    bool witness = false;
    std::string bf_threshold = "10000000";
    std::string k, t, by, m, variant = "general";
    long j = 0;
    std::vector<std::string> exceptions;
    std::vector<std::string> sequences;
    std::string limit, modulus;
};

Bindings bindings_from(const Options& o) {
    Bindings b;
    if (!o.p.empty()) b["P"] = parse_natural(o.p, "--P");
    return b;
}

std::optional<Natural> q_from(const Options& o) {
    if (o.q.empty()) return std::nullopt;
    return parse_natural(o.q, "--q");
}

int cmd_expand(const Options& o) {
    if (o.figure.empty() == o.file.empty()) throw InputError("give exactly one of --figure and --file");
    CoveringSystem system;
    json summary;
    if (!o.figure.empty()) {
        const FigureId id = parse_figure(o.figure);
        const FigureBuild built = build_figure_detailed(id, bindings_from(o), q_from(o));
        system = built.system;
        summary = {{"figure", o.figure},
                   {"q", to_decimal(built.expansion.q)},
                   {"leftovers", built.expansion.leftovers.size()},
                   {"mop_up", built.mop.size()}};
    } else {
        const TreeDoc doc = parse_doc(read_file(o.file));
        const Expansion e = expand(doc, ExpansionParams{q_from(o), bindings_from(o)});
        std::set<Natural> used;
        for (const auto& c : e.system.congruences) used.insert(c.modulus);
        const auto mop = mop_up(e.leftovers, e.q, used);
        system = e.system;
        system.congruences.insert(system.congruences.end(), mop.begin(), mop.end());
        system = dedupe(system);
        summary = {{"file", o.file},
                   {"q", to_decimal(e.q)},
                   {"leftovers", e.leftovers.size()},
                   {"mop_up", mop.size()}};
    }
    summary["congruences"] = system.congruences.size();
    if (o.out.empty()) {
        emit_system(system, "");
    } else {
        emit_system(system, o.out);
        std::cout << summary.dump() << "\n";
    }
    return kOk;
}

int cmd_verify(const Options& o) {
    const CoveringSystem s = load_system(o.file);
    const Natural threshold = parse_natural(o.bf_threshold, "--bf-threshold");
    const CoverageResult r = verify(s, parse_mode(o.mode), threshold);
    json out = {{"verdict", verdict_name(r.verdict)}};
    if (o.witness && r.witness) out["witness"] = to_string(*r.witness);
    std::cout << out.dump() << "\n";
    return r.verdict == Verdict::Covers ? kOk : kNegative;
}

int cmd_audit(const Options& o) {
    CoveringSystem s = load_system(o.file);
    if (!o.k.empty()) s.declared_k = parse_natural(o.k, "--k");
    if (!o.t.empty()) s.declared_t = parse_natural(o.t, "--t").get_si();
    const ModulusAudit a = audit_moduli(s);
    json out = to_json(a);
    const bool pass = a.repeated_ok && a.all_odd && a.all_greater_than_one;
    out["passed"] = pass;
    std::cout << out.dump() << "\n";
    return pass ? kOk : kNegative;
}

int cmd_shift(const Options& o) {
    const CoveringSystem s = load_system(o.file);
    Integer by;
    try {
        by = integer_from_decimal(o.by);
    } catch (const Error&) {
        throw InputError("--by expects an integer, got '" + o.by + "'");
    }
    emit_system(shift_system(s, by), o.out);
    return kOk;
}

int cmd_split(const Options& o) {
    const CoveringSystem s = load_system(o.file);
    SplitSpec spec{parse_natural(o.k, "--k"), parse_natural(o.m, "--m"), parse_split_variant(o.variant)};
    const SplitResult r = split_covering(s, spec);
    json summary = {{"km", to_decimal(spec.k * spec.m)},
                    {"multiplicity", r.km_multiplicity},
                    {"bound", r.bound},
                    {"congruences", r.system.congruences.size()}};
    if (o.out.empty()) {
        summary["system"] = to_json(r.system);
        std::cout << summary.dump(2) << "\n";
    } else {
        emit_system(r.system, o.out);
        std::cout << summary.dump() << "\n";
    }
    return r.km_multiplicity <= r.bound ? kOk : kNegative;
}

int cmd_subset_cover(const Options& o) {
    std::vector<Integer> exceptions;
    for (const auto& e : o.exceptions) {
        try {
            exceptions.push_back(integer_from_decimal(e));
        } catch (const Error&) {
            throw InputError("--exceptions expects integers, got '" + e + "'");
        }
    }
    emit_system(subset_covering_mod9(o.j, exceptions), o.out);
    return kOk;
}

std::vector<SequenceId> sequences_from(const Options& o) {
    if (o.sequences.empty()) return all_sequences();
    std::vector<SequenceId> ids;
    for (const auto& name : o.sequences) ids.push_back(parse_sequence(name));
    return ids;
}

int cmd_seq_check(const Options& o) {
    const Natural limit = parse_natural(o.limit, "--limit");
    json report;
    if (o.file.empty()) {
        report = union_covering_check(limit);
    } else {
        report = sequence_coverage(load_system(o.file), sequences_from(o), limit);
    }
    std::cout << report.dump(2) << "\n";
    return report["passed"].get<bool>() ? kOk : kNegative;
}

int cmd_seq_residues(const Options& o) {
    const SequenceId id = parse_sequence(o.sequences.at(0));
    const auto residues = attainable_residues(id, parse_natural(o.modulus, "--mod"), parse_natural(o.limit, "--limit"));
    json out = json::array();
    for (const auto& r : residues) out.push_back(to_decimal(r));
    std::cout << out.dump() << "\n";
    return kOk;
}

int cmd_validate(const Options& o) {
    const TreeDoc doc = parse_doc(read_file(o.file));
    const auto diagnostics = validate_doc(doc, bindings_from(o));
    json out = json::array();
    for (const auto& d : diagnostics) {
        out.push_back({{"kind", d.kind}, {"message", d.message}, {"line", d.line}, {"column", d.column}});
    }
    std::cout << out.dump(2) << "\n";
    return diagnostics.empty() ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Build, transform and verify odd covering systems"};
    app.require_subcommand(1);
    Options o;

    auto* expand_cmd = app.add_subcommand("expand", "Expand a built-in figure or a tree file into a covering system");
    expand_cmd->add_option("--figure", o.figure, "Built-in figure id");
    expand_cmd->add_option("--file", o.file, "Tree description file");
    expand_cmd->add_option("--q", o.q, "Prime used by the mop-up");
    expand_cmd->add_option("--P", o.p, "Value of the parameter P");
    expand_cmd->add_option("-o,--out", o.out, "Output JSON path (stdout when omitted)");

    auto* verify_cmd = app.add_subcommand("verify", "Decide whether a system covers the integers");
    verify_cmd->add_option("file", o.file, "Covering system JSON")->required();
    verify_cmd->add_option("--mode", o.mode, "auto, recursive or bruteforce");
    verify_cmd->add_flag("--witness", o.witness, "Print an uncovered class on failure");
    verify_cmd->add_option("--bf-threshold", o.bf_threshold, "Largest lcm handled by brute force")
        ->envname("ODDCOVER_BF_THRESHOLD");

    auto* audit_cmd = app.add_subcommand("audit", "Count modulus multiplicities");
    audit_cmd->add_option("file", o.file, "Covering system JSON")->required();
    audit_cmd->add_option("--k", o.k, "Repeated modulus");
    audit_cmd->add_option("--t", o.t, "Allowed multiplicity of k");

    auto* shift_cmd = app.add_subcommand("shift", "Add a constant to every residue");
    shift_cmd->add_option("file", o.file, "Covering system JSON")->required();
    shift_cmd->add_option("--by", o.by, "Shift amount")->required();
    shift_cmd->add_option("-o,--out", o.out, "Output JSON path");

    auto* split_cmd = app.add_subcommand("split", "Trade the repeated modulus k for km");
    split_cmd->add_option("file", o.file, "Covering system JSON")->required();
    split_cmd->add_option("--k", o.k, "Repeated modulus")->required();
    split_cmd->add_option("--m", o.m, "Multiplier")->required();
    split_cmd->add_option("--variant", o.variant, "general or coprime");
    split_cmd->add_option("-o,--out", o.out, "Output JSON path");

    auto* subset_cmd = app.add_subcommand("subset-cover", "Covering of the integers outside S_j");
    subset_cmd->add_option("--j", o.j, "Centre residue mod 9")->required();
    subset_cmd->add_option("--exceptions", o.exceptions, "Extra integers to cover")->delimiter(',');
    subset_cmd->add_option("-o,--out", o.out, "Output JSON path");

    auto* seq_check_cmd = app.add_subcommand("seq-check", "Check sequence members against a covering");
    seq_check_cmd->add_option("file", o.file, "Covering system JSON (the mod-9 subset covering when omitted)");
    seq_check_cmd->add_option("--sequences", o.sequences, "Sequence ids")->delimiter(',');
    seq_check_cmd->add_option("--limit", o.limit, "Largest member considered")->required();

    auto* residues_cmd = app.add_subcommand("seq-residues", "Residues attained by a sequence");
    residues_cmd->add_option("--sequence", o.sequences, "Sequence id")->required()->expected(1);
    residues_cmd->add_option("--mod", o.modulus, "Modulus")->required();
    residues_cmd->add_option("--limit", o.limit, "Largest member considered")->required();

    auto* validate_cmd = app.add_subcommand("validate", "Static checks on a tree file");
    validate_cmd->add_option("file", o.file, "Tree description file")->required();
    validate_cmd->add_option("--P", o.p, "Sample value for P");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (*expand_cmd) return cmd_expand(o);
        if (*verify_cmd) return cmd_verify(o);
        if (*audit_cmd) return cmd_audit(o);
        if (*shift_cmd) return cmd_shift(o);
        if (*split_cmd) return cmd_split(o);
        if (*subset_cmd) return cmd_subset_cover(o);
        if (*seq_check_cmd) return cmd_seq_check(o);
        if (*residues_cmd) return cmd_seq_residues(o);
        if (*validate_cmd) return cmd_validate(o);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_input_error(e) ? kBadInput : kNegative;
    }
    return kBadInput;
}
