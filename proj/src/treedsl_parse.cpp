#include "oddcover/errors.hpp"
#include "oddcover/treedsl.hpp"

#include <algorithm>
#include <cctype>

namespace oddcover {

namespace {

struct SExpr {
    bool is_list = false;
    bool quoted = false;
    std::string atom;
    std::vector<SExpr> items;
    int line = 0;
    int column = 0;
};

class Reader {
public:
    explicit Reader(const std::string& text) : text_(text) {}

    SExpr read_top() {
        skip_blank();
        if (pos_ >= text_.size()) throw ParseError("empty document", line_, column_);
        SExpr e = read();
        skip_blank();
        if (pos_ < text_.size()) throw ParseError("trailing input after document", line_, column_);
        return e;
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_blank() {
        while (pos_ < text_.size()) {
            const char ch = text_[pos_];
            if (ch == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(ch))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read() {
        skip_blank();
        SExpr e;
        e.line = line_;
        e.column = column_;
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, column_);
        const char ch = text_[pos_];
        if (ch == ')') throw ParseError("unexpected ')'", line_, column_);
        if (ch == '(') {
            advance();
            e.is_list = true;
            for (;;) {
                skip_blank();
                if (pos_ >= text_.size()) throw ParseError("unclosed '(' opened here", e.line, e.column);
                if (text_[pos_] == ')') {
                    advance();
                    return e;
                }
                e.items.push_back(read());
            }
        }
        if (ch == '"') {
            advance();
            e.quoted = true;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                e.atom += text_[pos_];
                advance();
            }
            if (pos_ >= text_.size()) throw ParseError("unterminated string", e.line, e.column);
            advance();
            return e;
        }
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';' || c == '"') break;
            e.atom += c;
            advance();
        }
        return e;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

bool is_int(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

bool is_symbol(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
    }
    return true;
}

[[noreturn]] void fail(const SExpr& at, const std::string& message) { throw ParseError(message, at.line, at.column); }

bool head_is(const SExpr& e, const char* word) {
    return e.is_list && !e.items.empty() && !e.items[0].is_list && !e.items[0].quoted && e.items[0].atom == word;
}

class DocBuilder {
public:
    TreeDoc build(const SExpr& top) {
        if (!head_is(top, "cover-tree")) fail(top, "document must start with (cover-tree ...)");
        TreeDoc doc;
        bool have_id = false, have_qmin = false, have_k = false, have_t = false;
        const SExpr* k_form = nullptr;
        const SExpr* t_form = nullptr;
        const SExpr* root_form = nullptr;
        const auto& it = top.items;
        std::size_t i = 1;
        // :params must be known before symbols inside :k/:t can be checked.
        for (std::size_t j = 1; j + 1 < it.size(); ++j) {
            if (!it[j].is_list && it[j].atom == ":params") {
                if (!it[j + 1].is_list) fail(it[j + 1], ":params expects a list of symbols");
                for (const auto& s : it[j + 1].items) {
                    if (s.is_list || !is_symbol(s.atom)) fail(s, "parameter names must be symbols");
                    doc.symbol_params.push_back(s.atom);
                }
            }
        }
        params_ = doc.symbol_params;
        while (i < it.size()) {
            const SExpr& key = it[i];
            if (key.is_list) {
                if (root_form) fail(key, "document has more than one root node");
                root_form = &key;
                ++i;
                continue;
            }
            if (i + 1 >= it.size()) fail(key, "keyword " + key.atom + " is missing its value");
            const SExpr& val = it[i + 1];
            if (key.atom == ":id") {
                if (val.is_list) fail(val, ":id expects a name");
                doc.id = val.atom;
                have_id = true;
            } else if (key.atom == ":qmin") {
                if (val.is_list || !is_int(val.atom)) fail(val, ":qmin expects an integer");
                doc.q_min = Natural(val.atom);
                have_qmin = true;
            } else if (key.atom == ":k") {
                k_form = &val;
                have_k = true;
            } else if (key.atom == ":t") {
                t_form = &val;
                have_t = true;
            } else if (key.atom == ":params") {
                // handled above
            } else {
                fail(key, "unknown document keyword '" + key.atom + "'");
            }
            i += 2;
        }
        if (!have_id) fail(top, "missing :id");
        if (!have_qmin) fail(top, "missing :qmin");
        if (!have_k) fail(top, "missing :k");
        if (!have_t) fail(top, "missing :t");
        if (!root_form) fail(top, "missing root node");
        doc.k_expr = factor(*k_form);
        doc.t_expr = count(*t_form);
        doc.root = node(*root_form);
        return doc;
    }

private:
    Expr symbol_ref(const SExpr& e) {
        if (std::find(params_.begin(), params_.end(), e.atom) == params_.end()) {
            throw UnknownSymbol("symbol '" + e.atom + "' at " + std::to_string(e.line) + ":" +
                                std::to_string(e.column) + " is not declared in :params");
        }
        Expr x = Expr::symbol(e.atom);
        x.line = e.line;
        x.column = e.column;
        return x;
    }

    Expr atom_expr(const SExpr& e) {
        if (e.quoted) fail(e, "strings are not expressions");
        if (is_int(e.atom)) {
            Expr x = Expr::integer(Integer(e.atom));
            x.line = e.line;
            x.column = e.column;
            return x;
        }
        if (is_symbol(e.atom)) return symbol_ref(e);
        fail(e, "expected an integer or symbol, got '" + e.atom + "'");
    }

    Expr factor(const SExpr& e) {
        if (!e.is_list) return atom_expr(e);
        if (!head_is(e, "^") || e.items.size() != 3) fail(e, "factor must be INT, SYMBOL or (^ factor INT)");
        const SExpr& ex = e.items[2];
        if (ex.is_list || !is_int(ex.atom)) fail(ex, "exponent must be an integer");
        Expr x;
        x.kind = Expr::Kind::Pow;
        x.args.push_back(factor(e.items[1]));
        x.exponent = std::stoul(ex.atom);
        x.line = e.line;
        x.column = e.column;
        return x;
    }

    Expr count(const SExpr& e) {
        if (!e.is_list) return atom_expr(e);
        if (e.items.size() != 3 || e.items[0].is_list) fail(e, "count must be INT, SYMBOL or (op a b)");
        Expr x;
        const std::string& op = e.items[0].atom;
        if (op == "-") {
            x.kind = Expr::Kind::Sub;
        } else if (op == "*") {
            x.kind = Expr::Kind::Mul;
        } else if (op == "+") {
            x.kind = Expr::Kind::Add;
        } else {
            fail(e.items[0], "unknown count operator '" + op + "'");
        }
        x.args.push_back(count(e.items[1]));
        x.args.push_back(count(e.items[2]));
        x.line = e.line;
        x.column = e.column;
        return x;
    }

    WedgeGroup group(const SExpr& e) {
        WedgeGroup g;
        if (head_is(e, "set")) {
            if (e.items.size() < 2) fail(e, "(set ...) needs at least one member");
            g.kind = WedgeGroup::Kind::Set;
            for (std::size_t i = 1; i < e.items.size(); ++i) g.members.push_back(factor(e.items[i]));
            return g;
        }
        if (head_is(e, "pow")) {
            if (e.items.size() != 3) fail(e, "(pow factor INT) expected");
            const SExpr& a = e.items[2];
            if (a.is_list || !is_int(a.atom) || a.atom == "0") fail(a, "pow exponent must be a positive integer");
            g.kind = WedgeGroup::Kind::Power;
            g.base = factor(e.items[1]);
            g.alpha = std::stoul(a.atom);
            return g;
        }
        fail(e, "wedge group must be (set ...) or (pow ...)");
    }

    Branch branch(const SExpr& e) {
        if (!e.is_list || e.items.empty() || e.items[0].is_list) fail(e, "branch must be a list");
        Branch b;
        b.line = e.line;
        b.column = e.column;
        const std::string& head = e.items[0].atom;
        const auto& it = e.items;
        if (head == "node") {
            b.kind = Branch::Kind::Sub;
            b.node = node(e);
        } else if (head == "arrow") {
            if (it.size() != 1) fail(e, "(arrow) takes no arguments");
            b.kind = Branch::Kind::Arrow;
        } else if (head == "leaf") {
            b.kind = Branch::Kind::Leaf;
            std::size_t i = 1;
            for (; i < it.size() && !(!it[i].is_list && it[i].atom == "@pin"); ++i) b.factors.push_back(factor(it[i]));
            if (b.factors.empty()) fail(e, "leaf needs at least one factor");
            if (i < it.size()) {
                if (i + 2 != it.size()) fail(it[i], "@pin takes exactly one value at the end of the leaf");
                b.pin = count(it[i + 1]);
            }
        } else if (head == "rep") {
            b.kind = Branch::Kind::Rep;
            std::size_t i = 1;
            for (; i < it.size() && !(!it[i].is_list && it[i].atom == ":count"); ++i) b.factors.push_back(factor(it[i]));
            if (b.factors.empty()) fail(e, "rep needs at least one factor");
            if (i + 2 != it.size()) fail(e, "rep needs ':count value' at the end");
            b.count = count(it[i + 1]);
        } else if (head == "wedge") {
            b.kind = Branch::Kind::Wedge;
            std::size_t i = 1;
            for (; i < it.size() && it[i].is_list; ++i) b.groups.push_back(group(it[i]));
            if (i >= it.size() || it[i].atom != ":base") fail(e, "wedge needs ':base factor+'");
            ++i;
            for (; i < it.size() && !(!it[i].is_list && it[i].atom == ":take"); ++i) b.base.push_back(factor(it[i]));
            if (b.base.empty()) fail(e, "wedge :base needs at least one factor");
            if (i < it.size()) {
                if (i + 2 != it.size()) fail(it[i], ":take takes exactly one value at the end of the wedge");
                b.take = count(it[i + 1]);
            }
        } else {
            fail(e.items[0], "unknown branch type '" + head + "'");
        }
        return b;
    }

    std::shared_ptr<Node> node(const SExpr& e) {
        if (!head_is(e, "node")) fail(e, "expected (node ...)");
        if (e.items.size() < 2) fail(e, "node needs a split prime");
        auto n = std::make_shared<Node>();
        n->line = e.line;
        n->column = e.column;
        n->split_prime = factor(e.items[1]);
        for (std::size_t i = 2; i < e.items.size(); ++i) n->branches.push_back(branch(e.items[i]));
        return n;
    }

    std::vector<std::string> params_;
};

}  // namespace

Expr Expr::integer(const Integer& v) {
    Expr e;
    e.kind = Kind::Int;
    e.value = v;
    return e;
}

Expr Expr::symbol(const std::string& name) {
    Expr e;
    e.kind = Kind::Symbol;
    e.name = name;
    return e;
}

WedgeGroup WedgeGroup::set(const std::vector<Natural>& members) {
    WedgeGroup g;
    g.kind = Kind::Set;
    for (const auto& m : members) g.members.push_back(Expr::integer(m));
    return g;
}

WedgeGroup WedgeGroup::power(const Natural& base, unsigned long alpha) {
    WedgeGroup g;
    g.kind = Kind::Power;
    g.base = Expr::integer(base);
    g.alpha = alpha;
    return g;
}

Integer evaluate(const Expr& e, const Bindings& bindings) {
    switch (e.kind) {
        case Expr::Kind::Int:
            return e.value;
        case Expr::Kind::Symbol: {
            auto it = bindings.find(e.name);
            if (it == bindings.end()) throw UnboundSymbol("no value bound for symbol '" + e.name + "'");
            return it->second;
        }
        case Expr::Kind::Pow:
            return pow_natural(evaluate(e.args[0], bindings), e.exponent);
        case Expr::Kind::Sub:
            return evaluate(e.args[0], bindings) - evaluate(e.args[1], bindings);
        case Expr::Kind::Mul:
            return evaluate(e.args[0], bindings) * evaluate(e.args[1], bindings);
        case Expr::Kind::Add:
            return evaluate(e.args[0], bindings) + evaluate(e.args[1], bindings);
    }
    return 0;
}

TreeDoc parse_doc(const std::string& text) {
    Reader reader(text);
    return DocBuilder().build(reader.read_top());
}

}  // namespace oddcover
