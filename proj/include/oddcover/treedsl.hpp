#pragma once

#include "oddcover/congruence.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oddcover {

using Bindings = std::map<std::string, Natural>;

// Factor and count expressions share one representation.
struct Expr {
    enum class Kind { Int, Symbol, Pow, Sub, Mul, Add };
    Kind kind = Kind::Int;
    Integer value = 0;
    std::string name;
    unsigned long exponent = 0;
    std::vector<Expr> args;
    int line = 0;
    int column = 0;

    static Expr integer(const Integer& v);
    static Expr symbol(const std::string& name);
};

Integer evaluate(const Expr& e, const Bindings& bindings);

struct WedgeGroup {
    enum class Kind { Set, Power };
    Kind kind = Kind::Set;
    std::vector<Expr> members;  // Set: m_1..m_l
    Expr base;                  // Power: m_1
    unsigned long alpha = 0;    // Power: exponent bound

    static WedgeGroup set(const std::vector<Natural>& members);
    static WedgeGroup power(const Natural& base, unsigned long alpha);
};

struct Node;

struct Branch {
    enum class Kind { Leaf, Rep, Wedge, Arrow, Sub };
    Kind kind = Kind::Leaf;
    std::vector<Expr> factors;     // Leaf, Rep: modulus as a product
    std::optional<Expr> pin;       // Leaf
    std::optional<Expr> count;     // Rep
    std::vector<WedgeGroup> groups;
    std::vector<Expr> base;        // Wedge: m_0 as a product
    std::optional<Expr> take;      // Wedge
    std::shared_ptr<Node> node;    // Sub
    int line = 0;
    int column = 0;
};

struct Node {
    Expr split_prime;
    std::vector<Branch> branches;
    int line = 0;
    int column = 0;
};

struct TreeDoc {
    std::string id;
    Natural q_min = 0;
    std::vector<std::string> symbol_params;
    Expr k_expr;
    Expr t_expr;
    std::shared_ptr<Node> root;
};

struct LeftoverClass {
    ResidueClass cls;
    Natural p;
    Natural s;

    bool operator==(const LeftoverClass&) const = default;
};

struct ExpansionParams {
    std::optional<Natural> q;
    Bindings bindings;
};

struct Expansion {
    CoveringSystem system;
    std::vector<LeftoverClass> leftovers;
    Natural q;
};

struct Diagnostic {
    std::string kind;
    std::string message;
    int line = 0;
    int column = 0;
};

TreeDoc parse_doc(const std::string& text);

std::vector<Natural> wedge_moduli(const std::vector<WedgeGroup>& groups, const Natural& base,
                                  const Bindings& bindings = {});

// Every prime dividing a factor or split prime of the document.
std::set<Natural> figure_primes(const TreeDoc& doc, const Bindings& bindings);

// q used when the caller gives none: next_usable_prime(q_min, figure primes and bound values).
Natural default_q(const TreeDoc& doc, const Bindings& bindings);

Expansion expand(const TreeDoc& doc, const ExpansionParams& params);

std::vector<Congruence> mop_up(const std::vector<LeftoverClass>& leftovers, const Natural& q,
                               const std::set<Natural>& used_moduli);

// Static checks; symbols are evaluated under `sample` (each parameter defaults to 17).
std::vector<Diagnostic> validate_doc(const TreeDoc& doc, const Bindings& sample = {});

}  // namespace oddcover
