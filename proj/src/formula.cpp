#include "spectra/formula.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace spectra {

namespace {

struct NodeKey {
    Kind kind;
    bool value;
    std::string rel, var1, var2;
    const Formula* left;
    const Formula* right;

    bool operator==(const NodeKey& o) const {
        return kind == o.kind && value == o.value && rel == o.rel && var1 == o.var1 &&
               var2 == o.var2 && left == o.left && right == o.right;
    }
};

struct NodeKeyHash {
    size_t operator()(const NodeKey& k) const {
        size_t h = std::hash<int>()(static_cast<int>(k.kind)) * 31 + (k.value ? 1 : 0);
        auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
        mix(std::hash<std::string>()(k.rel));
        mix(std::hash<std::string>()(k.var1));
        mix(std::hash<std::string>()(k.var2));
        mix(std::hash<const void*>()(k.left));
        mix(std::hash<const void*>()(k.right));
        return h;
    }
};

std::mutex g_intern_mutex;
std::unordered_map<NodeKey, FormulaPtr, NodeKeyHash>& intern_table() {
    static auto* table = new std::unordered_map<NodeKey, FormulaPtr, NodeKeyHash>();
    return *table;
}
uint32_t g_next_id = 1;

std::vector<std::string> merge_sorted(const std::vector<std::string>& a,
                                      const std::vector<std::string>& b) {
    std::vector<std::string> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

FormulaPtr intern(Formula node) {
    NodeKey key{node.kind, node.value, node.rel, node.var1, node.var2,
                node.left.get(), node.right.get()};
    std::lock_guard<std::mutex> lock(g_intern_mutex);
    auto& table = intern_table();
    auto it = table.find(key);
    if (it != table.end()) return it->second;

    node.id = g_next_id++;
    switch (node.kind) {
        case Kind::Constant:
            break;
        case Kind::Atom:
        case Kind::Equality: {
            node.free_vars = {node.var1, node.var2};
            std::sort(node.free_vars.begin(), node.free_vars.end());
            node.free_vars.erase(std::unique(node.free_vars.begin(), node.free_vars.end()),
                                 node.free_vars.end());
            break;
        }
        case Kind::Not:
            node.node_count = 1 + node.left->node_count;
            node.quantifier_depth = node.left->quantifier_depth;
            node.free_vars = node.left->free_vars;
            break;
        case Kind::And:
        case Kind::Or:
        case Kind::Implies:
        case Kind::Iff:
            node.node_count = 1 + node.left->node_count + node.right->node_count;
            node.quantifier_depth =
                std::max(node.left->quantifier_depth, node.right->quantifier_depth);
            node.free_vars = merge_sorted(node.left->free_vars, node.right->free_vars);
            break;
        case Kind::Exists:
        case Kind::Forall: {
            node.node_count = 1 + node.left->node_count;
            node.quantifier_depth = 1 + node.left->quantifier_depth;
            node.free_vars = node.left->free_vars;
            auto it2 = std::lower_bound(node.free_vars.begin(), node.free_vars.end(),
                                        node.var1);
            if (it2 != node.free_vars.end() && *it2 == node.var1) node.free_vars.erase(it2);
            break;
        }
    }
    auto ptr = std::make_shared<const Formula>(std::move(node));
    table.emplace(key, ptr);
    return ptr;
}

}  // namespace

FormulaPtr mk_const(bool value) {
    Formula f;
    f.kind = Kind::Constant;
    f.value = value;
    return intern(std::move(f));
}

FormulaPtr mk_true() { return mk_const(true); }
FormulaPtr mk_false() { return mk_const(false); }

FormulaPtr mk_atom(const std::string& rel, const std::string& x, const std::string& y) {
    if (rel.empty() || x.empty() || y.empty()) throw Error("atom with empty name");
    Formula f;
    f.kind = Kind::Atom;
    f.rel = rel;
    f.var1 = x;
    f.var2 = y;
    return intern(std::move(f));
}

FormulaPtr mk_eq(const std::string& x, const std::string& y) {
    Formula f;
    f.kind = Kind::Equality;
    f.var1 = x;
    f.var2 = y;
    return intern(std::move(f));
}

FormulaPtr mk_not(const FormulaPtr& child) {
    Formula f;
    f.kind = Kind::Not;
    f.left = child;
    return intern(std::move(f));
}

static FormulaPtr mk_binary(Kind kind, const FormulaPtr& a, const FormulaPtr& b) {
    Formula f;
    f.kind = kind;
    f.left = a;
    f.right = b;
    return intern(std::move(f));
}

FormulaPtr mk_and(const FormulaPtr& a, const FormulaPtr& b) { return mk_binary(Kind::And, a, b); }
FormulaPtr mk_or(const FormulaPtr& a, const FormulaPtr& b) { return mk_binary(Kind::Or, a, b); }
FormulaPtr mk_implies(const FormulaPtr& a, const FormulaPtr& b) {
    return mk_binary(Kind::Implies, a, b);
}
FormulaPtr mk_iff(const FormulaPtr& a, const FormulaPtr& b) { return mk_binary(Kind::Iff, a, b); }

static FormulaPtr mk_quant(Kind kind, const std::string& var, const FormulaPtr& body) {
    if (var.empty()) throw Error("quantifier with empty variable");
    Formula f;
    f.kind = kind;
    f.var1 = var;
    f.left = body;
    return intern(std::move(f));
}

FormulaPtr mk_exists(const std::string& var, const FormulaPtr& body) {
    return mk_quant(Kind::Exists, var, body);
}
FormulaPtr mk_forall(const std::string& var, const FormulaPtr& body) {
    return mk_quant(Kind::Forall, var, body);
}

FormulaPtr mk_and_all(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return mk_true();
    FormulaPtr acc = fs[0];
    for (size_t i = 1; i < fs.size(); ++i) acc = mk_and(acc, fs[i]);
    return acc;
}

FormulaPtr mk_or_all(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return mk_false();
    FormulaPtr acc = fs[0];
    for (size_t i = 1; i < fs.size(); ++i) acc = mk_or(acc, fs[i]);
    return acc;
}

namespace {

// Precedence levels mirroring the surface grammar: iff < implies < or < and < unary.
int level(const Formula* f) {
    switch (f->kind) {
        case Kind::Iff: return 1;
        case Kind::Implies: return 2;
        case Kind::Or: return 3;
        case Kind::And: return 4;
        default: return 5;  // unary / quantifier / atom
    }
}

void print_rec(const Formula* f, int min_level, std::string& out) {
    int lv = level(f);
    bool parens = lv < min_level;
    if (parens) out += '(';
    switch (f->kind) {
        case Kind::Constant:
            out += f->value ? "true" : "false";
            break;
        case Kind::Atom:
            out += f->rel;
            out += '(';
            out += f->var1;
            out += ',';
            out += f->var2;
            out += ')';
            break;
        case Kind::Equality:
            out += f->var1;
            out += " = ";
            out += f->var2;
            break;
        case Kind::Not:
            out += '~';
            print_rec(f->left.get(), 5, out);
            break;
        case Kind::And:
            // left-associative: left child may be an And chain itself
            print_rec(f->left.get(), 4, out);
            out += " & ";
            print_rec(f->right.get(), 5, out);
            break;
        case Kind::Or:
            print_rec(f->left.get(), 3, out);
            out += " | ";
            print_rec(f->right.get(), 4, out);
            break;
        case Kind::Implies:
            // right-associative
            print_rec(f->left.get(), 3, out);
            out += " -> ";
            print_rec(f->right.get(), 2, out);
            break;
        case Kind::Iff:
            print_rec(f->left.get(), 1, out);
            out += " <-> ";
            print_rec(f->right.get(), 2, out);
            break;
        case Kind::Exists:
        case Kind::Forall:
            out += f->kind == Kind::Exists ? "exists " : "forall ";
            out += f->var1;
            out += ". ";
            print_rec(f->left.get(), 5, out);
            break;
    }
    if (parens) out += ')';
}

}  // namespace

std::string print_formula(const FormulaPtr& f) {
    std::string out;
    out.reserve(f->node_count * 8);
    print_rec(f.get(), 0, out);
    return out;
}

namespace {

void collect_vars(const Formula* f, std::vector<std::string>& order,
                  std::set<std::string>& seen) {
    auto add = [&](const std::string& v) {
        if (seen.insert(v).second) order.push_back(v);
    };
    switch (f->kind) {
        case Kind::Constant:
            break;
        case Kind::Atom:
        case Kind::Equality:
            add(f->var1);
            add(f->var2);
            break;
        case Kind::Not:
            collect_vars(f->left.get(), order, seen);
            break;
        case Kind::Exists:
        case Kind::Forall:
            add(f->var1);
            collect_vars(f->left.get(), order, seen);
            break;
        default:
            collect_vars(f->left.get(), order, seen);
            collect_vars(f->right.get(), order, seen);
            break;
    }
}

}  // namespace

std::vector<std::string> variables_used(const FormulaPtr& f) {
    std::vector<std::string> order;
    std::set<std::string> seen;
    collect_vars(f.get(), order, seen);
    return order;
}

std::set<std::string> free_variables(const FormulaPtr& f) {
    return std::set<std::string>(f->free_vars.begin(), f->free_vars.end());
}

Vocabulary::Vocabulary(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    std::set<std::string> seen;
    for (const auto& s : symbols_) {
        if (s.empty()) throw Error("vocabulary: empty relation name");
        if (!seen.insert(s).second) throw Error("vocabulary: duplicate relation name '" + s + "'");
    }
}

bool Vocabulary::contains(const std::string& name) const { return index_of(name) >= 0; }

int Vocabulary::index_of(const std::string& name) const {
    for (size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i] == name) return static_cast<int>(i);
    return -1;
}

namespace {

void collect_symbols(const Formula* f, std::set<std::string>& out) {
    switch (f->kind) {
        case Kind::Atom:
            out.insert(f->rel);
            break;
        case Kind::Constant:
        case Kind::Equality:
            break;
        case Kind::Not:
        case Kind::Exists:
        case Kind::Forall:
            collect_symbols(f->left.get(), out);
            break;
        default:
            collect_symbols(f->left.get(), out);
            collect_symbols(f->right.get(), out);
            break;
    }
}

}  // namespace

ValidationReport validate_input(const FormulaPtr& f, const Vocabulary& vocab) {
    ValidationReport report;
    report.is_sentence = f->free_vars.empty();
    report.variable_count = static_cast<int>(variables_used(f).size());
    report.relation_count = static_cast<int>(vocab.size());
    if (!report.is_sentence) {
        std::string vars;
        for (const auto& v : f->free_vars) {
            if (!vars.empty()) vars += ", ";
            vars += v;
        }
        report.issues.push_back("not a sentence: free variables {" + vars + "}");
    }
    if (report.variable_count < 3) report.issues.push_back("k < 3");
    std::set<std::string> used;
    collect_symbols(f.get(), used);
    for (const auto& s : used)
        if (!vocab.contains(s)) report.issues.push_back("symbol not in vocabulary: " + s);
    report.eligible = report.issues.empty();
    return report;
}

}  // namespace spectra
