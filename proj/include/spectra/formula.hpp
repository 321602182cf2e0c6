#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectra {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// First-order formulas over a vocabulary of binary relation symbols, with
// equality. Nodes are immutable and hash-consed: structurally identical
// formulas share one node, so pointer/id equality is structural equality.
enum class Kind : uint8_t {
    Constant,
    Atom,      // R(x,y)
    Equality,  // x = y
    Not,
    And,
    Or,
    Implies,
    Iff,
    Exists,
    Forall,
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
public:
    Kind kind;
    bool value = false;       // Constant
    std::string rel;          // Atom
    std::string var1, var2;   // Atom/Equality operands; quantified variable in var1
    FormulaPtr left, right;   // Not/Exists/Forall use left only

    uint32_t id = 0;                      // intern id, unique per structure
    uint64_t node_count = 1;              // tree size
    uint32_t quantifier_depth = 0;
    std::vector<std::string> free_vars;   // sorted, deduplicated

    bool is_quantifier() const { return kind == Kind::Exists || kind == Kind::Forall; }
    bool is_binary() const {
        return kind == Kind::And || kind == Kind::Or || kind == Kind::Implies ||
               kind == Kind::Iff;
    }
};

FormulaPtr mk_const(bool value);
FormulaPtr mk_true();
FormulaPtr mk_false();
FormulaPtr mk_atom(const std::string& rel, const std::string& x, const std::string& y);
FormulaPtr mk_eq(const std::string& x, const std::string& y);
FormulaPtr mk_not(const FormulaPtr& f);
FormulaPtr mk_and(const FormulaPtr& a, const FormulaPtr& b);
FormulaPtr mk_or(const FormulaPtr& a, const FormulaPtr& b);
FormulaPtr mk_implies(const FormulaPtr& a, const FormulaPtr& b);
FormulaPtr mk_iff(const FormulaPtr& a, const FormulaPtr& b);
FormulaPtr mk_exists(const std::string& var, const FormulaPtr& body);
FormulaPtr mk_forall(const std::string& var, const FormulaPtr& body);

// Left-associated chain; empty list gives the neutral constant.
FormulaPtr mk_and_all(const std::vector<FormulaPtr>& fs);
FormulaPtr mk_or_all(const std::vector<FormulaPtr>& fs);

inline bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
    return a->id == b->id;
}

// Unambiguous surface syntax; parse_formula(print_formula(f)) reproduces f.
std::string print_formula(const FormulaPtr& f);

// All variable names occurring in f (free or bound), in first-occurrence
// order; its size is the sentence's variable count k.
std::vector<std::string> variables_used(const FormulaPtr& f);

std::set<std::string> free_variables(const FormulaPtr& f);

// Vocabulary: ordered list of binary relation-symbol names.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> symbols);

    const std::vector<std::string>& symbols() const { return symbols_; }
    size_t size() const { return symbols_.size(); }
    bool contains(const std::string& name) const;
    int index_of(const std::string& name) const;  // -1 if absent

private:
    std::vector<std::string> symbols_;
};

struct ValidationReport {
    bool is_sentence = false;
    int variable_count = 0;
    int relation_count = 0;
    bool eligible = false;  // usable as reduction input
    std::vector<std::string> issues;
};

// Checks reduction preconditions: sentence, k >= 3, symbols within vocab.
ValidationReport validate_input(const FormulaPtr& f, const Vocabulary& vocab);

}  // namespace spectra
