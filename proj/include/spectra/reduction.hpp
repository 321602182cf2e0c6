#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spectra/formula.hpp"
#include "spectra/structure.hpp"

namespace spectra {

// Element-block roles. Each domain element i is represented by one block of
// m+3 vertices i^P, i^Q, i^S, i^R1..i^Rm; P anchors the block, Q and S relay
// it, and the R_l port of one block connects to the S port of another to
// represent the tuple (i,j) in R_l.
struct Role {
    enum class Tag : uint8_t { P, Q, S, Rel } tag;
    int rel_index = 0;  // 1-based, Tag::Rel only

    static Role P() { return {Tag::P, 0}; }
    static Role Q() { return {Tag::Q, 0}; }
    static Role S() { return {Tag::S, 0}; }
    static Role R(int l) { return {Tag::Rel, l}; }

    bool operator==(const Role& o) const { return tag == o.tag && rel_index == o.rel_index; }
    bool operator!=(const Role& o) const { return !(*this == o); }
    bool operator<(const Role& o) const {
        if (tag != o.tag) return tag < o.tag;
        return rel_index < o.rel_index;
    }
    std::string name() const;
};

// Constants of the reduction for a vocabulary of m >= 3 binary relations:
// model sizes map n -> p*n + q with p = m+3 (block size) and q = 8m+2 (ruler
// size).  Roles are told apart by their neighbourhood inside the ruler line:
// role alpha is attached to every line vertex whose distance from an end is
// at most walk_length(alpha) and has its parity.  These neighbourhood sets
// are pairwise distinct, survive the line's end-for-end symmetry, and keep
// every attachment parity-consistent, so encoded graphs stay bipartite.
class ReductionParams {
public:
    ReductionParams(int m, std::vector<std::string> relation_names,
                    std::array<std::string, 3> work_vars = {"x", "y", "z"});

    int m() const { return m_; }
    int p() const { return m_ + 3; }
    int q() const { return 8 * m_ + 2; }
    int line_count() const { return 4 * m_ + 1; }  // vertices u_1..u_{4m+1}

    const std::vector<std::string>& relation_names() const { return names_; }
    const std::array<std::string, 3>& work_vars() const { return work_; }

    int walk_length(const Role& role) const;
    // 1-based u-indices a vertex of the role attaches to, measured from u_1.
    std::vector<int> attach_positions(const Role& role) const;
    std::vector<Role> all_roles() const;
    std::string relation_of_role(const Role& role) const;

private:
    int m_;
    std::vector<std::string> names_;
    std::array<std::string, 3> work_;
};

// The ruler gadget: a line u_1..u_{4m+1} with one pendant w_i per line
// vertex; 8m+2 vertices, 8m+1 edges. Vertices 1..4m+1 are the u_i and
// 4m+1+i is w_i.
struct RulerGadget {
    Graph graph;
    int m;
    int line_vertex(int i) const { return i; }                   // u_i
    int pendant_vertex(int i) const { return 4 * m + 1 + i; }    // w_i
};

RulerGadget ruler_gadget(int m);

// The element block gadget: m+3 vertices d^P, d^Q, d^S, d^R1..d^Rm with
// edges P-Q, Q-S and P-R_l; m+2 edges total.
struct ElementGadget {
    Graph graph;
    int m;
    int vertex(const Role& role) const;
};

ElementGadget element_gadget(int m);

std::string gadget_dot(const RulerGadget& g);
std::string gadget_dot(const ElementGadget& g);
std::string gadget_text(const RulerGadget& g);
std::string gadget_text(const ElementGadget& g);

// Builders for the E-vocabulary formulas of the reduction. All formulas use
// only the three work variables (rebinding a variable inside a closed
// subformula is deliberate and relied upon). Construction is cached, so the
// produced formulas share subterms and evaluate at DAG cost.
class ReductionFormulas {
public:
    explicit ReductionFormulas(const ReductionParams& params);

    const ReductionParams& params() const { return params_; }

    // vertex has degree exactly 1
    FormulaPtr degree_one(const std::string& x);
    // line membership: degree >= 2 with exactly one degree-1 neighbour
    FormulaPtr line_vertex(const std::string& x);
    // line vertex adjacent to exactly one line vertex
    FormulaPtr line_end(const std::string& x);

    enum class DistMode { AtMost, Exactly };
    // line-internal distance between x and y (both in the line)
    FormulaPtr line_distance(int n, DistMode mode, const std::string& x, const std::string& y);
    // line-internal walk of length exactly n (reaches distance <= n of parity n)
    FormulaPtr line_walk(int n, const std::string& x, const std::string& y);

    // the four line-shape sentences; together they hold iff the graph's
    // degree-1 and line vertices induce a copy of the ruler gadget
    FormulaPtr pendant_attachment_axiom();  // every degree-1 vertex hangs off the line
    FormulaPtr end_count_axiom();           // the line has exactly two ends
    FormulaPtr layering_axiom();            // connected, diameter <= 4m, unique BFS layers
    FormulaPtr line_length_axiom();         // the two ends lie at distance exactly 4m
    std::vector<FormulaPtr> structural_axioms();

    // role membership by ruler neighbourhood (excludes pendant/line vertices)
    FormulaPtr role_marker(const Role& role, const std::string& x);
    // x and y carry the two roles and some middle vertex links them
    FormulaPtr role_pair(const Role& alpha, const Role& beta, const std::string& x,
                         const std::string& y);

    FormulaPtr block_shape_axiom();  // every role vertex sits in a proper block
    FormulaPtr same_block(const std::string& x, const std::string& y);
    FormulaPtr cross_edge_axiom();   // block-to-block edges are exactly R_l-to-S
    FormulaPtr encoding_axioms();    // conjunction: shape axioms, no loops, totality

private:
    FormulaPtr exactly_one_adjacent(const std::string& x, const Role& role);
    FormulaPtr unique_nonadjacent_pair(const std::string& x, const Role& alpha,
                                       const Role& beta);
    std::array<std::string, 2> spares(const std::string& used) const;
    std::string spare(const std::string& a, const std::string& b) const;

    ReductionParams params_;
    std::map<std::string, FormulaPtr> cache_;
};

struct ReduceOptions {
    enum class LoopHandling { Auto, AssumeLoopFree, Eliminate };
    LoopHandling loops = LoopHandling::Auto;
};

struct ReductionOutput {
    FormulaPtr phi_prime;       // sentence over {E}
    ReductionParams params;
    FormulaPtr phi_pre;         // preprocessed input (loop handling + padding axioms)
    Vocabulary vocab_pre;
    ReduceOptions::LoopHandling effective_mode;
};

// Loop-marker preprocessing: adds a companion relation per symbol, rewrites
// every atom so a pair (u,u) can be represented by a marker (u,v), v != u,
// and conjoins irreflexivity for every relation.
std::pair<FormulaPtr, Vocabulary> eliminate_self_loops(const FormulaPtr& phi,
                                                       const Vocabulary& vocab);

// Appends fresh relation symbols until m >= 3.
Vocabulary pad_relations(const Vocabulary& vocab);

bool has_loop_atom(const FormulaPtr& phi);

// The sentence-to-sentence translation over a fixed parameter set.
FormulaPtr translate_formula(const FormulaPtr& phi, ReductionFormulas& formulas,
                             const std::vector<std::string>& pool);

// Full pipeline: validate, preprocess, pad, build the E-formula.
ReductionOutput reduce_sentence(const FormulaPtr& phi, const Vocabulary& vocab,
                                const ReduceOptions& options = {});

std::string reduction_report_json(const ReductionOutput& output);

}  // namespace spectra
