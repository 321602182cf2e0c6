#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectra/formula.hpp"
#include "spectra/structure.hpp"

namespace spectra {

enum class GroundKind { StructureOverVocab, GraphOverE };

struct GroundAtom {
    std::string rel;
    int a = 0, b = 0;
};

// A clause set over ground-atom variables plus definitional auxiliaries.
// Variables 1..num_original are ground atoms (see atom_of_var); the rest are
// gate outputs whose values are forced by the originals, so an assignment of
// the originals can be completed deterministically.
class Cnf {
public:
    int num_vars = 0;
    int num_original = 0;
    std::vector<GroundAtom> atom_of_var;  // index v-1, for v <= num_original

    size_t clause_count() const { return offsets_.size() - 1; }
    void add_clause(const std::vector<int>& lits);
    const int* clause_begin(size_t i) const { return lits_.data() + offsets_[i]; }
    const int* clause_end(size_t i) const { return lits_.data() + offsets_[i + 1]; }

    struct Gate {
        enum class Op : uint8_t { And, Or, Iff } op;
        int out;
        uint32_t child_begin, child_end;
    };
    std::vector<Gate> gates;          // in dependency order
    std::vector<int> gate_children;   // literal buffer for gates

    bool known_unsat = false;  // grounding folded to constant false

private:
    std::vector<int> lits_;
    std::vector<uint32_t> offsets_ = {0};
};

// Expands the quantifiers of a sentence over the domain {1..n} and converts
// the skeleton to clauses via definitional variables. For GraphOverE, E(a,b)
// and E(b,a) share one variable and E(a,a) is constant false.
Cnf ground_to_cnf(const FormulaPtr& f, int n, GroundKind kind);

// Assignment of the original variables: values[v-1] in {0,1} for v <= num_original.
using CnfAssignment = std::vector<uint8_t>;

CnfAssignment assignment_from_graph(const Cnf& cnf, const Graph& g);
CnfAssignment assignment_from_structure(const Cnf& cnf, const Structure& s);

// Completes auxiliaries through the gate definitions and checks every clause.
bool check_assignment(const Cnf& cnf, const CnfAssignment& original_values);

std::string render_dimacs(const Cnf& cnf);
std::string render_variable_map(const Cnf& cnf);  // sidecar: "v<i> = E(a,b)" lines

enum class SolveStatus { Sat, Unsat, Unknown };

struct SolveResult {
    SolveStatus status = SolveStatus::Unknown;
    std::vector<uint8_t> model;  // per variable 1..num_vars when Sat
    uint64_t steps = 0;
};

// Complete DPLL with unit propagation under a step budget; satisfying
// assignments are verified against every clause before being returned.
SolveResult solve_cnf(const Cnf& cnf, uint64_t step_budget = 50'000'000);

}  // namespace spectra
