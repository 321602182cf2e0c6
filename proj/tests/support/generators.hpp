#pragma once

// Seeded random formula generator for property tests.

#include <random>
#include <string>
#include <vector>

#include "spectra/formula.hpp"

namespace spectra::testing {

struct FormulaGen {
    std::mt19937_64 rng;
    std::vector<std::string> rels;
    std::vector<std::string> vars;

    FormulaGen(uint64_t seed, std::vector<std::string> relations,
               std::vector<std::string> variables)
        : rng(seed), rels(std::move(relations)), vars(std::move(variables)) {}

    const std::string& pick(const std::vector<std::string>& xs) {
        return xs[rng() % xs.size()];
    }

    FormulaPtr atom() {
        switch (rng() % 4) {
            case 0: return mk_eq(pick(vars), pick(vars));
            case 1: return mk_const(rng() % 2 == 0);
            default: return mk_atom(pick(rels), pick(vars), pick(vars));
        }
    }

    FormulaPtr formula(int depth) {
        if (depth <= 0) return atom();
        switch (rng() % 8) {
            case 0: return atom();
            case 1: return mk_not(formula(depth - 1));
            case 2: return mk_and(formula(depth - 1), formula(depth - 1));
            case 3: return mk_or(formula(depth - 1), formula(depth - 1));
            case 4: return mk_implies(formula(depth - 1), formula(depth - 1));
            case 5: return mk_iff(formula(depth - 1), formula(depth - 1));
            case 6: return mk_exists(pick(vars), formula(depth - 1));
            default: return mk_forall(pick(vars), formula(depth - 1));
        }
    }

    // quantify away free variables so the result is a sentence
    FormulaPtr sentence(int depth) {
        FormulaPtr f = formula(depth);
        for (const auto& v : f->free_vars)
            f = rng() % 2 == 0 ? mk_exists(v, f) : mk_forall(v, f);
        return f;
    }
};

}  // namespace spectra::testing
