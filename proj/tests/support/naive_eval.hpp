#pragma once

// Reference evaluator: direct recursion, no memoization, no sharing. Kept
// deliberately independent of the library's Evaluator so the two can be
// checked against each other.

#include <map>
#include <string>

#include "spectra/formula.hpp"
#include "spectra/structure.hpp"

namespace spectra::testing {

inline bool naive_eval(const Formula* f, const Structure& model,
                       std::map<std::string, int>& asg) {
    switch (f->kind) {
        case Kind::Constant:
            return f->value;
        case Kind::Equality:
            return asg.at(f->var1) == asg.at(f->var2);
        case Kind::Atom:
            return model.has_pair(f->rel, asg.at(f->var1), asg.at(f->var2));
        case Kind::Not:
            return !naive_eval(f->left.get(), model, asg);
        case Kind::And:
            return naive_eval(f->left.get(), model, asg) &&
                   naive_eval(f->right.get(), model, asg);
        case Kind::Or:
            return naive_eval(f->left.get(), model, asg) ||
                   naive_eval(f->right.get(), model, asg);
        case Kind::Implies:
            return !naive_eval(f->left.get(), model, asg) ||
                   naive_eval(f->right.get(), model, asg);
        case Kind::Iff:
            return naive_eval(f->left.get(), model, asg) ==
                   naive_eval(f->right.get(), model, asg);
        case Kind::Exists:
        case Kind::Forall: {
            bool exists = f->kind == Kind::Exists;
            auto it = asg.find(f->var1);
            bool had = it != asg.end();
            int saved = had ? it->second : 0;
            for (int v = 1; v <= model.size(); ++v) {
                asg[f->var1] = v;
                bool sub = naive_eval(f->left.get(), model, asg);
                if (sub == exists) {
                    if (had) asg[f->var1] = saved;
                    else asg.erase(f->var1);
                    return exists;
                }
            }
            if (had) asg[f->var1] = saved;
            else asg.erase(f->var1);
            return !exists;
        }
    }
    return false;
}

inline bool naive_eval(const FormulaPtr& f, const Structure& model,
                       std::map<std::string, int> asg = {}) {
    return naive_eval(f.get(), model, asg);
}

inline bool naive_eval(const FormulaPtr& f, const Graph& model,
                       std::map<std::string, int> asg = {}) {
    return naive_eval(f.get(), graph_view(model), asg);
}

}  // namespace spectra::testing
