#include "spectra/cnf.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace spectra {

void Cnf::add_clause(const std::vector<int>& lits) {
    lits_.insert(lits_.end(), lits.begin(), lits.end());
    offsets_.push_back(static_cast<uint32_t>(lits_.size()));
}

namespace {

constexpr int kTrueLit = INT32_MAX;
constexpr int kFalseLit = -INT32_MAX;

bool is_const(int lit) { return lit == kTrueLit || lit == kFalseLit; }

class Grounder {
public:
    Grounder(const FormulaPtr& f, int n, GroundKind kind) : root_(f), n_(n), kind_(kind) {}

    Cnf run() {
        // ground-atom variables come first so originals are 1..num_original
        std::set<std::string> symbols;
        collect_symbols(root_.get(), symbols);
        for (const auto& rel : symbols) {
            if (kind_ == GroundKind::GraphOverE) {
                if (rel != "E") throw Error("graph grounding admits only the symbol E");
                for (int a = 1; a <= n_; ++a)
                    for (int b = a + 1; b <= n_; ++b) new_atom_var(rel, a, b);
            } else {
                for (int a = 1; a <= n_; ++a)
                    for (int b = 1; b <= n_; ++b) new_atom_var(rel, a, b);
            }
        }
        cnf_.num_original = next_var_ - 1;

        uint32_t root = node_id(root_.get());
        int lit = ground(root);
        if (lit == kFalseLit) {
            cnf_.known_unsat = true;
            cnf_.add_clause({});  // empty clause
        } else if (lit != kTrueLit) {
            cnf_.add_clause({lit});
        }
        cnf_.num_vars = next_var_ - 1;
        return std::move(cnf_);
    }

private:
    uint32_t node_id(const Formula* f) {
        auto it = ids_.find(f);
        if (it != ids_.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(nodes_.size());
        ids_.emplace(f, id);
        NodeInfo info;
        info.node = f;
        for (const auto& v : f->free_vars) info.free_idx.push_back(var_index(v));
        nodes_.push_back(std::move(info));
        return id;
    }

    int var_index(const std::string& name) {
        auto it = var_index_.find(name);
        if (it != var_index_.end()) return it->second;
        int idx = static_cast<int>(var_index_.size());
        var_index_.emplace(name, idx);
        cur_.push_back(0);
        return idx;
    }

    static void collect_symbols(const Formula* f, std::set<std::string>& out) {
        switch (f->kind) {
            case Kind::Atom: out.insert(f->rel); break;
            case Kind::Constant:
            case Kind::Equality: break;
            case Kind::Not:
            case Kind::Exists:
            case Kind::Forall: collect_symbols(f->left.get(), out); break;
            default:
                collect_symbols(f->left.get(), out);
                collect_symbols(f->right.get(), out);
                break;
        }
    }

    int new_atom_var(const std::string& rel, int a, int b) {
        int v = next_var_++;
        atom_vars_.emplace(std::make_tuple(rel, a, b), v);
        cnf_.atom_of_var.push_back({rel, a, b});
        return v;
    }

    int atom_var(const std::string& rel, int a, int b) {
        if (kind_ == GroundKind::GraphOverE) {
            if (a == b) return kFalseLit;
            if (a > b) std::swap(a, b);
        }
        return atom_vars_.at(std::make_tuple(rel, a, b));
    }

    int fresh_aux() { return next_var_++; }

    // gate helpers: fold constants and trivial shapes before emitting clauses
    int make_and(std::vector<int> children) {
        std::vector<int> kept;
        for (int c : children) {
            if (c == kFalseLit) return kFalseLit;
            if (c == kTrueLit) continue;
            kept.push_back(c);
        }
        std::sort(kept.begin(), kept.end());
        kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
        for (size_t i = 0; i + 1 < kept.size(); ++i)
            if (kept[i] == -kept[i + 1]) return kFalseLit;
        if (kept.empty()) return kTrueLit;
        if (kept.size() == 1) return kept[0];
        return emit_gate(Cnf::Gate::Op::And, kept);
    }

    int make_or(std::vector<int> children) {
        std::vector<int> kept;
        for (int c : children) {
            if (c == kTrueLit) return kTrueLit;
            if (c == kFalseLit) continue;
            kept.push_back(c);
        }
        std::sort(kept.begin(), kept.end());
        kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
        for (size_t i = 0; i + 1 < kept.size(); ++i)
            if (kept[i] == -kept[i + 1]) return kTrueLit;
        if (kept.empty()) return kFalseLit;
        if (kept.size() == 1) return kept[0];
        return emit_gate(Cnf::Gate::Op::Or, kept);
    }

    int make_iff(int a, int b) {
        if (a == kTrueLit) return b;
        if (b == kTrueLit) return a;
        if (a == kFalseLit) return negate(b);
        if (b == kFalseLit) return negate(a);
        if (a == b) return kTrueLit;
        if (a == -b) return kFalseLit;
        return emit_gate(Cnf::Gate::Op::Iff, {a, b});
    }

    static int negate(int lit) {
        if (lit == kTrueLit) return kFalseLit;
        if (lit == kFalseLit) return kTrueLit;
        return -lit;
    }

    int emit_gate(Cnf::Gate::Op op, const std::vector<int>& children) {
        GateKey key{op, children};
        auto it = gate_cache_.find(key);
        if (it != gate_cache_.end()) return it->second;
        int out = fresh_aux();
        uint32_t begin = static_cast<uint32_t>(cnf_.gate_children.size());
        cnf_.gate_children.insert(cnf_.gate_children.end(), children.begin(), children.end());
        cnf_.gates.push_back({op, out, begin, static_cast<uint32_t>(cnf_.gate_children.size())});
        switch (op) {
            case Cnf::Gate::Op::And: {
                std::vector<int> big = {out};
                for (int c : children) {
                    cnf_.add_clause({-out, c});
                    big.push_back(-c);
                }
                cnf_.add_clause(big);
                break;
            }
            case Cnf::Gate::Op::Or: {
                std::vector<int> big = {-out};
                for (int c : children) {
                    cnf_.add_clause({out, -c});
                    big.push_back(c);
                }
                cnf_.add_clause(big);
                break;
            }
            case Cnf::Gate::Op::Iff: {
                int a = children[0], b = children[1];
                cnf_.add_clause({-out, -a, b});
                cnf_.add_clause({-out, a, -b});
                cnf_.add_clause({out, a, b});
                cnf_.add_clause({out, -a, -b});
                break;
            }
        }
        gate_cache_.emplace(std::move(key), out);
        return out;
    }

    int ground(uint32_t id) {
        const Formula* f = nodes_[id].node;
        switch (f->kind) {
            case Kind::Constant:
                return f->value ? kTrueLit : kFalseLit;
            case Kind::Equality: {
                int a = cur_[var_index(f->var1)];
                int b = cur_[var_index(f->var2)];
                if (a == 0 || b == 0) throw Error("grounding: unassigned variable");
                return a == b ? kTrueLit : kFalseLit;
            }
            case Kind::Atom: {
                int a = cur_[var_index(f->var1)];
                int b = cur_[var_index(f->var2)];
                if (a == 0 || b == 0) throw Error("grounding: unassigned variable");
                return atom_var(f->rel, a, b);
            }
            default:
                break;
        }

        uint64_t key = (uint64_t{id} << 39);
        std::pair<uint32_t, std::vector<int>> wide_key;
        bool packed =
            nodes_[id].free_idx.size() <= 3 && n_ < 8192 && id < (1u << 22);
        if (packed) {
            int shift = 0;
            for (int idx : nodes_[id].free_idx) {
                key |= static_cast<uint64_t>(cur_[idx]) << shift;
                shift += 13;
            }
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        } else {
            wide_key.first = id;
            for (int idx : nodes_[id].free_idx) wide_key.second.push_back(cur_[idx]);
            auto it = memo_wide_.find(wide_key);
            if (it != memo_wide_.end()) return it->second;
        }

        int result = kFalseLit;
        switch (f->kind) {
            case Kind::Not:
                result = negate(ground(node_id(f->left.get())));
                break;
            case Kind::And:
                result = make_and({ground(node_id(f->left.get())),
                                   ground(node_id(f->right.get()))});
                break;
            case Kind::Or:
                result = make_or({ground(node_id(f->left.get())),
                                  ground(node_id(f->right.get()))});
                break;
            case Kind::Implies:
                result = make_or({negate(ground(node_id(f->left.get()))),
                                  ground(node_id(f->right.get()))});
                break;
            case Kind::Iff:
                result = make_iff(ground(node_id(f->left.get())),
                                  ground(node_id(f->right.get())));
                break;
            case Kind::Exists:
            case Kind::Forall: {
                int vidx = var_index(f->var1);
                uint32_t child = node_id(f->left.get());
                int saved = cur_[vidx];
                std::vector<int> children;
                children.reserve(n_);
                for (int value = 1; value <= n_; ++value) {
                    cur_[vidx] = value;
                    children.push_back(ground(child));
                }
                cur_[vidx] = saved;
                result = f->kind == Kind::Exists ? make_or(std::move(children))
                                                 : make_and(std::move(children));
                break;
            }
            default:
                break;
        }
        if (packed) memo_.emplace(key, result);
        else memo_wide_.emplace(std::move(wide_key), result);
        return result;
    }

    struct NodeInfo {
        const Formula* node;
        std::vector<int> free_idx;
    };
    struct GateKey {
        Cnf::Gate::Op op;
        std::vector<int> children;
        bool operator==(const GateKey& o) const { return op == o.op && children == o.children; }
    };
    struct GateKeyHash {
        size_t operator()(const GateKey& k) const {
            size_t h = static_cast<size_t>(k.op);
            for (int c : k.children)
                h ^= std::hash<int>()(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            return h;
        }
    };

    FormulaPtr root_;
    int n_;
    GroundKind kind_;
    Cnf cnf_;
    int next_var_ = 1;
    std::map<std::tuple<std::string, int, int>, int> atom_vars_;
    std::unordered_map<const Formula*, uint32_t> ids_;
    std::vector<NodeInfo> nodes_;
    std::unordered_map<std::string, int> var_index_;
    std::vector<int> cur_;
    std::unordered_map<uint64_t, int> memo_;
    std::map<std::pair<uint32_t, std::vector<int>>, int> memo_wide_;
    std::unordered_map<GateKey, int, GateKeyHash> gate_cache_;
};

}  // namespace

Cnf ground_to_cnf(const FormulaPtr& f, int n, GroundKind kind) {
    if (n < 1) throw Error("grounding size must be >= 1");
    if (!f->free_vars.empty()) throw Error("grounding requires a sentence");
    return Grounder(f, n, kind).run();
}

CnfAssignment assignment_from_graph(const Cnf& cnf, const Graph& g) {
    CnfAssignment values(cnf.num_original, 0);
    for (int v = 1; v <= cnf.num_original; ++v) {
        const auto& atom = cnf.atom_of_var[v - 1];
        values[v - 1] = g.has_edge(atom.a, atom.b) ? 1 : 0;
    }
    return values;
}

CnfAssignment assignment_from_structure(const Cnf& cnf, const Structure& s) {
    CnfAssignment values(cnf.num_original, 0);
    for (int v = 1; v <= cnf.num_original; ++v) {
        const auto& atom = cnf.atom_of_var[v - 1];
        values[v - 1] = s.has_pair(atom.rel, atom.a, atom.b) ? 1 : 0;
    }
    return values;
}

bool check_assignment(const Cnf& cnf, const CnfAssignment& original_values) {
    if (static_cast<int>(original_values.size()) < cnf.num_original)
        throw Error("check_assignment: incomplete assignment of original variables");
    std::vector<uint8_t> value(static_cast<size_t>(cnf.num_vars) + 1, 0);
    for (int v = 1; v <= cnf.num_original; ++v) value[v] = original_values[v - 1] ? 1 : 0;
    auto lit_value = [&](int lit) {
        bool v = value[std::abs(lit)] != 0;
        return lit > 0 ? v : !v;
    };
    for (const auto& gate : cnf.gates) {
        bool out;
        switch (gate.op) {
            case Cnf::Gate::Op::And: {
                out = true;
                for (uint32_t i = gate.child_begin; i < gate.child_end && out; ++i)
                    out = lit_value(cnf.gate_children[i]);
                break;
            }
            case Cnf::Gate::Op::Or: {
                out = false;
                for (uint32_t i = gate.child_begin; i < gate.child_end && !out; ++i)
                    out = lit_value(cnf.gate_children[i]);
                break;
            }
            case Cnf::Gate::Op::Iff:
                out = lit_value(cnf.gate_children[gate.child_begin]) ==
                      lit_value(cnf.gate_children[gate.child_begin + 1]);
                break;
            default:
                out = false;
        }
        value[gate.out] = out ? 1 : 0;
    }
    for (size_t c = 0; c < cnf.clause_count(); ++c) {
        bool sat = false;
        for (const int* lit = cnf.clause_begin(c); lit != cnf.clause_end(c) && !sat; ++lit)
            sat = lit_value(*lit);
        if (!sat) return false;
    }
    return true;
}

std::string render_dimacs(const Cnf& cnf) {
    std::ostringstream out;
    out << "p cnf " << cnf.num_vars << " " << cnf.clause_count() << "\n";
    for (size_t c = 0; c < cnf.clause_count(); ++c) {
        for (const int* lit = cnf.clause_begin(c); lit != cnf.clause_end(c); ++lit)
            out << *lit << " ";
        out << "0\n";
    }
    return out.str();
}

std::string render_variable_map(const Cnf& cnf) {
    std::ostringstream out;
    for (int v = 1; v <= cnf.num_original; ++v) {
        const auto& atom = cnf.atom_of_var[v - 1];
        out << "v" << v << " = " << atom.rel << "(" << atom.a << "," << atom.b << ")\n";
    }
    return out.str();
}

namespace {

class Dpll {
public:
    Dpll(const Cnf& cnf, uint64_t budget) : cnf_(cnf), budget_(budget) {}

    SolveResult run() {
        SolveResult result;
        value_.assign(static_cast<size_t>(cnf_.num_vars) + 1, -1);
        if (cnf_.known_unsat) {
            result.status = SolveStatus::Unsat;
            return result;
        }
        for (size_t c = 0; c < cnf_.clause_count(); ++c)
            if (cnf_.clause_begin(c) == cnf_.clause_end(c)) {
                result.status = SolveStatus::Unsat;
                return result;
            }
        bool exhausted = false;
        bool sat = search(exhausted);
        result.steps = steps_;
        if (sat) {
            for (int v = 1; v <= cnf_.num_vars; ++v)
                if (value_[v] == -1) value_[v] = 0;
            // verify before reporting
            for (size_t c = 0; c < cnf_.clause_count(); ++c) {
                bool ok = false;
                for (const int* lit = cnf_.clause_begin(c); lit != cnf_.clause_end(c); ++lit)
                    if (lit_true(*lit)) { ok = true; break; }
                if (!ok) throw Error("solver produced an unverified model");
            }
            result.status = SolveStatus::Sat;
            result.model.assign(value_.begin(), value_.end());
        } else {
            result.status = exhausted ? SolveStatus::Unknown : SolveStatus::Unsat;
        }
        return result;
    }

private:
    bool lit_true(int lit) const {
        int v = value_[std::abs(lit)];
        if (v == -1) return false;
        return (lit > 0) == (v == 1);
    }
    bool lit_false(int lit) const {
        int v = value_[std::abs(lit)];
        if (v == -1) return false;
        return (lit > 0) == (v == 0);
    }

    // returns false on conflict; appends assigned vars to trail
    bool propagate(std::vector<int>& trail) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t c = 0; c < cnf_.clause_count(); ++c) {
                if (++steps_ > budget_) return true;  // budget checked by caller
                int unassigned = 0, last = 0;
                bool sat = false;
                for (const int* lit = cnf_.clause_begin(c); lit != cnf_.clause_end(c); ++lit) {
                    if (lit_true(*lit)) { sat = true; break; }
                    if (!lit_false(*lit)) {
                        ++unassigned;
                        last = *lit;
                    }
                }
                if (sat) continue;
                if (unassigned == 0) return false;
                if (unassigned == 1) {
                    value_[std::abs(last)] = last > 0 ? 1 : 0;
                    trail.push_back(std::abs(last));
                    changed = true;
                }
            }
        }
        return true;
    }

    int pick_branch() const {
        for (int v = 1; v <= cnf_.num_vars; ++v)
            if (value_[v] == -1) return v;
        return 0;
    }

    bool search(bool& exhausted) {
        if (steps_ > budget_) {
            exhausted = true;
            return false;
        }
        std::vector<int> trail;
        if (!propagate(trail)) {
            for (int v : trail) value_[v] = -1;
            return false;
        }
        if (steps_ > budget_) {
            exhausted = true;
            for (int v : trail) value_[v] = -1;
            return false;
        }
        int v = pick_branch();
        if (v == 0) return true;  // all assigned, propagate found no conflict
        for (int phase = 1; phase >= 0; --phase) {
            value_[v] = phase;
            if (search(exhausted)) return true;
            value_[v] = -1;
            if (exhausted) break;
        }
        for (int u : trail) value_[u] = -1;
        return false;
    }

    const Cnf& cnf_;
    uint64_t budget_;
    uint64_t steps_ = 0;
    std::vector<int8_t> value_;
};

}  // namespace

SolveResult solve_cnf(const Cnf& cnf, uint64_t step_budget) {
    return Dpll(cnf, step_budget).run();
}

}  // namespace spectra
