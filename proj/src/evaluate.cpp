#include "spectra/evaluate.hpp"

namespace spectra {

Evaluator::Evaluator(const Structure& model) : n_(model.size()) {
    for (const auto& [name, pairs] : model.relations()) {
        auto& bits = relation_bits_[name];
        bits.assign(static_cast<size_t>(n_) * n_, 0);
        for (const auto& [a, b] : pairs) bits[static_cast<size_t>(a - 1) * n_ + (b - 1)] = 1;
    }
}

Evaluator::Evaluator(const Graph& model) : n_(model.size()), graph_mode_(true), graph_(&model) {}

int Evaluator::var_index(const std::string& name) {
    auto it = var_index_.find(name);
    if (it != var_index_.end()) return it->second;
    int idx = static_cast<int>(var_index_.size());
    var_index_.emplace(name, idx);
    cur_.push_back(0);
    return idx;
}

uint32_t Evaluator::node_id(const Formula* f) {
    auto it = ids_.find(f);
    if (it != ids_.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(nodes_.size());
    ids_.emplace(f, id);
    NodeInfo info;
    info.node = f;
    for (const auto& v : f->free_vars) info.free_idx.push_back(var_index(v));
    // the packed memo key holds three 13-bit values and a 22-bit node id
    if (id >= (1u << 22) || info.free_idx.size() > 3 || n_ >= 8192) use_wide_ = true;
    nodes_.push_back(std::move(info));
    return id;
}

bool Evaluator::atom_value(const Formula* f) const {
    int a = cur_[var_index_.at(f->var1)];
    int b = cur_[var_index_.at(f->var2)];
    if (a == 0 || b == 0) throw Error("unassigned free variable in atom");
    if (f->kind == Kind::Equality) return a == b;
    if (graph_mode_) {
        if (f->rel != "E")
            throw Error("graph models interpret only the symbol E, got '" + f->rel + "'");
        return graph_->has_edge(a, b);
    }
    auto it = relation_bits_.find(f->rel);
    if (it == relation_bits_.end()) throw Error("uninterpreted relation symbol '" + f->rel + "'");
    return it->second[static_cast<size_t>(a - 1) * n_ + (b - 1)] != 0;
}

bool Evaluator::eval_node(uint32_t id) {
    const NodeInfo& info = nodes_[id];
    const Formula* f = info.node;
    switch (f->kind) {
        case Kind::Constant:
            return f->value;
        case Kind::Atom:
        case Kind::Equality:
            return atom_value(f);
        default:
            break;
    }

    uint64_t key = 0;
    std::pair<uint32_t, std::vector<int>> wide_key;
    bool packed = !use_wide_ && info.free_idx.size() <= 3;
    if (packed) {
        key = (uint64_t{id} << 39);
        int shift = 0;
        for (int idx : info.free_idx) {
            key |= static_cast<uint64_t>(cur_[idx]) << shift;
            shift += 13;
        }
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    } else {
        wide_key.first = id;
        for (int idx : info.free_idx) wide_key.second.push_back(cur_[idx]);
        auto it = memo_wide_.find(wide_key);
        if (it != memo_wide_.end()) return it->second;
    }

    bool result = false;
    switch (f->kind) {
        case Kind::Not:
            result = !eval_node(node_id(f->left.get()));
            break;
        case Kind::And:
            result = eval_node(node_id(f->left.get())) && eval_node(node_id(f->right.get()));
            break;
        case Kind::Or:
            result = eval_node(node_id(f->left.get())) || eval_node(node_id(f->right.get()));
            break;
        case Kind::Implies:
            result = !eval_node(node_id(f->left.get())) || eval_node(node_id(f->right.get()));
            break;
        case Kind::Iff:
            result = eval_node(node_id(f->left.get())) == eval_node(node_id(f->right.get()));
            break;
        case Kind::Exists:
        case Kind::Forall: {
            int vidx = var_index(f->var1);
            uint32_t child = node_id(f->left.get());
            int saved = cur_[vidx];
            bool exists = f->kind == Kind::Exists;
            result = !exists;
            for (int value = 1; value <= n_; ++value) {
                cur_[vidx] = value;
                bool sub = eval_node(child);
                if (sub == exists) {
                    result = exists;
                    break;
                }
            }
            cur_[vidx] = saved;
            break;
        }
        default:
            break;
    }

    if (packed) memo_.emplace(key, result);
    else memo_wide_.emplace(std::move(wide_key), result);
    return result;
}

bool Evaluator::evaluate(const FormulaPtr& f, const Assignment& asg) {
    for (const auto& v : f->free_vars)
        if (asg.find(v) == asg.end())
            throw Error("unassigned free variable '" + v + "'");
    uint32_t root = node_id(f.get());
    std::fill(cur_.begin(), cur_.end(), 0);
    for (const auto& [name, value] : asg) {
        if (value < 1 || value > n_)
            throw Error("assignment of '" + name + "' outside domain 1.." + std::to_string(n_));
        cur_[var_index(name)] = value;
    }
    return eval_node(root);
}

bool evaluate(const FormulaPtr& f, const Structure& model, const Assignment& asg) {
    Evaluator ev(model);
    return ev.evaluate(f, asg);
}

bool evaluate(const FormulaPtr& f, const Graph& model, const Assignment& asg) {
    Evaluator ev(model);
    return ev.evaluate(f, asg);
}

}  // namespace spectra
