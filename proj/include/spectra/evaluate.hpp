#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "spectra/structure.hpp"

namespace spectra {

using Assignment = std::map<std::string, int>;

// Tarskian model checker with subformula memoization: each node is cached per
// assignment restricted to its free variables, so the cost of a check is
// O(sum over subformulas of n^{#free vars}) instead of n^{quantifier depth}.
// The memo persists across evaluate() calls on the same model, so checking a
// family of sentences that share subformulas pays for the shared parts once.
class Evaluator {
public:
    explicit Evaluator(const Structure& model);
    explicit Evaluator(const Graph& model);

    bool evaluate(const FormulaPtr& f, const Assignment& asg = {});

    size_t memo_size() const { return memo_.size(); }

private:
    struct NodeInfo {
        const Formula* node;
        std::vector<int> free_idx;  // indices into cur_, sorted by variable name
    };

    uint32_t node_id(const Formula* f);
    int var_index(const std::string& name);
    bool eval_node(uint32_t id);
    bool atom_value(const Formula* f) const;

    int n_;
    bool graph_mode_ = false;
    const Graph* graph_ = nullptr;
    // dense n*n membership per relation (structure mode)
    std::unordered_map<std::string, std::vector<uint8_t>> relation_bits_;

    std::unordered_map<const Formula*, uint32_t> ids_;
    std::vector<NodeInfo> nodes_;
    std::unordered_map<std::string, int> var_index_;
    std::vector<int> cur_;  // current value per variable index, 0 = unset

    std::unordered_map<uint64_t, bool> memo_;
    std::map<std::pair<uint32_t, std::vector<int>>, bool> memo_wide_;
    bool use_wide_ = false;
};

// Convenience wrappers building a fresh evaluator per call.
bool evaluate(const FormulaPtr& f, const Structure& model, const Assignment& asg = {});
bool evaluate(const FormulaPtr& f, const Graph& model, const Assignment& asg = {});

}  // namespace spectra
