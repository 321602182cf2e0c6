#pragma once

#include <cstdint>
#include <optional>

#include "spectra/structure.hpp"

namespace spectra {

// Streams every structure of the given size over the vocabulary exactly once,
// in a fixed order (relations in vocabulary order, pairs lexicographic, subsets
// by binary counter). Total count is 2^(m*n*(n-1)) loop-free or 2^(m*n^2);
// callers are responsible for keeping that feasible.
class StructureEnumerator {
public:
    StructureEnumerator(const Vocabulary& vocab, int n, bool loop_free);

    std::optional<Structure> next();
    uint64_t total() const { return total_; }
    int bit_count() const { return static_cast<int>(slots_.size()); }

private:
    Vocabulary vocab_;
    int n_;
    std::vector<std::pair<std::pair<int, int>, int>> slots_;  // ((a,b), relation index)
    uint64_t counter_ = 0;
    uint64_t total_ = 1;
};

// Same idea for graphs: one bit per unordered vertex pair.
class GraphEnumerator {
public:
    explicit GraphEnumerator(int n);

    std::optional<Graph> next();
    uint64_t total() const { return total_; }
    int bit_count() const { return static_cast<int>(pairs_.size()); }

private:
    int n_;
    std::vector<std::pair<int, int>> pairs_;
    uint64_t counter_ = 0;
    uint64_t total_ = 1;
};

}  // namespace spectra
