#include "spectra/enumerate.hpp"

namespace spectra {

StructureEnumerator::StructureEnumerator(const Vocabulary& vocab, int n, bool loop_free)
    : vocab_(vocab), n_(n) {
    if (n < 1) throw Error("enumeration size must be >= 1");
    for (size_t r = 0; r < vocab.size(); ++r)
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b) {
                if (loop_free && a == b) continue;
                slots_.push_back({{a, b}, static_cast<int>(r)});
            }
    if (slots_.size() >= 63) throw Error("enumeration space too large (>= 2^63 structures)");
    total_ = uint64_t{1} << slots_.size();
}

std::optional<Structure> StructureEnumerator::next() {
    if (counter_ >= total_) return std::nullopt;
    Structure s(n_, vocab_);
    for (size_t i = 0; i < slots_.size(); ++i)
        if (counter_ & (uint64_t{1} << i))
            s.add_pair(vocab_.symbols()[slots_[i].second], slots_[i].first.first,
                       slots_[i].first.second);
    ++counter_;
    return s;
}

GraphEnumerator::GraphEnumerator(int n) : n_(n) {
    if (n < 1) throw Error("enumeration size must be >= 1");
    for (int a = 1; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b) pairs_.emplace_back(a, b);
    if (pairs_.size() >= 63) throw Error("enumeration space too large (>= 2^63 graphs)");
    total_ = uint64_t{1} << pairs_.size();
}

std::optional<Graph> GraphEnumerator::next() {
    if (counter_ >= total_) return std::nullopt;
    Graph g(n_);
    for (size_t i = 0; i < pairs_.size(); ++i)
        if (counter_ & (uint64_t{1} << i)) g.add_edge(pairs_[i].first, pairs_[i].second);
    ++counter_;
    return g;
}

}  // namespace spectra
