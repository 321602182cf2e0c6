#pragma once

// Graph-side oracles used to cross-check the formula builders: BFS distances
// within the line set, walk reachability by dynamic programming, and the
// degree-based line membership rule. All independent of the formula path.

#include <deque>
#include <random>
#include <vector>

#include "spectra/structure.hpp"

namespace spectra::testing {

// line membership: degree >= 2 with exactly one degree-1 neighbour
inline std::vector<bool> line_set(const Graph& g) {
    std::vector<bool> pendant(static_cast<size_t>(g.size()) + 1, false);
    for (int v = 1; v <= g.size(); ++v) pendant[v] = g.degree(v) == 1;
    std::vector<bool> line(static_cast<size_t>(g.size()) + 1, false);
    for (int v = 1; v <= g.size(); ++v) {
        if (pendant[v]) continue;
        int count = 0;
        for (int w : g.neighbors(v)) count += pendant[w] ? 1 : 0;
        line[v] = g.degree(v) >= 2 && count == 1;
    }
    return line;
}

// BFS distance between a and b through line vertices only; -1 if unreachable
// or an endpoint is off the line.
inline int line_bfs_distance(const Graph& g, const std::vector<bool>& line, int a, int b) {
    if (!line[a] || !line[b]) return -1;
    std::vector<int> dist(static_cast<size_t>(g.size()) + 1, -1);
    std::deque<int> queue;
    dist[a] = 0;
    queue.push_back(a);
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        if (v == b) return dist[v];
        for (int w : g.neighbors(v)) {
            if (!line[w] || dist[w] != -1) continue;
            dist[w] = dist[v] + 1;
            queue.push_back(w);
        }
    }
    return -1;
}

// is there a walk of length exactly n from a to b through line vertices?
inline bool line_walk_reachable(const Graph& g, const std::vector<bool>& line, int a, int b,
                                int n) {
    if (!line[a] || !line[b]) return false;
    std::vector<bool> reach(static_cast<size_t>(g.size()) + 1, false);
    reach[a] = true;
    for (int step = 0; step < n; ++step) {
        std::vector<bool> next(static_cast<size_t>(g.size()) + 1, false);
        for (int v = 1; v <= g.size(); ++v) {
            if (!reach[v]) continue;
            for (int w : g.neighbors(v))
                if (line[w]) next[w] = true;
        }
        reach = std::move(next);
    }
    return reach[b];
}

inline Graph random_graph(std::mt19937_64& rng, int n, double p) {
    Graph g(n);
    std::bernoulli_distribution flip(p);
    for (int a = 1; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b)
            if (flip(rng)) g.add_edge(a, b);
    return g;
}

inline Structure random_loop_free_structure(std::mt19937_64& rng, const Vocabulary& vocab,
                                            int n, double p) {
    Structure s(n, vocab);
    std::bernoulli_distribution flip(p);
    for (const auto& rel : vocab.symbols())
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b)
                if (a != b && flip(rng)) s.add_pair(rel, a, b);
    return s;
}

}  // namespace spectra::testing
