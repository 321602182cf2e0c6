#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "spectra/formula.hpp"

namespace spectra {

// A finite relational structure: domain {1..n} plus a set of ordered pairs
// per relation symbol.
class Structure {
public:
    Structure() = default;
    Structure(int size, const Vocabulary& vocab);

    int size() const { return size_; }
    const std::map<std::string, std::set<std::pair<int, int>>>& relations() const {
        return relations_;
    }

    void add_pair(const std::string& rel, int a, int b);
    bool has_pair(const std::string& rel, int a, int b) const;
    bool has_relation(const std::string& rel) const;
    std::vector<std::string> relation_names() const;
    bool has_self_loop() const;
    size_t total_pairs() const;

    bool operator==(const Structure& other) const {
        return size_ == other.size_ && relations_ == other.relations_;
    }

private:
    int size_ = 0;
    std::map<std::string, std::set<std::pair<int, int>>> relations_;
};

// An undirected loop-free graph on vertices {1..n}; edges are unordered.
class Graph {
public:
    Graph() = default;
    explicit Graph(int size);

    int size() const { return size_; }
    void add_edge(int a, int b);
    void remove_edge(int a, int b);
    void toggle_edge(int a, int b);
    bool has_edge(int a, int b) const;
    int degree(int v) const;
    const std::vector<int>& neighbors(int v) const;
    std::vector<std::pair<int, int>> edges() const;  // sorted, a < b
    size_t edge_count() const { return edge_count_; }

    bool operator==(const Graph& other) const {
        return size_ == other.size_ && adjacency_ == other.adjacency_;
    }

private:
    void check_vertex(int v) const;
    int size_ = 0;
    size_t edge_count_ = 0;
    std::vector<std::vector<int>> adjacency_;  // 1-based, sorted
};

struct Bipartition {
    std::vector<int> left;   // color 0
    std::vector<int> right;  // color 1
    std::vector<int> color;  // per-vertex, 1-based
};

// BFS two-coloring over all components; the returned certificate is checked
// edge-by-edge before it is handed out.
std::optional<Bipartition> is_bipartite(const Graph& g);

// View of a graph as a structure over the one-symbol vocabulary {E}.
Structure graph_view(const Graph& g);

// Text formats (see README): "structure <n>" with one "R: (a,b) ..." line
// per relation, and "graph <n>" with an "edges: a-b ..." line.
std::string render_structure(const Structure& s);
Structure parse_structure(const std::string& text);
Structure load_structure_file(const std::string& path);

std::string render_graph(const Graph& g);
Graph parse_graph(const std::string& text);
Graph load_graph_file(const std::string& path);

void save_text_file(const std::string& path, const std::string& content);

}  // namespace spectra
