#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spectra/reduction.hpp"

namespace spectra {

// Per-vertex classification of a graph that encodes a structure: the ruler's
// pendant and line vertices plus one role vertex per (element, role).
struct VertexClass {
    enum class Kind : uint8_t { Pendant, Line, Element } kind;
    int line_index = 0;  // Line: u-index; Pendant: index of the line vertex it hangs off
    int element = 0;     // Element: block number 1..n
    Role role;           // Element only
};

struct RoleClassification {
    int n = 0;  // recovered element count
    std::vector<VertexClass> vertex;  // 1-based
    std::vector<std::vector<int>> block_vertex;  // [element][role order P,Q,S,R1..Rm]

    int vertex_of(int element, const Role& role, const ReductionParams& params) const;
};

struct ClassifyOutcome {
    std::optional<RoleClassification> classification;
    std::string failure;  // first violated property, when classification is absent
    bool ok() const { return classification.has_value(); }
};

struct EncodedGraph {
    Graph graph;
    RoleClassification classification;
};

// Builds the graph representing a loop-free structure: one ruler gadget, one
// element block per domain element (attached toward the u_1 end), and one
// R_l-to-S edge per tuple. Vertex count is (m+3)n + 8m+2.
EncodedGraph encode_structure(const Structure& s, const ReductionParams& params);

// Graph-algorithmic counterpart of the encoding axioms: succeeds exactly on
// graphs satisfying them, independently of the formula evaluator.
ClassifyOutcome classify_vertices(const Graph& g, const ReductionParams& params);

// Reads the structure back off a classified graph. Blocks are numbered by
// ascending P-vertex index.
Structure decode_graph(const Graph& g, const ReductionParams& params);

// DOT rendering with role labels from a classification.
std::string encoded_graph_dot(const Graph& g, const RoleClassification& cls,
                              const ReductionParams& params);

}  // namespace spectra
