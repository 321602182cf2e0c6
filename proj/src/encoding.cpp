#include "spectra/encoding.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace spectra {

namespace {

int role_slot(const Role& role) {
    switch (role.tag) {
        case Role::Tag::P: return 0;
        case Role::Tag::Q: return 1;
        case Role::Tag::S: return 2;
        case Role::Tag::Rel: return 2 + role.rel_index;
    }
    throw Error("unknown role");
}

}  // namespace

int RoleClassification::vertex_of(int element, const Role& role,
                                  const ReductionParams& params) const {
    (void)params;
    if (element < 1 || element > n) throw Error("element out of range");
    return block_vertex[element - 1][role_slot(role)];
}

EncodedGraph encode_structure(const Structure& s, const ReductionParams& params) {
    if (s.has_self_loop()) throw Error("encode: structure has a self-loop");
    {
        auto names = s.relation_names();
        std::set<std::string> have(names.begin(), names.end());
        std::set<std::string> want(params.relation_names().begin(),
                                   params.relation_names().end());
        if (have != want)
            throw Error("encode: structure relations do not match the reduction vocabulary");
    }

    int m = params.m();
    int line = params.line_count();
    int n = s.size();
    int block_size = params.p();
    EncodedGraph out{Graph(params.p() * n + params.q()), RoleClassification{}};
    Graph& g = out.graph;
    RoleClassification& cls = out.classification;
    cls.n = n;
    cls.vertex.resize(static_cast<size_t>(g.size()) + 1);

    auto u = [&](int i) { return i; };
    auto w = [&](int i) { return line + i; };
    auto block = [&](int i, const Role& role) {
        return 2 * line + (i - 1) * block_size + 1 + role_slot(role);
    };

    for (int i = 1; i <= line; ++i) {
        cls.vertex[u(i)] = {VertexClass::Kind::Line, i, 0, Role::P()};
        cls.vertex[w(i)] = {VertexClass::Kind::Pendant, i, 0, Role::P()};
        g.add_edge(u(i), w(i));
        if (i < line) g.add_edge(u(i), u(i + 1));
    }

    auto roles = params.all_roles();
    for (int i = 1; i <= n; ++i) {
        cls.block_vertex.push_back({});
        for (const auto& role : roles) {
            int v = block(i, role);
            cls.vertex[v] = {VertexClass::Kind::Element, 0, i, role};
            cls.block_vertex.back().push_back(v);
            for (int pos : params.attach_positions(role)) g.add_edge(v, u(pos));
        }
        g.add_edge(block(i, Role::P()), block(i, Role::Q()));
        g.add_edge(block(i, Role::Q()), block(i, Role::S()));
        for (int l = 1; l <= m; ++l)
            g.add_edge(block(i, Role::P()), block(i, Role::R(l)));
    }

    for (int l = 1; l <= m; ++l) {
        const auto& name = params.relation_names()[l - 1];
        for (const auto& [a, b] : s.relations().at(name))
            g.add_edge(block(a, Role::R(l)), block(b, Role::S()));
    }
    return out;
}

namespace {

struct Failure {
    std::string message;
};

// Mirrors the encoding axioms one property at a time; returns the first
// violation. Must accept exactly the graphs the axioms accept.
std::optional<Failure> classify_impl(const Graph& g, const ReductionParams& params,
                                     RoleClassification& cls) {
    int m = params.m();
    int line_count = params.line_count();
    int n_vertices = g.size();

    std::vector<bool> is_pendant(static_cast<size_t>(n_vertices) + 1, false);
    for (int v = 1; v <= n_vertices; ++v) is_pendant[v] = g.degree(v) == 1;

    // line membership: degree >= 2 with exactly one degree-1 neighbour
    std::vector<bool> in_line(static_cast<size_t>(n_vertices) + 1, false);
    for (int v = 1; v <= n_vertices; ++v) {
        if (is_pendant[v]) continue;
        int pendant_neighbors = 0;
        for (int w : g.neighbors(v)) pendant_neighbors += is_pendant[w] ? 1 : 0;
        in_line[v] = g.degree(v) >= 2 && pendant_neighbors == 1;
    }

    for (int v = 1; v <= n_vertices; ++v) {
        if (!is_pendant[v]) continue;
        int w = g.neighbors(v)[0];
        if (!in_line[w])
            return Failure{"degree-1 vertex " + std::to_string(v) +
                           " is not attached to a line vertex"};
    }

    std::vector<int> line_vertices;
    for (int v = 1; v <= n_vertices; ++v)
        if (in_line[v]) line_vertices.push_back(v);
    if (static_cast<int>(line_vertices.size()) != line_count)
        return Failure{"expected " + std::to_string(line_count) + " line vertices, found " +
                       std::to_string(line_vertices.size())};

    std::vector<int> ends;
    for (int v : line_vertices) {
        int line_degree = 0;
        for (int w : g.neighbors(v)) line_degree += in_line[w] ? 1 : 0;
        if (line_degree == 1) ends.push_back(v);
        else if (line_degree != 2)
            return Failure{"line vertex " + std::to_string(v) + " has " +
                           std::to_string(line_degree) + " line neighbours"};
    }
    if (ends.size() != 2)
        return Failure{"expected two line ends, found " + std::to_string(ends.size())};

    // walk the line from the end with the smaller index
    std::sort(ends.begin(), ends.end());
    std::vector<int> position(static_cast<size_t>(n_vertices) + 1, -1);
    std::vector<int> order;
    int prev = 0, cur = ends[0];
    while (true) {
        position[cur] = static_cast<int>(order.size());
        order.push_back(cur);
        int next = 0;
        for (int w : g.neighbors(cur)) {
            if (!in_line[w] || w == prev) continue;
            if (next != 0)
                return Failure{"line vertex " + std::to_string(cur) + " branches"};
            next = w;
        }
        if (next == 0) break;
        prev = cur;
        cur = next;
    }
    if (static_cast<int>(order.size()) != line_count)
        return Failure{"line is disconnected: walked " + std::to_string(order.size()) +
                       " of " + std::to_string(line_count) + " vertices"};

    // role detection by exact line neighbourhood
    auto roles = params.all_roles();
    std::vector<std::vector<int>> attach_sets, attach_sets_reflected;
    for (const auto& role : roles) {
        auto set = params.attach_positions(role);
        std::vector<int> zero_based, reflected;
        for (int pos : set) {
            zero_based.push_back(pos - 1);
            reflected.push_back(line_count - pos);
        }
        std::sort(zero_based.begin(), zero_based.end());
        std::sort(reflected.begin(), reflected.end());
        attach_sets.push_back(zero_based);
        attach_sets_reflected.push_back(reflected);
    }

    cls.vertex.assign(static_cast<size_t>(n_vertices) + 1, VertexClass{});
    for (int i = 0; i < line_count; ++i) {
        int u = order[i];
        cls.vertex[u] = {VertexClass::Kind::Line, i + 1, 0, Role::P()};
        for (int w : g.neighbors(u))
            if (is_pendant[w]) cls.vertex[w] = {VertexClass::Kind::Pendant, i + 1, 0, Role::P()};
    }

    std::vector<std::vector<int>> of_role(roles.size());
    std::vector<int> role_index(static_cast<size_t>(n_vertices) + 1, -1);
    for (int v = 1; v <= n_vertices; ++v) {
        if (is_pendant[v] || in_line[v]) continue;
        std::vector<int> attachment;
        for (int w : g.neighbors(v))
            if (in_line[w]) attachment.push_back(position[w]);
        std::sort(attachment.begin(), attachment.end());
        if (attachment.empty())
            return Failure{"vertex " + std::to_string(v) +
                           " is neither pendant, line, nor attached to the line"};
        int match = -1;
        for (size_t r = 0; r < roles.size(); ++r) {
            if (attachment == attach_sets[r] || attachment == attach_sets_reflected[r]) {
                match = static_cast<int>(r);
                break;
            }
        }
        if (match < 0)
            return Failure{"vertex " + std::to_string(v) +
                           " has no role-shaped line neighbourhood"};
        role_index[v] = match;
        of_role[match].push_back(v);
    }

    auto role_of = [&](int v) -> const Role& { return roles[role_index[v]]; };
    auto has_role = [&](int v, const Role& r) {
        return role_index[v] >= 0 && role_of(v) == r;
    };
    auto adjacent_with_role = [&](int v, const Role& r) {
        std::vector<int> out;
        for (int w : g.neighbors(v))
            if (has_role(w, r)) out.push_back(w);
        return out;
    };
    // partners of v reachable as v -- mid -- w with the given roles
    auto pair_partners = [&](int v, const Role& mid_role, const Role& far_role) {
        std::set<int> out;
        for (int mid : adjacent_with_role(v, mid_role))
            for (int far : g.neighbors(mid))
                if (has_role(far, far_role)) out.insert(far);
        return std::vector<int>(out.begin(), out.end());
    };

    const Role P = Role::P(), Q = Role::Q(), S = Role::S();

    auto check_exactly_one = [&](int v, const Role& r, const char* what) -> std::optional<Failure> {
        auto adj = adjacent_with_role(v, r);
        if (adj.size() != 1)
            return Failure{"vertex " + std::to_string(v) + " is adjacent to " +
                           std::to_string(adj.size()) + " " + what + " vertices"};
        return std::nullopt;
    };
    auto check_unique_nonadjacent = [&](int v, const Role& mid, const Role& far,
                                        const char* what) -> std::optional<Failure> {
        auto partners = pair_partners(v, mid, far);
        if (partners.size() != 1)
            return Failure{"vertex " + std::to_string(v) + " has " +
                           std::to_string(partners.size()) + " " + what + " partners"};
        if (g.has_edge(v, partners[0]))
            return Failure{"vertex " + std::to_string(v) + " is adjacent to its " + what +
                           " partner"};
        return std::nullopt;
    };

    for (int p : of_role[role_slot(P)]) {
        if (auto f = check_exactly_one(p, Q, "Q")) return f;
        for (int l = 1; l <= m; ++l)
            if (auto f = check_exactly_one(p, Role::R(l), "R")) return f;
        if (auto f = check_unique_nonadjacent(p, Q, S, "S")) return f;
        auto qs = adjacent_with_role(p, Q);
        for (int l = 1; l <= m; ++l)
            for (int q : qs)
                for (int r : adjacent_with_role(p, Role::R(l)))
                    if (g.has_edge(q, r))
                        return Failure{"edge between Q and R ports of the block of " +
                                       std::to_string(p)};
        for (int l = 1; l <= m; ++l)
            for (int l2 = l; l2 <= m; ++l2)
                for (int r1 : adjacent_with_role(p, Role::R(l)))
                    for (int r2 : adjacent_with_role(p, Role::R(l2)))
                        if (g.has_edge(r1, r2))
                            return Failure{"edge between two R ports of the block of " +
                                           std::to_string(p)};
    }
    for (int q : of_role[role_slot(Q)]) {
        if (auto f = check_exactly_one(q, P, "P")) return f;
        if (auto f = check_exactly_one(q, S, "S")) return f;
        for (int l = 1; l <= m; ++l)
            if (auto f = check_unique_nonadjacent(q, P, Role::R(l), "R")) return f;
    }
    for (int s : of_role[role_slot(S)]) {
        if (auto f = check_exactly_one(s, Q, "Q")) return f;
        if (auto f = check_unique_nonadjacent(s, Q, P, "P")) return f;
        for (int l = 1; l <= m; ++l)
            for (int q : adjacent_with_role(s, Q))
                for (int r : pair_partners(q, P, Role::R(l)))
                    if (g.has_edge(s, r))
                        return Failure{"edge between S " + std::to_string(s) +
                                       " and the R port of its own block"};
    }
    for (int l = 1; l <= m; ++l) {
        for (int r : of_role[role_slot(Role::R(l))]) {
            if (auto f = check_exactly_one(r, P, "P")) return f;
            if (auto f = check_unique_nonadjacent(r, P, Q, "Q")) return f;
            for (int p : adjacent_with_role(r, P))
                for (int s : pair_partners(p, Q, S))
                    if (g.has_edge(r, s))
                        return Failure{"edge between R " + std::to_string(r) +
                                       " and the S port of its own block"};
        }
    }

    // cross-block edges must be R_l-to-S
    auto same_block_linked = [&](int a, int b) {
        const Role& ra = role_of(a);
        const Role& rb = role_of(b);
        if (ra == rb) return a == b;
        auto is_rel = [](const Role& r) { return r.tag == Role::Tag::Rel; };
        if ((ra == P && rb == Q) || (ra == Q && rb == P) || (ra == Q && rb == S) ||
            (ra == S && rb == Q) || (ra == P && is_rel(rb)) || (is_rel(ra) && rb == P))
            return g.has_edge(a, b);
        if ((ra == P && rb == S) || (ra == S && rb == P)) {
            for (int mid : adjacent_with_role(a, Q))
                if (g.has_edge(mid, b)) return true;
            return false;
        }
        if ((ra == Q && is_rel(rb)) || (is_rel(ra) && rb == Q) || (is_rel(ra) && is_rel(rb))) {
            for (int mid : adjacent_with_role(a, P))
                if (g.has_edge(mid, b)) return true;
            return false;
        }
        // S to R_l in either order: S -- Q -- P -- R_l
        int s = ra == S ? a : b;
        int r = ra == S ? b : a;
        for (int q : adjacent_with_role(s, Q))
            for (int p : adjacent_with_role(q, P))
                if (g.has_edge(p, r)) return true;
        return false;
    };
    for (const auto& [a, b] : g.edges()) {
        if (role_index[a] < 0 || role_index[b] < 0) continue;
        if (same_block_linked(a, b)) continue;
        const Role& ra = role_of(a);
        const Role& rb = role_of(b);
        bool sr = (ra == S && rb.tag == Role::Tag::Rel) ||
                  (ra.tag == Role::Tag::Rel && rb == S);
        if (!sr)
            return Failure{"cross-block edge " + std::to_string(a) + "-" + std::to_string(b) +
                           " joins roles " + ra.name() + " and " + rb.name()};
    }

    // group blocks by P anchor, numbered by ascending vertex index
    auto& anchors = of_role[role_slot(P)];
    std::sort(anchors.begin(), anchors.end());
    cls.n = static_cast<int>(anchors.size());
    cls.block_vertex.clear();
    std::vector<int> element(static_cast<size_t>(n_vertices) + 1, 0);
    for (size_t i = 0; i < anchors.size(); ++i) {
        int p = anchors[i];
        int q = adjacent_with_role(p, Q)[0];
        int s = adjacent_with_role(q, S)[0];
        std::vector<int> block = {p, q, s};
        for (int l = 1; l <= m; ++l) block.push_back(adjacent_with_role(p, Role::R(l))[0]);
        for (int v : block) {
            if (element[v] != 0)
                return Failure{"vertex " + std::to_string(v) + " belongs to two blocks"};
            element[v] = static_cast<int>(i) + 1;
        }
        cls.block_vertex.push_back(block);
    }
    for (size_t r = 0; r < roles.size(); ++r)
        for (int v : of_role[r])
            if (element[v] == 0)
                return Failure{"role vertex " + std::to_string(v) + " belongs to no block"};

    for (size_t i = 0; i < cls.block_vertex.size(); ++i)
        for (size_t slot = 0; slot < roles.size(); ++slot)
            cls.vertex[cls.block_vertex[i][slot]] = {VertexClass::Kind::Element, 0,
                                                     static_cast<int>(i) + 1, roles[slot]};
    return std::nullopt;
}

}  // namespace

ClassifyOutcome classify_vertices(const Graph& g, const ReductionParams& params) {
    ClassifyOutcome outcome;
    RoleClassification cls;
    auto failure = classify_impl(g, params, cls);
    if (failure) {
        outcome.failure = failure->message;
        return outcome;
    }
    outcome.classification = std::move(cls);
    return outcome;
}

Structure decode_graph(const Graph& g, const ReductionParams& params) {
    auto outcome = classify_vertices(g, params);
    if (!outcome.ok()) throw Error("decode: " + outcome.failure);
    const auto& cls = *outcome.classification;
    if (cls.n == 0)
        throw Error("decode: graph has an empty domain (bare ruler, no element blocks)");
    Structure s(cls.n, Vocabulary(params.relation_names()));
    for (const auto& [a, b] : g.edges()) {
        const auto& ca = cls.vertex[a];
        const auto& cb = cls.vertex[b];
        if (ca.kind != VertexClass::Kind::Element || cb.kind != VertexClass::Kind::Element)
            continue;
        if (ca.element == cb.element) continue;
        const auto& rel_side = ca.role.tag == Role::Tag::Rel ? ca : cb;
        const auto& s_side = ca.role.tag == Role::Tag::Rel ? cb : ca;
        s.add_pair(params.relation_of_role(rel_side.role), rel_side.element, s_side.element);
    }
    return s;
}

std::string encoded_graph_dot(const Graph& g, const RoleClassification& cls,
                              const ReductionParams& params) {
    (void)params;
    std::ostringstream out;
    out << "graph encoded {\n";
    for (int v = 1; v <= g.size(); ++v) {
        const auto& c = cls.vertex[v];
        std::string label;
        switch (c.kind) {
            case VertexClass::Kind::Line: label = "u" + std::to_string(c.line_index); break;
            case VertexClass::Kind::Pendant: label = "w" + std::to_string(c.line_index); break;
            case VertexClass::Kind::Element:
                label = std::to_string(c.element) + c.role.name();
                break;
        }
        out << "  v" << v << " [label=\"" << label << "\"];\n";
    }
    for (const auto& [a, b] : g.edges()) out << "  v" << a << " -- v" << b << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace spectra
