#include "spectra/reduction.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace spectra {

std::string Role::name() const {
    switch (tag) {
        case Tag::P: return "P";
        case Tag::Q: return "Q";
        case Tag::S: return "S";
        case Tag::Rel: return "R" + std::to_string(rel_index);
    }
    return "?";
}

ReductionParams::ReductionParams(int m, std::vector<std::string> relation_names,
                                 std::array<std::string, 3> work_vars)
    : m_(m), names_(std::move(relation_names)), work_(std::move(work_vars)) {
    if (m_ < 3) throw Error("reduction requires m >= 3 relation symbols");
    if (static_cast<int>(names_.size()) != m_)
        throw Error("reduction params: expected " + std::to_string(m_) + " relation names");
    std::set<std::string> w(work_.begin(), work_.end());
    if (w.size() != 3) throw Error("reduction params: need three distinct work variables");

    // Attachment sets must stay pairwise distinct under the line's
    // end-for-end reflection, otherwise two roles become indistinguishable.
    auto roles = all_roles();
    std::vector<std::vector<int>> sets;
    for (const auto& r : roles) sets.push_back(attach_positions(r));
    for (size_t i = 0; i < roles.size(); ++i) {
        for (size_t j = 0; j < roles.size(); ++j) {
            if (i == j) continue;
            std::vector<int> reflected;
            for (int pos : sets[j]) reflected.push_back(line_count() + 1 - pos);
            std::sort(reflected.begin(), reflected.end());
            if (sets[i] == sets[j] || sets[i] == reflected)
                throw Error("attachment table not reflection-safe: " + roles[i].name() +
                            " vs " + roles[j].name());
        }
    }
}

int ReductionParams::walk_length(const Role& role) const {
    switch (role.tag) {
        case Role::Tag::P: return 0;
        case Role::Tag::Q: return 1;
        case Role::Tag::S: return 2;
        case Role::Tag::Rel:
            if (role.rel_index < 1 || role.rel_index > m_)
                throw Error("role index out of range");
            return 2 * role.rel_index + 1;
    }
    throw Error("unknown role");
}

std::vector<int> ReductionParams::attach_positions(const Role& role) const {
    int n = walk_length(role);
    std::vector<int> out;
    for (int dist = n % 2; dist <= n; dist += 2) out.push_back(dist + 1);
    return out;
}

std::vector<Role> ReductionParams::all_roles() const {
    std::vector<Role> roles = {Role::P(), Role::Q(), Role::S()};
    for (int l = 1; l <= m_; ++l) roles.push_back(Role::R(l));
    return roles;
}

std::string ReductionParams::relation_of_role(const Role& role) const {
    if (role.tag != Role::Tag::Rel) throw Error("role carries no relation");
    return names_[role.rel_index - 1];
}

RulerGadget ruler_gadget(int m) {
    if (m < 1) throw Error("gadget requires m >= 1");
    RulerGadget g{Graph(8 * m + 2), m};
    for (int i = 1; i <= 4 * m; ++i) g.graph.add_edge(g.line_vertex(i), g.line_vertex(i + 1));
    for (int i = 1; i <= 4 * m + 1; ++i) g.graph.add_edge(g.line_vertex(i), g.pendant_vertex(i));
    return g;
}

int ElementGadget::vertex(const Role& role) const {
    switch (role.tag) {
        case Role::Tag::P: return 1;
        case Role::Tag::Q: return 2;
        case Role::Tag::S: return 3;
        case Role::Tag::Rel: return 3 + role.rel_index;
    }
    throw Error("unknown role");
}

ElementGadget element_gadget(int m) {
    if (m < 1) throw Error("gadget requires m >= 1");
    ElementGadget g{Graph(m + 3), m};
    g.graph.add_edge(g.vertex(Role::P()), g.vertex(Role::Q()));
    g.graph.add_edge(g.vertex(Role::Q()), g.vertex(Role::S()));
    for (int l = 1; l <= m; ++l) g.graph.add_edge(g.vertex(Role::P()), g.vertex(Role::R(l)));
    return g;
}

namespace {

std::string dot_of(const Graph& graph, const std::vector<std::string>& labels,
                   const std::string& name) {
    std::ostringstream out;
    out << "graph " << name << " {\n";
    for (int v = 1; v <= graph.size(); ++v)
        out << "  v" << v << " [label=\"" << labels[v] << "\"];\n";
    for (const auto& [a, b] : graph.edges()) out << "  v" << a << " -- v" << b << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace

static std::vector<std::string> ruler_labels(const RulerGadget& g) {
    std::vector<std::string> labels(static_cast<size_t>(g.graph.size()) + 1);
    for (int i = 1; i <= 4 * g.m + 1; ++i) {
        labels[g.line_vertex(i)] = "u" + std::to_string(i);
        labels[g.pendant_vertex(i)] = "w" + std::to_string(i);
    }
    return labels;
}

static std::vector<std::string> element_labels(const ElementGadget& g) {
    std::vector<std::string> labels(static_cast<size_t>(g.graph.size()) + 1);
    labels[g.vertex(Role::P())] = "dP";
    labels[g.vertex(Role::Q())] = "dQ";
    labels[g.vertex(Role::S())] = "dS";
    for (int l = 1; l <= g.m; ++l) labels[g.vertex(Role::R(l))] = "dR" + std::to_string(l);
    return labels;
}

std::string gadget_dot(const RulerGadget& g) { return dot_of(g.graph, ruler_labels(g), "C"); }
std::string gadget_dot(const ElementGadget& g) { return dot_of(g.graph, element_labels(g), "D"); }

static std::string text_of(const Graph& graph, const std::vector<std::string>& labels) {
    std::ostringstream out;
    out << "vertices " << graph.size() << ", edges " << graph.edge_count() << "\n";
    for (const auto& [a, b] : graph.edges())
        out << labels[a] << " -- " << labels[b] << "\n";
    return out.str();
}

std::string gadget_text(const RulerGadget& g) { return text_of(g.graph, ruler_labels(g)); }
std::string gadget_text(const ElementGadget& g) { return text_of(g.graph, element_labels(g)); }

ReductionFormulas::ReductionFormulas(const ReductionParams& params) : params_(params) {}

std::array<std::string, 2> ReductionFormulas::spares(const std::string& used) const {
    std::array<std::string, 2> out;
    int k = 0;
    for (const auto& v : params_.work_vars())
        if (v != used) out[k++] = v;
    if (k != 2) throw Error("variable '" + used + "' is not a work variable");
    return out;
}

std::string ReductionFormulas::spare(const std::string& a, const std::string& b) const {
    for (const auto& v : params_.work_vars())
        if (v != a && v != b) return v;
    throw Error("no spare work variable for (" + a + "," + b + ")");
}

FormulaPtr ReductionFormulas::degree_one(const std::string& x) {
    auto key = "deg1:" + x;
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    auto [y, z] = spares(x);
    // E(x,y) with y unique: exists y [E(x,y) & forall z [E(x,z) -> y = z]]
    FormulaPtr f = mk_exists(
        y, mk_and(mk_atom("E", x, y),
                  mk_forall(z, mk_implies(mk_atom("E", x, z), mk_eq(y, z)))));
    return cache_[key] = f;
}

FormulaPtr ReductionFormulas::line_vertex(const std::string& x) {
    auto key = "line:" + x;
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    auto [y, z] = spares(x);
    // not degree 1, and exactly one neighbour of degree 1
    FormulaPtr unique_pendant = mk_exists(
        y, mk_and(mk_and(mk_atom("E", x, y), degree_one(y)),
                  mk_forall(z, mk_implies(mk_and(mk_atom("E", x, z), degree_one(z)),
                                          mk_eq(y, z)))));
    FormulaPtr f = mk_and(mk_not(degree_one(x)), unique_pendant);
    return cache_[key] = f;
}

FormulaPtr ReductionFormulas::line_end(const std::string& x) {
    auto key = "end:" + x;
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    auto [y, z] = spares(x);
    FormulaPtr f = mk_and(
        line_vertex(x),
        mk_exists(y, mk_and(mk_and(line_vertex(y), mk_atom("E", x, y)),
                            mk_forall(z, mk_implies(mk_and(line_vertex(z), mk_atom("E", x, z)),
                                                    mk_eq(y, z))))));
    return cache_[key] = f;
}

FormulaPtr ReductionFormulas::line_distance(int n, DistMode mode, const std::string& x,
                                            const std::string& y) {
    if (n < 0 || n > 4 * params_.m())
        throw Error("line distance out of range: " + std::to_string(n));
    if (x == y) throw Error("line_distance needs two distinct variables");
    std::string tag = mode == DistMode::AtMost ? "am" : "ex";
    auto key = tag + ":" + std::to_string(n) + ":" + x + ":" + y;
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    FormulaPtr f;
    if (mode == DistMode::AtMost) {
        if (n == 0) {
            f = mk_and(line_vertex(x), mk_eq(x, y));
        } else {
            std::string z = spare(x, y);
            // dist(x,y) <= n  iff  x=y or some line neighbour of x is <= n-1 away
            FormulaPtr step = mk_exists(
                z, mk_and(mk_and(line_vertex(z), mk_atom("E", x, z)),
                          line_distance(n - 1, DistMode::AtMost, z, y)));
            f = mk_and(mk_and(line_vertex(x), line_vertex(y)), mk_or(mk_eq(x, y), step));
        }
    } else {
        if (n == 0) {
            f = line_distance(0, DistMode::AtMost, x, y);
        } else {
            f = mk_and(line_distance(n, DistMode::AtMost, x, y),
                       mk_not(line_distance(n - 1, DistMode::AtMost, x, y)));
        }
    }
    return cache_[key] = f;
}

FormulaPtr ReductionFormulas::line_walk(int n, const std::string& x, const std::string& y) {
    if (n < 0) throw Error("line walk length out of range");
    if (x == y) throw Error("line_walk needs two distinct variables");
    auto key = "wk:" + std::to_string(n) + ":" + x + ":" + y;
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    FormulaPtr f;
    if (n == 0) {
        f = mk_and(mk_eq(x, y), line_vertex(x));
    } else {
        std::string z = spare(x, y);
        f = mk_and(mk_and(line_vertex(x), line_vertex(y)),
                   mk_exists(z, mk_and(mk_and(line_vertex(z), mk_atom("E", x, z)),
                                       line_walk(n - 1, z, y))));
    }
    return cache_[key] = f;
}

FormulaPtr ReductionFormulas::pendant_attachment_axiom() {
    auto key = std::string("ax:pendant");
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const auto& [x, y, z] = params_.work_vars();
    (void)z;
    FormulaPtr f = mk_forall(
        x, mk_forall(y, mk_implies(mk_and(degree_one(x), mk_atom("E", x, y)), line_vertex(y))));
    return cache_[key] = f;
}

FormulaPtr ReductionFormulas::end_count_axiom() {
    auto key = std::string("ax:ends");
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const auto& [x, y, z] = params_.work_vars();
    FormulaPtr f = mk_exists(
        x, mk_exists(y, mk_and(mk_and(line_end(x), line_end(y)),
                               mk_forall(z, mk_implies(line_end(z),
                                                       mk_or(mk_eq(z, x), mk_eq(z, y)))))));
    return cache_[key] = f;
}

FormulaPtr ReductionFormulas::layering_axiom() {
    auto key = std::string("ax:layers");
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const auto& [x, y, z] = params_.work_vars();
    int diameter = 4 * params_.m();

    // (a) any two line vertices are within line distance 4m
    FormulaPtr bounded = mk_forall(
        x, mk_forall(y, mk_implies(mk_and(line_vertex(x), line_vertex(y)),
                                   line_distance(diameter, DistMode::AtMost, x, y))));

    // (b) from some end, each distance layer holds at most one vertex
    std::vector<FormulaPtr> layers;
    for (int n = 0; n <= diameter; ++n) {
        layers.push_back(mk_forall(
            y, mk_implies(line_distance(n, DistMode::Exactly, x, y),
                          mk_forall(z, mk_implies(line_distance(n, DistMode::Exactly, x, z),
                                                  mk_eq(z, y))))));
    }
    FormulaPtr unique_layers = mk_exists(x, mk_and(line_end(x), mk_and_all(layers)));
    FormulaPtr f = mk_and(bounded, unique_layers);
    return cache_[key] = f;
}

FormulaPtr ReductionFormulas::line_length_axiom() {
    auto key = std::string("ax:length");
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const auto& [x, y, z] = params_.work_vars();
    (void)z;
    FormulaPtr f = mk_forall(
        x, mk_forall(y, mk_implies(mk_and(mk_and(line_end(x), line_end(y)),
                                          mk_not(mk_eq(x, y))),
                                   line_distance(4 * params_.m(), DistMode::Exactly, x, y))));
    return cache_[key] = f;
}

std::vector<FormulaPtr> ReductionFormulas::structural_axioms() {
    return {pendant_attachment_axiom(), end_count_axiom(), layering_axiom(),
            line_length_axiom()};
}

FormulaPtr ReductionFormulas::role_marker(const Role& role, const std::string& x) {
    auto key = "role:" + role.name() + ":" + x;
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    auto [y, z] = spares(x);
    int n = params_.walk_length(role);
    // attached to exactly the line vertices an n-walk from an end can reach;
    // pendants and line vertices are excluded so the classification is a
    // partition
    FormulaPtr shape = mk_exists(
        y, mk_and(line_end(y),
                  mk_forall(z, mk_implies(line_vertex(z),
                                          mk_iff(mk_atom("E", x, z), line_walk(n, y, z))))));
    FormulaPtr f = mk_and(mk_and(mk_not(degree_one(x)), mk_not(line_vertex(x))), shape);
    return cache_[key] = f;
}

FormulaPtr ReductionFormulas::role_pair(const Role& alpha, const Role& beta,
                                        const std::string& x, const std::string& y) {
    std::optional<Role> middle;
    bool ps = (alpha == Role::P() && beta == Role::S()) ||
              (alpha == Role::S() && beta == Role::P());
    bool qr = (alpha.tag == Role::Tag::Rel && beta == Role::Q()) ||
              (alpha == Role::Q() && beta.tag == Role::Tag::Rel);
    bool rr = alpha.tag == Role::Tag::Rel && beta.tag == Role::Tag::Rel && alpha != beta;
    if (ps) middle = Role::Q();
    else if (qr || rr) middle = Role::P();
    if (!middle)
        throw Error("role_pair undefined for (" + alpha.name() + "," + beta.name() + ")");

    auto key = "pair:" + alpha.name() + ":" + beta.name() + ":" + x + ":" + y;
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::string z = spare(x, y);
    FormulaPtr f = mk_and(
        mk_and(role_marker(alpha, x), role_marker(beta, y)),
        mk_exists(z, mk_and(mk_and(role_marker(*middle, z), mk_atom("E", x, z)),
                            mk_atom("E", z, y))));
    return cache_[key] = f;
}

FormulaPtr ReductionFormulas::exactly_one_adjacent(const std::string& x, const Role& role) {
    auto key = "adj1:" + role.name() + ":" + x;
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    auto [y, z] = spares(x);
    FormulaPtr f = mk_exists(
        y, mk_and(mk_and(role_marker(role, y), mk_atom("E", x, y)),
                  mk_forall(z, mk_implies(mk_and(role_marker(role, z), mk_atom("E", x, z)),
                                          mk_eq(z, y)))));
    return cache_[key] = f;
}

FormulaPtr ReductionFormulas::unique_nonadjacent_pair(const std::string& x, const Role& alpha,
                                                      const Role& beta) {
    auto key = "upair:" + alpha.name() + ":" + beta.name() + ":" + x;
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    auto [y, z] = spares(x);
    // exactly one pair partner, and that partner is not adjacent to x
    FormulaPtr f = mk_exists(
        y, mk_and(mk_and(role_pair(alpha, beta, x, y), mk_not(mk_atom("E", x, y))),
                  mk_forall(z, mk_implies(role_pair(alpha, beta, x, z), mk_eq(z, y)))));
    return cache_[key] = f;
}

FormulaPtr ReductionFormulas::block_shape_axiom() {
    auto key = std::string("ax:blocks");
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const auto& [x, y, z] = params_.work_vars();
    int m = params_.m();
    std::vector<FormulaPtr> groups;

    {  // P group
        std::vector<FormulaPtr> bullets;
        bullets.push_back(exactly_one_adjacent(x, Role::Q()));
        for (int l = 1; l <= m; ++l) bullets.push_back(exactly_one_adjacent(x, Role::R(l)));
        bullets.push_back(unique_nonadjacent_pair(x, Role::P(), Role::S()));
        for (int l = 1; l <= m; ++l) {
            bullets.push_back(mk_forall(
                y, mk_forall(z, mk_implies(mk_and(mk_and(mk_atom("E", x, y), mk_atom("E", x, z)),
                                                  mk_and(role_marker(Role::Q(), y),
                                                         role_marker(Role::R(l), z))),
                                           mk_not(mk_atom("E", y, z))))));
        }
        for (int l = 1; l <= m; ++l)
            for (int l2 = l; l2 <= m; ++l2) {
                bullets.push_back(mk_forall(
                    y, mk_forall(
                           z, mk_implies(mk_and(mk_and(mk_atom("E", x, y), mk_atom("E", x, z)),
                                                mk_and(role_marker(Role::R(l), y),
                                                       role_marker(Role::R(l2), z))),
                                         mk_not(mk_atom("E", y, z))))));
            }
        groups.push_back(mk_forall(x, mk_implies(role_marker(Role::P(), x), mk_and_all(bullets))));
    }

    {  // Q group
        std::vector<FormulaPtr> bullets;
        bullets.push_back(exactly_one_adjacent(x, Role::P()));
        bullets.push_back(exactly_one_adjacent(x, Role::S()));
        for (int l = 1; l <= m; ++l)
            bullets.push_back(unique_nonadjacent_pair(x, Role::Q(), Role::R(l)));
        groups.push_back(mk_forall(x, mk_implies(role_marker(Role::Q(), x), mk_and_all(bullets))));
    }

    {  // S group
        std::vector<FormulaPtr> bullets;
        bullets.push_back(exactly_one_adjacent(x, Role::Q()));
        bullets.push_back(unique_nonadjacent_pair(x, Role::S(), Role::P()));
        for (int l = 1; l <= m; ++l) {
            bullets.push_back(mk_forall(
                y, mk_implies(mk_and(role_marker(Role::Q(), y), mk_atom("E", x, y)),
                              mk_forall(z, mk_implies(role_pair(Role::Q(), Role::R(l), y, z),
                                                      mk_not(mk_atom("E", x, z)))))));
        }
        groups.push_back(mk_forall(x, mk_implies(role_marker(Role::S(), x), mk_and_all(bullets))));
    }

    for (int l = 1; l <= m; ++l) {  // R_l groups
        std::vector<FormulaPtr> bullets;
        bullets.push_back(exactly_one_adjacent(x, Role::P()));
        bullets.push_back(unique_nonadjacent_pair(x, Role::R(l), Role::Q()));
        bullets.push_back(mk_forall(
            y, mk_implies(mk_and(role_marker(Role::P(), y), mk_atom("E", x, y)),
                          mk_forall(z, mk_implies(role_pair(Role::P(), Role::S(), y, z),
                                                  mk_not(mk_atom("E", x, z)))))));
        groups.push_back(
            mk_forall(x, mk_implies(role_marker(Role::R(l), x), mk_and_all(bullets))));
    }

    FormulaPtr f = mk_and_all(groups);
    return cache_[key] = f;
}

FormulaPtr ReductionFormulas::same_block(const std::string& x, const std::string& y) {
    auto key = "sameblock:" + x + ":" + y;
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::string z = spare(x, y);
    auto roles = params_.all_roles();
    std::vector<FormulaPtr> cases;
    auto guarded = [&](const Role& a, const Role& b, const FormulaPtr& pattern) {
        return mk_and(mk_and(role_marker(a, x), role_marker(b, y)), pattern);
    };
    for (const auto& a : roles) {
        for (const auto& b : roles) {
            if (a == b) {
                cases.push_back(guarded(a, b, mk_eq(x, y)));
                continue;
            }
            bool edge_in_block =
                (a == Role::P() && b == Role::Q()) || (a == Role::Q() && b == Role::P()) ||
                (a == Role::Q() && b == Role::S()) || (a == Role::S() && b == Role::Q()) ||
                (a == Role::P() && b.tag == Role::Tag::Rel) ||
                (a.tag == Role::Tag::Rel && b == Role::P());
            if (edge_in_block) {
                cases.push_back(guarded(a, b, mk_atom("E", x, y)));
                continue;
            }
            bool ps = (a == Role::P() && b == Role::S()) || (a == Role::S() && b == Role::P());
            bool qr = (a == Role::Q() && b.tag == Role::Tag::Rel) ||
                      (a.tag == Role::Tag::Rel && b == Role::Q());
            bool rr = a.tag == Role::Tag::Rel && b.tag == Role::Tag::Rel;
            if (ps || qr || rr) {
                cases.push_back(role_pair(a, b, x, y));
                continue;
            }
            // S and R_l: linked through the block's Q and P in turn
            if (a == Role::S() && b.tag == Role::Tag::Rel) {
                FormulaPtr chain = mk_exists(
                    z, mk_and(mk_and(role_marker(Role::Q(), z), mk_atom("E", x, z)),
                              role_pair(Role::Q(), b, z, y)));
                cases.push_back(guarded(a, b, chain));
                continue;
            }
            if (a.tag == Role::Tag::Rel && b == Role::S()) {
                FormulaPtr chain = mk_exists(
                    z, mk_and(mk_and(role_marker(Role::Q(), z), mk_atom("E", y, z)),
                              role_pair(Role::Q(), a, z, x)));
                cases.push_back(guarded(a, b, chain));
                continue;
            }
            throw Error("same_block: unhandled role pair " + a.name() + "," + b.name());
        }
    }
    FormulaPtr f = mk_or_all(cases);
    return cache_[key] = f;
}

FormulaPtr ReductionFormulas::cross_edge_axiom() {
    auto key = std::string("ax:cross");
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const auto& [x, y, z] = params_.work_vars();
    (void)z;
    auto roles = params_.all_roles();
    auto is_role = [&](const std::string& v) {
        std::vector<FormulaPtr> any;
        for (const auto& r : roles) any.push_back(role_marker(r, v));
        return mk_or_all(any);
    };
    std::vector<FormulaPtr> allowed;
    for (int l = 1; l <= params_.m(); ++l) {
        allowed.push_back(mk_and(role_marker(Role::S(), x), role_marker(Role::R(l), y)));
        allowed.push_back(mk_and(role_marker(Role::R(l), x), role_marker(Role::S(), y)));
    }
    FormulaPtr premise = mk_and(mk_and(mk_atom("E", x, y), mk_and(is_role(x), is_role(y))),
                                mk_not(same_block(x, y)));
    FormulaPtr f = mk_forall(x, mk_forall(y, mk_implies(premise, mk_or_all(allowed))));
    return cache_[key] = f;
}

FormulaPtr ReductionFormulas::encoding_axioms() {
    auto key = std::string("ax:all");
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const auto& [x, y, z] = params_.work_vars();
    (void)y;
    (void)z;
    std::vector<FormulaPtr> parts = structural_axioms();
    parts.push_back(block_shape_axiom());
    parts.push_back(mk_forall(x, mk_not(mk_atom("E", x, x))));
    std::vector<FormulaPtr> kinds = {degree_one(x), line_vertex(x)};
    for (const auto& r : params_.all_roles()) kinds.push_back(role_marker(r, x));
    parts.push_back(mk_forall(x, mk_or_all(kinds)));
    FormulaPtr f = mk_and_all(parts);
    return cache_[key] = f;
}

bool has_loop_atom(const FormulaPtr& phi) {
    const Formula* f = phi.get();
    switch (f->kind) {
        case Kind::Atom:
            return f->var1 == f->var2;
        case Kind::Constant:
        case Kind::Equality:
            return false;
        case Kind::Not:
        case Kind::Exists:
        case Kind::Forall:
            return has_loop_atom(f->left);
        default:
            return has_loop_atom(f->left) || has_loop_atom(f->right);
    }
}

namespace {

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
    if (!taken.count(base)) return base;
    for (int i = 2;; ++i) {
        std::string candidate = base + "_" + std::to_string(i);
        if (!taken.count(candidate)) return candidate;
    }
}

FormulaPtr rewrite_loop_atoms(const FormulaPtr& phi,
                              const std::map<std::string, std::string>& marker_of,
                              const std::vector<std::string>& pool) {
    const Formula* f = phi.get();
    switch (f->kind) {
        case Kind::Constant:
        case Kind::Equality:
            return phi;
        case Kind::Atom: {
            const std::string& marker = marker_of.at(f->rel);
            if (f->var1 == f->var2) {
                // the x = x guard is trivially true and dropped
                std::string w;
                for (const auto& v : pool)
                    if (v != f->var1) { w = v; break; }
                return mk_or(phi, mk_exists(w, mk_atom(marker, f->var1, w)));
            }
            std::string w;
            for (const auto& v : pool)
                if (v != f->var1 && v != f->var2) { w = v; break; }
            return mk_or(phi, mk_and(mk_eq(f->var1, f->var2),
                                     mk_exists(w, mk_atom(marker, f->var1, w))));
        }
        case Kind::Not:
            return mk_not(rewrite_loop_atoms(f->left, marker_of, pool));
        case Kind::Exists:
            return mk_exists(f->var1, rewrite_loop_atoms(f->left, marker_of, pool));
        case Kind::Forall:
            return mk_forall(f->var1, rewrite_loop_atoms(f->left, marker_of, pool));
        case Kind::And:
            return mk_and(rewrite_loop_atoms(f->left, marker_of, pool),
                          rewrite_loop_atoms(f->right, marker_of, pool));
        case Kind::Or:
            return mk_or(rewrite_loop_atoms(f->left, marker_of, pool),
                         rewrite_loop_atoms(f->right, marker_of, pool));
        case Kind::Implies:
            return mk_implies(rewrite_loop_atoms(f->left, marker_of, pool),
                              rewrite_loop_atoms(f->right, marker_of, pool));
        case Kind::Iff:
            return mk_iff(rewrite_loop_atoms(f->left, marker_of, pool),
                          rewrite_loop_atoms(f->right, marker_of, pool));
    }
    throw Error("unreachable");
}

}  // namespace

std::pair<FormulaPtr, Vocabulary> eliminate_self_loops(const FormulaPtr& phi,
                                                       const Vocabulary& vocab) {
    auto pool = variables_used(phi);
    if (pool.size() < 3) throw Error("at least three variables required");

    std::set<std::string> taken(vocab.symbols().begin(), vocab.symbols().end());
    std::map<std::string, std::string> marker_of;
    std::vector<std::string> symbols = vocab.symbols();
    for (const auto& r : vocab.symbols()) {
        std::string marker = fresh_name(r + "_loop", taken);
        taken.insert(marker);
        marker_of[r] = marker;
        symbols.push_back(marker);
    }

    FormulaPtr rewritten = rewrite_loop_atoms(phi, marker_of, pool);
    const std::string& x = pool[0];
    const std::string& y = pool[1];
    std::vector<FormulaPtr> parts = {rewritten};
    for (const auto& r : vocab.symbols())
        parts.push_back(mk_forall(x, mk_not(mk_atom(r, x, x))));
    for (const auto& r : vocab.symbols())
        parts.push_back(mk_forall(
            x, mk_forall(y, mk_implies(mk_atom(marker_of[r], x, y), mk_not(mk_eq(x, y))))));
    return {mk_and_all(parts), Vocabulary(symbols)};
}

Vocabulary pad_relations(const Vocabulary& vocab) {
    std::vector<std::string> symbols = vocab.symbols();
    std::set<std::string> taken(symbols.begin(), symbols.end());
    int next = 1;
    while (symbols.size() < 3) {
        std::string pad = fresh_name("Pad" + std::to_string(next++), taken);
        taken.insert(pad);
        symbols.push_back(pad);
    }
    return Vocabulary(symbols);
}

FormulaPtr translate_formula(const FormulaPtr& phi, ReductionFormulas& formulas,
                             const std::vector<std::string>& pool) {
    const Formula* f = phi.get();
    const auto& params = formulas.params();
    auto role_of_rel = [&](const std::string& rel) {
        for (int l = 1; l <= params.m(); ++l)
            if (params.relation_names()[l - 1] == rel) return Role::R(l);
        throw Error("translate: relation '" + rel + "' not in reduction vocabulary");
    };
    switch (f->kind) {
        case Kind::Constant:
            return phi;
        case Kind::Equality: {
            if (f->var1 == f->var2) return formulas.role_marker(Role::P(), f->var1);
            return mk_and(mk_and(formulas.role_marker(Role::P(), f->var1),
                                 formulas.role_marker(Role::P(), f->var2)),
                          phi);
        }
        case Kind::Atom: {
            const std::string& x = f->var1;
            const std::string& y = f->var2;
            if (x == y) return mk_false();  // irreflexivity is part of phi_pre
            Role rl = role_of_rel(f->rel);
            std::string z;
            for (const auto& v : pool)
                if (v != x && v != y) { z = v; break; }
            if (z.empty()) throw Error("translate: no spare variable for atom");
            // walk the block edges: y's Q, that Q's S, then the R_l port on
            // x's block; the final edge to y's S carries the tuple
            FormulaPtr inner_r = mk_exists(
                z, mk_and(mk_and(formulas.role_marker(rl, z), mk_atom("E", x, z)),
                          mk_atom("E", y, z)));
            FormulaPtr inner_s = mk_exists(
                y, mk_and(mk_and(formulas.role_marker(Role::S(), y), mk_atom("E", z, y)),
                          inner_r));
            FormulaPtr inner_q = mk_exists(
                z, mk_and(mk_and(formulas.role_marker(Role::Q(), z), mk_atom("E", y, z)),
                          inner_s));
            return mk_and(mk_and(formulas.role_marker(Role::P(), x),
                                 formulas.role_marker(Role::P(), y)),
                          inner_q);
        }
        case Kind::Not:
            return mk_not(translate_formula(f->left, formulas, pool));
        case Kind::And:
            return mk_and(translate_formula(f->left, formulas, pool),
                          translate_formula(f->right, formulas, pool));
        case Kind::Or:
            return mk_or(translate_formula(f->left, formulas, pool),
                         translate_formula(f->right, formulas, pool));
        case Kind::Implies:
            return mk_implies(translate_formula(f->left, formulas, pool),
                              translate_formula(f->right, formulas, pool));
        case Kind::Iff:
            return mk_iff(translate_formula(f->left, formulas, pool),
                          translate_formula(f->right, formulas, pool));
        case Kind::Exists:
            return mk_exists(f->var1,
                             mk_and(formulas.role_marker(Role::P(), f->var1),
                                    translate_formula(f->left, formulas, pool)));
        case Kind::Forall:
            return mk_forall(f->var1,
                             mk_implies(formulas.role_marker(Role::P(), f->var1),
                                        translate_formula(f->left, formulas, pool)));
    }
    throw Error("unreachable");
}

ReductionOutput reduce_sentence(const FormulaPtr& phi, const Vocabulary& vocab,
                                const ReduceOptions& options) {
    ValidationReport report = validate_input(phi, vocab);
    if (!report.is_sentence) throw Error(report.issues.front());
    if (report.variable_count < 3) throw Error("at least three variables required");
    if (!report.eligible) throw Error(report.issues.front());
    if (vocab.contains("E"))
        throw Error("input vocabulary must not use the reserved symbol E");

    auto pool = variables_used(phi);
    using LH = ReduceOptions::LoopHandling;
    LH mode = options.loops;
    if (mode == LH::Auto) mode = has_loop_atom(phi) ? LH::Eliminate : LH::AssumeLoopFree;

    FormulaPtr core;
    Vocabulary vocab1;
    if (mode == LH::Eliminate) {
        auto [phi1, v1] = eliminate_self_loops(phi, vocab);
        core = phi1;
        vocab1 = v1;
    } else {
        std::vector<FormulaPtr> parts = {phi};
        for (const auto& r : vocab.symbols())
            parts.push_back(mk_forall(pool[0], mk_not(mk_atom(r, pool[0], pool[0]))));
        core = mk_and_all(parts);
        vocab1 = vocab;
    }

    Vocabulary vocab2 = pad_relations(vocab1);
    std::vector<FormulaPtr> parts = {core};
    for (size_t i = vocab1.size(); i < vocab2.size(); ++i)
        parts.push_back(mk_forall(
            pool[0], mk_forall(pool[1],
                               mk_not(mk_atom(vocab2.symbols()[i], pool[0], pool[1])))));
    FormulaPtr phi_pre = mk_and_all(parts);

    ReductionParams params(static_cast<int>(vocab2.size()), vocab2.symbols(),
                           {pool[0], pool[1], pool[2]});
    ReductionFormulas formulas(params);
    FormulaPtr translated = translate_formula(phi_pre, formulas, pool);
    FormulaPtr phi_prime =
        mk_and(mk_and(formulas.encoding_axioms(), formulas.cross_edge_axiom()), translated);

    return ReductionOutput{phi_prime, params, phi_pre, vocab2, mode};
}

}  // namespace spectra
