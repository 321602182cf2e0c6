#include "spectra/structure.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

namespace spectra {

Structure::Structure(int size, const Vocabulary& vocab) : size_(size) {
    if (size < 1) throw Error("structure size must be >= 1");
    for (const auto& s : vocab.symbols()) relations_[s];
}

void Structure::add_pair(const std::string& rel, int a, int b) {
    if (a < 1 || a > size_ || b < 1 || b > size_)
        throw Error("pair (" + std::to_string(a) + "," + std::to_string(b) +
                    ") outside domain 1.." + std::to_string(size_));
    auto it = relations_.find(rel);
    if (it == relations_.end()) throw Error("unknown relation '" + rel + "'");
    it->second.emplace(a, b);
}

bool Structure::has_pair(const std::string& rel, int a, int b) const {
    auto it = relations_.find(rel);
    return it != relations_.end() && it->second.count({a, b}) > 0;
}

bool Structure::has_relation(const std::string& rel) const {
    return relations_.count(rel) > 0;
}

std::vector<std::string> Structure::relation_names() const {
    std::vector<std::string> names;
    names.reserve(relations_.size());
    for (const auto& [name, _] : relations_) names.push_back(name);
    return names;
}

bool Structure::has_self_loop() const {
    for (const auto& [_, pairs] : relations_)
        for (const auto& [a, b] : pairs)
            if (a == b) return true;
    return false;
}

size_t Structure::total_pairs() const {
    size_t total = 0;
    for (const auto& [_, pairs] : relations_) total += pairs.size();
    return total;
}

Graph::Graph(int size) : size_(size), adjacency_(static_cast<size_t>(size) + 1) {
    if (size < 1) throw Error("graph size must be >= 1");
}

void Graph::check_vertex(int v) const {
    if (v < 1 || v > size_)
        throw Error("vertex " + std::to_string(v) + " outside 1.." + std::to_string(size_));
}

void Graph::add_edge(int a, int b) {
    check_vertex(a);
    check_vertex(b);
    if (a == b) throw Error("self-loop rejected at vertex " + std::to_string(a));
    if (has_edge(a, b)) return;
    adjacency_[a].insert(std::lower_bound(adjacency_[a].begin(), adjacency_[a].end(), b), b);
    adjacency_[b].insert(std::lower_bound(adjacency_[b].begin(), adjacency_[b].end(), a), a);
    ++edge_count_;
}

void Graph::remove_edge(int a, int b) {
    check_vertex(a);
    check_vertex(b);
    if (!has_edge(a, b)) return;
    adjacency_[a].erase(std::lower_bound(adjacency_[a].begin(), adjacency_[a].end(), b));
    adjacency_[b].erase(std::lower_bound(adjacency_[b].begin(), adjacency_[b].end(), a));
    --edge_count_;
}

void Graph::toggle_edge(int a, int b) {
    if (has_edge(a, b)) remove_edge(a, b);
    else add_edge(a, b);
}

bool Graph::has_edge(int a, int b) const {
    if (a < 1 || a > size_ || b < 1 || b > size_ || a == b) return false;
    const auto& adj = adjacency_[a];
    return std::binary_search(adj.begin(), adj.end(), b);
}

int Graph::degree(int v) const {
    check_vertex(v);
    return static_cast<int>(adjacency_[v].size());
}

const std::vector<int>& Graph::neighbors(int v) const {
    check_vertex(v);
    return adjacency_[v];
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count_);
    for (int a = 1; a <= size_; ++a)
        for (int b : adjacency_[a])
            if (a < b) out.emplace_back(a, b);
    return out;
}

std::optional<Bipartition> is_bipartite(const Graph& g) {
    std::vector<int> color(static_cast<size_t>(g.size()) + 1, -1);
    std::deque<int> queue;
    for (int start = 1; start <= g.size(); ++start) {
        if (color[start] != -1) continue;
        color[start] = 0;
        queue.push_back(start);
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int w : g.neighbors(v)) {
                if (color[w] == -1) {
                    color[w] = 1 - color[v];
                    queue.push_back(w);
                } else if (color[w] == color[v]) {
                    return std::nullopt;
                }
            }
        }
    }
    // certify before returning
    for (const auto& [a, b] : g.edges())
        if (color[a] == color[b]) return std::nullopt;
    Bipartition part;
    part.color = color;
    for (int v = 1; v <= g.size(); ++v)
        (color[v] == 0 ? part.left : part.right).push_back(v);
    return part;
}

Structure graph_view(const Graph& g) {
    Structure s(g.size(), Vocabulary({"E"}));
    for (const auto& [a, b] : g.edges()) {
        s.add_pair("E", a, b);
        s.add_pair("E", b, a);
    }
    return s;
}

std::string render_structure(const Structure& s) {
    std::ostringstream out;
    out << "structure " << s.size() << "\n";
    for (const auto& [name, pairs] : s.relations()) {
        out << name << ":";
        for (const auto& [a, b] : pairs) out << " (" << a << "," << b << ")";
        out << "\n";
    }
    return out.str();
}

namespace {

std::vector<std::string> content_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        size_t end = line.find_last_not_of(" \t\r");
        lines.push_back(line.substr(start, end - start + 1));
    }
    return lines;
}

}  // namespace

Structure parse_structure(const std::string& text) {
    auto lines = content_lines(text);
    if (lines.empty()) throw Error("structure file: empty");
    std::istringstream header(lines[0]);
    std::string keyword;
    int n = 0;
    header >> keyword >> n;
    if (keyword != "structure" || n < 1)
        throw Error("structure file: expected 'structure <n>' header");
    std::vector<std::string> names;
    std::vector<std::vector<std::pair<int, int>>> pairs;
    for (size_t i = 1; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        size_t colon = line.find(':');
        if (colon == std::string::npos)
            throw Error("structure file: expected '<name>: (a,b) ...' in line '" + line + "'");
        std::string name = line.substr(0, colon);
        size_t end = name.find_last_not_of(" \t");
        name = name.substr(0, end + 1);
        names.push_back(name);
        pairs.emplace_back();
        std::string rest = line.substr(colon + 1);
        for (char& c : rest)
            if (c == '(' || c == ')' || c == ',') c = ' ';
        std::istringstream ps(rest);
        int a, b;
        while (ps >> a >> b) pairs.back().emplace_back(a, b);
        if (!ps.eof()) {
            ps.clear();
            std::string junk;
            ps >> junk;
            if (!junk.empty()) throw Error("structure file: bad pair list in line '" + line + "'");
        }
    }
    Structure s(n, Vocabulary(names));
    for (size_t i = 0; i < names.size(); ++i)
        for (const auto& [a, b] : pairs[i]) s.add_pair(names[i], a, b);
    return s;
}

Structure load_structure_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_structure(buf.str());
}

std::string render_graph(const Graph& g) {
    std::ostringstream out;
    out << "graph " << g.size() << "\n";
    out << "edges:";
    for (const auto& [a, b] : g.edges()) out << " " << a << "-" << b;
    out << "\n";
    return out.str();
}

Graph parse_graph(const std::string& text) {
    auto lines = content_lines(text);
    if (lines.empty()) throw Error("graph file: empty");
    std::istringstream header(lines[0]);
    std::string keyword;
    int n = 0;
    header >> keyword >> n;
    if (keyword != "graph" || n < 1) throw Error("graph file: expected 'graph <n>' header");
    Graph g(n);
    for (size_t i = 1; i < lines.size(); ++i) {
        std::string line = lines[i];
        if (line.rfind("edges:", 0) == 0) line = line.substr(6);
        for (char& c : line)
            if (c == '-') c = ' ';
        std::istringstream es(line);
        int a, b;
        while (es >> a >> b) g.add_edge(a, b);
        if (!es.eof()) throw Error("graph file: bad edge list in line '" + lines[i] + "'");
    }
    return g;
}

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

void save_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
}

}  // namespace spectra
