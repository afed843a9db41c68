#include "bgc/multigraph.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace bgc {

namespace {

void check_vertex(const Multigraph& graph, int vertex) {
    if (vertex < 0 || vertex >= graph.num_vertices()) {
        throw GraphError("vertex index " + std::to_string(vertex) + " out of range");
    }
}

// Union-find over vertices, used for connectivity with an optional skipped edge.
int find_root(std::vector<int>& parent, int x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

int count_components(const Multigraph& graph, int skip_edge) {
    std::vector<int> parent(graph.num_vertices());
    std::iota(parent.begin(), parent.end(), 0);
    int components = graph.num_vertices();
    for (int i = 0; i < graph.num_edges(); ++i) {
        if (i == skip_edge) continue;
        const Edge& e = graph.edges()[i];
        int ra = find_root(parent, e.a);
        int rb = find_root(parent, e.b);
        if (ra != rb) {
            parent[ra] = rb;
            --components;
        }
    }
    return components;
}

}  // namespace

Multigraph::Multigraph(int num_vertices, std::vector<Edge> edges, std::vector<int> legs)
    : num_vertices_(num_vertices), edges_(std::move(edges)), legs_(std::move(legs)) {
    if (num_vertices_ < 0 || num_vertices_ > kMaxVertices) {
        throw GraphError("vertex count " + std::to_string(num_vertices_) + " unsupported");
    }
    for (const Edge& e : edges_) {
        if (e.a >= num_vertices_ || e.b >= num_vertices_) {
            throw GraphError("edge endpoint out of range");
        }
    }
    for (int leg : legs_) {
        if (leg < 0 || leg >= num_vertices_) throw GraphError("leg attachment out of range");
    }
}

int Multigraph::num_normal_edges() const {
    return static_cast<int>(std::count_if(edges_.begin(), edges_.end(),
                                          [](const Edge& e) { return !e.is_fat(); }));
}

int Multigraph::num_fat_edges() const { return num_edges() - num_normal_edges(); }

int Multigraph::num_self_edges() const {
    return static_cast<int>(std::count_if(edges_.begin(), edges_.end(),
                                          [](const Edge& e) { return e.is_self(); }));
}

int valence(const Multigraph& graph, int vertex) {
    check_vertex(graph, vertex);
    int result = 0;
    for (const Edge& e : graph.edges()) {
        const int weight = e.is_fat() ? 2 : 1;
        if (e.a == vertex) result += weight;
        if (e.b == vertex) result += weight;
    }
    for (int leg : graph.legs()) {
        if (leg == vertex) ++result;
    }
    return result;
}

GenusData genus_data(const Multigraph& graph) {
    GenusData data;
    data.loops = graph.num_edges() - graph.num_vertices() + 1;
    data.fat_count = graph.num_fat_edges();
    data.genus = data.loops + data.fat_count;
    return data;
}

bool is_connected(const Multigraph& graph) {
    return graph.num_vertices() > 0 && count_components(graph, -1) == 1;
}

bool is_admissible(const Multigraph& graph, int min_valence) {
    if (!is_connected(graph)) return false;
    std::vector<int> val(graph.num_vertices(), 0);
    for (const Edge& e : graph.edges()) {
        if (e.is_fat() && e.is_self()) return false;
        const int weight = e.is_fat() ? 2 : 1;
        val[e.a] += weight;
        val[e.b] += weight;
    }
    for (int leg : graph.legs()) ++val[leg];
    return std::all_of(val.begin(), val.end(), [&](int x) { return x >= min_valence; });
}

std::vector<int> find_bridges(const Multigraph& graph) {
    if (!is_connected(graph)) throw GraphError("find_bridges: graph is disconnected");
    const int n = graph.num_vertices();
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge id)
    for (int i = 0; i < graph.num_edges(); ++i) {
        const Edge& e = graph.edges()[i];
        if (e.is_self()) continue;
        adj[e.a].emplace_back(e.b, i);
        adj[e.b].emplace_back(e.a, i);
    }
    std::vector<int> order(n, -1);
    std::vector<int> low(n, 0);
    std::vector<int> bridges;
    int counter = 0;
    // Iterative DFS; the parent edge id (not the parent vertex) is skipped so
    // that parallel edges correctly keep each other from being bridges.
    struct Frame {
        int vertex;
        int parent_edge;
        std::size_t next;
    };
    std::vector<Frame> stack;
    stack.push_back({0, -1, 0});
    order[0] = low[0] = counter++;
    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.next < adj[top.vertex].size()) {
            auto [w, id] = adj[top.vertex][top.next++];
            if (id == top.parent_edge) continue;
            if (order[w] < 0) {
                order[w] = low[w] = counter++;
                stack.push_back({w, id, 0});
            } else {
                low[top.vertex] = std::min(low[top.vertex], order[w]);
            }
        } else {
            const Frame done = top;
            stack.pop_back();
            if (!stack.empty()) {
                int parent = stack.back().vertex;
                low[parent] = std::min(low[parent], low[done.vertex]);
                if (low[done.vertex] > order[parent]) bridges.push_back(done.parent_edge);
            }
        }
    }
    std::sort(bridges.begin(), bridges.end());
    return bridges;
}

bool is_bridgeless(const Multigraph& graph) { return find_bridges(graph).empty(); }

bool is_simple(const Multigraph& graph) {
    std::vector<std::pair<int, int>> pairs;
    for (const Edge& e : graph.edges()) {
        if (e.is_self()) return false;
        if (!e.is_fat()) pairs.emplace_back(e.lo(), e.hi());
    }
    std::sort(pairs.begin(), pairs.end());
    return std::adjacent_find(pairs.begin(), pairs.end()) == pairs.end();
}

BlockTree bridgeless_components(const Multigraph& graph) {
    const std::vector<int> bridges = find_bridges(graph);
    std::vector<bool> is_bridge(graph.num_edges(), false);
    for (int b : bridges) is_bridge[b] = true;

    std::vector<int> parent(graph.num_vertices());
    std::iota(parent.begin(), parent.end(), 0);
    for (int i = 0; i < graph.num_edges(); ++i) {
        if (is_bridge[i]) continue;
        const Edge& e = graph.edges()[i];
        parent[find_root(parent, e.a)] = find_root(parent, e.b);
    }

    // Components are numbered by their lowest vertex.
    std::vector<int> node_of(graph.num_vertices(), -1);
    BlockTree tree;
    for (int x = 0; x < graph.num_vertices(); ++x) {
        int root = find_root(parent, x);
        if (node_of[root] < 0) {
            node_of[root] = static_cast<int>(tree.nodes.size());
            tree.nodes.emplace_back();
        }
        node_of[x] = node_of[root];
        tree.nodes[node_of[x]].vertices.push_back(x);
    }
    for (BlockComponent& node : tree.nodes) {
        std::vector<int> local(graph.num_vertices(), -1);
        for (std::size_t i = 0; i < node.vertices.size(); ++i) {
            local[node.vertices[i]] = static_cast<int>(i);
        }
        std::vector<Edge> edges;
        for (int i = 0; i < graph.num_edges(); ++i) {
            const Edge& e = graph.edges()[i];
            if (is_bridge[i] || local[e.a] < 0) continue;
            node.edges.push_back(i);
            edges.emplace_back(local[e.a], local[e.b], e.kind);
        }
        std::vector<int> legs;
        for (int leg : graph.legs()) {
            if (local[leg] >= 0) legs.push_back(local[leg]);
        }
        node.subgraph = Multigraph(static_cast<int>(node.vertices.size()), std::move(edges),
                                   std::move(legs));
    }
    for (int b : bridges) {
        const Edge& e = graph.edges()[b];
        tree.tree_edges.push_back({node_of[e.a], node_of[e.b], b});
    }
    return tree;
}

Multigraph contract_edge(const Multigraph& graph, int edge) {
    if (edge < 0 || edge >= graph.num_edges()) throw GraphError("contract_edge: bad edge index");
    const Edge& target = graph.edges()[edge];
    if (target.is_fat()) throw GraphError("contract_edge: cannot contract a fat edge");
    if (target.is_self()) throw GraphError("contract_edge: cannot contract a self-edge");
    const int keep = target.lo();
    const int drop = target.hi();
    auto rename = [&](int x) {
        if (x == drop) return keep;
        return x > drop ? x - 1 : x;
    };
    std::vector<Edge> edges;
    edges.reserve(graph.edges().size() - 1);
    for (int i = 0; i < graph.num_edges(); ++i) {
        if (i == edge) continue;
        const Edge& e = graph.edges()[i];
        edges.emplace_back(rename(e.a), rename(e.b), e.kind);
    }
    std::vector<int> legs;
    legs.reserve(graph.legs().size());
    for (int leg : graph.legs()) legs.push_back(rename(leg));
    return Multigraph(graph.num_vertices() - 1, std::move(edges), std::move(legs));
}

Multigraph expand_fat_edge(const Multigraph& graph, int edge) {
    if (edge < 0 || edge >= graph.num_edges()) throw GraphError("expand_fat_edge: bad edge index");
    const Edge& target = graph.edges()[edge];
    if (!target.is_fat()) throw GraphError("expand_fat_edge: edge is not fat");
    std::vector<Edge> edges;
    edges.reserve(graph.edges().size() + 1);
    for (int i = 0; i < graph.num_edges(); ++i) {
        const Edge& e = graph.edges()[i];
        if (i == edge) {
            edges.emplace_back(e.a, e.b, EdgeKind::Normal);
            edges.emplace_back(e.a, e.b, EdgeKind::Normal);
        } else {
            edges.push_back(e);
        }
    }
    return Multigraph(graph.num_vertices(), std::move(edges), graph.legs());
}

Multigraph relabel(const Multigraph& graph, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != graph.num_vertices()) {
        throw GraphError("relabel: permutation size mismatch");
    }
    std::vector<Edge> edges;
    edges.reserve(graph.edges().size());
    for (const Edge& e : graph.edges()) edges.emplace_back(perm[e.a], perm[e.b], e.kind);
    std::vector<int> legs;
    legs.reserve(graph.legs().size());
    for (int leg : graph.legs()) legs.push_back(perm[leg]);
    return Multigraph(graph.num_vertices(), std::move(edges), std::move(legs));
}

Multigraph normalized(const Multigraph& graph) {
    std::vector<Edge> edges;
    edges.reserve(graph.edges().size());
    for (const Edge& e : graph.edges()) edges.emplace_back(e.lo(), e.hi(), e.kind);
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        return std::tie(x.kind, x.a, x.b) < std::tie(y.kind, y.a, y.b);
    });
    return Multigraph(graph.num_vertices(), std::move(edges), graph.legs());
}

namespace {

struct LabeledEnumerator {
    int n = 0;
    int min_valence = 3;
    int normal_budget = 0;
    int fat_budget = 0;
    std::vector<int> residual;
    std::vector<int> legs;
    std::vector<Edge> edges;
    const std::function<void(const Multigraph&)>* sink = nullptr;

    void emit() {
        std::vector<Edge> sorted = edges;
        std::sort(sorted.begin(), sorted.end(), [](const Edge& x, const Edge& y) {
            return std::tie(x.kind, x.a, x.b) < std::tie(y.kind, y.a, y.b);
        });
        Multigraph g(n, std::move(sorted), legs);
        if (is_connected(g)) (*sink)(g);
    }

    // Fill the residual degree of vertex i using edges (i, j) with j >= i.
    void fill_vertex(int i) {
        if (i == n) {
            if (normal_budget == 0 && fat_budget == 0) emit();
            return;
        }
        if (residual[i] == 0) {
            fill_vertex(i + 1);
            return;
        }
        // Self-edges first (normal only), then partners j > i.
        const int max_self = std::min(residual[i] / 2, normal_budget);
        for (int s = max_self; s >= 0; --s) {
            residual[i] -= 2 * s;
            normal_budget -= s;
            for (int k = 0; k < s; ++k) edges.emplace_back(i, i, EdgeKind::Normal);
            fill_partner(i, i + 1);
            for (int k = 0; k < s; ++k) edges.pop_back();
            normal_budget += s;
            residual[i] += 2 * s;
        }
    }

    void fill_partner(int i, int j) {
        if (residual[i] == 0) {
            fill_vertex(i + 1);
            return;
        }
        if (j >= n) return;
        // Fat edges (i, j): weight 2 on both ends.
        const int max_fat = std::min({residual[i] / 2, residual[j] / 2, fat_budget});
        for (int f = max_fat; f >= 0; --f) {
            residual[i] -= 2 * f;
            residual[j] -= 2 * f;
            fat_budget -= f;
            for (int k = 0; k < f; ++k) edges.emplace_back(i, j, EdgeKind::Fat);
            const int max_normal = std::min({residual[i], residual[j], normal_budget});
            for (int m = max_normal; m >= 0; --m) {
                residual[i] -= m;
                residual[j] -= m;
                normal_budget -= m;
                for (int k = 0; k < m; ++k) edges.emplace_back(i, j, EdgeKind::Normal);
                fill_partner(i, j + 1);
                for (int k = 0; k < m; ++k) edges.pop_back();
                normal_budget += m;
                residual[j] += m;
                residual[i] += m;
            }
            for (int k = 0; k < f; ++k) edges.pop_back();
            fat_budget += f;
            residual[j] += 2 * f;
            residual[i] += 2 * f;
        }
    }

    void assign_legs(int leg, const std::vector<int>& degrees, int r) {
        if (leg == r) {
            residual = degrees;
            for (int x : legs) {
                if (--residual[x] < 0) return;
            }
            fill_vertex(0);
            return;
        }
        for (int x = 0; x < n; ++x) {
            legs[leg] = x;
            assign_legs(leg + 1, degrees, r);
        }
    }

    void valence_sequences(int i, int remaining, std::vector<int>& degrees, int r) {
        if (i == n) {
            if (remaining == 0) assign_legs(0, degrees, r);
            return;
        }
        const int slots_left = n - i - 1;
        for (int d = min_valence; d <= remaining - slots_left * min_valence; ++d) {
            degrees[i] = d;
            valence_sequences(i + 1, remaining - d, degrees, r);
        }
    }
};

}  // namespace

void enumerate_labeled(const LabeledQuery& query,
                       const std::function<void(const Multigraph&)>& sink) {
    if (query.genus < 0 || query.legs < 0 || query.vertices < 1) return;
    const int max_fat = query.allow_fat ? query.genus : 0;
    for (int fat = 0; fat <= max_fat; ++fat) {
        const int loops = query.genus - fat;
        const int total_edges = query.vertices + loops - 1;
        const int normal = total_edges - fat;
        if (normal < 0) continue;
        LabeledEnumerator en;
        en.n = query.vertices;
        en.min_valence = query.min_valence;
        en.normal_budget = normal;
        en.fat_budget = fat;
        en.legs.assign(query.legs, 0);
        en.sink = &sink;
        std::vector<int> degrees(query.vertices, 0);
        en.valence_sequences(0, 2 * normal + query.legs + 4 * fat, degrees, query.legs);
    }
}

std::string encode(const Multigraph& graph, char flavor_char) {
    const Multigraph g = normalized(graph);
    std::string out;
    out.reserve(64 + 6 * g.edges().size());
    out += flavor_char;
    out += " g=" + std::to_string(genus_data(g).genus);
    out += " r=" + std::to_string(g.num_legs());
    out += " v=" + std::to_string(g.num_vertices());
    out += " legs=";
    for (std::size_t i = 0; i < g.legs().size(); ++i) {
        if (i) out += ',';
        out += std::to_string(g.legs()[i]);
    }
    out += " edges=";
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const Edge& e = g.edges()[i];
        if (i) out += ',';
        out += std::to_string(e.a);
        out += e.is_fat() ? '=' : '-';
        out += std::to_string(e.b);
    }
    return out;
}

ParseError::ParseError(const std::string& what, std::size_t position)
    : std::runtime_error("parse error at position " + std::to_string(position) + ": " + what),
      position_(position) {}

namespace {

class LineParser {
public:
    explicit LineParser(std::string_view text) : text_(text) {}

    void expect(std::string_view token) {
        if (text_.substr(pos_, token.size()) != token) {
            throw ParseError("expected '" + std::string(token) + "'", pos_);
        }
        pos_ += token.size();
    }

    int number() {
        int value = 0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || value < 0) throw ParseError("expected a number", pos_);
        pos_ += static_cast<std::size_t>(ptr - begin);
        return value;
    }

    [[nodiscard]] char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char take() {
        if (pos_ >= text_.size()) throw ParseError("unexpected end of line", pos_);
        return text_[pos_++];
    }
    [[nodiscard]] bool done() const { return pos_ >= text_.size(); }
    [[nodiscard]] std::size_t pos() const { return pos_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

ParsedGraph parse_graph(std::string_view line) {
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
    LineParser p(line);
    ParsedGraph parsed;
    parsed.flavor_char = p.take();
    if (parsed.flavor_char != 'E' && parsed.flavor_char != 'O') {
        throw ParseError("flavor must be 'E' or 'O'", 0);
    }
    p.expect(" g=");
    parsed.genus = p.number();
    p.expect(" r=");
    const int r = p.number();
    p.expect(" v=");
    const std::size_t v_pos = p.pos();
    const int v = p.number();
    if (v < 1 || v > kMaxVertices) throw ParseError("vertex count out of range", v_pos);
    p.expect(" legs=");
    std::vector<int> legs;
    while (p.peek() != ' ') {
        if (!legs.empty()) p.expect(",");
        const std::size_t at = p.pos();
        const int x = p.number();
        if (x >= v) throw ParseError("leg vertex out of range", at);
        legs.push_back(x);
    }
    if (static_cast<int>(legs.size()) != r) throw ParseError("leg count differs from r", p.pos());
    p.expect(" edges=");
    std::vector<Edge> edges;
    while (!p.done()) {
        if (!edges.empty()) p.expect(",");
        const std::size_t at = p.pos();
        const int a = p.number();
        const char sep = p.take();
        if (sep != '-' && sep != '=') throw ParseError("expected '-' or '='", p.pos() - 1);
        const int b = p.number();
        if (a >= v || b >= v) throw ParseError("edge endpoint out of range", at);
        edges.emplace_back(a, b, sep == '=' ? EdgeKind::Fat : EdgeKind::Normal);
    }
    parsed.graph = Multigraph(v, std::move(edges), std::move(legs));
    if (genus_data(parsed.graph).genus != parsed.genus) {
        throw ParseError("declared genus differs from the graph's genus", 2);
    }
    return parsed;
}

std::size_t MultigraphHash::operator()(const Multigraph& graph) const noexcept {
    std::size_t h = static_cast<std::size_t>(graph.num_vertices()) * 0x9E3779B97F4A7C15ULL;
    auto mix = [&h](std::size_t x) { h ^= x + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2); };
    for (const Edge& e : graph.edges()) {
        mix((static_cast<std::size_t>(e.a) << 16) | (static_cast<std::size_t>(e.b) << 8) |
            static_cast<std::size_t>(e.kind));
    }
    for (int leg : graph.legs()) mix(static_cast<std::size_t>(leg) + 1000);
    return h;
}

}  // namespace bgc
