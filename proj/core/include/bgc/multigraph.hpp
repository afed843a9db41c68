#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bgc {

inline constexpr int kMaxVertices = 32;

enum class EdgeKind : std::uint8_t { Normal = 0, Fat = 1 };

/// One edge record. Self-edges have a == b. The stored (a, b) order is the
/// edge direction used by the odd orientation.
struct Edge {
    std::uint8_t a = 0;
    std::uint8_t b = 0;
    EdgeKind kind = EdgeKind::Normal;

    Edge() = default;
    Edge(int from, int to, EdgeKind k = EdgeKind::Normal)
        : a(static_cast<std::uint8_t>(from)), b(static_cast<std::uint8_t>(to)), kind(k) {}

    [[nodiscard]] bool is_self() const { return a == b; }
    [[nodiscard]] bool is_fat() const { return kind == EdgeKind::Fat; }
    [[nodiscard]] int lo() const { return a < b ? a : b; }
    [[nodiscard]] int hi() const { return a < b ? b : a; }

    friend bool operator==(const Edge&, const Edge&) = default;
};

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Multigraph with numbered external legs and two edge kinds.
///
/// Vertices are 0..v-1. The edge list order is the edge labeling; leg k
/// (0-based position in legs()) is external leg number k+1 and sits at
/// vertex legs()[k]. Instances are immutable values.
class Multigraph {
public:
    Multigraph() = default;
    Multigraph(int num_vertices, std::vector<Edge> edges, std::vector<int> legs);

    [[nodiscard]] int num_vertices() const { return num_vertices_; }
    [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
    [[nodiscard]] const std::vector<int>& legs() const { return legs_; }
    [[nodiscard]] int num_edges() const { return static_cast<int>(edges_.size()); }
    [[nodiscard]] int num_legs() const { return static_cast<int>(legs_.size()); }
    [[nodiscard]] int num_normal_edges() const;
    [[nodiscard]] int num_fat_edges() const;
    [[nodiscard]] int num_self_edges() const;

    friend bool operator==(const Multigraph&, const Multigraph&) = default;

private:
    int num_vertices_ = 0;
    std::vector<Edge> edges_;
    std::vector<int> legs_;
};

struct GenusData {
    int loops = 0;
    int fat_count = 0;
    int genus = 0;
};

[[nodiscard]] int valence(const Multigraph& graph, int vertex);
[[nodiscard]] GenusData genus_data(const Multigraph& graph);
[[nodiscard]] bool is_connected(const Multigraph& graph);

/// Connected, every vertex of valence >= min_valence, no fat self-edges.
[[nodiscard]] bool is_admissible(const Multigraph& graph, int min_valence = 3);

/// Edge indices whose removal disconnects the graph, ascending.
[[nodiscard]] std::vector<int> find_bridges(const Multigraph& graph);
[[nodiscard]] bool is_bridgeless(const Multigraph& graph);

/// No self-edges and no parallel normal edges.
[[nodiscard]] bool is_simple(const Multigraph& graph);

struct BlockComponent {
    std::vector<int> vertices;  // original vertex ids, ascending
    std::vector<int> edges;     // original edge ids of non-bridge edges
    Multigraph subgraph;        // induced on `vertices`, legs kept, renumbered
};

struct BlockTreeEdge {
    int node_a = 0;
    int node_b = 0;
    int bridge = 0;  // original edge id
};

/// Tree of maximal bridgeless subgraphs glued along bridges.
struct BlockTree {
    std::vector<BlockComponent> nodes;
    std::vector<BlockTreeEdge> tree_edges;
};

[[nodiscard]] BlockTree bridgeless_components(const Multigraph& graph);

/// Merge the endpoints of a normal non-self edge into the lower index.
/// Higher indices shift down by one; every other edge keeps its position
/// and stored direction.
[[nodiscard]] Multigraph contract_edge(const Multigraph& graph, int edge);

/// Replace a fat edge by two parallel normal edges at the same position.
[[nodiscard]] Multigraph expand_fat_edge(const Multigraph& graph, int edge);

/// Apply a vertex relabeling: vertex i becomes perm[i]. Edge list order and
/// stored directions are kept.
[[nodiscard]] Multigraph relabel(const Multigraph& graph, const std::vector<int>& perm);

/// Edges with ascending endpoints, sorted by (kind, a, b).
[[nodiscard]] Multigraph normalized(const Multigraph& graph);

struct LabeledQuery {
    int genus = 0;
    int legs = 0;
    int vertices = 1;
    bool allow_fat = false;
    int min_valence = 3;
};

/// Brute-force stream of labeled multigraphs: every connected labeled graph
/// (as an edge multiset on labeled vertices) with the given parameters is
/// emitted exactly once, edges in normalized order.
void enumerate_labeled(const LabeledQuery& query,
                       const std::function<void(const Multigraph&)>& sink);

// Text encoding: "<F> g=<g> r=<r> v=<v> legs=<..> edges=<..>".
[[nodiscard]] std::string encode(const Multigraph& graph, char flavor_char);

struct ParsedGraph {
    char flavor_char = 'E';
    int genus = 0;
    Multigraph graph;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position);
    [[nodiscard]] std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

[[nodiscard]] ParsedGraph parse_graph(std::string_view line);

struct MultigraphHash {
    std::size_t operator()(const Multigraph& graph) const noexcept;
};

}  // namespace bgc
