#include "bgc/orientation.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace bgc {

char flavor_char(Flavor flavor) { return flavor == Flavor::Even ? 'E' : 'O'; }

const char* flavor_name(Flavor flavor) { return flavor == Flavor::Even ? "even" : "odd"; }

Flavor parse_flavor(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "even" || lower == "e") return Flavor::Even;
    if (lower == "odd" || lower == "o") return Flavor::Odd;
    throw std::invalid_argument("unknown flavor '" + std::string(text) + "'");
}

int permutation_sign(const std::vector<int>& perm) {
    std::vector<bool> seen(perm.size(), false);
    int parity = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        int length = 0;
        for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
            seen[j] = true;
            ++length;
        }
        parity += length - 1;
    }
    return parity % 2 == 0 ? 1 : -1;
}

int iso_sign(const EdgeIsomorphism& iso, Flavor flavor) {
    if (flavor == Flavor::Even) return permutation_sign(iso.edge_map);
    int sign = permutation_sign(iso.vertex_map);
    // Fat edges: sign of the induced permutation on their relative order.
    std::vector<int> fat_rank(iso.edge_map.size(), -1);
    int num_fat = 0;
    for (std::size_t i = 0; i < iso.edge_map.size(); ++i) {
        if (iso.kinds[i] == EdgeKind::Fat) {
            fat_rank[iso.edge_map[i]] = 0;
            ++num_fat;
        } else if (iso.flips[i]) {
            sign = -sign;
        }
    }
    if (num_fat > 1) {
        int next = 0;
        for (int& r : fat_rank) {
            if (r == 0) r = next++;
        }
        std::vector<int> fat_perm;
        fat_perm.reserve(num_fat);
        for (std::size_t i = 0; i < iso.edge_map.size(); ++i) {
            if (iso.kinds[i] == EdgeKind::Fat) fat_perm.push_back(fat_rank[iso.edge_map[i]]);
        }
        sign *= permutation_sign(fat_perm);
    }
    return sign;
}

bool has_local_zero(const Multigraph& graph, Flavor flavor) {
    const auto& edges = graph.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        if (flavor == Flavor::Odd && e.is_self() && !e.is_fat()) return true;
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            const Edge& f = edges[j];
            if (f.kind != e.kind || f.lo() != e.lo() || f.hi() != e.hi()) continue;
            // Swapping two parallel edges: odd for edge orderings, odd for
            // fat slots, even for directed normal edges.
            if (flavor == Flavor::Even || e.is_fat()) return true;
        }
    }
    return false;
}

namespace {

bool automorphism_reverses(const CanonicalForm& form, Flavor flavor) {
    for (std::size_t k = 1; k < form.automorphisms.size(); ++k) {
        const EdgeIsomorphism iso = induced_edge_isomorphism(
            form.canonical_graph, form.automorphisms[k], form.canonical_graph);
        if (iso_sign(iso, flavor) < 0) return true;
    }
    return false;
}

}  // namespace

bool is_zero_graph(const Multigraph& graph, Flavor flavor) {
    if (has_local_zero(graph, flavor)) return true;
    return automorphism_reverses(canonicalize(graph), flavor);
}

int graph_degree(const Multigraph& graph, Flavor flavor) {
    if (flavor == Flavor::Even) return -graph.num_edges();
    int total = 0;
    for (const Edge& e : graph.edges()) total += e.is_fat() ? 4 : 2;
    total += graph.num_legs();
    return total - 3 * graph.num_vertices() - graph.num_fat_edges();
}

OrientedGraph make_oriented(const Multigraph& graph, Flavor flavor) {
    OrientedGraph out;
    out.flavor = flavor;
    const CanonicalForm form = canonicalize(graph);
    out.zero = has_local_zero(form.canonical_graph, flavor) || automorphism_reverses(form, flavor);
    out.canonical = form.canonical_graph;
    return out;
}

SignedGraph orient_canonical(const Multigraph& graph, Flavor flavor) {
    SignedGraph out;
    if (has_local_zero(graph, flavor)) return out;
    CanonicalForm form = canonicalize(graph);
    if (automorphism_reverses(form, flavor)) return out;
    out.sign = iso_sign(to_canonical(graph, form), flavor);
    out.graph = std::move(form.canonical_graph);
    return out;
}

int contraction_rule_sign(const Multigraph& source, int edge, Flavor flavor) {
    const Edge& e = source.edges().at(static_cast<std::size_t>(edge));
    if (flavor == Flavor::Even) return edge % 2 == 0 ? 1 : -1;
    // Bring lo, hi to the front in that order, merge, then move the merged
    // vertex back to position lo; only the hi displacement survives.
    int rule = (e.hi() - 1) % 2 == 0 ? 1 : -1;
    if (e.a > e.b) rule = -rule;
    if (source.num_fat_edges() % 2 != 0) rule = -rule;
    return rule;
}

SignedGraph contraction_sign(const Multigraph& source, int edge, Flavor flavor) {
    const int rule = contraction_rule_sign(source, edge, flavor);
    SignedGraph out = orient_canonical(contract_edge(source, edge), flavor);
    out.sign *= rule;
    return out;
}

SignedGraph fat_expansion_sign(const Multigraph& source, int edge) {
    int position = 0;
    for (int i = 0; i < edge; ++i) {
        if (source.edges()[i].is_fat()) ++position;
    }
    SignedGraph out = orient_canonical(expand_fat_edge(source, edge), Flavor::Odd);
    if (position % 2 != 0) out.sign = -out.sign;
    return out;
}

SignedGraph fat_merge_sign(const Multigraph& source, int a, int b) {
    const int lo = std::min(a, b);
    const int hi = std::max(a, b);
    std::vector<Edge> edges;
    edges.reserve(source.edges().size());
    edges.emplace_back(lo, hi, EdgeKind::Fat);
    int removed = 0;
    for (const Edge& e : source.edges()) {
        if (removed < 2 && !e.is_fat() && e.lo() == lo && e.hi() == hi && lo != hi) {
            ++removed;
            continue;
        }
        edges.push_back(e);
    }
    if (removed < 2) throw GraphError("fat_merge_sign: fewer than two parallel normal edges");
    return orient_canonical(Multigraph(source.num_vertices(), std::move(edges), source.legs()),
                            Flavor::Odd);
}

}  // namespace bgc
