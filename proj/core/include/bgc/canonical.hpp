#pragma once

#include <optional>
#include <vector>

#include "bgc/multigraph.hpp"

namespace bgc {

/// An isomorphism between two multigraphs, including its action on edges.
///
/// vertex_map[x] is the image of source vertex x, edge_map[i] the image of
/// source edge i. flips[i] is set when the stored direction of source edge i
/// is carried onto the reverse of the stored direction of its image; for a
/// self-edge it records an explicit flip. kinds[i] is the kind of source
/// edge i (kinds are preserved).
struct EdgeIsomorphism {
    std::vector<int> vertex_map;
    std::vector<int> edge_map;
    std::vector<bool> flips;
    std::vector<EdgeKind> kinds;
};

/// Canonical representative of an isomorphism class.
///
/// relabeling maps input vertices to canonical vertices. canonical_graph is
/// normalized (ascending endpoints, edges sorted by kind then endpoints).
/// automorphisms lists every vertex permutation fixing canonical_graph and
/// each leg; the identity is always first.
struct CanonicalForm {
    std::vector<int> relabeling;
    Multigraph canonical_graph;
    std::vector<std::vector<int>> automorphisms;
};

[[nodiscard]] CanonicalForm canonicalize(const Multigraph& graph);

/// Matches edges of `source` onto `target` along a vertex bijection. Parallel
/// edges are matched in list order, self-edges unflipped. Throws GraphError
/// if the vertex map is not an isomorphism.
[[nodiscard]] EdgeIsomorphism induced_edge_isomorphism(const Multigraph& source,
                                                       const std::vector<int>& vertex_map,
                                                       const Multigraph& target);

/// The isomorphism from graph onto its canonical representative.
[[nodiscard]] EdgeIsomorphism to_canonical(const Multigraph& graph, const CanonicalForm& form);

[[nodiscard]] std::optional<EdgeIsomorphism> find_isomorphism(const Multigraph& a,
                                                              const Multigraph& b);

/// The full automorphism group acting on edges: every vertex automorphism
/// combined with every permutation of parallel edge classes and every
/// combination of self-edge flips.
[[nodiscard]] std::vector<EdgeIsomorphism> automorphism_edge_actions(const Multigraph& graph);

[[nodiscard]] EdgeIsomorphism compose(const EdgeIsomorphism& second, const EdgeIsomorphism& first);
[[nodiscard]] bool is_valid_isomorphism(const EdgeIsomorphism& iso, const Multigraph& source,
                                        const Multigraph& target);

}  // namespace bgc
