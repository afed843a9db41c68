#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "bgc/canonical.hpp"
#include "bgc/multigraph.hpp"

namespace bgc {

/// Even: orientation is an ordering of the edges. Odd: an ordering of the
/// vertices plus a direction on every normal edge; fat edges are odd
/// undirected slots ordered among themselves, placed before the vertices.
enum class Flavor : std::uint8_t { Even = 0, Odd = 1 };

[[nodiscard]] char flavor_char(Flavor flavor);
[[nodiscard]] const char* flavor_name(Flavor flavor);
/// Accepts "even", "odd", "E", "O" (case-insensitive).
[[nodiscard]] Flavor parse_flavor(std::string_view text);

[[nodiscard]] int permutation_sign(const std::vector<int>& perm);

[[nodiscard]] int iso_sign(const EdgeIsomorphism& iso, Flavor flavor);

/// Zero forced by a local symmetry (parallel-edge swap or self-edge flip).
[[nodiscard]] bool has_local_zero(const Multigraph& graph, Flavor flavor);
[[nodiscard]] bool is_zero_graph(const Multigraph& graph, Flavor flavor);

/// Even: -(#edges). Odd: sum of (valence - 3) minus #fat edges.
[[nodiscard]] int graph_degree(const Multigraph& graph, Flavor flavor);

struct OrientedGraph {
    Multigraph canonical;
    Flavor flavor = Flavor::Even;
    bool zero = false;
};

[[nodiscard]] OrientedGraph make_oriented(const Multigraph& graph, Flavor flavor);

/// A signed canonical graph; sign 0 stands for the zero class.
struct SignedGraph {
    int sign = 0;
    Multigraph graph;
};

/// Canonical representative of `graph` and the sign relating the orientation
/// induced by its labeling to the reference orientation of the representative.
[[nodiscard]] SignedGraph orient_canonical(const Multigraph& graph, Flavor flavor);

/// Sign attached to contracting `edge` before canonical relabeling.
[[nodiscard]] int contraction_rule_sign(const Multigraph& source, int edge, Flavor flavor);

/// One term of d_c applied to `source` (orientation read off its labeling).
[[nodiscard]] SignedGraph contraction_sign(const Multigraph& source, int edge, Flavor flavor);

/// One term of d_fat (odd flavor only).
[[nodiscard]] SignedGraph fat_expansion_sign(const Multigraph& source, int edge);

/// One term of the homotopy h: two normal edges between a and b merged into
/// a fat edge placed first among the fat edges.
[[nodiscard]] SignedGraph fat_merge_sign(const Multigraph& source, int a, int b);

}  // namespace bgc
