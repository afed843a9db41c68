#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bgc/cohomology.hpp"
#include "bgc/multigraph.hpp"

namespace bgc {

/// Dimensions of one graded piece together with its leg-symmetric and
/// leg-antisymmetric parts. For k <= 3 legs these determine the character of
/// the S_k action.
struct LegCharacter {
    int dim = 0;
    int sym = 0;
    int antisym = 0;
};

/// H(Feyn^s(Com)(g, k)) by degree (degree = -#edges), with leg characters.
class DecorationTable {
public:
    void set(int g, int k, int degree, const LegCharacter& value);
    /// Marks (g, k) as computed, so missing degrees mean dimension 0.
    void mark_covered(int g, int k);
    [[nodiscard]] bool covers(int g, int k) const { return covered_.count({g, k}) > 0; }

    /// Character value at a permutation of the k legs.
    [[nodiscard]] int character(int g, int k, int degree, const std::vector<int>& perm) const;
    /// (degree, LegCharacter) pairs of (g, k) with nonzero dimension.
    [[nodiscard]] std::vector<std::pair<int, LegCharacter>> pieces(int g, int k) const;

    [[nodiscard]] const std::map<std::tuple<int, int, int>, LegCharacter>& entries() const { return entries_; }

private:
    std::map<std::tuple<int, int, int>, LegCharacter> entries_;
    std::set<std::pair<int, int>> covered_;
};

/// Unrooted tree. `graph` is canonical; the legs of vertex i are its incident
/// tree edges ordered by neighbour index.
struct TreeShape {
    std::string name;
    Multigraph graph;
    std::vector<std::vector<int>> neighbours;
    std::vector<std::vector<int>> automorphisms;  // vertex permutations, identity first

    [[nodiscard]] int num_vertices() const { return graph.num_vertices(); }
    [[nodiscard]] int valence(int vertex) const { return static_cast<int>(neighbours[vertex].size()); }
};

/// Smallest genus carrying nonzero decorations at a tree vertex of valence k.
[[nodiscard]] int min_decoration_genus(int k);

inline constexpr int kMaxTreeGenus = 10;

/// Trees whose minimal decoration genus fits in max_genus. Throws
/// std::invalid_argument beyond kMaxTreeGenus.
[[nodiscard]] std::vector<TreeShape> enumerate_tree_shapes(int max_genus);

/// (g, k) pairs a prediction up to max_genus may read.
[[nodiscard]] std::set<std::pair<int, int>> needed_decorations(const std::vector<TreeShape>& shapes, int max_genus);

/// Computes the needed entries from the even simple complexes.
[[nodiscard]] DecorationTable compute_decoration_table(SliceStore& store, const std::set<std::pair<int, int>>& needed,
                                                       const CohomOptions& options = {});

struct E1Cell {
    int g = 0;
    int v = 0;
    int total = 0;
    std::map<std::string, int> by_shape;

    /// "1_A+1_B" style; "0" when empty.
    [[nodiscard]] std::string attribution() const;
};

/// Predicted dimensions of row g, keyed by vertex count v = -d - g + 1.
[[nodiscard]] std::map<int, E1Cell> predict_e1_row(const DecorationTable& table,
                                                   const std::vector<TreeShape>& shapes, int g);
[[nodiscard]] E1Cell predict_e1(const DecorationTable& table, const std::vector<TreeShape>& shapes, int g, int v);

/// Invariant dimension of one shape at total genus g and degree d.
[[nodiscard]] int shape_invariants(const DecorationTable& table, const TreeShape& shape, int g, int degree);

[[nodiscard]] Report compare_prediction(const std::map<int, std::map<int, E1Cell>>& predicted,
                                        const CohomTable& computed);

}  // namespace bgc
