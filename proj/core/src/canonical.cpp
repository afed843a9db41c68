#include "bgc/canonical.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>

namespace bgc {

namespace {

// Search state for individualization-refinement. The whole search tree is
// traversed (no automorphism pruning): leaves carrying the minimal key are
// then exactly one orbit of the automorphism group.
class Canonizer {
public:
    explicit Canonizer(const Multigraph& graph) : graph_(graph), n_(graph.num_vertices()) {
        for (auto& row : normal_) row.fill(0);
        for (auto& row : fat_) row.fill(0);
        for (const Edge& e : graph.edges()) {
            auto& m = e.is_fat() ? fat_ : normal_;
            if (e.is_self()) {
                ++m[e.a][e.a];
            } else {
                ++m[e.a][e.b];
                ++m[e.b][e.a];
            }
        }
    }

    void run() {
        std::vector<int> order(n_);
        std::iota(order.begin(), order.end(), 0);
        // Initial colouring: vertices carrying legs first, keyed by their
        // smallest leg number (leg numbers are fixed colours); then the rest
        // by (valence, self-edges, fat degree).
        std::vector<std::array<int, 4>> colour(n_);
        for (int x = 0; x < n_; ++x) {
            int fat_degree = 0;
            int valence_x = 2 * normal_[x][x];
            for (int y = 0; y < n_; ++y) {
                if (y == x) continue;
                fat_degree += fat_[x][y];
                valence_x += normal_[x][y] + 2 * fat_[x][y];
            }
            colour[x] = {n_ + 1000, valence_x, normal_[x][x], fat_degree};
        }
        for (int k = 0; k < graph_.num_legs(); ++k) {
            const int x = graph_.legs()[k];
            ++colour[x][1];
            colour[x][0] = std::min(colour[x][0], k);
        }
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return colour[a] < colour[b] || (colour[a] == colour[b] && a < b); });
        std::vector<int> cell_start(n_);
        for (int i = 0; i < n_; ++i) {
            cell_start[i] = (i > 0 && colour[order[i]] == colour[order[i - 1]]) ? cell_start[i - 1] : i;
        }
        search(order, cell_start);
    }

    [[nodiscard]] const std::vector<int>& best_labeling() const { return best_perm_; }
    [[nodiscard]] const std::vector<std::vector<int>>& equal_leaves() const { return equal_perms_; }
    [[nodiscard]] Multigraph best_graph() const { return build_graph(best_perm_); }

private:
    // Splits cells until the partition is equitable. cell_start[i] is the
    // first position of the cell containing position i.
    void refine(std::vector<int>& order, std::vector<int>& cell_start) const {
        std::vector<std::uint32_t> signature;
        std::vector<int> cells;
        for (;;) {
            cells.clear();
            for (int i = 0; i < n_; ++i) {
                if (cell_start[i] == i) cells.push_back(i);
            }
            const int num_cells = static_cast<int>(cells.size());
            if (num_cells == n_) return;
            std::vector<int> cell_index(n_);
            for (int i = 0; i < n_; ++i) {
                cell_index[order[i]] = static_cast<int>(
                    std::lower_bound(cells.begin(), cells.end(), cell_start[i]) - cells.begin());
            }
            // signature[x * num_cells + c]: weighted adjacency of x into cell c.
            signature.assign(static_cast<std::size_t>(n_) * num_cells, 0);
            for (int x = 0; x < n_; ++x) {
                for (int y = 0; y < n_; ++y) {
                    if (x == y) continue;
                    const std::uint32_t w =
                        static_cast<std::uint32_t>(normal_[x][y]) * 64u + fat_[x][y];
                    if (w) signature[static_cast<std::size_t>(x) * num_cells + cell_index[y]] += w;
                }
            }
            auto sig_less = [&](int a, int b) {
                const auto* pa = &signature[static_cast<std::size_t>(a) * num_cells];
                const auto* pb = &signature[static_cast<std::size_t>(b) * num_cells];
                return std::lexicographical_compare(pa, pa + num_cells, pb, pb + num_cells);
            };
            auto sig_equal = [&](int a, int b) {
                const auto* pa = &signature[static_cast<std::size_t>(a) * num_cells];
                const auto* pb = &signature[static_cast<std::size_t>(b) * num_cells];
                return std::equal(pa, pa + num_cells, pb);
            };
            bool changed = false;
            for (int c = 0; c < num_cells; ++c) {
                const int begin = cells[c];
                const int end = c + 1 < num_cells ? cells[c + 1] : n_;
                if (end - begin < 2) continue;
                std::stable_sort(order.begin() + begin, order.begin() + end, sig_less);
                for (int i = begin + 1; i < end; ++i) {
                    if (sig_equal(order[i], order[i - 1])) {
                        cell_start[i] = cell_start[i - 1];
                    } else {
                        cell_start[i] = i;
                        changed = true;
                    }
                }
            }
            if (!changed) return;
        }
    }

    void search(std::vector<int> order, std::vector<int> cell_start) {
        refine(order, cell_start);
        int target = -1;
        for (int i = 0; i < n_; ++i) {
            if (cell_start[i] == i && i + 1 < n_ && cell_start[i + 1] == i) {
                target = i;
                break;
            }
        }
        if (target < 0) {
            leaf(order);
            return;
        }
        int end = target + 1;
        while (end < n_ && cell_start[end] == target) ++end;
        for (int pick = target; pick < end; ++pick) {
            std::vector<int> child = order;
            std::vector<int> child_start = cell_start;
            std::swap(child[target], child[pick]);
            // The chosen vertex becomes a singleton cell in front of the rest.
            std::sort(child.begin() + target + 1, child.begin() + end);
            for (int i = target + 1; i < end; ++i) child_start[i] = target + 1;
            search(std::move(child), std::move(child_start));
        }
    }

    void leaf(const std::vector<int>& order) {
        std::vector<int> perm(n_);
        for (int i = 0; i < n_; ++i) perm[order[i]] = i;
        std::vector<std::uint8_t> key = make_key(perm);
        if (best_key_.empty() || key < best_key_) {
            best_key_ = std::move(key);
            best_perm_ = perm;
            equal_perms_.clear();
            equal_perms_.push_back(std::move(perm));
        } else if (key == best_key_) {
            equal_perms_.push_back(std::move(perm));
        }
    }

    [[nodiscard]] std::vector<std::uint8_t> make_key(const std::vector<int>& perm) const {
        std::vector<std::uint8_t> key;
        key.reserve(graph_.legs().size() + 3 * graph_.edges().size());
        for (int leg : graph_.legs()) key.push_back(static_cast<std::uint8_t>(perm[leg]));
        std::vector<std::uint32_t> packed;
        packed.reserve(graph_.edges().size());
        for (const Edge& e : graph_.edges()) {
            int a = perm[e.a];
            int b = perm[e.b];
            if (a > b) std::swap(a, b);
            packed.push_back((static_cast<std::uint32_t>(e.kind) << 16) |
                             (static_cast<std::uint32_t>(a) << 8) | static_cast<std::uint32_t>(b));
        }
        std::sort(packed.begin(), packed.end());
        for (std::uint32_t p : packed) {
            key.push_back(static_cast<std::uint8_t>(p >> 16));
            key.push_back(static_cast<std::uint8_t>((p >> 8) & 0xff));
            key.push_back(static_cast<std::uint8_t>(p & 0xff));
        }
        return key;
    }

    [[nodiscard]] Multigraph build_graph(const std::vector<int>& perm) const {
        return normalized(relabel(graph_, perm));
    }

    const Multigraph& graph_;
    int n_;
    std::array<std::array<std::uint8_t, kMaxVertices>, kMaxVertices> normal_{};
    std::array<std::array<std::uint8_t, kMaxVertices>, kMaxVertices> fat_{};
    std::vector<std::uint8_t> best_key_;
    std::vector<int> best_perm_;
    std::vector<std::vector<int>> equal_perms_;
};

std::vector<int> inverse(const std::vector<int>& perm) {
    std::vector<int> inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
    return inv;
}

}  // namespace

CanonicalForm canonicalize(const Multigraph& graph) {
    CanonicalForm form;
    if (graph.num_vertices() == 0) {
        form.canonical_graph = graph;
        form.automorphisms.emplace_back();
        return form;
    }
    Canonizer canon(graph);
    canon.run();
    form.relabeling = canon.best_labeling();
    form.canonical_graph = canon.best_graph();
    const std::vector<int> back = inverse(form.relabeling);
    for (const std::vector<int>& perm : canon.equal_leaves()) {
        // perm o relabeling^-1 fixes the canonical graph.
        std::vector<int> aut(perm.size());
        for (std::size_t c = 0; c < perm.size(); ++c) aut[c] = perm[back[c]];
        form.automorphisms.push_back(std::move(aut));
    }
    std::sort(form.automorphisms.begin() + 1, form.automorphisms.end());
    return form;
}

EdgeIsomorphism induced_edge_isomorphism(const Multigraph& source,
                                         const std::vector<int>& vertex_map,
                                         const Multigraph& target) {
    if (source.num_vertices() != target.num_vertices() ||
        source.num_edges() != target.num_edges() || source.num_legs() != target.num_legs() ||
        static_cast<int>(vertex_map.size()) != source.num_vertices()) {
        throw GraphError("induced_edge_isomorphism: size mismatch");
    }
    for (int k = 0; k < source.num_legs(); ++k) {
        if (vertex_map[source.legs()[k]] != target.legs()[k]) {
            throw GraphError("induced_edge_isomorphism: legs not preserved");
        }
    }
    EdgeIsomorphism iso;
    iso.vertex_map = vertex_map;
    iso.edge_map.assign(source.num_edges(), -1);
    iso.flips.assign(source.num_edges(), false);
    iso.kinds.reserve(source.num_edges());
    std::vector<bool> used(target.num_edges(), false);
    for (int i = 0; i < source.num_edges(); ++i) {
        const Edge& e = source.edges()[i];
        iso.kinds.push_back(e.kind);
        const int a = vertex_map[e.a];
        const int b = vertex_map[e.b];
        for (int j = 0; j < target.num_edges(); ++j) {
            if (used[j]) continue;
            const Edge& t = target.edges()[j];
            if (t.kind != e.kind) continue;
            if (t.a == a && t.b == b) {
                used[j] = true;
                iso.edge_map[i] = j;
                break;
            }
            if (t.a == b && t.b == a) {
                used[j] = true;
                iso.edge_map[i] = j;
                iso.flips[i] = true;
                break;
            }
        }
        if (iso.edge_map[i] < 0) throw GraphError("induced_edge_isomorphism: not an isomorphism");
    }
    return iso;
}

EdgeIsomorphism to_canonical(const Multigraph& graph, const CanonicalForm& form) {
    return induced_edge_isomorphism(graph, form.relabeling, form.canonical_graph);
}

std::optional<EdgeIsomorphism> find_isomorphism(const Multigraph& a, const Multigraph& b) {
    if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() ||
        a.num_legs() != b.num_legs()) {
        return std::nullopt;
    }
    const CanonicalForm ca = canonicalize(a);
    const CanonicalForm cb = canonicalize(b);
    if (!(ca.canonical_graph == cb.canonical_graph)) return std::nullopt;
    // a -> canonical -> b
    const std::vector<int> back = inverse(cb.relabeling);
    std::vector<int> vertex_map(a.num_vertices());
    for (int x = 0; x < a.num_vertices(); ++x) vertex_map[x] = back[ca.relabeling[x]];
    return induced_edge_isomorphism(a, vertex_map, b);
}

std::vector<EdgeIsomorphism> automorphism_edge_actions(const Multigraph& graph) {
    const CanonicalForm form = canonicalize(graph);
    const std::vector<int> back = inverse(form.relabeling);

    // Classes of parallel edges (same kind and endpoint set), and self-edges.
    std::vector<std::vector<int>> classes;
    {
        std::vector<int> ids(graph.num_edges());
        std::iota(ids.begin(), ids.end(), 0);
        auto key = [&](int i) {
            const Edge& e = graph.edges()[i];
            return std::make_tuple(e.kind, e.lo(), e.hi());
        };
        std::stable_sort(ids.begin(), ids.end(), [&](int x, int y) { return key(x) < key(y); });
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (i == 0 || key(ids[i]) != key(ids[i - 1])) classes.emplace_back();
            classes.back().push_back(ids[i]);
        }
    }
    std::vector<int> self_edges;
    for (int i = 0; i < graph.num_edges(); ++i) {
        if (graph.edges()[i].is_self()) self_edges.push_back(i);
    }

    // Local symmetries: permutations within parallel classes and self-edge flips.
    std::vector<EdgeIsomorphism> local;
    {
        EdgeIsomorphism id;
        id.vertex_map.resize(graph.num_vertices());
        std::iota(id.vertex_map.begin(), id.vertex_map.end(), 0);
        id.edge_map.resize(graph.num_edges());
        std::iota(id.edge_map.begin(), id.edge_map.end(), 0);
        id.flips.assign(graph.num_edges(), false);
        for (const Edge& e : graph.edges()) id.kinds.push_back(e.kind);
        local.push_back(id);
        for (const std::vector<int>& cls : classes) {
            std::vector<EdgeIsomorphism> next;
            std::vector<int> images = cls;
            std::sort(images.begin(), images.end());
            do {
                for (const EdgeIsomorphism& base : local) {
                    EdgeIsomorphism iso = base;
                    for (std::size_t k = 0; k < cls.size(); ++k) {
                        iso.edge_map[cls[k]] = images[k];
                        // Parallel non-self edges may be stored in opposite
                        // directions; swapping them then reverses direction.
                        const Edge& from = graph.edges()[cls[k]];
                        const Edge& to = graph.edges()[images[k]];
                        iso.flips[cls[k]] = !from.is_self() && from.a != to.a;
                    }
                    next.push_back(std::move(iso));
                }
            } while (std::next_permutation(images.begin(), images.end()));
            local = std::move(next);
        }
        for (int s : self_edges) {
            const std::size_t count = local.size();
            for (std::size_t k = 0; k < count; ++k) {
                EdgeIsomorphism flipped = local[k];
                flipped.flips[s] = true;
                local.push_back(std::move(flipped));
            }
        }
    }

    std::vector<EdgeIsomorphism> result;
    for (const std::vector<int>& aut : form.automorphisms) {
        // Pull the canonical automorphism back to the input labeling.
        std::vector<int> vertex_map(graph.num_vertices());
        for (int x = 0; x < graph.num_vertices(); ++x) vertex_map[x] = back[aut[form.relabeling[x]]];
        const EdgeIsomorphism base = induced_edge_isomorphism(graph, vertex_map, graph);
        for (const EdgeIsomorphism& l : local) result.push_back(compose(base, l));
    }
    return result;
}

EdgeIsomorphism compose(const EdgeIsomorphism& second, const EdgeIsomorphism& first) {
    EdgeIsomorphism out;
    out.vertex_map.resize(first.vertex_map.size());
    for (std::size_t x = 0; x < first.vertex_map.size(); ++x) {
        out.vertex_map[x] = second.vertex_map[first.vertex_map[x]];
    }
    out.edge_map.resize(first.edge_map.size());
    out.flips.resize(first.edge_map.size());
    for (std::size_t i = 0; i < first.edge_map.size(); ++i) {
        const int mid = first.edge_map[i];
        out.edge_map[i] = second.edge_map[mid];
        out.flips[i] = first.flips[i] != second.flips[mid];
    }
    out.kinds = first.kinds;
    return out;
}

bool is_valid_isomorphism(const EdgeIsomorphism& iso, const Multigraph& source,
                          const Multigraph& target) {
    const int n = source.num_vertices();
    if (target.num_vertices() != n || static_cast<int>(iso.vertex_map.size()) != n) return false;
    if (target.num_edges() != source.num_edges() ||
        static_cast<int>(iso.edge_map.size()) != source.num_edges()) {
        return false;
    }
    std::vector<bool> hit(n, false);
    for (int x : iso.vertex_map) {
        if (x < 0 || x >= n || hit[x]) return false;
        hit[x] = true;
    }
    std::vector<bool> edge_hit(source.num_edges(), false);
    for (int i = 0; i < source.num_edges(); ++i) {
        const int j = iso.edge_map[i];
        if (j < 0 || j >= target.num_edges() || edge_hit[j]) return false;
        edge_hit[j] = true;
        const Edge& e = source.edges()[i];
        const Edge& t = target.edges()[j];
        if (e.kind != t.kind) return false;
        const int a = iso.vertex_map[e.a];
        const int b = iso.vertex_map[e.b];
        const bool flip = iso.flips[i];
        if (e.is_self()) {
            if (!(t.is_self() && t.a == a)) return false;
        } else if (flip ? !(a == t.b && b == t.a) : !(a == t.a && b == t.b)) {
            return false;
        }
    }
    if (source.num_legs() != target.num_legs()) return false;
    for (int k = 0; k < source.num_legs(); ++k) {
        if (iso.vertex_map[source.legs()[k]] != target.legs()[k]) return false;
    }
    return true;
}

}  // namespace bgc
