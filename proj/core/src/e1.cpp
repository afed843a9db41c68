#include "bgc/e1.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>
#include <stdexcept>

#include "bgc/canonical.hpp"

namespace bgc {

namespace {

int cycle_count(const std::vector<int>& perm) {
    std::vector<bool> seen(perm.size(), false);
    int cycles = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        ++cycles;
        for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) seen[j] = true;
    }
    return cycles;
}

std::string gk_label(int g, int k) { return "(" + std::to_string(g) + "," + std::to_string(k) + ")"; }

int tree_cost(const std::vector<int>& valences) {
    int cost = 0;
    for (int k : valences) cost += min_decoration_genus(k);
    return cost;
}

std::vector<std::vector<int>> neighbour_lists(const Multigraph& tree) {
    std::vector<std::vector<int>> nbrs(static_cast<std::size_t>(tree.num_vertices()));
    for (const Edge& e : tree.edges()) {
        nbrs[e.a].push_back(e.b);
        nbrs[e.b].push_back(e.a);
    }
    for (auto& n : nbrs) std::sort(n.begin(), n.end());
    return nbrs;
}

std::string shape_name(const TreeShape& shape, int index_among_size) {
    const int n = shape.num_vertices();
    if (n == 1) return "A";
    if (n == 2) return "B";
    if (n == 3) return "C";
    if (n == 4) {
        int max_val = 0;
        for (int i = 0; i < n; ++i) max_val = std::max(max_val, shape.valence(i));
        return max_val == 3 ? "D" : "E";
    }
    return "T" + std::to_string(n) + "_" + std::to_string(index_among_size);
}

using Poly = std::map<std::pair<int, int>, long long>;  // (genus, degree) -> coefficient

Poly multiply_poly(const Poly& a, const Poly& b, int genus_cap) {
    Poly out;
    for (const auto& [ka, ca] : a) {
        for (const auto& [kb, cb] : b) {
            const int g = ka.first + kb.first;
            if (g > genus_cap) continue;
            out[{g, ka.second + kb.second}] += ca * cb;
        }
    }
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

// Sum over sigma in Aut of the trace of sigma, as a polynomial in (genus, degree).
Poly trace_sum(const DecorationTable& table, const TreeShape& shape, int genus_cap) {
    const int slack = genus_cap - tree_cost([&] {
        std::vector<int> vals;
        for (int i = 0; i < shape.num_vertices(); ++i) vals.push_back(shape.valence(i));
        return vals;
    }());
    Poly total;
    if (slack < 0) return total;
    for (const auto& sigma : shape.automorphisms) {
        const int n = shape.num_vertices();
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        Poly trace{{{0, 0}, 1}};
        for (int i0 = 0; i0 < n && !trace.empty(); ++i0) {
            if (seen[i0]) continue;
            int m = 0;
            for (int j = i0; !seen[j]; j = sigma[j]) {
                seen[j] = true;
                ++m;
            }
            // sigma^m fixes i0 and permutes its legs.
            const auto& nbrs = shape.neighbours[i0];
            const int k = static_cast<int>(nbrs.size());
            std::vector<int> tau(static_cast<std::size_t>(k));
            for (int p = 0; p < k; ++p) {
                int image = nbrs[p];
                for (int s = 0; s < m; ++s) image = sigma[image];
                tau[p] = static_cast<int>(std::find(nbrs.begin(), nbrs.end(), image) - nbrs.begin());
            }
            Poly factor;
            const int g_lo = min_decoration_genus(k);
            for (int gi = g_lo; gi <= g_lo + slack; ++gi) {
                if (m * gi > genus_cap) break;
                if (!table.covers(gi, k)) {
                    throw std::runtime_error("decoration " + gk_label(gi, k) + " missing from the table");
                }
                for (const auto& [degree, piece] : table.pieces(gi, k)) {
                    (void)piece;
                    long long chi = table.character(gi, k, degree, tau);
                    if ((degree * (m - 1)) % 2 != 0) chi = -chi;
                    if (chi != 0) factor[{m * gi, m * degree}] += chi;
                }
            }
            trace = multiply_poly(trace, factor, genus_cap);
        }
        for (const auto& [key, c] : trace) total[key] += c;
    }
    return total;
}

}  // namespace

void DecorationTable::set(int g, int k, int degree, const LegCharacter& value) {
    if (value.dim == 0) {
        entries_.erase({g, k, degree});
        return;
    }
    entries_[{g, k, degree}] = value;
}

void DecorationTable::mark_covered(int g, int k) { covered_.insert({g, k}); }

int DecorationTable::character(int g, int k, int degree, const std::vector<int>& perm) const {
    auto it = entries_.find({g, k, degree});
    if (it == entries_.end()) return 0;
    const LegCharacter& c = it->second;
    if (static_cast<int>(perm.size()) != k) throw std::invalid_argument("character: permutation size mismatch");
    if (k <= 1) return c.dim;
    if (k > 3) throw std::invalid_argument("characters are only available for at most 3 legs");
    const int cycles = cycle_count(perm);
    if (cycles == k) return c.dim;
    if (cycles == k - 1) return c.sym - c.antisym;
    // A 3-cycle: trivial and sign give 1 each, the standard representation -1.
    const int rest = c.dim - c.sym - c.antisym;
    if (rest < 0 || rest % 2 != 0) throw std::runtime_error("inconsistent leg character at " + gk_label(g, k));
    return c.sym + c.antisym - rest / 2;
}

std::vector<std::pair<int, LegCharacter>> DecorationTable::pieces(int g, int k) const {
    if (!covers(g, k)) throw std::runtime_error("decoration " + gk_label(g, k) + " missing from the table");
    std::vector<std::pair<int, LegCharacter>> out;
    for (auto it = entries_.lower_bound({g, k, -(1 << 20)}); it != entries_.end(); ++it) {
        const auto& [gg, kk, degree] = it->first;
        if (gg != g || kk != k) break;
        out.emplace_back(degree, it->second);
    }
    return out;
}

int min_decoration_genus(int k) {
    switch (k) {
        case 0:
        case 1:
            return 3;
        case 2:
            return 2;
        default:
            return 0;
    }
}

std::vector<TreeShape> enumerate_tree_shapes(int max_genus) {
    if (max_genus > kMaxTreeGenus) {
        throw std::invalid_argument("tree shapes are only enumerated up to genus " + std::to_string(kMaxTreeGenus));
    }
    std::vector<TreeShape> shapes;
    std::vector<Multigraph> level{Multigraph(1, {}, {})};
    // Attaching a leaf raises the decoration cost by at least one, so pruning is safe.
    while (!level.empty()) {
        std::vector<Multigraph> next;
        std::vector<Multigraph> seen;
        for (const Multigraph& tree : level) {
            const auto nbrs = neighbour_lists(tree);
            std::vector<int> vals;
            for (const auto& n : nbrs) vals.push_back(static_cast<int>(n.size()));
            if (tree_cost(vals) > max_genus) continue;
            const CanonicalForm form = canonicalize(tree);
            TreeShape shape;
            shape.graph = form.canonical_graph;
            shape.neighbours = neighbour_lists(shape.graph);
            shape.automorphisms = form.automorphisms;
            shapes.push_back(std::move(shape));
            const int n = tree.num_vertices();
            for (int u = 0; u < n; ++u) {
                std::vector<Edge> edges = tree.edges();
                edges.emplace_back(u, n);
                const Multigraph grown = canonicalize(Multigraph(n + 1, edges, {})).canonical_graph;
                if (std::find(seen.begin(), seen.end(), grown) == seen.end()) {
                    seen.push_back(grown);
                    next.push_back(grown);
                }
            }
        }
        level = std::move(next);
    }
    std::map<int, int> per_size;
    for (TreeShape& s : shapes) s.name = shape_name(s, per_size[s.num_vertices()]++);
    return shapes;
}

std::set<std::pair<int, int>> needed_decorations(const std::vector<TreeShape>& shapes, int max_genus) {
    std::set<std::pair<int, int>> needed;
    for (const TreeShape& s : shapes) {
        std::vector<int> vals;
        for (int i = 0; i < s.num_vertices(); ++i) vals.push_back(s.valence(i));
        const int slack = max_genus - tree_cost(vals);
        if (slack < 0) continue;
        for (int k : vals) {
            for (int g = min_decoration_genus(k); g <= min_decoration_genus(k) + slack; ++g) needed.insert({g, k});
        }
    }
    return needed;
}

DecorationTable compute_decoration_table(SliceStore& store, const std::set<std::pair<int, int>>& needed,
                                         const CohomOptions& options) {
    DecorationTable table;
    const VariantSpec simple{false, true, false};
    for (const auto& [g, k] : needed) {
        const CohomTable h = cohomology_dims(store, Flavor::Even, simple, k, g, g, 1, -1, options);
        for (const CohomCell& c : h.cells) {
            LegCharacter value;
            value.dim = c.dim_h;
            value.sym = value.antisym = c.dim_h;
            if (k >= 2 && c.dim_h > 0) {
                const SliceKey key{Flavor::Even, simple, g, k, c.v};
                const int top = max_slice_index(key);
                for (bool anti : {false, true}) {
                    auto projected_rank = [&](int v) {
                        if (v < 2 || v > top) return 0;
                        const SliceKey at = key.shifted(v - c.v);
                        const SparseIntMatrix p = leg_symmetrizer(Flavor::Even, store.basis(at), anti);
                        return rank_consensus(multiply(store.differential(at), p), options.primes,
                                              options.exact_guard)
                            .rank;
                    };
                    const SparseIntMatrix p = leg_symmetrizer(Flavor::Even, store.basis(key), anti);
                    const int part = rank_consensus(p, options.primes, options.exact_guard).rank -
                                     projected_rank(c.v) - projected_rank(c.v + 1);
                    (anti ? value.antisym : value.sym) = part;
                }
            }
            table.set(g, k, c.degree, value);
        }
        table.mark_covered(g, k);
    }
    return table;
}

std::string E1Cell::attribution() const {
    std::string out;
    for (const auto& [name, count] : by_shape) {
        if (count == 0) continue;
        if (!out.empty()) out += "+";
        out += std::to_string(count) + "_" + name;
    }
    return out.empty() ? "0" : out;
}

int shape_invariants(const DecorationTable& table, const TreeShape& shape, int g, int degree) {
    const Poly sum = trace_sum(table, shape, g);
    auto it = sum.find({g, degree});
    if (it == sum.end()) return 0;
    const long long order = static_cast<long long>(shape.automorphisms.size());
    if (it->second % order != 0) throw std::runtime_error("non-integral invariant count for shape " + shape.name);
    return static_cast<int>(it->second / order);
}

std::map<int, E1Cell> predict_e1_row(const DecorationTable& table, const std::vector<TreeShape>& shapes, int g) {
    std::map<int, E1Cell> row;
    for (const TreeShape& shape : shapes) {
        const Poly sum = trace_sum(table, shape, g);
        const long long order = static_cast<long long>(shape.automorphisms.size());
        for (const auto& [key, c] : sum) {
            if (key.first != g) continue;
            if (c % order != 0) throw std::runtime_error("non-integral invariant count for shape " + shape.name);
            const int count = static_cast<int>(c / order);
            if (count == 0) continue;
            const int v = -key.second - g + 1;
            E1Cell& cell = row[v];
            cell.g = g;
            cell.v = v;
            cell.total += count;
            cell.by_shape[shape.name] += count;
        }
    }
    return row;
}

E1Cell predict_e1(const DecorationTable& table, const std::vector<TreeShape>& shapes, int g, int v) {
    const auto row = predict_e1_row(table, shapes, g);
    auto it = row.find(v);
    if (it != row.end()) return it->second;
    E1Cell empty;
    empty.g = g;
    empty.v = v;
    return empty;
}

Report compare_prediction(const std::map<int, std::map<int, E1Cell>>& predicted, const CohomTable& computed) {
    Report report;
    for (const auto& [g, row] : predicted) {
        std::set<int> columns;
        for (const CohomCell& c : computed.cells) {
            if (c.g == g) columns.insert(c.v);
        }
        for (const auto& [v, cell] : row) columns.insert(v);
        for (int v : columns) {
            auto it = row.find(v);
            const int want = computed.dim(g, v);
            const int got = it == row.end() ? 0 : it->second.total;
            CheckResult check;
            check.name = "e1 cell";
            check.params = "g=" + std::to_string(g) + " v=" + std::to_string(v);
            check.expected = std::to_string(want);
            check.computed = it == row.end() ? "0" : std::to_string(got) + "=" + it->second.attribution();
            check.pass = want == got && (computed.cell(g, v) != nullptr || got == 0);
            report.add(std::move(check));
        }
    }
    return report;
}

}  // namespace bgc
