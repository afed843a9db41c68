#include "bgc/complex.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "bgc/canonical.hpp"

namespace bgc {

std::string VariantSpec::name() const {
    if (fat) return bridgeless ? "fat_bl" : "fat";
    if (simple) return bridgeless ? "s_bl" : "s";
    return bridgeless ? "bl" : "full";
}

VariantSpec VariantSpec::parse(std::string_view text) {
    VariantSpec spec;
    if (text == "full") return spec;
    if (text == "bl") {
        spec.bridgeless = true;
    } else if (text == "s") {
        spec.simple = true;
    } else if (text == "s_bl" || text == "bl_s") {
        spec.simple = spec.bridgeless = true;
    } else if (text == "fat") {
        spec.fat = true;
    } else if (text == "fat_bl" || text == "bl_fat") {
        spec.fat = spec.bridgeless = true;
    } else {
        throw std::invalid_argument("unknown variant '" + std::string(text) + "'");
    }
    return spec;
}

void VariantSpec::validate(Flavor flavor) const {
    if (fat && simple) throw std::invalid_argument("the fat variant cannot be simple");
    if (fat && flavor != Flavor::Odd) throw std::invalid_argument("the fat variant needs the odd flavor");
}

bool VariantSpec::accepts(const Multigraph& graph) const {
    if (simple && !is_simple(graph)) return false;
    if (bridgeless && !is_bridgeless(graph)) return false;
    return true;
}

SliceKey SliceKey::shifted(int dv) const {
    SliceKey k = *this;
    k.v += dv;
    return k;
}

std::string SliceKey::label() const {
    return std::string(flavor_name(flavor)) + "/" + variant.name() + "/g" + std::to_string(g) + "_r" +
           std::to_string(r) + "_v" + std::to_string(v);
}

int slice_degree(const SliceKey& key) {
    if (key.flavor == Flavor::Even) return -(key.v + key.g - 1);
    return 2 * key.g - 2 + key.r - key.v;
}

int max_vertices(int g, int r) {
    if (g < 0 || r < 0 || 2 * g + r < 3) return 0;
    return 2 * g - 2 + r;
}

int max_slice_index(const SliceKey& key) {
    const int vmax = max_vertices(key.g, key.r);
    if (vmax == 0) return 0;
    return key.variant.fat ? vmax + key.g : vmax;
}

Basis::Basis(std::vector<Multigraph> graphs) : graphs_(std::move(graphs)) {
    index_.reserve(graphs_.size());
    for (std::size_t i = 0; i < graphs_.size(); ++i) {
        if (!index_.emplace(graphs_[i], static_cast<int>(i)).second) {
            throw GraphError("basis contains a duplicate graph");
        }
    }
}

int Basis::find(const Multigraph& graph) const {
    auto it = index_.find(graph);
    return it == index_.end() ? -1 : it->second;
}

void sort_by_encoding(std::vector<Multigraph>& graphs, char flavor_char) {
    std::vector<std::string> keys(graphs.size());
    for (std::size_t i = 0; i < graphs.size(); ++i) keys[i] = encode(graphs[i], flavor_char);
    std::vector<std::size_t> order(graphs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<Multigraph> sorted;
    sorted.reserve(graphs.size());
    for (std::size_t i : order) sorted.push_back(std::move(graphs[i]));
    graphs = std::move(sorted);
}

namespace {

std::atomic<int> g_threads{0};

}  // namespace

void set_num_threads(int threads) { g_threads = threads; }

int num_threads() {
    const int t = g_threads.load();
    if (t > 0) return t;
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(num_threads()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t + 1 < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<Multigraph> vertex_splittings(const Multigraph& graph) {
    std::vector<Multigraph> out;
    const int n = graph.num_vertices();
    const int y = n;
    for (int x = 0; x < n; ++x) {
        std::vector<Edge> kept;
        std::map<int, int> neighbours;
        int self = 0;
        for (const Edge& e : graph.edges()) {
            if (e.is_fat()) throw GraphError("vertex_splittings: fat edges unsupported");
            if (e.a != x && e.b != x) {
                kept.push_back(e);
            } else if (e.is_self()) {
                ++self;
            } else {
                ++neighbours[e.a == x ? e.b : e.a];
            }
        }
        std::vector<std::pair<int, int>> nbr(neighbours.begin(), neighbours.end());
        std::vector<int> legs_here;
        for (int k = 0; k < graph.num_legs(); ++k) {
            if (graph.legs()[k] == x) legs_here.push_back(k);
        }
        std::vector<int> moved(nbr.size(), 0);
        // Recursion over neighbour classes, then self-edges, then legs.
        std::function<void(std::size_t, int, int)> choose_nbr = [&](std::size_t i, int at_x, int at_y) {
            if (i < nbr.size()) {
                for (int k = 0; k <= nbr[i].second; ++k) {
                    moved[i] = k;
                    choose_nbr(i + 1, at_x + nbr[i].second - k, at_y + k);
                }
                return;
            }
            for (int xx = 0; xx <= self; ++xx) {
                for (int xy = 0; xx + xy <= self; ++xy) {
                    const int yy = self - xx - xy;
                    const int hx = at_x + 2 * xx + xy;
                    const int hy = at_y + 2 * yy + xy;
                    const int num_legs = static_cast<int>(legs_here.size());
                    for (int mask = 0; mask < (1 << num_legs); ++mask) {
                        const int to_y = __builtin_popcount(static_cast<unsigned>(mask));
                        if (hx + num_legs - to_y < 2 || hy + to_y < 2) continue;
                        std::vector<Edge> edges = kept;
                        for (std::size_t j = 0; j < nbr.size(); ++j) {
                            for (int c = 0; c < nbr[j].second - moved[j]; ++c) edges.emplace_back(x, nbr[j].first);
                            for (int c = 0; c < moved[j]; ++c) edges.emplace_back(y, nbr[j].first);
                        }
                        for (int c = 0; c < xx; ++c) edges.emplace_back(x, x);
                        for (int c = 0; c < xy; ++c) edges.emplace_back(x, y);
                        for (int c = 0; c < yy; ++c) edges.emplace_back(y, y);
                        edges.emplace_back(x, y);
                        std::vector<int> legs = graph.legs();
                        for (int j = 0; j < num_legs; ++j) {
                            if (mask & (1 << j)) legs[legs_here[j]] = y;
                        }
                        out.push_back(
                            canonicalize(Multigraph(n + 1, std::move(edges), std::move(legs))).canonical_graph);
                    }
                }
            }
        };
        choose_nbr(0, 0, 0);
    }
    return out;
}

std::vector<Multigraph> fat_conversions(const Multigraph& graph, int f) {
    std::vector<std::pair<std::pair<int, int>, int>> pairs;
    std::vector<Edge> rest;
    {
        std::map<std::pair<int, int>, int> count;
        for (const Edge& e : graph.edges()) {
            if (!e.is_fat() && !e.is_self()) ++count[{e.lo(), e.hi()}];
        }
        for (const Edge& e : graph.edges()) {
            if (e.is_fat() || e.is_self() || count[{e.lo(), e.hi()}] < 2) rest.push_back(e);
        }
        for (const auto& [p, m] : count) {
            if (m >= 2) pairs.push_back({p, m});
        }
    }
    std::vector<Multigraph> out;
    std::unordered_set<Multigraph, MultigraphHash> seen;
    std::vector<int> take(pairs.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i == pairs.size()) {
            if (left != 0) return;
            std::vector<Edge> edges = rest;
            for (std::size_t j = 0; j < pairs.size(); ++j) {
                const auto [a, b] = pairs[j].first;
                for (int c = 0; c < pairs[j].second - 2 * take[j]; ++c) edges.emplace_back(a, b);
                for (int c = 0; c < take[j]; ++c) edges.emplace_back(a, b, EdgeKind::Fat);
            }
            Multigraph h(graph.num_vertices(), std::move(edges), graph.legs());
            if (has_local_zero(h, Flavor::Odd)) return;
            SignedGraph s = orient_canonical(h, Flavor::Odd);
            if (s.sign == 0) return;
            if (seen.insert(s.graph).second) out.push_back(std::move(s.graph));
            return;
        }
        for (int t = 0; 2 * t <= pairs[i].second && t <= left; ++t) {
            take[i] = t;
            rec(i + 1, left - t);
        }
        take[i] = 0;
    };
    rec(0, f);
    return out;
}

GraphCatalog& GraphCatalog::global() {
    static GraphCatalog catalog;
    return catalog;
}

void GraphCatalog::clear() {
    std::lock_guard<std::mutex> lock(mutex_);
    levels_.clear();
    stored_ = 0;
}

const std::vector<Multigraph>& GraphCatalog::admissible(int g, int r, int v) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto found = levels_.find({g, r, v});
    if (found != levels_.end()) return *found->second;
    static const std::vector<Multigraph> empty;
    if (v < 1 || v > max_vertices(g, r)) return empty;

    int start = v;
    while (start > 1 && levels_.find({g, r, start - 1}) == levels_.end()) --start;
    for (int level = start; level <= v; ++level) {
        auto graphs = std::make_unique<std::vector<Multigraph>>();
        if (level == 1) {
            std::vector<Edge> edges(g, Edge(0, 0));
            graphs->push_back(Multigraph(1, std::move(edges), std::vector<int>(r, 0)));
        } else {
            const std::vector<Multigraph>& below = *levels_.at({g, r, level - 1});
            std::vector<Multigraph>& out = *graphs;
            // The set holds positions in `out`, so graphs are stored once.
            auto hash = [&out](std::uint32_t i) { return MultigraphHash{}(out[i]); };
            auto equal = [&out](std::uint32_t i, std::uint32_t j) { return out[i] == out[j]; };
            std::unordered_set<std::uint32_t, decltype(hash), decltype(equal)> seen(0, hash, equal);
            constexpr std::size_t kChunk = 4096;
            std::vector<std::vector<Multigraph>> produced;
            for (std::size_t base = 0; base < below.size(); base += kChunk) {
                const std::size_t n = std::min(kChunk, below.size() - base);
                produced.assign(n, {});
                parallel_for(n, [&](std::size_t i) { produced[i] = vertex_splittings(below[base + i]); });
                for (auto& batch : produced) {
                    for (Multigraph& h : batch) {
                        out.push_back(std::move(h));
                        if (!seen.insert(static_cast<std::uint32_t>(out.size() - 1)).second) out.pop_back();
                    }
                }
                if (limit_ > 0 && stored_ + out.size() > limit_) {
                    throw ResourceLimitError("graph limit of " + std::to_string(limit_) + " exceeded at g=" +
                                             std::to_string(g) + " r=" + std::to_string(r) + " v=" +
                                             std::to_string(level));
                }
            }
            { const auto release = std::move(seen); }
            out.shrink_to_fit();
            sort_by_encoding(*graphs, 'E');
        }
        stored_ += graphs->size();
        levels_[{g, r, level}] = std::move(graphs);
    }
    return *levels_.at({g, r, v});
}

std::vector<Multigraph> build_basis(const SliceKey& key, GraphCatalog& catalog) {
    key.variant.validate(key.flavor);
    std::vector<Multigraph> out;
    const char fc = flavor_char(key.flavor);
    if (!key.variant.fat) {
        const auto& all = catalog.admissible(key.g, key.r, key.v);
        std::vector<char> keep(all.size(), 0);
        parallel_for(all.size(), [&](std::size_t i) {
            keep[i] = key.variant.accepts(all[i]) && !is_zero_graph(all[i], key.flavor);
        });
        for (std::size_t i = 0; i < all.size(); ++i) {
            if (keep[i]) out.push_back(all[i]);
        }
    } else {
        for (int f = 0; f <= key.v - 1; ++f) {
            const int vertices = key.v - f;
            const auto& all = catalog.admissible(key.g, key.r, vertices);
            std::vector<std::vector<Multigraph>> produced(all.size());
            parallel_for(all.size(), [&](std::size_t i) {
                for (Multigraph& h : fat_conversions(all[i], f)) {
                    if (key.variant.accepts(h)) produced[i].push_back(std::move(h));
                }
            });
            // Distinct normal graphs give distinct fat graphs (expand all fat
            // edges to recover the normal graph), so batches never overlap.
            for (auto& batch : produced) {
                for (Multigraph& h : batch) out.push_back(std::move(h));
            }
        }
    }
    sort_by_encoding(out, fc);
    return out;
}

namespace {

struct ColumnTerms {
    std::vector<std::pair<int, int>> terms;  // (row, value)
};

SparseIntMatrix assemble(int rows, int cols, std::vector<ColumnTerms>& columns) {
    std::vector<Triplet> t;
    for (int c = 0; c < cols; ++c) {
        for (auto [row, value] : columns[c].terms) t.push_back({row, c, value});
    }
    return SparseIntMatrix(rows, cols, std::move(t));
}

[[noreturn]] void lookup_failure(const Multigraph& graph, Flavor flavor, const std::string& where) {
    throw GraphError(where + ": produced graph missing from the target basis: " +
                     encode(graph, flavor_char(flavor)));
}

}  // namespace

SparseIntMatrix build_differential(const SliceKey& key, const Basis& source, const Basis& target,
                                   DiffParts parts) {
    const int cols = static_cast<int>(source.size());
    const int rows = static_cast<int>(target.size());
    std::vector<ColumnTerms> columns(cols);
    parallel_for(source.size(), [&](std::size_t c) {
        const Multigraph& graph = source[c];
        auto record = [&](const SignedGraph& s, int rule) {
            if (s.sign == 0) return;
            const int row = target.find(s.graph);
            if (row < 0) {
                if (key.variant.accepts(s.graph)) lookup_failure(s.graph, key.flavor, "differential");
                return;
            }
            columns[c].terms.emplace_back(row, s.sign * rule);
        };
        for (int k = 0; k < graph.num_edges(); ++k) {
            const Edge& e = graph.edges()[k];
            if (e.is_fat()) {
                if (!parts.fat) continue;
                record(fat_expansion_sign(graph, k), 1);
                continue;
            }
            if (!parts.contraction || e.is_self()) continue;
            Multigraph h = contract_edge(graph, k);
            if (key.variant.simple && !is_simple(h)) continue;
            // Contracting an edge parallel to a fat edge yields a fat self-edge.
            bool fat_self = false;
            for (const Edge& x : h.edges()) fat_self = fat_self || (x.is_fat() && x.is_self());
            if (fat_self || has_local_zero(h, key.flavor)) continue;
            record(orient_canonical(h, key.flavor), contraction_rule_sign(graph, k, key.flavor));
        }
    });
    return assemble(rows, cols, columns);
}

SparseIntMatrix homotopy_h(const Basis& source, const Basis& target) {
    const int cols = static_cast<int>(source.size());
    const int rows = static_cast<int>(target.size());
    std::vector<ColumnTerms> columns(cols);
    parallel_for(source.size(), [&](std::size_t c) {
        const Multigraph& graph = source[c];
        std::map<std::pair<int, int>, int> count;
        for (const Edge& e : graph.edges()) {
            if (!e.is_fat() && !e.is_self()) ++count[{e.lo(), e.hi()}];
        }
        for (const auto& [p, m] : count) {
            if (m < 2) continue;
            const SignedGraph s = fat_merge_sign(graph, p.first, p.second);
            if (s.sign == 0) continue;
            const int row = target.find(s.graph);
            // Merging can create a bridge, so the target must be the full fat basis.
            if (row < 0) lookup_failure(s.graph, Flavor::Odd, "homotopy");
            columns[c].terms.emplace_back(row, s.sign);
        }
    });
    return assemble(rows, cols, columns);
}

int multi_pair_count(const Multigraph& graph) {
    std::map<std::pair<int, int>, std::pair<int, int>> count;  // (normal, fat)
    for (const Edge& e : graph.edges()) {
        if (e.is_self()) continue;
        auto& c = count[{e.lo(), e.hi()}];
        (e.is_fat() ? c.second : c.first) += 1;
    }
    int n = 0;
    for (const auto& [p, c] : count) {
        if (c.second > 0 || c.first >= 2) ++n;
    }
    return n;
}

std::vector<int> variant_projection(Flavor flavor, const Basis& full, const VariantSpec& variant) {
    if (variant.fat) throw std::invalid_argument("variant_projection: fat is not a sub or quotient complex");
    std::vector<int> keep;
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (variant.accepts(full[i]) && !is_zero_graph(full[i], flavor)) keep.push_back(static_cast<int>(i));
    }
    return keep;
}

SparseIntMatrix leg_symmetrizer(Flavor flavor, const Basis& basis, bool antisymmetric) {
    const int n = static_cast<int>(basis.size());
    if (n == 0) return SparseIntMatrix(0, 0);
    const int r = basis[0].num_legs();
    std::vector<std::vector<int>> perms;
    std::vector<int> sigma(r);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        perms.push_back(sigma);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    std::vector<ColumnTerms> columns(n);
    parallel_for(basis.size(), [&](std::size_t c) {
        const Multigraph& graph = basis[c];
        for (const auto& perm : perms) {
            const int chi = antisymmetric ? permutation_sign(perm) : 1;
            std::vector<int> legs(r);
            for (int k = 0; k < r; ++k) legs[perm[k]] = graph.legs()[k];
            const SignedGraph s = orient_canonical(Multigraph(graph.num_vertices(), graph.edges(), legs), flavor);
            if (s.sign == 0) continue;
            const int row = basis.find(s.graph);
            if (row < 0) lookup_failure(s.graph, flavor, "leg permutation");
            columns[c].terms.emplace_back(row, chi * s.sign);
        }
    });
    return assemble(n, n, columns);
}

// ---------------------------------------------------------------------------

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

namespace {

constexpr const char* kFormat = "bgc-slice 1";

std::string meta_text(const SliceKey& key, const std::string& kind, const std::string& extra) {
    std::ostringstream s;
    s << "format=" << kFormat << "\nkind=" << kind << "\nflavor=" << flavor_name(key.flavor)
      << "\nvariant=" << key.variant.name() << "\ng=" << key.g << "\nr=" << key.r << "\nv=" << key.v << '\n'
      << extra;
    return s.str();
}

std::optional<std::string> read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

SliceStore::SliceStore(std::optional<std::filesystem::path> root, GraphCatalog* catalog)
    : root_(std::move(root)), catalog_(catalog ? catalog : &GraphCatalog::global()) {}

std::filesystem::path SliceStore::slice_path(const SliceKey& key, std::string_view ext) const {
    if (!root_) throw std::logic_error("slice store has no cache directory");
    return *root_ / flavor_name(key.flavor) / key.variant.name() /
           ("g" + std::to_string(key.g) + "_r" + std::to_string(key.r) + "_v" + std::to_string(key.v) +
            std::string(ext));
}

std::optional<Basis> SliceStore::load_basis(const SliceKey& key) {
    if (!root_) return std::nullopt;
    const auto meta = read_text(slice_path(key, ".basis.meta"));
    const auto body = read_text(slice_path(key, ".basis"));
    if (!meta || !body) return std::nullopt;
    std::vector<Multigraph> graphs;
    std::istringstream lines(*body);
    std::string line;
    try {
        while (std::getline(lines, line)) {
            if (line.empty()) continue;
            ParsedGraph parsed = parse_graph(line);
            if (parsed.genus != key.g) return std::nullopt;
            graphs.push_back(std::move(parsed.graph));
        }
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (*meta != meta_text(key, "basis", "count=" + std::to_string(graphs.size()) + "\n")) return std::nullopt;
    return Basis(std::move(graphs));
}

void SliceStore::save_basis(const SliceKey& key, const Basis& basis) {
    if (!root_) return;
    std::string body;
    for (const Multigraph& graph : basis.graphs()) {
        body += encode(graph, flavor_char(key.flavor));
        body += '\n';
    }
    write_file_atomic(slice_path(key, ".basis"), body);
    write_file_atomic(slice_path(key, ".basis.meta"),
                      meta_text(key, "basis", "count=" + std::to_string(basis.size()) + "\n"));
}

std::optional<SparseIntMatrix> SliceStore::load_differential(const SliceKey& key, std::size_t rows,
                                                             std::size_t cols) {
    if (!root_) return std::nullopt;
    const auto meta = read_text(slice_path(key, ".dmat.meta"));
    if (!meta) return std::nullopt;
    std::ifstream in(slice_path(key, ".dmat"));
    if (!in) return std::nullopt;
    try {
        SparseIntMatrix m = read_dmat(in);
        if (static_cast<std::size_t>(m.rows()) != rows || static_cast<std::size_t>(m.cols()) != cols) {
            return std::nullopt;
        }
        std::ostringstream extra;
        extra << "rows=" << m.rows() << "\ncols=" << m.cols() << "\nnnz=" << m.nnz() << '\n';
        if (*meta != meta_text(key, "dmat", extra.str())) return std::nullopt;
        return m;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

void SliceStore::save_differential(const SliceKey& key, const SparseIntMatrix& m) {
    if (!root_) return;
    std::ostringstream body;
    write_dmat(body, m);
    write_file_atomic(slice_path(key, ".dmat"), body.str());
    std::ostringstream extra;
    extra << "rows=" << m.rows() << "\ncols=" << m.cols() << "\nnnz=" << m.nnz() << '\n';
    write_file_atomic(slice_path(key, ".dmat.meta"), meta_text(key, "dmat", extra.str()));
}

const Basis& SliceStore::basis(const SliceKey& key) {
    std::lock_guard<std::recursive_mutex> lock(mutex_);
    const std::string id = key.label();
    auto it = bases_.find(id);
    if (it != bases_.end()) return *it->second;
    std::unique_ptr<Basis> made;
    if (key.v < 1 || key.v > max_slice_index(key)) {
        key.variant.validate(key.flavor);
        made = std::make_unique<Basis>();
    } else if (auto loaded = load_basis(key)) {
        made = std::make_unique<Basis>(std::move(*loaded));
    } else {
        made = std::make_unique<Basis>(build_basis(key, *catalog_));
        save_basis(key, *made);
    }
    return *bases_.emplace(id, std::move(made)).first->second;
}

const SparseIntMatrix& SliceStore::differential(const SliceKey& key) {
    std::lock_guard<std::recursive_mutex> lock(mutex_);
    const std::string id = key.label();
    auto it = diffs_.find(id);
    if (it != diffs_.end()) return *it->second;
    const Basis& source = basis(key);
    const Basis& target = basis(key.shifted(-1));
    std::unique_ptr<SparseIntMatrix> made;
    if (source.empty() || target.empty()) {
        made = std::make_unique<SparseIntMatrix>(static_cast<int>(target.size()), static_cast<int>(source.size()));
    } else if (auto loaded = load_differential(key, target.size(), source.size())) {
        made = std::make_unique<SparseIntMatrix>(std::move(*loaded));
    } else {
        made = std::make_unique<SparseIntMatrix>(build_differential(key, source, target));
        save_differential(key, *made);
    }
    return *diffs_.emplace(id, std::move(made)).first->second;
}

}  // namespace bgc
