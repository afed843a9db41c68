#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "bgc/linalg.hpp"
#include "bgc/multigraph.hpp"
#include "bgc/orientation.hpp"

namespace bgc {

struct VariantSpec {
    bool bridgeless = false;
    bool simple = false;
    bool fat = false;

    /// One of full, bl, s, s_bl, fat, fat_bl.
    [[nodiscard]] std::string name() const;
    [[nodiscard]] static VariantSpec parse(std::string_view text);
    /// Throws std::invalid_argument for fat+simple or fat with Even.
    void validate(Flavor flavor) const;
    /// Bridge and simplicity filters only (no zero test).
    [[nodiscard]] bool accepts(const Multigraph& graph) const;

    friend bool operator==(const VariantSpec&, const VariantSpec&) = default;
};

/// One bidegree. For the fat variant `v` is the slice index w = #vertices +
/// #fat edges; both d_c and d_fat lower it by one.
struct SliceKey {
    Flavor flavor = Flavor::Even;
    VariantSpec variant;
    int g = 0;
    int r = 0;
    int v = 1;

    [[nodiscard]] SliceKey shifted(int dv) const;
    [[nodiscard]] std::string label() const;
};

[[nodiscard]] int slice_degree(const SliceKey& key);
/// Largest slice index that can be nonempty.
[[nodiscard]] int max_slice_index(const SliceKey& key);
/// Largest vertex count of an admissible graph, 0 if there is none.
[[nodiscard]] int max_vertices(int g, int r);

/// Sorted canonical graphs with a lookup index.
class Basis {
public:
    Basis() = default;
    explicit Basis(std::vector<Multigraph> graphs);

    [[nodiscard]] std::size_t size() const { return graphs_.size(); }
    [[nodiscard]] bool empty() const { return graphs_.empty(); }
    [[nodiscard]] const std::vector<Multigraph>& graphs() const { return graphs_; }
    [[nodiscard]] const Multigraph& operator[](std::size_t i) const { return graphs_[i]; }
    /// Position of a canonical graph, or -1.
    [[nodiscard]] int find(const Multigraph& graph) const;

private:
    std::vector<Multigraph> graphs_;
    std::unordered_map<Multigraph, int, MultigraphHash> index_;
};

/// Sorts graphs by their text encoding.
void sort_by_encoding(std::vector<Multigraph>& graphs, char flavor_char);

void set_num_threads(int threads);
[[nodiscard]] int num_threads();
/// Runs body(i) for i in [0, n) on the worker threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Thrown when an enumeration would exceed the configured graph limit.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Memoized canonical admissible normal-edge graphs of each (g, r, v),
/// including graphs that vanish in some flavor. Produced by vertex splitting.
class GraphCatalog {
public:
    const std::vector<Multigraph>& admissible(int g, int r, int v);
    void clear();
    /// Upper bound on graphs held at once; 0 means unlimited.
    void set_limit(std::size_t max_graphs) { limit_ = max_graphs; }
    [[nodiscard]] std::size_t stored() const { return stored_; }
    static GraphCatalog& global();

private:
    std::mutex mutex_;
    std::size_t limit_ = 0;
    std::size_t stored_ = 0;
    std::map<std::tuple<int, int, int>, std::unique_ptr<std::vector<Multigraph>>> levels_;
};

/// Every vertex splitting of `graph` into two joined vertices with all
/// valences >= 3, canonicalized (duplicates possible).
[[nodiscard]] std::vector<Multigraph> vertex_splittings(const Multigraph& graph);

/// All canonical fat graphs obtained from `graph` by merging f pairs of
/// parallel normal edges into fat edges (zero graphs dropped).
[[nodiscard]] std::vector<Multigraph> fat_conversions(const Multigraph& graph, int f);

[[nodiscard]] std::vector<Multigraph> build_basis(const SliceKey& key,
                                                  GraphCatalog& catalog = GraphCatalog::global());

struct DiffParts {
    bool contraction = true;
    bool fat = true;
};

/// Matrix of d from `source` (slice key) to `target` (slice key.v - 1):
/// rows index the target, columns the source.
[[nodiscard]] SparseIntMatrix build_differential(const SliceKey& key, const Basis& source,
                                                 const Basis& target, DiffParts parts = {});

/// The homotopy h from slice w to slice w + 1 of the fat variant (not the
/// bridgeless one: merging a parallel pair can create a bridge).
[[nodiscard]] SparseIntMatrix homotopy_h(const Basis& source, const Basis& target);

/// Number of vertex pairs joined by a fat edge or by several normal edges.
[[nodiscard]] int multi_pair_count(const Multigraph& graph);

/// Positions in `full` of the graphs kept by `variant` (which must not be fat).
[[nodiscard]] std::vector<int> variant_projection(Flavor flavor, const Basis& full,
                                                  const VariantSpec& variant);

/// Matrix of sum over leg permutations sigma of chi(sigma) * sigma, with chi
/// trivial or the sign character.
[[nodiscard]] SparseIntMatrix leg_symmetrizer(Flavor flavor, const Basis& basis, bool antisymmetric);

/// Basis and differential cache, optionally backed by slice files under
/// <root>/<flavor>/<variant>/.
class SliceStore {
public:
    explicit SliceStore(std::optional<std::filesystem::path> root = std::nullopt,
                        GraphCatalog* catalog = nullptr);

    const Basis& basis(const SliceKey& key);
    /// d from key.v to key.v - 1.
    const SparseIntMatrix& differential(const SliceKey& key);

    [[nodiscard]] const std::optional<std::filesystem::path>& root() const { return root_; }
    [[nodiscard]] std::filesystem::path slice_path(const SliceKey& key, std::string_view ext) const;

private:
    std::optional<Basis> load_basis(const SliceKey& key);
    std::optional<SparseIntMatrix> load_differential(const SliceKey& key, std::size_t rows,
                                                     std::size_t cols);
    void save_basis(const SliceKey& key, const Basis& basis);
    void save_differential(const SliceKey& key, const SparseIntMatrix& m);

    std::optional<std::filesystem::path> root_;
    GraphCatalog* catalog_;
    std::recursive_mutex mutex_;
    std::map<std::string, std::unique_ptr<Basis>> bases_;
    std::map<std::string, std::unique_ptr<SparseIntMatrix>> diffs_;
};

/// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace bgc
