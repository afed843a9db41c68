#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "bgc/canonical.hpp"
#include "bgc/cohomology.hpp"
#include "bgc/complex.hpp"
#include "oracles.hpp"

using namespace bgc;

namespace {

std::set<std::string> encodings(const std::vector<Multigraph>& graphs) {
    std::set<std::string> out;
    for (const Multigraph& g : graphs) out.insert(encode(g, 'X'));
    return out;
}

// Canonical classes of labeled graphs in one slice, zero graphs removed.
std::set<std::string> brute_basis(const SliceKey& key) {
    std::set<std::string> out;
    const int vmax = max_vertices(key.g, key.r);
    for (int v = 1; v <= vmax; ++v) {
        const int fat = key.variant.fat ? key.v - v : 0;
        if (fat < 0 || (!key.variant.fat && v != key.v)) continue;
        LabeledQuery q;
        q.genus = key.g;
        q.legs = key.r;
        q.vertices = v;
        q.allow_fat = key.variant.fat;
        enumerate_labeled(q, [&](const Multigraph& g) {
            if (g.num_fat_edges() != fat || !is_admissible(g) || !key.variant.accepts(g)) return;
            if (is_zero_graph(g, key.flavor)) return;
            out.insert(encode(canonicalize(g).canonical_graph, 'X'));
        });
    }
    return out;
}

std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("bgc_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_SUITE("complex") {
    TEST_CASE("small bases") {
        GraphCatalog catalog;
        const VariantSpec s_bl = VariantSpec::parse("s_bl");
        CHECK(build_basis({Flavor::Even, s_bl, 3, 0, 3}, catalog).empty());
        const auto k4 = build_basis({Flavor::Even, s_bl, 3, 0, 4}, catalog);
        REQUIRE(k4.size() == 1);
        CHECK(k4[0] == canonicalize(oracle::k4()).canonical_graph);
        CHECK(build_basis({Flavor::Even, {}, 2, 0, 2}, catalog).empty());  // theta and dumbbell vanish
        CHECK(build_basis({Flavor::Odd, {}, 2, 0, 2}, catalog).size() == 1);   // theta
        CHECK(build_basis({Flavor::Even, {}, 1, 1, 1}, catalog).size() == 1);  // tadpole
        CHECK(build_basis({Flavor::Even, VariantSpec::parse("s"), 1, 1, 1}, catalog).empty());
        CHECK(build_basis({Flavor::Odd, {}, 1, 1, 1}, catalog).empty());
    }

    TEST_CASE("bases agree with labeled enumeration") {
        GraphCatalog catalog;
        for (Flavor f : {Flavor::Even, Flavor::Odd}) {
            for (const VariantSpec& variant : std::vector<VariantSpec>{
                     VariantSpec::parse("full"), VariantSpec::parse("bl"), VariantSpec::parse("s"),
                     VariantSpec::parse("s_bl"), VariantSpec::parse("fat"), VariantSpec::parse("fat_bl")}) {
                if (variant.fat && f == Flavor::Even) continue;
                for (const auto& [g, r] : std::vector<std::pair<int, int>>{{2, 0}, {3, 0}, {1, 2}, {2, 1}, {2, 2}}) {
                    SliceKey key{f, variant, g, r, 1};
                    for (int v = 1; v <= max_slice_index(key); ++v) {
                        key.v = v;
                        CAPTURE(key.label());
                        CHECK(encodings(build_basis(key, catalog)) == brute_basis(key));
                    }
                }
            }
        }
    }

    TEST_CASE("every basis graph is admissible and within the vertex bound") {
        GraphCatalog catalog;
        for (const auto& [g, r] : std::vector<std::pair<int, int>>{{3, 1}, {4, 0}, {2, 3}}) {
            SliceKey key{Flavor::Odd, VariantSpec::parse("fat"), g, r, 1};
            for (int w = 1; w <= max_slice_index(key); ++w) {
                key.v = w;
                for (const Multigraph& graph : build_basis(key, catalog)) {
                    CHECK(is_admissible(graph));
                    CHECK(graph.num_vertices() + graph.num_fat_edges() == w);
                    CHECK(graph.num_vertices() <= max_vertices(g, r));
                    CHECK(genus_data(graph).genus == g);
                }
            }
        }
    }

    TEST_CASE("differentials square to zero") {
        SliceStore store;
        for (Flavor f : {Flavor::Even, Flavor::Odd}) {
            for (const VariantSpec& variant : all_variants(f)) {
                for (const auto& [g, r] : std::vector<std::pair<int, int>>{{2, 2}, {3, 1}, {4, 0}}) {
                    SliceKey key{f, variant, g, r, 1};
                    for (int v = 3; v <= max_slice_index(key); ++v) {
                        key.v = v;
                        CAPTURE(key.label());
                        const SparseIntMatrix product =
                            multiply(store.differential(key.shifted(-1)), store.differential(key));
                        CHECK(product.is_zero());
                    }
                }
            }
        }
    }

    TEST_CASE("the two-vertex three-edge graph is a cycle") {
        SliceStore store;
        const SliceKey two{Flavor::Odd, VariantSpec::parse("s_bl"), 3, 0, 4};
        CHECK(store.differential(two).is_zero());
        const SliceKey theta{Flavor::Odd, {}, 2, 0, 2};
        REQUIRE(store.basis(theta).size() == 1);
        CHECK(store.differential(theta).is_zero());
    }

    TEST_CASE("fat-free part of the fat complex is the full complex") {
        GraphCatalog catalog;
        for (const auto& [g, r] : std::vector<std::pair<int, int>>{{2, 1}, {3, 0}, {2, 2}}) {
            for (int v = 1; v <= max_vertices(g, r); ++v) {
                std::vector<Multigraph> fat_free;
                for (const Multigraph& graph : build_basis({Flavor::Odd, VariantSpec::parse("fat"), g, r, v}, catalog)) {
                    if (graph.num_fat_edges() == 0) fat_free.push_back(graph);
                }
                CHECK(encodings(fat_free) == encodings(build_basis({Flavor::Odd, {}, g, r, v}, catalog)));
            }
        }
    }

    TEST_CASE("variants are nested and projections pick the kept graphs") {
        GraphCatalog catalog;
        for (Flavor f : {Flavor::Even, Flavor::Odd}) {
            for (int v = 1; v <= 6; ++v) {
                const Basis full(build_basis({f, {}, 3, 2, v}, catalog));
                for (const char* name : {"bl", "s", "s_bl"}) {
                    const VariantSpec variant = VariantSpec::parse(name);
                    const auto kept = build_basis({f, variant, 3, 2, v}, catalog);
                    const auto positions = variant_projection(f, full, variant);
                    REQUIRE(positions.size() == kept.size());
                    for (std::size_t i = 0; i < kept.size(); ++i) CHECK(full[positions[i]] == kept[i]);
                }
            }
        }
    }

    TEST_CASE("the homotopy has the right shape") {
        SliceStore store;
        SliceKey key{Flavor::Odd, VariantSpec::parse("fat"), 2, 1, 1};
        for (int w = 1; w < max_slice_index(key); ++w) {
            key.v = w;
            const Basis& source = store.basis(key);
            const Basis& target = store.basis(key.shifted(1));
            const SparseIntMatrix h = homotopy_h(source, target);
            CHECK(h.rows() == static_cast<int>(target.size()));
            CHECK(h.cols() == static_cast<int>(source.size()));
            for (const Triplet& t : h.entries()) {
                CHECK(target[t.row].num_fat_edges() == source[t.col].num_fat_edges() + 1);
                CHECK(multi_pair_count(source[t.col]) > 0);
            }
        }
    }

    TEST_CASE("results do not depend on the thread count") {
        auto snapshot = [](int threads) {
            set_num_threads(threads);
            GraphCatalog catalog;
            SliceStore store(std::nullopt, &catalog);
            std::vector<SparseIntMatrix> out;
            SliceKey key{Flavor::Odd, VariantSpec::parse("fat"), 3, 1, 1};
            for (int w = 2; w <= max_slice_index(key); ++w) {
                key.v = w;
                out.push_back(store.differential(key));
            }
            return out;
        };
        const auto one = snapshot(1);
        const auto four = snapshot(4);
        set_num_threads(0);
        CHECK(one == four);
    }

    TEST_CASE("slice cache reload and regeneration") {
        const auto dir = temp_dir("cache");
        const SliceKey key{Flavor::Even, VariantSpec::parse("full"), 3, 1, 4};
        std::vector<Multigraph> basis;
        SparseIntMatrix diff;
        {
            SliceStore store(dir);
            basis = store.basis(key).graphs();
            diff = store.differential(key);
        }
        CHECK(std::filesystem::exists(SliceStore(dir).slice_path(key, ".basis")));
        CHECK(std::filesystem::exists(SliceStore(dir).slice_path(key, ".dmat.meta")));
        {
            SliceStore store(dir);
            CHECK(store.basis(key).graphs() == basis);
            CHECK(store.differential(key) == diff);
        }
        {
            SliceStore probe(dir);
            std::ofstream(probe.slice_path(key, ".basis.meta")) << "format=garbage\n";
            std::ofstream(probe.slice_path(key, ".dmat")) << "1 1 1\n0 0 7\n";
        }
        {
            SliceStore store(dir);
            CHECK(store.basis(key).graphs() == basis);
            CHECK(store.differential(key) == diff);
        }
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("leg symmetrizer") {
        SliceStore store;
        const SliceKey key{Flavor::Even, VariantSpec::parse("s"), 2, 2, 2};
        const Basis& basis = store.basis(key);
        const SparseIntMatrix sym = leg_symmetrizer(Flavor::Even, basis, false);
        const SparseIntMatrix anti = leg_symmetrizer(Flavor::Even, basis, true);
        // Symmetrizer and antisymmetrizer are orthogonal and sum to twice the identity (two legs).
        CHECK(multiply(sym, anti).is_zero());
        CHECK(add(sym, anti) == add(identity_matrix(static_cast<int>(basis.size())),
                                    identity_matrix(static_cast<int>(basis.size()))));
    }
}
