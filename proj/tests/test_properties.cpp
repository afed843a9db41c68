#include <doctest.h>

#include <map>
#include <random>

#include "bgc/canonical.hpp"
#include "bgc/cohomology.hpp"
#include "oracles.hpp"

using namespace bgc;

namespace {

std::vector<Multigraph> sample_graphs() {
    GraphCatalog catalog;
    std::vector<Multigraph> out;
    for (const auto& [g, r] : std::vector<std::pair<int, int>>{{3, 0}, {3, 1}, {2, 2}, {4, 0}, {2, 3}}) {
        for (int v = 1; v <= max_vertices(g, r); ++v) {
            const auto& level = catalog.admissible(g, r, v);
            for (std::size_t i = 0; i < level.size(); i += 1 + level.size() / 12) out.push_back(level[i]);
        }
    }
    return out;
}

Multigraph shuffled(const Multigraph& g, std::mt19937& rng) {
    const auto vp = oracle::random_perm(g.num_vertices(), rng);
    std::vector<Edge> edges;
    for (const Edge& e : g.edges()) {
        int a = vp[e.a], b = vp[e.b];
        if (rng() % 2 != 0) std::swap(a, b);
        edges.emplace_back(a, b, e.kind);
    }
    std::shuffle(edges.begin(), edges.end(), rng);
    std::vector<int> legs;
    for (int leg : g.legs()) legs.push_back(vp[leg]);
    return Multigraph(g.num_vertices(), std::move(edges), std::move(legs));
}

}  // namespace

TEST_SUITE("properties") {
    TEST_CASE("canonical forms are invariant under ten thousand random relabelings") {
        std::mt19937 rng(20240607);
        const auto graphs = sample_graphs();
        REQUIRE_FALSE(graphs.empty());
        int failures = 0;
        for (int i = 0; i < 10000; ++i) {
            const Multigraph& g = graphs[rng() % graphs.size()];
            const Multigraph h = shuffled(g, rng);
            if (canonicalize(h).canonical_graph != canonicalize(g).canonical_graph) ++failures;
            for (Flavor f : {Flavor::Even, Flavor::Odd}) {
                if (is_zero_graph(h, f) != is_zero_graph(g, f)) ++failures;
                if (std::abs(orient_canonical(h, f).sign) != std::abs(orient_canonical(g, f).sign)) ++failures;
            }
        }
        CHECK(failures == 0);
    }

    TEST_CASE("labeled counts times automorphisms give the symmetric group orbit sizes") {
        for (const auto& [g, r, v] : std::vector<std::tuple<int, int, int>>{{3, 0, 4}, {3, 1, 5}, {2, 2, 4}, {4, 0, 5}}) {
            LabeledQuery q;
            q.genus = g;
            q.legs = r;
            q.vertices = v;
            std::map<std::string, std::pair<long long, Multigraph>> classes;
            enumerate_labeled(q, [&](const Multigraph& graph) {
                if (!is_admissible(graph)) return;
                auto it = classes.try_emplace(encode(canonicalize(graph).canonical_graph, 'X'), 0, graph).first;
                ++it->second.first;
            });
            long long factorial = 1;
            for (int i = 2; i <= v; ++i) factorial *= i;
            for (const auto& [key, entry] : classes) {
                const Multigraph& graph = entry.second;
                long long multiplicities = 1;
                std::map<std::tuple<int, int, int>, int> mult;
                for (const Edge& e : graph.edges()) ++mult[{static_cast<int>(e.kind), e.lo(), e.hi()}];
                for (const auto& [cls, m] : mult) {
                    for (int i = 2; i <= m; ++i) multiplicities *= i;
                }
                CHECK(entry.first * static_cast<long long>(automorphism_edge_actions(graph).size()) ==
                      (factorial * multiplicities) << graph.num_self_edges());
            }
            GraphCatalog catalog;
            CHECK(classes.size() == catalog.admissible(g, r, v).size());
        }
    }

    TEST_CASE("orientation signs are multiplicative") {
        std::mt19937 rng(8);
        for (const Multigraph& g : sample_graphs()) {
            const auto actions = automorphism_edge_actions(g);
            for (int t = 0; t < 4; ++t) {
                const auto& a = actions[rng() % actions.size()];
                const auto& b = actions[rng() % actions.size()];
                for (Flavor f : {Flavor::Even, Flavor::Odd}) CHECK(iso_sign(compose(a, b), f) == iso_sign(a, f) * iso_sign(b, f));
            }
        }
    }

    TEST_CASE("zero detection agrees with the brute-force sign search") {
        for (const Multigraph& g : sample_graphs()) {
            if (g.num_edges() > 7 || g.num_vertices() > 5) continue;
            CHECK(is_zero_graph(g, Flavor::Even) == oracle::is_zero(g, false));
            CHECK(is_zero_graph(g, Flavor::Odd) == oracle::is_zero(g, true));
        }
    }

    TEST_CASE("Euler characteristic identity") {
        SliceStore store;
        for (Flavor f : {Flavor::Even, Flavor::Odd}) {
            for (int r = 0; r <= 3; ++r) {
                const CohomTable t = cohomology_dims(store, f, VariantSpec::parse("full"), r, 1, 4);
                for (int g = 1; g <= 4; ++g) CHECK(t.euler_holds(g));
            }
        }
    }

    TEST_CASE("tables are identical on one and four threads") {
        auto table = [](int threads) {
            set_num_threads(threads);
            GraphCatalog catalog;
            SliceStore store(std::nullopt, &catalog);
            return table_csv(cohomology_dims(store, Flavor::Odd, VariantSpec::parse("fat"), 2, 1, 4));
        };
        const std::string one = table(1);
        const std::string four = table(4);
        set_num_threads(0);
        CHECK(one == four);
    }
}
