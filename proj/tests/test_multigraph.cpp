#include <doctest.h>

#include <set>

#include "bgc/canonical.hpp"
#include "bgc/complex.hpp"
#include "bgc/multigraph.hpp"
#include "oracles.hpp"

using namespace bgc;

TEST_SUITE("multigraph") {
    TEST_CASE("valence counts half-edges, legs and fat edges twice") {
        CHECK(valence(Multigraph(1, {}, {}), 0) == 0);
        CHECK(valence(oracle::theta(), 0) == 3);
        CHECK(valence(oracle::theta(), 1) == 3);
        const Multigraph fat_leg(2, {Edge(0, 1, EdgeKind::Fat)}, {0, 1});
        CHECK(valence(fat_leg, 0) == 3);
        CHECK(valence(oracle::tadpole_leg(), 0) == 3);
        CHECK_THROWS_AS((void)valence(oracle::theta(), 2), GraphError);
    }

    TEST_CASE("genus is loops plus fat edges") {
        const Multigraph fat_leg(2, {Edge(0, 1, EdgeKind::Fat)}, {0, 1});
        const GenusData d = genus_data(fat_leg);
        CHECK(d.loops == 0);
        CHECK(d.fat_count == 1);
        CHECK(d.genus == 1);
        CHECK(genus_data(oracle::k4()).genus == 3);
        CHECK(genus_data(oracle::k4()).fat_count == 0);
    }

    TEST_CASE("bridges") {
        CHECK(find_bridges(oracle::k4()).empty());
        CHECK(find_bridges(oracle::theta()).empty());
        const Multigraph two_triangles =
            oracle::make(6, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {4, 5}, {3, 5}});
        CHECK(find_bridges(two_triangles) == std::vector<int>{3});
        CHECK_FALSE(is_bridgeless(two_triangles));
        CHECK(is_bridgeless(Multigraph(1, {}, {})));
        CHECK(is_bridgeless(oracle::make(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}})));
        CHECK_THROWS_AS((void)find_bridges(oracle::make(2, {})), GraphError);
    }

    TEST_CASE("bridges agree with edge removal on catalog graphs") {
        GraphCatalog catalog;
        for (int v = 1; v <= 4; ++v) {
            for (const Multigraph& g : catalog.admissible(2, 2, v)) CHECK(find_bridges(g) == oracle::bridges(g));
            for (const Multigraph& g : catalog.admissible(3, 1, v)) CHECK(find_bridges(g) == oracle::bridges(g));
        }
    }

    TEST_CASE("block tree of bridgeless components") {
        CHECK(bridgeless_components(oracle::k4()).nodes.size() == 1);
        CHECK(bridgeless_components(oracle::k4()).tree_edges.empty());

        const Multigraph two = oracle::make(6, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {4, 5}, {3, 5}});
        const BlockTree t2 = bridgeless_components(two);
        CHECK(t2.nodes.size() == 2);
        REQUIRE(t2.tree_edges.size() == 1);
        CHECK(t2.tree_edges[0].bridge == 3);

        const Multigraph chain = oracle::make(
            9, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {4, 5}, {3, 5}, {5, 6}, {6, 7}, {7, 8}, {6, 8}});
        const BlockTree t3 = bridgeless_components(chain);
        CHECK(t3.nodes.size() == 3);
        CHECK(t3.tree_edges.size() == 2);
        // Path shape: exactly one node of tree degree 2.
        std::vector<int> deg(3, 0);
        for (const auto& e : t3.tree_edges) {
            ++deg[e.node_a];
            ++deg[e.node_b];
        }
        std::sort(deg.begin(), deg.end());
        CHECK(deg == std::vector<int>{1, 1, 2});
        // Re-gluing: component edges plus bridges cover every edge once.
        std::multiset<int> covered;
        for (const auto& n : t3.nodes) covered.insert(n.edges.begin(), n.edges.end());
        for (const auto& e : t3.tree_edges) covered.insert(e.bridge);
        CHECK(covered.size() == static_cast<std::size_t>(chain.num_edges()));
        CHECK(std::set<int>(covered.begin(), covered.end()).size() == covered.size());
    }

    TEST_CASE("block tree sizes match bridge counts on catalog graphs") {
        GraphCatalog catalog;
        for (int v = 1; v <= 5; ++v) {
            for (const Multigraph& g : catalog.admissible(3, 1, v)) {
                const BlockTree t = bridgeless_components(g);
                CHECK(t.tree_edges.size() == find_bridges(g).size());
                CHECK((t.nodes.size() == 1) == is_bridgeless(g));
            }
        }
    }

    TEST_CASE("contraction") {
        const Multigraph tri = oracle::make(3, {{0, 1}, {1, 2}, {0, 2}});
        const Multigraph c = contract_edge(tri, 0);
        CHECK(c.num_vertices() == 2);
        CHECK(c.num_edges() == 2);
        CHECK(c.edges()[0].lo() == 0);
        CHECK(c.edges()[0].hi() == 1);
        CHECK(c.edges()[1].lo() == 0);
        CHECK(c.edges()[1].hi() == 1);

        const Multigraph t = contract_edge(oracle::theta(), 1);
        CHECK(t.num_vertices() == 1);
        CHECK(t.num_self_edges() == 2);

        CHECK_THROWS_AS((void)contract_edge(oracle::tadpole_leg(), 0), GraphError);
        const Multigraph fat_leg(2, {Edge(0, 1, EdgeKind::Fat)}, {0, 1});
        CHECK_THROWS_AS((void)contract_edge(fat_leg, 0), GraphError);
    }

    TEST_CASE("contraction preserves connectivity, genus and bridgelessness") {
        GraphCatalog catalog;
        for (int v = 2; v <= 6; ++v) {
            for (const Multigraph& g : catalog.admissible(4, 0, v)) {
                for (int e = 0; e < g.num_edges(); ++e) {
                    if (g.edges()[e].is_self()) continue;
                    const Multigraph h = contract_edge(g, e);
                    CHECK(is_connected(h));
                    CHECK(genus_data(h).genus == genus_data(g).genus);
                    CHECK(h.num_vertices() == g.num_vertices() - 1);
                    CHECK(h.num_normal_edges() == g.num_normal_edges() - 1);
                    if (is_bridgeless(g)) CHECK(is_bridgeless(h));
                }
            }
        }
    }

    TEST_CASE("fat expansion") {
        const Multigraph fat_leg(2, {Edge(0, 1, EdgeKind::Fat)}, {0, 1});
        const Multigraph e = expand_fat_edge(fat_leg, 0);
        CHECK(e.num_fat_edges() == 0);
        CHECK(e.num_normal_edges() == 2);
        CHECK(e.legs() == fat_leg.legs());
        CHECK(genus_data(e).genus == genus_data(fat_leg).genus);

        const Multigraph two_fat(2, {Edge(0, 1, EdgeKind::Fat), Edge(0, 1, EdgeKind::Fat)}, {0, 1});
        const Multigraph once = expand_fat_edge(two_fat, 0);
        CHECK(genus_data(once).fat_count == 1);
        CHECK(genus_data(once).loops == genus_data(two_fat).loops + 1);
        CHECK(genus_data(once).genus == genus_data(two_fat).genus);
        CHECK_THROWS_AS((void)expand_fat_edge(oracle::theta(), 0), GraphError);
    }

    TEST_CASE("labeled enumeration") {
        auto classes = [](const LabeledQuery& q, bool simple_only) {
            std::set<std::string> out;
            enumerate_labeled(q, [&](const Multigraph& g) {
                if (simple_only && !is_simple(g)) return;
                out.insert(encode(canonicalize(g).canonical_graph, 'E'));
            });
            return out;
        };
        LabeledQuery k4q;
        k4q.genus = 3;
        k4q.vertices = 4;
        const auto k4s = classes(k4q, true);
        REQUIRE(k4s.size() == 1);
        CHECK(*k4s.begin() == encode(canonicalize(oracle::k4()).canonical_graph, 'E'));

        LabeledQuery tad;
        tad.genus = 1;
        tad.vertices = 1;
        CHECK(classes(tad, false).empty());

        LabeledQuery two;
        two.genus = 2;
        two.vertices = 2;
        const auto g2 = classes(two, false);
        const Multigraph dumbbell = oracle::make(2, {{0, 0}, {0, 1}, {1, 1}});
        CHECK(g2 == std::set<std::string>{encode(canonicalize(oracle::theta()).canonical_graph, 'E'),
                                          encode(canonicalize(dumbbell).canonical_graph, 'E')});
    }

    TEST_CASE("handshake identity and valence bound on enumerated graphs") {
        for (int v = 1; v <= 4; ++v) {
            LabeledQuery q;
            q.genus = 2;
            q.legs = 1;
            q.vertices = v;
            q.allow_fat = true;
            enumerate_labeled(q, [&](const Multigraph& g) {
                int total = 0;
                for (int x = 0; x < g.num_vertices(); ++x) {
                    total += valence(g, x);
                    CHECK(valence(g, x) >= 3);
                }
                CHECK(total == 2 * g.num_normal_edges() + g.num_legs() + 4 * g.num_fat_edges());
                CHECK(total >= 3 * g.num_vertices());
                CHECK(is_connected(g));
            });
        }
        CHECK(max_vertices(4, 0) == 6);
    }

    TEST_CASE("encoding round trip and parse errors") {
        const Multigraph g(3, {Edge(0, 1), Edge(1, 2, EdgeKind::Fat), Edge(0, 2), Edge(0, 2)}, {2, 0});
        const std::string line = encode(g, 'O');
        CHECK(line == "O g=3 r=2 v=3 legs=2,0 edges=0-1,0-2,0-2,1=2");
        const ParsedGraph p = parse_graph(line);
        CHECK(p.flavor_char == 'O');
        CHECK(p.genus == 3);
        CHECK(encode(p.graph, 'O') == line);
        CHECK(encode(Multigraph(1, {Edge(0, 0)}, {0}), 'E') == "E g=1 r=1 v=1 legs=0 edges=0-0");
        try {
            (void)parse_graph("E g=2 r=0 v=2 legs= edges=0-1,0-1,0-7");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.position() > 20);
        }
        CHECK_THROWS_AS((void)parse_graph("X g=0"), ParseError);
        CHECK_THROWS_AS((void)parse_graph("E g=5 r=0 v=2 legs= edges=0-1,0-1,0-1"), ParseError);
    }
}
