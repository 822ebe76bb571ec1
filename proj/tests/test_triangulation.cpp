#include <doctest.h>

#include <algorithm>
#include <map>
#include <numbers>
#include <set>

#include "cuspforge/triangulation.hpp"
#include "test_support.hpp"

using namespace cuspforge;

namespace {

// Walks every wedge slot through both faces containing the edge; counts orbit sizes.
std::multiset<int> brute_edge_indices(const Triangulation& T) {
    std::set<std::tuple<int, int, int>> seen;
    std::multiset<int> sizes;
    for (int t = 0; t < T.size(); ++t)
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
                if (seen.count({t, a, b})) continue;
                std::vector<std::tuple<int, int, int>> stack{{t, a, b}};
                seen.insert({t, a, b});
                int count = 0;
                while (!stack.empty()) {
                    auto [u, x, y] = stack.back();
                    stack.pop_back();
                    ++count;
                    for (int f = 0; f < 4; ++f) {
                        if (f == x || f == y || !T.is_glued(u, f)) continue;
                        const auto& g = *T.gluing(u, f);
                        int p = g.perm[x], q = g.perm[y];
                        std::tuple<int, int, int> nxt{g.tet, std::min(p, q), std::max(p, q)};
                        if (seen.insert(nxt).second) stack.push_back(nxt);
                    }
                }
                sizes.insert(count);
            }
    return sizes;
}

std::multiset<int> class_indices(const Triangulation& T) {
    std::multiset<int> s;
    for (const auto& c : edge_classes(T).classes) s.insert(c.index);
    return s;
}

}  // namespace

TEST_SUITE("triangulation_core") {

TEST_CASE("perm4 basics") {
    auto p = Perm4::from_string("1302");
    CHECK(p[0] == 1);
    CHECK(p.inverse().str() == "2031");
    CHECK((p * p.inverse()) == Perm4::identity());
    CHECK(p.is_odd());
    CHECK_FALSE(Perm4::identity().is_odd());
    CHECK(Perm4::all().size() == 24);
    CHECK(Perm4::all()[p.index()] == p);
    CHECK_THROWS_AS(Perm4::from_string("0012"), std::invalid_argument);
    CHECK_THROWS_AS(Perm4::from_string("012"), std::invalid_argument);
}

TEST_CASE("parse fixtures") {
    auto d = cftest::dbl();
    CHECK(d.size() == 2);
    for (int f = 0; f < 4; ++f) {
        REQUIRE(d.is_glued(0, f));
        CHECK(d.gluing(0, f)->tet == 1);
        CHECK(d.gluing(0, f)->perm == Perm4::identity());
    }
    auto g = cftest::fig8();
    CHECK(g.size() == 2);
    CHECK(g.gluing(0, 0)->perm.str() == "1302");
}

TEST_CASE("parse errors carry line and column") {
    try {
        parse_triangulation("itri 1\nntet 1\ntet 0 0:1:0023 - - -\n");
        FAIL("expected error");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(e.column > 1);
    }
    CHECK_THROWS_AS(parse_triangulation("itri 1\nntet 2\ntet 0 - - - -\ntet 0 - - - -\n"), ParseError);
    CHECK_THROWS_AS(parse_triangulation("itri 2\nntet 1\n"), ParseError);
    CHECK_THROWS_AS(parse_triangulation("itri 1\nntet 1\ntet 0 0:2:0123 - - -\n"), ParseError);  // face byte
    CHECK_THROWS_AS(parse_triangulation("itri 1\nntet 2\ntet 0 - - - -\n"), ParseError);            // missing tet
}

TEST_CASE("self-gluing parses, validate flags it") {
    auto T = parse_triangulation("itri 1\nntet 1\n# comment\n\ntet 0 0:1:1023 0:0:1023 - -\n");
    CHECK(T.size() == 1);
    auto r = validate(T);
    CHECK_FALSE(r.ok);
    bool self = std::any_of(r.violations.begin(), r.violations.end(), [](const Violation& v) { return v.kind == "self-gluing"; });
    CHECK(self);
}

TEST_CASE("serialize round trip is canonical") {
    for (auto T : {cftest::dbl(), cftest::fig8()}) {
        auto s = serialize(T);
        CHECK(parse_triangulation(s) == T);
        CHECK(serialize(parse_triangulation(s)) == s);
    }
    CHECK(serialize(cftest::fig8()) == cftest::read_file(cftest::fixture_path("fig8.itri")));
}

TEST_CASE("validate fixtures") {
    auto d = validate(cftest::dbl());
    CHECK(d.ok);
    CHECK(d.orientable);
    CHECK(orientable_bruteforce(cftest::dbl()));
    auto g = validate(cftest::fig8());
    CHECK(g.ok);
    CHECK(g.orientable);
    CHECK(orientable_bruteforce(cftest::fig8()));
}

TEST_CASE("validate reports a missing inverse entry") {
    auto T = cftest::dbl();
    T.set(1, 2, std::nullopt);
    auto r = validate(T);
    CHECK_FALSE(r.ok);
    bool found = false;
    for (const auto& v : r.violations)
        if (v.kind == "involution" && v.tet == 1 && v.face == 2) found = true;
    CHECK(found);
}

TEST_CASE("validate: connectivity and orientability negative controls") {
    Triangulation T(4);
    T.join(0, 0, 1, Perm4::identity());
    T.join(0, 1, 1, Perm4::identity());
    T.join(0, 2, 1, Perm4::identity());
    T.join(0, 3, 1, Perm4::identity());
    T.join(2, 0, 3, Perm4::identity());
    T.join(2, 1, 3, Perm4::identity());
    T.join(2, 2, 3, Perm4::identity());
    T.join(2, 3, 3, Perm4::identity());
    auto r = validate(T);
    CHECK_FALSE(r.ok);
    CHECK(r.violations.front().kind == "connectivity");

    Triangulation N(2);  // one odd gluing among even ones: no consistent signs
    N.join(0, 0, 1, Perm4::identity());
    N.join(0, 1, 1, Perm4::identity());
    N.join(0, 2, 1, Perm4::identity());
    N.join(0, 3, 1, Perm4::from_string("1023"));
    auto rn = validate(N);
    CHECK(rn.ok);
    CHECK_FALSE(rn.orientable);
    CHECK_FALSE(orientable_bruteforce(N));
}

TEST_CASE("edge classes of fixtures") {
    auto d = edge_classes(cftest::dbl());
    CHECK(d.classes.size() == 6);
    for (const auto& c : d.classes) CHECK(c.index == 2);
    auto g = edge_classes(cftest::fig8());
    CHECK(g.classes.size() == 2);
    for (const auto& c : g.classes) {
        CHECK(c.index == 6);
        CHECK(c.angle_sum() == doctest::Approx(2 * std::numbers::pi));
    }
    CHECK(class_indices(cftest::fig8()) == brute_edge_indices(cftest::fig8()));
    CHECK(class_indices(cftest::dbl()) == brute_edge_indices(cftest::dbl()));
}

TEST_CASE("edge slot conservation and class numbering") {
    for (auto T : {cftest::dbl(), cftest::fig8()}) {
        auto ec = edge_classes(T);
        int total = 0;
        EdgeSlot prev{-1, -1, -1};
        for (const auto& c : ec.classes) {
            total += c.index;
            CHECK(std::is_sorted(c.members.begin(), c.members.end()));
            CHECK(prev < c.members.front());
            prev = c.members.front();
        }
        CHECK(total == 6 * T.size());
    }
}

TEST_CASE("edge orientation is carried consistently through gluings") {
    auto T = cftest::fig8();
    auto ec = edge_classes(T);
    for (int t = 0; t < T.size(); ++t)
        for (int f = 0; f < 4; ++f) {
            const auto& g = *T.gluing(t, f);
            for (int e = 0; e < 6; ++e) {
                int a = kEdgeVerts[e][0], b = kEdgeVerts[e][1];
                if (a == f || b == f) continue;
                int s = ec.start_vertex[6 * t + e];
                int e2 = edge_index(g.perm[a], g.perm[b]);
                CHECK(ec.start_vertex[6 * g.tet + e2] == g.perm[s]);
            }
        }
}

TEST_CASE("curvature predicate") {
    auto g = is_negatively_curved(cftest::fig8());
    CHECK(g.negatively_curved);
    CHECK(g.singular.empty());
    auto d = is_negatively_curved(cftest::dbl());
    CHECK_FALSE(d.negatively_curved);
    CHECK(d.singular.empty());
}

TEST_CASE("cusp classes") {
    auto d = cusp_classes(cftest::dbl());
    CHECK(d.size() == 4);
    for (const auto& c : d) CHECK(c.corners.size() == 2);
    auto g = cusp_classes(cftest::fig8());
    CHECK(g.size() == 1);
    CHECK(g[0].corners.size() == 8);
}

TEST_CASE("unique common simplex check") {
    auto d = unique_common_simplex_check(cftest::dbl());
    CHECK_FALSE(d.ok);
    REQUIRE(d.violation.has_value());
    CHECK(*d.violation == std::make_pair(0, 1));
    CHECK_FALSE(unique_common_simplex_check(cftest::fig8()).ok);

    // A chain of two tets glued along one face is fine.
    Triangulation C(2);
    C.join(0, 3, 1, Perm4::identity());
    CHECK(unique_common_simplex_check(C).ok);
}

TEST_CASE("dual graph") {
    auto g = dual_graph(cftest::dbl());
    CHECK(g.nodes == 2);
    CHECK(g.edges.size() == 4);
    auto h = dual_graph(cftest::fig8());
    CHECK(h.nodes == 2);
    CHECK(h.edges.size() == 4);
    for (const auto& e : h.edges) CHECK(e.tet < e.tet2);
}

TEST_CASE("involution closure") {
    for (auto T : {cftest::dbl(), cftest::fig8()})
        for (int t = 0; t < T.size(); ++t)
            for (int f = 0; f < 4; ++f) {
                auto p = T.partner(t, f);
                CHECK(T.partner(p.tet, p.face) == FaceSlot{t, f});
            }
}

TEST_CASE("isomorphism test") {
    auto g = cftest::fig8();
    Triangulation r(2);  // swap tet labels
    for (int t = 0; t < 2; ++t)
        for (int f = 0; f < 4; ++f) r.set(1 - t, f, Gluing{1 - g.gluing(t, f)->tet, g.gluing(t, f)->perm});
    CHECK(isomorphic(g, r));
    CHECK_FALSE(isomorphic(g, cftest::dbl()));
}

TEST_CASE("hash is stable") {
    CHECK(triangulation_hash(cftest::fig8()) == triangulation_hash(cftest::fig8()));
    CHECK(triangulation_hash(cftest::fig8()) != triangulation_hash(cftest::dbl()));
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(hex64(0xabcULL) == "0000000000000abc");
}

}
