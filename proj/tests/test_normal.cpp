#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "cuspforge/normal.hpp"
#include "test_support.hpp"

using namespace cuspforge;

namespace {

// Arc matching checked straight from the gluings, without the matrix.
bool matches_directly(const Triangulation& T, const NormalCoordinates& x) {
    static const int fam[4][4] = {{-1, 0, 1, 2}, {0, -1, 2, 1}, {1, 2, -1, 0}, {2, 1, 0, -1}};
    for (int t = 0; t < T.size(); ++t)
        for (int f = 0; f < 4; ++f) {
            const auto& g = *T.gluing(t, f);
            for (int v = 0; v < 4; ++v) {
                if (v == f) continue;
                int here = x.tri(t, v) + x.quad(t, fam[f][v]);
                int w = g.perm[v], f2 = g.perm[f];
                int there = x.tri(g.tet, w) + x.quad(g.tet, fam[f2][w]);
                if (here != there) return false;
            }
        }
    return true;
}

bool admissible_directly(const NormalCoordinates& x) {
    for (int t = 0; t < x.tets(); ++t) {
        int used = 0;
        for (int q = 0; q < 3; ++q) used += x.quad(t, q) > 0;
        if (used > 1) return false;
    }
    return true;
}

NormalCoordinates single_cusp_link(const Triangulation& T) { return vertex_link(T, cusp_classes(T).front()); }

NormalCoordinates dbl_quad_surface() {
    NormalCoordinates x(2);
    x.quad(0, 0) = 1;
    x.quad(1, 0) = 1;
    return x;
}

}  // namespace

TEST_SUITE("normal_surfaces") {

TEST_CASE("quad families") {
    CHECK(quad_family(0, 1) == 0);
    CHECK(quad_family(3, 2) == 0);
    CHECK(quad_family(1, 3) == 1);
    CHECK(quad_family(2, 1) == 2);
    CHECK(std::string(quad_family_name(1)) == "02|13");
}

TEST_CASE("matching matrix shape") {
    for (auto T : {cftest::fig8(), cftest::dbl()}) {
        auto B = matching_matrix(T);
        CHECK(B.rows.size() == 12);
        CHECK(B.cols == 14);
        auto D = B.dense();
        for (int c = 0; c < 14; ++c) {
            int support = 0;
            for (const auto& r : D) support += r[static_cast<std::size_t>(c)] != 0;
            CHECK((support == 3 || support == 4));
            CHECK(support == (c % 7 < 4 ? 3 : 4));
        }
        for (const auto& r : B.rows) {
            CHECK(r.left < r.right);
            std::set<int> tets;
            for (auto [c, v] : r.entries) {
                CHECK((v == 1 || v == -1));
                tets.insert(c / 7);
            }
            CHECK(tets.size() <= 2);
        }
    }
}

TEST_CASE("vertex links solve the system") {
    auto T = cftest::fig8();
    auto B = matching_matrix(T);
    auto link = single_cusp_link(T);
    CHECK(cusp_classes(T).size() == 1);
    for (int t = 0; t < 2; ++t)
        for (int v = 0; v < 4; ++v) CHECK(link.tri(t, v) == 1);
    CHECK_FALSE(link.has_quad());
    CHECK(is_solution(B, link));
    CHECK(matches_directly(T, link));
    CHECK(is_solution(B, NormalCoordinates(2)));
    NormalCoordinates unit(2);
    unit.quad(0, 1) = 1;
    CHECK_FALSE(is_solution(B, unit));
    CHECK_FALSE(matches_directly(T, unit));

    auto D = cftest::dbl();
    for (const auto& c : cusp_classes(D)) {
        auto x = vertex_link(D, c);
        int s = 0;
        for (int v : x.x) s += v;
        CHECK(s == 2);
        CHECK(is_solution(matching_matrix(D), x));
    }
}

TEST_CASE("matrix agrees with the direct arc check on random vectors") {
    for (auto T : {cftest::fig8(), cftest::dbl()}) {
        auto B = matching_matrix(T);
        unsigned seed = 12345;
        for (int trial = 0; trial < 2000; ++trial) {
            NormalCoordinates x(2);
            for (auto& v : x.x) {
                seed = seed * 1103515245u + 12345u;
                v = static_cast<int>((seed >> 16) % 3);
            }
            CHECK(is_solution(B, x) == matches_directly(T, x));
        }
    }
}

TEST_CASE("enumeration matches brute force at bound 1") {
    for (auto T : {cftest::fig8(), cftest::dbl()}) {
        std::set<std::vector<int>> brute;
        for (int mask = 1; mask < (1 << 14); ++mask) {
            NormalCoordinates x(2);
            for (int i = 0; i < 14; ++i) x.x[static_cast<std::size_t>(i)] = (mask >> i) & 1;
            if (admissible_directly(x) && matches_directly(T, x)) brute.insert(x.x);
        }
        auto sols = enumerate_solutions(T, 1);
        std::set<std::vector<int>> got;
        for (const auto& s : sols) got.insert(s.x);
        CHECK(got == brute);
        CHECK(std::is_sorted(sols.begin(), sols.end()));
    }
}

TEST_CASE("enumeration contents and homogeneity") {
    auto T = cftest::fig8();
    auto link = single_cusp_link(T);
    auto one = enumerate_solutions(T, 1);
    auto two = enumerate_solutions(T, 2);
    CHECK(std::find(one.begin(), one.end(), link) != one.end());
    NormalCoordinates twice = link;
    for (auto& v : twice.x) v *= 2;
    CHECK(std::find(two.begin(), two.end(), twice) != two.end());
    auto B = matching_matrix(T);
    for (const auto& s : two) {
        CHECK(is_solution(B, s));
        CHECK(is_admissible(s));
        CHECK_FALSE(s.is_zero());
    }
    for (auto s : one) {
        for (auto& v : s.x) v *= 2;
        CHECK(std::find(two.begin(), two.end(), s) != two.end());
    }
    CHECK(two.size() == 2);
    CHECK(enumerate_solutions(T, 2, 1).size() == 1);
}

TEST_CASE("reconstruct the figure-eight cusp torus") {
    auto T = cftest::fig8();
    auto link = single_cusp_link(T);
    auto D = reconstruct(T, link);
    CHECK(D.F() == 8);
    CHECK(D.E() == 12);
    CHECK(D.V() == 4);
    CHECK(D.closed);
    CHECK(D.component_count() == 1);
    CHECK(D.component_orientable[0]);
    CHECK(euler_characteristic(D) == 0);
    CHECK(std::abs(gauss_bonnet_euler(D)) < 1e-9);
    CHECK(is_linking(D));
    CHECK(coordinates_of(D) == link);
    for (const auto& v : D.vertices) {
        CHECK(v.degree == 6);
        CHECK(v.angle_sum() == doctest::Approx(2 * std::numbers::pi));
    }
    CHECK(surface_curvature_check(D).ok);
}

TEST_CASE("parallel copies split into components") {
    auto T = cftest::fig8();
    auto x = single_cusp_link(T);
    for (auto& v : x.x) v *= 2;
    auto D = reconstruct(T, x);
    CHECK(D.component_count() == 2);
    auto parts = components(D);
    REQUIRE(parts.size() == 2);
    for (const auto& P : parts) {
        CHECK(P.F() == 8);
        CHECK(euler_characteristic(P) == 0);
        CHECK(is_linking(P));
    }
    CHECK(coordinates_of(parts[0]) == single_cusp_link(T));
}

TEST_CASE("empty and sphere reconstructions") {
    auto E = reconstruct(cftest::fig8(), NormalCoordinates(2));
    CHECK(E.F() == 0);
    CHECK(E.component_count() == 0);

    auto T = cftest::dbl();
    auto L = reconstruct(T, vertex_link(T, cusp_classes(T).front()));
    CHECK(L.V() == 3);
    CHECK(L.E() == 3);
    CHECK(L.F() == 2);
    CHECK(euler_characteristic(L) == 2);
    auto cc = surface_curvature_check(L);
    CHECK_FALSE(cc.ok);
    CHECK_FALSE(cc.issues.empty());
    CHECK(cc.issues.front().edge_index == 2);

    auto Q = reconstruct(T, dbl_quad_surface());
    CHECK(Q.F() == 2);
    CHECK(Q.V() == 4);
    CHECK(euler_characteristic(Q) == 2);
    CHECK_FALSE(is_linking(Q));
    for (const auto& v : Q.vertices) CHECK(v.degree == 2);
}

TEST_CASE("euler characteristic agrees with the cell-count identity") {
    for (auto T : {cftest::fig8(), cftest::dbl()}) {
        for (const auto& x : enumerate_solutions(T, 2)) {
            auto D = reconstruct(T, x);
            int tris = 0, quads = 0;
            for (const auto& d : D.discs) (d.kind == DiscKind::Quad ? quads : tris)++;
            CHECK(2 * D.E() == 3 * tris + 4 * quads);
            CHECK(2 * (D.V() - quads) - tris == 2 * euler_characteristic(D));
            CHECK(coordinates_of(D) == x);
            // Degree transfer: a surface vertex on an edge has the edge's index.
            auto ec = edge_classes(T);
            for (const auto& v : D.vertices) CHECK(v.degree == ec.classes[static_cast<std::size_t>(v.edge_class)].index);
        }
    }
}

TEST_CASE("reconstruct rejects bad input") {
    NormalCoordinates bad(2);
    bad.quad(0, 1) = 1;
    CHECK_THROWS_AS(reconstruct(cftest::fig8(), bad), std::invalid_argument);
    NormalCoordinates two(2);
    two.quad(0, 0) = 1;
    two.quad(0, 1) = 1;
    CHECK_FALSE(is_admissible(two));
}

TEST_CASE("arc search agrees with enumeration") {
    for (auto T : {cftest::fig8(), cftest::dbl()}) {
        auto sols = enumerate_solutions(T, 2);
        for (int t = 0; t < 2; ++t)
            for (int q = 0; q < 3; ++q) {
                bool any = std::any_of(sols.begin(), sols.end(), [&](const NormalCoordinates& s) { return s.quad(t, q) > 0; });
                auto r = find_solution(T, 2, t, q);
                CHECK(r.exhausted);
                CHECK(r.solution.has_value() == any);
                if (r.solution) {
                    CHECK(matches_directly(T, *r.solution));
                    CHECK(admissible_directly(*r.solution));
                    CHECK(r.solution->quad(t, q) > 0);
                }
            }
    }
    auto r = find_solution(cftest::dbl(), 1, 0, 0);
    REQUIRE(r.solution.has_value());
    CHECK(*r.solution == dbl_quad_surface());
}

TEST_CASE("ncrd round trip and errors") {
    auto x = single_cusp_link(cftest::fig8());
    x.quad(1, 2) = 3;
    auto text = serialize_ncrd(x);
    CHECK(text.rfind("ncrd 1\nntet 2\ntet 0 1 1 1 1 0 0 0\n", 0) == 0);
    CHECK(parse_ncrd(text) == x);
    CHECK(parse_ncrd("# comment\nncrd 1\nntet 1\ntet 0 0 0 0 0 1 0 0 # tail\n").quad(0, 0) == 1);
    CHECK_THROWS_AS(parse_ncrd("ncrd 2\nntet 1\ntet 0 0 0 0 0 0 0 0\n"), ParseError);
    CHECK_THROWS_AS(parse_ncrd("ncrd 1\nntet 1\ntet 0 0 0 0 0 0 0\n"), ParseError);
    CHECK_THROWS_AS(parse_ncrd("ncrd 1\nntet 1\ntet 0 0 0 0 -1 0 0 0\n"), ParseError);
    CHECK_THROWS_AS(parse_ncrd("ncrd 1\nntet 2\ntet 0 0 0 0 0 0 0 0\n"), ParseError);
}

}
