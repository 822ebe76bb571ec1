#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "cuspforge/coverings.hpp"
#include "cuspforge/surface.hpp"
#include "cuspforge/symmetry.hpp"
#include "test_support.hpp"
#include "tunnel_fixture.hpp"

using namespace cuspforge;

namespace {

bool edge_in_face(int e, int f) {
    static const int ends[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    return ends[e][0] != f && ends[e][1] != f;
}

// Per face of the tet: sorted list of endpoint edges, from arcs alone.
std::map<int, std::multiset<int>> endpoint_edges(const std::vector<GeneralizedDisc>& discs) {
    std::map<int, std::multiset<int>> out;
    for (const auto& d : discs)
        for (const auto& a : d.arcs) {
            out[a.face].insert(a.edge_a);
            out[a.face].insert(a.edge_b);
        }
    return out;
}

std::map<int, int> arc_counts(const std::vector<GeneralizedDisc>& discs) {
    std::map<int, int> out;
    for (const auto& d : discs)
        for (const auto& a : d.arcs) ++out[a.face];
    return out;
}

// Arcs on a face as unordered endpoint pairs.
std::multiset<std::pair<int, int>> face_arcs(const std::vector<GeneralizedDisc>& discs, int f) {
    std::multiset<std::pair<int, int>> out;
    for (const auto& d : discs)
        for (const auto& a : d.arcs)
            if (a.face == f) out.emplace(std::min(a.point_a, a.point_b), std::max(a.point_a, a.point_b));
    return out;
}

int count_kind(const std::vector<GeneralizedDisc>& discs, DiscKind k) {
    return static_cast<int>(std::count_if(discs.begin(), discs.end(), [&](const GeneralizedDisc& d) { return d.kind == k; }));
}

// The boundary curve closes up: each arc leaves on the edge the next one enters,
// reached by rotating inside the ball.
bool curve_is_closed(const Ball& B, const std::vector<BoundaryArc>& c) {
    std::set<FaceSlot> faces;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto& a = c[i];
        const auto& b = c[(i + 1) % c.size()];
        if (B.is_interior(a.slot())) return false;
        if (!faces.insert(a.slot()).second) return false;
        FaceEdge nx = rotate_to_boundary(B, FaceEdge{a.tet, a.face, a.vertex, a.to});
        if (nx.slot() != b.slot()) return false;
        std::set<int> want{nx.a, nx.b}, got{b.vertex, b.from};
        if (want != got) return false;
    }
    return !c.empty();
}

}  // namespace

TEST_SUITE("surface_builder") {

TEST_CASE("extend_quad on the figure-eight ball") {
    auto B = unfold(cftest::fig8());
    for (int fam = 0; fam < 3; ++fam) {
        auto C = extend_quad(B, 0, fam);
        CHECK(C.quad_count() == 1);
        CHECK(C.disc[0].has_value());
        CHECK(C.disc[0]->kind == DiscKind::Quad);
        CHECK(C.disc[0]->type == fam);
        CHECK(curve_is_closed(B, C.boundary));
        auto again = extend_quad(B, 0, fam);
        CHECK(again.boundary == C.boundary);
    }
}

TEST_CASE("extend_quad on the congruence cover") {
    auto N = finite_cover(cftest::fig8()).total;
    auto B = unfold(N);
    auto C = extend_quad(B, 0, 0);
    CHECK(C.quad_count() == 1);
    CHECK(C.disc_count() > 1);
    CHECK(curve_is_closed(B, C.boundary));
    // Every interior face met by the disc carries matched arcs on both sides.
    for (int t = 0; t < B.size(); ++t) {
        if (!C.disc[static_cast<std::size_t>(t)]) continue;
        const auto& d = *C.disc[static_cast<std::size_t>(t)];
        for (int f = 0; f < 4; ++f) {
            if (disc_arc_vertex(d.kind, d.type, f) < 0 || !B.is_interior({t, f})) continue;
            auto p = B.partner({t, f});
            CHECK(C.disc[static_cast<std::size_t>(p.tet)].has_value());
        }
    }
}

TEST_CASE("extend_curve recovers a disc from its boundary") {
    auto B = unfold(finite_cover(cftest::fig8()).total);
    auto C = extend_quad(B, 0, 1);
    auto D = extend_curve(B, C.boundary);
    CHECK(D.same_discs(C));
}

TEST_CASE("transport pushes arcs through their pairs") {
    for (auto T : {cftest::fig8(), finite_cover(cftest::fig8()).total}) {
        auto B = unfold(T);
        auto C = extend_quad(B, 0, 0);
        auto tr = transport_boundary(B, C.boundary);
        REQUIRE(tr.image.size() == C.boundary.size());
        int sum = 0;
        for (std::size_t i = 0; i < tr.image.size(); ++i) {
            const auto& a = C.boundary[i];
            FaceEdge j = jump(B, FaceEdge{a.tet, a.face, a.vertex, a.from});
            CHECK(tr.image[i].slot() == j.slot());
            CHECK(tr.image[i].vertex == j.a);
            CHECK(tr.image[i].from == j.b);
            CHECK(tr.gaps[i] >= 0);
            sum += tr.gaps[i];
        }
        CHECK(tr.measure == sum);
        CHECK(tr.pieces.size() >= 1);
        std::size_t covered = 0;
        for (const auto& p : tr.pieces) covered += p.size();
        CHECK(covered == tr.image.size());
        int positive = static_cast<int>(std::count_if(tr.gaps.begin(), tr.gaps.end(), [](int g) { return g > 0; }));
        CHECK(static_cast<int>(tr.pieces.size()) == std::max(1, positive));
    }
}

TEST_CASE("reconnect measures only go down") {
    auto B = unfold(finite_cover(cftest::fig8()).total);
    auto C = extend_quad(B, 0, 0);
    auto r = reconnect(C);
    REQUIRE(!r.measures.empty());
    CHECK(r.measures.front() == transport_boundary(B, C.boundary).measure);
    for (std::size_t i = 1; i < r.measures.size(); ++i) CHECK(r.measures[i] < r.measures[i - 1]);
    CHECK(r.iterations == static_cast<int>(r.measures.size()) - 1);
    if (r.ok) {
        CHECK(r.measures.back() == 0);
        CHECK(r.image_disc.has_value());
    } else {
        CHECK_FALSE(r.failure.empty());
    }
}

TEST_CASE("quadrilateral surgery keeps the arc endpoints on every face") {
    for (auto [fa, fb] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
        auto b = quadrilateral_surgery(fa, fb, 'b');
        auto c = quadrilateral_surgery(fa, fb, 'c');
        for (const auto* s : {&b, &c}) {
            CHECK(s->inputs.size() == 2);
            CHECK(s->crossing_faces.size() == 2);
            CHECK(endpoint_edges(s->outputs) == endpoint_edges(s->inputs));
            CHECK(arc_counts(s->outputs) == arc_counts(s->inputs));
            CHECK(s->checksum_before == s->checksum_after);
            CHECK(s->checksum_before == arc_checksum(s->inputs));
            CHECK(s->outputs.size() == 2);
            CHECK(count_kind(s->outputs, DiscKind::PseudoTriangle) == 1);
        }
        CHECK(b.choices != c.choices);
    }
    CHECK_THROWS_AS(quadrilateral_surgery(1, 1, 'b'), SurfaceError);
    CHECK_THROWS_AS(quadrilateral_surgery(0, 1, 'x'), SurfaceError);
}

TEST_CASE("triangular surgery variants agree off the tunnel faces") {
    for (int v = 0; v < 4; ++v)
        for (int fam = 0; fam < 3; ++fam) {
            auto ess = triangular_surgery(v, fam, true);
            auto non = triangular_surgery(v, fam, false);
            CHECK(ess.crossing_faces == non.crossing_faces);
            CHECK(count_kind(ess.outputs, DiscKind::Tunnel) == 0);
            CHECK(count_kind(ess.outputs, DiscKind::Triangle) == 1);
            CHECK(count_kind(ess.outputs, DiscKind::Quad) == 1);
            REQUIRE(count_kind(non.outputs, DiscKind::Tunnel) == 1);
            std::set<int> tunnelFaces;
            for (const auto& d : non.outputs) {
                if (d.kind != DiscKind::Tunnel) continue;
                std::set<int> edges;
                for (const auto& a : d.arcs)
                    if (a.returning()) {
                        tunnelFaces.insert(a.face);
                        edges.insert(a.edge_a);
                    }
                // One returning arc per crossing face, each hugging an edge at v.
                CHECK(edges.size() == 2);
                for (int e : edges) CHECK((kEdgeVerts[static_cast<std::size_t>(e)][0] == v || kEdgeVerts[static_cast<std::size_t>(e)][1] == v));
            }
            CHECK(tunnelFaces.size() == 2);
            for (int f = 0; f < 4; ++f) {
                if (tunnelFaces.count(f)) continue;
                CHECK(face_arcs(ess.outputs, f) == face_arcs(non.outputs, f));
            }
            CHECK(endpoint_edges(non.outputs) == endpoint_edges(non.inputs));
            CHECK(endpoint_edges(ess.outputs) == endpoint_edges(ess.inputs));
        }
    CHECK_THROWS_AS(triangular_surgery(0, 0, true, false), SurfaceError);
}

TEST_CASE("trivial isotopy") {
    auto same = trivial_isotopy(2, 2);
    CHECK(same.nested);
    CHECK(same.order == std::array<int, 2>{0, 1});
    auto swapped = trivial_isotopy(2, 2, {1, 0});
    CHECK(swapped.order == std::array<int, 2>{1, 0});
    auto apart = trivial_isotopy(0, 3, {1, 0});
    CHECK_FALSE(apart.nested);
    CHECK(apart.order == std::array<int, 2>{1, 0});
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            auto once = trivial_isotopy(a, b);
            auto twice = trivial_isotopy(a, b, once.order);
            CHECK(twice.order == once.order);
            CHECK(twice.nested == once.nested);
        }
}

TEST_CASE("cyclic tunnel detection") {
    auto T = cftest::dbl();
    GeneralizedSurface S;
    S.base = T;
    CHECK_FALSE(detect_cyclic_tunnel(S).has_value());

    S = cftest::planted_tunnel_ring(T);
    for (const auto& d : S.discs)
        for (const auto& a : d.arcs) CHECK(edge_in_face(a.edge_a, a.face));
    auto chain = detect_cyclic_tunnel(S);
    REQUIRE(chain.has_value());
    CHECK(chain->closed);
    CHECK(chain->discs.size() == 2);

    auto open = S;
    open.discs[0].arcs[1].across_disc = -1;
    open.discs[1].arcs[1].across_disc = -1;
    CHECK_FALSE(detect_cyclic_tunnel(open).has_value());
    auto chains = open.tunnel_chains();
    REQUIRE(chains.size() == 1);
    CHECK_FALSE(chains.front().closed);

    auto normal = S;
    for (auto& d : normal.discs) d.kind = DiscKind::Quad;
    CHECK_FALSE(detect_cyclic_tunnel(normal).has_value());
}

TEST_CASE("pairing records crossings by kind") {
    auto T = cftest::dbl();
    NormalCoordinates a(2), b(2);
    a.quad(0, 0) = a.quad(1, 0) = 1;
    b.quad(0, 1) = b.quad(1, 1) = 1;
    auto S = overlay(T, a, b);
    CHECK(S.complex.F() == 4);
    CHECK(S.crossings.size() == 2);
    for (const auto& c : S.crossings) CHECK(c.kind == CrossingKind::QuadQuad);
    CHECK(S.seed_disc >= 0);
    CHECK(S.complex.discs[static_cast<std::size_t>(S.seed_disc)].kind == DiscKind::Quad);

    NormalCoordinates link(2);
    link.tri(0, 0) = link.tri(1, 0) = 1;
    auto L = overlay(T, a, link);
    for (const auto& c : L.crossings) CHECK(c.kind == CrossingKind::TriQuad);
}

TEST_CASE("resolve without crossings returns the seed component") {
    auto T = cftest::dbl();
    NormalCoordinates q(2), link(2);
    q.quad(0, 0) = q.quad(1, 0) = 1;
    link.tri(0, 0) = link.tri(1, 0) = 1;
    auto r = resolve(overlay(T, q, link));
    REQUIRE(r.ok);
    CHECK(r.x == q);
    CHECK(r.double_curves == 0);
}

TEST_CASE("resolve output meets its postconditions or says why not") {
    auto T = cftest::dbl();
    auto M = matching_matrix(T);
    for (int fa = 0; fa < 3; ++fa)
        for (int fb = 0; fb < 3; ++fb) {
            NormalCoordinates a(2), b(2);
            a.quad(0, fa) = a.quad(1, fa) = 1;
            b.quad(0, fb) = b.quad(1, fb) = 1;
            for (bool irregular : {false, true}) {
                auto r = resolve(overlay(T, a, b), {irregular, -1});
                for (const auto& s : r.log) CHECK(s.conserved());
                if (r.ok) {
                    CHECK(is_solution(M, r.x));
                    CHECK(is_admissible(r.x));
                    CHECK(r.x.has_quad());
                } else {
                    CHECK_FALSE(r.failure.empty());
                }
            }
        }
}

TEST_CASE("construct needs the unique common simplex property") {
    CHECK_THROWS_AS(construct_nonlinking_surface(cftest::dbl()), SurfaceError);
}

TEST_CASE("construct on the doubled DBL cover") {
    auto N = finite_cover(cftest::dbl()).total;
    auto r = construct_nonlinking_surface(N);
    CHECK(is_solution(matching_matrix(N), r.x));
    CHECK(is_admissible(r.x));
    CHECK(r.x.has_quad());
    auto D = reconstruct(N, r.x);
    CHECK(D.component_count() == 1);
    CHECK_FALSE(is_linking(D));
    CHECK_FALSE(format_resolution_log(r).empty());
}

TEST_CASE("automorphisms of the fixtures") {
    for (auto T : {cftest::fig8(), cftest::dbl()}) {
        auto G = automorphisms(T);
        REQUIRE(!G.empty());
        CHECK(G.front().is_identity());
        for (const auto& g : G)
            for (int t = 0; t < T.size(); ++t)
                for (int f = 0; f < 4; ++f) {
                    // g carries gluings to gluings.
                    const auto& gl = *T.gluing(t, f);
                    int gt = g.tet[static_cast<std::size_t>(t)];
                    Perm4 p = g.perm[static_cast<std::size_t>(t)];
                    const auto& img = *T.gluing(gt, p[f]);
                    CHECK(img.tet == g.tet[static_cast<std::size_t>(gl.tet)]);
                    CHECK(img.perm * p == g.perm[static_cast<std::size_t>(gl.tet)] * gl.perm);
                }
        for (const auto& g : G)
            for (const auto& h : G) CHECK(std::find(G.begin(), G.end(), compose(g, h)) != G.end());
    }
}

TEST_CASE("quotient by the deck group gives back the base") {
    auto c = finite_cover(cftest::dbl());
    auto G = automorphisms(c.total);
    CHECK(G.size() >= 8);
    auto subs = free_subgroups(G);
    REQUIRE(!subs.empty());
    bool sawBase = false;
    for (const auto& H : subs) {
        auto q = quotient(c.total, G, H);
        if (!q) continue;
        CHECK(q->T.size() * static_cast<int>(H.size()) == c.total.size());
        if (q->T.size() == 2 && isomorphic(q->T, cftest::dbl())) sawBase = true;
        // Lifting a solution downstairs gives a solution upstairs.
        for (const auto& x : enumerate_solutions(q->T, 1, 4)) CHECK(is_solution(matching_matrix(c.total), lift(*q, x)));
    }
    CHECK(sawBase);
}

}
