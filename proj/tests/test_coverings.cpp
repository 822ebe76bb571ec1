#include <doctest.h>

#include <algorithm>
#include <map>

#include "cuspforge/coverings.hpp"
#include "test_support.hpp"

using namespace cuspforge;

namespace {

// Independent index-lifting oracle: wrap counts per base class sum to the degree.
bool index_lifting_holds(const CoveringMap& c) {
    auto be = edge_classes(c.base);
    auto te = edge_classes(c.total);
    std::map<int, int> wrapSum;
    for (const auto& cls : te.classes) {
        const auto& m = cls.members.front();
        int bc = be.of(c.tet_map[static_cast<std::size_t>(m.tet)], m.a, m.b);
        int bi = be.classes[static_cast<std::size_t>(bc)].index;
        if (cls.index % bi != 0) return false;
        for (const auto& s : cls.members)
            if (be.of(c.tet_map[static_cast<std::size_t>(s.tet)], s.a, s.b) != bc) return false;
        wrapSum[bc] += cls.index / bi;
    }
    for (const auto& [bc, w] : wrapSum)
        if (w != c.degree) return false;
    return wrapSum.size() == be.classes.size();
}

}  // namespace

TEST_SUITE("coverings") {

TEST_CASE("identity cover verifies") {
    auto c = identity_cover(cftest::fig8());
    CHECK(c.degree == 1);
    CHECK(verify_covering(c).ok);
}

TEST_CASE("doubling of DBL") {
    auto c = finite_cover(cftest::dbl());
    CHECK(c.construction == "doubling");
    CHECK(c.degree == 8);
    CHECK(c.total.size() == 16);
    CHECK(verify_covering(c).ok);
    CHECK(unique_common_simplex_check(c.total).ok);
    CHECK(index_lifting_holds(c));
    CHECK(validate(c.total).ok);
}

TEST_CASE("literal doubling of FIG8 is a covering but lacks the property") {
    auto c = doubling_cover(cftest::fig8());
    CHECK(c.degree == 8);
    CHECK(c.total.size() == 16);
    CHECK(verify_covering(c).ok);
    CHECK(index_lifting_holds(c));
    CHECK_FALSE(unique_common_simplex_check(c.total).ok);
    // Sheet labels are the binary strings of cross-gluing choices.
    CHECK(c.sheet_label[0] == "000");
    CHECK(c.sheet_label[15] == "111");
}

TEST_CASE("finite cover of FIG8 falls back to the congruence cover") {
    auto c = finite_cover(cftest::fig8());
    CHECK_FALSE(c.doubling_ucs);
    CHECK_FALSE(c.doubling_diagnostic.empty());
    CHECK(c.construction == "congruence-p7");
    CHECK(c.degree == 168);
    CHECK(c.total.size() == 336);
    CHECK(verify_covering(c).ok);
    CHECK(unique_common_simplex_check(c.total).ok);
    CHECK(index_lifting_holds(c));
    auto nc = is_negatively_curved(c.total);
    CHECK(nc.negatively_curved);
    CHECK(nc.singular.empty());
    CHECK(validate(c.total).ok);
}

TEST_CASE("congruence cover needs indices divisible by 6") {
    CHECK_FALSE(congruence_cover(cftest::dbl(), 7).has_value());
}

TEST_CASE("verify_covering catches a corrupted sheet") {
    auto c = finite_cover(cftest::dbl());
    auto g = *c.total.gluing(3, 1);
    Perm4 bad = Perm4::from_string("1023");
    c.total.join(3, 1, g.tet, bad * g.perm);
    auto r = verify_covering(c);
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.failures.empty());
}

TEST_CASE("branched cover of DBL") {
    auto b = branched_cover(cftest::dbl(), 6);
    CHECK(b.k == 3);
    CHECK(b.rank == 2);
    CHECK(b.cover.total.size() == 18);
    for (const auto& cls : edge_classes(b.cover.total).classes) {
        CHECK(cls.index >= 6);
        CHECK(cls.index % 2 == 0);
    }
    CHECK(is_negatively_curved(b.cover.total).negatively_curved);
    CHECK(verify_branched_cover(b).ok);
    CHECK(b.copy_bound >= b.k);
    CHECK(b.branch_locus.size() == 6);
}

TEST_CASE("branched cover of FIG8 is the base") {
    auto b = branched_cover(cftest::fig8(), 6);
    CHECK(b.k == 1);
    CHECK(b.branch_locus.empty());
    CHECK(is_negatively_curved(b.cover.total).negatively_curved);
    CHECK(verify_branched_cover(b).ok);
}

TEST_CASE("k=4 over DBL gives singular edges of index 8") {
    auto b = branched_cover_with_k(cftest::dbl(), 4, 6);
    auto nc = is_negatively_curved(b.cover.total);
    CHECK(nc.negatively_curved);
    CHECK_FALSE(nc.singular.empty());
    auto ec = edge_classes(b.cover.total);
    for (int s : nc.singular) CHECK(ec.classes[static_cast<std::size_t>(s)].index == 8);
    CHECK(verify_branched_cover(b).ok);
}

TEST_CASE("wrap multiple 2 cannot lift DBL indices to 6") {
    CHECK_THROWS(branched_cover_with_k(cftest::dbl(), 2, 6));
}

TEST_CASE("verify_branched_cover negative control") {
    auto b = branched_cover(cftest::dbl(), 6);
    // Re-route one cyclic family: glue sheet 0 back to itself on that face.
    auto pair = unfold(cftest::dbl()).boundary_pairs().front();
    auto& T = b.cover.total;
    int n = 2;
    FaceSlot a{0 * n + pair.first.tet, pair.first.face};
    auto old = *T.gluing(a.tet, a.face);
    T.set(a.tet, a.face, Gluing{pair.second.tet, old.perm});
    CHECK_FALSE(verify_branched_cover(b).ok);
}

TEST_CASE("cover map text") {
    auto c = finite_cover(cftest::dbl());
    auto s = format_cover_map(c);
    CHECK(s.rfind("0 0 000\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 16);
}

}
