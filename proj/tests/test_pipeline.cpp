#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "cuspforge/pipeline.hpp"
#include "test_support.hpp"

using namespace cuspforge;

namespace {

std::string golden(const std::string& name) { return cftest::read_file(std::string(CUSPFORGE_GOLDEN_DIR) + "/" + name); }

NormalCoordinates first_link(const Triangulation& T) { return vertex_link(T, cusp_classes(T).front()); }

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_SUITE("pipeline_certify") {

TEST_CASE("certificate on the base fixtures") {
    auto dbl = cftest::dbl();
    auto c = certify(dbl, first_link(dbl));
    CHECK(c.verdict == Verdict::RefutedHypothesis);
    CHECK_FALSE(c.holds("allEdgeIndicesAtLeast6"));
    CHECK(c.holds("surfaceIsNormal"));

    auto fig8 = cftest::fig8();
    auto link = certify(fig8, first_link(fig8));
    CHECK(link.holds("allEdgeIndicesAtLeast6"));
    CHECK_FALSE(link.holds("surfaceNotLinking"));
    CHECK(link.verdict == Verdict::NotApplicable);
    bool cites = false;
    for (const auto& n : link.notes) cites = cites || n.find("linking surface") != std::string::npos;
    CHECK(cites);

    auto zero = certify(fig8, NormalCoordinates(2));
    CHECK(zero.verdict == Verdict::RefutedHypothesis);
    CHECK_FALSE(zero.holds("surfaceIsNormal"));
}

TEST_CASE("certificate text is key-sorted and stable") {
    auto fig8 = cftest::fig8();
    auto x = first_link(fig8);
    auto a = serialize_certificate(certify(fig8, x));
    CHECK(a == serialize_certificate(certify(fig8, x)));
    auto ls = lines_of(a);
    REQUIRE(ls.size() > 2);
    CHECK(ls.front() == "certificate 1");
    std::vector<std::string> keys;
    for (std::size_t i = 1; i < ls.size(); ++i) keys.push_back(ls[i].substr(0, ls[i].find(':')));
    CHECK(std::is_sorted(keys.begin(), keys.end()));
    CHECK(std::count(keys.begin(), keys.end(), "verdict") == 1);
}

TEST_CASE("verdict certified iff all hypotheses hold") {
    auto fig8 = cftest::fig8();
    for (const auto& x : enumerate_solutions(fig8, 2)) {
        auto c = certify(fig8, x);
        bool all = std::all_of(c.hypotheses.begin(), c.hypotheses.end(), [](const HypothesisCheck& h) { return h.passed; });
        CHECK((c.verdict == Verdict::Certified) == all);
        CHECK(c.hypotheses.size() == 5);
    }
}

TEST_CASE("pipeline refuses a base with small edge indices") {
    CHECK_THROWS_AS(run_main_pipeline(cftest::dbl()), HypothesisError);
}

TEST_CASE("pipeline on the figure-eight fixture") {
    auto fig8 = cftest::fig8();
    auto r = run_main_pipeline(fig8);
    CHECK(r.certificate.verdict == Verdict::Certified);
    CHECK(r.certificate.base_hash == hex64(triangulation_hash(r.cover.total)));
    CHECK(r.certificate.tets == r.cover.total.size());
    CHECK(verify_covering(r.cover).ok);
    CHECK(replay(r.certificate, r.cover.total, r.surface.x));
    CHECK(exit_code(r) == (r.fallback ? 3 : 0));
    // The surface is a non-linking normal surface of the cover.
    auto D = reconstruct(r.cover.total, r.surface.x);
    CHECK(r.surface.x.has_quad());
    CHECK(euler_characteristic(D) <= 0);

    // A different surface does not replay under the same certificate.
    CHECK_FALSE(replay(r.certificate, r.cover.total, first_link(r.cover.total)));
}

TEST_CASE("pipeline with forced curvature") {
    auto r = run_main_pipeline(cftest::dbl(), PipelineOptions{true, {}});
    REQUIRE(r.branched.has_value());
    CHECK(is_negatively_curved(r.branched->cover.total).negatively_curved);
    CHECK(r.cover.base == r.branched->cover.total);
    CHECK(r.certificate.verdict == Verdict::Certified);
    CHECK(replay(r.certificate, r.cover.total, r.surface.x));
    CHECK(r.certificate.provenance.front().rfind("branched_cover", 0) == 0);
}

TEST_CASE("dual graph export") {
    CHECK(export_dual_graph(cftest::dbl()) == golden("dbl_dual.dot"));
    CHECK(export_dual_graph(cftest::fig8()) == golden("fig8_dual.dot"));
    auto c = finite_cover(cftest::dbl());
    auto dot = export_dual_graph(c.total);
    auto ls = lines_of(dot);
    long nodes = std::count_if(ls.begin(), ls.end(), [](const std::string& l) { return l.find("--") == std::string::npos && l.find(';') != std::string::npos; });
    long edges = std::count_if(ls.begin(), ls.end(), [](const std::string& l) { return l.find("--") != std::string::npos; });
    CHECK(nodes == c.degree * 2);
    CHECK(edges == 2 * c.total.size());
    CHECK(dot == export_dual_graph(c.total));
}

}
