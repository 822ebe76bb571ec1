// cuspforge command line.
//
// Exit codes: 0 success or certified, 2 refuted hypothesis (or a failed
// check), 3 certified via the fallback search, 4 any other failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cuspforge/ball.hpp"
#include "cuspforge/coverings.hpp"
#include "cuspforge/hyperbolic.hpp"
#include "cuspforge/normal.hpp"
#include "cuspforge/pipeline.hpp"
#include "cuspforge/surface.hpp"
#include "cuspforge/triangulation.hpp"

using namespace cuspforge;

namespace {

constexpr int kOk = 0;
constexpr int kRefuted = 2;
constexpr int kFailure = 4;

struct CliFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliFailure("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Write to a sibling temp file, then rename over the target.
void write_atomic(const std::string& path, const std::string& text) {
    std::filesystem::path target(path);
    auto tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CliFailure("cannot write " + path);
        out << text;
        if (!out.flush()) throw CliFailure("cannot write " + path);
    }
    std::filesystem::rename(tmp, target);
}

Triangulation load(const std::string& path) { return parse_triangulation(read_text(path)); }
NormalCoordinates load_ncrd(const std::string& path) { return parse_ncrd(read_text(path)); }

std::string fixed(double v, int digits = 12) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

int cmd_validate(const std::string& in) {
    auto T = load(in);
    auto r = validate(T);
    std::cout << "tets: " << T.size() << "\n";
    std::cout << "ok: " << (r.ok ? "true" : "false") << "\n";
    std::cout << "orientable: " << (r.orientable ? "true" : "false") << "\n";
    for (const auto& v : r.violations)
        std::cout << "violation: " << v.kind << " tet " << v.tet << " face " << v.face << (v.detail.empty() ? "" : " " + v.detail)
                  << "\n";
    return r.ok ? kOk : kRefuted;
}

int cmd_edges(const std::string& in) {
    auto T = load(in);
    auto ec = edge_classes(T);
    for (std::size_t c = 0; c < ec.classes.size(); ++c) {
        const auto& k = ec.classes[c];
        std::cout << "edge " << c << " index " << k.index << " angle " << fixed(k.angle_sum(), 6) << " members";
        for (const auto& m : k.members) std::cout << " " << m.tet << ":" << m.a << m.b;
        std::cout << "\n";
    }
    auto cusps = cusp_classes(T);
    for (std::size_t c = 0; c < cusps.size(); ++c) {
        std::cout << "cusp " << c << " corners";
        for (auto [t, v] : cusps[c].corners) std::cout << " " << t << ":" << v;
        std::cout << "\n";
    }
    auto curv = is_negatively_curved(T);
    std::cout << "negatively_curved: " << (curv.negatively_curved ? "true" : "false") << "\n";
    std::cout << "singular:";
    for (int s : curv.singular) std::cout << " " << s;
    std::cout << "\n";
    auto u = unique_common_simplex_check(T);
    std::cout << "unique_common_simplex: " << (u.ok ? "true" : "false");
    if (u.violation) std::cout << " (tets " << u.violation->first << "," << u.violation->second << ": " << u.detail << ")";
    std::cout << "\n";
    return kOk;
}

int cmd_unfold(const std::string& in, const std::string& emit) {
    auto B = unfold(load(in));
    std::cout << format_ball(B);
    if (!emit.empty()) write_atomic(emit, serialize(B.shape()));
    return kOk;
}

int cmd_cover(const std::string& in, const std::string& out, const std::string& map) {
    auto c = finite_cover(load(in));
    auto rep = verify_covering(c);
    std::cout << "construction: " << c.construction << "\n";
    std::cout << "degree: " << c.degree << "\n";
    std::cout << "tets: " << c.total.size() << "\n";
    std::cout << "doubling_ucs: " << (c.doubling_ucs ? "true" : "false") << "\n";
    if (!c.doubling_diagnostic.empty()) std::cout << "doubling_diagnostic: " << c.doubling_diagnostic << "\n";
    std::cout << "verify: " << (rep.ok ? "pass" : "fail") << "\n";
    for (const auto& f : rep.failures) std::cout << "failure: " << f << "\n";
    for (const auto& n : rep.notes) std::cout << "note: " << n << "\n";
    if (!out.empty()) write_atomic(out, serialize(c.total));
    if (!map.empty()) write_atomic(map, format_cover_map(c));
    return rep.ok ? kOk : kFailure;
}

int cmd_branch_cover(const std::string& in, int target, const std::string& out) {
    auto b = branched_cover(load(in), target);
    auto rep = verify_branched_cover(b);
    std::cout << "k: " << b.k << "\n";
    std::cout << "rank: " << b.rank << "\n";
    std::cout << "sheets: " << b.cover.degree << "\n";
    std::cout << "tets: " << b.cover.total.size() << "\n";
    std::cout << "copy_bound: " << b.copy_bound << "\n";
    std::cout << "branch_locus:";
    for (int e : b.branch_locus) std::cout << " " << e;
    std::cout << "\n";
    int minIndex = 0;
    for (const auto& k : edge_classes(b.cover.total).classes) minIndex = minIndex == 0 ? k.index : std::min(minIndex, k.index);
    std::cout << "min_index: " << minIndex << "\n";
    std::cout << "verify: " << (rep.ok ? "pass" : "fail") << "\n";
    for (const auto& f : rep.failures) std::cout << "failure: " << f << "\n";
    if (!out.empty()) write_atomic(out, serialize(b.cover.total));
    return rep.ok ? kOk : kFailure;
}

int cmd_normal_matrix(const std::string& in) {
    auto B = matching_matrix(load(in));
    auto dense = B.dense();
    std::cout << "rows " << dense.size() << " cols " << B.cols << "\n";
    for (std::size_t i = 0; i < dense.size(); ++i) {
        const auto& r = B.rows[i];
        std::cout << r.left.tet << ":" << r.left.face << "|" << r.right.tet << ":" << r.right.face << " v" << r.vertex << " ";
        for (std::size_t j = 0; j < dense[i].size(); ++j) std::cout << (j ? " " : "") << std::setw(2) << dense[i][j];
        std::cout << "\n";
    }
    return kOk;
}

int cmd_normal_enumerate(const std::string& in, int bound, std::size_t limit) {
    auto T = load(in);
    auto sols = enumerate_solutions(T, bound, limit);
    std::cout << "solutions " << sols.size() << "\n";
    for (const auto& x : sols) {
        for (std::size_t i = 0; i < x.x.size(); ++i) std::cout << (i ? " " : "") << x.x[i];
        std::cout << "\n";
    }
    return kOk;
}

int cmd_normal_reconstruct(const std::string& in, const std::string& ncrd) {
    auto T = load(in);
    auto D = reconstruct(T, load_ncrd(ncrd));
    std::cout << "V " << D.V() << " E " << D.E() << " F " << D.F() << "\n";
    std::cout << "chi " << euler_characteristic(D) << "\n";
    std::cout << "chi_angles " << fixed(gauss_bonnet_euler(D), 9) << "\n";
    std::cout << "components " << D.component_count() << "\n";
    auto parts = components(D);
    for (std::size_t c = 0; c < parts.size(); ++c) {
        auto y = coordinates_of(parts[c]);
        std::cout << "component " << c << " discs " << parts[c].F() << " quads " << y.quad_count() << " chi "
                  << euler_characteristic(parts[c]) << " orientable " << (D.component_orientable[c] ? "true" : "false")
                  << " linking " << (is_linking(parts[c]) ? "true" : "false") << "\n";
    }
    return kOk;
}

int cmd_normal_check(const std::string& in, const std::string& ncrd) {
    auto T = load(in);
    auto x = load_ncrd(ncrd);
    bool sizeOk = x.tets() == T.size();
    bool sol = sizeOk && is_solution(matching_matrix(T), x);
    bool adm = is_admissible(x);
    std::cout << "solution: " << (sol ? "true" : "false") << "\n";
    std::cout << "admissible: " << (adm ? "true" : "false") << "\n";
    std::cout << "quads: " << x.quad_count() << "\n";
    return sol && adm ? kOk : kRefuted;
}

int cmd_surface_construct(const std::string& in, const std::string& out, const std::string& log) {
    auto T = load(in);
    auto r = construct_nonlinking_surface(T);
    auto D = reconstruct(T, r.x);
    std::cout << "fallback: " << (r.fallback ? "true" : "false") << "\n";
    if (r.fallback) std::cout << "fallback_route: " << r.fallback_route << "\n";
    std::cout << "quads: " << r.x.quad_count() << "\n";
    std::cout << "chi: " << euler_characteristic(D) << "\n";
    std::cout << "surgeries: " << r.steps.size() << "\n";
    if (!out.empty()) write_atomic(out, serialize_ncrd(r.x));
    if (!log.empty()) write_atomic(log, format_resolution_log(r));
    return kOk;
}

int verdict_exit(const Certificate& c) {
    switch (c.verdict) {
        case Verdict::Certified: return kOk;
        case Verdict::RefutedHypothesis: return kRefuted;
        case Verdict::NotApplicable: return kFailure;
    }
    return kFailure;
}

int cmd_certify(const std::string& in, const std::string& ncrd, const std::string& out) {
    auto c = certify(load(in), load_ncrd(ncrd));
    auto text = serialize_certificate(c);
    std::cout << text;
    if (!out.empty()) write_atomic(out, text);
    return verdict_exit(c);
}

int cmd_pipeline(const std::string& in, bool force, const std::string& prefix) {
    auto T = load(in);
    PipelineResult r;
    try {
        r = run_main_pipeline(T, PipelineOptions{force, {}});
    } catch (const HypothesisError& e) {
        std::cout << "verdict: refuted-hypothesis\n";
        std::cout << "reason: " << e.what() << "\n";
        return kRefuted;
    }
    if (r.branched)
        std::cout << "branched: k " << r.branched->k << " rank " << r.branched->rank << " tets " << r.branched->cover.total.size()
                  << "\n";
    std::cout << "cover: " << r.cover.construction << " degree " << r.cover.degree << " tets " << r.cover.total.size() << "\n";
    if (!r.cover.doubling_ucs) std::cout << "doubling: " << r.cover.doubling_diagnostic << "\n";
    std::cout << "fallback: " << (r.fallback ? "true" : "false") << "\n";
    if (r.fallback) std::cout << "fallback_route: " << r.surface.fallback_route << "\n";
    for (const auto& l : r.surface.log) std::cout << "surface: " << l << "\n";
    std::cout << serialize_certificate(r.certificate);
    if (!prefix.empty()) {
        write_atomic(prefix + ".itri", serialize(r.cover.total));
        write_atomic(prefix + ".ncrd", serialize_ncrd(r.surface.x));
        write_atomic(prefix + ".cert", serialize_certificate(r.certificate));
    }
    return exit_code(r);
}

int cmd_geom_constants() {
    auto [h0, l0] = geom::constants_h0_l0();
    auto q = geom::build_quad(0, 1);
    std::cout << "h0 " << fixed(h0) << "\n";
    std::cout << "l0 " << fixed(l0) << "\n";
    std::cout << "quad_side " << fixed(q.side_length) << "\n";
    std::cout << "quad_angle " << fixed(q.corner_angle) << "\n";
    return kOk;
}

int cmd_dual_graph(const std::string& in, const std::string& out) {
    auto dot = export_dual_graph(load(in));
    if (out.empty())
        std::cout << dot;
    else
        write_atomic(out, dot);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cuspforge: ideal triangulations, covers and normal surfaces"};
    app.require_subcommand(1);
    int code = kOk;

    std::string in, out, map, log, ncrd, emit;
    int bound = 1, target = 6;
    std::size_t limit = 1000;
    bool force = false;

    auto* validateCmd = app.add_subcommand("validate", "Check gluing consistency and orientability");
    validateCmd->add_option("file", in, "Triangulation (.itri)")->required();
    validateCmd->callback([&] { code = cmd_validate(in); });

    auto* edgesCmd = app.add_subcommand("edges", "Edge classes, cusps and curvature");
    edgesCmd->add_option("file", in)->required();
    edgesCmd->callback([&] { code = cmd_edges(in); });

    auto* unfoldCmd = app.add_subcommand("unfold", "Unfold into a ball of tetrahedra");
    unfoldCmd->add_option("file", in)->required();
    unfoldCmd->add_option("--emit-itri", emit, "Write the ball with boundary faces left open");
    unfoldCmd->callback([&] { code = cmd_unfold(in, emit); });

    auto* coverCmd = app.add_subcommand("cover", "Finite cover with the unique common simplex property");
    coverCmd->add_option("file", in)->required();
    coverCmd->add_option("-o", out, "Output triangulation");
    coverCmd->add_option("--map", map, "Tet map (totalTet baseTet sheetLabel)");
    coverCmd->callback([&] { code = cmd_cover(in, out, map); });

    auto* branchCmd = app.add_subcommand("branch-cover", "Branched cover raising every edge index");
    branchCmd->add_option("file", in)->required();
    branchCmd->add_option("--target-index", target, "Minimum edge index")->check(CLI::PositiveNumber);
    branchCmd->add_option("-o", out, "Output triangulation");
    branchCmd->callback([&] { code = cmd_branch_cover(in, target, out); });

    auto* normalCmd = app.add_subcommand("normal", "Normal surface coordinates");
    normalCmd->require_subcommand(1);
    auto* matrixCmd = normalCmd->add_subcommand("matrix", "Matching equations");
    matrixCmd->add_option("file", in)->required();
    matrixCmd->callback([&] { code = cmd_normal_matrix(in); });
    auto* enumCmd = normalCmd->add_subcommand("enumerate", "Admissible solutions up to a bound");
    enumCmd->add_option("file", in)->required();
    enumCmd->add_option("--bound", bound, "Largest coordinate")->check(CLI::NonNegativeNumber);
    enumCmd->add_option("--limit", limit, "Stop after this many solutions");
    enumCmd->callback([&] { code = cmd_normal_enumerate(in, bound, limit); });
    auto* reconCmd = normalCmd->add_subcommand("reconstruct", "Build the surface from coordinates");
    reconCmd->add_option("file", in)->required();
    reconCmd->add_option("ncrd", ncrd)->required();
    reconCmd->callback([&] { code = cmd_normal_reconstruct(in, ncrd); });
    auto* checkCmd = normalCmd->add_subcommand("check", "Matching equations and admissibility");
    checkCmd->add_option("file", in)->required();
    checkCmd->add_option("ncrd", ncrd)->required();
    checkCmd->callback([&] { code = cmd_normal_check(in, ncrd); });

    auto* surfaceCmd = app.add_subcommand("surface", "Surface construction");
    surfaceCmd->require_subcommand(1);
    auto* constructCmd = surfaceCmd->add_subcommand("construct", "Non-linking normal surface");
    constructCmd->add_option("file", in)->required();
    constructCmd->add_option("-o", out, "Output coordinates (.ncrd)");
    constructCmd->add_option("--log", log, "Resolution log");
    constructCmd->callback([&] { code = cmd_surface_construct(in, out, log); });

    auto* certifyCmd = app.add_subcommand("certify", "Check the incompressibility hypotheses");
    certifyCmd->add_option("file", in)->required();
    certifyCmd->add_option("ncrd", ncrd)->required();
    certifyCmd->add_option("-o", out, "Write the certificate");
    certifyCmd->callback([&] { code = cmd_certify(in, ncrd, out); });

    auto* pipelineCmd = app.add_subcommand("pipeline", "Cover, surface and certificate in one run");
    pipelineCmd->add_option("file", in)->required();
    pipelineCmd->add_flag("--force-curvature", force, "Take a branched cover first when edge indices are below 6");
    pipelineCmd->add_option("-o", out, "Output prefix for .itri, .ncrd and .cert");
    pipelineCmd->callback([&] { code = cmd_pipeline(in, force, out); });

    auto* geomCmd = app.add_subcommand("geom", "Hyperbolic constants");
    geomCmd->require_subcommand(1);
    geomCmd->add_subcommand("constants", "h0, l0, quad side and angle")->callback([&] { code = cmd_geom_constants(); });

    auto* exportCmd = app.add_subcommand("export", "Exports");
    exportCmd->require_subcommand(1);
    auto* dualCmd = exportCmd->add_subcommand("dual-graph", "Dual graph in DOT");
    dualCmd->add_option("file", in)->required();
    dualCmd->add_option("-o", out, "Output file");
    dualCmd->callback([&] { code = cmd_dual_graph(in, out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kFailure;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return code;
}
