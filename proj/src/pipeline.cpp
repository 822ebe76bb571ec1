#include "cuspforge/pipeline.hpp"

#include <chrono>
#include <map>
#include <sstream>

namespace cuspforge {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Certified: return "certified";
        case Verdict::RefutedHypothesis: return "refuted-hypothesis";
        case Verdict::NotApplicable: return "not-applicable";
    }
    return "?";
}

bool Certificate::holds(const std::string& name) const {
    for (const auto& h : hypotheses)
        if (h.name == name) return h.passed;
    return false;
}

Certificate certify(const Triangulation& T, const NormalCoordinates& x) {
    Certificate c;
    c.base_hash = hex64(triangulation_hash(T));
    c.surface_hash = hex64(fnv1a64(serialize_ncrd(x)));
    c.tets = T.size();
    c.provenance = {"is_negatively_curved", "is_solution", "is_admissible", "reconstruct", "is_linking",
                    "surface_curvature_check"};

    auto ec = edge_classes(T);
    int minIndex = 0;
    for (const auto& k : ec.classes) minIndex = minIndex == 0 ? k.index : std::min(minIndex, k.index);
    auto curv = is_negatively_curved(T);
    c.hypotheses.push_back({"allEdgeIndicesAtLeast6", curv.negatively_curved,
                            "minimum edge index " + std::to_string(minIndex) + " over " + std::to_string(ec.classes.size()) +
                                " classes"});

    bool sizeOk = x.tets() == T.size();
    bool normal = sizeOk && !x.is_zero() && is_solution(matching_matrix(T), x);
    c.hypotheses.push_back({"surfaceIsNormal", normal,
                            !sizeOk ? "coordinate vector has the wrong length"
                            : x.is_zero() ? "zero vector"
                            : normal    ? "matching equations hold"
                                        : "matching equations fail"});

    std::optional<DiscComplex> comp;
    int componentCount = 0;
    bool admissible = normal && is_admissible(x);
    std::string admDetail = !normal ? "not reached" : admissible ? "" : "two quad families share a tet";
    if (admissible) {
        try {
            auto D = reconstruct(T, x);
            admissible = D.closed;
            auto parts = components(D);
            componentCount = static_cast<int>(parts.size());
            for (const auto& p : parts)
                if (coordinates_of(p).has_quad()) {
                    comp = p;
                    break;
                }
            if (!comp && !parts.empty()) comp = parts.front();
            admDetail = admissible ? std::to_string(D.F()) + " discs, " + std::to_string(componentCount) + " component(s)"
                                   : "reconstruction has unmatched arcs";
        } catch (const std::exception& e) {
            admissible = false;
            admDetail = e.what();
        }
    }
    c.hypotheses.push_back({"surfaceEmbeddedAdmissible", admissible, admDetail});

    bool linking = true;
    std::string linkDetail = "not reached";
    if (admissible && comp) {
        linking = is_linking(*comp);
        auto q = coordinates_of(*comp).quad_count();
        linkDetail = linking ? "designated component is a linking surface"
                             : "designated component has " + std::to_string(q) + " quad(s), chi " +
                                   std::to_string(euler_characteristic(*comp));
    }
    c.hypotheses.push_back({"surfaceNotLinking", admissible && !linking, linkDetail});

    bool angles = false;
    std::string angleDetail = "not reached";
    if (admissible && comp) {
        auto rep = surface_curvature_check(*comp);
        angles = rep.ok;
        angleDetail = rep.ok ? "every surface vertex has angle sum >= 2pi"
                             : std::to_string(rep.issues.size()) + " vertex issue(s), first: " + rep.issues.front().what;
    }
    c.hypotheses.push_back({"curvatureCheckPassed", angles, angleDetail});

    bool all = true;
    for (const auto& h : c.hypotheses) all = all && h.passed;
    if (all) {
        c.verdict = Verdict::Certified;
        c.notes.push_back("incompressible: every edge index is at least 6 and the surface is a non-linking normal surface");
        c.notes.push_back("not linking is checked up to normal isotopy (a quad is present); ambient isotopy is asserted, not re-proved");
    } else if (c.holds("allEdgeIndicesAtLeast6") && admissible && linking) {
        c.verdict = Verdict::NotApplicable;
        c.notes.push_back("linking surface: incompressible as a cusp link, but not a non-linking surface");
    } else {
        c.verdict = Verdict::RefutedHypothesis;
    }
    if (componentCount > 1) c.notes.push_back("surface has " + std::to_string(componentCount) + " components; the first with a quad is checked");
    return c;
}

std::string serialize_certificate(const Certificate& c) {
    std::map<std::string, std::string> kv;
    kv["base.hash"] = c.base_hash;
    kv["base.tets"] = std::to_string(c.tets);
    kv["surface.hash"] = c.surface_hash;
    kv["verdict"] = verdict_name(c.verdict);
    for (const auto& h : c.hypotheses) kv["hypothesis." + h.name] = (h.passed ? "pass (" : "fail (") + h.detail + ")";
    for (std::size_t i = 0; i < c.notes.size(); ++i) kv["note." + std::to_string(i)] = c.notes[i];
    std::string ops;
    for (const auto& p : c.provenance) ops += (ops.empty() ? "" : ",") + p;
    kv["provenance.checks"] = ops;
    kv["provenance.tool"] = "cuspforge 1.0";
    std::string out = "certificate 1\n";
    for (const auto& [k, v] : kv) out += k + ": " + v + "\n";
    return out;
}

bool replay(const Certificate& c, const Triangulation& T, const NormalCoordinates& x) {
    // Provenance records how the inputs were produced, which a replay cannot see.
    Certificate again = certify(T, x);
    again.provenance = c.provenance;
    return serialize_certificate(again) == serialize_certificate(c);
}

PipelineResult run_main_pipeline(const Triangulation& T, const PipelineOptions& options) {
    using Clock = std::chrono::steady_clock;
    PipelineResult r;
    auto lap = [&, t0 = Clock::now()](const std::string& stage) mutable {
        auto now = Clock::now();
        r.timings.emplace_back(stage, std::chrono::duration<double>(now - t0).count());
        t0 = now;
    };

    auto v = validate(T);
    if (!v.ok) throw PipelineError("invalid triangulation: " + v.violations.front().kind + " " + v.violations.front().detail);
    Triangulation work = T;
    if (!is_negatively_curved(T).negatively_curved) {
        if (!options.force_curvature) throw HypothesisError("some edge index is below 6");
        r.branched = branched_cover(T, 6);
        auto rep = verify_branched_cover(*r.branched);
        if (!rep.ok) throw PipelineError("branched cover check failed: " + rep.failures.front());
        work = r.branched->cover.total;
        lap("branched-cover");
    }
    r.cover = finite_cover(work);
    auto rep = verify_covering(r.cover);
    if (!rep.ok) throw PipelineError("covering check failed: " + rep.failures.front());
    lap("finite-cover");
    try {
        r.surface = construct_nonlinking_surface(r.cover.total, options.surface);
    } catch (const SurfaceError& e) {
        throw PipelineError(std::string("surface stage failed: ") + e.what());
    }
    r.fallback = r.surface.fallback;
    lap("surface");
    r.certificate = certify(r.cover.total, r.surface.x);
    auto& prov = r.certificate.provenance;
    prov.insert(prov.begin(), "finite_cover:" + r.cover.construction);
    if (r.branched) prov.insert(prov.begin(), "branched_cover:k" + std::to_string(r.branched->k));
    lap("certify");
    return r;
}

int exit_code(const PipelineResult& r) {
    switch (r.certificate.verdict) {
        case Verdict::Certified: return r.fallback ? 3 : 0;
        case Verdict::RefutedHypothesis: return 2;
        case Verdict::NotApplicable: return 4;
    }
    return 4;
}

std::string export_dual_graph(const Triangulation& T) {
    auto g = dual_graph(T);
    std::ostringstream os;
    os << "graph dual {\n";
    for (int t = 0; t < g.nodes; ++t) os << "  t" << t << ";\n";
    for (const auto& e : g.edges)
        os << "  t" << e.tet << " -- t" << e.tet2 << " [label=\"" << e.face << ":" << e.face2 << " " << e.perm.str() << "\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace cuspforge
