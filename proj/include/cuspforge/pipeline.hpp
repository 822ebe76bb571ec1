#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuspforge/coverings.hpp"
#include "cuspforge/normal.hpp"
#include "cuspforge/surface.hpp"
#include "cuspforge/triangulation.hpp"

namespace cuspforge {

enum class Verdict { Certified, RefutedHypothesis, NotApplicable };
std::string verdict_name(Verdict v);

struct HypothesisCheck {
    std::string name;  // allEdgeIndicesAtLeast6, surfaceIsNormal, ...
    bool passed = false;
    std::string detail;
};

struct Certificate {
    std::string base_hash;     // of the triangulation the surface lives in
    std::string surface_hash;  // of the serialized coordinates
    int tets = 0;
    std::vector<HypothesisCheck> hypotheses;  // fixed order
    Verdict verdict = Verdict::NotApplicable;
    std::vector<std::string> notes;
    std::vector<std::string> provenance;

    bool holds(const std::string& name) const;
};

// Checks, in order: edge indices >= 6, x a closed normal surface, admissible,
// the designated component not linking, and the surface angle check.
Certificate certify(const Triangulation& T, const NormalCoordinates& x);

// Key-sorted "key: value" lines.
std::string serialize_certificate(const Certificate& c);

// Recomputes every check from scratch and compares the serialized reports.
bool replay(const Certificate& c, const Triangulation& T, const NormalCoordinates& x);

// Hypothesis failure: exit code 2.
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Any other stage failure: exit code 4.
struct PipelineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PipelineOptions {
    bool force_curvature = false;
    SurfaceOptions surface;
};

struct PipelineResult {
    std::optional<BranchedCoveringMap> branched;
    CoveringMap cover;
    SurfaceResult surface;
    Certificate certificate;
    bool fallback = false;
    std::vector<std::pair<std::string, double>> timings;  // stage, seconds
};

// Validate, optionally raise edge indices by a branched cover, take the
// finite cover, build the surface there and certify it.
PipelineResult run_main_pipeline(const Triangulation& T, const PipelineOptions& options = {});

// 0 certified, 2 refuted hypothesis, 3 certified via the fallback, 4 otherwise.
int exit_code(const PipelineResult& r);

// Graphviz text: one node per tet, one edge per glued face pair labelled
// with the faces and the permutation.
std::string export_dual_graph(const Triangulation& T);

}  // namespace cuspforge
