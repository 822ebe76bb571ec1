#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cuspforge/ball.hpp"
#include "cuspforge/triangulation.hpp"

namespace cuspforge {

struct CoveringMap {
    Triangulation total;
    Triangulation base;
    std::vector<int> tet_map;               // total tet -> base tet
    std::vector<std::string> sheet_label;   // per total tet
    int degree = 1;
    std::string construction;               // identity | doubling | congruence-p<p>
    // Outcome of the literal doubling when finite_cover had to fall back.
    bool doubling_ucs = true;
    std::string doubling_diagnostic;
};

struct CoverReport {
    bool ok = true;
    std::vector<std::string> failures;
    std::vector<std::string> notes;
};

CoveringMap identity_cover(const Triangulation& T);

// Cut along the ball's boundary pairs and double once per pair family.
CoveringMap doubling_cover(const Triangulation& T);

// Regular cover from the developing map of regular ideal shapes over F_p.
// Needs an orientable input with every edge index a multiple of 6.
std::optional<CoveringMap> congruence_cover(const Triangulation& T, int p);

// Largest doubling finite_cover will build; beyond it only congruence covers are tried.
inline constexpr long long kDoublingTetBudget = 1 << 16;

// Doubling; if it misses the unique common simplex property the failure is
// recorded and the congruence cover is returned instead (when one exists).
CoveringMap finite_cover(const Triangulation& T);

CoverReport verify_covering(const CoveringMap& c);

struct BranchedCoveringMap {
    CoveringMap cover;
    int k = 1;                     // wrap multiple; sheets form Z_k^rank
    int rank = 1;
    std::vector<int> shifts;       // per ball boundary pair, sheet group element base k
    std::vector<int> branch_locus; // base edge classes with wrap > 1
    std::vector<EdgeWeight> weights;
    long long copy_bound = 0;     // k times the product of the weights
    int target_index = 6;
};

// Smallest k, then smallest rank, then lexicographically smallest shifts
// such that every edge index reaches the target.
BranchedCoveringMap branched_cover(const Triangulation& T, int target_index = 6);
// Same search with k fixed; throws if no rank up to the pair count works.
BranchedCoveringMap branched_cover_with_k(const Triangulation& T, int k, int target_index);

CoverReport verify_branched_cover(const BranchedCoveringMap& b);

// Lines "totalTet baseTet sheetLabel".
std::string format_cover_map(const CoveringMap& c);

}  // namespace cuspforge
