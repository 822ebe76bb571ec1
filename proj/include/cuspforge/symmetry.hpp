#pragma once

#include <optional>
#include <vector>

#include "cuspforge/normal.hpp"
#include "cuspforge/triangulation.hpp"

namespace cuspforge {

// Combinatorial automorphism: tet t goes to tet[t], its vertex v to perm[t][v].
struct Automorphism {
    std::vector<int> tet;
    std::vector<Perm4> perm;
    bool is_identity() const;
    bool fixes_a_tet() const;
    bool operator==(const Automorphism&) const = default;
};

// Identity first, then ordered by the image of tet 0.
std::vector<Automorphism> automorphisms(const Triangulation& T);
Automorphism compose(const Automorphism& g, const Automorphism& h);  // g after h

// Subgroups (as indices into autos) in which no non-identity element fixes a
// tet, largest first, built up one cyclic generator at a time.
std::vector<std::vector<int>> free_subgroups(const std::vector<Automorphism>& autos, std::size_t limit = 256);

struct Quotient {
    Triangulation T;
    std::vector<int> rep_of;      // original tet -> quotient tet
    std::vector<Perm4> chart;     // original tet labels -> quotient tet labels
    int order = 1;
};
// nullopt when the group does not act freely or some face is glued to itself.
std::optional<Quotient> quotient(const Triangulation& T, const std::vector<Automorphism>& autos,
                                 const std::vector<int>& subgroup);

// Pull coordinates back along the quotient map.
NormalCoordinates lift(const Quotient& q, const NormalCoordinates& xq);

}  // namespace cuspforge
