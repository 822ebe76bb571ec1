#pragma once

#include <string>
#include <vector>

#include "cuspforge/triangulation.hpp"

namespace cuspforge {

struct BoundaryPair {
    FaceSlot first;
    FaceSlot second;
    Perm4 perm;  // gluing from first to second
};

// A tree of tetrahedra. Ball tets are numbered in attachment order; full holds
// every gluing of the base under that numbering, interior marks the tree faces.
struct Ball {
    Triangulation base;
    Triangulation full;
    std::vector<int> copy_of;
    std::vector<std::array<bool, 4>> interior;

    int size() const { return full.size(); }
    bool is_interior(FaceSlot s) const {
        return interior[static_cast<std::size_t>(s.tet)][static_cast<std::size_t>(s.face)];
    }
    FaceSlot partner(FaceSlot s) const { return full.partner(s.tet, s.face); }
    Triangulation shape() const;  // interior gluings only; boundary faces left open
    std::vector<std::pair<FaceSlot, FaceSlot>> tree() const;
    std::vector<BoundaryPair> boundary_pairs() const;
};

// A boundary face of a ball together with one of its edges, in tet-local labels.
struct FaceEdge {
    int tet = -1;
    int face = -1;
    int a = -1;
    int b = -1;
    FaceSlot slot() const { return {tet, face}; }
    bool operator==(const FaceEdge&) const = default;
};

struct BallError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Ball unfold(const Triangulation& T);

// Checks every ball invariant; returns an empty string when all hold.
std::string check_ball(const Ball& B);

// From a boundary face, rotate around edge {a,b} through interior faces until the
// next boundary face. wedges (optional) receives the number of wedges passed.
FaceEdge rotate_to_boundary(const Ball& B, FaceEdge from, int* wedges = nullptr);
// Cross a boundary face through its pairing.
FaceEdge jump(const Ball& B, FaceEdge from);

// Boundary faces G between F1′ and F2′ around the image of edge e (F1 and F2 meet along e).
std::vector<FaceSlot> distance_chain(const Ball& B, FaceEdge F1, FaceSlot F2);
int face_distance(const Ball& B, FaceEdge F1, FaceSlot F2);

// Removes tree face R and glues the boundary pair G1–G1p.
Ball cut_and_reglue(const Ball& B, FaceSlot R, FaceSlot G1, FaceSlot G1p);
// Tree faces on the path between the tets of G1 and G1p (candidates for R).
std::vector<FaceSlot> tree_path(const Ball& B, int from, int to);

struct EdgeWeight {
    int base_class = -1;
    int m = 0;                       // boundary pairs crossed in one cycle
    std::vector<int> segment_wedges;  // wedges between consecutive crossings
};
std::vector<EdgeWeight> boundary_weights(const Ball& B);

std::string format_ball(const Ball& B);

}  // namespace cuspforge
