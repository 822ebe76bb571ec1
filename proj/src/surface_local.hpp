#pragma once

// Arc bookkeeping inside a single tetrahedron, shared by the local surgeries
// and the global resolution.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cuspforge/surface.hpp"

namespace cuspforge::local {

inline std::size_t ix(int v) { return static_cast<std::size_t>(v); }

inline const std::array<std::array<int, 2>, 6>& edge_ends() { return kEdgeVerts; }

// Shared endpoint of two distinct tet edges, or -1.
int common_vertex(int e1, int e2);

struct Arc {
    int face = -1;
    int ea = -1, eb = -1;  // tet edges of the endpoints
    int pa = -1, pb = -1;  // point labels
    int owner = -1;        // input disc, -1 once smoothed
};

// Arcs of a triangle or quad whose corner on tet edge e is the point corner[e].
std::vector<Arc> disc_arcs(DiscKind kind, int type, const std::array<int, 6>& corner, int owner);

// Position on the boundary circle of face f of a point on tet edge e, given its
// rank from the lower-numbered end among `count` points on that edge.
double circle_pos(int face, int edge, int rank, int count);

bool interleaved(double a1, double a2, double b1, double b2);

// Re-pair the endpoints of two crossing arcs: 0 joins the smaller points of
// each arc, 1 joins the smaller of the first with the larger of the second.
std::array<Arc, 2> smooth(const Arc& A, const Arc& B, int choice);

// Choice index as read off the face circle: 0 = (p0p1, p2p3), 1 = (p0p3, p1p2).
int circle_choice(const Arc& A, const Arc& B, int choice, const std::array<double, 4>& posOfEndpoints);

// Closed curves formed by arcs that meet at shared points; nullopt if some
// point does not lie on exactly two arcs.
std::optional<std::vector<std::vector<Arc>>> trace(const std::vector<Arc>& arcs);

struct Classified {
    bool ok = false;
    DiscKind kind = DiscKind::Triangle;
    int type = -1;
    int reductions = 0;
    std::string why;
};
Classified classify(const std::vector<Arc>& curve);

GeneralizedDisc to_disc(int tet, const std::vector<Arc>& curve, const Classified& c);

}  // namespace cuspforge::local
