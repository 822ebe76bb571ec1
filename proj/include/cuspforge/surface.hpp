#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuspforge/ball.hpp"
#include "cuspforge/normal.hpp"
#include "cuspforge/triangulation.hpp"

namespace cuspforge {

struct SurfaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DiscSlot {
    DiscKind kind = DiscKind::Triangle;
    int type = -1;
    bool operator==(const DiscSlot&) const = default;
};

// Arc of a disc boundary on a boundary face of a ball. It cuts off `vertex`,
// entering on edge {vertex, from} and leaving on edge {vertex, to}.
struct BoundaryArc {
    int tet = -1;
    int face = -1;
    int vertex = -1;
    int from = -1;
    int to = -1;
    FaceSlot slot() const { return {tet, face}; }
    bool operator==(const BoundaryArc&) const = default;
};

// At most one disc per ball tet; `boundary` is the closed boundary curve in order.
struct PartialDisc {
    Ball ball;
    std::vector<std::optional<DiscSlot>> disc;
    int seed_tet = -1;
    int seed_family = -1;
    std::vector<BoundaryArc> boundary;

    int disc_count() const;
    int quad_count() const;
    // Same discs in the same base tets.
    bool same_discs(const PartialDisc& other) const;
};

// Quad of the given family in `tet`, closed up by triangles through interior faces.
PartialDisc extend_quad(const Ball& B, int tet, int family);
// Disc in B bounded by the given boundary arcs (triangles unless two arcs force a quad).
PartialDisc extend_curve(const Ball& B, const std::vector<BoundaryArc>& arcs);

struct TransportResult {
    std::vector<BoundaryArc> image;     // image[i] = arc i pushed through its boundary pair
    std::vector<int> gaps;              // boundary faces between image i and image i+1
    std::vector<std::vector<int>> pieces;  // maximal runs of image arcs with zero gaps
    int measure = 0;                    // sum of gaps
};
TransportResult transport_boundary(const Ball& B, const std::vector<BoundaryArc>& curve);

struct ReconnectResult {
    bool ok = false;
    Ball ball;
    std::optional<PartialDisc> image_disc;
    int iterations = 0;
    std::vector<int> measures;  // measure before the first step and after each step
    std::string failure;        // "stuck", "cap", or the reason the image has no disc
};
// cap < 0 selects 6 * tets * boundary pairs.
ReconnectResult reconnect(const PartialDisc& disc, int cap = -1);

enum class CrossingKind { QuadQuad, TriQuad, TriTri, Parallel };
std::string crossing_kind_name(CrossingKind k);

struct CrossingRecord {
    int tet = -1;
    int first = -1;   // disc index
    int second = -1;
    CrossingKind kind = CrossingKind::Parallel;
};

// Union of discs from two layers in the base triangulation, with arcs matched
// across every face.
struct SingularSurface {
    DiscComplex complex;
    std::vector<int> layer;  // per disc
    std::vector<CrossingRecord> crossings;
    int seed_disc = -1;
};

// C and its partner disc glued along c = c′ (the partner lives in the reglued ball).
SingularSurface pair_discs(const PartialDisc& disc, const PartialDisc& partner);
// Two closed normal surfaces laid over each other; seed_disc is the first quad.
SingularSurface overlay(const Triangulation& T, const NormalCoordinates& first, const NormalCoordinates& second);

// Pieces of disc boundaries inside one tet. Points are labelled globally.
struct GeneralizedArc {
    int face = -1;
    int edge_a = -1;  // tet edge index 0..5
    int edge_b = -1;
    int point_a = -1;
    int point_b = -1;
    int across_disc = -1;
    int across_arc = -1;
    bool returning() const { return edge_a == edge_b; }
};

struct GeneralizedDisc {
    int tet = -1;
    DiscKind kind = DiscKind::Triangle;
    int type = -1;       // vertex or family after reduction; -1 for tunnels
    int reductions = 0;  // returning arcs pushed across their edge
    std::vector<GeneralizedArc> arcs;  // cyclic order
};

// Per face: arc count and the multiset of edges carrying endpoints.
std::string arc_checksum(const std::vector<GeneralizedDisc>& discs);

struct LocalSurgery {
    std::vector<GeneralizedDisc> inputs;
    std::vector<GeneralizedDisc> outputs;
    std::vector<int> crossing_faces;  // ascending
    std::vector<int> choices;         // smoothing per crossing face
    std::string checksum_before;
    std::string checksum_after;
};

// Two quads of different families in one tet, the first nearer the lower end of
// every shared edge. Branch 'b' and 'c' are the two consistent smoothings.
LocalSurgery quadrilateral_surgery(int family_a, int family_b, char branch);
// Triangle at `vertex` and a quad; with `beyond` the triangle sits past the quad
// on both shared edges so the two cross. Essential keeps a triangle and a quad;
// otherwise a tunnel is produced.
LocalSurgery triangular_surgery(int vertex, int family, bool essential, bool beyond = true);

struct TrivialIsotopy {
    std::array<int, 2> order{0, 1};  // nearest the shared vertex first
    bool nested = false;
};
TrivialIsotopy trivial_isotopy(int vertex_a, int vertex_b, std::array<int, 2> order = {0, 1});

struct TunnelChain {
    std::vector<int> discs;
    bool closed = false;
};
struct GeneralizedSurface {
    Triangulation base;
    std::vector<GeneralizedDisc> discs;
    std::vector<TunnelChain> tunnel_chains() const;
};
// A chain of tunnel discs glued through their tunnel faces that closes up.
std::optional<TunnelChain> detect_cyclic_tunnel(const GeneralizedSurface& S);

struct ResolutionStep {
    int tet = -1;
    std::string kinds;   // e.g. "quad/quad"
    std::string branch;  // b, c, essential, non-essential, isotopy
    std::string checksum_before;
    std::string checksum_after;
    bool conserved() const { return checksum_before == checksum_after; }
};

struct ResolveOptions {
    bool irregular_start = false;
    long cap = -1;  // < 0: 4 * discs^2
};

struct ResolveResult {
    bool ok = false;
    NormalCoordinates x;
    GeneralizedSurface surface;
    std::vector<ResolutionStep> log;
    int double_curves = 0;
    int pseudo_triangles = 0;
    int pseudo_conversions = 0;
    int tunnels = 0;
    bool cyclic_tunnel_fixed = false;
    std::string failure;
};
ResolveResult resolve(const SingularSurface& S, const ResolveOptions& options = {});

struct SurfaceOptions {
    int fallback_max_bound = 3;
    long node_budget = 200000;
};

struct SurfaceResult {
    NormalCoordinates x;
    bool fallback = false;
    int start_family = -1;
    std::string fallback_reason;
    std::string fallback_route;  // "direct" or "quotient-<tets>"
    std::vector<std::string> log;
    std::vector<ResolutionStep> steps;
};

// Throws SurfaceError when T fails the unique common simplex check.
SurfaceResult construct_nonlinking_surface(const Triangulation& T, const SurfaceOptions& options = {});
std::string format_resolution_log(const SurfaceResult& r);

}  // namespace cuspforge
