#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cuspforge/triangulation.hpp"

namespace cuspforge {

// Quad families: 0 = 01|23, 1 = 02|13, 2 = 03|12.
int quad_family(int a, int b);
const char* quad_family_name(int fam);

// Seven coordinates per tet: T0..T3 then Q0..Q2.
struct NormalCoordinates {
    std::vector<int> x;

    NormalCoordinates() = default;
    explicit NormalCoordinates(int tets) : x(static_cast<std::size_t>(7 * tets), 0) {}

    int tets() const { return static_cast<int>(x.size() / 7); }
    int& tri(int t, int v) { return x[static_cast<std::size_t>(7 * t + v)]; }
    int tri(int t, int v) const { return x[static_cast<std::size_t>(7 * t + v)]; }
    int& quad(int t, int fam) { return x[static_cast<std::size_t>(7 * t + 4 + fam)]; }
    int quad(int t, int fam) const { return x[static_cast<std::size_t>(7 * t + 4 + fam)]; }
    // Arcs on face f of t cutting off corner v.
    int arcs(int t, int f, int v) const { return tri(t, v) + quad(t, quad_family(f, v)); }
    bool has_quad() const;
    bool is_zero() const;
    int quad_count() const;
    bool operator==(const NormalCoordinates&) const = default;
    auto operator<=>(const NormalCoordinates&) const = default;
};

bool is_admissible(const NormalCoordinates& x);

struct MatchingRow {
    FaceSlot left;
    FaceSlot right;
    int vertex = -1;  // cut-off vertex, in the left tet's labels
    std::vector<std::pair<int, int>> entries;  // (column, coefficient), sorted by column
};

struct MatchingMatrix {
    int cols = 0;
    std::vector<MatchingRow> rows;
    std::vector<std::vector<int>> dense() const;
};

MatchingMatrix matching_matrix(const Triangulation& T);
bool is_solution(const MatchingMatrix& B, const NormalCoordinates& x);
NormalCoordinates vertex_link(const Triangulation& T, const CuspClass& c);

// All admissible nonzero solutions with every coordinate <= bound, in
// lexicographic order of the coordinate vector.
std::vector<NormalCoordinates> enumerate_solutions(const Triangulation& T, int bound,
                                                   std::size_t limit = std::numeric_limits<std::size_t>::max());

// Constraint search (arc-count variables, per-tet tables, arc consistency)
// for an admissible solution with coordinates <= bound and a quad of the
// given family in the given tet. Returns nullopt when none exists or the
// node budget runs out; `exhausted` tells the two apart.
struct SearchResult {
    std::optional<NormalCoordinates> solution;
    bool exhausted = false;
    long nodes = 0;
};
SearchResult find_solution(const Triangulation& T, int bound, int tet, int family, long node_budget = 200000);

enum class DiscKind { Triangle, Quad, PseudoTriangle, Tunnel };
std::string disc_kind_name(DiscKind k);

struct Disc {
    int tet = -1;
    DiscKind kind = DiscKind::Triangle;
    int type = -1;      // cut-off vertex or quad family
    int position = 0;   // among parallel copies, counted from the cut-off vertex (or the vertex-0 side)
};

struct SurfaceVertex {
    int edge_class = -1;
    int degree = 0;
    int triangle_corners = 0;
    int quad_corners = 0;
    int component = -1;
    double angle_sum() const;
};

struct DiscComplex {
    Triangulation base;
    std::vector<Disc> discs;
    // Disc matched across face f, or -1 (no arc on that face, or unmatched).
    std::vector<std::array<int, 4>> across;
    std::vector<SurfaceVertex> vertices;
    std::vector<std::vector<int>> corner_vertex;  // per disc, in disc_corner_edges order
    std::vector<int> component;          // per disc
    std::vector<bool> component_orientable;
    int edges = 0;
    bool closed = true;

    int component_count() const { return static_cast<int>(component_orientable.size()); }
    int V() const { return static_cast<int>(vertices.size()); }
    int E() const { return edges; }
    int F() const { return static_cast<int>(discs.size()); }
};

// Corners of a triangle or quad as tet edges, in cyclic order around the disc.
std::vector<std::pair<int, int>> disc_corner_edges(DiscKind kind, int type);
// Vertex of the disc's arc on face f (the corner it cuts off), or -1.
int disc_arc_vertex(DiscKind kind, int type, int f);
// Recomputes vertices, edges, components and orientability from discs and across.
void compute_cells(DiscComplex& D);

// Throws std::invalid_argument unless x solves the matching system and is admissible.
DiscComplex reconstruct(const Triangulation& T, const NormalCoordinates& x);
std::vector<DiscComplex> components(const DiscComplex& D);
NormalCoordinates coordinates_of(const DiscComplex& D);

// V - E + F, cross-checked against the angle-sum formula; throws
// std::domain_error on a complex with unmatched arcs.
int euler_characteristic(const DiscComplex& D);
double gauss_bonnet_euler(const DiscComplex& D);

bool is_linking(const DiscComplex& component);

struct VertexCurvatureIssue {
    int vertex = -1;
    int edge_class = -1;
    int degree = 0;
    int edge_index = 0;
    double angle = 0;
    std::string what;
};
struct SurfaceCurvatureReport {
    bool ok = true;
    std::vector<VertexCurvatureIssue> issues;
};
SurfaceCurvatureReport surface_curvature_check(const DiscComplex& D);

// Coordinate files: "ncrd 1", "ntet n", then "tet t T0 T1 T2 T3 Q0 Q1 Q2".
NormalCoordinates parse_ncrd(std::string_view text);
std::string serialize_ncrd(const NormalCoordinates& x);

}  // namespace cuspforge
