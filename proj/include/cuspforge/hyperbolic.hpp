#pragma once

#include <array>
#include <utility>

namespace cuspforge::geom {

using Vec3 = std::array<double, 3>;

inline constexpr double kTol = 1e-9;

struct GeometricQuad {
    std::array<Vec3, 4> vertices;  // in boundary order
    double side_length = 0;
    double diagonal_length = 0;
    double corner_angle = 0;
};

struct HoroTriangle {
    double side_length = 0;
    double corner_angle = 0;
};

// Ideal vertices (±1,±1,±1)/√3 with an even number of minus signs; vertex 0 = (1,1,1)/√3.
std::array<Vec3, 4> regular_ideal_tetrahedron();

// Interior dihedral angle of the ideal tetrahedron along the edge {a,b}.
double dihedral_angle(int a, int b);

// Point of the geodesic between ideal vertices a and b closest to the origin.
Vec3 nearest_point_to_origin(int a, int b);

// Poincaré ball distance; throws std::domain_error on ideal or exterior points.
double hyperbolic_distance(const Vec3& p, const Vec3& q);

// Quad separating {a,b} from the other two vertices.
GeometricQuad build_quad(int a, int b);

// Angle at the vertex opposite side c in a hyperbolic triangle with sides a, b, c.
double law_of_cosines_angle(double a, double b, double c);

// Upper half-plane computation on the ideal triangle (-1,0),(1,0),∞.
std::pair<double, double> constants_h0_l0();

// Equilateral horospherical triangle; scale must lie in (0, 2).
HoroTriangle horo_triangle(double scale);

double quad_corner_angle();  // arccos(1/5)
double triangle_corner_angle();  // π/3

}  // namespace cuspforge::geom
