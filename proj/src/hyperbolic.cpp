#include "cuspforge/hyperbolic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cuspforge::geom {

namespace {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

// Solve the 3x3 system rows·x = rhs by Cramer's rule.
Vec3 solve3(const std::array<Vec3, 3>& m, const Vec3& rhs) {
    auto det = [](const std::array<Vec3, 3>& a) {
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    double d = det(m);
    Vec3 x{};
    for (int c = 0; c < 3; ++c) {
        auto mc = m;
        for (int r = 0; r < 3; ++r) mc[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = rhs[static_cast<std::size_t>(r)];
        x[static_cast<std::size_t>(c)] = det(mc) / d;
    }
    return x;
}

// Sphere orthogonal to the unit sphere through the face opposite vertex f.
std::pair<Vec3, double> face_sphere(int f) {
    auto v = regular_ideal_tetrahedron();
    std::array<Vec3, 3> rows{};
    int k = 0;
    for (int i = 0; i < 4; ++i)
        if (i != f) rows[static_cast<std::size_t>(k++)] = v[static_cast<std::size_t>(i)];
    Vec3 c = solve3(rows, {1, 1, 1});
    return {c, std::sqrt(dot(c, c) - 1.0)};
}

}  // namespace

std::array<Vec3, 4> regular_ideal_tetrahedron() {
    const double s = 1.0 / std::sqrt(3.0);
    return {{{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}}};
}

double dihedral_angle(int a, int b) {
    if (a == b || a < 0 || b < 0 || a > 3 || b > 3) throw std::invalid_argument("bad edge");
    // The edge {a,b} is where the faces opposite the other two vertices meet.
    int f1 = -1, f2 = -1;
    for (int i = 0; i < 4; ++i)
        if (i != a && i != b) (f1 < 0 ? f1 : f2) = i;
    auto [c1, r1] = face_sphere(f1);
    auto [c2, r2] = face_sphere(f2);
    Vec3 d{c1[0] - c2[0], c1[1] - c2[1], c1[2] - c2[2]};
    double between = std::acos((r1 * r1 + r2 * r2 - dot(d, d)) / (2 * r1 * r2));
    return std::numbers::pi - between;
}

Vec3 nearest_point_to_origin(int a, int b) {
    auto v = regular_ideal_tetrahedron();
    const Vec3& u = v[static_cast<std::size_t>(a)];
    const Vec3& w = v[static_cast<std::size_t>(b)];
    // Circle orthogonal to the sphere through u and w, in the plane spanned by them.
    Vec3 centre = scale(add(u, w), 1.0 / (1.0 + dot(u, w)));
    double cn = std::sqrt(dot(centre, centre));
    double radius = std::sqrt(cn * cn - 1.0);
    return scale(centre, (cn - radius) / cn);
}

double hyperbolic_distance(const Vec3& p, const Vec3& q) {
    double np = dot(p, p), nq = dot(q, q);
    if (np >= 1.0 - 1e-15 || nq >= 1.0 - 1e-15) throw std::domain_error("hyperbolic_distance needs interior points");
    Vec3 d{p[0] - q[0], p[1] - q[1], p[2] - q[2]};
    double x = 1.0 + 2.0 * dot(d, d) / ((1.0 - np) * (1.0 - nq));
    return std::acosh(std::max(1.0, x));
}

double law_of_cosines_angle(double a, double b, double c) {
    return std::acos((std::cosh(a) * std::cosh(b) - std::cosh(c)) / (std::sinh(a) * std::sinh(b)));
}

GeometricQuad build_quad(int a, int b) {
    if (a == b || a < 0 || b < 0 || a > 3 || b > 3) throw std::invalid_argument("bad opposite edge pair");
    int c = -1, d = -1;
    for (int i = 0; i < 4; ++i)
        if (i != a && i != b) (c < 0 ? c : d) = i;
    GeometricQuad Q;
    // Boundary order a-c, a-d, b-d, b-c.
    Q.vertices = {nearest_point_to_origin(a, c), nearest_point_to_origin(a, d), nearest_point_to_origin(b, d),
                  nearest_point_to_origin(b, c)};
    Q.side_length = hyperbolic_distance(Q.vertices[0], Q.vertices[1]);
    Q.diagonal_length = hyperbolic_distance(Q.vertices[0], Q.vertices[2]);
    Q.corner_angle = law_of_cosines_angle(Q.side_length, hyperbolic_distance(Q.vertices[0], Q.vertices[3]), Q.diagonal_length);
    return Q;
}

std::pair<double, double> constants_h0_l0() {
    // Horocycle at height 1 between the vertical geodesics x = -1 and x = 1: ∫ dx / y.
    const double height = 1.0;
    double h0 = (1.0 - (-1.0)) / height;
    // Incentre (0, √3). Feet of perpendiculars: on |z| = 1 straight below it, and on
    // x = 1 where the circle centred at (1,0) through the incentre meets it.
    const double yc = std::sqrt(3.0);
    double foot1x = 0.0, foot1y = 1.0;
    double r = std::sqrt(1.0 + yc * yc);
    double foot2x = 1.0, foot2y = r;
    double dx = foot1x - foot2x, dy = foot1y - foot2y;
    double l0 = std::acosh(1.0 + (dx * dx + dy * dy) / (2.0 * foot1y * foot2y));
    return {h0, l0};
}

HoroTriangle horo_triangle(double s) {
    if (!(s > 0.0 && s < 2.0)) throw std::domain_error("horo_triangle scale must lie in (0, 2)");
    return {s, std::numbers::pi / 3.0};
}

double quad_corner_angle() { return std::acos(0.2); }
double triangle_corner_angle() { return std::numbers::pi / 3.0; }

}  // namespace cuspforge::geom
