#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cuspforge/hyperbolic.hpp"

using namespace cuspforge::geom;

namespace {
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
const double kD = std::sqrt(3.0) - std::sqrt(2.0);
}  // namespace

TEST_SUITE("hyperbolic_oracle") {

TEST_CASE("regular ideal tetrahedron") {
    auto v = regular_ideal_tetrahedron();
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(dot(v[i], v[i]) - 1.0) < 1e-12);
        for (int j = i + 1; j < 4; ++j) CHECK(std::abs(dot(v[i], v[j]) + 1.0 / 3.0) < 1e-12);
    }
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) CHECK(std::abs(dihedral_angle(a, b) - std::numbers::pi / 3) < kTol);
}

TEST_CASE("edge midpoints sit at equal radius sqrt3 - sqrt2") {
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            auto p = nearest_point_to_origin(a, b);
            CHECK(std::abs(std::sqrt(dot(p, p)) - kD) < kTol);
        }
}

TEST_CASE("hyperbolic distance") {
    Vec3 p{0, kD, 0}, q{0, 0, kD}, r{0, -kD, 0}, s{0, 0, -kD};
    CHECK(hyperbolic_distance(p, p) == doctest::Approx(0.0));
    CHECK(std::abs(hyperbolic_distance(p, q) - std::acosh(1.5)) < kTol);
    CHECK(std::abs(hyperbolic_distance(p, r) - std::acosh(2.0)) < kTol);
    // Perpendicular axes are adjacent quad corners, whatever the sign.
    CHECK(std::abs(hyperbolic_distance(p, s) - std::acosh(1.5)) < kTol);
    CHECK_THROWS_AS(hyperbolic_distance(Vec3{1, 0, 0}, p), std::domain_error);
}

TEST_CASE("geodesic quad for every opposite edge pair") {
    double side0 = -1, corner0 = -1;
    for (auto [a, b] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{0, 3}}) {
        auto Q = build_quad(a, b);
        CHECK(std::abs(Q.side_length - std::acosh(1.5)) < kTol);
        CHECK(std::abs(Q.diagonal_length - std::acosh(2.0)) < kTol);
        CHECK(std::abs(Q.corner_angle - std::acos(0.2)) < kTol);
        CHECK(std::abs(Q.corner_angle - 1.369438406) < 1e-9);
        CHECK(Q.corner_angle >= std::numbers::pi / 3);
        for (int i = 0; i < 4; ++i) {
            double s = hyperbolic_distance(Q.vertices[i], Q.vertices[(i + 1) % 4]);
            CHECK(std::abs(s - Q.side_length) < kTol);
        }
        if (side0 < 0) {
            side0 = Q.side_length;
            corner0 = Q.corner_angle;
        }
        CHECK(std::abs(Q.side_length - side0) < kTol);
        CHECK(std::abs(Q.corner_angle - corner0) < kTol);
    }
    CHECK_THROWS(build_quad(1, 1));
}

TEST_CASE("quad vertices are coplanar with the origin") {
    auto Q = build_quad(0, 1);
    const auto& v = Q.vertices;
    Vec3 u{v[1][0] - v[0][0], v[1][1] - v[0][1], v[1][2] - v[0][2]};
    Vec3 w{v[2][0] - v[0][0], v[2][1] - v[0][1], v[2][2] - v[0][2]};
    Vec3 n{u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]};
    CHECK(std::abs(dot(n, v[0])) < kTol);
    CHECK(std::abs(dot(n, v[3]) - dot(n, v[0])) < kTol);
}

TEST_CASE("h0 and l0") {
    auto [h0, l0] = constants_h0_l0();
    CHECK(h0 == 2.0);
    CHECK(std::abs(l0 - std::acosh(1.5)) < kTol);
    CHECK(std::abs(l0 - 0.962423650119) < 1e-9);
    CHECK(l0 < std::log(3.0));
    CHECK(std::log(3.0) < h0);
    CHECK(std::abs(build_quad(0, 1).side_length - l0) < kTol);
}

TEST_CASE("horospherical triangle") {
    auto [h0, l0] = constants_h0_l0();
    CHECK(horo_triangle(l0).side_length == doctest::Approx(l0));
    CHECK(horo_triangle(1.0).side_length == 1.0);
    CHECK(horo_triangle(1.0).corner_angle == doctest::Approx(std::numbers::pi / 3));
    CHECK_THROWS_AS(horo_triangle(h0), std::domain_error);
    CHECK_THROWS_AS(horo_triangle(0.0), std::domain_error);
}

TEST_CASE("six corners always reach 2pi") {
    double m = std::min(triangle_corner_angle(), quad_corner_angle());
    CHECK(6 * m >= 2 * std::numbers::pi - 1e-12);
}

}
