// Unit tests for the planar shadow: generator projection, exact area,
// vertex-chain diameter, support function, and the brute-force hull oracle.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "shadow/linalg.hpp"
#include "shadow/rng.hpp"
#include "shadow/zonogon.hpp"

using namespace shadow;

namespace {

Zonogon random_zonogon(int m, Rng& rng) {
    Zonogon z;
    for (int i = 0; i < m; ++i) z.generators.emplace_back(rng.gaussian(), rng.gaussian());
    return z;
}

}  // namespace

TEST_CASE("the two-generator square has known area, diameter, and support") {
    Zonogon z;
    z.generators = {{1.0, 0.0}, {0.0, 1.0}};  // the square [-1,1]^2
    CHECK_EQ(area(z), 4.0);
    CHECK_EQ(diameter(z), doctest::Approx(2.0 * std::numbers::sqrt2).epsilon(1e-14));
    CHECK_EQ(support(z, 0.0), doctest::Approx(1.0).epsilon(1e-14));
    CHECK_EQ(support(z, std::numbers::pi / 4.0),
             doctest::Approx(std::numbers::sqrt2).epsilon(1e-14));
    const auto hull = hull_oracle(z);
    CHECK_EQ(hull.area, doctest::Approx(4.0).epsilon(1e-14));
    CHECK_EQ(hull.diameter, doctest::Approx(2.0 * std::numbers::sqrt2).epsilon(1e-14));
}

TEST_CASE("area and diameter match the hull oracle on random generators") {
    Rng rng(60601);
    for (int m = 3; m <= 8; ++m) {
        for (int rep = 0; rep < 6; ++rep) {
            const Zonogon z = random_zonogon(m, rng);
            const auto hull = hull_oracle(z);
            CHECK_EQ(area(z), doctest::Approx(hull.area).epsilon(1e-8));
            CHECK_EQ(diameter(z), doctest::Approx(hull.diameter).epsilon(1e-8));
        }
    }
}

TEST_CASE("diameter equals twice the maximal support over directions") {
    Rng rng(60602);
    const Zonogon z = random_zonogon(10, rng);
    double grid_best = 0.0;
    const int steps = 10000;
    for (int i = 0; i < steps; ++i) {
        const double theta = std::numbers::pi * double(i) / steps;
        grid_best = std::max(grid_best, 2.0 * support(z, theta));
    }
    const double d = diameter(z);
    // The grid scans only finitely many directions, so it can only fall
    // short of the true maximum, and at this resolution barely so.
    CHECK_GE(d, grid_best - 1e-9);
    CHECK_LE(d, grid_best * (1.0 + 1e-6));
}

TEST_CASE("zero and parallel generators are canonicalized before walking the chain") {
    Zonogon z;
    z.generators = {{1.0, 0.0}, {2.0, 0.0}, {-3.0, 0.0}, {0.0, 0.0}, {1e-16, -1e-16}};
    // All mass lies on one segment [-6, 6] x {0}.
    const auto chain = vertices(z);
    REQUIRE_EQ(chain.size(), 2);
    CHECK_EQ(chain.front().x(), doctest::Approx(-6.0).epsilon(1e-12));
    CHECK_EQ(chain.back().x(), doctest::Approx(6.0).epsilon(1e-12));
    CHECK_EQ(diameter(z), doctest::Approx(12.0).epsilon(1e-12));
    CHECK_EQ(area(z), doctest::Approx(0.0).epsilon(1e-12));
    const auto hull = hull_oracle(z);
    CHECK_EQ(hull.diameter, doctest::Approx(12.0).epsilon(1e-12));
    CHECK_EQ(hull.area, doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("a single generator gives a segment of twice its length") {
    Zonogon z;
    z.generators = {{0.0, -1.5}};
    CHECK_EQ(diameter(z), doctest::Approx(3.0).epsilon(1e-14));
    CHECK_EQ(area(z), 0.0);
    const auto chain = vertices(z);
    REQUIRE_EQ(chain.size(), 2);
    CHECK_EQ((chain.front() + chain.back()).norm(), doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("hull oracle refuses more than 14 generators") {
    Rng rng(60603);
    const Zonogon z = random_zonogon(15, rng);
    CHECK_THROWS_AS(hull_oracle(z), DimensionError);
    CHECK_GT(area(z), 0.0);  // the closed-form area has no such limit
}

TEST_CASE("projected generators of the identity rotation are coordinate pairs") {
    const int n = 2;
    Vector e = Vector::Zero(2 * n);
    e(0) = 1.0;
    const Zonogon z = project_generators(Matrix::Identity(2 * n, 2 * n), make_complex_line(e));
    REQUIRE_EQ(z.generators.size(), 4);
    CHECK_EQ(z.generators[0].x(), 1.0);  // (O^T e)_0
    CHECK_EQ(z.generators[2].y(), 1.0);  // (O^T Je)_2
    CHECK_EQ(area(z), 4.0);              // the shadow is the square
}

TEST_CASE("projected generator norms sum to two for an orthonormal line basis") {
    const int n = 5;
    const Matrix O = haar_orthogonal(2 * n, RngSeed{60604, 0});
    Rng rng(60605);
    const ComplexLine line = make_complex_line(random_unit_vector(2 * n, rng));
    const Zonogon z = project_generators(O, line);
    double sq = 0.0;
    for (const auto& g : z.generators) sq += g.squaredNorm();
    CHECK_EQ(sq, doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("project_generators validates shapes and the line basis") {
    const Matrix O = Matrix::Identity(4, 4);
    Vector e = Vector::Zero(6);
    e(0) = 1.0;
    CHECK_THROWS_AS(project_generators(O, make_complex_line(e)), DimensionError);
    ComplexLine crooked;
    crooked.e = Vector::Zero(4);
    crooked.e(0) = 2.0;  // not unit length
    crooked.je = apply_complex_structure(crooked.e);
    CHECK_THROWS_AS(project_generators(O, crooked), ParameterError);
}

TEST_CASE("vertex chain closes into a polygon whose shoelace area matches") {
    Rng rng(60606);
    const Zonogon z = random_zonogon(20, rng);
    const auto half = vertices(z);
    REQUIRE_GE(half.size(), 3);
    // Full boundary: the half-chain followed by its reflection.
    std::vector<Eigen::Vector2d> cycle(half.begin(), half.end() - 1);
    for (std::size_t i = 0; i + 1 < half.size(); ++i) cycle.push_back(-half[i]);
    double twice_area = 0.0;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const auto& p = cycle[i];
        const auto& q = cycle[(i + 1) % cycle.size()];
        twice_area += p.x() * q.y() - p.y() * q.x();
    }
    CHECK_EQ(std::fabs(twice_area) / 2.0, doctest::Approx(area(z)).epsilon(1e-10));
}

TEST_CASE("support function has period pi in effect") {
    Rng rng(60607);
    const Zonogon z = random_zonogon(6, rng);
    for (double theta : {0.3, 1.1, 2.9}) {
        CHECK_EQ(support(z, theta), doctest::Approx(support(z, theta + std::numbers::pi))
                                        .epsilon(1e-12));
    }
}

TEST_CASE("scaling the generators scales area quadratically and diameter linearly") {
    Rng rng(60608);
    Zonogon z = random_zonogon(7, rng);
    Zonogon scaled = z;
    for (auto& g : scaled.generators) g *= 2.0;
    CHECK_EQ(area(scaled), doctest::Approx(4.0 * area(z)).epsilon(1e-12));
    CHECK_EQ(diameter(scaled), doctest::Approx(2.0 * diameter(z)).epsilon(1e-12));
}
