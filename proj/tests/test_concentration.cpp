// Unit tests for the probabilistic layer: subsphere samplers, l1 moment
// checks, coordinate tail bounds, and their Monte Carlo validity grids.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "shadow/concentration.hpp"
#include "shadow/linalg.hpp"
#include "shadow/stats.hpp"

using namespace shadow;

namespace {

Vector basis_vector(int dim, int i) {
    Vector e = Vector::Zero(dim);
    e(i) = 1.0;
    return e;
}

}  // namespace

TEST_CASE("pushforward samples are unit vectors orthogonal to y") {
    Rng rng(80801);
    const Vector y = basis_vector(8, 0);
    for (int rep = 0; rep < 50; ++rep) {
        const auto s = prob::pushforward_sample(y, rng);
        CHECK_LT(std::fabs(s.x.dot(y)), 1e-10);  // algebraic, not statistical
        CHECK_EQ(s.x.norm(), doctest::Approx(1.0).epsilon(1e-12));
        CHECK_EQ(s.source, prob::SampleSource::pushforward);
    }
    // The identity holds for any unit y, not only basis directions.
    const Vector z = random_unit_vector(8, rng);
    const auto s = prob::pushforward_sample(z, rng);
    CHECK_LT(std::fabs(s.x.dot(z)), 1e-10);
}

TEST_CASE("pushforward_sample validates its input") {
    Rng rng(80802);
    CHECK_THROWS_AS(prob::pushforward_sample(basis_vector(3, 0), rng), DimensionError);
    CHECK_THROWS_AS(prob::pushforward_sample(2.0 * basis_vector(8, 0), rng), ParameterError);
    CHECK_THROWS_AS(prob::pushforward_sample(Vector::Ones(1), rng), DimensionError);
}

TEST_CASE("direct samples live on the subsphere in any ambient dimension") {
    Rng rng(80803);
    for (int dim : {2, 5, 8}) {
        const Vector y = basis_vector(dim, 0);
        const auto s = prob::direct_sample(y, rng);
        CHECK_LT(std::fabs(s.x.dot(y)), 1e-12);
        CHECK_EQ(s.x.norm(), doctest::Approx(1.0).epsilon(1e-12));
        CHECK_EQ(s.source, prob::SampleSource::direct);
    }
}

TEST_CASE("pushforward and direct samplers agree in law") {
    // Both samplers target the uniform measure on S^{dim-1} intersected with
    // y-perp; compare a linear marginal and the l1 norm by two-sample KS.
    const int dim = 8, draws = 3000;
    const Vector y = basis_vector(dim, 0);
    const Vector w = basis_vector(dim, 1);  // w is orthogonal to y
    Rng rng_push(80804), rng_direct(80805);
    std::vector<double> push_coord, direct_coord, push_l1, direct_l1;
    for (int i = 0; i < draws; ++i) {
        const auto p = prob::pushforward_sample(y, rng_push);
        const auto d = prob::direct_sample(y, rng_direct);
        push_coord.push_back(p.x.dot(w));
        direct_coord.push_back(d.x.dot(w));
        push_l1.push_back(p.x.lpNorm<1>());
        direct_l1.push_back(d.x.lpNorm<1>());
    }
    CHECK(stats::ks_two_sample(push_coord, direct_coord).pass);
    CHECK(stats::ks_two_sample(push_l1, direct_l1).pass);
}

TEST_CASE("l1 expectation check passes its own flags at moderate dimension") {
    const int n = 10, dim = 2 * n;
    Rng rng(80806);
    const auto r = prob::l1_expectation_check(basis_vector(dim, 0), 4000, rng);
    CHECK(r.mean_bound_pass);
    CHECK(r.closed_form_within_5pct);
    CHECK_EQ(r.half_sqrt_n, doctest::Approx(0.5 * std::sqrt(double(n))).epsilon(1e-14));
    // For y = e_1 the closed form collapses to sqrt(2/pi) sqrt(dim - 1).
    CHECK_EQ(r.closed_form,
             doctest::Approx(std::sqrt(2.0 / std::numbers::pi) * std::sqrt(double(dim - 1)))
                 .epsilon(1e-12));
    // Independent oracle: x is uniform on the sphere of the 19-dimensional
    // hyperplane e_1-perp, so E||x||_1 = (dim-1) * E|u_1| on S^{dim-2}.
    const double quadrature = double(dim - 1) * stats::sphere_abs_coord_moment(dim - 1);
    CHECK_EQ(r.stats.mean, doctest::Approx(quadrature).epsilon(0.02));
    CHECK_THROWS_AS(prob::l1_expectation_check(basis_vector(dim, 0), 500, rng), ParameterError);
}

TEST_CASE("linf column stats stay inside the structural bracket") {
    const int n = 3;
    Rng rng(80807);
    const auto s = prob::linf_column_stats(n, 300, rng);
    CHECK_EQ(s.n_samples, 300);
    CHECK_EQ(s.norm, stats::NormKind::linf);
    // ||A e_1||_2 = 1 forces the sup norm into [1/sqrt(2n), 1].
    CHECK_GE(s.quantiles.front().value, 1.0 / std::sqrt(double(2 * n)) - 1e-12);
    CHECK_LE(s.quantiles.back().value, 1.0 + 1e-12);
    CHECK_THROWS_AS(prob::linf_column_stats(1, 300, rng), ParameterError);
    CHECK_THROWS_AS(prob::linf_column_stats(3, 0, rng), ParameterError);
}

TEST_CASE("gaussian linf tail formula, clamp, and monotonicity") {
    const double a = 3.0;
    const double base = 1.0 - std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * a * a) / a;
    CHECK_EQ(prob::gaussian_linf_tail(a, 1), doctest::Approx(base).epsilon(1e-14));
    CHECK_EQ(prob::gaussian_linf_tail(a, 5), doctest::Approx(std::pow(base, 5.0)).epsilon(1e-13));
    CHECK_GT(prob::gaussian_linf_tail(a, 5), prob::gaussian_linf_tail(a, 10));
    CHECK_EQ(prob::gaussian_linf_tail(0.5, 3), 0.0);  // base goes negative
    CHECK_THROWS_AS(prob::gaussian_linf_tail(0.0, 3), ParameterError);
    CHECK_THROWS_AS(prob::gaussian_linf_tail(1.0, 0), ParameterError);
}

TEST_CASE("the tail validity grid reports rather than assumes the bound") {
    // The product formula undercuts the true probability (its per-coordinate
    // factor drops below 1 - 2 Phibar(alpha)), so at alpha = 1 the empirical
    // frequency clearly exceeds it and the grid must record a failure.
    Rng rng(80808);
    const auto cells = prob::gaussian_linf_tail_validity({1.0, 3.0}, {2, 5}, 4000, rng);
    REQUIRE_EQ(cells.size(), 4);
    for (const auto& c : cells) {
        CHECK_GE(c.monte_carlo, 0.0);
        CHECK_LE(c.monte_carlo, 1.0);
        CHECK_GE(c.bound, 0.0);
        CHECK_LE(c.bound, 1.0);
        if (c.alpha == 1.0) CHECK_FALSE(c.bound_holds);
    }
    // Same seed, same grid: bit-identical frequencies.
    Rng rng2(80808);
    const auto again = prob::gaussian_linf_tail_validity({1.0, 3.0}, {2, 5}, 4000, rng2);
    for (std::size_t i = 0; i < cells.size(); ++i)
        CHECK_EQ(cells[i].monte_carlo, again[i].monte_carlo);
    CHECK_THROWS_AS(prob::gaussian_linf_tail_validity({1.0}, {2}, 10, rng), ParameterError);
}

TEST_CASE("chi-square tail bound holds with wide margin in its regime") {
    CHECK_EQ(prob::chi_square_tail(0.3, 50), doctest::Approx(std::exp(-1.125)).epsilon(1e-14));
    for (const double eps : {0.3, 0.5}) {
        const double mc = prob::chi_square_tail_monte_carlo(eps, 50, 20000, RngSeed{80809, 0});
        CHECK_LE(mc, prob::chi_square_tail(eps, 50));
    }
    CHECK_THROWS_AS(prob::chi_square_tail(0.0, 50), ParameterError);
    CHECK_THROWS_AS(prob::chi_square_tail(1.0, 50), ParameterError);
    CHECK_THROWS_AS(prob::chi_square_tail(0.3, 0), ParameterError);
    CHECK_THROWS_AS(prob::chi_square_tail_monte_carlo(0.3, 50, 0, RngSeed{1, 0}),
                    ParameterError);
}

TEST_CASE("chi-square Monte Carlo is reproducible and thread-count invariant") {
    const RngSeed seed{80810, 3};
    const double one = prob::chi_square_tail_monte_carlo(0.3, 20, 30000, seed, 1);
    const double four = prob::chi_square_tail_monte_carlo(0.3, 20, 30000, seed, 4);
    const double again = prob::chi_square_tail_monte_carlo(0.3, 20, 30000, seed, 1);
    CHECK_EQ(one, four);
    CHECK_EQ(one, again);
}

TEST_CASE("lipschitz tail rows are a decreasing survival curve") {
    Rng rng(80811);
    const auto rows = prob::lipschitz_tail_empirical("l1_norm", 2, {0.0, 0.2, 10.0}, 500, rng);
    REQUIRE_EQ(rows.size(), 3);
    CHECK_EQ(rows[0].prob, 1.0);   // every deviation is >= 0
    CHECK_EQ(rows[2].prob, 0.0);   // the l1 norm lives in [1, 2] at n = 2
    CHECK_GE(rows[0].prob, rows[1].prob);
    CHECK_GE(rows[1].prob, rows[2].prob);
    CHECK_THROWS_AS(prob::lipschitz_tail_empirical("l2_norm", 2, {0.1}, 500, rng),
                    ParameterError);
    CHECK_THROWS_AS(prob::lipschitz_tail_empirical("l1_norm", 2, {0.1}, 50, rng),
                    ParameterError);
}
