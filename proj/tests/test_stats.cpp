// Unit tests for the statistics toolkit: KS and chi-square tests, sphere
// coordinate marginals, summary statistics, and log-log power-law fits.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "shadow/errors.hpp"
#include "shadow/rng.hpp"
#include "shadow/stats.hpp"

using namespace shadow;

TEST_CASE("simpson integrates smooth functions") {
    const double pi = std::numbers::pi;
    const double s = stats::simpson([](double x) { return std::sin(x); }, 0.0, pi, 2000);
    CHECK_EQ(s, doctest::Approx(2.0).epsilon(1e-10));
    // Simpson is exact on cubics, so x^2 needs only the minimum panel count.
    const double q = stats::simpson([](double x) { return x * x; }, 0.0, 1.0, 2);
    CHECK_EQ(q, doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    // Odd interval counts are rounded up rather than rejected.
    const double r = stats::simpson([](double x) { return x; }, 0.0, 2.0, 3);
    CHECK_EQ(r, doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("sphere coordinate moments match closed forms") {
    const double pi = std::numbers::pi;
    CHECK_EQ(stats::sphere_abs_coord_moment(2), doctest::Approx(2.0 / pi).epsilon(1e-8));
    CHECK_EQ(stats::sphere_abs_coord_moment(3), doctest::Approx(0.5).epsilon(1e-8));
    CHECK_EQ(stats::sphere_abs_coord_moment(4), doctest::Approx(4.0 / (3.0 * pi)).epsilon(1e-8));
    CHECK_THROWS_AS(stats::sphere_abs_coord_moment(1), ParameterError);
}

TEST_CASE("sphere coordinate cdf reduces to the uniform law in dimension 3") {
    // On S^2 each coordinate is uniform on [-1, 1] (Archimedes), so the cdf
    // must be (t + 1) / 2.
    for (double t : {-0.9, -0.5, 0.0, 0.25, 0.8}) {
        CHECK_EQ(stats::sphere_coord_cdf(3, t), doctest::Approx((t + 1.0) / 2.0).epsilon(1e-8));
    }
    CHECK_EQ(stats::sphere_coord_cdf(5, -1.0), 0.0);
    CHECK_EQ(stats::sphere_coord_cdf(5, 1.0), 1.0);
    CHECK_LT(stats::sphere_coord_cdf(7, -0.3), stats::sphere_coord_cdf(7, 0.3));
    CHECK_THROWS_AS(stats::sphere_coord_cdf(1, 0.0), ParameterError);
}

TEST_CASE("two-sample KS accepts identical laws and rejects a clear shift") {
    Rng rng(2026'0101);
    std::vector<double> a, b, shifted;
    for (int i = 0; i < 1500; ++i) {
        a.push_back(rng.gaussian());
        b.push_back(rng.gaussian());
        shifted.push_back(rng.gaussian() + 0.6);
    }
    CHECK(stats::ks_two_sample(a, b).pass);
    // A 0.6 mean shift gives a true KS distance near 0.24, far above the
    // 1e-3 critical value (about 0.07 at this sample size).
    const auto bad = stats::ks_two_sample(a, shifted);
    CHECK_FALSE(bad.pass);
    CHECK_GT(bad.d_stat, bad.d_crit);
    CHECK_THROWS_AS(stats::ks_two_sample({}, a), ParameterError);
    CHECK_THROWS_AS(stats::ks_two_sample(a, b, 0.0), ParameterError);
    CHECK_THROWS_AS(stats::ks_two_sample(a, b, 1.0), ParameterError);
}

TEST_CASE("one-sample KS distinguishes the uniform cdf from a wrong one") {
    Rng rng(2026'0202);
    std::vector<double> u;
    for (int i = 0; i < 2000; ++i) u.push_back(rng.uniform01());
    CHECK(stats::ks_one_sample(u, [](double t) { return t; }).pass);
    // Against t^2 the deviation peaks near 0.25 at t = 1/2.
    const auto bad = stats::ks_one_sample(u, [](double t) { return t * t; });
    CHECK_FALSE(bad.pass);
    CHECK_GT(bad.d_stat, 0.15);
    CHECK_THROWS_AS(stats::ks_one_sample({}, [](double t) { return t; }), ParameterError);
}

TEST_CASE("chi-square uniformity test behaves on clean and skewed samples") {
    Rng rng(2026'0303);
    std::vector<double> u;
    for (int i = 0; i < 5000; ++i) u.push_back(rng.uniform01());
    const auto good = stats::chi_square_uniform(u, 0.0, 1.0, 10);
    CHECK(good.pass);
    CHECK_EQ(good.bins, 10);

    std::vector<double> lumped;
    for (int i = 0; i < 5000; ++i) lumped.push_back(0.05 + 0.04 * rng.uniform01());
    const auto bad = stats::chi_square_uniform(lumped, 0.0, 1.0, 10);
    CHECK_FALSE(bad.pass);
    CHECK_GT(bad.stat, bad.threshold);

    CHECK_THROWS_AS(stats::chi_square_uniform(u, 0.0, 1.0, 1), ParameterError);
    CHECK_THROWS_AS(stats::chi_square_uniform(u, 1.0, 1.0, 10), ParameterError);
    // Only the pre-registered significance level is supported.
    CHECK_THROWS_AS(stats::chi_square_uniform(u, 0.0, 1.0, 10, 0.05), ParameterError);
    CHECK_THROWS_AS(stats::chi_square_uniform(u, -1.0, 0.5, 10), ParameterError);
    CHECK_THROWS_AS(stats::chi_square_uniform({0.1, 0.2, 0.3}, 0.0, 1.0, 2), ParameterError);
}

TEST_CASE("chi-square quantile approximation is close at moderate df") {
    // Exact 0.999 quantile of chi-square with 10 degrees of freedom is
    // 29.588; Wilson-Hilferty should land within 1.5%.
    const double q = stats::chi_square_quantile(10.0);
    CHECK_EQ(q, doctest::Approx(29.588).epsilon(0.015));
    CHECK_GT(stats::chi_square_quantile(20.0), stats::chi_square_quantile(10.0));
}

TEST_CASE("summarize reports exact moments and interpolated quantiles") {
    std::vector<double> v;
    for (int i = 100; i >= 1; --i) v.push_back(double(i));  // unsorted on purpose
    const auto s = stats::summarize(v, stats::NormKind::l1);
    CHECK_EQ(s.n_samples, 100);
    CHECK_EQ(s.norm, stats::NormKind::l1);
    CHECK_EQ(s.mean, doctest::Approx(50.5).epsilon(1e-14));
    // Sum of squared deviations of 1..m about its mean is (m^3 - m) / 12.
    CHECK_EQ(s.std, doctest::Approx(std::sqrt((1e6 - 100.0) / 12.0 / 99.0)).epsilon(1e-12));
    REQUIRE_EQ(s.quantiles.size(), 5);
    const double expected[] = {5.95, 25.75, 50.5, 75.25, 95.05};
    for (int i = 0; i < 5; ++i)
        CHECK_EQ(s.quantiles[i].value, doctest::Approx(expected[i]).epsilon(1e-12));

    const auto one = stats::summarize({3.5}, stats::NormKind::linf);
    CHECK_EQ(one.std, 0.0);
    for (const auto& q : one.quantiles) CHECK_EQ(q.value, 3.5);
    CHECK_THROWS_AS(stats::summarize({}, stats::NormKind::l1), ParameterError);
}

TEST_CASE("power-law fit recovers a pure power law exactly") {
    std::vector<std::pair<double, double>> pts;
    for (double n : {2.0, 5.0, 11.0, 31.0}) pts.push_back({n, 3.0 * std::pow(n, 0.7)});
    const auto fit = stats::fit_power_law(pts);
    CHECK_EQ(fit.exponent, doctest::Approx(0.7).epsilon(1e-12));
    CHECK_EQ(fit.log_constant, doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK_EQ(fit.r_squared, doctest::Approx(1.0).epsilon(1e-12));
    CHECK_EQ(fit.points.size(), 4);
}

TEST_CASE("power-law fit rejects degenerate input") {
    CHECK_THROWS_AS(stats::fit_power_law({{1.0, 2.0}}), ParameterError);
    CHECK_THROWS_AS(stats::fit_power_law({{1.0, 2.0}, {2.0, -1.0}}), ParameterError);
    CHECK_THROWS_AS(stats::fit_power_law({{0.0, 2.0}, {2.0, 1.0}}), ParameterError);
    CHECK_THROWS_AS(stats::fit_power_law({{2.0, 1.0}, {2.0, 3.0}}), ParameterError);
    // Noise off the line must push r-squared strictly below 1.
    const auto fit = stats::fit_power_law({{1.0, 1.0}, {2.0, 3.0}, {4.0, 4.0}});
    CHECK_LT(fit.r_squared, 0.999);
}
