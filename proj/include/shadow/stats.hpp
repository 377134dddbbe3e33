#ifndef SHADOW_STATS_HPP
#define SHADOW_STATS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace shadow::stats {

// Standard normal quantile at 0.999; significance for all built-in tests is
// pre-registered at 1e-3 so the value is pinned rather than inverted at runtime.
inline constexpr double kZ999 = 3.0902323061678132;

// ---------------------------------------------------------------------------
// Hypothesis tests (all at fixed significance, default 1e-3)

struct KsResult {
    double d_stat = 0.0;
    double d_crit = 0.0;
    bool pass = false;
};

// Two-sample Kolmogorov-Smirnov with the asymptotic critical value
// c(a) * sqrt((n1+n2)/(n1*n2)), c(a) = sqrt(-ln(a/2)/2).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double significance = 1e-3);

// One-sample Kolmogorov-Smirnov against a continuous CDF.
KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf,
                       double significance = 1e-3);

struct ChiSquareResult {
    double stat = 0.0;
    double threshold = 0.0;
    int bins = 0;
    bool pass = false;
};

// Chi-square goodness of fit of xs against the uniform law on [lo, hi).
ChiSquareResult chi_square_uniform(const std::vector<double>& xs, double lo, double hi, int bins,
                                   double significance = 1e-3);

// Wilson-Hilferty approximation of the chi-square quantile with k degrees of
// freedom at the upper-tail point corresponding to normal quantile z.
double chi_square_quantile(double k, double z = kZ999);

// ---------------------------------------------------------------------------
// Sphere coordinate marginals (quadrature; independent of any sampler)

// E |u_1| for u uniform on S^{dim-1}, via quadrature of the exact marginal
// density proportional to (1 - t^2)^{(dim-3)/2}.
double sphere_abs_coord_moment(int dim);

// P(u_1 <= t) for u uniform on S^{dim-1}.
double sphere_coord_cdf(int dim, double t);

// Composite Simpson rule with `intervals` subintervals (rounded up to even).
double simpson(const std::function<double(double)>& f, double a, double b, int intervals);

// ---------------------------------------------------------------------------
// Summaries and fits

struct Quantile {
    double p = 0.0;
    double value = 0.0;
};

enum class NormKind { l1, linf };

struct NormStats {
    std::int64_t n_samples = 0;
    double mean = 0.0;
    double std = 0.0;
    std::vector<Quantile> quantiles;
    NormKind norm = NormKind::l1;
};

// Mean, sample standard deviation and the {5,25,50,75,95}% quantiles.
NormStats summarize(std::vector<double> values, NormKind norm);

struct PowerLawFit {
    double exponent = 0.0;      // slope of ln(value) against ln(n)
    double log_constant = 0.0;  // intercept
    double r_squared = 0.0;
    std::vector<std::pair<double, double>> points;  // (n, value) as fitted
};

// Least squares on (ln n, ln value).  All values must be positive.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

}  // namespace shadow::stats

#endif
