#include "shadow/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shadow/errors.hpp"

namespace shadow::stats {

namespace {

double ks_coefficient(double significance) {
    if (!(significance > 0.0 && significance < 1.0))
        throw ParameterError("ks test: significance must lie in (0,1)");
    return std::sqrt(-std::log(significance / 2.0) / 2.0);
}

}  // namespace

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double significance) {
    if (a.empty() || b.empty()) throw ParameterError("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t na = a.size(), nb = b.size();
    std::size_t ia = 0, ib = 0;
    double d = 0.0;
    while (ia < na && ib < nb) {
        const double x = std::min(a[ia], b[ib]);
        while (ia < na && a[ia] <= x) ++ia;
        while (ib < nb && b[ib] <= x) ++ib;
        d = std::max(d, std::fabs(double(ia) / na - double(ib) / nb));
    }
    KsResult r;
    r.d_stat = d;
    r.d_crit = ks_coefficient(significance) *
               std::sqrt(double(na + nb) / (double(na) * double(nb)));
    r.pass = r.d_stat <= r.d_crit;
    return r;
}

KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf,
                       double significance) {
    if (sample.empty()) throw ParameterError("ks_one_sample: empty sample");
    std::sort(sample.begin(), sample.end());
    const std::size_t n = sample.size();
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::fabs(f - double(i) / n));
        d = std::max(d, std::fabs(double(i + 1) / n - f));
    }
    KsResult r;
    r.d_stat = d;
    r.d_crit = ks_coefficient(significance) / std::sqrt(double(n));
    r.pass = r.d_stat <= r.d_crit;
    return r;
}

ChiSquareResult chi_square_uniform(const std::vector<double>& xs, double lo, double hi, int bins,
                                   double significance) {
    if (bins < 2) throw ParameterError("chi_square_uniform: need at least 2 bins");
    if (!(hi > lo)) throw ParameterError("chi_square_uniform: empty interval");
    if (significance != 1e-3)
        throw ParameterError("chi_square_uniform: only the pre-registered 1e-3 level is supported");
    std::vector<std::int64_t> counts(bins, 0);
    for (double x : xs) {
        if (x < lo || x >= hi)
            throw ParameterError("chi_square_uniform: sample outside [lo, hi)");
        int b = static_cast<int>((x - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        ++counts[b];
    }
    const double expected = double(xs.size()) / bins;
    if (expected < 5.0) throw ParameterError("chi_square_uniform: fewer than 5 expected per bin");
    double stat = 0.0;
    for (auto c : counts) {
        const double d = double(c) - expected;
        stat += d * d / expected;
    }
    ChiSquareResult r;
    r.stat = stat;
    r.bins = bins;
    r.threshold = chi_square_quantile(double(bins - 1));
    r.pass = stat <= r.threshold;
    return r;
}

double chi_square_quantile(double k, double z) {
    const double a = 2.0 / (9.0 * k);
    const double t = 1.0 - a + z * std::sqrt(a);
    return k * t * t * t;
}

double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
    if (intervals < 2) intervals = 2;
    if (intervals % 2 != 0) ++intervals;
    const double h = (b - a) / intervals;
    double s = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

namespace {

// Integral of cos^{d-2}(phi) over [a, b]; after t = sin(phi) this carries the
// sphere coordinate marginal density without endpoint singularities.
double cos_power_integral(int dim, double a, double b) {
    const int p = dim - 2;
    return simpson([p](double phi) { return std::pow(std::cos(phi), p); }, a, b, 4000);
}

}  // namespace

double sphere_abs_coord_moment(int dim) {
    if (dim < 2) throw ParameterError("sphere_abs_coord_moment: dim must be >= 2");
    const double half_pi = std::acos(0.0);
    // Int_0^{pi/2} sin(phi) cos^{d-2}(phi) dphi = 1/(d-1) exactly.
    const double numerator = 2.0 / (dim - 1);
    const double normalization = cos_power_integral(dim, -half_pi, half_pi);
    return numerator / normalization;
}

double sphere_coord_cdf(int dim, double t) {
    if (dim < 2) throw ParameterError("sphere_coord_cdf: dim must be >= 2");
    if (t <= -1.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double half_pi = std::acos(0.0);
    const double upper = std::asin(t);
    return cos_power_integral(dim, -half_pi, upper) / cos_power_integral(dim, -half_pi, half_pi);
}

NormStats summarize(std::vector<double> values, NormKind norm) {
    if (values.empty()) throw ParameterError("summarize: empty sample");
    NormStats s;
    s.norm = norm;
    s.n_samples = static_cast<std::int64_t>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / double(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = values.size() > 1 ? std::sqrt(ss / double(values.size() - 1)) : 0.0;
    std::sort(values.begin(), values.end());
    for (double p : {0.05, 0.25, 0.5, 0.75, 0.95}) {
        const double pos = p * double(values.size() - 1);
        const std::size_t i = static_cast<std::size_t>(pos);
        const double frac = pos - double(i);
        const double v = i + 1 < values.size()
                             ? values[i] * (1.0 - frac) + values[i + 1] * frac
                             : values[i];
        s.quantiles.push_back({p, v});
    }
    return s;
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw ParameterError("fit_power_law: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (auto [n, v] : points) {
        if (!(n > 0.0) || !(v > 0.0))
            throw ParameterError("fit_power_law: points must be positive");
        const double x = std::log(n), y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double m = double(points.size());
    const double vxx = sxx - sx * sx / m;
    const double vyy = syy - sy * sy / m;
    const double vxy = sxy - sx * sy / m;
    if (!(vxx > 0.0)) throw ParameterError("fit_power_law: degenerate abscissae");
    PowerLawFit fit;
    fit.exponent = vxy / vxx;
    fit.log_constant = (sy - fit.exponent * sx) / m;
    fit.r_squared = vyy > 0.0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
    fit.points = points;
    return fit;
}

}  // namespace shadow::stats
