#include "shadow/concentration.hpp"

#include <cmath>
#include <string>

#include "shadow/parallel.hpp"

namespace shadow::prob {

namespace {

constexpr double kSqrt2OverPi = 0.79788456080286535588;  // sqrt(2/pi)

void require_unit(const Vector& y, const char* who) {
    if (y.size() < 2) throw DimensionError(std::string(who) + ": dimension must be >= 2");
    if (std::fabs(y.norm() - 1.0) > 1e-12)
        throw ParameterError(std::string(who) + ": y must be a unit vector");
}

}  // namespace

SubsphereSample pushforward_sample(const Vector& y, Rng& rng) {
    require_unit(y, "pushforward_sample");
    const int dim = int(y.size());
    if (dim % 2 != 0)
        throw DimensionError("pushforward_sample: ambient dimension must be even");
    const Matrix O = haar_orthogonal(dim, rng);
    // x = O^T J (O y): three cheap applications rather than forming O^T J O.
    const Vector x = O.transpose() * apply_complex_structure(O * y);
    return SubsphereSample{y, x, SampleSource::pushforward};
}

SubsphereSample direct_sample(const Vector& y, Rng& rng) {
    require_unit(y, "direct_sample");
    const int dim = int(y.size());
    while (true) {
        Vector g(dim);
        for (int i = 0; i < dim; ++i) g(i) = rng.gaussian();
        g -= g.dot(y) * y;
        const double norm = g.norm();
        if (norm > 1e-12) return SubsphereSample{y, g / norm, SampleSource::direct};
    }
}

L1CheckResult l1_expectation_check(const Vector& y, int n_samples, Rng& rng) {
    require_unit(y, "l1_expectation_check");
    if (n_samples < 1000)
        throw ParameterError("l1_expectation_check: need at least 1000 samples");
    const int dim = int(y.size());
    const int n = dim / 2;
    std::vector<double> values;
    values.reserve(n_samples);
    for (int s = 0; s < n_samples; ++s)
        values.push_back(pushforward_sample(y, rng).x.lpNorm<1>());

    L1CheckResult r;
    r.stats = stats::summarize(std::move(values), stats::NormKind::l1);
    double sum = 0.0;
    for (int j = 0; j < dim; ++j) sum += std::sqrt(std::max(0.0, 1.0 - y(j) * y(j)));
    r.closed_form = kSqrt2OverPi * sum / std::sqrt(double(dim - 1));
    r.half_sqrt_n = 0.5 * std::sqrt(double(n));
    r.mean_bound_pass = r.stats.mean >= r.half_sqrt_n;
    r.closed_form_within_5pct = std::fabs(r.stats.mean / r.closed_form - 1.0) <= 0.05;
    return r;
}

stats::NormStats linf_column_stats(int n, int n_samples, Rng& rng) {
    if (n < 2) throw ParameterError("linf_column_stats: n must be >= 2");
    if (n_samples < 1) throw ParameterError("linf_column_stats: need samples");
    const int dim = 2 * n;
    Vector e1 = Vector::Zero(dim);
    e1(0) = 1.0;
    std::vector<double> values;
    values.reserve(n_samples);
    for (int s = 0; s < n_samples; ++s) {
        const Matrix O = haar_orthogonal(dim, rng);
        const Vector x = O.transpose() * apply_complex_structure(O * e1);
        values.push_back(x.lpNorm<Eigen::Infinity>());
    }
    return stats::summarize(std::move(values), stats::NormKind::linf);
}

double gaussian_linf_tail(double alpha, int k) {
    if (!(alpha > 0.0)) throw ParameterError("gaussian_linf_tail: alpha must be positive");
    if (k < 1) throw ParameterError("gaussian_linf_tail: k must be >= 1");
    const double base = 1.0 - kSqrt2OverPi * std::exp(-0.5 * alpha * alpha) / alpha;
    if (base <= 0.0) return 0.0;
    return std::pow(base, double(k));
}

std::vector<TailValidityCell> gaussian_linf_tail_validity(const std::vector<double>& alphas,
                                                          const std::vector<int>& ks, int draws,
                                                          Rng& rng) {
    if (draws < 1000) throw ParameterError("gaussian_linf_tail_validity: too few draws");
    std::vector<TailValidityCell> cells;
    for (int k : ks) {
        for (double alpha : alphas) {
            long hits = 0;
            for (int d = 0; d < draws; ++d) {
                bool inside = true;
                for (int i = 0; i < k; ++i) {
                    if (std::fabs(rng.gaussian()) > alpha) {
                        inside = false;
                        // keep consuming so the stream position is data-independent
                        for (int r = i + 1; r < k; ++r) rng.gaussian();
                        break;
                    }
                }
                if (inside) ++hits;
            }
            TailValidityCell cell;
            cell.alpha = alpha;
            cell.k = k;
            cell.bound = gaussian_linf_tail(alpha, k);
            cell.monte_carlo = double(hits) / double(draws);
            cell.bound_holds = cell.monte_carlo <= cell.bound;
            cells.push_back(cell);
        }
    }
    return cells;
}

double chi_square_tail(double epsilon, int k) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ParameterError("chi_square_tail: epsilon must lie in (0, 1)");
    if (k < 1) throw ParameterError("chi_square_tail: k must be >= 1");
    return std::exp(-epsilon * epsilon * double(k) / 4.0);
}

double chi_square_tail_monte_carlo(double epsilon, int k, int draws, RngSeed seed, int threads) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ParameterError("chi_square_tail_monte_carlo: epsilon must lie in (0, 1)");
    if (k < 1 || draws < 1) throw ParameterError("chi_square_tail_monte_carlo: bad arguments");
    const double cutoff = double(k) / (1.0 - epsilon);
    // Chunk count is fixed so the substream layout (and hence the estimate)
    // is identical for every thread count.
    const int chunks = 64;
    const int per_chunk = (draws + chunks - 1) / chunks;
    std::vector<long> hits(chunks, 0);
    parallel_for(
        std::size_t(chunks),
        [&](std::size_t c) {
            Rng rng(substream(seed, c));
            const int lo = int(c) * per_chunk;
            const int hi = std::min(draws, lo + per_chunk);
            long h = 0;
            for (int d = lo; d < hi; ++d) {
                double s = 0.0;
                for (int i = 0; i < k; ++i) {
                    const double g = rng.gaussian();
                    s += g * g;
                }
                if (s >= cutoff) ++h;
            }
            hits[c] = h;
        },
        threads);
    long total = 0;
    for (long h : hits) total += h;
    return double(total) / double(draws);
}

std::vector<TailRow> lipschitz_tail_empirical(const std::string& f_id, int n,
                                              const std::vector<double>& t_grid, int n_samples,
                                              Rng& rng) {
    if (f_id != "l1_norm")
        throw ParameterError("lipschitz_tail_empirical: unknown function id '" + f_id + "'");
    if (n < 1 || n_samples < 100)
        throw ParameterError("lipschitz_tail_empirical: bad arguments");
    const int dim = 2 * n;
    std::vector<double> values;
    values.reserve(n_samples);
    for (int s = 0; s < n_samples; ++s)
        values.push_back(random_unit_vector(dim, rng).lpNorm<1>());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= double(values.size());

    std::vector<TailRow> rows;
    rows.reserve(t_grid.size());
    for (double t : t_grid) {
        long hits = 0;
        for (double v : values)
            if (std::fabs(v - mean) >= t) ++hits;
        rows.push_back({t, double(hits) / double(values.size())});
    }
    return rows;
}

}  // namespace shadow::prob
