#ifndef SHADOW_CONCENTRATION_HPP
#define SHADOW_CONCENTRATION_HPP

#include <string>
#include <vector>

#include "shadow/linalg.hpp"
#include "shadow/stats.hpp"

namespace shadow::prob {

enum class SampleSource { pushforward, direct };

// A point of the equatorial subsphere S^{dim-1} ∩ y⊥, tagged with how it was
// produced.  Both samplers target the same law: the uniform measure on that
// subsphere.
struct SubsphereSample {
    Vector y;
    Vector x;
    SampleSource source = SampleSource::direct;
};

// x = O^T J O y for a random rotation O.  <x, y> = 0 holds as an algebraic
// identity (up to roundoff), not merely in distribution.  dim must be even.
SubsphereSample pushforward_sample(const Vector& y, Rng& rng);

// Gaussian in the hyperplane y⊥ (projected and normalized): the reference
// sampler for the uniform law on the subsphere.  Works in any dim >= 2.
SubsphereSample direct_sample(const Vector& y, Rng& rng);

struct L1CheckResult {
    stats::NormStats stats;      // of ||x||_1 over the subsphere samples
    double closed_form = 0.0;    // (1/sqrt(2n-1)) sqrt(2/pi) sum_j sqrt(1-y_j^2)
    double half_sqrt_n = 0.0;    // the guaranteed lower bound on the mean
    bool mean_bound_pass = false;       // mean >= sqrt(n)/2
    bool closed_form_within_5pct = false;  // |mean/closed_form - 1| <= 0.05
};

// Monte Carlo mean of ||x||_1 under the pushforward law, checked against the
// sqrt(n)/2 lower bound and the closed-form expression (itself a lower-bound
// style formula, so agreement is asserted at 5%, not exactly).
L1CheckResult l1_expectation_check(const Vector& y, int n_samples, Rng& rng);

// Statistics of ||A e_1||_inf = ||(O^T J O) e_1||_inf over Haar rotations of
// R^{2n}; every sample lies in [1/sqrt(2n), 1].
stats::NormStats linf_column_stats(int n, int n_samples, Rng& rng);

// The closed form [1 - sqrt(2/pi) exp(-a^2/2)/a]^k, clamped to 0 when the
// base is negative.  Stated as an upper bound for P(||g||_inf <= a) over a
// k-dimensional standard Gaussian; the clamp marks the region where the base
// is not even a probability.  Its empirical validity is recorded on a grid by
// gaussian_linf_tail_validity rather than asserted.
double gaussian_linf_tail(double alpha, int k);

struct TailValidityCell {
    double alpha = 0.0;
    int k = 0;
    double bound = 0.0;
    double monte_carlo = 0.0;  // empirical P(||g||_inf <= alpha)
    bool bound_holds = false;  // monte_carlo <= bound
};

std::vector<TailValidityCell> gaussian_linf_tail_validity(const std::vector<double>& alphas,
                                                          const std::vector<int>& ks, int draws,
                                                          Rng& rng);

// exp(-eps^2 k / 4), an upper bound for P(||g||_2^2 >= k/(1-eps)).
double chi_square_tail(double epsilon, int k);

// Empirical left side of the bound above.
double chi_square_tail_monte_carlo(double epsilon, int k, int draws, RngSeed seed,
                                   int threads = 0);

struct TailRow {
    double t = 0.0;
    double prob = 0.0;  // empirical P(|f - mean| >= t)
};

// Empirical deviation tails of f over uniform sphere samples in R^{2n}.
// f_id currently supports "l1_norm" (Lipschitz constant sqrt(2n)).
std::vector<TailRow> lipschitz_tail_empirical(const std::string& f_id, int n,
                                              const std::vector<double>& t_grid, int n_samples,
                                              Rng& rng);

}  // namespace shadow::prob

#endif
