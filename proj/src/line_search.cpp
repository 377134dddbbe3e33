#include "shadow/line_search.hpp"

#include <algorithm>
#include <cmath>

#include "shadow/parallel.hpp"
#include "shadow/zonogon.hpp"

namespace shadow::opt {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Objective value and subgradient in the rotated frame.  A is held by
// reference; evaluators are shared read-only across restart threads.
class ObjectiveEval {
 public:
    ObjectiveEval(const Matrix& A, Objective kind) : A_(A), kind_(kind) {}

    double value(const Vector& v) const {
        switch (kind_) {
            case Objective::area: {
                const Vector b = A_ * v;
                const int m = int(v.size());
                double s = 0.0;
                for (int i = 0; i < m; ++i)
                    for (int j = i + 1; j < m; ++j) s += std::fabs(v(i) * b(j) - v(j) * b(i));
                return 4.0 * s;
            }
            case Objective::diam_proxy:
                return std::max(v.lpNorm<1>(), (A_ * v).lpNorm<1>());
            case Objective::l1_sum:
                return v.lpNorm<1>() + (A_ * v).lpNorm<1>();
        }
        throw ParameterError("ObjectiveEval: unknown objective");
    }

    Vector subgradient(const Vector& v) const {
        switch (kind_) {
            case Objective::area: {
                // d/dv 4*sum_{i<j} |v_i b_j - v_j b_i| with b = Av and
                // s_ij = sign(v_i b_j - v_j b_i):  4 * (S b + A S v).
                const Vector b = A_ * v;
                const int m = int(v.size());
                Vector sb = Vector::Zero(m), sv = Vector::Zero(m);
                for (int i = 0; i < m; ++i) {
                    double sbi = 0.0, svi = 0.0;
                    for (int j = 0; j < m; ++j) {
                        const double s = sgn(v(i) * b(j) - v(j) * b(i));
                        sbi += s * b(j);
                        svi += s * v(j);
                    }
                    sb(i) = sbi;
                    sv(i) = svi;
                }
                return 4.0 * (sb + A_ * sv);
            }
            case Objective::diam_proxy: {
                const Vector av = A_ * v;
                if (v.lpNorm<1>() >= av.lpNorm<1>())
                    return v.unaryExpr([](double x) { return sgn(x); }).eval();
                // d/dv |Av|_1 = A^T sign(Av) = -A sign(Av)  (A antisymmetric)
                return (-A_ * av.unaryExpr([](double x) { return sgn(x); }).matrix()).eval();
            }
            case Objective::l1_sum: {
                const Vector av = A_ * v;
                return (v.unaryExpr([](double x) { return sgn(x); }).matrix() -
                        A_ * av.unaryExpr([](double x) { return sgn(x); }).matrix())
                    .eval();
            }
        }
        throw ParameterError("ObjectiveEval: unknown objective");
    }

 private:
    const Matrix& A_;
    Objective kind_;
};

struct RestartOutcome {
    Vector v;
    double value = 0.0;
    bool converged = false;
    long long iterations = 0;
};

constexpr double kStepFloor = 1e-14;

RestartOutcome run_restart(const ObjectiveEval& eval, Vector x, const OptimizerConfig& cfg) {
    x.normalize();
    double fx = eval.value(x);
    double alpha = cfg.step_init;
    RestartOutcome out;
    for (int it = 0; it < cfg.max_iters; ++it) {
        ++out.iterations;
        const Vector g = eval.subgradient(x);
        Vector gt = g - g.dot(x) * x;  // tangent component at x
        const double gn = gt.norm();
        if (gn <= cfg.grad_tol) {
            out.converged = true;
            break;
        }
        const Vector d = gt / -gn;
        bool accepted = false;
        while (alpha >= kStepFloor) {
            Vector xt = (x + alpha * d).normalized();
            const double ft = eval.value(xt);
            if (ft < fx) {
                x = std::move(xt);
                fx = ft;
                alpha = std::min(2.0 * alpha, cfg.step_init);
                accepted = true;
                break;
            }
            alpha *= cfg.step_shrink;
        }
        if (!accepted) {
            // No descent along the projected subgradient at any feasible step:
            // treat as stationary for this nonsmooth objective.
            out.converged = true;
            break;
        }
    }
    out.v = std::move(x);
    out.value = fx;
    return out;
}

void check_config(const OptimizerConfig& cfg) {
    if (cfg.restarts < 1 || cfg.max_iters < 1)
        throw ParameterError("optimizer: restarts and max_iters must be >= 1");
    if (!(cfg.step_init > 0.0))
        throw ParameterError("optimizer: step_init must be positive");
    if (!(cfg.step_shrink > 0.0 && cfg.step_shrink < 1.0))
        throw ParameterError("optimizer: step_shrink must lie in (0,1)");
    if (cfg.grad_tol < 0.0) throw ParameterError("optimizer: grad_tol must be nonnegative");
}

int least_l1_column(const Matrix& A) {
    int best = 0;
    double best_mass = A.col(0).lpNorm<1>();
    for (int k = 1; k < A.cols(); ++k) {
        const double mass = A.col(k).lpNorm<1>();
        if (mass < best_mass) {  // strict: ties stay with the lowest index
            best_mass = mass;
            best = k;
        }
    }
    return best;
}

MinimizationResult minimize_on_sphere(const Matrix& O, Objective kind, const OptimizerConfig& cfg,
                                      int threads, const std::vector<Vector>* extra_starts) {
    check_config(cfg);
    require_rotation(O);
    const Matrix A = rotated_complex_structure(O);
    const int m = int(O.rows());
    const ObjectiveEval eval(A, kind);

    // Start list: first cube direction, least-l1-mass cube direction, caller
    // warm starts, then seeded random sphere points.
    std::vector<Vector> starts;
    starts.push_back(Vector::Unit(m, 0));
    starts.push_back(Vector::Unit(m, least_l1_column(A)));
    if (extra_starts)
        for (const Vector& v : extra_starts[0]) {
            if (v.size() != m)
                throw DimensionError("optimizer: warm start has wrong dimension");
            starts.push_back(v.normalized());
        }
    const std::size_t total = std::max(std::size_t(cfg.restarts), starts.size());
    for (std::size_t i = starts.size(); i < total; ++i) {
        Rng rng(substream(cfg.rng, std::uint64_t(i)));
        starts.push_back(random_unit_vector(m, rng));
    }

    std::vector<RestartOutcome> outcomes(starts.size());
    parallel_for(
        starts.size(), [&](std::size_t i) { outcomes[i] = run_restart(eval, starts[i], cfg); },
        threads);

    std::size_t best = 0;
    long long iters = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        iters += outcomes[i].iterations;
        if (outcomes[i].value < outcomes[best].value) best = i;
    }

    MinimizationResult res;
    res.best_line = make_complex_line((O * outcomes[best].v).normalized());
    res.best_value = outcomes[best].value;
    res.restarts_used = int(starts.size());
    res.converged = outcomes[best].converged;
    res.iterations = iters;
    res.objective = kind;
    return res;
}

}  // namespace

double shadow_area(const Matrix& O, const Vector& e) {
    return shadow::area(shadow::project_generators(O, make_complex_line(e)));
}

MinimizationResult minimize_shadow_area(const Matrix& O, const OptimizerConfig& cfg, int threads,
                                        const std::vector<Vector>* extra_starts) {
    return minimize_on_sphere(O, Objective::area, cfg, threads, extra_starts);
}

MinimizationResult minimize_diam_proxy(const Matrix& O, const OptimizerConfig& cfg, int threads,
                                       const std::vector<Vector>* extra_starts) {
    return minimize_on_sphere(O, Objective::diam_proxy, cfg, threads, extra_starts);
}

WidthLineResult width_direction_upper_bound(const Matrix& O) {
    require_rotation(O);
    const Matrix A = rotated_complex_structure(O);
    const int k = least_l1_column(A);
    WidthLineResult res;
    res.line = make_complex_line(O.col(k));
    res.area_ub = shadow_area(O, O.col(k));
    // |A e_k|_1 <= sqrt(2n) |A e_k|_2 = sqrt(2n), so the area 4|A e_k|_1 obeys
    // the cap; re-derive it from the generic path above to keep one code path.
    return res;
}

double j_operator_norm_cube(const Matrix& O) {
    require_rotation(O);
    return rotated_complex_structure(O).cwiseAbs().maxCoeff();
}

CapacitySandwich capacity_sandwich(const Matrix& O, const OptimizerConfig& cfg, int threads) {
    const double jn = j_operator_norm_cube(O);
    CapacitySandwich s;
    s.lower = 1.0 / jn;
    s.upper = 4.0 * s.lower;  // power-of-two scaling: upper/lower is exactly 4
    s.cUn_estimate = minimize_shadow_area(O, cfg, threads).best_value;
    if (s.cUn_estimate < s.lower * (1.0 - 1e-9) - 1e-12)
        throw InvariantError("capacity_sandwich: minimized area fell below the certified bound");
    return s;
}

OctahedronSection octahedron_section_diameter(const Matrix& O, const OptimizerConfig& cfg,
                                              int threads,
                                              const std::vector<Vector>* extra_starts) {
    const MinimizationResult m2 = minimize_on_sphere(O, Objective::l1_sum, cfg, threads,
                                                     extra_starts);
    OctahedronSection s;
    s.m2_upper_bound = m2.best_value;
    s.diameter = 2.0 * std::sqrt(2.0) / m2.best_value;
    s.diameter_is_lower_estimate = true;
    return s;
}

}  // namespace shadow::opt
