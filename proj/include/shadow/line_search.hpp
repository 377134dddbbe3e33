#pragma once

// Minimization over complex lines of shadow functionals of a rotated cube.
//
// A complex line is span{e, Je} for a unit vector e.  Everything here works in
// the rotated coordinate frame: with v = O^T e and A = O^T J O, the shadow of
// O[-1,1]^{2n} on the line of e has generators (v_i, (Av)_i), so each objective
// is a function of v and A alone.  The minimizers run multi-start projected
// subgradient descent on the unit sphere; reported minima are upper bounds on
// the true infima (descent cannot certify global optimality — certified lower
// bounds come from the net machinery in nets.hpp).

#include <optional>
#include <vector>

#include "shadow/errors.hpp"
#include "shadow/linalg.hpp"
#include "shadow/rng.hpp"

namespace shadow::opt {

using shadow::ComplexLine;
using shadow::Matrix;
using shadow::Vector;

// Objectives minimized over unit vectors v, with A = O^T J O:
//   area       4 * sum_{i<j} |v_i (Av)_j - v_j (Av)_i|   (shadow area)
//   diam_proxy max{|v|_1, |Av|_1}                        (shadow diameter lower bound)
//   l1_sum     |v|_1 + |Av|_1                            (cross-polytope section functional)
enum class Objective { area, diam_proxy, l1_sum };

struct OptimizerConfig {
    int restarts = 64;         // total number of starts (deterministic + warm + random)
    int max_iters = 500;       // outer iterations per restart
    double step_init = 0.1;    // initial (and maximal) step length on the sphere
    double step_shrink = 0.5;  // geometric backtracking factor, in (0,1)
    double grad_tol = 1e-8;    // tangent-subgradient norm below which a restart stops
    RngSeed rng;               // master seed; restart i draws from substream(rng, i)
};

struct MinimizationResult {
    ComplexLine best_line;   // e = O v_best and its partner J e
    double best_value = 0.0;
    int restarts_used = 0;   // number of starts actually run
    bool converged = false;  // winning restart hit grad_tol or exhausted its step
    long long iterations = 0;  // outer iterations summed over all restarts
    Objective objective = Objective::area;
};

// Area of the shadow of O[-1,1]^{2n} on the complex line through e (|e| = 1).
// Equals zonogon::area of the projected generators; invariant under replacing
// e by cos(t) e + sin(t) Je, which spans the same line.
double shadow_area(const Matrix& O, const Vector& e);

// Minimize shadow_area(O, .) over complex lines.  Start list: the first cube
// direction, the cube direction of least projected l1 mass, any extra_starts
// (unit vectors in the rotated frame, e.g. warm starts from another objective),
// then random sphere points up to cfg.restarts total; the deterministic and
// extra starts are never dropped even if cfg.restarts is smaller.  Restarts run
// in parallel (merge: min value, ties to the lower start index), so results do
// not depend on the thread count.  The first cube-direction start pins the
// result below 4*sqrt(2n) for every rotation.
MinimizationResult minimize_shadow_area(const Matrix& O, const OptimizerConfig& cfg,
                                        int threads = 0,
                                        const std::vector<Vector>* extra_starts = nullptr);

// Minimize max{|v|_1, |Av|_1} over the unit sphere: every complex line's shadow
// has diameter at least twice this objective's value at its own v, so the true
// minimum lower-bounds all shadow diameters.  Same scheme and start list as
// minimize_shadow_area; best_line is the line of e = O v_best.
MinimizationResult minimize_diam_proxy(const Matrix& O, const OptimizerConfig& cfg,
                                       int threads = 0,
                                       const std::vector<Vector>* extra_starts = nullptr);

struct WidthLineResult {
    ComplexLine line;      // the complex line through the chosen cube direction
    double area_ub = 0.0;  // exact shadow area on that line, at most 4*sqrt(2n)
};

// Constructive upper bound: the shadow on the line of cube direction O e_k has
// area 4 |A e_k|_1 <= 4 sqrt(2n).  Picks the k minimizing that column mass
// (ties to the lowest k) and returns the line with its exact area.
WidthLineResult width_direction_upper_bound(const Matrix& O);

// Operator norm of the conjugated structure map A = O^T J O between the gauge
// norms of the rotated cube and its polar; for the cube this is just the
// largest entry |A_ij|, and it always lies in [1/sqrt(2n), 1] because the
// columns of A are unit vectors with entries of modulus at most 1.
double j_operator_norm_cube(const Matrix& O);

struct CapacitySandwich {
    double lower = 0.0;         // 1 / |A|_max : certified lower bound
    double upper = 0.0;         // 4 / |A|_max : upper bound for the symplectic variant
    double cUn_estimate = 0.0;  // best minimized shadow area (upper bound on the infimum)
};

// lower = 1/|A|_max and upper = 4/|A|_max bracket the capacity quantities; the
// estimate must respect cUn_estimate >= lower (violation means the optimizer
// produced an area below a proven bound, which is a bug, not noise).  The upper
// value bounds a smaller quantity than the one estimated, so cUn_estimate may
// legitimately exceed it.
CapacitySandwich capacity_sandwich(const Matrix& O, const OptimizerConfig& cfg, int threads = 0);

struct OctahedronSection {
    double diameter = 0.0;         // 2*sqrt(2) / m2: lower estimate of the section diameter
    double m2_upper_bound = 0.0;   // minimized |v|_1 + |Av|_1 (upper bound on its infimum)
    bool diameter_is_lower_estimate = true;  // always: m2 is minimized numerically
};

// Diameter of the section of the 4n-dimensional cross-polytope by the subspace
// {(x, Ax)}: equals 2*sqrt(2) / min_{|x|=1} (|x|_1 + |Ax|_1).  The minimum is
// estimated by the same multi-start scheme, so the reported diameter is a lower
// estimate of the true value; it always lies in [1/sqrt(n), sqrt(2)].
OctahedronSection octahedron_section_diameter(const Matrix& O, const OptimizerConfig& cfg,
                                              int threads = 0,
                                              const std::vector<Vector>* extra_starts = nullptr);

}  // namespace shadow::opt
