#ifndef SHADOW_NETS_HPP
#define SHADOW_NETS_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "shadow/linalg.hpp"

namespace shadow::nets {

// Closed-form cardinality bound (2e(1+n/k))^k for the integer points of the
// l1-ball of radius k in dimension n.
double cardinality_bound(int k, int n);

// All integer vectors v in Z^n with ||v||_1 <= k, a sqrt(k)-net of k B_1^n.
struct LatticeNet {
    int n = 0;
    int k = 0;
    std::vector<std::int16_t> points;  // flat storage, row stride n, enumeration order
    double covering_radius_bound = 0.0;  // sqrt(k)
    double cardinality_bound = 0.0;

    std::size_t count() const { return n > 0 ? points.size() / std::size_t(n) : 0; }
    Vector point(std::size_t i) const;
};

// Enumerates the net by recursive budget splitting (coordinate by coordinate,
// values ascending).  Throws BudgetError when the cardinality bound exceeds
// `budget` points.
LatticeNet lattice_net(int k, int n, double budget = 1e7);

std::vector<Vector> to_vectors(const LatticeNet& net);

// Unit vectors with small l1 norm: a net of the sphere slice
// { u in S^{n-1} : ||u||_1 <= theta sqrt(n) }, built by snapping the scaled
// lattice net onto the sphere and discarding l1-infeasible snaps.
struct SliceNet {
    double theta = 0.0;
    double epsilon = 0.0;
    int n = 0;
    int k = 0;
    std::vector<Vector> points;
    double net_radius = 0.0;  // 8 theta sqrt(ln(1/eps)/eps)
};

// k = floor(eps * n / (8 ln(1/eps))).  The slice construction needs k >= 1.
int slice_k(double epsilon, int n);

// Requires theta in (0,1), eps in (0, 1/2) and k >= 1 for this (eps, n);
// the asymptotic admissibility window tightens to 8 ln(n)/n < eps, which is
// vacuous at small n, so only the constructive constraints are enforced here.
SliceNet slice_net(double theta, double epsilon, int n, double budget = 1e7);

// Samples `trials` points from the sampler and returns the maximum distance
// to the nearest net point.  The net property promises gap <= radius; the
// radius is validated as a parameter but the comparison is left to callers.
double covering_check(const std::vector<Vector>& net, double radius,
                      const std::function<Vector()>& sampler, int trials);

// Uniform sample of the l1-ball of radius k in R^n.
Vector sample_l1_ball(double k, int n, Rng& rng);

// Uniform sample of { u in S^{n-1} : ||u||_1 <= theta sqrt(n) } by rejection
// from the sphere; throws SamplerStallError when the cap is exhausted (the
// slice has vanishing measure for small theta).
Vector sample_sphere_slice(double theta, int n, Rng& rng, int max_attempts = 200000);

// --------------------------------------------------------------------------
// Serialization: one-line header `# net k=<k> n=<n> radius=<r> count=<c>`,
// then one point per line (space-separated integers for lattice nets,
// 17-significant-digit decimals otherwise).

void write_net(std::ostream& os, const LatticeNet& net);
void write_net(std::ostream& os, const SliceNet& net);

struct NetFile {
    int k = 0;
    int n = 0;
    double radius = 0.0;
    std::vector<Vector> points;
};

NetFile read_net(std::istream& is);

// --------------------------------------------------------------------------
// Diameter certification.
//
// For a rotation O with A = O^T J O, every complex line satisfies
// diam(shadow) >= max{ ||O^T e||_1, ||A O^T e||_1 }.  If some line had
// diam <= lambda sqrt(n), the unit vector z = O^T e would satisfy
// ||z||_1 <= lambda sqrt(n) and ||A z||_1 <= lambda sqrt(n); a net point y
// within delta of z would then obey ||A y||_1 <= sqrt(n)(lambda + sqrt(2) delta).
// Scanning the whole net above that threshold therefore certifies
// diam > lambda sqrt(n) for every complex line.

struct Certificate {
    double lambda = 0.0;
    double epsilon = 0.0;
    double delta = 0.0;  // bookkeeping radius used in the scan threshold
    bool certified = false;
    std::optional<Vector> violating_point;
    double implied_bound = 0.0;  // lambda * sqrt(n)
    double threshold = 0.0;      // sqrt(n) * (lambda + sqrt(2) delta)
    std::size_t net_size = 0;
};

struct CertificationNet {
    int half_dim = 0;  // n; points live in R^{2n}
    int k = 0;
    double scale = 0.0;            // lambda sqrt(n) / k
    double delta = 0.0;            // 8 lambda sqrt(ln(1/eps)/eps)
    double coverage_radius = 0.0;  // 2 lambda sqrt(n)/sqrt(k), always <= delta
    std::vector<Vector> points;    // sphere points, enumeration order
};

// Builds a delta-net of { z in S^{2n-1} : ||z||_1 <= lambda sqrt(n) }:
// the lattice net of k B_1^{2n} scaled by lambda sqrt(n)/k covers the slice
// within lambda sqrt(n)/sqrt(k); points in the spherical shell of that width
// are snapped to the sphere, giving covering radius 2 lambda sqrt(n)/sqrt(k),
// which the choice of k keeps below delta.  Points whose l1 norm exceeds the
// slice's reach are discarded.  The net is empty iff lambda sqrt(n) < 1 - o(1),
// in which case the slice itself is empty and certification is vacuous.
CertificationNet certification_net(int half_dim, double lambda, double epsilon,
                                   double budget = 1e7);

// Scans ||A y||_1 over the net against the threshold for (lambda, delta).
// Data-parallel in batches with deterministic early exit: the reported
// violating point is the lowest enumeration index within the first batch that
// contains any violation.  delta is the caller's covering-radius bookkeeping,
// so the same net can be re-scanned at a smaller lambda.
Certificate scan_certificate(const Matrix& A, const std::vector<Vector>& net_points,
                             double lambda, double delta, int half_dim, int threads = 0);

// certified = true means: every complex line L satisfies
// diam(shadow of the rotated cube on L) > lambda sqrt(n).
Certificate certify_min_diameter(const Matrix& O, double lambda, double epsilon,
                                 double budget = 1e7, int threads = 0);

}  // namespace shadow::nets

#endif
