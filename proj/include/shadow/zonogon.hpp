#ifndef SHADOW_ZONOGON_HPP
#define SHADOW_ZONOGON_HPP

#include <vector>

#include "shadow/linalg.hpp"

namespace shadow {

// The 2-D orthogonal shadow of the cube [-1,1]^{2n} on a complex line,
// stored as its generator list: the shadow equals the Minkowski sum of the
// segments [-g_i, g_i].  Origin-symmetric by construction, and when the line
// basis is orthonormal the generators satisfy sum |g_i|^2 = 2.
struct Zonogon {
    std::vector<Eigen::Vector2d> generators;
};

// Generators g_i = ((O^T e)_i, (O^T je)_i) of the shadow of the rotated cube.
Zonogon project_generators(const Matrix& O, const ComplexLine& line);

// Exact area, 4 * sum_{i<j} |det(g_i, g_j)|; O(n^2), branch-free.
double area(const Zonogon& z);

// 2 * max vertex norm; vertices are accumulated in angular order.  Equals
// 2 * max_theta support(z, theta).
double diameter(const Zonogon& z);

// Support function h(theta) = sum_i |<g_i, (cos theta, sin theta)>|.
double support(const Zonogon& z, double theta);

// The vertex chain of one half of the boundary (the other half is -V).
// Zero generators (both entries below 1e-14) are dropped; parallel generators
// are merged by summation before walking the chain.
std::vector<Eigen::Vector2d> vertices(const Zonogon& z);

struct HullResult {
    double area = 0.0;
    double diameter = 0.0;
};

// Brute-force oracle: projects all 2^m sign patterns (m = generator count,
// m <= 14), builds the planar convex hull, and measures it directly.
HullResult hull_oracle(const Zonogon& z);

}  // namespace shadow

#endif
