#ifndef SHADOW_LINALG_HPP
#define SHADOW_LINALG_HPP

#include <Eigen/Dense>

#include "shadow/errors.hpp"
#include "shadow/rng.hpp"

namespace shadow {

// Dense row-major matrices; dimensions stay small (2n up to a few hundred).
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// An oriented complex line: unit vector e together with je = J e.  The pair
// (e, je) is orthonormal and spans the plane; e and cos(t) e + sin(t) je
// describe the same line.
struct ComplexLine {
    Vector e;
    Vector je;
};

// The block map (x, y) |-> (-y, x) applied without forming the matrix.
// Requires even dimension.
Vector apply_complex_structure(const Vector& v);

// The 2n x 2n matrix [[0, -I], [I, 0]] of the map above.  n >= 1.
Matrix make_complex_structure(int n);

// Normalizes e and attaches its image under the complex structure.
ComplexLine make_complex_line(const Vector& e);

// max |(O^T O - I)_{ij}|: deviation of O from orthogonality.
double orthogonality_error(const Matrix& O);

// Validates that O is square, of even dimension, and orthogonal within tol.
// Throws DimensionError / InvariantError.
void require_rotation(const Matrix& O, double tol = 1e-10);

// QR-orthonormalized Gaussian matrix with the R-diagonal sign correction, any
// dim >= 1.  The sign correction makes the law exactly rotation invariant
// rather than merely orthogonal.
Matrix gaussian_qr_orthogonal(int dim, Rng& rng);

// Rotation-invariant random element of the full orthogonal group O(dim),
// both determinant components.  dim must be even and >= 2.  The result is
// re-orthonormalized once if the 1e-10 orthogonality check fails, and the
// construction aborts if it still fails after that.
Matrix haar_orthogonal(int dim, Rng& rng);
Matrix haar_orthogonal(int dim, RngSeed seed);

// A = O^T J O, the complex structure seen through the rotation O.  Computed as
// M - M^T so the result is antisymmetric to the last bit; it is orthogonal and
// squares to -I up to roundoff.
Matrix rotated_complex_structure(const Matrix& O);

// Uniform on the unit sphere S^{dim-1} via a normalized Gaussian vector.
Vector random_unit_vector(int dim, Rng& rng);

}  // namespace shadow

#endif
