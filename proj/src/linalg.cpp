#include "shadow/linalg.hpp"

#include <cmath>
#include <string>

namespace shadow {

Vector apply_complex_structure(const Vector& v) {
    const int dim = static_cast<int>(v.size());
    if (dim <= 0 || dim % 2 != 0)
        throw DimensionError("apply_complex_structure: dimension must be even and positive, got " +
                             std::to_string(dim));
    const int n = dim / 2;
    Vector out(dim);
    out.head(n) = -v.tail(n);
    out.tail(n) = v.head(n);
    return out;
}

Matrix make_complex_structure(int n) {
    if (n < 1) throw DimensionError("make_complex_structure: n must be >= 1");
    Matrix J = Matrix::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        J(i, n + i) = -1.0;
        J(n + i, i) = 1.0;
    }
    return J;
}

ComplexLine make_complex_line(const Vector& e) {
    const double norm = e.norm();
    if (!(norm > 0.0))
        throw ParameterError("make_complex_line: zero direction vector");
    ComplexLine line;
    line.e = e / norm;
    line.je = apply_complex_structure(line.e);
    return line;
}

double orthogonality_error(const Matrix& O) {
    const int dim = static_cast<int>(O.rows());
    Matrix G = O.transpose() * O;
    G.diagonal().array() -= 1.0;
    (void)dim;
    return G.cwiseAbs().maxCoeff();
}

void require_rotation(const Matrix& O, double tol) {
    if (O.rows() != O.cols() || O.rows() < 2 || O.rows() % 2 != 0)
        throw DimensionError("require_rotation: matrix must be square with even dimension >= 2");
    const double err = orthogonality_error(O);
    if (err > tol)
        throw InvariantError("require_rotation: orthogonality error " + std::to_string(err) +
                             " exceeds tolerance");
}

Matrix gaussian_qr_orthogonal(int dim, Rng& rng) {
    if (dim < 1) throw DimensionError("gaussian_qr_orthogonal: dim must be >= 1");
    Matrix G(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) G(i, j) = rng.gaussian();
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ() * Matrix::Identity(dim, dim);
    const Matrix& QR = qr.matrixQR();
    // Multiplying column j by sign(R_jj) makes the law invariant under left
    // rotations; without it the factorization's sign convention biases Q.
    for (int j = 0; j < dim; ++j)
        if (QR(j, j) < 0.0) Q.col(j) = -Q.col(j);
    return Q;
}

Matrix haar_orthogonal(int dim, Rng& rng) {
    if (dim < 2 || dim % 2 != 0)
        throw DimensionError("haar_orthogonal: dim must be even and >= 2, got " +
                             std::to_string(dim));
    Matrix Q = gaussian_qr_orthogonal(dim, rng);
    if (orthogonality_error(Q) > 1e-10) {
        Eigen::HouseholderQR<Matrix> fix(Q);
        Q = fix.householderQ() * Matrix::Identity(dim, dim);
        const Matrix& QR = fix.matrixQR();
        for (int j = 0; j < dim; ++j)
            if (QR(j, j) < 0.0) Q.col(j) = -Q.col(j);
        if (orthogonality_error(Q) > 1e-10)
            throw InvariantError("haar_orthogonal: orthogonality not attained after re-factorization");
    }
    return Q;
}

Matrix haar_orthogonal(int dim, RngSeed seed) {
    Rng rng(seed);
    return haar_orthogonal(dim, rng);
}

Matrix rotated_complex_structure(const Matrix& O) {
    require_rotation(O);
    const int n = static_cast<int>(O.rows()) / 2;
    // With O = [X; Y] split into top and bottom row blocks, O^T J O equals
    // Y^T X - X^T Y; forming it as M - M^T keeps it antisymmetric exactly.
    Matrix M = O.bottomRows(n).transpose() * O.topRows(n);
    return M - M.transpose();
}

Vector random_unit_vector(int dim, Rng& rng) {
    if (dim < 1) throw DimensionError("random_unit_vector: dim must be >= 1");
    Vector v(dim);
    while (true) {
        for (int i = 0; i < dim; ++i) v(i) = rng.gaussian();
        const double norm = v.norm();
        if (norm > 1e-150) return v / norm;
    }
}

}  // namespace shadow
