#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace parasphere {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

struct DegenerateMatrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MatrixSignature {
    int pos = 0;
    int neg = 0;
    bool operator==(const MatrixSignature&) const = default;
};

// Eigenvalue inertia of a real symmetric matrix. Throws DegenerateMatrix
// ("signature undefined") if any eigenvalue lies within tol of zero.
MatrixSignature signature(const Mat& M, double tol = 1e-10);

// Inertia of a complex Hermitian matrix via its real symmetric embedding
// [[Re, -Im], [Im, Re]] (eigenvalues doubled, counts halved).
MatrixSignature hermitian_signature(const CMat& H, double tol = 1e-10);

double determinant(const Mat& M);
Mat inverse(const Mat& M);

// Pfaffian of an antisymmetric matrix of even order (direct expansion,
// intended for orders <= 8).
double pfaffian(const Mat& A);

inline Mat symmetrized(const Mat& M) { return 0.5 * (M + M.transpose()); }

} // namespace parasphere
