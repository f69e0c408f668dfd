#include "parasphere/linalg.hpp"

#include <vector>

namespace parasphere {

MatrixSignature signature(const Mat& M, double tol) {
    if (M.rows() != M.cols())
        throw std::invalid_argument("signature: matrix not square");
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(M));
    MatrixSignature s;
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        double ev = es.eigenvalues()[i];
        if (std::abs(ev) <= tol)
            throw DegenerateMatrix("signature undefined: eigenvalue within tolerance of zero");
        (ev > 0 ? s.pos : s.neg)++;
    }
    return s;
}

MatrixSignature hermitian_signature(const CMat& H, double tol) {
    const Eigen::Index n = H.rows();
    Mat E(2 * n, 2 * n);
    E.topLeftCorner(n, n) = H.real();
    E.topRightCorner(n, n) = -H.imag();
    E.bottomLeftCorner(n, n) = H.imag();
    E.bottomRightCorner(n, n) = H.real();
    MatrixSignature s = signature(E, tol);
    if (s.pos % 2 != 0 || s.neg % 2 != 0)
        throw DegenerateMatrix("hermitian_signature: embedding counts not even");
    return {s.pos / 2, s.neg / 2};
}

double determinant(const Mat& M) { return M.determinant(); }

Mat inverse(const Mat& M) {
    Eigen::FullPivLU<Mat> lu(M);
    if (!lu.isInvertible())
        throw DegenerateMatrix("inverse: matrix is singular");
    return lu.inverse();
}

namespace {

double pf_rec(const Mat& A, std::vector<int>& idx) {
    const std::size_t n = idx.size();
    if (n == 0) return 1.0;
    int i0 = idx[0];
    double acc = 0.0;
    double sign = 1.0;
    for (std::size_t j = 1; j < n; ++j) {
        std::vector<int> rest;
        rest.reserve(n - 2);
        for (std::size_t k = 1; k < n; ++k)
            if (k != j) rest.push_back(idx[k]);
        acc += sign * A(i0, idx[j]) * pf_rec(A, rest);
        sign = -sign;
    }
    return acc;
}

} // namespace

double pfaffian(const Mat& A) {
    if (A.rows() != A.cols() || A.rows() % 2 != 0)
        throw std::invalid_argument("pfaffian: need even-order square matrix");
    std::vector<int> idx(A.rows());
    for (int i = 0; i < A.rows(); ++i) idx[i] = i;
    return pf_rec(A, idx);
}

} // namespace parasphere
