#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "parasphere/numerics.hpp"

using namespace parasphere;
using cplx = std::complex<double>;

TEST_CASE("signature: fixtures") {
    CHECK(signature(Mat::Identity(3, 3)) == MatrixSignature{3, 0});

    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -1.0;
    CHECK(signature(d) == MatrixSignature{1, 1});

    Mat M(2, 2);
    M << 2, -1, -1, 1;
    // eigenvalues (3 +- sqrt 5) / 2, both positive
    Eigen::SelfAdjointEigenSolver<Mat> es(M);
    CHECK(es.eigenvalues()[0] == doctest::Approx((3 - std::sqrt(5.0)) / 2).epsilon(1e-12));
    CHECK(es.eigenvalues()[1] == doctest::Approx((3 + std::sqrt(5.0)) / 2).epsilon(1e-12));
    CHECK(signature(M) == MatrixSignature{2, 0});

    Mat sing = Mat::Zero(2, 2);
    sing(0, 0) = 1.0;
    CHECK_THROWS_WITH_AS(signature(sing), doctest::Contains("signature undefined"),
                         DegenerateMatrix);
}

TEST_CASE("signature: invariant under congruence") {
    std::mt19937 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + static_cast<int>(trial % 5);
        Mat D = Mat::Zero(n, n);
        int pos = 0;
        for (int k = 0; k < n; ++k) {
            double s = (gauss(rng) > 0) ? 1.0 : -1.0;
            if (s > 0) ++pos;
            D(k, k) = s * (0.5 + std::abs(gauss(rng)));
        }
        Mat C;
        do {
            C = Mat::NullaryExpr(n, n, [&](Eigen::Index, Eigen::Index) { return gauss(rng); });
        } while (std::abs(C.determinant()) < 1e-3);
        Mat M = C.transpose() * D * C;
        CHECK(signature(symmetrized(M)) == MatrixSignature{pos, n - pos});
    }
}

TEST_CASE("hermitian signature via real embedding") {
    CMat H(2, 2);
    H << cplx(2, 0), cplx(0, 1), cplx(0, -1), cplx(2, 0);
    // eigenvalues 1 and 3
    CHECK(hermitian_signature(H) == MatrixSignature{2, 0});

    CMat I2 = -CMat::Identity(3, 3);
    CHECK(hermitian_signature(I2) == MatrixSignature{0, 3});
}

TEST_CASE("line integral: polynomial fixture") {
    // integral of v^2 dv from 1 to 2 is 7/3
    OneForm form = [](const Vec& p) {
        Vec w(1);
        w[0] = p[0] * p[0];
        return w;
    };
    PathSpec path;
    path.waypoints = {Vec::Constant(1, 1.0), Vec::Constant(1, 2.0)};
    CHECK(line_integral(form, path) == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("line integral: exact form around a closed loop") {
    // d(x v) integrated around a rectangle vanishes
    OneForm form = [](const Vec& p) {
        Vec w(2);
        w[0] = p[1];
        w[1] = p[0];
        return w;
    };
    auto pt = [](double x, double v) {
        Vec p(2);
        p << x, v;
        return p;
    };
    PathSpec loop;
    loop.waypoints = {pt(0, 0), pt(2, 0), pt(2, 3), pt(0, 3), pt(0, 0)};
    CHECK(std::abs(line_integral(form, loop)) < 1e-10);
}

TEST_CASE("line integral: additivity and order refinement") {
    OneForm form = [](const Vec& p) {
        Vec w(1);
        w[0] = std::exp(p[0]) * std::cos(3 * p[0]);
        return w;
    };
    PathSpec whole, first, second;
    whole.waypoints = {Vec::Constant(1, 0.0), Vec::Constant(1, 1.5)};
    first.waypoints = {Vec::Constant(1, 0.0), Vec::Constant(1, 0.7)};
    second.waypoints = {Vec::Constant(1, 0.7), Vec::Constant(1, 1.5)};
    double a = line_integral(form, whole);
    CHECK(std::abs(a - line_integral(form, first) - line_integral(form, second)) < 1e-12);

    PathSpec refined = whole;
    refined.order = 32;
    CHECK(std::abs(a - line_integral(form, refined)) < 1e-10);
}

TEST_CASE("line integral: singular integrand throws") {
    PathSpec path;
    path.waypoints = {Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)};
    // sqrt goes NaN on the negative half of the segment
    OneForm bad = [](const Vec& p) {
        Vec w(1);
        w[0] = std::sqrt(p[0]);
        return w;
    };
    CHECK_THROWS_AS(line_integral(bad, path), SingularPath);

    PathSpec empty;
    empty.waypoints = {Vec::Constant(1, 0.0)};
    CHECK_THROWS(empty.validate());
}

TEST_CASE("gauss_legendre: nodes integrate high-degree monomials") {
    std::vector<double> nodes, weights;
    gauss_legendre(8, nodes, weights);
    REQUIRE(nodes.size() == 8);
    // order-8 rule is exact through degree 15
    double s14 = 0.0, s0 = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        s0 += weights[k];
        s14 += weights[k] * std::pow(nodes[k], 14);
    }
    CHECK(s0 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s14 == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
}

TEST_CASE("fd_derivative: fixture and Richardson gain") {
    VectorField f = [](const Vec& p) {
        Vec w(1);
        w[0] = p[0] * p[0];
        return w;
    };
    Vec at = Vec::Constant(1, 3.0);
    Vec dir = Vec::Constant(1, 1.0);
    Vec d = fd_derivative(f, at, dir);
    CHECK(d[0] == doctest::Approx(6.0).epsilon(1e-8));

    // x^4 at 1: a coarse one-level estimate improves by >= 100x with a
    // second Richardson level
    VectorField g = [](const Vec& p) {
        Vec w(1);
        w[0] = std::pow(p[0], 4);
        return w;
    };
    Vec one = Vec::Constant(1, 1.0);
    FDConfig coarse{5e-3, 1};
    FDConfig fine{5e-3, 2};
    double e1 = std::abs(fd_derivative(g, one, dir, coarse)[0] - 4.0);
    double e2 = std::abs(fd_derivative(g, one, dir, fine)[0] - 4.0);
    CHECK(e1 > 1e-7);
    CHECK(e2 * 100.0 < e1);
}

TEST_CASE("fd config invariants") {
    CHECK_THROWS(FDConfig{1e-12, 2}.validate());
    CHECK_THROWS(FDConfig{0.5, 2}.validate());
    CHECK_THROWS(FDConfig{1e-5, 5}.validate());
    CHECK_THROWS(FDConfig{1e-5, 0}.validate());
    CHECK_NOTHROW(FDConfig{1e-5, 2}.validate());
}

TEST_CASE("inverse and determinant on random symmetric matrices") {
    std::mt19937 rng(12);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 1 + trial % 6;
        Mat M;
        do {
            Mat R = Mat::NullaryExpr(n, n, [&](Eigen::Index, Eigen::Index) { return gauss(rng); });
            M = symmetrized(R) + Mat::Identity(n, n) * 0.5;
        } while (std::abs(determinant(M)) < 1e-3);
        Mat Minv = inverse(M);
        CHECK((M * Minv - Mat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(determinant(M) * determinant(Minv) == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(inverse(Mat::Zero(2, 2)), DegenerateMatrix);
}

TEST_CASE("pfaffian squares to the determinant") {
    std::mt19937 rng(13);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat fixed(2, 2);
    fixed << 0, 5, -5, 0;
    CHECK(pfaffian(fixed) == doctest::Approx(5.0));
    for (int n : {2, 4, 6}) {
        Mat R = Mat::NullaryExpr(n, n, [&](Eigen::Index, Eigen::Index) { return gauss(rng); });
        Mat A = R - R.transpose();
        double pf = pfaffian(A);
        CHECK(pf * pf == doctest::Approx(determinant(A)).epsilon(1e-9));
    }
}
