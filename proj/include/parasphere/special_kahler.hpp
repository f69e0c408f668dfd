#pragma once

#include <optional>

#include "parasphere/expr.hpp"
#include "parasphere/numerics.hpp"

namespace parasphere {

struct DegeneratePoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Chart conventions: the working chart is xi = (x, v) in R^{2m} with
// z = x + i v. Darboux (flat) coordinates are q = (x, y) with
// y = Re dF; the dual flat coordinates of the conjugate connection are
// (v, s) with s = Im dF.

Vec xi_from_z(const std::vector<cplx>& z);
std::vector<cplx> z_from_xi(const Vec& xi);

// A base point with the cached data everything downstream consumes.
struct SKPoint {
    const Prepotential* F = nullptr;
    std::vector<cplx> z;
    HoloJet jet;
    Mat A; // Re Hess F
    Mat B; // Im Hess F
    double detB = 0.0;
    double tol_deg = 0.0; // 1e-8 * (1 + |Hess F|_inf)
    bool nondegenerate = false;
    std::optional<MatrixSignature> sigB;

    int m() const { return F->arity(); }
    Vec xi() const { return xi_from_z(z); }
};

SKPoint make_point(const Prepotential& F, const std::vector<cplx>& z);
SKPoint make_point(const Prepotential& F, const Vec& xi);

// Pullback of the ambient Hermitian form gamma = i Omega(., tau .) on the
// coordinate tangent vectors of the immersion dF: h_ij = 2 Im F_ij.
CMat hermitian_form(const SKPoint& p);

// Independent route: push the coordinate frame through dF into T*C^m and
// evaluate i Omega(., tau .) there directly.
CMat hermitian_form_oracle(const SKPoint& p);

// The ambient Hermitian form gamma on the standard basis of T*C^m.
CMat ambient_gamma(int m);

// Max |F_ij - F_ji|: the Lagrangian certificate Omega(phi_* e_i, phi_* e_j) = 0.
double lagrangian_residual(const SKPoint& p);

// Same residual with the Hessian recomputed by finite differences of the
// gradient (independent of the symmetrized jet storage).
double lagrangian_residual_fd(const SKPoint& p, const FDConfig& cfg = {});

enum class ConnectionKind {
    Induced,  // flat connection with affine coordinates (x, y)
    Conjugate // nabla^J = J nabla J^{-1}, affine coordinates (v, s)
};

// Christoffel symbols Gamma^a_{bc}, order n = 2m, symmetric in (b, c).
struct Christoffels {
    int n = 0;
    std::vector<double> data; // n^3, index (a*n + b)*n + c

    double& at(int a, int b, int c) { return data[(a * n + b) * n + c]; }
    double at(int a, int b, int c) const { return data[(a * n + b) * n + c]; }
    double max_abs() const;
};

Christoffels christoffels(ConnectionKind kind, const SKPoint& p);
Christoffels christoffels(ConnectionKind kind, const Prepotential& F, const Vec& xi);

// Metric, Kähler form and complex structure in the working chart (x, v):
// g' = diag(B, B), J = [[0, -I], [I, 0]], omega = g'(J., .).
Mat chart_metric(const SKPoint& p);
Mat chart_metric(const Prepotential& F, const Vec& xi);
Mat chart_complex_structure(int m);
Mat chart_kahler_form(const SKPoint& p);

// Exact directional derivative of the chart metric (uses F_ijk).
Mat chart_metric_derivative(const SKPoint& p, int direction);
Mat chart_kahler_form_derivative(const SKPoint& p, int direction);

// max_b,c,d |d_b g_cd - Gamma(k1)^e_{bc} g_ed - Gamma(k2)^e_{bd} g_ce|.
// The conjugacy identity holds with (k1, k2) = (Induced, Conjugate); other
// combinations serve as negative controls.
double conjugacy_residual(const SKPoint& p,
                          ConnectionKind k1 = ConnectionKind::Induced,
                          ConnectionKind k2 = ConnectionKind::Conjugate,
                          bool fd_metric_derivative = false);

// (|nabla omega| residual, |d^nabla J| residual) for the given Christoffels.
std::pair<double, double> special_residuals_with(const SKPoint& p, const Christoffels& G);
std::pair<double, double> special_residuals(const SKPoint& p);

// Matrix field of an almost complex structure in the chart.
using JField = std::function<Mat(const Vec&)>;

// Max component of the Nijenhuis tensor evaluated on coordinate fields,
// with the bracket terms of J-multiplied fields computed by finite
// differences of the matrix field.
double nijenhuis_residual(const Prepotential& F, const Vec& xi, const JField& J,
                          const FDConfig& cfg = {});
double nijenhuis_residual(const SKPoint& p, const FDConfig& cfg = {});

// A deliberately non-integrable control structure for m = 2: conjugate J
// by a rotation of the (x1, x2) plane through angle x1 * v2.
JField twisted_control_structure(int m);

// (torsion residual, curvature residual) of a Christoffel field.
std::pair<double, double> curvature_torsion(ConnectionKind kind, const SKPoint& p,
                                            const FDConfig& cfg = {});

// Curvature machinery on an arbitrary Christoffel field evaluator.
using ChristoffelField = std::function<Christoffels(const Vec&)>;
double curvature_residual(const ChristoffelField& field, const Vec& xi, int n,
                          const FDConfig& cfg = {});

// Ricci tensor of a Christoffel field, Ric_bd = R^a_{bad}.
Mat ricci(const ChristoffelField& field, const Vec& xi, int n, const FDConfig& cfg = {});

// Shape tensor S = g^{-1} Ric^{conjugate} and lambda = tr(S) / 2m.
struct ShapeResult {
    Mat S;
    double lambda = 0.0;
    double max_abs = 0.0;
};
ShapeResult shape_tensor(const SKPoint& p, const FDConfig& cfg = {});
ShapeResult shape_tensor_with(const SKPoint& p, const ChristoffelField& conj_field,
                              const FDConfig& cfg = {});

// Levi-Civita connection of the chart metric (exact metric derivatives).
Christoffels levi_civita(const Prepotential& F, const Vec& xi);

// Scalar curvature of the chart metric; for m = 1 the Gauss curvature is
// half of it.
double scalar_curvature(const SKPoint& p, const FDConfig& cfg = {});
double gauss_curvature(const SKPoint& p, const FDConfig& cfg = {});

} // namespace parasphere
