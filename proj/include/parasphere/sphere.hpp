#pragma once

#include <string>

#include "parasphere/special_kahler.hpp"

namespace parasphere {

// Data of the flat (Darboux) chart at a point: q = (x, y) with x = Re z,
// y = Re dF, Jacobian T = d(x,y)/d(x,v), Blaschke metric G = Hess u in
// the flat chart, complex structure and Kähler form pushed into it.
struct DarbouxFrame {
    Vec x, y;
    Mat T;     // [[I, 0], [A, -B]]
    Mat G;     // [[B + A B^-1 A, -A B^-1], [-B^-1 A, B^-1]]
    Mat Jmat;  // T J_chart T^-1
    Mat omega; // G (Jmat ., .) = Jmat^T G
};

std::pair<Vec, Vec> darboux(const SKPoint& p);
Mat metric_G(const SKPoint& p);
DarbouxFrame darboux_frame(const SKPoint& p);

// The closed 1-form beta = sum_i (Im F_i) dx^i - v^i d(Re F_i) expressed
// in the chart xi = (x, v); du = beta. Throws through line_integral if a
// quadrature node is degenerate.
OneForm potential_form(const Prepotential& F);

// u(z) with u(base) = 0, integrating beta along the given polyline (or
// the straight segment base -> z when no path is supplied).
double potential_u(const Prepotential& F, const std::vector<cplx>& base,
                   const std::vector<cplx>& z, int order = 16);
double potential_u(const Prepotential& F, const PathSpec& path);

// |det G - 1|: the Monge-Ampere certificate det Hess u = 1.
double ma_residual(const SKPoint& p);

// Independent route: Hessian of u in the flat chart by central
// differences of the scalar potential, inverting y(x, v) by Newton.
Mat fd_hessian_of_u(const Prepotential& F, const SKPoint& p, double step = 2e-3);

struct ConstancySpreads {
    double det_g = 0.0;       // spread of det G across samples
    double omega = 0.0;       // max spread of any omega component
    double volume_ratio = 0.0; // spread of (omega^m top coeff) / sqrt|det G|
};

// Deviation-from-constancy certificates for the nabla-parallel tensors in
// Darboux coordinates. Needs >= 2 samples of the same prepotential.
ConstancySpreads constancy_certificates(const std::vector<SKPoint>& samples);

struct ImmersionSample {
    std::size_t index = 0;       // flat grid index
    std::vector<int> grid_index; // per-axis node index
    Vec xi;
    Vec x, y;
    double u = 0.0;
    Mat G;
    double det_g = 0.0;
    Vec phi; // (x, y, u) in R^{2m+1}
};

struct GridAxis {
    double lo = 0.0, hi = 0.0;
    int count = 0;
};

struct GridSpec {
    std::vector<GridAxis> x_axes; // m axes for Re z
    std::vector<GridAxis> v_axes; // m axes for Im z

    void validate(int m) const;
    std::vector<int> shape() const;
    Vec node(const std::vector<int>& idx) const;
};

struct ImmersionResult {
    std::vector<ImmersionSample> samples; // grid order, degenerate nodes omitted
    std::vector<int> shape;
    std::size_t degenerate_count = 0;
    std::size_t path_warning_count = 0;
};

ImmersionResult immerse(const Prepotential& F, const GridSpec& grid,
                        const std::vector<cplx>& base, int quad_order = 16);

struct CongruenceResult {
    bool applicable = false;
    std::string note;
    MatrixSignature sig_g;
    Mat linear;      // (2m+1) x (2m+1), det = 1 when applicable
    Vec translation; // length 2m+1
    double det_linear = 0.0;
    double residual = 0.0;
};

// Equiaffine congruence of the graph of u onto the standard paraboloid
// height = sum of squared coordinates, for quadratic prepotentials with
// definite metric.
CongruenceResult paraboloid_congruence(const Prepotential& F, const std::vector<cplx>& probe);

} // namespace parasphere
