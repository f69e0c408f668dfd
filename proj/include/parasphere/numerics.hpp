#pragma once

#include <functional>
#include <vector>

#include "parasphere/linalg.hpp"

namespace parasphere {

struct SingularPath : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Polyline in the chart R^n with a per-segment Gauss-Legendre order.
struct PathSpec {
    std::vector<Vec> waypoints;
    int order = 16;

    void validate() const;
};

// Gauss-Legendre nodes and weights on [-1, 1], cached per order.
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

// A real 1-form sampled in the chart: returns the covector at xi.
using OneForm = std::function<Vec(const Vec&)>;

// Composite Gauss-Legendre quadrature of a 1-form along a polyline.
// Throws SingularPath if the form is non-finite at any quadrature node.
double line_integral(const OneForm& form, const PathSpec& path);

struct FDConfig {
    double base_step = 1e-5; // relative to coordinate magnitude
    int levels = 2;          // Richardson levels

    void validate() const;
};

using VectorField = std::function<Vec(const Vec&)>;

// Central difference of `field` at `point` along `direction`, with
// Richardson extrapolation; error O(h^(2*levels)).
Vec fd_derivative(const VectorField& field, const Vec& point, const Vec& direction,
                  const FDConfig& cfg = {});

} // namespace parasphere
