#pragma once

#include <random>
#include <string>
#include <vector>

#include "parasphere/special_kahler.hpp"

namespace parasphere::testing {

struct BundledPrepotential {
    std::string text;
    int m;
    // sampling box in the chart (x, v), one [lo, hi] per axis
    std::vector<std::pair<double, double>> box;
};

// The bundled prepotentials used across the geometric test suites, with
// boxes kept clear of the degenerate locus det Im Hess F = 0.
inline const std::vector<BundledPrepotential>& bundled() {
    static const std::vector<BundledPrepotential> list = {
        {"(i/2)*z1^2", 1, {{-1, 1}, {-1, 1}}},
        {"((1+i)/2)*z1^2", 1, {{-1, 1}, {-1, 1}}},
        {"z1^3/6", 1, {{-1, 1}, {0.5, 2}}},
        {"exp(z1)+(i/2)*z1^2", 1, {{-1, 1}, {0.1, 1}}},
        {"z1*z2+(i/2)*(z1^2+z2^2)", 2, {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}}},
        {"(i/6)*(z1^3+z2^3)+(i/2)*(z1^2+z2^2)", 2,
         {{-0.5, 0.5}, {-0.5, 0.5}, {-0.5, 0.5}, {-0.5, 0.5}}},
    };
    return list;
}

inline std::vector<Vec> sample_box(const BundledPrepotential& bp, int count,
                                   unsigned seed = 20260824) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Vec> out;
    for (int s = 0; s < count; ++s) {
        Vec xi(bp.box.size());
        for (std::size_t k = 0; k < bp.box.size(); ++k)
            xi[k] = bp.box[k].first + (bp.box[k].second - bp.box[k].first) * unit(rng);
        out.push_back(xi);
    }
    return out;
}

} // namespace parasphere::testing
