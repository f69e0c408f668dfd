#include "parasphere/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace parasphere {

void PathSpec::validate() const {
    if (waypoints.size() < 2)
        throw std::invalid_argument("path needs at least two waypoints");
    if (order < 1 || order > 64)
        throw std::invalid_argument("quadrature order out of range");
    for (std::size_t k = 1; k < waypoints.size(); ++k) {
        if (waypoints[k].size() != waypoints[0].size())
            throw std::invalid_argument("path waypoints have mixed dimensions");
        if ((waypoints[k] - waypoints[k - 1]).norm() == 0.0)
            throw std::invalid_argument("consecutive path waypoints coincide");
    }
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(order);
        if (it != cache.end()) {
            nodes = it->second.first;
            weights = it->second.second;
            return;
        }
    }
    // Newton iteration on Legendre polynomials
    std::vector<double> x(order), w(order);
    for (int i = 0; i < order; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = t;
            for (int n = 2; n <= order; ++n) {
                double p2 = ((2 * n - 1) * t * p1 - (n - 1) * p0) / n;
                p0 = p1;
                p1 = p2;
            }
            double dp = order * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = t;
        for (int n = 2; n <= order; ++n) {
            double p2 = ((2 * n - 1) * t * p1 - (n - 1) * p0) / n;
            p0 = p1;
            p1 = p2;
        }
        double dp = order * (t * p1 - p0) / (t * t - 1.0);
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    {
        std::lock_guard<std::mutex> lock(mtx);
        cache[order] = {x, w};
    }
    nodes = x;
    weights = w;
}

double line_integral(const OneForm& form, const PathSpec& path) {
    path.validate();
    std::vector<double> nodes, weights;
    gauss_legendre(path.order, nodes, weights);
    double total = 0.0;
    for (std::size_t s = 1; s < path.waypoints.size(); ++s) {
        const Vec& a = path.waypoints[s - 1];
        const Vec& b = path.waypoints[s];
        Vec dir = b - a;
        for (int q = 0; q < path.order; ++q) {
            double t = 0.5 * (nodes[q] + 1.0);
            Vec p = a + t * dir;
            Vec omega = form(p);
            if (!omega.allFinite())
                throw SingularPath("path crosses singular/degenerate locus");
            total += 0.5 * weights[q] * omega.dot(dir);
        }
    }
    return total;
}

void FDConfig::validate() const {
    if (!(base_step > 1e-9 && base_step < 1e-2))
        throw std::invalid_argument("FD base step must lie in (1e-9, 1e-2)");
    if (levels < 1 || levels > 4)
        throw std::invalid_argument("Richardson levels must lie in 1..4");
}

Vec fd_derivative(const VectorField& field, const Vec& point, const Vec& direction,
                  const FDConfig& cfg) {
    cfg.validate();
    double h0 = cfg.base_step * (1.0 + point.lpNorm<Eigen::Infinity>());
    // Richardson table over step halving; column j cancels O(h^(2j)) terms.
    std::vector<Vec> row(cfg.levels);
    std::vector<Vec> prev;
    for (int k = 0; k < cfg.levels; ++k) {
        double h = h0 / std::pow(2.0, k);
        Vec d = (field(point + h * direction) - field(point - h * direction)) / (2.0 * h);
        std::vector<Vec> cur(k + 1);
        cur[0] = d;
        for (int j = 1; j <= k; ++j) {
            double f = std::pow(4.0, j);
            cur[j] = (f * cur[j - 1] - prev[j - 1]) / (f - 1.0);
        }
        prev = cur;
    }
    return prev.back();
}

} // namespace parasphere
