#include "parasphere/sphere.hpp"

#include <cmath>
#include <optional>

namespace parasphere {

std::pair<Vec, Vec> darboux(const SKPoint& p) {
    const int m = p.m();
    Vec x(m), y(m);
    for (int i = 0; i < m; ++i) {
        x[i] = p.z[i].real();
        y[i] = p.jet.grad[i].real();
    }
    return {x, y};
}

Mat metric_G(const SKPoint& p) {
    if (!p.nondegenerate)
        throw DegeneratePoint("metric undefined on the degenerate locus");
    const int m = p.m();
    Mat Binv = inverse(p.B);
    Mat G(2 * m, 2 * m);
    G.topLeftCorner(m, m) = p.B + p.A * Binv * p.A;
    G.topRightCorner(m, m) = -p.A * Binv;
    G.bottomLeftCorner(m, m) = -Binv * p.A;
    G.bottomRightCorner(m, m) = Binv;
    return symmetrized(G);
}

DarbouxFrame darboux_frame(const SKPoint& p) {
    const int m = p.m();
    DarbouxFrame f;
    std::tie(f.x, f.y) = darboux(p);
    f.T = Mat::Zero(2 * m, 2 * m);
    f.T.topLeftCorner(m, m) = Mat::Identity(m, m);
    f.T.bottomLeftCorner(m, m) = p.A;
    f.T.bottomRightCorner(m, m) = -p.B;
    f.G = metric_G(p);
    f.Jmat = f.T * chart_complex_structure(m) * inverse(f.T);
    f.omega = f.Jmat.transpose() * f.G;
    return f;
}

OneForm potential_form(const Prepotential& F) {
    const int m = F.arity();
    return [&F, m](const Vec& xi) {
        SKPoint p = make_point(F, xi);
        Vec beta(2 * m);
        if (!p.nondegenerate) {
            beta.setConstant(std::numeric_limits<double>::quiet_NaN());
            return beta;
        }
        // beta = sum_i s_i dx^i - v_i d(Re F_i),
        // d(Re F_i) = sum_j A_ij dx^j - B_ij dv^j
        for (int j = 0; j < m; ++j) {
            double bx = p.jet.grad[j].imag();
            double bv = 0.0;
            for (int i = 0; i < m; ++i) {
                bx -= xi[m + i] * p.A(i, j);
                bv += xi[m + i] * p.B(i, j);
            }
            beta[j] = bx;
            beta[m + j] = bv;
        }
        return beta;
    };
}

double potential_u(const Prepotential& F, const PathSpec& path) {
    return line_integral(potential_form(F), path);
}

double potential_u(const Prepotential& F, const std::vector<cplx>& base,
                   const std::vector<cplx>& z, int order) {
    Vec a = xi_from_z(base), b = xi_from_z(z);
    if ((a - b).norm() == 0.0) return 0.0;
    PathSpec path;
    path.waypoints = {a, b};
    path.order = order;
    return potential_u(F, path);
}

double ma_residual(const SKPoint& p) {
    return std::abs(metric_G(p).determinant() - 1.0);
}

namespace {

// Invert y(x, v) = Re dF for v at fixed x by Newton; dy/dv = -B.
Vec solve_v(const Prepotential& F, const Vec& x, const Vec& y_target, Vec v) {
    const int m = F.arity();
    for (int iter = 0; iter < 60; ++iter) {
        Vec xi(2 * m);
        xi << x, v;
        SKPoint p = make_point(F, xi);
        Vec y(m);
        for (int i = 0; i < m; ++i) y[i] = p.jet.grad[i].real();
        Vec r = y - y_target;
        if (r.lpNorm<Eigen::Infinity>() < 1e-13) return v;
        v += p.B.fullPivLu().solve(r);
    }
    throw std::runtime_error("Newton inversion of the Darboux chart did not converge");
}

} // namespace

Mat fd_hessian_of_u(const Prepotential& F, const SKPoint& p, double step) {
    const int m = p.m();
    const int n = 2 * m;
    auto [x0, y0] = darboux(p);
    Vec q0(n);
    q0 << x0, y0;
    Vec v0 = p.xi().tail(m);
    Vec xi0 = p.xi();
    OneForm beta = potential_form(F);

    // u relative to the center point: short straight-segment integral.
    auto urel = [&](const Vec& q) {
        Vec x = q.head(m);
        Vec v = solve_v(F, x, q.tail(m), v0);
        Vec xi(n);
        xi << x, v;
        if ((xi - xi0).norm() == 0.0) return 0.0;
        PathSpec path;
        path.waypoints = {xi0, xi};
        path.order = 16;
        return line_integral(beta, path);
    };

    auto stencil = [&](double h) {
        Mat H(n, n);
        for (int a = 0; a < n; ++a) {
            Vec ea = Vec::Zero(n);
            ea[a] = h;
            H(a, a) = (urel(q0 + ea) + urel(q0 - ea)) / (h * h);
            for (int b = a + 1; b < n; ++b) {
                Vec eb = Vec::Zero(n);
                eb[b] = h;
                double d = (urel(q0 + ea + eb) - urel(q0 + ea - eb) - urel(q0 - ea + eb) +
                            urel(q0 - ea - eb)) /
                           (4.0 * h * h);
                H(a, b) = d;
                H(b, a) = d;
            }
        }
        return H;
    };

    // one Richardson level takes the O(h^2) stencil error to O(h^4)
    double h = step * (1.0 + q0.lpNorm<Eigen::Infinity>());
    Mat coarse = stencil(h);
    Mat fine = stencil(0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

ConstancySpreads constancy_certificates(const std::vector<SKPoint>& samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("constancy certificates need at least 2 samples");
    const int m = samples.front().m();
    double fact = 1.0;
    for (int k = 2; k <= m; ++k) fact *= k;

    ConstancySpreads out;
    double det_lo = 0, det_hi = 0, ratio_lo = 0, ratio_hi = 0;
    Mat omega_lo, omega_hi;
    bool first = true;
    for (const SKPoint& p : samples) {
        DarbouxFrame f = darboux_frame(p);
        double det_g = f.G.determinant();
        double ratio = fact * pfaffian(f.omega) / std::sqrt(std::abs(det_g));
        if (first) {
            det_lo = det_hi = det_g;
            ratio_lo = ratio_hi = ratio;
            omega_lo = omega_hi = f.omega;
            first = false;
        } else {
            det_lo = std::min(det_lo, det_g);
            det_hi = std::max(det_hi, det_g);
            ratio_lo = std::min(ratio_lo, ratio);
            ratio_hi = std::max(ratio_hi, ratio);
            omega_lo = omega_lo.cwiseMin(f.omega);
            omega_hi = omega_hi.cwiseMax(f.omega);
        }
    }
    out.det_g = det_hi - det_lo;
    out.omega = (omega_hi - omega_lo).cwiseAbs().maxCoeff();
    out.volume_ratio = ratio_hi - ratio_lo;
    return out;
}

void GridSpec::validate(int m) const {
    if (static_cast<int>(x_axes.size()) != m || static_cast<int>(v_axes.size()) != m)
        throw std::invalid_argument("grid must have one x axis and one v axis per variable");
    for (const GridAxis& a : x_axes)
        if (a.count < 2 || !(a.hi > a.lo))
            throw std::invalid_argument("grid axis needs count >= 2 and hi > lo");
    for (const GridAxis& a : v_axes)
        if (a.count < 2 || !(a.hi > a.lo))
            throw std::invalid_argument("grid axis needs count >= 2 and hi > lo");
}

std::vector<int> GridSpec::shape() const {
    std::vector<int> s;
    for (const GridAxis& a : x_axes) s.push_back(a.count);
    for (const GridAxis& a : v_axes) s.push_back(a.count);
    return s;
}

Vec GridSpec::node(const std::vector<int>& idx) const {
    const int m = static_cast<int>(x_axes.size());
    Vec xi(2 * m);
    for (int k = 0; k < m; ++k) {
        const GridAxis& a = x_axes[k];
        xi[k] = a.lo + (a.hi - a.lo) * idx[k] / (a.count - 1);
    }
    for (int k = 0; k < m; ++k) {
        const GridAxis& a = v_axes[k];
        xi[m + k] = a.lo + (a.hi - a.lo) * idx[m + k] / (a.count - 1);
    }
    return xi;
}

ImmersionResult immerse(const Prepotential& F, const GridSpec& grid,
                        const std::vector<cplx>& base, int quad_order) {
    const int m = F.arity();
    grid.validate(m);
    ImmersionResult out;
    out.shape = grid.shape();
    const int naxes = static_cast<int>(out.shape.size());
    Vec base_xi = xi_from_z(base);
    OneForm beta = potential_form(F);

    auto integrate = [&](const Vec& from, double u_from, const Vec& to) {
        if ((from - to).norm() == 0.0) return u_from;
        PathSpec path;
        path.waypoints = {from, to};
        path.order = quad_order;
        return u_from + line_integral(beta, path);
    };

    std::vector<int> idx(naxes, 0);
    std::size_t flat = 0;
    // last axis varies fastest; u accumulates along each row by prefix sums
    std::optional<std::pair<Vec, double>> last_good;
    for (;;) {
        if (idx[naxes - 1] == 0) last_good.reset();
        Vec xi = grid.node(idx);
        SKPoint p = make_point(F, xi);
        if (!p.nondegenerate) {
            ++out.degenerate_count;
            last_good.reset();
        } else {
            bool have_u = false;
            double u = 0.0;
            if (last_good) {
                try {
                    u = integrate(last_good->first, last_good->second, xi);
                    have_u = true;
                } catch (const SingularPath&) {
                }
            }
            if (!have_u) {
                try {
                    u = integrate(base_xi, 0.0, xi);
                    have_u = true;
                } catch (const SingularPath&) {
                    ++out.path_warning_count;
                    last_good.reset();
                }
            }
            if (have_u) {
                ImmersionSample s;
                s.index = flat;
                s.grid_index = idx;
                s.xi = xi;
                std::tie(s.x, s.y) = darboux(p);
                s.u = u;
                s.G = metric_G(p);
                s.det_g = s.G.determinant();
                s.phi.resize(2 * m + 1);
                s.phi << s.x, s.y, u;
                out.samples.push_back(std::move(s));
                last_good = {xi, u};
            }
        }
        // advance the multi-index
        ++flat;
        int ax = naxes - 1;
        while (ax >= 0) {
            if (++idx[ax] < out.shape[ax]) break;
            idx[ax] = 0;
            --ax;
        }
        if (ax < 0) break;
    }
    return out;
}

CongruenceResult paraboloid_congruence(const Prepotential& F, const std::vector<cplx>& probe) {
    CongruenceResult out;
    if (!F.is_quadratic()) {
        out.note = "not applicable: prepotential is not quadratic";
        return out;
    }
    SKPoint p = make_point(F, probe);
    if (!p.nondegenerate)
        throw DegeneratePoint("congruence probe point is degenerate");
    const int m = p.m();
    const int n = 2 * m;
    Mat G = metric_G(p);
    out.sig_g = signature(G, 1e-10);
    if (out.sig_g.neg != 0) {
        out.note = "indefinite Blaschke metric: congruent to the standard indefinite "
                   "paraboloid; elliptic congruence not applicable";
        return out;
    }

    // u(q) = 1/2 q^T G q + a^T q + c with u normalized at the probe point
    auto [x0, y0] = darboux(p);
    Vec q0(n);
    q0 << x0, y0;
    Vec grad0(n); // du = (s, -v) in flat coordinates
    for (int i = 0; i < m; ++i) {
        grad0[i] = p.jet.grad[i].imag();
        grad0[m + i] = -p.z[i].imag();
    }
    Vec a = grad0 - G * q0;
    double c = -0.5 * q0.dot(G * q0) - a.dot(q0);
    Vec Ginv_a = inverse(G) * a;
    double c0 = c - 0.5 * a.dot(Ginv_a);

    Mat L = Eigen::LLT<Mat>(G).matrixL();
    double lambda = std::pow(2.0, -1.0 / (n + 2));
    out.linear = Mat::Zero(n + 1, n + 1);
    out.linear.topLeftCorner(n, n) = lambda * L.transpose();
    out.linear(n, n) = 2.0 * lambda * lambda;
    out.translation.resize(n + 1);
    out.translation.head(n) = lambda * L.transpose() * Ginv_a;
    out.translation[n] = -2.0 * lambda * lambda * c0;
    out.det_linear = out.linear.determinant();
    out.applicable = true;
    out.note = "congruent to the standard paraboloid";

    // residual over graph samples around the probe
    double r = 0.0;
    Vec xi0 = p.xi();
    for (int s = 0; s < 4 * n; ++s) {
        Vec xi = xi0;
        for (int k = 0; k < n; ++k)
            xi[k] += 0.3 * std::sin(1.7 * (s + 1) * (k + 1) + 0.4 * s);
        SKPoint ps = make_point(F, xi);
        if (!ps.nondegenerate) continue;
        double u = potential_u(F, probe, ps.z);
        auto [xs, ys] = darboux(ps);
        Vec q(n);
        q << xs, ys;
        Vec P = out.linear.topLeftCorner(n, n) * q + out.translation.head(n);
        double H = out.linear(n, n) * u + out.translation[n];
        r = std::max(r, std::abs(H - P.squaredNorm()));
    }
    out.residual = r;
    return out;
}

} // namespace parasphere
