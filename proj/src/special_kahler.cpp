#include "parasphere/special_kahler.hpp"

#include <cmath>

namespace parasphere {

Vec xi_from_z(const std::vector<cplx>& z) {
    const int m = static_cast<int>(z.size());
    Vec xi(2 * m);
    for (int k = 0; k < m; ++k) {
        xi[k] = z[k].real();
        xi[m + k] = z[k].imag();
    }
    return xi;
}

std::vector<cplx> z_from_xi(const Vec& xi) {
    if (xi.size() % 2 != 0)
        throw std::invalid_argument("chart point must have even dimension");
    const int m = static_cast<int>(xi.size()) / 2;
    std::vector<cplx> z(m);
    for (int k = 0; k < m; ++k) z[k] = cplx(xi[k], xi[m + k]);
    return z;
}

SKPoint make_point(const Prepotential& F, const std::vector<cplx>& z) {
    SKPoint p;
    p.F = &F;
    p.z = z;
    p.jet = F.jet(z);
    const int m = F.arity();
    p.A.resize(m, m);
    p.B.resize(m, m);
    double hmax = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            cplx h = p.jet.hess_at(i, j);
            p.A(i, j) = h.real();
            p.B(i, j) = h.imag();
            hmax = std::max(hmax, std::abs(h));
        }
    p.tol_deg = 1e-8 * (1.0 + hmax);
    p.detB = p.B.determinant();
    p.nondegenerate = std::abs(p.detB) > p.tol_deg;
    try {
        p.sigB = signature(p.B, p.tol_deg);
    } catch (const DegenerateMatrix&) {
        p.sigB.reset();
    }
    return p;
}

SKPoint make_point(const Prepotential& F, const Vec& xi) {
    return make_point(F, z_from_xi(xi));
}

static void require_nondegenerate(const SKPoint& p) {
    if (!p.nondegenerate)
        throw DegeneratePoint("point lies on the degenerate locus det Im Hess F = 0");
}

CMat hermitian_form(const SKPoint& p) {
    const int m = p.m();
    CMat h(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            h(i, j) = cplx(2.0 * p.jet.hess_at(i, j).imag(), 0.0);
    return h;
}

CMat hermitian_form_oracle(const SKPoint& p) {
    // phi_* e_i = (e_i, F_i.) in (z, w) coordinates; gamma = i Omega(., tau .)
    // with Omega((a,b),(c,d)) = sum_k a^k d_k - c^k b_k.
    const int m = p.m();
    const cplx iu(0.0, 1.0);
    CMat h(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            cplx omega = std::conj(p.jet.hess_at(j, i)) - p.jet.hess_at(i, j);
            h(i, j) = iu * omega;
        }
    return h;
}

CMat ambient_gamma(int m) {
    const cplx iu(0.0, 1.0);
    CMat g = CMat::Zero(2 * m, 2 * m);
    for (int k = 0; k < m; ++k) {
        g(k, m + k) = iu;
        g(m + k, k) = -iu;
    }
    return g;
}

double lagrangian_residual(const SKPoint& p) {
    const int m = p.m();
    double r = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            r = std::max(r, std::abs(p.jet.hess_at(i, j) - p.jet.hess_at(j, i)));
    return r;
}

double lagrangian_residual_fd(const SKPoint& p, const FDConfig& cfg) {
    const int m = p.m();
    const Prepotential& F = *p.F;
    // Recompute F_ij = dF_i/dx_j by finite differences of the symbolic
    // gradient, independent of the symmetrized jet storage.
    auto grad_field = [&](const Vec& xi) {
        HoloJet j = F.jet(z_from_xi(xi));
        Vec out(2 * m);
        for (int i = 0; i < m; ++i) {
            out[2 * i] = j.grad[i].real();
            out[2 * i + 1] = j.grad[i].imag();
        }
        return out;
    };
    Vec xi = p.xi();
    CMat H(m, m);
    for (int j = 0; j < m; ++j) {
        Vec dir = Vec::Zero(2 * m);
        dir[j] = 1.0; // x_j direction; holomorphy gives F_ij = dF_i/dx_j
        Vec d = fd_derivative(grad_field, xi, dir, cfg);
        for (int i = 0; i < m; ++i) H(i, j) = cplx(d[2 * i], d[2 * i + 1]);
    }
    double r = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            r = std::max(r, std::abs(H(i, j) - H(j, i)));
    return r;
}

double Christoffels::max_abs() const {
    double r = 0.0;
    for (double v : data) r = std::max(r, std::abs(v));
    return r;
}

Christoffels christoffels(ConnectionKind kind, const SKPoint& p) {
    require_nondegenerate(p);
    const int m = p.m();
    const int n = 2 * m;
    Mat Binv = inverse(p.B);

    // Second derivatives of the affine coordinates of the connection with
    // respect to the chart xi = (x, v). For the induced connection the
    // affine coordinates are (x, y) with y = Re dF; only the y-block is
    // nonlinear. For the conjugate connection they are (v, s), s = Im dF.
    // With F_ibc the third derivatives:
    //   d2 y_i: (x,x) -> Re F, (x,v) -> -Im F, (v,v) -> -Re F
    //   d2 s_i: (x,x) -> Im F, (x,v) ->  Re F, (v,v) -> -Im F
    auto second = [&](int i, int b, int c) -> double {
        bool bx = b < m, cx = c < m;
        cplx t = p.jet.third_at(i, bx ? b : b - m, cx ? c : c - m);
        if (kind == ConnectionKind::Induced) {
            if (bx && cx) return t.real();
            if (bx != cx) return -t.imag();
            return -t.real();
        }
        if (bx && cx) return t.imag();
        if (bx != cx) return t.real();
        return -t.imag();
    };

    Christoffels G;
    G.n = n;
    G.data.assign(n * n * n, 0.0);
    // Gamma^a_{bc} = (dxi/dq)^a_d d2 q^d_{bc}; only the nonlinear block of
    // the Jacobian inverse survives: -B^{-1} for nabla (rows v), +B^{-1}
    // for nabla^J (rows x).
    for (int j = 0; j < m; ++j)
        for (int b = 0; b < n; ++b)
            for (int c = b; c < n; ++c) {
                double acc = 0.0;
                for (int i = 0; i < m; ++i)
                    acc += Binv(j, i) * second(i, b, c);
                int a = (kind == ConnectionKind::Induced) ? m + j : j;
                double v = (kind == ConnectionKind::Induced) ? -acc : acc;
                G.at(a, b, c) = v;
                G.at(a, c, b) = v;
            }
    return G;
}

Christoffels christoffels(ConnectionKind kind, const Prepotential& F, const Vec& xi) {
    return christoffels(kind, make_point(F, xi));
}

Mat chart_metric(const SKPoint& p) {
    const int m = p.m();
    Mat g = Mat::Zero(2 * m, 2 * m);
    g.topLeftCorner(m, m) = p.B;
    g.bottomRightCorner(m, m) = p.B;
    return g;
}

Mat chart_metric(const Prepotential& F, const Vec& xi) {
    return chart_metric(make_point(F, xi));
}

Mat chart_complex_structure(int m) {
    Mat J = Mat::Zero(2 * m, 2 * m);
    J.topRightCorner(m, m) = -Mat::Identity(m, m);
    J.bottomLeftCorner(m, m) = Mat::Identity(m, m);
    return J;
}

Mat chart_kahler_form(const SKPoint& p) {
    // omega = g'(J., .), i.e. omega_ab = (J^T g')_ab
    const int m = p.m();
    Mat w = Mat::Zero(2 * m, 2 * m);
    w.topRightCorner(m, m) = p.B;
    w.bottomLeftCorner(m, m) = -p.B;
    return w;
}

static Mat hess_slice(const SKPoint& p, int direction, bool imag_part) {
    const int m = p.m();
    bool xdir = direction < m;
    int k = xdir ? direction : direction - m;
    Mat d(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            cplx t = p.jet.third_at(i, j, k);
            // d/dx_k acts as d/dz_k on holomorphic data, d/dv_k as i d/dz_k
            cplx dh = xdir ? t : cplx(0.0, 1.0) * t;
            d(i, j) = imag_part ? dh.imag() : dh.real();
        }
    return d;
}

Mat chart_metric_derivative(const SKPoint& p, int direction) {
    const int m = p.m();
    Mat dB = hess_slice(p, direction, true);
    Mat dg = Mat::Zero(2 * m, 2 * m);
    dg.topLeftCorner(m, m) = dB;
    dg.bottomRightCorner(m, m) = dB;
    return dg;
}

Mat chart_kahler_form_derivative(const SKPoint& p, int direction) {
    const int m = p.m();
    Mat dB = hess_slice(p, direction, true);
    Mat dw = Mat::Zero(2 * m, 2 * m);
    dw.topRightCorner(m, m) = dB;
    dw.bottomLeftCorner(m, m) = -dB;
    return dw;
}

double conjugacy_residual(const SKPoint& p, ConnectionKind k1, ConnectionKind k2,
                          bool fd_metric_derivative) {
    require_nondegenerate(p);
    const int n = 2 * p.m();
    Christoffels G1 = christoffels(k1, p);
    Christoffels G2 = (k2 == k1) ? G1 : christoffels(k2, p);
    Mat g = chart_metric(p);

    std::vector<Mat> dg(n);
    if (fd_metric_derivative) {
        const Prepotential& F = *p.F;
        auto field = [&](const Vec& xi) {
            Mat gg = chart_metric(F, xi);
            return Vec(Eigen::Map<Vec>(gg.data(), gg.size()));
        };
        Vec xi = p.xi();
        for (int b = 0; b < n; ++b) {
            Vec dir = Vec::Zero(n);
            dir[b] = 1.0;
            Vec d = fd_derivative(field, xi, dir);
            dg[b] = Eigen::Map<Mat>(d.data(), n, n);
        }
    } else {
        for (int b = 0; b < n; ++b) dg[b] = chart_metric_derivative(p, b);
    }

    double r = 0.0;
    for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) {
                double acc = dg[b](c, d);
                for (int e = 0; e < n; ++e)
                    acc -= G1.at(e, b, c) * g(e, d) + G2.at(e, b, d) * g(c, e);
                r = std::max(r, std::abs(acc));
            }
    return r;
}

std::pair<double, double> special_residuals_with(const SKPoint& p, const Christoffels& G) {
    require_nondegenerate(p);
    const int n = 2 * p.m();
    Mat w = chart_kahler_form(p);
    Mat J = chart_complex_structure(p.m());

    double r1 = 0.0;
    for (int b = 0; b < n; ++b) {
        Mat dw = chart_kahler_form_derivative(p, b);
        for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) {
                double acc = dw(c, d);
                for (int e = 0; e < n; ++e)
                    acc -= G.at(e, b, c) * w(e, d) + G.at(e, b, d) * w(c, e);
                r1 = std::max(r1, std::abs(acc));
            }
    }

    // (nabla_b J)^a_c = Gamma^a_{be} J^e_c - Gamma^e_{bc} J^a_e (J constant
    // in the chart); residual antisymmetrizes in (b, c).
    double r2 = 0.0;
    auto covJ = [&](int b, int a, int c) {
        double acc = 0.0;
        for (int e = 0; e < n; ++e)
            acc += G.at(a, b, e) * J(e, c) - G.at(e, b, c) * J(a, e);
        return acc;
    };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                r2 = std::max(r2, std::abs(covJ(b, a, c) - covJ(c, a, b)));
    return {r1, r2};
}

std::pair<double, double> special_residuals(const SKPoint& p) {
    return special_residuals_with(p, christoffels(ConnectionKind::Induced, p));
}

double nijenhuis_residual(const Prepotential& F, const Vec& xi, const JField& Jf,
                          const FDConfig& cfg) {
    const int n = static_cast<int>(xi.size());
    Mat J = Jf(xi);
    auto field = [&](const Vec& q) {
        Mat M = Jf(q);
        return Vec(Eigen::Map<Vec>(M.data(), M.size()));
    };
    std::vector<Mat> DJ(n); // DJ[d] = derivative of the J field along e_d
    for (int d = 0; d < n; ++d) {
        Vec dir = Vec::Zero(n);
        dir[d] = 1.0;
        Vec dv = fd_derivative(field, xi, dir, cfg);
        DJ[d] = Eigen::Map<Mat>(dv.data(), n, n);
    }
    // N(e_a, e_b) = [Je_a, Je_b] - J d_a(Je_b) + J d_b(Je_a)
    double r = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            Vec bracket = Vec::Zero(n);
            for (int d = 0; d < n; ++d)
                bracket += J(d, a) * DJ[d].col(b) - J(d, b) * DJ[d].col(a);
            Vec N = bracket - J * DJ[a].col(b) + J * DJ[b].col(a);
            r = std::max(r, N.cwiseAbs().maxCoeff());
        }
    (void)F;
    return r;
}

double nijenhuis_residual(const SKPoint& p, const FDConfig& cfg) {
    require_nondegenerate(p);
    const int m = p.m();
    Mat J = chart_complex_structure(m);
    return nijenhuis_residual(*p.F, p.xi(), [J](const Vec&) { return J; }, cfg);
}

JField twisted_control_structure(int m) {
    if (m != 2)
        throw std::invalid_argument("twisted control structure is defined for m = 2");
    Mat J0 = chart_complex_structure(2);
    return [J0](const Vec& xi) {
        double theta = xi[0] * xi[3]; // x1 * v2
        Mat R = Mat::Identity(4, 4);
        R(0, 0) = std::cos(theta);
        R(0, 1) = -std::sin(theta);
        R(1, 0) = std::sin(theta);
        R(1, 1) = std::cos(theta);
        return Mat(R * J0 * R.transpose());
    };
}

double curvature_residual(const ChristoffelField& field, const Vec& xi, int n,
                          const FDConfig& cfg) {
    auto flat = [&](const Vec& q) {
        Christoffels G = field(q);
        return Vec(Eigen::Map<Vec>(G.data.data(), G.data.size()));
    };
    Christoffels G = field(xi);
    std::vector<Christoffels> dG(n);
    for (int b = 0; b < n; ++b) {
        Vec dir = Vec::Zero(n);
        dir[b] = 1.0;
        Vec dv = fd_derivative(flat, xi, dir, cfg);
        dG[b].n = n;
        dG[b].data.assign(dv.data(), dv.data() + dv.size());
    }
    double r = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double acc = dG[b].at(a, c, d) - dG[c].at(a, b, d);
                    for (int e = 0; e < n; ++e)
                        acc += G.at(a, b, e) * G.at(e, c, d) - G.at(a, c, e) * G.at(e, b, d);
                    r = std::max(r, std::abs(acc));
                }
    return r;
}

std::pair<double, double> curvature_torsion(ConnectionKind kind, const SKPoint& p,
                                            const FDConfig& cfg) {
    require_nondegenerate(p);
    const int n = 2 * p.m();
    Christoffels G = christoffels(kind, p);
    double torsion = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                torsion = std::max(torsion, std::abs(G.at(a, b, c) - G.at(a, c, b)));
    const Prepotential& F = *p.F;
    auto field = [&, kind](const Vec& q) { return christoffels(kind, F, q); };
    double curv = curvature_residual(field, p.xi(), n, cfg);
    return {torsion, curv};
}

Mat ricci(const ChristoffelField& field, const Vec& xi, int n, const FDConfig& cfg) {
    auto flat = [&](const Vec& q) {
        Christoffels G = field(q);
        return Vec(Eigen::Map<Vec>(G.data.data(), G.data.size()));
    };
    Christoffels G = field(xi);
    std::vector<Christoffels> dG(n);
    for (int b = 0; b < n; ++b) {
        Vec dir = Vec::Zero(n);
        dir[b] = 1.0;
        Vec dv = fd_derivative(flat, xi, dir, cfg);
        dG[b].n = n;
        dG[b].data.assign(dv.data(), dv.data() + dv.size());
    }
    // Ric_bd = R^a_{bad} = d_a Gamma^a_{db} - d_d Gamma^a_{ab}
    //          + Gamma^a_{ae} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{ab}
    Mat R = Mat::Zero(n, n);
    for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
            double acc = 0.0;
            for (int a = 0; a < n; ++a) {
                acc += dG[a].at(a, d, b) - dG[d].at(a, a, b);
                for (int e = 0; e < n; ++e)
                    acc += G.at(a, a, e) * G.at(e, d, b) - G.at(a, d, e) * G.at(e, a, b);
            }
            R(b, d) = acc;
        }
    return R;
}

ShapeResult shape_tensor_with(const SKPoint& p, const ChristoffelField& conj_field,
                              const FDConfig& cfg) {
    require_nondegenerate(p);
    const int n = 2 * p.m();
    Mat Ric = ricci(conj_field, p.xi(), n, cfg);
    ShapeResult out;
    out.S = inverse(chart_metric(p)) * Ric;
    out.lambda = out.S.trace() / n;
    out.max_abs = out.S.cwiseAbs().maxCoeff();
    return out;
}

ShapeResult shape_tensor(const SKPoint& p, const FDConfig& cfg) {
    const Prepotential& F = *p.F;
    return shape_tensor_with(
        p, [&F](const Vec& q) { return christoffels(ConnectionKind::Conjugate, F, q); }, cfg);
}

Christoffels levi_civita(const Prepotential& F, const Vec& xi) {
    SKPoint p = make_point(F, xi);
    require_nondegenerate(p);
    const int n = 2 * p.m();
    Mat g = chart_metric(p);
    Mat ginv = inverse(g);
    std::vector<Mat> dg(n);
    for (int b = 0; b < n; ++b) dg[b] = chart_metric_derivative(p, b);
    Christoffels G;
    G.n = n;
    G.data.assign(n * n * n, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                double acc = 0.0;
                for (int d = 0; d < n; ++d)
                    acc += ginv(a, d) * (dg[b](d, c) + dg[c](b, d) - dg[d](b, c));
                G.at(a, b, c) = 0.5 * acc;
            }
    return G;
}

double scalar_curvature(const SKPoint& p, const FDConfig& cfg) {
    require_nondegenerate(p);
    const int n = 2 * p.m();
    const Prepotential& F = *p.F;
    auto field = [&F](const Vec& q) { return levi_civita(F, q); };
    Mat Ric = ricci(field, p.xi(), n, cfg);
    Mat ginv = inverse(chart_metric(p));
    double s = 0.0;
    for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d)
            s += ginv(b, d) * Ric(b, d);
    return s;
}

double gauss_curvature(const SKPoint& p, const FDConfig& cfg) {
    if (p.m() != 1)
        throw std::invalid_argument("Gauss curvature is defined for m = 1");
    return 0.5 * scalar_curvature(p, cfg);
}

} // namespace parasphere
