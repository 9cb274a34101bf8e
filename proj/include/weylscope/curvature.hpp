#pragma once

// Pointwise curvature pipeline. All quantities are assembled from metric jets
// only; there is no finite differencing here.
//
// Conventions (self-consistent set, pinned by the identity tests):
//   R(X,Y)Z = nab_X nab_Y Z - nab_Y nab_X Z - nab_{[X,Y]} Z
//   riemann(a,b,c,d) = g_{ce} R^e_{abd}   (operator output lowered to slot 3)
//   ricci(b,d) = g^{ac} riemann(a,b,c,d)  (positive on round spheres)
//   h = (Ric - tau/(2(n-1)) g)/(n-2),  W = R - g (*) h
//   C(a,b,c) = (nab_a h)(b,c) - (nab_b h)(a,c)
//   weyl_div(a,b,c) = g^{ef} (nab_e W)(a,b,f,c)
// With these, delta W = (n-3) C and the conformal transformation law of
// delta W hold to machine precision (insertion X -| W fills slot 4).

#include "weylscope/errors.hpp"
#include "weylscope/jet.hpp"
#include "weylscope/metric.hpp"
#include "weylscope/tensor.hpp"

#include <Eigen/Dense>

namespace weylscope {

struct CurvatureBundle {
    int n = 0;
    Eigen::MatrixXd g, g_inv;
    Eigen::MatrixXd frame; // columns = g-orthonormal basis vectors (Cholesky gauge)

    Tensor3 gamma;     // Gamma^a_{bc}
    Tensor4 gamma_d1;  // (a,b,c,e) = d_e Gamma^a_{bc}
    Tensor5 gamma_d2;  // (a,b,c,e,f) = d_e d_f Gamma^a_{bc}; full pipeline only

    Tensor4 riemann;   // R_{abcd}
    Eigen::MatrixXd ricci, ricci_traceless, schouten;
    double tau = 0.0;
    double rho = 0.0;  // tau / (n (n-1))

    Tensor3 schouten_grad; // (a,b,c) = (nab_a h)_{bc}; full pipeline only
    Tensor3 cotton;        // full pipeline only
    Tensor4 weyl;
    Tensor5 weyl_grad;     // (e,a,b,c,d) = (nab_e W)_{abcd}; full pipeline only
    Tensor3 weyl_div;      // full pipeline only
    bool has_derivatives = false;

    // magnitude of the terms summed into the coordinate Riemann tensor before
    // cancellation; absolute scale reference for rank decisions
    double assembly_scale = 0.0;
};

inline Tensor4 kulkarni_nomizu(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        raise(ErrorKind::ShapeMismatch, "kulkarni_nomizu expects equal square matrices");
    const int n = static_cast<int>(A.rows());
    Tensor4 t(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    t(a, b, c, d) = A(a, c) * B(b, d) + A(b, d) * B(a, c) -
                                    A(a, d) * B(b, c) - A(b, c) * B(a, d);
    return t;
}

// F_V(X,Y) = g(nab_X V, Y) + g(X,V) g(Y,V) - [div V + g(V,V)] g(X,Y)/n.
// grad_v(a,b) = nab_a V^b (covariant derivative, mixed components).
inline Eigen::MatrixXd f_v_tensor(const Eigen::MatrixXd& g, const Eigen::VectorXd& V,
                                  const Eigen::MatrixXd& grad_v) {
    const int n = static_cast<int>(g.rows());
    if (V.size() != n || grad_v.rows() != n || grad_v.cols() != n)
        raise(ErrorKind::ShapeMismatch, "f_v_tensor dimension mismatch");
    Eigen::VectorXd Vl = g * V;
    const double div = grad_v.trace();
    const double vv = V.dot(Vl);
    Eigen::MatrixXd F(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double nv = 0.0;
            for (int e = 0; e < n; ++e) nv += grad_v(a, e) * g(e, b);
            F(a, b) = nv + Vl(a) * Vl(b) - (div + vv) / n * g(a, b);
        }
    return F;
}

inline CurvatureBundle curvature_bundle(const MetricJet& mj, bool with_derivatives = true) {
    const int n = mj.n;
    if (n < 3) raise(ErrorKind::DimensionTooSmall, "curvature pipeline requires n >= 3");
    if (with_derivatives && mj.order < 3)
        raise(ErrorKind::ShapeMismatch, "full bundle needs order-3 metric jets");

    CurvatureBundle cb;
    cb.n = n;
    cb.g = mj.g_values;
    cb.g_inv = mj.g_inv;
    cb.frame = cholesky_frame(cb.g);
    cb.has_derivatives = with_derivatives;

    // Christoffel jets: Gamma^a_{bc} = 1/2 g^{ad} (d_b g_{dc} + d_c g_{db} - d_d g_{bc});
    // valid to order (metric order - 1)
    std::vector<Jet3> gamma_j(static_cast<size_t>(n * n * n));
    auto GJ = [&](int a, int b, int c) -> Jet3& {
        return gamma_j[static_cast<size_t>((a * n + b) * n + c)];
    };
    for (int b = 0; b < n; ++b)
        for (int c = b; c < n; ++c) {
            std::vector<Jet3> bracket(static_cast<size_t>(n), Jet3(n, mj.order));
            for (int d = 0; d < n; ++d)
                bracket[static_cast<size_t>(d)] =
                    mj.gj(d, c).shift(b) + mj.gj(d, b).shift(c) - mj.gj(b, c).shift(d);
            for (int a = 0; a < n; ++a) {
                Jet3 acc(n, mj.order);
                for (int d = 0; d < n; ++d)
                    acc += mj.ginvj(a, d) * bracket[static_cast<size_t>(d)];
                acc *= 0.5;
                GJ(a, b, c) = acc;
                if (c != b) GJ(a, c, b) = acc;
            }
        }

    cb.gamma = Tensor3(n);
    cb.gamma_d1 = Tensor4(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                cb.gamma(a, b, c) = GJ(a, b, c).value();
                for (int e = 0; e < n; ++e) cb.gamma_d1(a, b, c, e) = GJ(a, b, c).grad(e);
            }
    if (with_derivatives) {
        cb.gamma_d2 = Tensor5(n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int e = 0; e < n; ++e)
                        for (int f = 0; f < n; ++f)
                            cb.gamma_d2(a, b, c, e, f) = GJ(a, b, c).hess(e, f);
    }

    // Riemann (values and, when requested, first coordinate derivatives)
    // R^e_{abd} = d_a Gamma^e_{bd} - d_b Gamma^e_{ad}
    //           + Gamma^e_{af} Gamma^f_{bd} - Gamma^e_{bf} Gamma^f_{ad}
    Tensor4 riem_up(n);
    Tensor5 riem_up_d1; // (e,a,b,d,q) = d_q R^e_{abd}
    if (with_derivatives) riem_up_d1 = Tensor5(n);
    double assembly = 0.0;
    for (int e = 0; e < n; ++e)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int d = 0; d < n; ++d) {
                    double v = cb.gamma_d1(e, b, d, a) - cb.gamma_d1(e, a, d, b);
                    double mag = std::abs(cb.gamma_d1(e, b, d, a)) +
                                 std::abs(cb.gamma_d1(e, a, d, b));
                    for (int f = 0; f < n; ++f) {
                        const double t1 = cb.gamma(e, a, f) * cb.gamma(f, b, d);
                        const double t2 = cb.gamma(e, b, f) * cb.gamma(f, a, d);
                        v += t1 - t2;
                        mag += std::abs(t1) + std::abs(t2);
                    }
                    riem_up(e, a, b, d) = v;
                    assembly = std::max(assembly, mag);
                    if (with_derivatives) {
                        for (int q = 0; q < n; ++q) {
                            double dv = GJ(e, b, d).hess(a, q) - GJ(e, a, d).hess(b, q);
                            for (int f = 0; f < n; ++f)
                                dv += cb.gamma_d1(e, a, f, q) * cb.gamma(f, b, d) +
                                      cb.gamma(e, a, f) * cb.gamma_d1(f, b, d, q) -
                                      cb.gamma_d1(e, b, f, q) * cb.gamma(f, a, d) -
                                      cb.gamma(e, b, f) * cb.gamma_d1(f, a, d, q);
                            riem_up_d1(e, a, b, d, q) = dv;
                        }
                    }
                }
    cb.assembly_scale = assembly;

    // lower: R_{abcd} = g_{ce} R^e_{abd}
    cb.riemann = Tensor4(n);
    Tensor5 riem_d1; // (a,b,c,d,q) = d_q R_{abcd}
    if (with_derivatives) riem_d1 = Tensor5(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double v = 0.0;
                    for (int e = 0; e < n; ++e) v += cb.g(c, e) * riem_up(e, a, b, d);
                    cb.riemann(a, b, c, d) = v;
                    if (with_derivatives) {
                        for (int q = 0; q < n; ++q) {
                            double dv = 0.0;
                            for (int e = 0; e < n; ++e)
                                dv += mj.gj(c, e).grad(q) * riem_up(e, a, b, d) +
                                      cb.g(c, e) * riem_up_d1(e, a, b, d, q);
                            riem_d1(a, b, c, d, q) = dv;
                        }
                    }
                }

    // g^{-1} first derivatives: d_q g^{ac} = -(g^-1 d_q g g^-1)^{ac}
    std::vector<Eigen::MatrixXd> dginv(static_cast<size_t>(n));
    {
        for (int q = 0; q < n; ++q) {
            Eigen::MatrixXd dg(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) dg(i, j) = mj.gj(i, j).grad(q);
            dginv[static_cast<size_t>(q)] = -cb.g_inv * dg * cb.g_inv;
        }
    }

    // Ricci and scalar curvature with first derivatives
    cb.ricci.resize(n, n);
    Eigen::MatrixXd dric[8];
    for (int q = 0; q < n; ++q) dric[q] = Eigen::MatrixXd::Zero(n, n);
    for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
            double v = 0.0;
            for (int a = 0; a < n; ++a)
                for (int c = 0; c < n; ++c) v += cb.g_inv(a, c) * cb.riemann(a, b, c, d);
            cb.ricci(b, d) = v;
            if (with_derivatives)
                for (int q = 0; q < n; ++q) {
                    double dv = 0.0;
                    for (int a = 0; a < n; ++a)
                        for (int c = 0; c < n; ++c)
                            dv += dginv[static_cast<size_t>(q)](a, c) * cb.riemann(a, b, c, d) +
                                  cb.g_inv(a, c) * riem_d1(a, b, c, d, q);
                    dric[q](b, d) = dv;
                }
        }
    cb.tau = (cb.g_inv * cb.ricci).trace();
    cb.rho = cb.tau / (n * (n - 1));
    Eigen::VectorXd dtau = Eigen::VectorXd::Zero(n);
    if (with_derivatives)
        for (int q = 0; q < n; ++q)
            dtau(q) = (dginv[static_cast<size_t>(q)] * cb.ricci + cb.g_inv * dric[q]).trace();

    cb.ricci_traceless = cb.ricci - (cb.tau / n) * cb.g;
    cb.schouten = (cb.ricci - cb.tau / (2.0 * (n - 1)) * cb.g) / (n - 2);

    // Weyl = Riemann - g (*) h, with first coordinate derivatives
    cb.weyl = cb.riemann - kulkarni_nomizu(cb.g, cb.schouten);
    Tensor5 weyl_cd1; // (a,b,c,d,q) = d_q W_{abcd}
    if (with_derivatives) {
        Eigen::MatrixXd dh[8];
        for (int q = 0; q < n; ++q) {
            Eigen::MatrixXd dg(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) dg(i, j) = mj.gj(i, j).grad(q);
            dh[q] = (dric[q] - dtau(q) / (2.0 * (n - 1)) * cb.g -
                     cb.tau / (2.0 * (n - 1)) * dg) /
                    (n - 2);
        }
        weyl_cd1 = Tensor5(n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d)
                        for (int q = 0; q < n; ++q) {
                            double dgac = mj.gj(a, c).grad(q), dgbd = mj.gj(b, d).grad(q);
                            double dgad = mj.gj(a, d).grad(q), dgbc = mj.gj(b, c).grad(q);
                            double dkn = dgac * cb.schouten(b, d) + cb.g(a, c) * dh[q](b, d) +
                                         dgbd * cb.schouten(a, c) + cb.g(b, d) * dh[q](a, c) -
                                         dgad * cb.schouten(b, c) - cb.g(a, d) * dh[q](b, c) -
                                         dgbc * cb.schouten(a, d) - cb.g(b, c) * dh[q](a, d);
                            weyl_cd1(a, b, c, d, q) = riem_d1(a, b, c, d, q) - dkn;
                        }

        // covariant derivative of the Schouten tensor and Cotton-York
        cb.schouten_grad = Tensor3(n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    double v = dh[a](b, c);
                    for (int e = 0; e < n; ++e)
                        v -= cb.gamma(e, a, b) * cb.schouten(e, c) +
                             cb.gamma(e, a, c) * cb.schouten(b, e);
                    cb.schouten_grad(a, b, c) = v;
                }
        cb.cotton = Tensor3(n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    cb.cotton(a, b, c) = cb.schouten_grad(a, b, c) - cb.schouten_grad(b, a, c);

        // covariant derivative of Weyl and its divergence
        cb.weyl_grad = Tensor5(n);
        for (int e = 0; e < n; ++e)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c)
                        for (int d = 0; d < n; ++d) {
                            double v = weyl_cd1(a, b, c, d, e);
                            for (int f = 0; f < n; ++f)
                                v -= cb.gamma(f, e, a) * cb.weyl(f, b, c, d) +
                                     cb.gamma(f, e, b) * cb.weyl(a, f, c, d) +
                                     cb.gamma(f, e, c) * cb.weyl(a, b, f, d) +
                                     cb.weyl(a, b, c, f) * cb.gamma(f, e, d);
                            cb.weyl_grad(e, a, b, c, d) = v;
                        }
        cb.weyl_div = Tensor3(n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    double v = 0.0;
                    for (int e = 0; e < n; ++e)
                        for (int f = 0; f < n; ++f)
                            v += cb.g_inv(e, f) * cb.weyl_grad(e, a, b, f, c);
                    cb.weyl_div(a, b, c) = v;
                }
    }

    return cb;
}

// orthonormal-frame components of a (0,4) tensor
inline Tensor4 to_frame(const Tensor4& t, const Eigen::MatrixXd& frame) {
    const int n = t.n();
    Tensor4 r(n);
    // contract one slot at a time to keep this O(n^5)
    Tensor4 t1(n), t2(n), t3(n);
    for (int i = 0; i < n; ++i)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double v = 0.0;
                    for (int a = 0; a < n; ++a) v += frame(a, i) * t(a, b, c, d);
                    t1(i, b, c, d) = v;
                }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double v = 0.0;
                    for (int b = 0; b < n; ++b) v += frame(b, j) * t1(i, b, c, d);
                    t2(i, j, c, d) = v;
                }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int d = 0; d < n; ++d) {
                    double v = 0.0;
                    for (int c = 0; c < n; ++c) v += frame(c, k) * t2(i, j, c, d);
                    t3(i, j, k, d) = v;
                }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = 0.0;
                    for (int d = 0; d < n; ++d) v += frame(d, l) * t3(i, j, k, d);
                    r(i, j, k, l) = v;
                }
    return r;
}

} // namespace weylscope
