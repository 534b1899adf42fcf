#pragma once

#include <vector>

#include "etaricci/tensor.hpp"

namespace etaricci {

// ----------------------------------------------------------- connection ----

/// Levi-Civita connection coefficients. Gamma(k,i,j) is the component along
/// d_k of nabla_{d_i} d_j; symmetric in (i,j).
class Connection {
public:
    Connection(Chart chart, std::vector<ScalarExpr> gamma)
        : chart_(std::move(chart)), gamma_(std::move(gamma)) {}

    const Chart& chart() const { return chart_; }
    std::size_t dim() const { return chart_.dim(); }

    const ScalarExpr& gamma(std::size_t k, std::size_t i, std::size_t j) const {
        std::size_t n = dim();
        return gamma_[(k * n + i) * n + j];
    }

private:
    Chart chart_;
    std::vector<ScalarExpr> gamma_; // dim^3, [k][i][j]
};

/// Koszul formula: Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij).
inline Connection christoffel(const MetricField& g) {
    std::size_t n = g.dim();
    const ContextPtr& ctx = g.ctx();
    std::vector<ScalarExpr> gamma(n * n * n, ScalarExpr::zero(ctx));
    // precompute metric derivatives
    std::vector<ScalarExpr> dg(n * n * n, ScalarExpr::zero(ctx)); // [m][i][j] = d_m g_ij
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                ScalarExpr d = g.g().at({i, j}).derivative(m);
                dg[(m * n + i) * n + j] = d;
                dg[(m * n + j) * n + i] = d;
            }
    Rat half(1, 2);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                ScalarExpr acc = ScalarExpr::zero(ctx);
                for (std::size_t l = 0; l < n; ++l) {
                    if (g.inverse().at({k, l}).is_zero()) continue;
                    ScalarExpr s = dg[(i * n + j) * n + l] + dg[(j * n + i) * n + l] -
                                   dg[(l * n + i) * n + j];
                    acc += g.inverse().at({k, l}) * s;
                }
                acc = half * acc;
                gamma[(k * n + i) * n + j] = acc;
                gamma[(k * n + j) * n + i] = acc;
            }
    return Connection(g.chart(), std::move(gamma));
}

/// Covariant derivative; the derivative index is appended as the LAST
/// covariant slot: (nabla T)^{a..}_{b.. ; c}.
inline TensorField covariant_derivative(const TensorField& t, const Connection& conn) {
    require_same_chart(t.chart(), conn.chart());
    std::size_t n = t.dim(), p = t.contravariant_rank(), q = t.covariant_rank();
    TensorField r(t.chart(), p, q + 1);
    r.for_each_index([&](const std::vector<std::size_t>& idx) {
        std::size_t c = idx[p + q]; // derivative direction
        std::vector<std::size_t> src(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(p + q));
        ScalarExpr acc = t.at(src).derivative(c);
        std::vector<std::size_t> jdx = src;
        for (std::size_t s = 0; s < p; ++s) {
            std::size_t a = src[s];
            for (std::size_t m = 0; m < n; ++m) {
                if (conn.gamma(a, c, m).is_zero()) continue;
                jdx[s] = m;
                acc += conn.gamma(a, c, m) * t.at(jdx);
            }
            jdx[s] = src[s];
        }
        for (std::size_t s = p; s < p + q; ++s) {
            std::size_t b = src[s];
            for (std::size_t m = 0; m < n; ++m) {
                if (conn.gamma(m, c, b).is_zero()) continue;
                jdx[s] = m;
                acc -= conn.gamma(m, c, b) * t.at(jdx);
            }
            jdx[s] = src[s];
        }
        r.at(idx) = acc;
    });
    return r;
}

/// nabla_X Y for vector fields.
inline TensorField covariant_derivative_along(const TensorField& y, const TensorField& x,
                                              const Connection& conn) {
    TensorField dy = covariant_derivative(y, conn); // (1,1): dy^k_{;c}
    std::size_t n = y.dim();
    TensorField r(y.chart(), 1, 0);
    for (std::size_t k = 0; k < n; ++k) {
        ScalarExpr acc = ScalarExpr::zero(y.chart().ctx);
        for (std::size_t c = 0; c < n; ++c) acc += x.at({c}) * dy.at({k, c});
        r.at({k}) = acc;
    }
    return r;
}

/// Hess f (X,Y) = (nabla df)(Y;X); symmetric (0,2).
inline TensorField hessian(const ScalarExpr& f, const Connection& conn) {
    return covariant_derivative(gradient_covector(f, conn.chart()), conn);
}

// ------------------------------------------------------------- curvature ---

/// Riemann, Ricci, the Ricci operator, and the scalar curvature of one
/// connection. Sign convention: R(X,Y)Z = nabla_X nabla_Y Z
/// - nabla_Y nabla_X Z - nabla_[X,Y] Z, and riemann.at({l, i, j, k}) is the
/// component of R(d_i, d_j) d_k along d_l. Ric(Y,Z) = trace(X -> R(X,Y)Z),
/// Ric(X,Y) = g(QX, Y), r = trace Q.
struct CurvatureBundle {
    TensorField riemann;       // (1,3)
    TensorField ricci;         // (0,2)
    TensorField ricci_operator; // (1,1)
    ScalarExpr scalar;

    /// R(X,Y)Z as a vector field.
    TensorField apply(const TensorField& x, const TensorField& y, const TensorField& z) const {
        std::size_t n = riemann.dim();
        TensorField r(riemann.chart(), 1, 0);
        for (std::size_t l = 0; l < n; ++l) {
            ScalarExpr acc = ScalarExpr::zero(riemann.chart().ctx);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k) {
                        if (riemann.at({l, i, j, k}).is_zero()) continue;
                        acc += riemann.at({l, i, j, k}) * x.at({i}) * y.at({j}) * z.at({k});
                    }
            r.at({l}) = acc;
        }
        return r;
    }
};

/// R^l_{ijk} = d_i Gamma^l_jk - d_j Gamma^l_ik
///           + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik.
inline CurvatureBundle riemann(const Connection& conn, const MetricField& g) {
    std::size_t n = conn.dim();
    const ContextPtr& ctx = conn.chart().ctx;
    TensorField riem(conn.chart(), 1, 3);
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    ScalarExpr acc =
                        conn.gamma(l, j, k).derivative(i) - conn.gamma(l, i, k).derivative(j);
                    for (std::size_t m = 0; m < n; ++m)
                        acc += conn.gamma(l, i, m) * conn.gamma(m, j, k) -
                               conn.gamma(l, j, m) * conn.gamma(m, i, k);
                    riem.at({l, i, j, k}) = acc;
                    riem.at({l, j, i, k}) = -acc;
                }
    TensorField ric = contract(riem, 0, 0); // Ric_jk = R^a_{a j k}
    TensorField q = raise_index(ric, 0, g); // Q^i_j = g^{ik} Ric_kj
    ScalarExpr r = ScalarExpr::zero(ctx);
    for (std::size_t i = 0; i < n; ++i) r += q.at({i, i});
    return CurvatureBundle{std::move(riem), std::move(ric), std::move(q), std::move(r)};
}

/// K(X,Y) = g(R(X,Y)Y, X) / (g(X,X) g(Y,Y) - g(X,Y)^2).
inline ScalarExpr sectional_curvature(const TensorField& x, const TensorField& y,
                                      const CurvatureBundle& bundle, const MetricField& g) {
    ScalarExpr num = g.inner(bundle.apply(x, y, y), x);
    ScalarExpr den = g.inner(x, x) * g.inner(y, y) - g.inner(x, y).pow(2);
    if (den.is_zero()) throw DomainError("degenerate plane for sectional curvature");
    return num / den;
}

/// The (1,2) tensor measuring how V fails to be affine:
/// (L_V nabla)^k_ij = V^m d_m Gamma^k_ij - Gamma^m_ij d_m V^k
///                  + Gamma^k_mj d_i V^m + Gamma^k_im d_j V^m + d_i d_j V^k.
/// Symmetric in (i,j) for a torsion-free connection.
inline TensorField lie_derivative_connection(const TensorField& v, const Connection& conn) {
    require_same_chart(v.chart(), conn.chart());
    std::size_t n = conn.dim();
    TensorField r(conn.chart(), 1, 2);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                ScalarExpr acc = v.at({k}).derivative(i).derivative(j);
                for (std::size_t m = 0; m < n; ++m) {
                    acc += v.at({m}) * conn.gamma(k, i, j).derivative(m);
                    acc -= conn.gamma(m, i, j) * v.at({k}).derivative(m);
                    acc += conn.gamma(k, m, j) * v.at({m}).derivative(i);
                    acc += conn.gamma(k, i, m) * v.at({m}).derivative(j);
                }
                r.at({k, i, j}) = acc;
                r.at({k, j, i}) = acc;
            }
    return r;
}

/// Tensor Lie derivative of the curvature.
inline TensorField lie_derivative_curvature(const TensorField& v, const CurvatureBundle& bundle) {
    return lie_derivative(bundle.riemann, v);
}

/// Commutation cross-check: (L_V R)(X,Y)Z = (nabla_X L_V nabla)(Y,Z)
///                                        - (nabla_Y L_V nabla)(X,Z).
/// Returns the residual (zero when the two routes agree).
inline TensorField lie_curvature_commutation_residual(const TensorField& v,
                                                      const CurvatureBundle& bundle,
                                                      const Connection& conn) {
    TensorField lvr = lie_derivative_curvature(v, bundle);
    TensorField lvc = lie_derivative_connection(v, conn);
    TensorField dlvc = covariant_derivative(lvc, conn); // (1,3): P^l_{jk;c}
    TensorField res(conn.chart(), 1, 3);
    res.for_each_index([&](const std::vector<std::size_t>& idx) {
        std::size_t l = idx[0], i = idx[1], j = idx[2], k = idx[3];
        res.at(idx) = lvr.at(idx) - dlvc.at({l, j, k, i}) + dlvc.at({l, i, k, j});
    });
    return res;
}

} // namespace etaricci
