#pragma once

#include <optional>
#include <string>
#include <vector>

#include "etaricci/connection.hpp"

// Finite-difference cross-validation of the symbolic connection and
// curvature. Everything here is computed from point evaluations of the
// metric alone (central differences in MPFR arithmetic), so it shares no
// code path with the symbolic derivatives it checks.

namespace etaricci {

struct OracleSettings {
    std::size_t points = 5;
    double tolerance = 1e-6;
    Rat step = Rat(1, 10000);       // central-difference step
    mpfr_prec_t precision = 256;    // working precision in bits
    unsigned long seed = 0x6b79f1a2UL;
};

struct OracleResult {
    std::size_t points_used = 0;
    std::size_t points_skipped = 0;
    double max_dev_gamma = 0.0;
    double max_dev_riemann = 0.0;
    double max_dev_ricci = 0.0;
    bool pass = false;
};

/// Deterministic rational sample points in [1,3]^dim (denominator 16).
inline std::vector<std::vector<Rat>> oracle_sample_points(std::size_t dim, std::size_t count,
                                                          unsigned long seed) {
    std::vector<std::vector<Rat>> pts;
    unsigned long state = seed * 2862933555777941757UL + 3037000493UL;
    for (std::size_t p = 0; p < count; ++p) {
        std::vector<Rat> pt(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            state = state * 6364136223846793005UL + 1442695040888963407UL;
            unsigned long r = (state >> 33) % 33;
            Rat q(16 + static_cast<long>(r), 16);
            q.canonicalize();
            pt[i] = q;
        }
        pts.push_back(std::move(pt));
    }
    return pts;
}

namespace detail {

using BFMatrix = std::vector<std::vector<BigFloat>>;

inline BFMatrix bf_inverse(BFMatrix m, mpfr_prec_t prec) {
    std::size_t n = m.size();
    BFMatrix inv(n, std::vector<BigFloat>(n, BigFloat(prec)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = BigFloat(Rat(1), prec);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (m[r][col].abs() > m[piv][col].abs()) piv = r;
        if (m[piv][col].is_zero()) throw DomainError("numerically singular metric");
        if (piv != col) {
            std::swap(m[piv], m[col]);
            std::swap(inv[piv], inv[col]);
        }
        BigFloat p = m[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            m[col][c] /= p;
            inv[col][c] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            BigFloat f = m[r][col];
            if (f.is_zero()) continue;
            for (std::size_t c = 0; c < n; ++c) {
                m[r][c] -= f * m[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

} // namespace detail

/// Connection and curvature at one point from metric evaluations only.
struct NumericGeometry {
    std::size_t dim;
    std::vector<double> gamma;   // [k][i][j]
    std::vector<double> riemann; // [l][i][j][k]
    std::vector<double> ricci;   // [j][k]
};

inline std::optional<NumericGeometry> numeric_geometry_at(const MetricField& g,
                                                          const std::vector<Rat>& point,
                                                          const Rat& step,
                                                          mpfr_prec_t prec) {
    std::size_t n = g.dim();
    auto eval_metric = [&](const std::vector<Rat>& p) {
        detail::BFMatrix m(n, std::vector<BigFloat>(n, BigFloat(prec)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m[i][j] = g.g().at({i, j}).evaluate_approx(p, prec);
        return m;
    };

    try {
        detail::BFMatrix g0 = eval_metric(point);
        detail::BFMatrix ginv = detail::bf_inverse(g0, prec);

        BigFloat h(step, prec);
        BigFloat two_h = BigFloat(Rat(2), prec) * h;
        BigFloat h2 = h * h;

        auto shifted = [&](std::size_t m1, int s1, std::size_t m2, int s2) {
            std::vector<Rat> p = point;
            p[m1] += Rat(s1) * step;
            if (s2 != 0) p[m2] += Rat(s2) * step;
            return eval_metric(p);
        };

        // first derivatives d1[m][i][j]
        std::vector<detail::BFMatrix> d1(n);
        std::vector<detail::BFMatrix> plus(n), minus(n);
        for (std::size_t m = 0; m < n; ++m) {
            plus[m] = shifted(m, +1, 0, 0);
            minus[m] = shifted(m, -1, 0, 0);
            d1[m].assign(n, std::vector<BigFloat>(n, BigFloat(prec)));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    d1[m][i][j] = (plus[m][i][j] - minus[m][i][j]) / two_h;
        }
        // second derivatives d2[m][l][i][j]
        std::vector<std::vector<detail::BFMatrix>> d2(
            n, std::vector<detail::BFMatrix>(n));
        for (std::size_t m = 0; m < n; ++m)
            for (std::size_t l = m; l < n; ++l) {
                detail::BFMatrix out(n, std::vector<BigFloat>(n, BigFloat(prec)));
                if (m == l) {
                    for (std::size_t i = 0; i < n; ++i)
                        for (std::size_t j = 0; j < n; ++j)
                            out[i][j] = (plus[m][i][j] -
                                         BigFloat(Rat(2), prec) * g0[i][j] +
                                         minus[m][i][j]) /
                                        h2;
                } else {
                    detail::BFMatrix pp = shifted(m, +1, l, +1);
                    detail::BFMatrix pm = shifted(m, +1, l, -1);
                    detail::BFMatrix mp = shifted(m, -1, l, +1);
                    detail::BFMatrix mm = shifted(m, -1, l, -1);
                    BigFloat four_h2 = BigFloat(Rat(4), prec) * h2;
                    for (std::size_t i = 0; i < n; ++i)
                        for (std::size_t j = 0; j < n; ++j)
                            out[i][j] = (pp[i][j] - pm[i][j] - mp[i][j] + mm[i][j]) / four_h2;
                }
                d2[m][l] = out;
                d2[l][m] = std::move(out);
            }

        auto koszul = [&](const detail::BFMatrix& gi,
                          const std::vector<detail::BFMatrix>& dm, std::size_t k,
                          std::size_t i, std::size_t j) {
            BigFloat acc(prec);
            for (std::size_t l = 0; l < n; ++l)
                acc += gi[k][l] * (dm[i][j][l] + dm[j][i][l] - dm[l][i][j]);
            return BigFloat(Rat(1, 2), prec) * acc;
        };

        NumericGeometry out;
        out.dim = n;
        std::vector<BigFloat> gam(n * n * n, BigFloat(prec));
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    gam[(k * n + i) * n + j] = koszul(ginv, d1, k, i, j);

        // d(ginv)[m] = -ginv d1[m] ginv
        std::vector<detail::BFMatrix> dginv(n);
        for (std::size_t m = 0; m < n; ++m) {
            dginv[m].assign(n, std::vector<BigFloat>(n, BigFloat(prec)));
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) {
                    BigFloat acc(prec);
                    for (std::size_t c = 0; c < n; ++c)
                        for (std::size_t d = 0; d < n; ++d)
                            acc += ginv[a][c] * d1[m][c][d] * ginv[d][b];
                    dginv[m][a][b] = -acc;
                }
        }
        // dGamma[m][k][i][j]
        std::vector<BigFloat> dgam(n * n * n * n, BigFloat(prec));
        BigFloat halfbf(Rat(1, 2), prec);
        for (std::size_t m = 0; m < n; ++m)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) {
                        BigFloat acc(prec);
                        for (std::size_t l = 0; l < n; ++l) {
                            acc += dginv[m][k][l] *
                                   (d1[i][j][l] + d1[j][i][l] - d1[l][i][j]);
                            acc += ginv[k][l] *
                                   (d2[m][i][j][l] + d2[m][j][i][l] - d2[m][l][i][j]);
                        }
                        dgam[((m * n + k) * n + i) * n + j] = halfbf * acc;
                    }

        auto G = [&](std::size_t k, std::size_t i, std::size_t j) -> const BigFloat& {
            return gam[(k * n + i) * n + j];
        };
        auto dG = [&](std::size_t m, std::size_t k, std::size_t i,
                      std::size_t j) -> const BigFloat& {
            return dgam[((m * n + k) * n + i) * n + j];
        };

        out.gamma.resize(n * n * n);
        for (std::size_t t = 0; t < gam.size(); ++t) out.gamma[t] = gam[t].to_double();
        out.riemann.assign(n * n * n * n, 0.0);
        out.ricci.assign(n * n, 0.0);
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k) {
                        BigFloat acc = dG(i, l, j, k) - dG(j, l, i, k);
                        for (std::size_t a = 0; a < n; ++a)
                            acc += G(l, i, a) * G(a, j, k) - G(l, j, a) * G(a, i, k);
                        out.riemann[((l * n + i) * n + j) * n + k] = acc.to_double();
                    }
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double acc = 0.0;
                for (std::size_t a = 0; a < n; ++a)
                    acc += out.riemann[((a * n + a) * n + j) * n + k];
                out.ricci[j * n + k] = acc;
            }
        return out;
    } catch (const DomainError&) {
        return std::nullopt; // pole or numeric singularity at this point
    }
}

/// Max deviation between the symbolic and finite-difference geometry over
/// seeded sample points, measured per component as |sym - num| / max(1, |sym|).
inline OracleResult run_oracle(const MetricField& g, const Connection& conn,
                               const CurvatureBundle& bundle, const OracleSettings& cfg,
                               const std::vector<std::vector<Rat>>& user_points = {}) {
    std::size_t n = g.dim();
    auto pts = user_points.empty() ? oracle_sample_points(n, cfg.points, cfg.seed)
                                   : user_points;
    OracleResult res;
    auto dev = [](double symv, double numv) {
        double denom = std::max(1.0, std::abs(symv));
        return std::abs(symv - numv) / denom;
    };
    for (const auto& pt : pts) {
        auto num = numeric_geometry_at(g, pt, cfg.step, cfg.precision);
        if (!num) {
            ++res.points_skipped;
            continue;
        }
        bool sym_ok = true;
        for (std::size_t k = 0; k < n && sym_ok; ++k)
            for (std::size_t i = 0; i < n && sym_ok; ++i)
                for (std::size_t j = 0; j < n && sym_ok; ++j) {
                    try {
                        double s = conn.gamma(k, i, j)
                                       .evaluate_approx(pt, cfg.precision)
                                       .to_double();
                        res.max_dev_gamma =
                            std::max(res.max_dev_gamma, dev(s, num->gamma[(k * n + i) * n + j]));
                    } catch (const DomainError&) {
                        sym_ok = false;
                    }
                }
        if (!sym_ok) {
            ++res.points_skipped;
            continue;
        }
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k) {
                        double s = bundle.riemann.at({l, i, j, k})
                                       .evaluate_approx(pt, cfg.precision)
                                       .to_double();
                        res.max_dev_riemann = std::max(
                            res.max_dev_riemann,
                            dev(s, num->riemann[((l * n + i) * n + j) * n + k]));
                    }
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double s =
                    bundle.ricci.at({j, k}).evaluate_approx(pt, cfg.precision).to_double();
                res.max_dev_ricci = std::max(res.max_dev_ricci, dev(s, num->ricci[j * n + k]));
            }
        ++res.points_used;
    }
    double m = std::max({res.max_dev_gamma, res.max_dev_riemann, res.max_dev_ricci});
    res.pass = res.points_used > 0 && m <= cfg.tolerance;
    return res;
}

} // namespace etaricci
