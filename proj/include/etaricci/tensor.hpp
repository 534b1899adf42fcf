#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "etaricci/scalar_expr.hpp"

namespace etaricci {

// ---------------------------------------------------------------- chart ----

struct Chart {
    ContextPtr ctx;

    std::size_t dim() const { return ctx->dim(); }
    const std::string& coord_name(std::size_t i) const { return ctx->coordinates()[i]; }

    bool operator==(const Chart& o) const { return same_context(ctx, o.ctx); }
};

inline void require_same_chart(const Chart& a, const Chart& b) {
    if (!(a == b)) throw DomainError("chart mismatch");
}

// ---------------------------------------------------------- tensor field ---

/// Dense tensor of rank (p,q) with ScalarExpr components in the coordinate
/// basis. Index layout: contravariant slots first, then covariant; storage is
/// row-major over the combined index tuple. Immutable in spirit: operations
/// return new values.
class TensorField {
public:
    TensorField(Chart chart, std::size_t p, std::size_t q)
        : chart_(std::move(chart)), p_(p), q_(q) {
        std::size_t n = 1;
        for (std::size_t i = 0; i < p_ + q_; ++i) n *= dim();
        comps_.assign(n, ScalarExpr::zero(chart_.ctx));
    }

    static TensorField scalar(Chart chart, ScalarExpr value) {
        TensorField t(std::move(chart), 0, 0);
        t.comps_[0] = std::move(value);
        return t;
    }

    /// Kronecker delta as a (1,1) tensor.
    static TensorField identity(const Chart& chart) {
        TensorField t(chart, 1, 1);
        for (std::size_t i = 0; i < chart.dim(); ++i)
            t.at({i, i}) = ScalarExpr::one(chart.ctx);
        return t;
    }

    const Chart& chart() const { return chart_; }
    std::size_t contravariant_rank() const { return p_; }
    std::size_t covariant_rank() const { return q_; }
    std::size_t rank() const { return p_ + q_; }
    std::size_t dim() const { return chart_.dim(); }

    ScalarExpr& at(const std::vector<std::size_t>& idx) { return comps_[flat(idx)]; }
    const ScalarExpr& at(const std::vector<std::size_t>& idx) const { return comps_[flat(idx)]; }

    const std::vector<ScalarExpr>& components() const { return comps_; }

    bool is_zero() const {
        for (const ScalarExpr& c : comps_)
            if (!c.is_zero()) return false;
        return true;
    }

    /// First nonzero component in index order, if any.
    std::optional<std::pair<std::vector<std::size_t>, ScalarExpr>> first_nonzero() const {
        for (std::size_t f = 0; f < comps_.size(); ++f)
            if (!comps_[f].is_zero()) return std::make_pair(unflat(f), comps_[f]);
        return std::nullopt;
    }

    friend TensorField operator+(const TensorField& a, const TensorField& b) {
        a.require_shape(b);
        TensorField r = a;
        for (std::size_t i = 0; i < r.comps_.size(); ++i) r.comps_[i] += b.comps_[i];
        return r;
    }
    friend TensorField operator-(const TensorField& a, const TensorField& b) {
        a.require_shape(b);
        TensorField r = a;
        for (std::size_t i = 0; i < r.comps_.size(); ++i) r.comps_[i] -= b.comps_[i];
        return r;
    }
    TensorField operator-() const {
        TensorField r = *this;
        for (ScalarExpr& c : r.comps_) c = -c;
        return r;
    }
    friend TensorField operator*(const ScalarExpr& s, const TensorField& t) {
        TensorField r = t;
        for (ScalarExpr& c : r.comps_) c = s * c;
        return r;
    }

    bool operator==(const TensorField& o) const {
        if (!(chart_ == o.chart_) || p_ != o.p_ || q_ != o.q_) return false;
        return (*this - o).is_zero();
    }

    /// Outer product; upper slots of `a` then of `b`, likewise the lower.
    friend TensorField tensor_product(const TensorField& a, const TensorField& b) {
        require_same_chart(a.chart_, b.chart_);
        TensorField r(a.chart_, a.p_ + b.p_, a.q_ + b.q_);
        std::vector<std::size_t> ia(a.rank()), ib(b.rank()), ir(r.rank());
        r.for_each_index([&](const std::vector<std::size_t>& idx) {
            for (std::size_t s = 0; s < a.p_; ++s) ia[s] = idx[s];
            for (std::size_t s = 0; s < b.p_; ++s) ib[s] = idx[a.p_ + s];
            for (std::size_t s = 0; s < a.q_; ++s) ia[a.p_ + s] = idx[a.p_ + b.p_ + s];
            for (std::size_t s = 0; s < b.q_; ++s)
                ib[b.p_ + s] = idx[a.p_ + b.p_ + a.q_ + s];
            r.at(idx) = a.at(ia) * b.at(ib);
        });
        return r;
    }

    void for_each_index(const std::function<void(const std::vector<std::size_t>&)>& f) const {
        std::vector<std::size_t> idx(rank(), 0);
        if (rank() == 0) {
            f(idx);
            return;
        }
        while (true) {
            f(idx);
            std::size_t s = rank();
            while (s > 0) {
                --s;
                if (++idx[s] < dim()) break;
                idx[s] = 0;
                if (s == 0) return;
            }
        }
    }

private:
    void require_shape(const TensorField& o) const {
        require_same_chart(chart_, o.chart_);
        if (p_ != o.p_ || q_ != o.q_) throw DomainError("tensor rank mismatch");
    }

    std::size_t flat(const std::vector<std::size_t>& idx) const {
        if (idx.size() != rank()) throw DomainError("tensor index arity mismatch");
        std::size_t f = 0;
        for (std::size_t i : idx) {
            if (i >= dim()) throw DomainError("tensor index out of range");
            f = f * dim() + i;
        }
        return f;
    }

    std::vector<std::size_t> unflat(std::size_t f) const {
        std::vector<std::size_t> idx(rank(), 0);
        for (std::size_t s = rank(); s-- > 0;) {
            idx[s] = f % dim();
            f /= dim();
        }
        return idx;
    }

    Chart chart_;
    std::size_t p_, q_;
    std::vector<ScalarExpr> comps_;
};

// ------------------------------------------------------- exact linear algebra

/// Inverse and determinant of a square ScalarExpr matrix by Gaussian
/// elimination over the fraction field. Returns nullopt when singular.
struct MatrixInverse {
    std::vector<std::vector<ScalarExpr>> inv;
    ScalarExpr det;
};

inline std::optional<MatrixInverse> invert_matrix(std::vector<std::vector<ScalarExpr>> m,
                                                  const ContextPtr& ctx) {
    std::size_t n = m.size();
    std::vector<std::vector<ScalarExpr>> inv(n,
                                             std::vector<ScalarExpr>(n, ScalarExpr::zero(ctx)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = ScalarExpr::one(ctx);
    ScalarExpr det = ScalarExpr::one(ctx);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = n;
        for (std::size_t r = col; r < n; ++r)
            if (!m[r][col].is_zero()) {
                piv = r;
                break;
            }
        if (piv == n) return std::nullopt;
        if (piv != col) {
            std::swap(m[piv], m[col]);
            std::swap(inv[piv], inv[col]);
            det = -det;
        }
        ScalarExpr p = m[col][col];
        det *= p;
        for (std::size_t c = 0; c < n; ++c) {
            m[col][c] /= p;
            inv[col][c] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col].is_zero()) continue;
            ScalarExpr f = m[r][col];
            for (std::size_t c = 0; c < n; ++c) {
                m[r][c] -= f * m[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return MatrixInverse{std::move(inv), std::move(det)};
}

// ---------------------------------------------------------------- metric ---

/// Symmetric (0,2) metric with cached exact inverse and determinant.
class MetricField {
public:
    explicit MetricField(TensorField g) : g_(std::move(g)), ginv_(g_.chart(), 2, 0) {
        if (g_.contravariant_rank() != 0 || g_.covariant_rank() != 2)
            throw DomainError("metric must be a (0,2) tensor");
        std::size_t n = g_.dim();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (!(g_.at({i, j}) == g_.at({j, i})))
                    throw DomainError("metric is not symmetric");
        std::vector<std::vector<ScalarExpr>> m(n,
                                               std::vector<ScalarExpr>(n, ScalarExpr::zero(ctx())));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m[i][j] = g_.at({i, j});
        auto r = invert_matrix(std::move(m), ctx());
        if (!r) throw DomainError("singular metric (zero determinant)");
        det_ = r->det;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) ginv_.at({i, j}) = r->inv[i][j];
    }

    const Chart& chart() const { return g_.chart(); }
    const ContextPtr& ctx() const { return g_.chart().ctx; }
    std::size_t dim() const { return g_.dim(); }

    const TensorField& g() const { return g_; }
    const TensorField& inverse() const { return ginv_; }
    const ScalarExpr& det() const { return det_; }

    /// g(X, Y) for two (1,0) fields.
    ScalarExpr inner(const TensorField& x, const TensorField& y) const {
        require_vector(x);
        require_vector(y);
        ScalarExpr acc = ScalarExpr::zero(ctx());
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = 0; j < dim(); ++j)
                acc += g_.at({i, j}) * x.at({i}) * y.at({j});
        return acc;
    }

private:
    void require_vector(const TensorField& x) const {
        require_same_chart(chart(), x.chart());
        if (x.contravariant_rank() != 1 || x.covariant_rank() != 0)
            throw DomainError("expected a (1,0) vector field");
    }

    TensorField g_;
    TensorField ginv_;
    ScalarExpr det_;
};

// ------------------------------------------------------------ operations ---

/// Exact (2,0) inverse of a symmetric (0,2) metric tensor.
inline TensorField metric_inverse(const TensorField& g) { return MetricField(g).inverse(); }

/// [X,Y]^k = X^i d_i Y^k - Y^i d_i X^k.
inline TensorField lie_bracket(const TensorField& x, const TensorField& y) {
    require_same_chart(x.chart(), y.chart());
    if (x.contravariant_rank() != 1 || x.covariant_rank() != 0 ||
        y.contravariant_rank() != 1 || y.covariant_rank() != 0)
        throw DomainError("lie_bracket expects (1,0) vector fields");
    std::size_t n = x.dim();
    TensorField r(x.chart(), 1, 0);
    for (std::size_t k = 0; k < n; ++k) {
        ScalarExpr acc = ScalarExpr::zero(x.chart().ctx);
        for (std::size_t i = 0; i < n; ++i)
            acc += x.at({i}) * y.at({k}).derivative(i) - y.at({i}) * x.at({k}).derivative(i);
        r.at({k}) = acc;
    }
    return r;
}

/// V(f) for a scalar.
inline ScalarExpr directional_derivative(const ScalarExpr& f, const TensorField& v) {
    ScalarExpr acc = ScalarExpr::zero(v.chart().ctx);
    for (std::size_t i = 0; i < v.dim(); ++i) acc += v.at({i}) * f.derivative(i);
    return acc;
}

/// Lie derivative along V of an arbitrary (p,q) tensor:
/// V^m d_m T  -  (d_m V^a) T^{..m..}  (each upper slot)
///            +  (d_b V^m) T_{..m..}  (each lower slot).
inline TensorField lie_derivative(const TensorField& t, const TensorField& v) {
    require_same_chart(t.chart(), v.chart());
    if (v.contravariant_rank() != 1 || v.covariant_rank() != 0)
        throw DomainError("lie_derivative expects a (1,0) direction field");
    std::size_t n = t.dim(), p = t.contravariant_rank(), q = t.covariant_rank();
    TensorField r(t.chart(), p, q);
    r.for_each_index([&](const std::vector<std::size_t>& idx) {
        ScalarExpr acc = ScalarExpr::zero(t.chart().ctx);
        for (std::size_t m = 0; m < n; ++m) acc += v.at({m}) * t.at(idx).derivative(m);
        std::vector<std::size_t> jdx = idx;
        for (std::size_t s = 0; s < p; ++s) {
            std::size_t a = idx[s];
            for (std::size_t m = 0; m < n; ++m) {
                jdx[s] = m;
                acc -= v.at({a}).derivative(m) * t.at(jdx);
            }
            jdx[s] = idx[s];
        }
        for (std::size_t s = p; s < p + q; ++s) {
            std::size_t b = idx[s];
            for (std::size_t m = 0; m < n; ++m) {
                jdx[s] = m;
                acc += v.at({m}).derivative(b) * t.at(jdx);
            }
            jdx[s] = idx[s];
        }
        r.at(idx) = acc;
    });
    return r;
}

/// Contract one upper slot against one lower slot (slot numbers within the
/// respective blocks).
inline TensorField contract(const TensorField& t, std::size_t upper_slot,
                            std::size_t lower_slot) {
    std::size_t p = t.contravariant_rank(), q = t.covariant_rank(), n = t.dim();
    if (upper_slot >= p || lower_slot >= q)
        throw DomainError("contract: slot out of range");
    TensorField r(t.chart(), p - 1, q - 1);
    r.for_each_index([&](const std::vector<std::size_t>& idx) {
        // rebuild the source index with the contracted pair inserted
        std::vector<std::size_t> src(p + q, 0);
        std::size_t w = 0;
        for (std::size_t s = 0; s < p; ++s)
            if (s != upper_slot) src[s] = idx[w++];
        for (std::size_t s = 0; s < q; ++s)
            if (s != lower_slot) src[p + s] = idx[w++];
        ScalarExpr acc = ScalarExpr::zero(t.chart().ctx);
        for (std::size_t m = 0; m < n; ++m) {
            src[upper_slot] = m;
            src[p + lower_slot] = m;
            acc += t.at(src);
        }
        r.at(idx) = acc;
    });
    return r;
}

/// Raise covariant slot `slot`: it becomes the LAST contravariant slot.
inline TensorField raise_index(const TensorField& t, std::size_t slot, const MetricField& g) {
    require_same_chart(t.chart(), g.chart());
    std::size_t p = t.contravariant_rank(), q = t.covariant_rank(), n = t.dim();
    if (slot >= q) throw DomainError("raise_index: slot out of range");
    TensorField r(t.chart(), p + 1, q - 1);
    r.for_each_index([&](const std::vector<std::size_t>& idx) {
        std::size_t a = idx[p]; // the new upper index
        std::vector<std::size_t> src(p + q, 0);
        for (std::size_t s = 0; s < p; ++s) src[s] = idx[s];
        std::size_t w = p + 1;
        for (std::size_t s = 0; s < q; ++s)
            if (s != slot) src[p + s] = idx[w++];
        ScalarExpr acc = ScalarExpr::zero(t.chart().ctx);
        for (std::size_t m = 0; m < n; ++m) {
            src[p + slot] = m;
            acc += g.inverse().at({a, m}) * t.at(src);
        }
        r.at(idx) = acc;
    });
    return r;
}

/// Lower contravariant slot `slot`: it becomes the FIRST covariant slot.
/// Inverse of raise_index in the sense raise(lower(T, p-1... )).
inline TensorField lower_index(const TensorField& t, std::size_t slot, const MetricField& g) {
    require_same_chart(t.chart(), g.chart());
    std::size_t p = t.contravariant_rank(), q = t.covariant_rank(), n = t.dim();
    if (slot >= p) throw DomainError("lower_index: slot out of range");
    TensorField r(t.chart(), p - 1, q + 1);
    r.for_each_index([&](const std::vector<std::size_t>& idx) {
        std::size_t b = idx[p - 1]; // the new first covariant index
        std::vector<std::size_t> src(p + q, 0);
        std::size_t w = 0;
        for (std::size_t s = 0; s < p; ++s)
            if (s != slot) src[s] = idx[w++];
        for (std::size_t s = 0; s < q; ++s) src[p + s] = idx[p + s];
        ScalarExpr acc = ScalarExpr::zero(t.chart().ctx);
        for (std::size_t m = 0; m < n; ++m) {
            src[slot] = m;
            acc += g.g().at({b, m}) * t.at(src);
        }
        r.at(idx) = acc;
    });
    return r;
}

/// Convenience: the covector g(X, .) of a vector field.
inline TensorField musical_lower(const TensorField& x, const MetricField& g) {
    return lower_index(x, 0, g);
}

/// Convenience: the vector dual to a covector (solves g(X, .) = w).
inline TensorField musical_raise(const TensorField& w, const MetricField& g) {
    return raise_index(w, 0, g);
}

/// d of a scalar as a (0,1) field.
inline TensorField gradient_covector(const ScalarExpr& f, const Chart& chart) {
    TensorField r(chart, 0, 1);
    for (std::size_t i = 0; i < chart.dim(); ++i) r.at({i}) = f.derivative(i);
    return r;
}

/// grad f = (df)^sharp.
inline TensorField gradient(const ScalarExpr& f, const MetricField& g) {
    return musical_raise(gradient_covector(f, g.chart()), g);
}

/// Sylvester criterion with exact arithmetic at one rational point. Uses
/// high-precision evaluation when exponentials preclude exact values.
inline bool positive_definite_at(const MetricField& g, const std::vector<Rat>& point) {
    std::size_t n = g.dim();
    bool exact = true;
    for (std::size_t i = 0; i < n && exact; ++i)
        for (std::size_t j = 0; j < n && exact; ++j)
            if (g.g().at({i, j}).num().has_expo() || g.g().at({i, j}).den().has_expo())
                exact = false;
    if (exact) {
        std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m[i][j] = g.g().at({i, j}).evaluate_exact(point);
        // leading principal minors by fraction-free elimination
        for (std::size_t k = 1; k <= n; ++k) {
            std::vector<std::vector<Rat>> sub(k, std::vector<Rat>(k));
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) sub[i][j] = m[i][j];
            Rat det(1);
            for (std::size_t c = 0; c < k; ++c) {
                std::size_t piv = k;
                for (std::size_t r = c; r < k; ++r)
                    if (sub[r][c] != 0) {
                        piv = r;
                        break;
                    }
                if (piv == k) {
                    det = 0;
                    break;
                }
                if (piv != c) {
                    std::swap(sub[piv], sub[c]);
                    det = -det;
                }
                det *= sub[c][c];
                for (std::size_t r = c + 1; r < k; ++r) {
                    Rat f = sub[r][c] / sub[c][c];
                    for (std::size_t cc = c; cc < k; ++cc) sub[r][cc] -= f * sub[c][cc];
                }
            }
            if (det <= 0) return false;
        }
        return true;
    }
    const mpfr_prec_t prec = 256;
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<std::vector<BigFloat>> sub(k, std::vector<BigFloat>(k, BigFloat(prec)));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                sub[i][j] = g.g().at({i, j}).evaluate_approx(point, prec);
        BigFloat det(Rat(1), prec);
        bool zero = false;
        for (std::size_t c = 0; c < k && !zero; ++c) {
            std::size_t piv = k;
            for (std::size_t r = c; r < k; ++r)
                if (!sub[r][c].is_zero()) {
                    piv = r;
                    break;
                }
            if (piv == k) {
                zero = true;
                break;
            }
            if (piv != c) {
                std::swap(sub[piv], sub[c]);
                det = -det;
            }
            det = det * sub[c][c];
            for (std::size_t r = c + 1; r < k; ++r) {
                BigFloat f = sub[r][c] / sub[c][c];
                for (std::size_t cc = c; cc < k; ++cc)
                    sub[r][cc] = sub[r][cc] - f * sub[c][cc];
            }
        }
        if (zero || !(det > BigFloat(Rat(0), prec))) return false;
    }
    return true;
}

/// Exact rank of a (1,1) tensor's component matrix evaluated at a point.
inline std::size_t matrix_rank_at(const TensorField& t, const std::vector<Rat>& point) {
    std::size_t n = t.dim();
    bool exact = true;
    for (std::size_t i = 0; i < n && exact; ++i)
        for (std::size_t j = 0; j < n && exact; ++j)
            if (t.at({i, j}).num().has_expo() || t.at({i, j}).den().has_expo()) exact = false;
    std::size_t rank = 0;
    if (exact) {
        std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m[i][j] = t.at({i, j}).evaluate_exact(point);
        std::size_t row = 0;
        for (std::size_t col = 0; col < n && row < n; ++col) {
            std::size_t piv = n;
            for (std::size_t r = row; r < n; ++r)
                if (m[r][col] != 0) {
                    piv = r;
                    break;
                }
            if (piv == n) continue;
            std::swap(m[piv], m[row]);
            for (std::size_t r = row + 1; r < n; ++r) {
                Rat f = m[r][col] / m[row][col];
                for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[row][c];
            }
            ++row;
            ++rank;
        }
    } else {
        const mpfr_prec_t prec = 256;
        BigFloat tiny(Rat(1), prec);
        for (int i = 0; i < 10; ++i) tiny = tiny / BigFloat(Rat(1000000000), prec);
        std::vector<std::vector<BigFloat>> m(n, std::vector<BigFloat>(n, BigFloat(prec)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m[i][j] = t.at({i, j}).evaluate_approx(point, prec);
        std::size_t row = 0;
        for (std::size_t col = 0; col < n && row < n; ++col) {
            std::size_t piv = n;
            for (std::size_t r = row; r < n; ++r)
                if (m[r][col].abs() > tiny) {
                    piv = r;
                    break;
                }
            if (piv == n) continue;
            std::swap(m[piv], m[row]);
            for (std::size_t r = row + 1; r < n; ++r) {
                BigFloat f = m[r][col] / m[row][col];
                for (std::size_t c = col; c < n; ++c) m[r][c] = m[r][c] - f * m[row][c];
            }
            ++row;
            ++rank;
        }
    }
    return rank;
}

} // namespace etaricci
