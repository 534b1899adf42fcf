#pragma once

#include <algorithm>
#include <cassert>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "etaricci/bigfloat.hpp"
#include "etaricci/errors.hpp"
#include "etaricci/polynomial.hpp"

namespace etaricci {

// ------------------------------------------------------------- context -----

/// Chart variables plus the declared exponential generators exp(a . x).
/// Immutable after construction; expressions hold a shared pointer to it.
class ExprContext {
public:
    ExprContext(std::vector<std::string> coordinates,
                std::vector<detail::Form> exp_generators = {})
        : coords_(std::move(coordinates)), gens_(std::move(exp_generators)) {
        if (coords_.empty()) throw DomainError("context needs at least one coordinate");
        for (std::size_t i = 0; i < coords_.size(); ++i) {
            if (coords_[i].empty()) throw DomainError("empty coordinate name");
            for (std::size_t j = i + 1; j < coords_.size(); ++j)
                if (coords_[i] == coords_[j])
                    throw DomainError("duplicate coordinate name: " + coords_[i]);
        }
        for (auto& g : gens_) {
            g.resize(coords_.size(), Rat(0));
            if (detail::form_is_zero(g))
                throw DomainError("zero linear form declared as exponential generator");
        }
        // generators must be pairwise non-proportional once scaled to have
        // leading coefficient one
        for (std::size_t i = 0; i < gens_.size(); ++i)
            for (std::size_t j = i + 1; j < gens_.size(); ++j)
                if (detail::form_cmp(scaled(gens_[i]), scaled(gens_[j])) == 0)
                    throw DomainError("duplicate exponential generator (after scaling)");
    }

    std::size_t dim() const { return coords_.size(); }
    const std::vector<std::string>& coordinates() const { return coords_; }
    const std::vector<detail::Form>& exp_generators() const { return gens_; }

    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < coords_.size(); ++i)
            if (coords_[i] == name) return static_cast<int>(i);
        return -1;
    }

    bool operator==(const ExprContext& o) const {
        if (coords_ != o.coords_ || gens_.size() != o.gens_.size()) return false;
        for (std::size_t i = 0; i < gens_.size(); ++i)
            if (detail::form_cmp(gens_[i], o.gens_[i]) != 0) return false;
        return true;
    }

private:
    static detail::Form scaled(const detail::Form& f) {
        for (const Rat& c : f)
            if (c != 0) return detail::form_scale(f, Rat(1) / c);
        return f;
    }

    std::vector<std::string> coords_;
    std::vector<detail::Form> gens_;
};

using ContextPtr = std::shared_ptr<const ExprContext>;

inline ContextPtr make_context(std::vector<std::string> coords,
                               std::vector<detail::Form> gens = {}) {
    return std::make_shared<const ExprContext>(std::move(coords), std::move(gens));
}

inline bool same_context(const ContextPtr& a, const ContextPtr& b) {
    return a == b || (a && b && *a == *b);
}

// ----------------------------------------------------------- scalar expr ---

/// Exact scalar in the rational-exponential class: a fraction of polynomials
/// whose monomials combine coordinate powers with exp(rational linear form).
/// Always held in canonical form, so two equal values are bit-identical and
/// is_zero reduces to an empty numerator.
class ScalarExpr {
public:
    ScalarExpr() = default; // zero over no context; usable only as placeholder

    static ScalarExpr zero(ContextPtr ctx) {
        return ScalarExpr(std::move(ctx), detail::Poly::zero(), detail::Poly::constant(Rat(1)));
    }
    static ScalarExpr constant(ContextPtr ctx, const Rat& c) {
        return ScalarExpr(std::move(ctx), detail::Poly::constant(c),
                          detail::Poly::constant(Rat(1)));
    }
    static ScalarExpr one(ContextPtr ctx) { return constant(std::move(ctx), Rat(1)); }

    static ScalarExpr coordinate(ContextPtr ctx, std::size_t i) {
        if (i >= ctx->dim()) throw DomainError("coordinate index out of range");
        detail::Monomial m;
        m.deg.assign(ctx->dim(), 0);
        m.deg[i] = 1;
        return ScalarExpr(std::move(ctx), detail::Poly::monomial(m, Rat(1)),
                          detail::Poly::constant(Rat(1)));
    }

    static ScalarExpr coordinate(ContextPtr ctx, const std::string& name) {
        int i = ctx->index_of(name);
        if (i < 0) throw DomainError("unknown coordinate: " + name);
        return coordinate(std::move(ctx), static_cast<std::size_t>(i));
    }

    /// exp(form . x); the form is given per coordinate.
    static ScalarExpr exponential(ContextPtr ctx, detail::Form form) {
        form.resize(ctx->dim(), Rat(0));
        detail::Monomial m;
        m.deg.assign(ctx->dim(), 0);
        m.expo = std::move(form);
        m.normalize();
        return ScalarExpr(std::move(ctx), detail::Poly::monomial(m, Rat(1)),
                          detail::Poly::constant(Rat(1)));
    }

    const ContextPtr& context() const { return ctx_; }
    const detail::Poly& num() const { return num_; }
    const detail::Poly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const {
        auto n = num_.constant_value();
        auto d = den_.constant_value();
        return n && d && *n == 1 && *d == 1;
    }

    /// Rational value when the expression is a constant fraction.
    std::optional<Rat> rational_value() const {
        auto n = num_.constant_value();
        auto d = den_.constant_value();
        if (n && d) return *n / *d;
        return std::nullopt;
    }

    bool is_constant() const { return rational_value().has_value(); }

    bool depends_on(std::size_t coord) const {
        return num_.depends_on(coord) || den_.depends_on(coord);
    }

    friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
        check_pair(a, b);
        return ScalarExpr(a.ctx_, a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
        check_pair(a, b);
        return ScalarExpr(a.ctx_, a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
        check_pair(a, b);
        return ScalarExpr(a.ctx_, a.num_ * b.num_, a.den_ * b.den_);
    }
    friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
        check_pair(a, b);
        if (b.is_zero()) throw DomainError("division by zero expression");
        return ScalarExpr(a.ctx_, a.num_ * b.den_, a.den_ * b.num_);
    }
    ScalarExpr operator-() const { return ScalarExpr(ctx_, -num_, den_); }

    ScalarExpr& operator+=(const ScalarExpr& o) { return *this = *this + o; }
    ScalarExpr& operator-=(const ScalarExpr& o) { return *this = *this - o; }
    ScalarExpr& operator*=(const ScalarExpr& o) { return *this = *this * o; }
    ScalarExpr& operator/=(const ScalarExpr& o) { return *this = *this / o; }

    friend ScalarExpr operator*(const Rat& c, const ScalarExpr& a) {
        return ScalarExpr(a.ctx_, a.num_.scaled(c), a.den_);
    }

    ScalarExpr pow(long e) const {
        if (e == 0) return one(ctx_);
        ScalarExpr base = *this;
        if (e < 0) {
            if (is_zero()) throw DomainError("zero raised to a negative power");
            base = one(ctx_) / base;
            e = -e;
        }
        ScalarExpr acc = one(ctx_);
        while (e > 0) {
            if (e & 1) acc *= base;
            base = (e >>= 1) > 0 ? base * base : base;
        }
        return acc;
    }

    bool operator==(const ScalarExpr& o) const {
        return same_context(ctx_, o.ctx_) && num_.equal(o.num_) && den_.equal(o.den_);
    }
    bool operator!=(const ScalarExpr& o) const { return !(*this == o); }

    ScalarExpr derivative(std::size_t coord) const {
        if (coord >= ctx_->dim()) throw DomainError("unknown coordinate index");
        // (n/d)' = (n'd - nd')/d^2
        return ScalarExpr(ctx_, num_.derivative(coord) * den_ - num_ * den_.derivative(coord),
                          den_ * den_);
    }
    ScalarExpr derivative(const std::string& coord) const {
        int i = ctx_->index_of(coord);
        if (i < 0) throw DomainError("unknown coordinate: " + coord);
        return derivative(static_cast<std::size_t>(i));
    }

    /// Exact evaluation at a rational point. Exponential parts are accepted
    /// only when their linear form vanishes at the point (exp(0) = 1).
    Rat evaluate_exact(const std::vector<Rat>& point) const {
        check_point(point);
        Rat n = eval_poly_exact(num_, point);
        Rat d = eval_poly_exact(den_, point);
        if (d == 0) throw DomainError("pole: denominator vanishes at the point");
        return n / d;
    }

    /// Arbitrary-precision evaluation (round-to-nearest at `prec` bits).
    BigFloat evaluate_approx(const std::vector<Rat>& point, mpfr_prec_t prec) const {
        check_point(point);
        BigFloat n = eval_poly_approx(num_, point, prec);
        BigFloat d = eval_poly_approx(den_, point, prec);
        if (d.is_zero()) throw DomainError("pole: denominator vanishes at the point");
        return n / d;
    }

    /// Named-point overloads; every coordinate must be assigned.
    Rat evaluate_exact(const std::map<std::string, Rat>& point) const {
        return evaluate_exact(positional(point));
    }
    BigFloat evaluate_approx(const std::map<std::string, Rat>& point,
                             mpfr_prec_t prec) const {
        return evaluate_approx(positional(point), prec);
    }

    std::string str() const;

    /// Transplant into a larger context: coordinate i of this expression
    /// becomes coordinate coord_map[i] of `target`.
    ScalarExpr rebase(const ContextPtr& target, const std::vector<int>& coord_map) const {
        std::size_t n = ctx_->dim();
        if (coord_map.size() != n) throw DomainError("rebase: coordinate map size mismatch");
        auto map_poly = [&](const detail::Poly& p) {
            std::map<detail::Monomial, Rat, detail::MonoLess> acc;
            for (const auto& t : p.terms()) {
                detail::Monomial m;
                m.deg.assign(target->dim(), 0);
                detail::Form f(target->dim(), Rat(0));
                for (std::size_t i = 0; i < n; ++i) {
                    std::size_t j = static_cast<std::size_t>(coord_map[i]);
                    if (j >= target->dim()) throw DomainError("rebase: bad coordinate map");
                    if (i < t.first.deg.size()) m.deg[j] = t.first.deg[i];
                    if (i < t.first.expo.size()) f[j] = t.first.expo[i];
                }
                m.expo = std::move(f);
                m.normalize();
                acc[std::move(m)] += t.second;
            }
            return detail::Poly::from_terms(std::move(acc));
        };
        return ScalarExpr(target, map_poly(num_), map_poly(den_));
    }

    /// Substitute coord -> coord + s where exp(s) = base (a positive
    /// rational). Defined as long as the coordinate never occurs as a plain
    /// power and all its exponential coefficients are integers, so that
    /// exp(k*(coord+s)) = base^k * exp(k*coord) stays in the class.
    ScalarExpr shift_exponential(std::size_t coord, const Rat& base) const {
        if (base <= 0) throw DomainError("shift base must be positive");
        auto map_poly = [&](const detail::Poly& p) {
            std::map<detail::Monomial, Rat, detail::MonoLess> acc;
            for (const auto& t : p.terms()) {
                if (coord < t.first.deg.size() && t.first.deg[coord] != 0)
                    throw DomainError("shift: coordinate occurs as a plain power");
                Rat c = t.second;
                if (coord < t.first.expo.size() && t.first.expo[coord] != 0) {
                    const Rat& k = t.first.expo[coord];
                    if (k.get_den() != 1)
                        throw DomainError("shift: non-integer exponential coefficient");
                    c *= rat_pow(base, k.get_num().get_si());
                }
                acc[t.first] += c;
            }
            return detail::Poly::from_terms(std::move(acc));
        };
        return ScalarExpr(ctx_, map_poly(num_), map_poly(den_));
    }

    /// Raw constructor; canonicalizes. Throws on a zero denominator.
    ScalarExpr(ContextPtr ctx, detail::Poly num, detail::Poly den)
        : ctx_(std::move(ctx)), num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw DomainError("zero denominator");
        canonicalize();
    }

private:
    static void check_pair(const ScalarExpr& a, const ScalarExpr& b) {
        if (!same_context(a.ctx_, b.ctx_))
            throw DomainError("expression context mismatch");
    }

    std::vector<Rat> positional(const std::map<std::string, Rat>& point) const {
        std::vector<Rat> p(ctx_->dim());
        for (std::size_t i = 0; i < ctx_->dim(); ++i) {
            auto it = point.find(ctx_->coordinates()[i]);
            if (it == point.end())
                throw DomainError("evaluation point misses coordinate " +
                                  ctx_->coordinates()[i]);
            p[i] = it->second;
        }
        if (point.size() != ctx_->dim())
            throw DomainError("evaluation point names unknown coordinates");
        return p;
    }

    void check_point(const std::vector<Rat>& point) const {
        if (point.size() != ctx_->dim())
            throw DomainError("evaluation point has wrong dimension");
    }

    static Rat eval_poly_exact(const detail::Poly& p, const std::vector<Rat>& point) {
        Rat acc(0);
        for (const auto& t : p.terms()) {
            Rat v = t.second;
            for (std::size_t i = 0; i < t.first.deg.size(); ++i)
                if (t.first.deg[i] != 0) v *= rat_pow(point[i], t.first.deg[i]);
            if (!t.first.expo.empty()) {
                Rat arg = detail::form_eval(t.first.expo, point);
                if (arg != 0)
                    throw DomainError(
                        "exact evaluation of an exponential with nonzero argument");
            }
            acc += v;
        }
        return acc;
    }

    static BigFloat eval_poly_approx(const detail::Poly& p, const std::vector<Rat>& point,
                                     mpfr_prec_t prec) {
        BigFloat acc(prec);
        for (const auto& t : p.terms()) {
            BigFloat v(t.second, prec);
            for (std::size_t i = 0; i < t.first.deg.size(); ++i)
                if (t.first.deg[i] != 0)
                    v *= BigFloat(point[i], prec).pow_si(t.first.deg[i]);
            if (!t.first.expo.empty()) {
                Rat arg = detail::form_eval(t.first.expo, point);
                v *= BigFloat::exp(BigFloat(arg, prec));
            }
            acc += v;
        }
        return acc;
    }

    void canonicalize() {
        using namespace detail;
        if (num_.is_zero()) {
            den_ = Poly::constant(Rat(1));
            return;
        }
        std::size_t nc = ctx_ ? ctx_->dim() : std::max(poly_nvars(num_), poly_nvars(den_));

        if (!den_.is_constant()) {
            if (den_.size() == 1) {
                // monomial denominator: cancel the common coordinate part
                std::vector<int> mn = num_.min_deg(nc);
                const Monomial& dm = den_.leading_mono();
                Monomial common;
                common.deg.assign(nc, 0);
                bool any = false;
                for (std::size_t i = 0; i < nc; ++i) {
                    int dd = i < dm.deg.size() ? dm.deg[i] : 0;
                    common.deg[i] = std::min(mn[i], dd);
                    any = any || common.deg[i] != 0;
                }
                if (any) {
                    num_ = num_.div_mono(common);
                    den_ = den_.div_mono(common);
                }
            } else {
                ExpEmbedding emb;
                auto [en, ed] = embed_pair(num_, den_, nc, emb);
                Poly g = poly_gcd(en, ed);
                if (!g.is_constant()) {
                    en = poly_divexact(en, g);
                    ed = poly_divexact(ed, g);
                }
                num_ = unembed(en, emb);
                den_ = unembed(ed, emb);
            }
        }

        // all exponential content of the denominator's leading term moves
        // into the numerator (exp(l) is a unit)
        const Form& lead = den_.leading_mono().expo;
        if (!form_is_zero(lead)) {
            Form f = lead;
            num_ = num_.shift_expo(f);
            den_ = den_.shift_expo(f);
        }

        // one scalar for the pair: integer coefficients, joint content 1,
        // positive leading denominator coefficient
        Int l(1);
        for (const Poly* p : {&num_, &den_})
            for (const auto& t : p->terms()) l = lcm(l, t.second.get_den());
        Int g(0);
        for (const Poly* p : {&num_, &den_})
            for (const auto& t : p->terms()) {
                Rat scaled = t.second * Rat(l);
                g = gcd(g, scaled.get_num());
            }
        if (g == 0) g = 1;
        Rat s = Rat(l) / Rat(g);
        if (sign(den_.leading_coeff() * s) < 0) s = -s;
        if (s != 1) {
            num_ = num_.scaled(s);
            den_ = den_.scaled(s);
        }
    }

    ContextPtr ctx_;
    detail::Poly num_;
    detail::Poly den_{detail::Poly::constant(Rat(1))};
};

// -------------------------------------------------------------- printing ---

namespace detail {

inline std::string form_str(const Form& f, const ExprContext& ctx) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0) continue;
        Rat c = f[i];
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        if (c != 1) os << rat_str(c) << "*";
        os << ctx.coordinates()[i];
        first = false;
    }
    return os.str();
}

/// One term without its sign; the coefficient must be positive.
/// factor_count reports how many '*'-joined grammar factors were emitted.
inline std::string term_str(const Monomial& m, const Rat& coeff, const ExprContext& ctx,
                            int* factor_count = nullptr) {
    std::vector<std::string> factors;
    if (coeff != 1) factors.push_back(rat_str(coeff));
    for (std::size_t i = 0; i < m.deg.size(); ++i) {
        if (m.deg[i] == 0) continue;
        std::string f = ctx.coordinates()[i];
        if (m.deg[i] != 1) f += "^" + std::to_string(m.deg[i]);
        factors.push_back(std::move(f));
    }
    if (!form_is_zero(m.expo)) factors.push_back("exp(" + form_str(m.expo, ctx) + ")");
    if (factors.empty()) factors.push_back("1");
    if (factor_count) *factor_count = static_cast<int>(factors.size());
    std::string out = factors[0];
    for (std::size_t i = 1; i < factors.size(); ++i) out += "*" + factors[i];
    return out;
}

inline std::string poly_str(const Poly& p, const ExprContext& ctx) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : p.terms()) {
        Rat c = t.second;
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        os << term_str(t.first, c, ctx);
        first = false;
    }
    return os.str();
}

} // namespace detail

inline std::string ScalarExpr::str() const {
    if (!ctx_) return is_zero() ? "0" : "<detached>";
    if (den_.is_constant() && den_.constant_value() == Rat(1))
        return detail::poly_str(num_, *ctx_);
    std::string ns = detail::poly_str(num_, *ctx_);
    bool num_parens = num_.size() > 1;
    // the denominator may stand bare only when it is a single grammar factor
    bool den_single_factor = false;
    std::string ds;
    if (den_.size() == 1) {
        int nfac = 0;
        Rat c = den_.leading_coeff();
        ds = detail::term_str(den_.leading_mono(), c, *ctx_, &nfac);
        den_single_factor = nfac == 1 && c > 0;
    } else {
        ds = detail::poly_str(den_, *ctx_);
    }
    std::string out;
    out += num_parens ? "(" + ns + ")" : ns;
    out += "/";
    out += den_single_factor ? ds : "(" + ds + ")";
    return out;
}

} // namespace etaricci
