#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "etaricci/numeric.hpp"

// Exact multivariate polynomial layer underneath ScalarExpr.
//
// A monomial is  x^deg * exp(expo . x)  where `deg` holds nonnegative integer
// exponents per coordinate and `expo` is a rational linear form in the
// coordinates (empty vector == zero form). Products of exponentials combine
// by adding their forms, so exp(a)*exp(b) and exp(a+b) share one key.
//
// GCD and exact division run on an "embedded" image of the polynomials in
// which every exponential form is rewritten as an integer vector over a
// lattice basis of the forms present; embedded monomials have empty `expo`
// and an extended `deg`. exp(l) is a unit, which is why a joint shift of
// numerator and denominator never changes a fraction's value.

namespace etaricci::detail {

// ---------------------------------------------------------------- forms ----

using Form = std::vector<Rat>; // coefficient per coordinate; empty == 0

inline bool form_is_zero(const Form& f) {
    for (const Rat& c : f)
        if (c != 0) return false;
    return true;
}

inline int form_cmp(const Form& a, const Form& b) {
    std::size_t n = std::max(a.size(), b.size());
    static const Rat kZero(0);
    for (std::size_t i = 0; i < n; ++i) {
        const Rat& x = i < a.size() ? a[i] : kZero;
        const Rat& y = i < b.size() ? b[i] : kZero;
        int c = cmp(x, y);
        if (c != 0) return c < 0 ? -1 : 1;
    }
    return 0;
}

inline Form form_add(const Form& a, const Form& b) {
    Form r(std::max(a.size(), b.size()), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    if (form_is_zero(r)) r.clear();
    return r;
}

inline Form form_neg(const Form& a) {
    Form r(a);
    for (Rat& c : r) c = -c;
    return r;
}

inline Form form_scale(const Form& a, const Rat& s) {
    if (s == 0) return {};
    Form r(a);
    for (Rat& c : r) c *= s;
    return r;
}

inline Rat form_eval(const Form& f, const std::vector<Rat>& point) {
    Rat acc(0);
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * point[i];
    return acc;
}

// ------------------------------------------------------------- monomials ---

struct Monomial {
    std::vector<int> deg; // per-coordinate exponents, >= 0
    Form expo;            // exponential part

    void normalize() {
        if (form_is_zero(expo)) expo.clear();
    }
};

/// Total order: lexicographic on coordinate exponents (declaration order),
/// then on the exponential form's coefficients. Compatible with monomial
/// multiplication, which makes it usable for polynomial division.
inline int mono_cmp(const Monomial& a, const Monomial& b) {
    std::size_t n = std::max(a.deg.size(), b.deg.size());
    for (std::size_t i = 0; i < n; ++i) {
        int x = i < a.deg.size() ? a.deg[i] : 0;
        int y = i < b.deg.size() ? b.deg[i] : 0;
        if (x != y) return x < y ? -1 : 1;
    }
    return form_cmp(a.expo, b.expo);
}

inline bool mono_equal(const Monomial& a, const Monomial& b) { return mono_cmp(a, b) == 0; }

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.deg.resize(std::max(a.deg.size(), b.deg.size()), 0);
    for (std::size_t i = 0; i < a.deg.size(); ++i) r.deg[i] += a.deg[i];
    for (std::size_t i = 0; i < b.deg.size(); ++i) r.deg[i] += b.deg[i];
    r.expo = form_add(a.expo, b.expo);
    return r;
}

/// b / a in the coordinate part; exponential forms subtract freely (units).
/// Requires a.deg <= b.deg componentwise.
inline Monomial mono_div(const Monomial& b, const Monomial& a) {
    Monomial r = b;
    if (r.deg.size() < a.deg.size()) r.deg.resize(a.deg.size(), 0);
    for (std::size_t i = 0; i < a.deg.size(); ++i) r.deg[i] -= a.deg[i];
    r.expo = form_add(b.expo, form_neg(a.expo));
    r.normalize();
    return r;
}

inline bool mono_deg_divides(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < a.deg.size(); ++i) {
        int bd = i < b.deg.size() ? b.deg[i] : 0;
        if (a.deg[i] > bd) return false;
    }
    return true;
}

struct MonoLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return mono_cmp(a, b) < 0; }
};

// ------------------------------------------------------------ polynomial ---

class Poly {
public:
    using Term = std::pair<Monomial, Rat>;

    Poly() = default;

    static Poly zero() { return Poly(); }

    static Poly constant(const Rat& c) {
        Poly p;
        if (c != 0) p.t_.push_back({Monomial{}, c});
        return p;
    }

    static Poly monomial(Monomial m, const Rat& c) {
        Poly p;
        m.normalize();
        if (c != 0) p.t_.push_back({std::move(m), c});
        return p;
    }

    static Poly from_terms(std::map<Monomial, Rat, MonoLess>&& acc) {
        Poly p;
        p.t_.reserve(acc.size());
        for (auto it = acc.rbegin(); it != acc.rend(); ++it)
            if (it->second != 0) p.t_.push_back({it->first, it->second});
        return p;
    }

    bool is_zero() const { return t_.empty(); }

    bool is_constant() const {
        if (t_.empty()) return true;
        if (t_.size() != 1) return false;
        const Monomial& m = t_[0].first;
        for (int d : m.deg)
            if (d != 0) return false;
        return m.expo.empty();
    }

    std::optional<Rat> constant_value() const {
        if (is_zero()) return Rat(0);
        if (!is_constant()) return std::nullopt;
        return t_[0].second;
    }

    const std::vector<Term>& terms() const { return t_; }
    std::size_t size() const { return t_.size(); }
    const Monomial& leading_mono() const { return t_.front().first; }
    const Rat& leading_coeff() const { return t_.front().second; }

    friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
    friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }

    Poly operator-() const {
        Poly r(*this);
        for (Term& t : r.t_) t.second = -t.second;
        return r;
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::map<Monomial, Rat, MonoLess> acc;
        for (const Term& ta : a.t_)
            for (const Term& tb : b.t_) {
                Monomial m = mono_mul(ta.first, tb.first);
                m.normalize();
                acc[std::move(m)] += ta.second * tb.second;
            }
        return from_terms(std::move(acc));
    }

    Poly scaled(const Rat& s) const {
        if (s == 0) return Poly();
        Poly r(*this);
        for (Term& t : r.t_) t.second *= s;
        return r;
    }

    Poly mul_mono(const Monomial& m, const Rat& c) const {
        if (c == 0) return Poly();
        Poly r;
        r.t_.reserve(t_.size());
        for (const Term& t : t_) {
            Monomial mm = mono_mul(t.first, m);
            mm.normalize();
            r.t_.push_back({std::move(mm), t.second * c});
        }
        return r; // order preserved: multiplication is order-compatible
    }

    /// Divide every term by the coordinate part of m (must divide exactly)
    /// and subtract its exponential form.
    Poly div_mono(const Monomial& m) const {
        Poly r;
        r.t_.reserve(t_.size());
        for (const Term& t : t_) r.t_.push_back({mono_div(t.first, m), t.second});
        return r;
    }

    /// Uniform shift of every exponential part by -f (multiplication by the
    /// unit exp(-f)); preserves term order.
    Poly shift_expo(const Form& f) const {
        if (form_is_zero(f)) return *this;
        Poly r;
        r.t_.reserve(t_.size());
        Form nf = form_neg(f);
        for (const Term& t : t_) {
            Monomial m = t.first;
            m.expo = form_add(m.expo, nf);
            m.normalize();
            r.t_.push_back({std::move(m), t.second});
        }
        return r;
    }

    /// d/dx_i: power rule on the coordinate part plus the generator rule on
    /// the exponential part.
    Poly derivative(std::size_t i) const {
        std::map<Monomial, Rat, MonoLess> acc;
        for (const Term& t : t_) {
            const Monomial& m = t.first;
            int d = i < m.deg.size() ? m.deg[i] : 0;
            if (d > 0) {
                Monomial mm = m;
                mm.deg[i] -= 1;
                mm.normalize();
                acc[std::move(mm)] += t.second * d;
            }
            if (i < m.expo.size() && m.expo[i] != 0) acc[m] += t.second * m.expo[i];
        }
        return from_terms(std::move(acc));
    }

    bool has_expo() const {
        for (const Term& t : t_)
            if (!t.first.expo.empty()) return true;
        return false;
    }

    /// True if any term involves coordinate i (as a power or inside exp).
    bool depends_on(std::size_t i) const {
        for (const Term& t : t_) {
            if (i < t.first.deg.size() && t.first.deg[i] != 0) return true;
            if (i < t.first.expo.size() && t.first.expo[i] != 0) return true;
        }
        return false;
    }

    /// Componentwise minimum of coordinate exponents over all terms.
    std::vector<int> min_deg(std::size_t ncoords) const {
        std::vector<int> m(ncoords, 0);
        if (t_.empty()) return m;
        for (std::size_t i = 0; i < ncoords; ++i) {
            int mn = i < t_[0].first.deg.size() ? t_[0].first.deg[i] : 0;
            for (const Term& t : t_)
                mn = std::min(mn, i < t.first.deg.size() ? t.first.deg[i] : 0);
            m[i] = mn;
        }
        return m;
    }

    bool equal(const Poly& o) const {
        if (t_.size() != o.t_.size()) return false;
        for (std::size_t i = 0; i < t_.size(); ++i)
            if (t_[i].second != o.t_[i].second || !mono_equal(t_[i].first, o.t_[i].first))
                return false;
        return true;
    }

private:
    static Poly merge(const Poly& a, const Poly& b, bool sub) {
        Poly r;
        r.t_.reserve(a.t_.size() + b.t_.size());
        std::size_t i = 0, j = 0;
        while (i < a.t_.size() && j < b.t_.size()) {
            int c = mono_cmp(a.t_[i].first, b.t_[j].first);
            if (c > 0) {
                r.t_.push_back(a.t_[i++]);
            } else if (c < 0) {
                Term t = b.t_[j++];
                if (sub) t.second = -t.second;
                r.t_.push_back(std::move(t));
            } else {
                Rat s = sub ? Rat(a.t_[i].second - b.t_[j].second)
                            : Rat(a.t_[i].second + b.t_[j].second);
                if (s != 0) r.t_.push_back({a.t_[i].first, std::move(s)});
                ++i, ++j;
            }
        }
        for (; i < a.t_.size(); ++i) r.t_.push_back(a.t_[i]);
        for (; j < b.t_.size(); ++j) {
            Term t = b.t_[j];
            if (sub) t.second = -t.second;
            r.t_.push_back(std::move(t));
        }
        return r;
    }

    std::vector<Term> t_; // strictly descending by mono_cmp, no zero coeffs
};

// -------------------------------------------------- scalar normalization ---

/// Positive rational s such that s*P has coprime integer coefficients.
inline Rat primitive_scale(const Poly& p) {
    if (p.is_zero()) return Rat(1);
    Int l(1), g(0);
    for (const Poly::Term& t : p.terms())
        l = lcm(l, t.second.get_den());
    for (const Poly::Term& t : p.terms()) {
        Rat scaled = t.second * Rat(l);
        g = gcd(g, scaled.get_num());
    }
    if (g == 0) g = 1;
    return Rat(l) / Rat(g);
}

inline Poly make_primitive(const Poly& p) { return p.scaled(primitive_scale(p)); }

inline Poly make_primitive_pos(const Poly& p) {
    Poly q = make_primitive(p);
    if (!q.is_zero() && sign(q.leading_coeff()) < 0) q = -q;
    return q;
}

// ------------------------------------------------------- lattice algebra ---

/// Row-echelon basis of the subgroup of Z^m generated by `rows`
/// (integer Gaussian elimination with gcd pivoting). Pivot columns strictly
/// increase, and every non-pivot row is reduced to zero.
struct IntLattice {
    std::vector<std::vector<Int>> basis;
    std::vector<std::size_t> pivot_col;

    static IntLattice build(std::vector<std::vector<Int>> rows, std::size_t m) {
        IntLattice lat;
        std::size_t col = 0;
        while (col < m && !rows.empty()) {
            // euclidean reduction of column `col` across all active rows
            while (true) {
                std::size_t best = rows.size();
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    if (rows[r][col] == 0) continue;
                    if (best == rows.size() ||
                        cmp(abs(rows[r][col]), abs(rows[best][col])) < 0)
                        best = r;
                }
                if (best == rows.size()) break; // column all zero
                bool others = false;
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    if (r == best || rows[r][col] == 0) continue;
                    others = true;
                    Int q = rows[r][col] / rows[best][col]; // truncated division
                    for (std::size_t c = col; c < m; ++c) rows[r][c] -= q * rows[best][c];
                }
                if (!others) {
                    if (sgn(rows[best][col]) < 0)
                        for (std::size_t c = col; c < m; ++c) rows[best][c] = -rows[best][c];
                    lat.basis.push_back(rows[best]);
                    lat.pivot_col.push_back(col);
                    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(best));
                    break;
                }
            }
            std::erase_if(rows, [](const std::vector<Int>& r) {
                return std::all_of(r.begin(), r.end(), [](const Int& x) { return x == 0; });
            });
            ++col;
        }
        return lat;
    }

    /// Integer coordinates of z over the basis. z must lie in the lattice.
    std::vector<Int> coordinates(std::vector<Int> z) const {
        std::vector<Int> out(basis.size(), Int(0));
        for (std::size_t r = 0; r < basis.size(); ++r) {
            std::size_t c = pivot_col[r];
            if (z[c] == 0) continue;
            Int q = z[c] / basis[r][c];
            out[r] = q;
            for (std::size_t k = 0; k < z.size(); ++k) z[k] -= q * basis[r][k];
        }
        for (const Int& x : z)
            if (x != 0) throw DomainError("internal: vector outside exponential lattice");
        return out;
    }
};

// -------------------------------------------- embedded-ring gcd pipeline ---

inline std::size_t poly_nvars(const Poly& p) {
    std::size_t n = 0;
    for (const Poly::Term& t : p.terms()) n = std::max(n, t.first.deg.size());
    return n;
}

inline int deg_in(const Poly& p, std::size_t v) {
    int d = 0;
    for (const Poly::Term& t : p.terms())
        if (v < t.first.deg.size()) d = std::max(d, t.first.deg[v]);
    return d;
}

/// Coefficient of v^k, as a polynomial with the v-exponent stripped.
inline Poly coeff_of(const Poly& p, std::size_t v, int k) {
    std::map<Monomial, Rat, MonoLess> acc;
    for (const Poly::Term& t : p.terms()) {
        int d = v < t.first.deg.size() ? t.first.deg[v] : 0;
        if (d != k) continue;
        Monomial m = t.first;
        if (v < m.deg.size()) m.deg[v] = 0;
        acc[std::move(m)] += t.second;
    }
    return Poly::from_terms(std::move(acc));
}

inline Poly mul_power(const Poly& p, std::size_t v, int k) {
    if (k == 0) return p;
    Monomial m;
    m.deg.assign(v + 1, 0);
    m.deg[v] = k;
    return p.mul_mono(m, Rat(1));
}

/// Exact multivariate division (embedded polynomials, no exponential parts).
/// Throws if B does not divide A.
inline Poly poly_divexact(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw DomainError("internal: division by zero polynomial");
    Poly r = a, q;
    while (!r.is_zero()) {
        if (!mono_deg_divides(b.leading_mono(), r.leading_mono()))
            throw DomainError("internal: inexact polynomial division");
        Monomial m = mono_div(r.leading_mono(), b.leading_mono());
        Rat c = r.leading_coeff() / b.leading_coeff();
        q = q + Poly::monomial(m, c);
        r = r - b.mul_mono(m, c);
    }
    return q;
}

/// Pseudo-remainder of A by B with respect to variable v.
inline Poly poly_prem(Poly a, const Poly& b, std::size_t v) {
    int db = deg_in(b, v);
    Poly lb = coeff_of(b, v, db);
    while (!a.is_zero()) {
        int da = deg_in(a, v);
        if (da < db) break;
        Poly la = coeff_of(a, v, da);
        a = a * lb - mul_power(la, v, da - db) * b;
    }
    return a;
}

Poly poly_gcd(const Poly& a, const Poly& b);

/// GCD of the v-coefficients of p.
inline Poly poly_content(const Poly& p, std::size_t v) {
    Poly c;
    int d = deg_in(p, v);
    for (int k = 0; k <= d; ++k) {
        Poly ck = coeff_of(p, v, k);
        if (ck.is_zero()) continue;
        c = c.is_zero() ? make_primitive_pos(ck) : poly_gcd(c, ck);
        if (c.is_constant()) return Poly::constant(Rat(1));
    }
    return c;
}

inline Poly poly_pow(const Poly& p, int e) {
    Poly acc = Poly::constant(Rat(1));
    for (int i = 0; i < e; ++i) acc = acc * p;
    return acc;
}

namespace impl {

/// Subresultant polynomial remainder sequence (Brown-Traub): the remainders
/// are divided by known exact factors, which keeps coefficient growth
/// polynomial instead of the exponential growth of the naive sequence.
inline Poly gcd_rec(Poly a, Poly b) {
    a = make_primitive_pos(a);
    b = make_primitive_pos(b);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_constant() || b.is_constant()) return Poly::constant(Rat(1));

    // main variable: present in at least one; prefer the smallest joint
    // degree so the remainder sequence is short
    std::size_t nv = std::max(poly_nvars(a), poly_nvars(b));
    std::size_t v = nv;
    long best = -1;
    for (std::size_t i = 0; i < nv; ++i) {
        int da = deg_in(a, i), db = deg_in(b, i);
        if (da == 0 && db == 0) continue;
        long score = da == 0 || db == 0 ? -2 : std::max(da, db);
        if (score == -2) { // one side free of v: resolve via its content
            if (da == 0) return gcd_rec(a, poly_content(b, i));
            return gcd_rec(poly_content(a, i), b);
        }
        if (v == nv || score < best) {
            v = i;
            best = score;
        }
    }
    if (v == nv) return Poly::constant(Rat(1)); // no variables at all

    Poly ca = poly_content(a, v), cb = poly_content(b, v);
    Poly c = gcd_rec(ca, cb);
    Poly pa = poly_divexact(a, ca), pb = poly_divexact(b, cb);
    if (deg_in(pa, v) < deg_in(pb, v)) std::swap(pa, pb);

    Poly g = Poly::constant(Rat(1));
    Poly h = Poly::constant(Rat(1));
    Poly result;
    while (true) {
        int delta = deg_in(pa, v) - deg_in(pb, v);
        Poly r = poly_prem(pa, pb, v);
        if (r.is_zero()) {
            result = pb;
            break;
        }
        if (deg_in(r, v) == 0) {
            result = Poly::constant(Rat(1));
            break;
        }
        pa = pb;
        pb = poly_divexact(r, g * poly_pow(h, delta));
        g = coeff_of(pa, v, deg_in(pa, v));
        if (delta == 1)
            h = g;
        else if (delta > 1)
            h = poly_divexact(poly_pow(g, delta), poly_pow(h, delta - 1));
    }
    if (!result.is_constant()) {
        result = poly_divexact(result, poly_content(result, v));
        result = make_primitive_pos(result);
    }
    return make_primitive_pos(c * result);
}

} // namespace impl

/// Primitive gcd (coprime integer coefficients, positive leading coefficient)
/// including common coordinate-monomial factors. Embedded polynomials only.
inline Poly poly_gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return make_primitive_pos(b);
    if (b.is_zero()) return make_primitive_pos(a);
    std::size_t nv = std::max(poly_nvars(a), poly_nvars(b));
    std::vector<int> ma = a.min_deg(nv), mb = b.min_deg(nv);
    Monomial shared;
    shared.deg.resize(nv, 0);
    Monomial moa = shared, mob = shared;
    for (std::size_t i = 0; i < nv; ++i) {
        shared.deg[i] = std::min(ma[i], mb[i]);
        moa.deg[i] = ma[i];
        mob.deg[i] = mb[i];
    }
    Poly a1 = a.div_mono(moa), b1 = b.div_mono(mob);
    Poly g = impl::gcd_rec(a1, b1);
    return make_primitive_pos(g.mul_mono(shared, Rat(1)));
}

// --------------------------------------------------------- exp embedding ---

struct ExpEmbedding {
    std::size_t ncoords = 0;
    std::vector<Form> basis_forms; // lattice coordinate j  ->  rational form
};

/// Rewrite the exponential parts of N and D over a common lattice basis and
/// shift jointly so all lattice exponents are nonnegative. The joint shift
/// multiplies both polynomials by one unit, so N/D is unchanged.
inline std::pair<Poly, Poly> embed_pair(const Poly& n, const Poly& d, std::size_t ncoords,
                                        ExpEmbedding& emb) {
    emb.ncoords = ncoords;
    emb.basis_forms.clear();

    std::vector<Form> forms;
    auto collect = [&](const Poly& p) {
        for (const Poly::Term& t : p.terms())
            if (!t.first.expo.empty()) forms.push_back(t.first.expo);
    };
    collect(n);
    collect(d);

    auto strip = [&](const Poly& p) {
        Poly r;
        std::map<Monomial, Rat, MonoLess> acc;
        for (const Poly::Term& t : p.terms()) {
            Monomial m;
            m.deg = t.first.deg;
            m.deg.resize(ncoords, 0);
            acc[std::move(m)] += t.second;
        }
        return Poly::from_terms(std::move(acc));
    };
    if (forms.empty()) return {strip(n), strip(d)};

    // common denominator over all coefficients
    Int l(1);
    for (const Form& f : forms)
        for (const Rat& c : f) l = lcm(l, c.get_den());
    std::vector<std::vector<Int>> rows;
    for (const Form& f : forms) {
        std::vector<Int> z(ncoords, Int(0));
        for (std::size_t i = 0; i < f.size(); ++i) {
            Rat scaled = f[i] * Rat(l);
            z[i] = scaled.get_num();
        }
        rows.push_back(std::move(z));
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    IntLattice lat = IntLattice::build(rows, ncoords);
    std::size_t k = lat.basis.size();
    for (const auto& bz : lat.basis) {
        Form f(ncoords, Rat(0));
        for (std::size_t i = 0; i < ncoords; ++i) f[i] = Rat(bz[i]) / Rat(l);
        emb.basis_forms.push_back(std::move(f));
    }

    auto map_poly = [&](const Poly& p) {
        std::map<Monomial, Rat, MonoLess> acc;
        for (const Poly::Term& t : p.terms()) {
            std::vector<Int> z(ncoords, Int(0));
            for (std::size_t i = 0; i < t.first.expo.size(); ++i) {
                Rat scaled = t.first.expo[i] * Rat(l);
                z[i] = scaled.get_num();
            }
            std::vector<Int> coords = lat.coordinates(std::move(z));
            Monomial m;
            m.deg = t.first.deg;
            m.deg.resize(ncoords + k, 0);
            for (std::size_t j = 0; j < k; ++j) {
                if (!coords[j].fits_sint_p())
                    throw DomainError("internal: exponential lattice exponent overflow");
                m.deg[ncoords + j] = static_cast<int>(coords[j].get_si());
            }
            acc[std::move(m)] += t.second;
        }
        return Poly::from_terms(std::move(acc));
    };

    Poly en = map_poly(n), ed = map_poly(d);

    // joint nonnegativity shift over the lattice coordinates
    std::vector<int> mn(ncoords + k, 0);
    bool first = true;
    for (const Poly* p : {&en, &ed})
        for (const Poly::Term& t : p->terms()) {
            for (std::size_t j = ncoords; j < ncoords + k; ++j) {
                int dgj = j < t.first.deg.size() ? t.first.deg[j] : 0;
                mn[j] = first ? dgj : std::min(mn[j], dgj);
            }
            first = false;
        }
    Monomial shift;
    shift.deg.assign(ncoords + k, 0);
    bool any = false;
    for (std::size_t j = ncoords; j < ncoords + k; ++j)
        if (mn[j] < 0) {
            shift.deg[j] = -mn[j];
            any = true;
        }
    if (any) {
        en = en.mul_mono(shift, Rat(1));
        ed = ed.mul_mono(shift, Rat(1));
    }
    return {en, ed};
}

/// Back from the embedded ring: lattice exponents become exponential forms.
inline Poly unembed(const Poly& p, const ExpEmbedding& emb) {
    std::map<Monomial, Rat, MonoLess> acc;
    std::size_t k = emb.basis_forms.size();
    for (const Poly::Term& t : p.terms()) {
        Monomial m;
        m.deg.assign(t.first.deg.begin(),
                     t.first.deg.begin() + static_cast<std::ptrdiff_t>(
                                               std::min(emb.ncoords, t.first.deg.size())));
        m.deg.resize(emb.ncoords, 0);
        Form f;
        for (std::size_t j = 0; j < k; ++j) {
            int e = emb.ncoords + j < t.first.deg.size()
                        ? t.first.deg[emb.ncoords + j]
                        : 0;
            if (e != 0) f = form_add(f, form_scale(emb.basis_forms[j], Rat(e)));
        }
        m.expo = std::move(f);
        m.normalize();
        acc[std::move(m)] += t.second;
    }
    return Poly::from_terms(std::move(acc));
}

} // namespace etaricci::detail
