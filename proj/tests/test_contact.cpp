#include <catch2/catch_amalgamated.hpp>

#include "etaricci/contact.hpp"
#include "etaricci/soliton.hpp"

#include "test_support.hpp"

using namespace etaricci;

namespace {

/// Conformally flat Kahler factor rho * delta over two coordinates, with the
/// standard rotation as complex structure.
KahlerFactor conformal_factor(const std::string& c1, const std::string& c2,
                              const std::string& rho_text) {
    ContextPtr ctx = make_context({c1, c2});
    ScalarExpr rho = parse_expr(rho_text, ctx);
    KahlerFactor f;
    f.ctx = ctx;
    f.metric.assign(2, std::vector<ScalarExpr>(2, ScalarExpr::zero(ctx)));
    f.cplx.assign(2, std::vector<ScalarExpr>(2, ScalarExpr::zero(ctx)));
    f.metric[0][0] = rho;
    f.metric[1][1] = rho;
    f.cplx[1][0] = ScalarExpr::one(ctx);
    f.cplx[0][1] = -ScalarExpr::one(ctx);
    return f;
}

/// Product of two conformal blocks over four coordinates.
KahlerFactor product_factor(const std::string& rho1, const std::string& rho2) {
    ContextPtr ctx = make_context({"x", "y", "z", "u"});
    KahlerFactor f;
    f.ctx = ctx;
    f.metric.assign(4, std::vector<ScalarExpr>(4, ScalarExpr::zero(ctx)));
    f.cplx.assign(4, std::vector<ScalarExpr>(4, ScalarExpr::zero(ctx)));
    ScalarExpr r1 = parse_expr(rho1, ctx), r2 = parse_expr(rho2, ctx);
    f.metric[0][0] = r1;
    f.metric[1][1] = r1;
    f.metric[2][2] = r2;
    f.metric[3][3] = r2;
    f.cplx[1][0] = ScalarExpr::one(ctx);
    f.cplx[0][1] = -ScalarExpr::one(ctx);
    f.cplx[3][2] = ScalarExpr::one(ctx);
    f.cplx[2][3] = -ScalarExpr::one(ctx);
    return f;
}

} // namespace

TEST_CASE("almost contact axioms") {
    auto [c5, s] = builtin_example_m5();
    CHECK(all_pass(check_almost_contact(s)));

    auto [c3, r3] = builtin_flat_r3_rotation();
    CHECK(all_pass(check_almost_contact(r3)));

    // degenerate phi = 0 fails the phi^2 axiom with witness (x,x)
    Chart chart{make_context({"x", "y", "z"})};
    TensorField g(chart, 0, 2);
    for (std::size_t i = 0; i < 3; ++i) g.at({i, i}) = ScalarExpr::one(chart.ctx);
    TensorField phi(chart, 1, 1);
    TensorField xi(chart, 1, 0);
    xi.at({2}) = ScalarExpr::one(chart.ctx);
    AlmostContactStructure degenerate(phi, xi, MetricField(g));
    auto verdicts = check_almost_contact(degenerate);
    REQUIRE_FALSE(all_pass(verdicts));
    const VerdictReport* phisq = nullptr;
    for (const auto& v : verdicts)
        if (v.name == "phi_square") phisq = &v;
    REQUIRE(phisq != nullptr);
    CHECK_FALSE(phisq->pass);
    REQUIRE(phisq->witness.has_value());
    CHECK(phisq->witness->index == std::vector<std::size_t>{0, 0});
    CHECK(phisq->witness->value == "1");
}

TEST_CASE("eta is rebuilt as the dual of xi when inconsistent") {
    // the literal form eta = dv fails eta(xi) = 1 against xi = -v d_v
    ContextPtr ctx = make_context({"x", "y", "z", "u", "v"});
    Chart chart{ctx};
    TensorField g(chart, 0, 2);
    ScalarExpr vinv2 = parse_expr("1/v^2", ctx);
    for (std::size_t i = 0; i < 5; ++i) g.at({i, i}) = vinv2;
    TensorField phi(chart, 1, 1);
    phi.at({1, 0}) = ScalarExpr::one(ctx);
    phi.at({0, 1}) = -ScalarExpr::one(ctx);
    phi.at({3, 2}) = ScalarExpr::one(ctx);
    phi.at({2, 3}) = -ScalarExpr::one(ctx);
    TensorField xi(chart, 1, 0);
    xi.at({4}) = parse_expr("-v", ctx);
    TensorField literal_eta(chart, 0, 1);
    literal_eta.at({4}) = ScalarExpr::one(ctx); // dv
    AlmostContactStructure s(phi, xi, MetricField(g), literal_eta);
    CHECK(s.eta_replaced());
    CHECK(s.eta().at({4}) == parse_expr("-1/v", ctx));
    CHECK(s.eta_apply(s.xi()) == ScalarExpr::one(ctx));
}

TEST_CASE("normality") {
    auto [c5, s] = builtin_example_m5();
    CHECK(nijenhuis_normality(s).pass);

    auto [wc, ws] = build_warped_kenmotsu(flat_kahler_factor({"x", "y"}), Rat(1));
    CHECK(nijenhuis_normality(ws).pass);

    // the flat rotation structure is normal yet fails the Kenmotsu identity:
    // nabla_{d_x} xi = 0 instead of d_x
    auto [c3, r3] = builtin_flat_r3_rotation();
    CHECK(nijenhuis_normality(r3).pass);
    Connection conn3 = christoffel(r3.metric());
    CurvatureBundle b3 = riemann(conn3, r3.metric());
    auto verdicts = check_kenmotsu(r3, conn3, b3);
    REQUIRE_FALSE(all_pass(verdicts));
    const VerdictReport* reeb = nullptr;
    for (const auto& v : verdicts)
        if (v.name == "reeb_covariant_derivative") reeb = &v;
    REQUIRE(reeb != nullptr);
    CHECK_FALSE(reeb->pass);
    CHECK(reeb->witness.has_value());
}

TEST_CASE("kenmotsu consequence ladder") {
    auto [c5, s] = builtin_example_m5();
    Connection conn = christoffel(s.metric());
    CurvatureBundle bundle = riemann(conn, s.metric());
    auto verdicts = check_kenmotsu(s, conn, bundle);
    CHECK(all_pass(verdicts));
    CHECK(verdicts.size() == 8);

    auto [wc, ws] = build_warped_kenmotsu(flat_kahler_factor({"x", "y", "z", "u"}), Rat(1));
    Connection wconn = christoffel(ws.metric());
    CurvatureBundle wbundle = riemann(wconn, ws.metric());
    CHECK(all_pass(check_kenmotsu(ws, wconn, wbundle)));
}

TEST_CASE("fundamental two-form") {
    auto [c5, s] = builtin_example_m5();
    TensorField f = s.fundamental_two_form();
    for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = 0; b < 5; ++b)
            CHECK((f.at({a, b}) + f.at({b, a})).is_zero());
}

TEST_CASE("eta-Einstein decomposition") {
    auto [c5, s] = builtin_example_m5();
    Connection conn = christoffel(s.metric());
    CurvatureBundle bundle = riemann(conn, s.metric());
    EtaEinsteinDecomposition d = eta_einstein_decompose(bundle, s);
    CHECK(d.exact);
    CHECK(d.alpha == ScalarExpr::constant(c5.ctx, Rat(-4)));
    CHECK(d.beta.is_zero());
    // alpha + beta = -2n on a Kenmotsu manifold
    CHECK(d.alpha + d.beta == ScalarExpr::constant(c5.ctx, Rat(-4)));

    // reconstructing Ric from (alpha, beta) reproduces it exactly
    TensorField rebuilt = d.alpha * s.metric().g();
    for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = 0; b < 5; ++b)
            rebuilt.at({a, b}) += d.beta * s.eta().at({a}) * s.eta().at({b});
    CHECK(rebuilt == bundle.ricci);

    // zero Ricci: flat rotation structure decomposes with alpha = beta = 0
    auto [c3, r3] = builtin_flat_r3_rotation();
    Connection conn3 = christoffel(r3.metric());
    CurvatureBundle b3 = riemann(conn3, r3.metric());
    EtaEinsteinDecomposition d3 = eta_einstein_decompose(b3, r3);
    CHECK(d3.exact);
    CHECK(d3.alpha.is_zero());
    CHECK(d3.beta.is_zero());
}

TEST_CASE("three-dimensional Kenmotsu manifolds are eta-Einstein") {
    // warped over a conformal (hence Kahler) factor of nonconstant curvature
    auto [wc, ws] = build_warped_kenmotsu(conformal_factor("x", "y", "1 + x^2 + y^2"), Rat(1));
    Connection conn = christoffel(ws.metric());
    CurvatureBundle bundle = riemann(conn, ws.metric());
    REQUIRE(all_pass(check_kenmotsu(ws, conn, bundle)));

    EtaEinsteinDecomposition d = eta_einstein_decompose(bundle, ws);
    CHECK(d.exact);
    const ContextPtr& ctx = wc.ctx;
    // alpha = 1 + r/2 and beta = -(3 + r/2)
    CHECK(d.alpha == ScalarExpr::one(ctx) + Rat(1, 2) * bundle.scalar);
    CHECK(d.beta == -(ScalarExpr::constant(ctx, Rat(3)) + Rat(1, 2) * bundle.scalar));
    CHECK_FALSE(is_constant_expr(bundle.scalar, wc.dim())); // genuinely non-Einstein
}

TEST_CASE("phi-holomorphic sectional curvature") {
    auto [c5, s] = builtin_example_m5();
    Connection conn = christoffel(s.metric());
    CurvatureBundle bundle = riemann(conn, s.metric());
    HolomorphicSectionalReport h = check_phi_holomorphic_curvature(bundle, s);
    REQUIRE(h.constant);
    CHECK(*h.H == ScalarExpr::constant(c5.ctx, Rat(-1)));
    CHECK(h.ricci_consequence);

    auto [wc, ws] = build_warped_kenmotsu(flat_kahler_factor({"x", "y", "z", "u"}), Rat(1));
    Connection wconn = christoffel(ws.metric());
    CurvatureBundle wbundle = riemann(wconn, ws.metric());
    HolomorphicSectionalReport wh = check_phi_holomorphic_curvature(wbundle, ws);
    REQUIRE(wh.constant);
    CHECK(*wh.H == ScalarExpr::constant(wc.ctx, Rat(-1)));

    // a warped product over a product Kahler factor with distinct block
    // curvatures is Kenmotsu but not of constant phi-sectional curvature
    auto [mc, ms] = build_warped_kenmotsu(product_factor("1", "1 + z^2 + u^2"), Rat(1));
    Connection mconn = christoffel(ms.metric());
    CurvatureBundle mbundle = riemann(mconn, ms.metric());
    REQUIRE(all_pass(check_kenmotsu(ms, mconn, mbundle)));
    HolomorphicSectionalReport mh = check_phi_holomorphic_curvature(mbundle, ms);
    CHECK_FALSE(mh.constant);
    CHECK(mh.witness.has_value());
}

TEST_CASE("warped builder") {
    // flat C^1, c = 1: three-dimensional, constant curvature -1, r = -6
    auto [wc, ws] = build_warped_kenmotsu(flat_kahler_factor({"x", "y"}), Rat(1));
    CHECK(wc.dim() == 3);
    CHECK(all_pass(check_almost_contact(ws)));
    Connection conn = christoffel(ws.metric());
    CurvatureBundle bundle = riemann(conn, ws.metric());
    CHECK(all_pass(check_kenmotsu(ws, conn, bundle)));
    CHECK(bundle.scalar == ScalarExpr::constant(wc.ctx, Rat(-6)));

    // flat C^2, c = 1: Ric = -4g
    auto [wc2, ws2] = build_warped_kenmotsu(flat_kahler_factor({"x", "y", "z", "u"}), Rat(1));
    Connection conn2 = christoffel(ws2.metric());
    CurvatureBundle bundle2 = riemann(conn2, ws2.metric());
    CHECK(bundle2.ricci == Rat(-4) * ScalarExpr::one(wc2.ctx) * ws2.metric().g());

    CHECK_THROWS_AS(build_warped_kenmotsu(flat_kahler_factor({"x", "y"}), Rat(0)),
                    DomainError);

    // broken factors are rejected: J^2 != -I
    KahlerFactor bad = flat_kahler_factor({"x", "y"});
    bad.cplx[0][1] = ScalarExpr::one(bad.ctx); // J d_y = d_x, J d_x = d_y
    CHECK_THROWS_AS(build_warped_kenmotsu(bad, Rat(1)), DomainError);

    // incompatible metric: J-rotation against diag(1, 1 + x^2)
    KahlerFactor incompat = flat_kahler_factor({"x", "y"});
    incompat.metric[1][1] = parse_expr("1 + x^2", incompat.ctx);
    CHECK_THROWS_AS(build_warped_kenmotsu(incompat, Rat(1)), DomainError);
}

TEST_CASE("warping constant is a gauge choice") {
    auto f = [](Rat c) {
        return build_warped_kenmotsu(flat_kahler_factor({"x", "y"}), c);
    };
    auto [c1_chart, s1] = f(Rat(1));
    auto [c3_chart, s3] = f(Rat(3));
    Connection conn1 = christoffel(s1.metric());
    Connection conn3 = christoffel(s3.metric());
    CurvatureBundle b1 = riemann(conn1, s1.metric());
    CurvatureBundle b3 = riemann(conn3, s3.metric());

    // same verdicts and the same curvature invariants
    CHECK(all_pass(check_kenmotsu(s1, conn1, b1)));
    CHECK(all_pass(check_kenmotsu(s3, conn3, b3)));
    CHECK(b1.scalar == b3.scalar);

    // the two bundles agree exactly after the substitution t -> t + ln 3
    auto shifted = [&](const TensorField& t) {
        TensorField out = t;
        out.for_each_index([&](const std::vector<std::size_t>& idx) {
            out.at(idx) = t.at(idx).shift_exponential(0, Rat(3));
        });
        return out;
    };
    CHECK(shifted(b1.riemann) == b3.riemann);
    CHECK(shifted(b1.ricci) == b3.ricci);
    CHECK(b1.scalar.shift_exponential(0, Rat(3)) == b3.scalar);
    CHECK(shifted(s1.metric().g()) == s3.metric().g());
}

TEST_CASE("rank of phi at sample points") {
    auto [c5, s] = builtin_example_m5();
    for (const auto& pt : default_sample_points(5))
        CHECK(matrix_rank_at(s.phi(), pt) == 4);
}
