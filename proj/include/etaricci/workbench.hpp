#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "etaricci/fixtures.hpp"
#include "etaricci/oracle.hpp"
#include "etaricci/report.hpp"

// Command implementations behind the CLI. Exit-code contract:
//   0  every selected check passed
//   1  a mathematical check failed (or the metric is singular)
//   2  manifest / usage error
// ManifestError and ParseError map to 2, DomainError to 1; both are thrown
// through to the caller, which owns the process exit.

namespace etaricci {

struct RunResult {
    RunReport report;
    int exit_code = 0;
};

namespace workbench {

inline std::string join_vector(const TensorField& w,
                               const std::vector<std::string>& basis_names) {
    std::string out;
    for (std::size_t l = 0; l < w.dim(); ++l) {
        const ScalarExpr& c = w.at({l});
        if (c.is_zero()) continue;
        if (!out.empty()) out += " + ";
        out += "(" + c.str() + ") " + basis_names[l];
    }
    return out.empty() ? "0" : out;
}

inline CurvatureBundle curvature_of(const MetricField& g, const Connection& conn) {
    return riemann(conn, g);
}

/// The almost-contact / normality / Kenmotsu / positive-definite battery.
inline RunResult run_check_structure(const Manifest& m) {
    Stopwatch timer;
    BuiltManifold built = build_manifold(m);
    if (!built.structure) throw ManifestError("check-structure needs a structure section");
    const AlmostContactStructure& s = *built.structure;

    std::set<std::string> selected(built.checks.begin(), built.checks.end());
    auto want = [&](const std::string& name) {
        return selected.empty() || selected.count(name) > 0;
    };
    for (const std::string& c : selected)
        if (c != "almost_contact" && c != "normality" && c != "kenmotsu" &&
            c != "positive_definite")
            throw ManifestError("unknown check '" + c + "' (available: almost_contact, "
                                "normality, kenmotsu, positive_definite)");

    RunResult out;
    out.report.command = "check-structure";
    out.report.digest = manifest_digest(m.raw_text);
    out.report.warnings = built.warnings;

    if (want("almost_contact"))
        for (VerdictReport& v : check_almost_contact(s, built.sample_points))
            out.report.checks.push_back(std::move(v));
    if (want("normality")) out.report.checks.push_back(nijenhuis_normality(s));
    if (want("kenmotsu")) {
        Connection conn = christoffel(s.metric());
        CurvatureBundle bundle = curvature_of(s.metric(), conn);
        for (VerdictReport& v : check_kenmotsu(s, conn, bundle))
            out.report.checks.push_back(std::move(v));
    }
    if (selected.count("positive_definite") ||
        (selected.empty() && !built.sample_points.empty())) {
        auto pts = built.sample_points.empty() ? default_sample_points(s.dim())
                                               : built.sample_points;
        bool ok = true;
        std::string detail = "Sylvester minors positive at sample points";
        for (const auto& pt : pts) {
            try {
                if (!positive_definite_at(s.metric(), pt)) {
                    ok = false;
                    detail = "metric not positive definite at a sample point";
                    break;
                }
            } catch (const DomainError&) { // pole: skip the point
            }
        }
        out.report.checks.push_back(VerdictReport::boolean("positive_definite", ok, detail));
    }

    out.exit_code = out.report.all_checks_pass() ? 0 : 1;
    out.report.timing_ms = timer.ms();
    return out;
}

/// Connection, curvature, Ricci data plus the eta-Einstein and holomorphic
/// summaries when a structure is present.
inline RunResult run_curvature(const Manifest& m) {
    Stopwatch timer;
    BuiltManifold built = build_manifold(m);
    if (!built.metric) throw ManifestError("curvature needs a metric section");
    const MetricField& g = *built.metric;
    std::size_t n = g.dim();
    const std::vector<std::string>& cn = g.chart().ctx->coordinates();

    RunResult out;
    out.report.command = "curvature";
    out.report.digest = manifest_digest(m.raw_text);
    out.report.warnings = built.warnings;

    Connection conn = christoffel(g);
    CurvatureBundle bundle = curvature_of(g, conn);

    ReportSection gamma{"christoffel symbols (nonzero, i <= j)", {}};
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                if (!conn.gamma(k, i, j).is_zero())
                    gamma.entries.push_back({"Gamma^" + cn[k] + "_(" + cn[i] + "," + cn[j] + ")",
                                             conn.gamma(k, i, j).str()});
    out.report.sections.push_back(std::move(gamma));

    std::vector<std::string> coord_basis;
    for (std::size_t l = 0; l < n; ++l) coord_basis.push_back("d_" + cn[l]);
    ReportSection riem{"riemann curvature (nonzero, coordinate basis, i < j)", {}};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                TensorField w(g.chart(), 1, 0);
                bool nonzero = false;
                for (std::size_t l = 0; l < n; ++l) {
                    w.at({l}) = bundle.riemann.at({l, i, j, k});
                    nonzero = nonzero || !w.at({l}).is_zero();
                }
                if (nonzero)
                    riem.entries.push_back({"R(d_" + cn[i] + ",d_" + cn[j] + ")d_" + cn[k],
                                            join_vector(w, coord_basis)});
            }
    out.report.sections.push_back(std::move(riem));

    if (!built.frame.empty()) {
        if (built.frame.size() != n)
            throw ManifestError("frame must contain exactly dim vectors");
        std::vector<std::vector<ScalarExpr>> cols(
            n, std::vector<ScalarExpr>(n, ScalarExpr::zero(g.chart().ctx)));
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t r = 0; r < n; ++r) cols[r][c] = built.frame[c].at({r});
        auto inv = invert_matrix(cols, g.chart().ctx);
        if (!inv) throw ManifestError("declared frame is degenerate");
        std::vector<std::string> frame_names;
        for (std::size_t d = 0; d < n; ++d) frame_names.push_back("e" + std::to_string(d + 1));
        ReportSection fsec{"riemann curvature (nonzero, declared frame, a < b)", {}};
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c) {
                    TensorField w =
                        bundle.apply(built.frame[a], built.frame[b], built.frame[c]);
                    if (w.is_zero()) continue;
                    TensorField fw(g.chart(), 1, 0);
                    for (std::size_t d = 0; d < n; ++d) {
                        ScalarExpr acc = ScalarExpr::zero(g.chart().ctx);
                        for (std::size_t l = 0; l < n; ++l)
                            acc += inv->inv[d][l] * w.at({l});
                        fw.at({d}) = acc;
                    }
                    fsec.entries.push_back({"R(e" + std::to_string(a + 1) + ",e" +
                                                std::to_string(b + 1) + ")e" +
                                                std::to_string(c + 1),
                                            join_vector(fw, frame_names)});
                }
        out.report.sections.push_back(std::move(fsec));
    }

    ReportSection ric{"ricci tensor (nonzero, i <= j)", {}};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            if (!bundle.ricci.at({i, j}).is_zero())
                ric.entries.push_back(
                    {"Ric(" + cn[i] + "," + cn[j] + ")", bundle.ricci.at({i, j}).str()});
    out.report.sections.push_back(std::move(ric));

    ReportSection scal{"scalar curvature", {}};
    scal.entries.push_back({"r", bundle.scalar.str()});
    out.report.sections.push_back(std::move(scal));

    if (built.structure) {
        const AlmostContactStructure& s = *built.structure;
        ReportSection es{"eta-Einstein decomposition", {}};
        EtaEinsteinDecomposition d = eta_einstein_decompose(bundle, s);
        es.entries.push_back({"alpha", d.alpha.str()});
        es.entries.push_back({"beta", d.beta.str()});
        es.entries.push_back({"exact", d.exact ? "yes" : "no"});
        if (!d.exact && d.witness) es.entries.push_back({"witness", d.witness->str()});
        out.report.sections.push_back(std::move(es));

        ReportSection hs{"phi-holomorphic sectional curvature", {}};
        HolomorphicSectionalReport h = check_phi_holomorphic_curvature(bundle, s);
        if (h.constant) {
            hs.entries.push_back({"H", h.H->str()});
            hs.entries.push_back(
                {"ricci_consequence", h.ricci_consequence ? "holds" : "fails"});
        } else {
            hs.entries.push_back({"H", "not constant"});
            if (h.witness) hs.entries.push_back({"witness", h.witness->str()});
        }
        out.report.sections.push_back(std::move(hs));

        out.report.checks.push_back(check_einstein(bundle, s));
    }

    out.exit_code = out.report.all_checks_pass() ? 0 : 1;
    out.report.timing_ms = timer.ms();
    return out;
}

/// Soliton verification / constant solving plus the derived-identity suite.
inline RunResult run_soliton(const Manifest& m, bool solve) {
    Stopwatch timer;
    BuiltManifold built = build_manifold(m);
    if (!built.structure) throw ManifestError("soliton needs a structure section");
    if (!built.flow_field && !built.potential)
        throw ManifestError("soliton needs V or potential in the soliton section");
    const AlmostContactStructure& s = *built.structure;
    const ContextPtr& ctx = s.chart().ctx;

    bool gradient_mode = built.potential.has_value();
    if (solve && (built.lambda || built.mu))
        throw ManifestError("--solve forbids lambda/mu in the manifest");
    if (!solve && (!built.lambda || !built.mu))
        throw ManifestError("--verify requires lambda and mu in the manifest");

    RunResult out;
    out.report.command = solve ? "soliton --solve" : "soliton --verify";
    out.report.digest = manifest_digest(m.raw_text);
    out.report.warnings = built.warnings;

    Connection conn = christoffel(s.metric());
    CurvatureBundle bundle = curvature_of(s.metric(), conn);

    TensorField v = gradient_mode ? gradient(*built.potential, s.metric())
                                  : *built.flow_field;

    SolitonMode mode = SolitonMode::eta_soliton;
    if (built.mode && *built.mode == "almost") mode = SolitonMode::almost;

    ScalarExpr lambda = ScalarExpr::zero(ctx), mu = ScalarExpr::zero(ctx);
    if (solve) {
        VerdictReport sv = solve_constants(s, bundle, v);
        if (sv.pass && sv.solved) {
            lambda = sv.solved->first;
            mu = sv.solved->second;
        }
        out.report.checks.push_back(std::move(sv));
    } else {
        lambda = *built.lambda;
        mu = *built.mu;
        if (mode == SolitonMode::eta_soliton &&
            (!is_constant_expr(lambda, s.dim()) || !is_constant_expr(mu, s.dim())))
            throw ManifestError(
                "lambda/mu are nonconstant; declare `mode = almost` to allow this");
        VerdictReport main;
        if (gradient_mode) {
            SolitonSpec spec = SolitonSpec::gradient(*built.potential, lambda, mu);
            main = VerdictReport::from_residual(
                "gradient_soliton_equation", gradient_residual(s, bundle, conn, spec),
                "Hess f + Ric + lambda g + mu eta(x)eta = 0");
        } else {
            SolitonSpec spec = SolitonSpec::flow(v, lambda, mu, mode);
            main = VerdictReport::from_residual(
                "soliton_equation", soliton_residual(s, bundle, spec),
                "(1/2) L_V g + Ric + lambda g + mu eta(x)eta = 0");
        }
        main.classification = classify_lambda(lambda, s.dim());
        if (!main.pass && main.residual) {
            // frame-level witness at (xi, xi) when it is nonzero
            ScalarExpr rxx = ScalarExpr::zero(ctx);
            for (std::size_t a = 0; a < s.dim(); ++a)
                for (std::size_t b = 0; b < s.dim(); ++b)
                    rxx += main.residual->at({a, b}) * s.xi().at({a}) * s.xi().at({b});
            if (!rxx.is_zero()) main.detail += "; residual(xi,xi) = " + rxx.str();
        }
        out.report.checks.push_back(std::move(main));
    }

    bool main_ok = out.report.checks.front().pass;
    if (main_ok) {
        SolitonSpec spec = SolitonSpec::flow(v, lambda, mu, SolitonMode::almost);
        for (VerdictReport& rep : check_lemma_identities(s, bundle, conn, spec))
            out.report.checks.push_back(std::move(rep));
    }

    std::set<std::string> selected(built.checks.begin(), built.checks.end());
    if (selected.count("collinear")) out.report.checks.push_back(check_collinear(s, v));
    if (selected.count("contact_transformation"))
        out.report.checks.push_back(check_contact_transformation(s, v));
    if (selected.count("einstein")) out.report.checks.push_back(check_einstein(bundle, s));
    if (selected.count("reeb_scalar_invariance"))
        out.report.checks.push_back(check_reeb_scalar_invariance(bundle, s));
    if (selected.count("lie_commutation")) // costs one extra covariant-derivative pass
        out.report.checks.push_back(VerdictReport::from_residual(
            "lie_commutation", lie_curvature_commutation_residual(v, bundle, conn),
            "(L_V R)(X,Y)Z = (nabla_X L_V nabla)(Y,Z) - (nabla_Y L_V nabla)(X,Z)"));

    out.exit_code = out.report.all_checks_pass() ? 0 : 1;
    out.report.timing_ms = timer.ms();
    return out;
}

/// Finite-difference cross-validation of Gamma, R and Ric.
inline RunResult run_oracle(const Manifest& m, std::size_t points, double tol) {
    Stopwatch timer;
    if (tol <= 0) throw ManifestError("oracle tolerance must be positive");
    if (points == 0) throw ManifestError("oracle needs at least one point");
    BuiltManifold built = build_manifold(m);
    if (!built.metric) throw ManifestError("oracle needs a metric section");
    const MetricField& g = *built.metric;

    RunResult out;
    out.report.command = "oracle";
    out.report.digest = manifest_digest(m.raw_text);
    out.report.warnings = built.warnings;

    Connection conn = christoffel(g);
    CurvatureBundle bundle = curvature_of(g, conn);

    OracleSettings cfg;
    cfg.points = points;
    cfg.tolerance = tol;
    OracleResult res = ::etaricci::run_oracle(g, conn, bundle, cfg, built.sample_points);

    for (std::size_t i = 0; i < res.points_skipped; ++i)
        out.report.warnings.push_back("sample point skipped (pole or singular metric)");
    if (res.points_used == 0)
        throw ManifestError("all oracle sample points were skipped");

    ReportSection sec{"finite-difference deviation (relative to max(1,|value|))", {}};
    auto fmt = [](double x) {
        std::ostringstream os;
        os.precision(3);
        os << std::scientific << x;
        return os.str();
    };
    sec.entries.push_back({"points_used", std::to_string(res.points_used)});
    sec.entries.push_back({"max_dev_christoffel", fmt(res.max_dev_gamma)});
    sec.entries.push_back({"max_dev_riemann", fmt(res.max_dev_riemann)});
    sec.entries.push_back({"max_dev_ricci", fmt(res.max_dev_ricci)});
    out.report.sections.push_back(std::move(sec));
    out.report.checks.push_back(VerdictReport::boolean(
        "oracle_agreement", res.pass,
        "symbolic vs central differences within " + fmt(tol)));

    out.exit_code = res.pass ? 0 : 1;
    out.report.timing_ms = timer.ms();
    return out;
}

} // namespace workbench

} // namespace etaricci
