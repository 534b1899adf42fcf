#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "etaricci/contact.hpp"
#include "etaricci/parser.hpp"
#include "etaricci/soliton.hpp"

// Line-oriented manifest format. Sections in square brackets, `key = value`
// entries, `#` comments. Expressions use the kernel grammar. Grammar:
//
//   [manifold]       coordinates = x, y, z        (required, >= 1 name)
//                    exp_generators = 2*t, t - u  (optional linear forms)
//   [metric]         g(a,b) = <expr>              (full upper triangle
//                                                  required, a <= b in
//                                                  declaration order)
//   [structure]      phi(a,b) = <expr>            (component of phi(d_b)
//                                                  along d_a; missing = 0)
//                    xi  = <expr>, ...             (dim components)
//                    eta = <expr>, ...             (optional; replaced by the
//                                                  g-dual of xi if different)
//   [soliton]        V = <expr>, ...    OR    potential = <expr>
//                    lambda = <expr>    mu = <expr>   (both or neither)
//                    mode = eta_soliton | almost      (optional)
//   [frame]          e1 = <expr>, ...              (any number of vectors)
//   [checks]         run = name, name, ...         (optional selection)
//   [sample_points]  point = <rational>, ...       (repeatable)

namespace etaricci {

/// Manifest-level validation problem (exit code 2 in the CLI).
struct ManifestError : Error {
    explicit ManifestError(const std::string& what) : Error(what) {}
    ManifestError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what) {}
};

struct Manifest {
    std::vector<std::string> coordinates;
    std::vector<std::string> exp_generators;
    std::map<std::pair<std::size_t, std::size_t>, std::string> metric; // upper triangle
    std::map<std::pair<std::size_t, std::size_t>, std::string> phi;
    std::optional<std::vector<std::string>> xi;
    std::optional<std::vector<std::string>> eta;
    std::optional<std::vector<std::string>> flow_field;  // V components
    std::optional<std::string> potential;                // f
    std::optional<std::string> lambda;
    std::optional<std::string> mu;
    std::optional<std::string> mode;
    std::vector<std::vector<std::string>> frame;
    std::vector<std::string> checks;
    std::vector<std::vector<std::string>> sample_points;
    std::string raw_text;
    std::map<std::string, std::size_t> entry_lines; // first line of each key

    static Manifest parse(const std::string& text);
    static Manifest load(const std::string& path);

    std::size_t line_of(const std::string& key) const {
        auto it = entry_lines.find(key);
        return it == entry_lines.end() ? 0 : it->second;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

} // namespace detail

inline Manifest Manifest::parse(const std::string& text) {
    Manifest m;
    m.raw_text = text;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    std::size_t frame_count = 0;

    auto coord_index = [&](const std::string& name, std::size_t ln) -> std::size_t {
        for (std::size_t i = 0; i < m.coordinates.size(); ++i)
            if (m.coordinates[i] == name) return i;
        throw ManifestError(ln, "unknown coordinate name '" + name + "'");
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ManifestError(lineno, "unterminated section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "manifold" && section != "metric" && section != "structure" &&
                section != "soliton" && section != "frame" && section != "checks" &&
                section != "sample_points")
                throw ManifestError(lineno, "unknown section [" + section + "]");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ManifestError(lineno, "expected 'key = value'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ManifestError(lineno, "empty key or value");
        m.entry_lines.emplace(key, lineno);

        if (section == "manifold") {
            if (key == "coordinates") {
                if (!m.coordinates.empty())
                    throw ManifestError(lineno, "coordinates declared twice");
                for (const std::string& c : detail::split_commas(value)) {
                    if (c.empty()) throw ManifestError(lineno, "empty coordinate name");
                    m.coordinates.push_back(c);
                }
            } else if (key == "exp_generators") {
                m.exp_generators = detail::split_commas(value);
            } else {
                throw ManifestError(lineno, "unknown manifold key '" + key + "'");
            }
        } else if (section == "metric" || (section == "structure" && key.rfind("phi", 0) == 0)) {
            const char* what = section == "metric" ? "g" : "phi";
            std::string prefix = std::string(what) + "(";
            if (key.rfind(prefix, 0) != 0 || key.back() != ')')
                throw ManifestError(lineno, std::string("expected ") + what + "(a,b) = value");
            std::string args = key.substr(prefix.size(), key.size() - prefix.size() - 1);
            auto parts = detail::split_commas(args);
            if (parts.size() != 2)
                throw ManifestError(lineno, std::string(what) + " takes two coordinate names");
            std::size_t a = coord_index(parts[0], lineno);
            std::size_t b = coord_index(parts[1], lineno);
            if (section == "metric") {
                if (a > b) throw ManifestError(lineno, "metric entries use the upper triangle");
                if (m.metric.count({a, b}))
                    throw ManifestError(lineno, "duplicate metric entry");
                m.metric[{a, b}] = value;
            } else {
                if (m.phi.count({a, b})) throw ManifestError(lineno, "duplicate phi entry");
                m.phi[{a, b}] = value;
            }
        } else if (section == "structure") {
            if (key == "xi") {
                m.xi = detail::split_commas(value);
            } else if (key == "eta") {
                m.eta = detail::split_commas(value);
            } else {
                throw ManifestError(lineno, "unknown structure key '" + key + "'");
            }
        } else if (section == "soliton") {
            if (key == "V") m.flow_field = detail::split_commas(value);
            else if (key == "potential") m.potential = value;
            else if (key == "lambda") m.lambda = value;
            else if (key == "mu") m.mu = value;
            else if (key == "mode") m.mode = value;
            else throw ManifestError(lineno, "unknown soliton key '" + key + "'");
        } else if (section == "frame") {
            std::string expected = "e" + std::to_string(frame_count + 1);
            if (key != expected)
                throw ManifestError(lineno, "frame vectors must be named e1, e2, ... in order");
            m.frame.push_back(detail::split_commas(value));
            ++frame_count;
        } else if (section == "checks") {
            if (key != "run") throw ManifestError(lineno, "unknown checks key '" + key + "'");
            for (const std::string& c : detail::split_commas(value)) m.checks.push_back(c);
        } else if (section == "sample_points") {
            if (key != "point")
                throw ManifestError(lineno, "unknown sample_points key '" + key + "'");
            m.sample_points.push_back(detail::split_commas(value));
        } else {
            throw ManifestError(lineno, "entry outside of any section");
        }
    }
    if (m.coordinates.empty())
        throw ManifestError("manifest declares no coordinates ([manifold] section)");
    return m;
}

inline Manifest Manifest::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ManifestError("cannot open manifest file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

// -------------------------------------------------------------- building ---

/// Everything a manifest can describe, instantiated over one chart.
struct BuiltManifold {
    Chart chart;
    std::optional<MetricField> metric;
    std::optional<AlmostContactStructure> structure;
    std::optional<TensorField> flow_field;
    std::optional<ScalarExpr> potential;
    std::optional<ScalarExpr> lambda;
    std::optional<ScalarExpr> mu;
    std::optional<std::string> mode;
    std::vector<TensorField> frame;
    std::vector<std::string> checks;
    std::vector<std::vector<Rat>> sample_points;
    std::vector<std::string> warnings;
};

inline Rat parse_rational_literal(const std::string& text) {
    std::string t = detail::trim(text);
    if (t.empty()) throw ManifestError("empty rational literal");
    try {
        Rat q(t);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw ManifestError("bad rational literal '" + t + "'");
    }
}

inline BuiltManifold build_manifold(const Manifest& m) {
    BuiltManifold out;

    std::vector<detail::Form> gens;
    ContextPtr probe = make_context(m.coordinates); // validates names
    for (const std::string& gtext : m.exp_generators) {
        try {
            gens.push_back(parse_linear_form(gtext, probe));
        } catch (const ParseError& e) {
            throw ManifestError(std::string("bad exp_generators entry '") + gtext +
                                "': " + e.what());
        }
    }
    ContextPtr ctx = make_context(m.coordinates, gens);
    out.chart = Chart{ctx};
    std::size_t n = ctx->dim();

    auto located = [&](const std::string& key, const std::string& msg) {
        std::size_t line = m.line_of(key);
        if (line) return ManifestError(line, key + ": " + msg);
        return ManifestError(key + ": " + msg);
    };
    auto expr = [&](const std::string& text, const std::string& key) {
        try {
            return parse_expr(text, ctx);
        } catch (const ParseError& e) {
            throw located(key, e.what()); // parse offsets count within the value
        }
    };
    auto vector_field = [&](const std::vector<std::string>& comps, const std::string& key) {
        if (comps.size() != n)
            throw located(key, "expected " + std::to_string(n) + " components");
        TensorField v(out.chart, 1, 0);
        for (std::size_t i = 0; i < n; ++i) v.at({i}) = expr(comps[i], key);
        return v;
    };

    if (!m.metric.empty()) {
        TensorField g(out.chart, 0, 2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                auto it = m.metric.find({i, j});
                if (it == m.metric.end())
                    throw ManifestError("missing metric component g(" + m.coordinates[i] +
                                        "," + m.coordinates[j] + ")");
                ScalarExpr e = expr(it->second,
                                    "g(" + m.coordinates[i] + "," + m.coordinates[j] + ")");
                g.at({i, j}) = e;
                g.at({j, i}) = e;
            }
        try {
            out.metric = MetricField(std::move(g));
        } catch (const DomainError& e) {
            throw DomainError(std::string("metric: ") + e.what());
        }
    }

    if (!m.phi.empty() || m.xi) {
        if (!out.metric) throw ManifestError("structure section requires a metric");
        if (m.phi.empty()) throw ManifestError("structure section requires phi entries");
        if (!m.xi) throw ManifestError("structure section requires xi");
        TensorField phi(out.chart, 1, 1);
        for (const auto& [idx, text] : m.phi)
            phi.at({idx.first, idx.second}) =
                expr(text, "phi(" + m.coordinates[idx.first] + "," +
                               m.coordinates[idx.second] + ")");
        TensorField xi = vector_field(*m.xi, "xi");
        std::optional<TensorField> eta;
        if (m.eta) {
            TensorField e(out.chart, 0, 1);
            if (m.eta->size() != n) throw ManifestError("eta: expected " + std::to_string(n) + " components");
            for (std::size_t i = 0; i < n; ++i) e.at({i}) = expr((*m.eta)[i], "eta");
            eta = std::move(e);
        }
        try {
            out.structure =
                AlmostContactStructure(std::move(phi), std::move(xi), *out.metric, eta);
        } catch (const DomainError& e) {
            throw ManifestError(std::string("structure: ") + e.what());
        }
        if (out.structure->eta_replaced())
            out.warnings.push_back(
                "supplied eta is not the g-dual of xi; using the dual instead");
    }

    if (m.flow_field && m.potential)
        throw ManifestError("soliton section: V and potential are mutually exclusive");
    if (m.flow_field) out.flow_field = vector_field(*m.flow_field, "V");
    if (m.potential) out.potential = expr(*m.potential, "potential");
    if (m.lambda) out.lambda = expr(*m.lambda, "lambda");
    if (m.mu) out.mu = expr(*m.mu, "mu");
    if (m.mode) {
        if (*m.mode != "eta_soliton" && *m.mode != "almost")
            throw ManifestError("soliton mode must be eta_soliton or almost");
        out.mode = m.mode;
    }

    for (std::size_t f = 0; f < m.frame.size(); ++f)
        out.frame.push_back(vector_field(m.frame[f], "e" + std::to_string(f + 1)));

    out.checks = m.checks;
    for (const auto& pt : m.sample_points) {
        if (pt.size() != n)
            throw ManifestError("sample point needs " + std::to_string(n) + " entries");
        std::vector<Rat> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = parse_rational_literal(pt[i]);
        out.sample_points.push_back(std::move(p));
    }
    return out;
}

} // namespace etaricci
