#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "etaricci/tensor.hpp"

namespace etaricci {

/// First offending component of a failed identity.
struct Witness {
    std::vector<std::size_t> index;
    std::string value; // canonical rendering of the residual component

    std::string str() const {
        std::string s = "[";
        for (std::size_t i = 0; i < index.size(); ++i)
            s += (i ? "," : "") + std::to_string(index[i]);
        s += "] = " + value;
        return s;
    }
};

/// Outcome of one named identity check.
struct VerdictReport {
    std::string name;
    bool pass = false;
    std::optional<Witness> witness;
    std::optional<TensorField> residual;
    std::optional<std::pair<ScalarExpr, ScalarExpr>> solved; // lambda, mu
    std::optional<std::string> classification; // shrinking|steady|expanding|indefinite
    std::optional<ScalarExpr> factor; // rho / collinearity factor / alpha-like value
    std::string detail;

    static VerdictReport from_residual(std::string name, TensorField res,
                                       std::string detail = "") {
        VerdictReport v;
        v.name = std::move(name);
        v.detail = std::move(detail);
        auto fz = res.first_nonzero();
        v.pass = !fz.has_value();
        if (fz) v.witness = Witness{fz->first, fz->second.str()};
        v.residual = std::move(res);
        return v;
    }

    static VerdictReport from_scalar(std::string name, const ScalarExpr& res,
                                     std::string detail = "") {
        VerdictReport v;
        v.name = std::move(name);
        v.detail = std::move(detail);
        v.pass = res.is_zero();
        if (!v.pass) v.witness = Witness{{}, res.str()};
        return v;
    }

    static VerdictReport boolean(std::string name, bool ok, std::string detail = "") {
        VerdictReport v;
        v.name = std::move(name);
        v.pass = ok;
        v.detail = std::move(detail);
        return v;
    }
};

inline bool all_pass(const std::vector<VerdictReport>& vs) {
    for (const VerdictReport& v : vs)
        if (!v.pass) return false;
    return true;
}

} // namespace etaricci
