#pragma once

#include <string>
#include <vector>

#include "etaricci/manifest.hpp"

// Built-in fixtures, exposed by name. Each is rendered as a manifest so the
// CLI commands and the test-suite exercise the same text format end to end.

namespace etaricci {

inline std::vector<std::string> fixture_names() {
    return {"m5_example", "warped_flat_n1", "warped_flat_n2", "flat_r3_rotation"};
}

inline std::string fixture_manifest(const std::string& name) {
    if (name == "m5_example") {
        // hyperbolic chart v > 0, orthonormal frame e_i = v d_i, e_5 = -v d_v;
        // the soliton section carries the nontrivial potential field
        std::string s;
        s += "# five-dimensional built-in example: g = v^-2 delta on v > 0\n";
        s += "[manifold]\n";
        s += "coordinates = x, y, z, u, v\n\n";
        s += "[metric]\n";
        const char* names[5] = {"x", "y", "z", "u", "v"};
        for (int i = 0; i < 5; ++i)
            for (int j = i; j < 5; ++j) {
                s += std::string("g(") + names[i] + "," + names[j] + ") = ";
                s += (i == j) ? "1/v^2" : "0";
                s += "\n";
            }
        s += "\n[structure]\n";
        s += "phi(y,x) = 1\n";
        s += "phi(x,y) = -1\n";
        s += "phi(u,z) = 1\n";
        s += "phi(z,u) = -1\n";
        s += "xi = 0, 0, 0, 0, -v\n";
        s += "eta = 0, 0, 0, 0, -1/v\n\n";
        s += "[soliton]\n";
        s += "V = 2*x, 2*y, 2*z, 2*u, v\n\n";
        s += "[frame]\n";
        s += "e1 = v, 0, 0, 0, 0\n";
        s += "e2 = 0, v, 0, 0, 0\n";
        s += "e3 = 0, 0, v, 0, 0\n";
        s += "e4 = 0, 0, 0, v, 0\n";
        s += "e5 = 0, 0, 0, 0, -v\n\n";
        s += "[sample_points]\n";
        s += "point = 1, 1, 1, 1, 2\n";
        s += "point = 2, 1/2, 1, 3, 1\n";
        s += "point = 1/2, 2, 3, 1, 3/2\n";
        return s;
    }
    if (name == "warped_flat_n1" || name == "warped_flat_n2") {
        bool n2 = name == "warped_flat_n2";
        std::vector<std::string> fc = n2 ? std::vector<std::string>{"x", "y", "z", "u"}
                                         : std::vector<std::string>{"x", "y"};
        std::string s;
        s += "# warped product of a line and flat C^" + std::string(n2 ? "2" : "1") +
             ", warping e^t\n";
        s += "[manifold]\n";
        s += "coordinates = t";
        for (const auto& c : fc) s += ", " + c;
        s += "\nexp_generators = 2*t\n\n";
        s += "[metric]\n";
        std::vector<std::string> all;
        all.push_back("t");
        for (const auto& c : fc) all.push_back(c);
        for (std::size_t i = 0; i < all.size(); ++i)
            for (std::size_t j = i; j < all.size(); ++j) {
                s += "g(" + all[i] + "," + all[j] + ") = ";
                if (i != j) s += "0";
                else if (i == 0) s += "1";
                else s += "exp(2*t)";
                s += "\n";
            }
        s += "\n[structure]\n";
        for (std::size_t p = 1; p + 1 < all.size() + 1; p += 2) {
            s += "phi(" + all[p + 1] + "," + all[p] + ") = 1\n";
            s += "phi(" + all[p] + "," + all[p + 1] + ") = -1\n";
        }
        s += "xi = 1";
        for (std::size_t i = 0; i < fc.size(); ++i) s += ", 0";
        s += "\n\n[soliton]\n";
        // V = n xi
        s += std::string("V = ") + (n2 ? "2" : "1");
        for (std::size_t i = 0; i < fc.size(); ++i) s += ", 0";
        s += "\n";
        return s;
    }
    if (name == "flat_r3_rotation") {
        std::string s;
        s += "# flat R^3 with the (x,y) rotation; almost contact but not Kenmotsu\n";
        s += "[manifold]\n";
        s += "coordinates = x, y, z\n\n";
        s += "[metric]\n";
        s += "g(x,x) = 1\ng(x,y) = 0\ng(x,z) = 0\ng(y,y) = 1\ng(y,z) = 0\ng(z,z) = 1\n\n";
        s += "[structure]\n";
        s += "phi(y,x) = 1\n";
        s += "phi(x,y) = -1\n";
        s += "xi = 0, 0, 1\n";
        s += "eta = 0, 0, 1\n";
        return s;
    }
    throw ManifestError("unknown fixture: " + name +
                        " (available: m5_example, warped_flat_n1, warped_flat_n2, "
                        "flat_r3_rotation)");
}

inline BuiltManifold build_fixture(const std::string& name) {
    return build_manifold(Manifest::parse(fixture_manifest(name)));
}

} // namespace etaricci
