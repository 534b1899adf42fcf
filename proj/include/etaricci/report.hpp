#pragma once

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "etaricci/verdict.hpp"
#include "etaricci/version.hpp"

namespace etaricci {

/// FNV-1a 64-bit digest of the manifest text, rendered as 16 hex chars.
inline std::string manifest_digest(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

struct ReportSection {
    std::string title;
    std::vector<std::pair<std::string, std::string>> entries; // key, value
};

/// One command run: verdicts, named values, free-form sections, warnings.
/// Deterministic field order; timing is the single nondeterministic field.
struct RunReport {
    std::string command;
    std::string digest;
    std::vector<VerdictReport> checks;
    std::vector<ReportSection> sections;
    std::vector<std::string> warnings;
    long timing_ms = 0;

    bool all_checks_pass() const { return all_pass(checks); }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["tool"] = "etaricci";
        j["version"] = ETARICCI_VERSION;
        j["command"] = command;
        j["manifest_digest"] = digest;
        nlohmann::ordered_json checks_j = nlohmann::ordered_json::array();
        for (const VerdictReport& v : checks) {
            nlohmann::ordered_json c;
            c["name"] = v.name;
            c["status"] = v.pass ? "pass" : "fail";
            if (v.witness) {
                nlohmann::ordered_json w;
                w["indices"] = v.witness->index;
                w["value"] = v.witness->value;
                c["witness"] = w;
            }
            if (v.solved) {
                nlohmann::ordered_json sv;
                sv["lambda"] = v.solved->first.str();
                sv["mu"] = v.solved->second.str();
                c["solved"] = sv;
            }
            if (v.classification) c["classification"] = *v.classification;
            if (v.factor) c["factor"] = v.factor->str();
            if (!v.detail.empty()) c["detail"] = v.detail;
            checks_j.push_back(std::move(c));
        }
        j["checks"] = std::move(checks_j);
        nlohmann::ordered_json sections_j = nlohmann::ordered_json::array();
        for (const ReportSection& s : sections) {
            nlohmann::ordered_json sj;
            sj["title"] = s.title;
            nlohmann::ordered_json entries = nlohmann::ordered_json::array();
            for (const auto& [k, v] : s.entries) {
                nlohmann::ordered_json e;
                e["key"] = k;
                e["value"] = v;
                entries.push_back(std::move(e));
            }
            sj["entries"] = std::move(entries);
            sections_j.push_back(std::move(sj));
        }
        j["sections"] = std::move(sections_j);
        j["warnings"] = warnings;
        j["timing_ms"] = timing_ms;
        return j;
    }

    std::string to_text(bool color) const {
        const char* green = color ? "\033[32m" : "";
        const char* red = color ? "\033[31m" : "";
        const char* yellow = color ? "\033[33m" : "";
        const char* reset = color ? "\033[0m" : "";
        std::string out;
        out += "etaricci " + command + " (manifest " + digest + ")\n";
        for (const std::string& w : warnings)
            out += std::string(yellow) + "warning: " + w + reset + "\n";
        for (const ReportSection& s : sections) {
            out += "-- " + s.title + "\n";
            for (const auto& [k, v] : s.entries) out += "   " + k + " = " + v + "\n";
        }
        for (const VerdictReport& v : checks) {
            out += v.pass ? std::string(green) + "[pass]" + reset
                          : std::string(red) + "[fail]" + reset;
            out += " " + v.name;
            if (v.solved)
                out += "  lambda = " + v.solved->first.str() +
                       ", mu = " + v.solved->second.str();
            if (v.classification) out += "  (" + *v.classification + ")";
            if (v.factor) out += "  factor = " + v.factor->str();
            if (!v.pass && v.witness) out += "  witness " + v.witness->str();
            if (!v.detail.empty()) out += "  -- " + v.detail;
            out += "\n";
        }
        std::size_t passed = 0;
        for (const VerdictReport& v : checks)
            if (v.pass) ++passed;
        out += "result: " + std::to_string(passed) + "/" + std::to_string(checks.size()) +
               " checks passed\n";
        return out;
    }
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    long ms() const {
        return static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - start_)
                                     .count());
    }

private:
    std::chrono::steady_clock::time_point start_;
};

} // namespace etaricci
