#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "etaricci/workbench.hpp"

#include <unistd.h>

// etaricci - exact verification of almost contact metric structures,
// Kenmotsu geometry and eta-Ricci solitons from manifest files.

namespace {

bool use_color() {
    if (std::getenv("NO_COLOR") != nullptr) return false;
    return isatty(fileno(stdout)) != 0;
}

int emit(const etaricci::RunResult& res, const std::string& format) {
    if (format == "json")
        std::cout << res.report.to_json().dump(2) << "\n";
    else
        std::cout << res.report.to_text(use_color());
    return res.exit_code;
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const etaricci::ManifestError& e) {
        std::cerr << "manifest error: " << e.what() << "\n";
        return 2;
    } catch (const etaricci::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const etaricci::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const etaricci::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact checker for almost contact metric structures and eta-Ricci solitons"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ETARICCI_VERSION));

    std::string manifest_path;
    std::string format = "text";

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"text", "json"}))
            ->capture_default_str();
    };

    CLI::App* check = app.add_subcommand("check-structure",
                                         "verify the structure axioms of a manifest");
    check->add_option("manifest", manifest_path, "manifest file")->required();
    add_format(check);

    CLI::App* curv = app.add_subcommand("curvature",
                                        "connection, curvature and Ricci data");
    curv->add_option("manifest", manifest_path, "manifest file")->required();
    add_format(curv);

    CLI::App* sol = app.add_subcommand("soliton", "verify or solve the soliton equation");
    sol->add_option("manifest", manifest_path, "manifest file")->required();
    bool solve = false, verify = false;
    sol->add_flag("--solve", solve, "solve for the constants lambda, mu");
    sol->add_flag("--verify", verify, "verify with the manifest's lambda, mu");
    add_format(sol);

    CLI::App* orc = app.add_subcommand("oracle",
                                       "finite-difference cross-check of the curvature");
    orc->add_option("manifest", manifest_path, "manifest file")->required();
    std::size_t points = 5;
    double tol = 1e-6;
    orc->add_option("--points", points, "number of sample points")->capture_default_str();
    orc->add_option("--tol", tol, "maximum allowed relative deviation")
        ->capture_default_str();
    add_format(orc);

    CLI::App* fix = app.add_subcommand("fixtures", "list or dump the built-in fixtures");
    CLI::App* fix_list = fix->add_subcommand("list", "print the fixture names");
    CLI::App* fix_dump = fix->add_subcommand("dump", "print a fixture as a manifest");
    std::string fixture;
    fix_dump->add_option("name", fixture, "fixture name")->required();
    fix->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    if (check->parsed())
        return guarded([&] {
            return emit(etaricci::workbench::run_check_structure(
                            etaricci::Manifest::load(manifest_path)),
                        format);
        });
    if (curv->parsed())
        return guarded([&] {
            return emit(etaricci::workbench::run_curvature(
                            etaricci::Manifest::load(manifest_path)),
                        format);
        });
    if (sol->parsed()) {
        if (solve == verify) {
            std::cerr << "soliton: exactly one of --solve / --verify is required\n";
            return 2;
        }
        return guarded([&] {
            return emit(etaricci::workbench::run_soliton(
                            etaricci::Manifest::load(manifest_path), solve),
                        format);
        });
    }
    if (orc->parsed())
        return guarded([&] {
            return emit(etaricci::workbench::run_oracle(
                            etaricci::Manifest::load(manifest_path), points, tol),
                        format);
        });
    if (fix->parsed()) {
        if (fix_list->parsed()) {
            for (const std::string& n : etaricci::fixture_names()) std::cout << n << "\n";
            return 0;
        }
        if (fix_dump->parsed())
            return guarded([&] {
                std::cout << etaricci::fixture_manifest(fixture);
                return 0;
            });
    }
    return 2;
}
