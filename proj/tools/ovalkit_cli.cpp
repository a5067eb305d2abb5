#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ovalkit/scene.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 all tasks pass, 2 scene/schema error, 3 geometric degeneracy,
// 4 validation threshold exceeded.
enum ExitCode { kOk = 0, kSceneError = 2, kDegenerate = 3, kValidationFailed = 4 };

void print_summary(const ovalkit::ValidationSummary& summary) {
    for (const auto& c : summary.checks) {
        std::printf("[%s] %-28s measured %.3e  threshold %.3e", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.measured, c.threshold);
        if (!c.counts.empty()) {
            std::printf("  (");
            bool first = true;
            for (const auto& [k, v] : c.counts) {
                std::printf("%s%s=%zu", first ? "" : " ", k.c_str(), v);
                first = false;
            }
            std::printf(")");
        }
        std::printf("\n");
        if (!c.note.empty()) std::printf("       %s\n", c.note.c_str());
    }
}

int run_one(const std::string& scene_path, const std::string& out_dir,
            const std::optional<ovalkit::Task>& only, bool artifacts) {
    ovalkit::Scene scene = ovalkit::load_scene(scene_path);
    ovalkit::RunResult result = ovalkit::run_scene(scene, out_dir, only, artifacts);
    print_summary(result.summary);
    if (artifacts)
        for (const auto& name : result.artifacts) std::printf("wrote %s/%s\n", out_dir.c_str(), name.c_str());
    return result.summary.pass() ? kOk : kValidationFailed;
}

int seed_figures(const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    int rc = kOk;
    for (const auto& [name, json] : ovalkit::builtin_figure_scenes()) {
        std::string scene_path = out_dir + "/" + name + ".json";
        std::ofstream(scene_path, std::ios::binary) << json;
        std::printf("== %s ==\n", name.c_str());
        int one = run_one(scene_path, out_dir + "/" + name, std::nullopt, true);
        rc = std::max(rc, one);
    }
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Refracting-profile construction toolkit: envelopes of Cartesian ovals\n"
                 "with Snell/Fermat cross-validation and SVG/CSV output"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(0, 1);

    std::string scene_path, out_dir = "out", only_name;
    bool seed = false;

    auto* run = app.add_subcommand("run", "Run a scene's tasks and write artifacts");
    run->add_option("scene", scene_path, "Scene file (JSON)");
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();
    run->add_option("--only", only_name, "Run a single task (ovals|profile|caustic|reconstruct|validate|render)");
    run->add_flag("--seed-figures", seed, "Write the built-in figure scenes into --out and run them");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Run validation checks only, no artifacts");
    validate->add_option("scene", validate_path, "Scene file (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (!seed && scene_path.empty())
                throw ovalkit::SchemaError("run needs a scene file or --seed-figures");
            int rc = kOk;
            if (seed) rc = std::max(rc, seed_figures(out_dir));
            if (!scene_path.empty()) {
                std::optional<ovalkit::Task> only;
                if (!only_name.empty()) only = ovalkit::parse_task(only_name);
                rc = std::max(rc, run_one(scene_path, out_dir, only, true));
            }
            return rc;
        }
        if (validate->parsed()) return run_one(validate_path, "", std::nullopt, false);
        std::cout << app.help();
        return kOk;
    } catch (const ovalkit::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kSceneError;
    } catch (const ovalkit::SchemaError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kSceneError;
    } catch (const ovalkit::DegenerateCausticError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kDegenerate;
    } catch (const ovalkit::FlatPointError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kDegenerate;
    } catch (const ovalkit::EmptyProfileError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kDegenerate;
    } catch (const ovalkit::GeometryMismatchError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kDegenerate;
    } catch (const ovalkit::IndicesEqualError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kDegenerate;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kDegenerate;
    }
}
