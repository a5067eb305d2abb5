#pragma once

#include <map>
#include <set>
#include <string>

#include "ovalkit/caustic.hpp"
#include "ovalkit/optics.hpp"

namespace ovalkit {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

enum class Task { Ovals, Profile, Caustic, Reconstruct, Validate, Render };

const char* task_name(Task t);
Task parse_task(const std::string& name);

struct Tolerances {
    double membership{1e-9};           // relative to 1 + 2a
    double theorem3_deviation{1e-6};   // radians
    double path_spread{1e-8};          // relative to 2a
    double theorem45_deviation{1e-6};  // radians
    double do_nothing_deviation{1e-6};
    double hausdorff{1e-6};            // relative to scene diameter
    double collinearity{1e-9};
    double singular{1e-8};
    double flat_curvature{1e-9};
};

struct RenderOptions {
    std::map<std::string, std::string> colors;  // layer -> stroke color
    bool revolution{false};
    int revolution_copies{6};
};

struct Sampling {
    std::size_t wavefront_samples{512};
    std::size_t oval_points{360};
    std::size_t oval_count{5};
};

struct Scene {
    int version{1};
    Media media{};
    Vec2 source_offset{};  // original F; curve already translated so F = origin
    Curve wavefront;
    std::vector<double> a_values{1.0};
    WavefrontRegion region{WavefrontRegion::Convex};
    Sampling sampling{};
    Tolerances tolerances{};
    RenderOptions render{};
    std::set<Task> tasks{Task::Profile, Task::Render};
};

Scene load_scene(const std::string& path);
Scene parse_scene(const std::string& json_text);

struct CheckResult {
    std::string name;
    double measured{0.0};
    double threshold{0.0};
    bool pass{true};
    std::map<std::string, std::size_t> counts;
    std::string note;
};

struct ValidationSummary {
    std::vector<CheckResult> checks;
    bool pass() const;
    std::string to_json() const;
};

struct RunResult {
    ValidationSummary summary;
    std::vector<std::string> artifacts;  // file names written under out_dir
};

/// Execute the scene's tasks, writing CSV/SVG artifacts into out_dir (created
/// if missing). `only` restricts execution to a single task. With
/// write_artifacts=false nothing is written (the `validate` subcommand).
RunResult run_scene(const Scene& scene, const std::string& out_dir,
                    const std::optional<Task>& only = std::nullopt, bool write_artifacts = true);

/// One profile-CSV row; columns t, x.x, x.y, lambda, y.x, y.y, branch,
/// residual, singular_flag in full precision.
struct ProfileCsvRow {
    double t;
    Vec2 x;
    double lambda;
    Vec2 y;
    Branch branch;
    double residual;
    bool singular;
};

void write_profile_csv(const std::string& path, const Sheet& sheet);
std::vector<ProfileCsvRow> read_profile_csv(const std::string& path);

/// Ready-made demonstration scenes (name, JSON text), one per gallery figure.
std::vector<std::pair<std::string, std::string>> builtin_figure_scenes();

}  // namespace ovalkit
