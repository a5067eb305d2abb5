#include "ovalkit/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ovalkit/svg.hpp"

namespace ovalkit {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const char* task_name(Task t) {
    switch (t) {
        case Task::Ovals: return "ovals";
        case Task::Profile: return "profile";
        case Task::Caustic: return "caustic";
        case Task::Reconstruct: return "reconstruct";
        case Task::Validate: return "validate";
        case Task::Render: return "render";
    }
    return "?";
}

Task parse_task(const std::string& name) {
    for (Task t : {Task::Ovals, Task::Profile, Task::Caustic, Task::Reconstruct, Task::Validate,
                   Task::Render})
        if (name == task_name(t)) return t;
    throw SchemaError("unknown task '" + name + "'");
}

namespace {

std::string fmt_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Vec2 parse_vec2(const ordered_json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SchemaError(field + " must be a [x, y] number pair");
    return Vec2{j[0].get<double>(), j[1].get<double>()};
}

Curve parse_wavefront(const ordered_json& j) {
    if (!j.is_object()) throw SchemaError("wavefront must be an object");
    std::string kind = j.value("kind", std::string{});
    Orientation orient = Orientation::Default;
    if (j.contains("orientation")) {
        std::string o = j["orientation"].get<std::string>();
        if (o == "default")
            orient = Orientation::Default;
        else if (o == "flipped")
            orient = Orientation::Flipped;
        else
            throw SchemaError("wavefront.orientation must be 'default' or 'flipped'");
    }
    double t0 = -1.0, t1 = 1.0;
    if (j.contains("t_range")) {
        auto r = parse_vec2(j["t_range"], "wavefront.t_range");
        t0 = r.x;
        t1 = r.y;
        if (!(t1 > t0)) throw SchemaError("wavefront.t_range must be increasing");
    }
    Transform tf;
    tf.angle = j.value("angle", 0.0);
    if (j.contains("position")) tf.translate = parse_vec2(j["position"], "wavefront.position");

    if (kind == "circle") {
        Vec2 center = j.contains("center") ? parse_vec2(j["center"], "wavefront.center") : Vec2{0.0, 3.0};
        double radius = j.value("radius", 2.0);
        if (!(radius > 0.0)) throw SchemaError("wavefront.radius must be positive");
        Curve c = make_circle(center, radius, orient);
        if (j.contains("t_range")) {
            c.t_min = t0;
            c.t_max = t1;
        }
        return c;
    }
    if (kind == "parabola") {
        double scale = j.value("focal_scale", 1.0);
        if (!j.contains("position")) tf.translate = Vec2{0.0, 1.0};
        return make_parabola(scale, tf, t0, t1, orient);
    }
    if (kind == "ellipse") {
        Vec2 semi = j.contains("semi_axes") ? parse_vec2(j["semi_axes"], "wavefront.semi_axes")
                                            : Vec2{1.5, 1.0};
        if (!j.contains("position")) tf.translate = Vec2{0.0, 2.5};
        if (!j.contains("t_range")) {
            t0 = -3.14159265358979323846;
            t1 = 3.14159265358979323846;
        }
        return make_ellipse(semi.x, semi.y, tf, t0, t1, orient);
    }
    if (kind == "spline") {
        if (!j.contains("points") || !j["points"].is_array() || j["points"].size() < 2)
            throw SchemaError("wavefront.points must list at least two [x, y] pairs");
        std::vector<Vec2> pts;
        for (const auto& p : j["points"]) pts.push_back(parse_vec2(p, "wavefront.points[]"));
        return make_spline(std::move(pts), orient);
    }
    throw SchemaError("wavefront.kind must be one of circle, parabola, ellipse, spline");
}

std::string default_color(const std::string& layer) {
    if (layer == "wavefront") return "#1f77b4";
    if (layer == "ovals") return "#b0b0b0";
    if (layer == "sheets_interior") return "#d62728";
    if (layer == "sheets_exterior") return "#2ca02c";
    if (layer == "caustic") return "#9467bd";
    if (layer == "rays") return "#ff7f0e";
    if (layer == "reconstruction") return "#17becf";
    if (layer == "markers") return "#000000";
    return "#333333";
}

struct SceneContext {
    const Scene& scene;
    std::string out_dir;
    bool write;
    RunResult* result;
    SvgWriter composite;
    std::vector<Vec2> wavefront_polyline;

    std::string color(const std::string& layer) const {
        auto it = scene.render.colors.find(layer);
        return it != scene.render.colors.end() ? it->second : default_color(layer);
    }
};

void add_artifact(SceneContext& ctx, const std::string& name) { ctx.result->artifacts.push_back(name); }

void save_svg(SceneContext& ctx, SvgWriter& w, const std::string& name) {
    if (!ctx.write) return;
    w.save(ctx.out_dir + "/" + name);
    add_artifact(ctx, name);
}

void draw_base(const SceneContext& ctx, SvgWriter& w) {
    w.begin_layer("wavefront");
    w.polyline(ctx.wavefront_polyline, {ctx.color("wavefront"), 1.6, ""});
    w.begin_layer("source");
    w.dot_marker(Vec2{0.0, 0.0}, "#000000", 3.5);
    w.text(Vec2{0.0, 0.0}, "F", "#000000");
}

void draw_sheets(SceneContext& ctx, SvgWriter& w, const Profile& profile, const std::string& layer_prefix,
                 bool dashed) {
    w.begin_layer(layer_prefix);
    for (const Sheet& sheet : profile.sheets) {
        std::string color =
            ctx.color(sheet.key.branch == Branch::Interior ? "sheets_interior" : "sheets_exterior");
        if (layer_prefix == "reconstruction") color = ctx.color("reconstruction");
        // break paths at recorded gaps
        std::vector<Vec2> run;
        std::size_t gap_idx = 0;
        for (std::size_t i = 0; i < sheet.points.size(); ++i) {
            if (gap_idx < sheet.gaps.size() && i > 0 &&
                sheet.points[i - 1].sample.t <= sheet.gaps[gap_idx].t_before &&
                sheet.points[i].sample.t >= sheet.gaps[gap_idx].t_after) {
                w.polyline(run, {color, 1.2, dashed ? "5,3" : ""});
                run.clear();
                ++gap_idx;
            }
            run.push_back(sheet.points[i].y);
        }
        w.polyline(run, {color, 1.2, dashed ? "5,3" : ""});
    }
    w.begin_layer(layer_prefix + "_markers");
    for (const Sheet& sheet : profile.sheets)
        for (std::size_t idx : sheet.singular)
            w.cross_marker(sheet.points[idx].y, ctx.color("markers"));
}

void write_check(SceneContext& ctx, CheckResult r) { ctx.result->summary.checks.push_back(std::move(r)); }

std::map<std::string, std::size_t> count_map(const RefractionCounts& c) {
    return {{"eligible", c.eligible},
            {"tir", c.tir},
            {"singular_excluded", c.singular_excluded},
            {"edge_excluded", c.edge_excluded},
            {"filtered", c.filtered}};
}

double scene_diameter(const SceneContext& ctx, const Profile& profile) {
    Vec2 lo{0.0, 0.0}, hi{0.0, 0.0};
    auto grow = [&](const Vec2& p) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    };
    for (const Vec2& p : ctx.wavefront_polyline) grow(p);
    for (const Sheet& s : profile.sheets)
        for (const SheetPoint& p : s.points) grow(p.y);
    return (hi - lo).norm();
}

void task_ovals(SceneContext& ctx) {
    const Scene& sc = ctx.scene;
    SvgWriter w;
    draw_base(ctx, w);
    w.begin_layer("ovals");
    ctx.composite.begin_layer("ovals");

    std::ostringstream csv;
    csv << "t,branch,p.x,p.y,residual\n";
    auto grid = uniform_grid(sc.wavefront.t_min, sc.wavefront.t_max,
                             std::max<std::size_t>(sc.sampling.oval_count, 1));
    double a = sc.a_values.front();
    for (double t : grid) {
        WavefrontSample s = sample_wavefront(sc.wavefront, t);
        OvalSpec spec{s.point, sc.media, a};
        for (Branch b : {Branch::Interior, Branch::Exterior}) {
            std::vector<Vec2> poly;
            try {
                poly = oval_polyline(spec, b, sc.sampling.oval_points, sc.tolerances.membership);
            } catch (const std::domain_error&) {
                continue;  // branch empty for this focus
            }
            std::vector<Vec2> closed = poly;
            closed.push_back(poly.front());
            w.polyline(closed, {ctx.color("ovals"), 0.8, b == Branch::Exterior ? "3,3" : ""});
            ctx.composite.polyline(closed, {ctx.color("ovals"), 0.8, b == Branch::Exterior ? "3,3" : ""});
            for (const Vec2& p : poly)
                csv << fmt_full(t) << "," << branch_name(b) << "," << fmt_full(p.x) << ","
                    << fmt_full(p.y) << "," << fmt_full(bipolar_residual(p, spec, b)) << "\n";
        }
    }
    if (ctx.write) {
        std::ofstream f(ctx.out_dir + "/ovals.csv", std::ios::binary);
        f << csv.str();
        add_artifact(ctx, "ovals.csv");
    }
    save_svg(ctx, w, "ovals.svg");
}

void task_profile(SceneContext& ctx) {
    const Scene& sc = ctx.scene;
    SvgWriter w;
    draw_base(ctx, w);

    double max_res = 0.0;
    std::size_t gap_count = 0;
    for (std::size_t ai = 0; ai < sc.a_values.size(); ++ai) {
        double a = sc.a_values[ai];
        Profile profile = build_profile(sc.wavefront, sc.media, a,
                                        {sc.sampling.wavefront_samples, sc.tolerances.singular});
        draw_sheets(ctx, w, profile, "sheets_a" + std::to_string(ai), false);
        draw_sheets(ctx, ctx.composite, profile, "sheets_a" + std::to_string(ai), false);
        for (const Sheet& sheet : profile.sheets) {
            for (const SheetPoint& p : sheet.points)
                max_res = std::max(max_res, std::abs(p.residual) / (1.0 + 2.0 * a));
            gap_count += sheet.gaps.size();
            if (ctx.write) {
                std::string name =
                    "profile_a" + std::to_string(ai) + "_" + sheet_key_name(sheet.key) + ".csv";
                write_profile_csv(ctx.out_dir + "/" + name, sheet);
                add_artifact(ctx, name);
            }
        }
    }
    save_svg(ctx, w, "profile.svg");

    CheckResult r;
    r.name = "membership_residuals";
    r.measured = max_res;
    r.threshold = ctx.scene.tolerances.membership;
    r.pass = max_res <= r.threshold;
    r.counts["gaps"] = gap_count;
    write_check(ctx, std::move(r));
}

void task_caustic(SceneContext& ctx) {
    const Scene& sc = ctx.scene;
    SvgWriter w;
    draw_base(ctx, w);
    CausticCurve cc = caustic_curve(sc.wavefront, {sc.sampling.wavefront_samples, sc.tolerances.singular},
                                    sc.tolerances.flat_curvature);
    w.begin_layer("caustic");
    ctx.composite.begin_layer("caustic");
    std::vector<Vec2> poly;
    for (const auto& cp : cc.points) poly.push_back(cp.c);
    w.polyline(poly, {ctx.color("caustic"), 1.4, ""});
    ctx.composite.polyline(poly, {ctx.color("caustic"), 1.4, ""});

    // Sweep overlay: singular points of the a-list profiles land on the caustic.
    w.begin_layer("caustic_markers");
    ctx.composite.begin_layer("caustic_markers");
    for (double a : sc.a_values) {
        try {
            Profile p =
                build_profile(sc.wavefront, sc.media, a, {sc.sampling.wavefront_samples, 1e-3});
            for (const Sheet& sheet : p.sheets)
                for (std::size_t idx : sheet.singular) {
                    w.cross_marker(sheet.points[idx].y, ctx.color("markers"));
                    ctx.composite.cross_marker(sheet.points[idx].y, ctx.color("markers"));
                }
        } catch (const EmptyProfileError&) {
            continue;
        }
    }

    if (ctx.write) {
        std::ostringstream csv;
        csv << "t,c.x,c.y,rho\n";
        for (const auto& cp : cc.points)
            csv << fmt_full(cp.source.t) << "," << fmt_full(cp.c.x) << "," << fmt_full(cp.c.y) << ","
                << fmt_full(cp.rho) << "\n";
        std::ofstream f(ctx.out_dir + "/caustic.csv", std::ios::binary);
        f << csv.str();
        add_artifact(ctx, "caustic.csv");
    }
    save_svg(ctx, w, "caustic.svg");

    CheckResult r;
    r.name = "caustic_points";
    r.measured = static_cast<double>(cc.points.size());
    r.threshold = 0.0;
    r.pass = true;
    r.counts["flat_gaps"] = cc.gaps.size();
    write_check(ctx, std::move(r));
}

double one_sided_hausdorff(const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
    double worst = 0.0;
    for (const Vec2& p : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec2& q : to) best = std::min(best, distance(p, q));
        worst = std::max(worst, best);
    }
    return worst;
}

void task_reconstruct(SceneContext& ctx) {
    const Scene& sc = ctx.scene;
    double a = sc.a_values.front();
    Profile direct = build_profile(sc.wavefront, sc.media, a,
                                   {sc.sampling.wavefront_samples, sc.tolerances.singular});
    CausticCurve cc = caustic_curve(sc.wavefront, {sc.sampling.wavefront_samples, sc.tolerances.singular},
                                    sc.tolerances.flat_curvature);
    ReconstructionLog log;
    Profile recon = profile_from_caustic(cc.points, sc.media, a, sc.region, &log);

    SvgWriter w;
    draw_base(ctx, w);
    draw_sheets(ctx, w, direct, "sheets_a0", false);
    draw_sheets(ctx, w, recon, "reconstruction", true);
    draw_sheets(ctx, ctx.composite, recon, "reconstruction", true);
    save_svg(ctx, w, "reconstruction.svg");

    double diameter = scene_diameter(ctx, direct);
    double worst_forward = 0.0, worst_reverse = 0.0;
    std::size_t matched = 0, unmatched = 0;
    for (const Sheet& ds : direct.sheets) {
        const Sheet* rs = recon.find(ds.key.branch, ds.key.side, ds.key.ordinal);
        if (!rs || rs->points.empty()) {
            ++unmatched;
            continue;
        }
        ++matched;
        std::vector<Vec2> from, to;
        for (const auto& p : ds.points) from.push_back(p.y);
        for (const auto& p : rs->points) to.push_back(p.y);
        worst_forward = std::max(worst_forward, one_sided_hausdorff(from, to));
        worst_reverse = std::max(worst_reverse, one_sided_hausdorff(to, from));
    }

    double worst_collinearity = 0.0;
    for (const Sheet& rs : recon.sheets)
        for (const SheetPoint& p : rs.points) {
            Vec2 c = normal_offset(p.sample, 1.0 / p.sample.curvature);
            double denom = (p.y - p.sample.point).norm() * (c - p.sample.point).norm();
            if (denom > 0.0)
                worst_collinearity = std::max(
                    worst_collinearity, std::abs((p.y - p.sample.point).cross(c - p.sample.point)) / denom);
        }

    if (ctx.write) {
        for (const Sheet& sheet : recon.sheets) {
            std::string name = "reconstruction_" + sheet_key_name(sheet.key) + ".csv";
            write_profile_csv(ctx.out_dir + "/" + name, sheet);
            add_artifact(ctx, name);
        }
    }

    CheckResult rh;
    rh.name = "reconstruction_hausdorff";
    rh.measured = worst_forward;
    rh.threshold = ctx.scene.tolerances.hausdorff * diameter;
    rh.pass = worst_forward <= rh.threshold;
    rh.counts = {{"matched_sheets", matched},
                 {"unmatched_sheets", unmatched},
                 {"empty_family_points", log.empty_family_points},
                 {"convex_inequality_violations", log.convex_inequality_violations}};
    rh.note = "reverse distance " + fmt_full(worst_reverse) + " (reported, not asserted)";
    write_check(ctx, std::move(rh));

    CheckResult rc;
    rc.name = "reconstruction_collinearity";
    rc.measured = worst_collinearity;
    rc.threshold = ctx.scene.tolerances.collinearity;
    rc.pass = worst_collinearity <= rc.threshold;
    write_check(ctx, std::move(rc));
}

void task_validate(SceneContext& ctx) {
    const Scene& sc = ctx.scene;
    double a = sc.a_values.front();
    Profile profile = build_profile(sc.wavefront, sc.media, a,
                                    {sc.sampling.wavefront_samples, sc.tolerances.singular});

    auto t3 = check_refraction_theorem(profile, sc.wavefront, sc.media);
    CheckResult r3;
    r3.name = "theorem_refraction";
    r3.measured = t3.max_deviation;
    r3.threshold = sc.tolerances.theorem3_deviation;
    r3.pass = t3.max_deviation <= r3.threshold && t3.counts.eligible > 0;
    r3.counts = count_map(t3.counts);
    write_check(ctx, std::move(r3));

    CheckResult rf;
    rf.name = "fermat_path_spread";
    rf.measured = t3.path_spread;
    rf.threshold = sc.tolerances.path_spread * 2.0 * a;
    rf.pass = t3.path_spread <= rf.threshold;
    write_check(ctx, std::move(rf));

    Media swapped{sc.media.n2, sc.media.n1};
    auto t45 = check_virtual_source(profile, sc.wavefront, swapped);
    CheckResult r45;
    r45.name = "theorem_virtual_source";
    r45.measured = t45.max_deviation;
    r45.threshold = sc.tolerances.theorem45_deviation;
    r45.pass = t45.max_deviation <= r45.threshold && t45.counts.eligible > 0;
    r45.counts = count_map(t45.counts);
    write_check(ctx, std::move(r45));

    auto dn = check_do_nothing(profile, profile, sc.wavefront, sc.media);
    CheckResult rd;
    rd.name = "do_nothing";
    rd.measured = dn.max_deviation;
    rd.threshold = sc.tolerances.do_nothing_deviation;
    rd.pass = dn.max_deviation <= rd.threshold && dn.counts.eligible > 0;
    rd.counts = count_map(dn.counts);
    write_check(ctx, std::move(rd));

    if (ctx.write) {
        SvgWriter w;
        draw_base(ctx, w);
        draw_sheets(ctx, w, profile, "sheets_a0", false);
        w.begin_layer("rays");
        ctx.composite.begin_layer("rays");
        std::size_t step = std::max<std::size_t>(1, dn.records.size() / 12);
        for (std::size_t i = 0; i < dn.records.size(); i += step) {
            if (dn.records[i].tir) continue;
            std::vector<Vec2> ray{Vec2{0.0, 0.0}, dn.records[i].y};
            w.polyline(ray, {ctx.color("rays"), 0.7, ""});
            ctx.composite.polyline(ray, {ctx.color("rays"), 0.7, ""});
        }
        save_svg(ctx, w, "validate.svg");
    }
}

}  // namespace

bool ValidationSummary::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string ValidationSummary::to_json() const {
    ordered_json j;
    j["pass"] = pass();
    j["checks"] = ordered_json::array();
    for (const auto& c : checks) {
        ordered_json e;
        e["name"] = c.name;
        e["measured"] = c.measured;
        e["threshold"] = c.threshold;
        e["pass"] = c.pass;
        if (!c.counts.empty()) e["counts"] = c.counts;
        if (!c.note.empty()) e["note"] = c.note;
        j["checks"].push_back(e);
    }
    return j.dump(2) + "\n";
}

Scene parse_scene(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("scene parse error: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("scene must be a JSON object");

    Scene sc;
    sc.version = j.value("version", 1);
    if (sc.version != 1) throw SchemaError("unsupported scene version " + std::to_string(sc.version));

    std::vector<std::string> violations;
    if (j.contains("media")) {
        sc.media.n1 = j["media"].value("n1", 1.0);
        sc.media.n2 = j["media"].value("n2", 1.5);
    }
    if (!(sc.media.n1 > 0.0)) violations.push_back("media.n1 must be positive");
    if (!(sc.media.n2 > 0.0)) violations.push_back("media.n2 must be positive");

    if (!j.contains("wavefront")) violations.push_back("wavefront is required");

    if (j.contains("a")) {
        sc.a_values.clear();
        if (j["a"].is_number()) {
            sc.a_values.push_back(j["a"].get<double>());
        } else if (j["a"].is_array()) {
            for (const auto& v : j["a"]) sc.a_values.push_back(v.get<double>());
        } else {
            violations.push_back("a must be a number or an array of numbers");
        }
    }
    if (sc.a_values.empty()) violations.push_back("a must list at least one value");
    for (double a : sc.a_values)
        if (!(a >= 0.0)) violations.push_back("a values must be nonnegative");

    if (j.contains("region")) {
        std::string r = j["region"].get<std::string>();
        if (r == "convex")
            sc.region = WavefrontRegion::Convex;
        else if (r == "concave")
            sc.region = WavefrontRegion::Concave;
        else
            violations.push_back("region must be 'convex' or 'concave'");
    }

    if (j.contains("sampling")) {
        const auto& s = j["sampling"];
        sc.sampling.wavefront_samples = s.value("wavefront_samples", sc.sampling.wavefront_samples);
        sc.sampling.oval_points = s.value("oval_points", sc.sampling.oval_points);
        sc.sampling.oval_count = s.value("oval_count", sc.sampling.oval_count);
        if (sc.sampling.wavefront_samples < 16) violations.push_back("sampling.wavefront_samples must be >= 16");
        if (sc.sampling.oval_points < 16) violations.push_back("sampling.oval_points must be >= 16");
    }

    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        auto& tol = sc.tolerances;
        tol.membership = t.value("membership", tol.membership);
        tol.theorem3_deviation = t.value("theorem3_deviation", tol.theorem3_deviation);
        tol.path_spread = t.value("path_spread", tol.path_spread);
        tol.theorem45_deviation = t.value("theorem45_deviation", tol.theorem45_deviation);
        tol.do_nothing_deviation = t.value("do_nothing_deviation", tol.do_nothing_deviation);
        tol.hausdorff = t.value("hausdorff", tol.hausdorff);
        tol.collinearity = t.value("collinearity", tol.collinearity);
        tol.singular = t.value("singular", tol.singular);
        tol.flat_curvature = t.value("flat_curvature", tol.flat_curvature);
    }

    if (j.contains("tasks")) {
        sc.tasks.clear();
        for (const auto& t : j["tasks"]) sc.tasks.insert(parse_task(t.get<std::string>()));
        if (sc.tasks.empty()) violations.push_back("tasks must not be empty");
    }

    if (j.contains("render")) {
        const auto& r = j["render"];
        if (r.contains("colors"))
            for (const auto& [layer, color] : r["colors"].items())
                sc.render.colors[layer] = color.get<std::string>();
        sc.render.revolution = r.value("revolution", false);
        sc.render.revolution_copies = r.value("revolution_copies", 6);
    }

    bool needs_distinct = sc.tasks.count(Task::Profile) || sc.tasks.count(Task::Reconstruct) ||
                          sc.tasks.count(Task::Validate) || sc.tasks.count(Task::Ovals);
    if (needs_distinct && sc.media.n1 == sc.media.n2)
        violations.push_back("media.n1 must differ from media.n2 for oval/profile construction");

    if (!violations.empty()) {
        std::string what = "scene schema violations:";
        for (const auto& v : violations) what += "\n  - " + v;
        throw SchemaError(what);
    }

    Curve curve = parse_wavefront(j["wavefront"]);
    if (j.contains("source") && j["source"].contains("position"))
        sc.source_offset = parse_vec2(j["source"]["position"], "source.position");
    // All computation happens with F at the origin.
    sc.wavefront = translated(curve, -sc.source_offset);
    return sc;
}

Scene load_scene(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open scene file: " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_scene(buf.str());
}

RunResult run_scene(const Scene& scene, const std::string& out_dir, const std::optional<Task>& only,
                    bool write_artifacts) {
    RunResult result;
    if (write_artifacts) fs::create_directories(out_dir);

    SceneContext ctx{scene, out_dir, write_artifacts, &result, {}, {}};
    auto grid = uniform_grid(scene.wavefront.t_min, scene.wavefront.t_max,
                             std::max<std::size_t>(scene.sampling.wavefront_samples, 2));
    for (double t : grid) ctx.wavefront_polyline.push_back(sample_wavefront(scene.wavefront, t).point);
    draw_base(ctx, ctx.composite);

    auto enabled = [&](Task t) {
        if (only) return *only == t;
        return scene.tasks.count(t) > 0;
    };

    if (enabled(Task::Ovals)) task_ovals(ctx);
    if (enabled(Task::Profile)) task_profile(ctx);
    if (enabled(Task::Caustic)) task_caustic(ctx);
    if (enabled(Task::Reconstruct)) task_reconstruct(ctx);
    if (enabled(Task::Validate)) task_validate(ctx);
    if (enabled(Task::Render)) {
        if (scene.render.revolution) {
            // Illustration only: revolve the first profile about the F-x axis
            // (the ray from F through the mid-t wavefront point) and project.
            Vec2 mid = sample_wavefront(scene.wavefront,
                                        0.5 * (scene.wavefront.t_min + scene.wavefront.t_max))
                           .point;
            if (mid.norm() > 1e-12) {
                Vec2 axis = mid.normalized();
                Vec2 perp = axis.perp_cw();
                Profile p = build_profile(scene.wavefront, scene.media, scene.a_values.front(),
                                          {scene.sampling.wavefront_samples, scene.tolerances.singular});
                ctx.composite.begin_layer("revolution");
                int copies = std::max(1, scene.render.revolution_copies);
                for (int k = 1; k < copies; ++k) {
                    double c = std::cos(3.14159265358979323846 * k / copies);
                    for (const Sheet& sheet : p.sheets) {
                        std::vector<Vec2> poly;
                        for (const SheetPoint& sp : sheet.points) {
                            double u = sp.y.dot(axis), v = sp.y.dot(perp);
                            poly.push_back(u * axis + (v * c) * perp);
                        }
                        ctx.composite.polyline(poly, {"#d0d0d0", 0.6, "2,3"});
                    }
                }
            }
        }
        save_svg(ctx, ctx.composite, "scene.svg");
    }

    if (write_artifacts) {
        std::ofstream f(out_dir + "/validation.json", std::ios::binary);
        f << result.summary.to_json();
        result.artifacts.push_back("validation.json");
    }
    return result;
}

void write_profile_csv(const std::string& path, const Sheet& sheet) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write CSV file: " + path);
    f << "t,x.x,x.y,lambda,y.x,y.y,branch,residual,singular_flag\n";
    std::vector<bool> singular(sheet.points.size(), false);
    for (std::size_t idx : sheet.singular) singular[idx] = true;
    for (std::size_t i = 0; i < sheet.points.size(); ++i) {
        const SheetPoint& p = sheet.points[i];
        f << fmt_full(p.sample.t) << "," << fmt_full(p.sample.point.x) << ","
          << fmt_full(p.sample.point.y) << "," << fmt_full(p.lambda) << "," << fmt_full(p.y.x) << ","
          << fmt_full(p.y.y) << "," << branch_name(p.branch) << "," << fmt_full(p.residual) << ","
          << (singular[i] ? 1 : 0) << "\n";
    }
}

std::vector<std::pair<std::string, std::string>> builtin_figure_scenes() {
    return {
        {"fig1", R"({
  "version": 1,
  "media": {"n1": 1.0, "n2": 1.5},
  "wavefront": {"kind": "parabola", "position": [0, 1], "t_range": [-0.5, 0.5]},
  "a": [1.0],
  "sampling": {"wavefront_samples": 512, "oval_count": 7, "oval_points": 256},
  "tasks": ["ovals", "profile", "render"]
})"},
        {"fig2", R"({
  "version": 1,
  "media": {"n1": 1.0, "n2": 1.5},
  "wavefront": {"kind": "circle", "center": [0, 3], "radius": 2, "t_range": [-2.2, -0.9]},
  "a": [2.2],
  "sampling": {"wavefront_samples": 512, "oval_count": 1, "oval_points": 512},
  "tasks": ["ovals", "profile", "render"]
})"},
        {"fig3", R"({
  "version": 1,
  "media": {"n1": 1.0, "n2": 1.5},
  "wavefront": {"kind": "parabola", "position": [0, -1.5], "t_range": [-0.8, 0.8], "orientation": "flipped"},
  "a": [0.8, 1.0, 1.2, 1.4],
  "sampling": {"wavefront_samples": 2048},
  "tasks": ["profile", "caustic", "render"]
})"},
        {"fig4a", R"({
  "version": 1,
  "media": {"n1": 1.0, "n2": 1.5},
  "wavefront": {"kind": "parabola", "position": [0, 1.6], "t_range": [-0.4, 0.4]},
  "a": [1.0],
  "sampling": {"wavefront_samples": 1024},
  "tasks": ["profile", "validate", "render"]
})"},
        {"fig4b", R"({
  "version": 1,
  "media": {"n1": 1.0, "n2": 1.5},
  "wavefront": {"kind": "parabola", "position": [0, 1], "t_range": [-0.5, 0.5]},
  "a": [1.0],
  "sampling": {"wavefront_samples": 1024},
  "tasks": ["profile", "validate", "render"]
})"},
        {"fig5", R"({
  "version": 1,
  "media": {"n1": 1.0, "n2": 1.5},
  "wavefront": {"kind": "parabola", "position": [0, 1], "t_range": [-0.5, 0.5]},
  "a": [0.65],
  "region": "convex",
  "sampling": {"wavefront_samples": 1024},
  "tasks": ["profile", "caustic", "reconstruct", "render"]
})"},
    };
}

std::vector<ProfileCsvRow> read_profile_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read CSV file: " + path);
    std::string line;
    std::getline(f, line);  // header
    std::vector<ProfileCsvRow> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 9) throw std::runtime_error("malformed CSV row: " + line);
        ProfileCsvRow row;
        row.t = std::stod(fields[0]);
        row.x = {std::stod(fields[1]), std::stod(fields[2])};
        row.lambda = std::stod(fields[3]);
        row.y = {std::stod(fields[4]), std::stod(fields[5])};
        row.branch = fields[6] == "interior" ? Branch::Interior : Branch::Exterior;
        row.residual = std::stod(fields[7]);
        row.singular = fields[8] == "1";
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ovalkit
