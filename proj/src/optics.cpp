#include "ovalkit/optics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ovalkit {

std::optional<Vec2> refract(const Vec2& dir, const Vec2& normal, double n_from, double n_to) {
    if (!(n_from > 0.0) || !(n_to > 0.0)) throw std::invalid_argument("refractive indices must be positive");
    Vec2 m = dir.dot(normal) > 0.0 ? -normal : normal;  // face the incoming ray
    double ci = -dir.dot(m);
    double eta = n_from / n_to;
    double s2t = eta * eta * std::max(0.0, 1.0 - ci * ci);
    if (s2t > 1.0) return std::nullopt;
    double ct = std::sqrt(1.0 - s2t);
    return eta * dir + (eta * ci - ct) * m;
}

std::optional<double> critical_angle(double n_from, double n_to) {
    if (!(n_from > 0.0) || !(n_to > 0.0)) throw std::invalid_argument("refractive indices must be positive");
    if (n_to >= n_from) return std::nullopt;
    return std::asin(n_to / n_from);
}

double angle_to_line(const Vec2& dir, const Vec2& line_dir) {
    double dn = dir.norm(), ln = line_dir.norm();
    if (!(dn > 0.0) || !(ln > 0.0)) throw std::invalid_argument("angle_to_line needs nonzero vectors");
    double c = std::abs(dir.dot(line_dir)) / (dn * ln);
    double s = std::abs(dir.cross(line_dir)) / (dn * ln);
    return std::atan2(s, c);
}

namespace {

double incidence_angle(const Vec2& dir, const Vec2& normal) {
    double c = std::min(1.0, std::abs(dir.dot(normal)));
    return std::acos(c);
}

bool near_singular(const Sheet& sheet, std::size_t k) {
    for (std::size_t s : sheet.singular)
        if (k + 3 >= s && k <= s + 3) return true;
    return false;
}

// Cubic interpolation of the per-vertex normals at segment k, fraction u.
Vec2 interpolated_normal(const SheetTrace& trace, std::size_t k, double u) {
    const auto& nrm = trace.normals;
    Vec2 v;
    if (k >= 1 && k + 2 < nrm.size()) {
        double w0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
        double w1 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
        double w2 = -(u + 1.0) * u * (u - 2.0) / 2.0;
        double w3 = (u + 1.0) * u * (u - 1.0) / 6.0;
        v = w0 * nrm[k - 1] + w1 * nrm[k] + w2 * nrm[k + 1] + w3 * nrm[k + 2];
    } else {
        v = (1.0 - u) * nrm[k] + u * nrm[k + 1];
    }
    return v.normalized();
}

struct PolylineHit {
    std::size_t sheet_trace;
    std::size_t segment;
    double u;          // fraction along the segment
    double s;          // ray parameter
    Vec2 point;
};

std::optional<PolylineHit> first_hit(const Ray& ray, const std::vector<SheetTrace>& traces,
                                     double s_min) {
    std::optional<PolylineHit> best;
    for (std::size_t ti = 0; ti < traces.size(); ++ti) {
        const auto& pts = traces[ti].sheet->points;
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            Vec2 a = pts[k].y, b = pts[k + 1].y;
            Vec2 e = b - a;
            double denom = ray.dir.cross(e);
            if (denom == 0.0) continue;
            // Solve origin + s dir = a + u e via 2x2 cross products.
            Vec2 w = a - ray.origin;
            double s = w.cross(e) / denom;
            double u = w.cross(ray.dir) / denom;
            if (s <= s_min || u < 0.0 || u > 1.0) continue;
            if (!best || s < best->s)
                best = PolylineHit{ti, k, u, s, ray.origin + s * ray.dir};
        }
    }
    return best;
}

}  // namespace

SheetTrace build_sheet_trace(const Sheet& sheet) {
    SheetTrace trace;
    trace.sheet = &sheet;
    const auto& pts = sheet.points;
    std::size_t n = pts.size();
    trace.normals.assign(n, Vec2{});
    trace.regular.assign(n, false);

    // Median parameter step; stencils spanning a gap show a larger step and
    // are rejected.
    std::vector<double> steps;
    steps.reserve(n > 1 ? n - 1 : 0);
    for (std::size_t k = 0; k + 1 < n; ++k) steps.push_back(pts[k + 1].sample.t - pts[k].sample.t);
    double median_step = 0.0;
    if (!steps.empty()) {
        std::vector<double> sorted = steps;
        std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
        median_step = sorted[sorted.size() / 2];
    }

    for (std::size_t k = 0; k < n; ++k) {
        if (k < 2 || k + 2 >= n) continue;
        bool uniform = true;
        for (std::size_t j = k - 2; j < k + 2; ++j)
            if (std::abs((pts[j + 1].sample.t - pts[j].sample.t) - median_step) >
                0.5 * std::abs(median_step))
                uniform = false;
        if (!uniform) continue;
        // Fourth-order first-derivative stencil; only the direction is used.
        Vec2 d = -1.0 * pts[k + 2].y + 8.0 * pts[k + 1].y - 8.0 * pts[k - 1].y + pts[k - 2].y;
        double dn = d.norm();
        if (dn < 1e-300) continue;
        trace.normals[k] = (d / dn).perp_cw();
        trace.regular[k] = true;
    }
    return trace;
}

RefractionReport check_refraction_theorem(const Profile& profile, const Curve& curve,
                                          const Media& media) {
    (void)curve;
    RefractionReport report;
    double target = 2.0 * profile.a;
    for (std::size_t si = 0; si < profile.sheets.size(); ++si) {
        const Sheet& sheet = profile.sheets[si];
        if (sheet.key.branch != Branch::Interior) continue;
        SheetTrace trace = build_sheet_trace(sheet);
        for (std::size_t k = 0; k < sheet.points.size(); ++k) {
            if (!trace.regular[k]) {
                ++report.counts.edge_excluded;
                continue;
            }
            if (near_singular(sheet, k)) {
                ++report.counts.singular_excluded;
                continue;
            }
            const SheetPoint& pt = sheet.points[k];
            double yn = pt.y.norm();
            if (yn < 1e-12) {
                ++report.counts.filtered;
                continue;
            }
            Vec2 d_in = pt.y / yn;
            RefractionRecord rec;
            rec.y = pt.y;
            rec.sheet = si;
            rec.index = k;
            rec.incidence = incidence_angle(d_in, trace.normals[k]);
            rec.path = optical_path(pt.y, pt.sample.point, media);
            auto out = refract(d_in, trace.normals[k], media.n1, media.n2);
            if (!out) {
                rec.tir = true;
                ++report.counts.tir;
                report.records.push_back(rec);
                continue;
            }
            rec.deviation = angle_to_line(*out, pt.sample.point - pt.y);
            ++report.counts.eligible;
            report.max_deviation = std::max(report.max_deviation, rec.deviation);
            report.path_spread = std::max(report.path_spread, std::abs(rec.path - target));
            report.records.push_back(rec);
        }
    }
    return report;
}

RefractionReport check_virtual_source(const Profile& profile, const Curve& curve,
                                      const Media& media_swapped, bool reversed) {
    (void)curve;
    RefractionReport report;
    double target = 2.0 * profile.a;
    for (std::size_t si = 0; si < profile.sheets.size(); ++si) {
        const Sheet& sheet = profile.sheets[si];
        if (sheet.key.branch != Branch::Exterior) continue;
        SheetTrace trace = build_sheet_trace(sheet);
        for (std::size_t k = 0; k < sheet.points.size(); ++k) {
            if (!trace.regular[k]) {
                ++report.counts.edge_excluded;
                continue;
            }
            if (near_singular(sheet, k)) {
                ++report.counts.singular_excluded;
                continue;
            }
            const SheetPoint& pt = sheet.points[k];
            Vec2 leg = pt.y - pt.sample.point;
            double leg_n = leg.norm(), yn = pt.y.norm();
            if (leg_n < 1e-12 || yn < 1e-12) {
                ++report.counts.filtered;
                continue;
            }
            // Literal eligibility: n(x) oriented toward the exit medium must
            // see y on its positive side.
            Vec2 n_exit = pt.lambda >= 0.0 ? pt.sample.normal : -pt.sample.normal;
            if (!(n_exit.dot(pt.y) > 0.0)) {
                ++report.counts.filtered;
                continue;
            }
            Vec2 d_in = reversed ? -1.0 * (pt.y / yn) : leg / leg_n;
            RefractionRecord rec;
            rec.y = pt.y;
            rec.sheet = si;
            rec.index = k;
            rec.incidence = incidence_angle(d_in, trace.normals[k]);
            // Exterior-branch Fermat constant: n2|y-x| - n1|y| = 2a in the
            // original labelling, i.e. swapped.n1 |y-x| - swapped.n2 |y|.
            rec.path = media_swapped.n1 * leg_n - media_swapped.n2 * yn;
            auto out = reversed ? refract(d_in, trace.normals[k], media_swapped.n2, media_swapped.n1)
                                : refract(d_in, trace.normals[k], media_swapped.n1, media_swapped.n2);
            if (!out) {
                rec.tir = true;
                ++report.counts.tir;
                report.records.push_back(rec);
                continue;
            }
            rec.deviation = angle_to_line(*out, reversed ? leg : pt.y);
            ++report.counts.eligible;
            report.max_deviation = std::max(report.max_deviation, rec.deviation);
            report.path_spread = std::max(report.path_spread, std::abs(rec.path - target));
            report.records.push_back(rec);
        }
    }
    return report;
}

RefractionReport check_do_nothing(const Profile& inner, const Profile& outer, const Curve& curve,
                                  const Media& media) {
    (void)curve;
    RefractionReport report;
    double target = 4.0 * inner.a;

    std::vector<SheetTrace> outer_traces;
    for (const Sheet& sheet : outer.sheets)
        if (sheet.key.branch == Branch::Exterior) outer_traces.push_back(build_sheet_trace(sheet));

    for (std::size_t si = 0; si < inner.sheets.size(); ++si) {
        const Sheet& sheet = inner.sheets[si];
        if (sheet.key.branch != Branch::Interior) continue;
        SheetTrace trace = build_sheet_trace(sheet);
        for (std::size_t k = 0; k < sheet.points.size(); ++k) {
            if (!trace.regular[k]) {
                ++report.counts.edge_excluded;
                continue;
            }
            if (near_singular(sheet, k)) {
                ++report.counts.singular_excluded;
                continue;
            }
            const SheetPoint& pt = sheet.points[k];
            double yn = pt.y.norm();
            if (yn < 1e-12) {
                ++report.counts.filtered;
                continue;
            }
            Vec2 d0 = pt.y / yn;
            RefractionRecord rec;
            rec.y = pt.y;
            rec.sheet = si;
            rec.index = k;
            rec.incidence = incidence_angle(d0, trace.normals[k]);
            auto stage1 = refract(d0, trace.normals[k], media.n1, media.n2);
            if (!stage1) {
                rec.tir = true;
                ++report.counts.tir;
                report.records.push_back(rec);
                continue;
            }
            auto hit = first_hit(Ray{pt.y, *stage1}, outer_traces, 1e-9);
            if (!hit)
                throw GeometryMismatchError("ray from sheet point (" + std::to_string(pt.y.x) + ", " +
                                            std::to_string(pt.y.y) +
                                            ") misses the exterior sheet within its sampled extent");
            Vec2 m2 = interpolated_normal(outer_traces[hit->sheet_trace], hit->segment, hit->u);
            auto stage2 = refract(*stage1, m2, media.n2, media.n1);
            if (!stage2) {
                rec.tir = true;
                ++report.counts.tir;
                report.records.push_back(rec);
                continue;
            }
            rec.deviation = angle_to_line(*stage2, hit->point);
            const Vec2& x = pt.sample.point;
            rec.path = media.n1 * yn + media.n2 * (pt.y - x).norm() + media.n2 * (hit->point - x).norm() -
                       media.n1 * hit->point.norm();
            ++report.counts.eligible;
            report.max_deviation = std::max(report.max_deviation, rec.deviation);
            report.path_spread = std::max(report.path_spread, std::abs(rec.path - target));
            report.records.push_back(rec);
        }
    }
    return report;
}

}  // namespace ovalkit
