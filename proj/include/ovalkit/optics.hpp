#pragma once

#include <optional>

#include "ovalkit/caustic.hpp"
#include "ovalkit/profile.hpp"

namespace ovalkit {

struct GeometryMismatchError : std::runtime_error {
    explicit GeometryMismatchError(const std::string& what) : std::runtime_error(what) {}
};

struct Ray {
    Vec2 origin{};
    Vec2 dir{};  // unit
};

/// Vector Snell refraction. Tangential component scales by n_from/n_to; the
/// sign of the normal component is preserved. Empty on total internal
/// reflection, i.e. when (n_from/n_to)^2 (1 - (dir.normal)^2) > 1.
std::optional<Vec2> refract(const Vec2& dir, const Vec2& normal, double n_from, double n_to);

/// arcsin(n_to/n_from) when n_to < n_from; empty otherwise (no TIR possible).
std::optional<double> critical_angle(double n_from, double n_to);

/// n1 |y - F| + n2 |y - x| with F at the origin.
inline double optical_path(const Vec2& y, const Vec2& x, const Media& media) {
    return media.n1 * y.norm() + media.n2 * (y - x).norm();
}

/// Unsigned angle between a direction and a line (both need not be unit).
double angle_to_line(const Vec2& dir, const Vec2& line_dir);

struct RefractionRecord {
    Vec2 y{};
    double incidence{0.0};  // radians from the interface normal
    double deviation{0.0};  // radians to the target line; meaningless when tir
    bool tir{false};
    double path{0.0};
    std::size_t sheet{0};
    std::size_t index{0};
};

struct RefractionCounts {
    std::size_t eligible{0};
    std::size_t tir{0};
    std::size_t singular_excluded{0};
    std::size_t edge_excluded{0};
    std::size_t filtered{0};
};

struct RefractionReport {
    std::vector<RefractionRecord> records;  // eligible and tir points
    double max_deviation{0.0};
    double path_spread{0.0};  // max |path - expected constant|
    RefractionCounts counts;
};

/// Interface normals recovered from the sampled sheet alone (wide central
/// differences over the point polyline), keeping the optical checks
/// independent of the construction they validate.
struct SheetTrace {
    const Sheet* sheet{nullptr};
    std::vector<Vec2> normals;
    std::vector<bool> regular;  // full stencil available, uniform t spacing
};

SheetTrace build_sheet_trace(const Sheet& sheet);

/// Rays from F refracted at the interior-branch sheets must continue along the
/// normal line of W through the source sample (deviation) and spend the same
/// optical path 2a on every F -> sheet -> W leg (path spread).
RefractionReport check_refraction_theorem(const Profile& profile, const Curve& curve,
                                          const Media& media);

/// Wavefront rays refracted at the exterior-branch sheets emerge radial
/// through F. media_swapped carries the incident (wavefront) side in n1.
/// Points failing the literal eligibility filter n.y > 0 (normal oriented
/// toward the exit medium) are counted and skipped. With reversed=true the
/// trace runs backwards (radial ray in, wavefront-normal line as the target);
/// deviations are unchanged.
RefractionReport check_virtual_source(const Profile& profile, const Curve& curve,
                                      const Media& media_swapped, bool reversed = false);

/// Two-stage trace: F-ray refracts at an interior-branch sheet of `inner`,
/// crosses the n2-filled region, refracts at an exterior-branch sheet of
/// `outer`, and must come out radial. path carries the per-ray constant
/// (n1|y1| + n2|y1-x|) + (n2|y2-x| - n1|y2|) = 4a.
RefractionReport check_do_nothing(const Profile& inner, const Profile& outer, const Curve& curve,
                                  const Media& media);

}  // namespace ovalkit
