#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ovalkit/oval.hpp"

namespace ovalkit {

struct EmptyProfileError : std::runtime_error {
    EmptyProfileError() : std::runtime_error("no wavefront sample yields any envelope point") {}
};

struct ZeroGradientError : std::runtime_error {
    ZeroGradientError() : std::runtime_error("oval residual gradient vanishes (focus or self-intersection)") {}
};

/// One membership-verified signed root of the normal-line/oval intersection.
struct LambdaRoot {
    double lambda;
    Branch branch;
    bool grazing{false};  // double root emitted once, discriminant ~ 0
};

/// Signed normal offsets lambda with y = x + lambda n on the oval O_x^a,
/// verified by substitution into the branch equations. Sorted by lambda,
/// at most four entries.
std::vector<LambdaRoot> solve_lambda(const WavefrontSample& sample, const Media& media, double a,
                                     double tol = 1e-9);

/// Reduced discriminants of the two signed-offset quadratics. Real roots exist
/// on the lambda >= 0 side only when the first is nonnegative, on the
/// lambda <= 0 side only when the second is.
std::pair<double, double> discriminants(const WavefrontSample& sample, const Media& media, double a);

/// True when y = x + lambda n sits at a centre of curvature of W (the envelope
/// fails to be an immersion there): |lambda * curvature - 1| <= tol.
bool is_singular(const WavefrontSample& sample, double lambda, double tol);

/// Envelope point with provenance.
struct SheetPoint {
    WavefrontSample sample;
    double lambda;
    Vec2 y;
    Branch branch;
    double residual;
    bool grazing{false};
};

enum class SheetSide : std::int8_t { Plus = 1, Minus = -1 };

struct SheetKey {
    Branch branch;
    SheetSide side;
    int ordinal{0};  // disambiguates rare repeated (branch, side) tracks

    friend bool operator<(const SheetKey& a, const SheetKey& b) {
        if (a.branch != b.branch) return a.branch < b.branch;
        if (a.side != b.side) return a.side < b.side;
        return a.ordinal < b.ordinal;
    }
    friend bool operator==(const SheetKey& a, const SheetKey& b) {
        return a.branch == b.branch && a.side == b.side && a.ordinal == b.ordinal;
    }
};

std::string sheet_key_name(const SheetKey& key);

/// Parameter interval where a sheet had no solution (discriminant dipped
/// below zero or the track lost its root).
struct SheetGap {
    double t_before;
    double t_after;
};

struct Sheet {
    SheetKey key;
    std::vector<SheetPoint> points;           // ordered by wavefront parameter t
    std::vector<std::size_t> singular;        // indices into points
    std::vector<SheetGap> gaps;
};

/// Root-tracking event observed while assembling sheets.
struct TrackEvent {
    enum class Kind { Begin, Gap, Resume, Grazing } kind;
    double t;
    double lambda;
    SheetKey key;
};

struct Profile {
    double a{0.0};
    Media media{};
    std::vector<Sheet> sheets;
    std::vector<TrackEvent> events;

    const Sheet* find(Branch branch, SheetSide side, int ordinal = 0) const;
};

struct SamplingSpec {
    std::size_t samples{512};
    double singular_tol{1e-8};
};

/// Assemble the envelope sheets over a uniform t-grid of the wavefront.
/// Roots are routed to persistent tracks by branch and lambda continuity;
/// a track's key carries the sign of lambda at its seed point.
Profile build_profile(const Curve& curve, const Media& media, double a,
                      const SamplingSpec& sampling = {});

/// Angle between a sheet tangent and the oval's tangent line at y (the
/// direction orthogonal to the branch-residual gradient). Zero for an exact
/// envelope; pi/2 when the sheet tangent is parallel to the gradient.
double tangency_angle(const Vec2& y, const OvalSpec& spec, const Vec2& sheet_tangent);

}  // namespace ovalkit
