#pragma once

#include "ovalkit/profile.hpp"

namespace ovalkit {

struct FlatPointError : std::runtime_error {
    FlatPointError() : std::runtime_error("flat wavefront point: centre of curvature at infinity") {}
};

struct DegenerateCausticError : std::runtime_error {
    explicit DegenerateCausticError(const std::string& what) : std::runtime_error(what) {}
};

/// Default curvature magnitude below which a point counts as flat.
inline constexpr double kFlatCurvature = 1e-9;

/// Centre of principal curvature of W at the sample: c = x + (1/kappa) n.
struct CausticPoint {
    Vec2 c;
    WavefrontSample source;
    double rho;  // signed curvature radius 1/kappa
};

CausticPoint caustic_point(const WavefrontSample& sample, double flat_eps = kFlatCurvature);

struct CausticGap {
    double t_before;
    double t_after;
};

struct CausticCurve {
    std::vector<CausticPoint> points;  // t-ordered, flat samples skipped
    std::vector<CausticGap> gaps;
};

CausticCurve caustic_curve(const Curve& curve, const SamplingSpec& sampling = {},
                           double flat_eps = kFlatCurvature);

/// The two oval parameters for which this caustic point is a singular point
/// of the envelope (a1 >= a2 always).
struct SweepParams {
    double a1;
    double a2;
};

SweepParams sweep_parameters(const CausticPoint& cp, const Media& media);

/// a' = a + (rho/2) n2 and a'' = |a - (rho/2) n2| with unsigned rho.
struct ReconstructionParams {
    double a_prime;
    double a_dblprime;
};

ReconstructionParams reconstruction_params(double a, double rho, double n2);

enum class WavefrontRegion { Convex, Concave };

/// Reconstruction diagnostics: counts of per-point checks and skipped inputs.
struct ReconstructionLog {
    std::size_t convex_inequality_violations{0};  // |y-c| > |x-c| failed in a convex region
    std::size_t empty_family_points{0};           // a family oval had no intersection on the line
};

/// Rebuild the envelope sheets from caustic data: each sheet point is the
/// intersection of the line through x and c with the family oval (foci F and
/// c, parameter a' or a'') assigned to that sheet for the given region, taken
/// on the side of c selected by the envelope condition. Output keys match
/// build_profile's; residuals are memberships against the foci (F, c) ovals.
Profile profile_from_caustic(const std::vector<CausticPoint>& caustic, const Media& media, double a,
                             WavefrontRegion region, ReconstructionLog* log = nullptr,
                             double duplicate_tol_scale = 1e-9);

}  // namespace ovalkit
