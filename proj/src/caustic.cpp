#include "ovalkit/caustic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace ovalkit {

CausticPoint caustic_point(const WavefrontSample& sample, double flat_eps) {
    if (std::abs(sample.curvature) <= flat_eps) throw FlatPointError{};
    double rho = 1.0 / sample.curvature;
    return CausticPoint{normal_offset(sample, rho), sample, rho};
}

CausticCurve caustic_curve(const Curve& curve, const SamplingSpec& sampling, double flat_eps) {
    CausticCurve out;
    auto grid = uniform_grid(curve.t_min, curve.t_max, sampling.samples);
    bool in_gap = false;
    double gap_start = grid.front();
    for (double t : grid) {
        WavefrontSample s = sample_wavefront(curve, t);
        if (std::abs(s.curvature) <= flat_eps) {
            if (!in_gap) {
                in_gap = true;
                gap_start = out.points.empty() ? grid.front() : out.points.back().source.t;
            }
            continue;
        }
        if (in_gap) {
            out.gaps.push_back({gap_start, t});
            in_gap = false;
        }
        out.points.push_back(caustic_point(s, flat_eps));
    }
    if (in_gap) out.gaps.push_back({gap_start, grid.back()});
    return out;
}

SweepParams sweep_parameters(const CausticPoint& cp, const Media& media) {
    double u = media.n1 * cp.c.norm();
    double w = media.n2 * (cp.c - cp.source.point).norm();
    return SweepParams{0.5 * std::abs(u + w), 0.5 * std::abs(u - w)};
}

ReconstructionParams reconstruction_params(double a, double rho, double n2) {
    if (a < 0.0) throw std::invalid_argument("oval parameter a must be nonnegative");
    double half = 0.5 * rho * n2;
    return ReconstructionParams{a + half, std::abs(a - half)};
}

namespace {

struct FamilyRoute {
    Branch family_branch;   // branch of the foci-(F,c) oval supplying the points
    bool use_a_prime;       // a' when true, a'' otherwise
    Branch out_branch;      // sheet key this family reconstructs
    SheetSide out_side;
};

constexpr FamilyRoute kConvexRoutes[4] = {
    {Branch::Exterior, true, Branch::Exterior, SheetSide::Plus},
    {Branch::Interior, true, Branch::Interior, SheetSide::Plus},
    {Branch::Exterior, false, Branch::Interior, SheetSide::Minus},
    {Branch::Interior, false, Branch::Exterior, SheetSide::Minus},
};

constexpr FamilyRoute kConcaveRoutes[4] = {
    {Branch::Exterior, false, Branch::Exterior, SheetSide::Plus},
    {Branch::Interior, false, Branch::Interior, SheetSide::Plus},
    {Branch::Interior, true, Branch::Interior, SheetSide::Minus},
    {Branch::Exterior, true, Branch::Exterior, SheetSide::Minus},
};

void check_not_degenerate(const std::vector<CausticPoint>& caustic, double tol_scale) {
    if (caustic.size() < 2) return;
    Vec2 lo = caustic.front().c, hi = caustic.front().c;
    for (const auto& cp : caustic) {
        lo.x = std::min({lo.x, cp.c.x, cp.source.point.x});
        lo.y = std::min({lo.y, cp.c.y, cp.source.point.y});
        hi.x = std::max({hi.x, cp.c.x, cp.source.point.x});
        hi.y = std::max({hi.y, cp.c.y, cp.source.point.y});
    }
    double diameter = (hi - lo).norm();
    double tol = tol_scale * std::max(diameter, 1e-300);

    auto cell_of = [tol](const Vec2& p) {
        auto cx = static_cast<std::int64_t>(std::floor(p.x / tol));
        auto cy = static_cast<std::int64_t>(std::floor(p.y / tol));
        return std::uint64_t(cx) * 0x9e3779b97f4a7c15ull ^ std::uint64_t(cy);
    };
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
    for (std::size_t i = 0; i < caustic.size(); ++i) {
        auto key = cell_of(caustic[i].c);
        for (std::size_t j : grid[key]) {
            if (distance(caustic[i].c, caustic[j].c) <= tol &&
                distance(caustic[i].source.point, caustic[j].source.point) > 10.0 * tol)
                throw DegenerateCausticError(
                    "caustic degenerate: distinct wavefront points share a centre of curvature near (" +
                    std::to_string(caustic[i].c.x) + ", " + std::to_string(caustic[i].c.y) + ")");
        }
        grid[key].push_back(i);
    }
}

}  // namespace

Profile profile_from_caustic(const std::vector<CausticPoint>& caustic, const Media& media, double a,
                             WavefrontRegion region, ReconstructionLog* log,
                             double duplicate_tol_scale) {
    require_distinct_indices(media);
    if (a < 0.0) throw std::invalid_argument("oval parameter a must be nonnegative");
    check_not_degenerate(caustic, duplicate_tol_scale);

    std::span<const FamilyRoute, 4> routes =
        region == WavefrontRegion::Convex ? kConvexRoutes : kConcaveRoutes;
    ReconstructionLog local_log;
    if (!log) log = &local_log;

    Profile out;
    out.a = a;
    out.media = media;
    std::map<SheetKey, Sheet> sheets;

    for (const CausticPoint& cp : caustic) {
        const Vec2& n = cp.source.normal;
        double v = std::abs(cp.rho);
        auto params = reconstruction_params(a, v, media.n2);
        bool dblprime_flipped = a < 0.5 * media.n2 * v;
        double rho_sign = cp.rho >= 0.0 ? 1.0 : -1.0;

        // The line through x and c is the wavefront normal line; intersections
        // with the family ovals are signed offsets from c along n.
        WavefrontSample at_c{cp.source.t, cp.c, cp.source.tangent, n, 0.0};

        for (const FamilyRoute& route : routes) {
            double a_k = route.use_a_prime ? params.a_prime : params.a_dblprime;
            // Envelope condition: the touching intersection sits on the side of c
            // where (y-c).n matches this sign.
            double side_sign = (route.use_a_prime || dblprime_flipped) ? -rho_sign : rho_sign;

            auto roots = solve_lambda(at_c, media, a_k);
            const LambdaRoot* hit = nullptr;
            for (const auto& root : roots) {
                if (root.branch != route.family_branch) continue;
                if (root.lambda * side_sign <= 0.0) continue;
                if (!hit || std::abs(root.lambda) < std::abs(hit->lambda)) hit = &root;
            }
            if (!hit) {
                ++log->empty_family_points;
                continue;
            }
            double mu = hit->lambda;
            if (region == WavefrontRegion::Convex && route.use_a_prime && std::abs(mu) <= v)
                ++log->convex_inequality_violations;

            double lambda_out = mu + cp.rho;
            Vec2 y = normal_offset(cp.source, lambda_out);
            OvalSpec family_spec{cp.c, media, a_k};
            SheetKey key{route.out_branch, route.out_side, 0};
            Sheet& sheet = sheets[key];
            sheet.key = key;
            if (is_singular(cp.source, lambda_out, 1e-8))
                sheet.singular.push_back(sheet.points.size());
            sheet.points.push_back(SheetPoint{cp.source, lambda_out, y, hit->branch,
                                              bipolar_residual(y, family_spec, hit->branch),
                                              hit->grazing});
        }
    }

    for (auto& [key, sheet] : sheets)
        if (!sheet.points.empty()) out.sheets.push_back(std::move(sheet));
    if (out.sheets.empty()) throw EmptyProfileError{};
    return out;
}

}  // namespace ovalkit
