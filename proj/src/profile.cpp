#include "ovalkit/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ovalkit {

std::pair<double, double> discriminants(const WavefrontSample& sample, const Media& media, double a) {
    const double n1 = media.n1, n2 = media.n2;
    double xn = sample.point.dot(sample.normal);
    double x2 = sample.point.norm2();
    double c2 = n2 * n2 - n1 * n1;
    double c0 = 4.0 * a * a - n1 * n1 * x2;
    double b1 = 2.0 * a * n2 + n1 * n1 * xn;  // lambda >= 0 side
    double b2 = 2.0 * a * n2 - n1 * n1 * xn;  // lambda <= 0 side
    return {b1 * b1 - c2 * c0, b2 * b2 - c2 * c0};
}

std::vector<LambdaRoot> solve_lambda(const WavefrontSample& sample, const Media& media, double a,
                                     double tol) {
    require_distinct_indices(media);
    if (a < 0.0) throw std::invalid_argument("oval parameter a must be nonnegative");

    const double n1 = media.n1, n2 = media.n2;
    double xn = sample.point.dot(sample.normal);
    double x2 = sample.point.norm2();
    double c2 = n2 * n2 - n1 * n1;
    double c0 = 4.0 * a * a - n1 * n1 * x2;
    OvalSpec spec{sample.point, media, a};
    double scale = 1.0 + 2.0 * a;

    std::vector<LambdaRoot> out;
    for (double side : {1.0, -1.0}) {
        // |lambda| = side * lambda substituted into the squared bipolar equation:
        // c2 lambda^2 - 2 side (2 a n2 + side n1^2 (x.n)) lambda + c0 = 0
        double c1 = -side * (2.0 * a * n2 + side * n1 * n1 * xn);
        double disc = c1 * c1 - c2 * c0;
        bool grazing = disc >= 0.0 && disc < 1e-12 * std::max(1.0, c1 * c1);
        double roots[2];
        int nr = solve_half_quadratic(c2, c1, c0, roots);
        for (int i = 0; i < nr; ++i) {
            double lam = roots[i];
            if (side * lam < -1e-14 * (1.0 + std::abs(lam))) continue;  // wrong sign branch
            Vec2 y = normal_offset(sample, lam);
            double res_int = bipolar_residual(y, spec, Branch::Interior);
            double res_ext = bipolar_residual(y, spec, Branch::Exterior);
            Branch b;
            double res;
            if (std::abs(res_int) <= std::abs(res_ext)) {
                b = Branch::Interior;
                res = res_int;
            } else {
                b = Branch::Exterior;
                res = res_ext;
            }
            if (std::abs(res) > tol * scale) continue;
            bool dup = std::any_of(out.begin(), out.end(), [&](const LambdaRoot& e) {
                return e.branch == b && std::abs(e.lambda - lam) <= 1e-12 * (1.0 + std::abs(lam));
            });
            if (dup) continue;
            out.push_back({lam, b, grazing});
            if (grazing) break;  // double root: emit once
        }
    }
    std::sort(out.begin(), out.end(),
              [](const LambdaRoot& a_, const LambdaRoot& b_) { return a_.lambda < b_.lambda; });
    return out;
}

bool is_singular(const WavefrontSample& sample, double lambda, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("singularity tolerance must be positive");
    return std::abs(lambda * sample.curvature - 1.0) <= tol;
}

std::string sheet_key_name(const SheetKey& key) {
    std::string s = branch_name(key.branch);
    s += key.side == SheetSide::Plus ? "_plus" : "_minus";
    if (key.ordinal > 0) s += "_" + std::to_string(key.ordinal);
    return s;
}

const Sheet* Profile::find(Branch branch, SheetSide side, int ordinal) const {
    for (const auto& sheet : sheets)
        if (sheet.key == SheetKey{branch, side, ordinal}) return &sheet;
    return nullptr;
}

namespace {

struct Track {
    SheetKey key;
    Sheet sheet;
    double last_lambda{0.0};
    double last_t{0.0};
    bool open{false};      // saw a root at the previous grid step
    bool started{false};
};

SheetKey make_key(Branch branch, double lambda, std::vector<Track>& tracks) {
    SheetSide side = lambda >= 0.0 ? SheetSide::Plus : SheetSide::Minus;
    int ordinal = 0;
    for (const auto& tr : tracks)
        if (tr.key.branch == branch && tr.key.side == side) ordinal = std::max(ordinal, tr.key.ordinal + 1);
    return SheetKey{branch, side, ordinal};
}

}  // namespace

Profile build_profile(const Curve& curve, const Media& media, double a, const SamplingSpec& sampling) {
    require_distinct_indices(media);
    if (sampling.samples < 2) throw std::invalid_argument("profile sampling needs at least two points");

    Profile profile;
    profile.a = a;
    profile.media = media;

    std::vector<Track> tracks;
    auto grid = uniform_grid(curve.t_min, curve.t_max, sampling.samples);

    for (double t : grid) {
        WavefrontSample sample = sample_wavefront(curve, t);
        auto roots = solve_lambda(sample, media, a);

        std::vector<bool> root_used(roots.size(), false);
        std::vector<bool> track_hit(tracks.size(), false);

        // Greedy nearest-lambda matching within each branch; roots and open
        // tracks are both few (<= 4), so the quadratic scan is fine.
        while (true) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t bi = 0, bj = 0;
            bool found = false;
            for (std::size_t i = 0; i < roots.size(); ++i) {
                if (root_used[i]) continue;
                for (std::size_t j = 0; j < tracks.size(); ++j) {
                    if (track_hit[j] || tracks[j].key.branch != roots[i].branch) continue;
                    double d = std::abs(roots[i].lambda - tracks[j].last_lambda);
                    if (d < best) {
                        best = d;
                        bi = i;
                        bj = j;
                        found = true;
                    }
                }
            }
            if (!found) break;
            root_used[bi] = true;
            track_hit[bj] = true;
            Track& tr = tracks[bj];
            if (!tr.open && tr.started) {
                tr.sheet.gaps.push_back({tr.last_t, t});
                profile.events.push_back({TrackEvent::Kind::Resume, t, roots[bi].lambda, tr.key});
            }
            const LambdaRoot& root = roots[bi];
            Vec2 y = normal_offset(sample, root.lambda);
            OvalSpec spec{sample.point, media, a};
            SheetPoint pt{sample, root.lambda, y, root.branch, bipolar_residual(y, spec, root.branch),
                          root.grazing};
            if (is_singular(sample, root.lambda, sampling.singular_tol))
                tr.sheet.singular.push_back(tr.sheet.points.size());
            if (root.grazing)
                profile.events.push_back({TrackEvent::Kind::Grazing, t, root.lambda, tr.key});
            tr.sheet.points.push_back(std::move(pt));
            tr.last_lambda = root.lambda;
            tr.last_t = t;
            tr.open = true;
            tr.started = true;
        }

        for (std::size_t j = 0; j < tracks.size(); ++j)
            if (!track_hit[j] && tracks[j].open) {
                tracks[j].open = false;
                profile.events.push_back(
                    {TrackEvent::Kind::Gap, t, tracks[j].last_lambda, tracks[j].key});
            }

        for (std::size_t i = 0; i < roots.size(); ++i) {
            if (root_used[i]) continue;
            Track tr;
            tr.key = make_key(roots[i].branch, roots[i].lambda, tracks);
            tr.sheet.key = tr.key;
            Vec2 y = normal_offset(sample, roots[i].lambda);
            OvalSpec spec{sample.point, media, a};
            SheetPoint pt{sample, roots[i].lambda, y, roots[i].branch,
                          bipolar_residual(y, spec, roots[i].branch), roots[i].grazing};
            if (is_singular(sample, roots[i].lambda, sampling.singular_tol))
                tr.sheet.singular.push_back(0);
            tr.sheet.points.push_back(std::move(pt));
            tr.last_lambda = roots[i].lambda;
            tr.last_t = t;
            tr.open = true;
            tr.started = true;
            profile.events.push_back({TrackEvent::Kind::Begin, t, roots[i].lambda, tr.key});
            tracks.push_back(std::move(tr));
        }
    }

    for (auto& tr : tracks)
        if (!tr.sheet.points.empty()) profile.sheets.push_back(std::move(tr.sheet));
    std::sort(profile.sheets.begin(), profile.sheets.end(),
              [](const Sheet& a_, const Sheet& b_) { return a_.key < b_.key; });
    if (profile.sheets.empty()) throw EmptyProfileError{};
    return profile;
}

double tangency_angle(const Vec2& y, const OvalSpec& spec, const Vec2& sheet_tangent) {
    double tnorm = sheet_tangent.norm();
    if (!(tnorm > 0.0)) throw std::invalid_argument("sheet tangent must be nonzero");
    double r1 = y.norm();
    double r2 = (y - spec.x).norm();
    if (r1 < 1e-12 || r2 < 1e-12) throw ZeroGradientError{};
    // Gradient of the residual of whichever branch y sits on.
    double res_int = bipolar_residual(y, spec, Branch::Interior);
    double res_ext = bipolar_residual(y, spec, Branch::Exterior);
    double sign = std::abs(res_int) <= std::abs(res_ext) ? 1.0 : -1.0;
    Vec2 grad = sign * spec.media.n1 * (y / r1) + spec.media.n2 * ((y - spec.x) / r2);
    double gnorm = grad.norm();
    if (gnorm < 1e-12) throw ZeroGradientError{};
    double c = std::abs(sheet_tangent.dot(grad)) / (tnorm * gnorm);
    return std::asin(std::min(1.0, c));
}

}  // namespace ovalkit
