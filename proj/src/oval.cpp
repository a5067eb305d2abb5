#include "ovalkit/oval.hpp"

#include <algorithm>
#include <cmath>

namespace ovalkit {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double bipolar_residual(const Vec2& y, const OvalSpec& spec, Branch branch) {
    double r1 = y.norm();
    double r2 = (y - spec.x).norm();
    double sign = branch == Branch::Interior ? 1.0 : -1.0;
    return sign * spec.media.n1 * r1 + spec.media.n2 * r2 - 2.0 * spec.a;
}

std::optional<Branch> contains(const Vec2& y, const OvalSpec& spec, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("membership tolerance must be positive");
    double scale = 1.0 + 2.0 * spec.a;
    if (std::abs(bipolar_residual(y, spec, Branch::Interior)) <= tol * scale) return Branch::Interior;
    if (std::abs(bipolar_residual(y, spec, Branch::Exterior)) <= tol * scale) return Branch::Exterior;
    return std::nullopt;
}

int solve_half_quadratic(double c2, double c1, double c0, double roots[2]) {
    double disc = c1 * c1 - c2 * c0;  // reduced discriminant
    if (disc < 0.0) return 0;
    double s = std::sqrt(disc);
    double q = -(c1 + std::copysign(s, c1));
    if (q == 0.0) {  // c1 == 0 and disc == 0: double root at c0 == 0
        roots[0] = roots[1] = 0.0;
        return 2;
    }
    roots[0] = q / c2;
    roots[1] = c0 / q;
    return 2;
}

std::vector<PolarRadius> polar_radii(const OvalSpec& spec, double phi, double tol) {
    double d = spec.x.norm();
    if (!(d > 0.0)) throw std::invalid_argument("polar form needs distinct foci (|x| > 0)");
    const double n1 = spec.media.n1, n2 = spec.media.n2;
    require_distinct_indices(spec.media);

    // World-frame direction of the ray at polar angle phi (axis F -> x).
    double theta = std::atan2(spec.x.y, spec.x.x);
    Vec2 dir{std::cos(phi + theta), std::sin(phi + theta)};

    double c2 = n2 * n2 - n1 * n1;
    double c0 = n2 * n2 * d * d - 4.0 * spec.a * spec.a;
    double cphi = std::cos(phi);
    // Squared forms of the two branch equations; both solved, membership decides.
    double lin[2] = {
        2.0 * spec.a * n1 - n2 * n2 * d * cphi,    // interior
        -(2.0 * spec.a * n1 + n2 * n2 * d * cphi)  // exterior
    };

    std::vector<PolarRadius> out;
    for (double c1 : lin) {
        double roots[2];
        int nr = solve_half_quadratic(c2, c1, c0, roots);
        for (int i = 0; i < nr; ++i) {
            double r = roots[i];
            if (!(r > 0.0)) continue;
            auto b = contains(r * dir, spec, tol);
            if (!b) continue;
            bool dup = std::any_of(out.begin(), out.end(), [&](const PolarRadius& e) {
                return e.branch == *b && std::abs(e.r - r) <= 1e-12 * (1.0 + std::abs(r));
            });
            if (!dup) out.push_back({r, *b});
        }
    }
    std::sort(out.begin(), out.end(), [](const PolarRadius& a, const PolarRadius& b) {
        if (a.r != b.r) return a.r < b.r;
        return a.branch == Branch::Interior && b.branch == Branch::Exterior;
    });
    return out;
}

std::vector<Vec2> oval_polyline(const OvalSpec& spec, Branch branch, std::size_t m, double tol) {
    if (m < 16) throw std::invalid_argument("oval polyline needs m >= 16");
    double theta = std::atan2(spec.x.y, spec.x.x);

    std::vector<Vec2> near_arc, far_arc;
    bool two_sided = false;
    for (std::size_t j = 0; j < m; ++j) {
        double phi = -kPi + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(m);
        auto radii = polar_radii(spec, phi, tol);
        std::vector<double> rs;
        for (const auto& pr : radii)
            if (pr.branch == branch) rs.push_back(pr.r);
        if (rs.empty()) continue;
        Vec2 dir{std::cos(phi + theta), std::sin(phi + theta)};
        if (rs.size() == 1) {
            far_arc.push_back(rs[0] * dir);
        } else {
            two_sided = true;
            far_arc.push_back(rs.back() * dir);
            near_arc.push_back(rs.front() * dir);
        }
    }
    if (far_arc.empty()) throw std::domain_error("oval branch has no real points for this spec");

    // With F inside the branch each ray crosses once and the phi sweep already
    // closes the loop; otherwise walk the far arc forward and the near arc back.
    std::vector<Vec2> out = std::move(far_arc);
    if (two_sided) out.insert(out.end(), near_arc.rbegin(), near_arc.rend());
    return out;
}

}  // namespace ovalkit
