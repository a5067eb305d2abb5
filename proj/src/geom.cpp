#include "ovalkit/geom.hpp"

#include <algorithm>

namespace ovalkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_domain(const Curve& curve, double t) {
    double span = curve.t_max - curve.t_min;
    double slack = 1e-12 * (1.0 + std::abs(span));
    if (t < curve.t_min - slack || t > curve.t_max + slack)
        throw std::domain_error("curve parameter " + std::to_string(t) + " outside [" +
                                std::to_string(curve.t_min) + ", " + std::to_string(curve.t_max) + "]");
}

// Knot second derivatives of the natural cubic spline (uniform knot spacing 1).
std::vector<Vec2> spline_second_derivatives(const std::vector<Vec2>& p) {
    std::size_t n = p.size();
    std::vector<Vec2> m(n, Vec2{});
    if (n < 3) return m;
    std::vector<double> diag(n, 0.0);
    std::vector<Vec2> rhs(n, Vec2{});
    // Thomas algorithm on the interior rows: m[i-1] + 4 m[i] + m[i+1] = 6 (p[i+1] - 2 p[i] + p[i-1])
    diag[1] = 4.0;
    rhs[1] = 6.0 * (p[2] - 2.0 * p[1] + p[0]);
    for (std::size_t i = 2; i + 1 < n; ++i) {
        double w = 1.0 / diag[i - 1];
        diag[i] = 4.0 - w;
        rhs[i] = 6.0 * (p[i + 1] - 2.0 * p[i] + p[i - 1]) - w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        Vec2 upper = (i + 2 < n) ? m[i + 1] : Vec2{};
        m[i] = (rhs[i] - upper) / diag[i];
        if (i == 1) break;
    }
    return m;
}

void eval_spline(const SplineCurve& sp, double t, Vec2& p, Vec2& d1, Vec2& d2) {
    std::size_t n = sp.points.size();
    double clamped = std::clamp(t, 0.0, static_cast<double>(n - 1));
    auto seg = static_cast<std::size_t>(std::min(clamped, static_cast<double>(n - 2)));
    double s = clamped - static_cast<double>(seg);
    const Vec2& a = sp.points[seg];
    const Vec2& b = sp.points[seg + 1];
    const Vec2& ma = sp.m2[seg];
    const Vec2& mb = sp.m2[seg + 1];
    double u = 1.0 - s;
    p = u * a + s * b + (u * u * u - u) * (ma / 6.0) + (s * s * s - s) * (mb / 6.0);
    d1 = b - a + (1.0 - 3.0 * u * u) * (ma / 6.0) + (3.0 * s * s - 1.0) * (mb / 6.0);
    d2 = u * ma + s * mb;
}

}  // namespace

Curve make_circle(Vec2 center, double radius, Orientation o) {
    if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
    return Curve{CircleCurve{center, radius}, o, -kPi, kPi};
}

Curve make_parabola(double focal_scale, Transform tf, double t0, double t1, Orientation o) {
    if (focal_scale == 0.0) throw std::invalid_argument("parabola focal scale must be nonzero");
    if (!(t1 > t0)) throw std::invalid_argument("parabola needs t1 > t0");
    return Curve{ParabolaCurve{focal_scale, tf}, o, t0, t1};
}

Curve make_ellipse(double semi_x, double semi_y, Transform tf, double t0, double t1, Orientation o) {
    if (!(semi_x > 0.0) || !(semi_y > 0.0)) throw std::invalid_argument("ellipse semi-axes must be positive");
    if (!(t1 > t0)) throw std::invalid_argument("ellipse needs t1 > t0");
    return Curve{EllipseCurve{semi_x, semi_y, tf}, o, t0, t1};
}

Curve make_spline(std::vector<Vec2> points, Orientation o) {
    if (points.size() < 2) throw std::invalid_argument("spline needs at least two points");
    SplineCurve sp{std::move(points), {}};
    sp.m2 = spline_second_derivatives(sp.points);
    double t_max = static_cast<double>(sp.points.size() - 1);
    return Curve{std::move(sp), o, 0.0, t_max};
}

Curve translated(const Curve& curve, Vec2 d) {
    Curve out = curve;
    std::visit(
        [&](auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, CircleCurve>) {
                k.center += d;
            } else if constexpr (std::is_same_v<T, SplineCurve>) {
                for (auto& p : k.points) p += d;
            } else {
                k.transform.translate += d;
            }
        },
        out.kind);
    return out;
}

void eval_derivatives(const Curve& curve, double t, Vec2& p, Vec2& d1, Vec2& d2) {
    check_domain(curve, t);
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, CircleCurve>) {
                double c = std::cos(t), s = std::sin(t);
                p = k.center + Vec2{k.radius * c, k.radius * s};
                d1 = {-k.radius * s, k.radius * c};
                d2 = {-k.radius * c, -k.radius * s};
            } else if constexpr (std::is_same_v<T, ParabolaCurve>) {
                p = k.transform.apply({t, t * t / (2.0 * k.focal_scale)});
                d1 = k.transform.apply_vector({1.0, t / k.focal_scale});
                d2 = k.transform.apply_vector({0.0, 1.0 / k.focal_scale});
            } else if constexpr (std::is_same_v<T, EllipseCurve>) {
                double c = std::cos(t), s = std::sin(t);
                p = k.transform.apply({k.semi_x * c, k.semi_y * s});
                d1 = k.transform.apply_vector({-k.semi_x * s, k.semi_y * c});
                d2 = k.transform.apply_vector({-k.semi_x * c, -k.semi_y * s});
            } else {
                eval_spline(k, t, p, d1, d2);
            }
        },
        curve.kind);
}

WavefrontSample sample_wavefront(const Curve& curve, double t) {
    Vec2 p, d1, d2;
    eval_derivatives(curve, t, p, d1, d2);
    double speed = d1.norm();
    if (speed < 1e-12) throw std::domain_error("degenerate parametrization: |x'(t)| below 1e-12");
    Vec2 tangent = d1 / speed;
    double orient = curve.orientation == Orientation::Default ? 1.0 : -1.0;
    Vec2 normal = orient * tangent.perp_cw();
    // Normal component of the curvature vector: the centre of curvature is at
    // point + (1/curvature) * normal for either orientation choice.
    double curvature = d2.dot(normal) / (speed * speed);
    return WavefrontSample{t, p, tangent, normal, curvature};
}

double finite_difference_curvature(const Curve& curve, double t, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("finite difference step must be positive");
    Vec2 pm, pc, pp, unused1, unused2;
    eval_derivatives(curve, t - h, pm, unused1, unused2);
    eval_derivatives(curve, t, pc, unused1, unused2);
    eval_derivatives(curve, t + h, pp, unused1, unused2);
    Vec2 d1 = (pp - pm) / (2.0 * h);
    Vec2 d2 = (pp - 2.0 * pc + pm) / (h * h);
    double speed2 = d1.norm2();
    if (speed2 < 1e-24) throw std::domain_error("degenerate parametrization in finite differences");
    double orient = curve.orientation == Orientation::Default ? 1.0 : -1.0;
    Vec2 normal = orient * (d1 / std::sqrt(speed2)).perp_cw();
    return d2.dot(normal) / speed2;
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
    if (n < 2) throw std::invalid_argument("grid needs at least two samples");
    std::vector<double> g(n);
    double step = (t1 - t0) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = t0 + step * static_cast<double>(i);
    g.back() = t1;
    return g;
}

}  // namespace ovalkit
