#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ovalkit {

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    friend constexpr Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& r) { x += r.x; y += r.y; return *this; }
    Vec2& operator-=(const Vec2& r) { x -= r.x; y -= r.y; return *this; }

    constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }
    /// z-component of the 3D cross product; positive when r is CCW from *this.
    constexpr double cross(const Vec2& r) const { return x * r.y - y * r.x; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }

    Vec2 normalized(double eps = 1e-300) const {
        double n = norm();
        if (n <= eps) throw std::domain_error("Vec2: cannot normalize near-zero vector");
        return {x / n, y / n};
    }
    /// Rotate by -90 degrees: tangent -> right-hand normal.
    constexpr Vec2 perp_cw() const { return {y, -x}; }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Rigid placement applied to the canonical form of a curve.
struct Transform {
    double angle{0.0};   // radians, CCW
    Vec2 translate{};

    Vec2 apply(const Vec2& p) const {
        double c = std::cos(angle), s = std::sin(angle);
        return {c * p.x - s * p.y + translate.x, s * p.x + c * p.y + translate.y};
    }
    Vec2 apply_vector(const Vec2& v) const {
        double c = std::cos(angle), s = std::sin(angle);
        return {c * v.x - s * v.y, s * v.x + c * v.y};
    }
};

/// Which of the two unit normals counts as "outward".
/// Default: the tangent rotated by -90 degrees (for a CCW-parametrized closed
/// curve this points away from the enclosed region). Flipped negates it and,
/// with it, the sign of the curvature.
enum class Orientation { Default, Flipped };

struct CircleCurve {
    Vec2 center{};
    double radius{1.0};
};

/// Canonical parabola (t, t^2 / (2 * focal_scale)) placed by `transform`.
struct ParabolaCurve {
    double focal_scale{1.0};
    Transform transform{};
};

struct EllipseCurve {
    double semi_x{1.0};
    double semi_y{1.0};
    Transform transform{};
};

/// Natural cubic spline through the given points, parametrized by sample index.
/// `m2` holds the spline's second derivatives at the knots; make_spline fills it.
struct SplineCurve {
    std::vector<Vec2> points;
    std::vector<Vec2> m2;
};

struct Curve {
    std::variant<CircleCurve, ParabolaCurve, EllipseCurve, SplineCurve> kind;
    Orientation orientation{Orientation::Default};
    double t_min{0.0};
    double t_max{1.0};
};

/// A point of the wavefront W with its local frame and signed curvature.
///
/// curvature is the normal component of the curvature vector, kappa = x'' . n / |x'|^2,
/// so the centre of curvature always sits at point + (1/kappa) * normal.
struct WavefrontSample {
    double t{0.0};
    Vec2 point{};
    Vec2 tangent{};
    Vec2 normal{};
    double curvature{0.0};
};

Curve make_circle(Vec2 center, double radius, Orientation o = Orientation::Default);
Curve make_parabola(double focal_scale, Transform tf, double t0, double t1,
                    Orientation o = Orientation::Default);
Curve make_ellipse(double semi_x, double semi_y, Transform tf, double t0, double t1,
                   Orientation o = Orientation::Default);
Curve make_spline(std::vector<Vec2> points, Orientation o = Orientation::Default);

/// Translate the curve by d (used by the scene loader to move F to the origin).
Curve translated(const Curve& curve, Vec2 d);

/// Evaluate position and first/second derivatives at t.
void eval_derivatives(const Curve& curve, double t, Vec2& p, Vec2& d1, Vec2& d2);

WavefrontSample sample_wavefront(const Curve& curve, double t);

inline Vec2 normal_offset(const WavefrontSample& s, double lambda) {
    return s.point + lambda * s.normal;
}

/// Central-difference estimate of the signed curvature; independent of
/// sample_wavefront's analytic derivatives.
double finite_difference_curvature(const Curve& curve, double t, double h);

std::vector<double> uniform_grid(double t0, double t1, std::size_t n);

}  // namespace ovalkit
