#pragma once

#include <optional>
#include <vector>

#include "ovalkit/geom.hpp"

namespace ovalkit {

/// Refractive indices: n1 on the source (F) side, n2 on the wavefront side.
struct Media {
    double n1{1.0};
    double n2{1.5};
};

struct IndicesEqualError : std::runtime_error {
    IndicesEqualError() : std::runtime_error("refractive indices are equal (n1 == n2)") {}
};

inline void require_distinct_indices(const Media& m) {
    if (m.n1 == m.n2) throw IndicesEqualError{};
}

/// Complete Cartesian oval with foci F (the origin) and `x`.
/// Constant of the bipolar equation is k = 2a.
struct OvalSpec {
    Vec2 x{};
    Media media{};
    double a{1.0};
};

enum class Branch { Interior, Exterior };

inline const char* branch_name(Branch b) { return b == Branch::Interior ? "interior" : "exterior"; }

/// Interior: n1|y| + n2|y-x| - 2a.  Exterior: -n1|y| + n2|y-x| - 2a.
/// Zero exactly when y lies on that branch.
double bipolar_residual(const Vec2& y, const OvalSpec& spec, Branch branch);

/// Branch whose residual magnitude is within tol*(1+2a), interior preferred.
std::optional<Branch> contains(const Vec2& y, const OvalSpec& spec, double tol);

struct PolarRadius {
    double r;
    Branch branch;
};

/// All positive radii at polar angle phi (pole F, axis F->x), classified by
/// membership. Empty result is valid: the ray may miss the oval entirely.
std::vector<PolarRadius> polar_radii(const OvalSpec& spec, double phi, double tol = 1e-9);

/// Dense membership-verified polyline of one branch, closed, ordered by phi.
/// Handles both topologies: branch enclosing F (one crossing per ray) and
/// branch not enclosing F (zero or two crossings per ray).
std::vector<Vec2> oval_polyline(const OvalSpec& spec, Branch branch, std::size_t m, double tol = 1e-9);

/// Both real roots of c2 t^2 + 2 c1 t + c0 = 0, computed in a
/// cancellation-safe form (large root first, the other from the product).
/// Returns the number of real roots (0 or 2; a double root is reported twice).
int solve_half_quadratic(double c2, double c1, double c0, double roots[2]);

}  // namespace ovalkit
