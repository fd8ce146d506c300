#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "condqubit/state_factory.hpp"
#include "condqubit/types.hpp"

namespace condqubit {

/// Spheroid symmetric around `axis`: center zc*axis, semiaxis a along the
/// axis, b transverse. a and zc carry the sign of p (a < 0 flips the shape).
struct EllipsoidDescriptor {
    double a = 0.0;
    double b = 0.0;
    double e = 0.0;
    double zc = 0.0;
    Vec3 axis = Vec3::UnitZ();

    Vec3 center() const { return zc * axis; }
    /// Support function u.c + sqrt(b^2 |u_perp|^2 + a^2 (u.axis)^2).
    double support(const Vec3& u) const;
    /// x^2/b^2 + y^2/b^2 + (z - zc)^2/a^2 - 1 in the axis frame.
    double implicit(const Vec3& x) const;
    /// Point at polar angle theta (from the axis, measured at the origin
    /// focus) and azimuth phi, radius a(1-e^2)/(1 - e cos theta).
    Vec3 polar_point(double theta, double phi = 0.0) const;
};

/// Ellipsoid reached by kets of in-support weight q for the component
/// p |Psi><Psi| of a mixture with background weight p0 (p0 = 1 - p when
/// omitted). Degenerate inputs: beta = 0 gives e = 1, b = 0; Delta = 0
/// gives the pure limit e = 0, a = 1.
EllipsoidDescriptor ellipsoid_params(double p, double q, double beta, int dA,
                                     std::optional<double> p0 = std::nullopt);

/// Filled ellipse in a plane: center + cos t * axis_u + sin t * axis_v.
struct PlanarEllipse {
    Vec3 center = Vec3::Zero();
    Vec3 axis_u = Vec3::Zero();
    Vec3 axis_v = Vec3::Zero();

    double support(const Vec3& u) const;
};

struct FilledEllipsoid {
    EllipsoidDescriptor ellipsoid;
};
struct HullOfEllipsoids {
    std::vector<EllipsoidDescriptor> ellipsoids;
    std::vector<Vec3> points; // extra hull points from degenerate members
};
struct IceCream {
    EllipsoidDescriptor ellipsoid;
    Vec3 vertex = Vec3::Zero();
};
struct Triangle {
    Vec3 v0 = Vec3::Zero();
    Vec3 v1 = Vec3::Zero();
    Vec3 v2 = Vec3::Zero();
};
struct Segment {
    Vec3 p0 = Vec3::Zero();
    Vec3 p1 = Vec3::Zero();
};
struct Point {
    Vec3 p = Vec3::Zero();
};
struct PancakeHull {
    PlanarEllipse ellipse;
    bool with_origin = true;
};

using SetDescriptor =
    std::variant<FilledEllipsoid, HullOfEllipsoids, IceCream, Triangle, Segment, Point, PancakeHull>;

/// "filled-ellipsoid", "hull-of-ellipsoids", "ice-cream", "triangle",
/// "segment", "point", "pancake-hull".
std::string descriptor_kind(const SetDescriptor& d);

/// Analytic description of the set of conditional Bloch vectors.
/// SpinAligned is described through its effective qubit pair. Throws
/// Error{UnsupportedFamily} for RawState.
SetDescriptor describe_set(const FamilySpec& spec);

/// h(u) = max over the set of u.x.
double support_function(const SetDescriptor& d, const Vec3& u);

// ---------------------------------------------------------------------------
// Membership on a fixed direction grid
// ---------------------------------------------------------------------------

inline constexpr int kDirectionGridSize = 2048;

/// Fibonacci lattice of n unit vectors.
std::vector<Vec3> fibonacci_sphere(int n);

/// The shared 2048-direction grid.
const std::vector<Vec3>& direction_grid();

/// Support values of one descriptor on the direction grid, reusable across
/// many membership queries. Each query also tests the ray direction from a
/// fixed interior reference point of the set through the query point, which
/// catches points just beyond the surface between grid directions.
class MembershipOracle {
public:
    explicit MembershipOracle(const SetDescriptor& d);

    bool contains(const Vec3& x, double tol = 1e-9) const;
    /// max_u (u.x - h(u)) over the grid and the ray direction; <= 0 inside.
    double excess(const Vec3& x) const;
    const std::vector<double>& support_values() const noexcept { return h_; }
    const Vec3& reference_point() const noexcept { return ref_; }

private:
    double ray_excess(const Vec3& x) const;

    SetDescriptor desc_;
    Vec3 ref_ = Vec3::Zero();
    std::vector<double> h_;
};

bool membership(const Vec3& point, const SetDescriptor& d, double tol = 1e-9);

struct HullGap {
    double max_gap = 0.0;   // max_u [h(u) - max_i u.x_i]
    Vec3 worst_direction = Vec3::UnitZ();
    double max_excess = 0.0; // max_u max_i [u.x_i - h(u)]
};

HullGap hull_gap(const std::vector<Vec3>& points, const SetDescriptor& d);

// ---------------------------------------------------------------------------
// Two-ellipsoid and cone conditions
// ---------------------------------------------------------------------------

/// p2 >= p1 sin^2 b1 / [(1 + cos b2)(1 - cos b1 cos g)] for p1 >= 0; the
/// comparison is reversed for p1 < 0. Throws Error{Degenerate} when the
/// denominator vanishes.
bool protrusion_test(double p1, double p2, double beta1, double beta2, double gamma);

/// Tangent circle of the cone from an exterior vertex to a spheroid.
class ConeTangency {
public:
    /// Throws Error{NoTangency} when the vertex is inside the ellipsoid.
    explicit ConeTangency(const IceCream& desc);

    /// [x(x-xv) + y(y-yv)]/b^2 + (z-zc)(z-zv)/a^2 in the axis frame.
    double tangency_residual(const Vec3& x) const;
    double ellipsoid_residual(const Vec3& x) const;
    /// n points on the tangent circle (a single point when the vertex is
    /// on the surface).
    std::vector<Vec3> tangent_curve(int n) const;

private:
    EllipsoidDescriptor ell_;
    Vec3 vertex_;
    Vec3 e1_, e2_;
};

/// Orthonormal pair completing `axis` to a right-handed frame.
std::pair<Vec3, Vec3> transverse_frame(const Vec3& axis);

// ---------------------------------------------------------------------------
// General two-qubit steering ellipsoid
// ---------------------------------------------------------------------------

struct SteeringEllipsoid {
    Vec3 center = Vec3::Zero();
    RMatrix shape; // Q, the set is {c + Q^(1/2) v : |v| <= 1}
    Vec3 semiaxes = Vec3::Zero();
    Eigen::Matrix3d axes; // columns, matching semiaxes
};

/// Steering ellipsoid of B for a two-qubit state given as Fano data
/// (r_a, r_b, C) with |r_a| < 1: c = r_b - C^T a/(1-a^2),
/// Q = C^T (1 + a a^T/(1-a^2)) C / (1-a^2).
SteeringEllipsoid steering_ellipsoid(const FanoData& qubit_pair);

} // namespace condqubit
