#include "condqubit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "condqubit/error.hpp"

namespace condqubit {

namespace {

constexpr double kDegenerateMinor = 1e-9;
constexpr double kZeroWeight = 1e-15;

double sq(double x) { return x * x; }

} // namespace

// ---------------------------------------------------------------------------
// Ellipsoids
// ---------------------------------------------------------------------------

double EllipsoidDescriptor::support(const Vec3& u) const
{
    const double along = u.dot(axis);
    const double perp2 = std::max(u.squaredNorm() - along * along, 0.0);
    return u.dot(center()) + std::sqrt(b * b * perp2 + a * a * along * along);
}

double EllipsoidDescriptor::implicit(const Vec3& x) const
{
    const double z = x.dot(axis);
    const double rho2 = std::max(x.squaredNorm() - z * z, 0.0);
    return rho2 / (b * b) + sq(z - zc) / (a * a) - 1.0;
}

Vec3 EllipsoidDescriptor::polar_point(double theta, double phi) const
{
    const auto [e1, e2] = transverse_frame(axis);
    const double r = a * (1.0 - e * e) / (1.0 - e * std::cos(theta));
    const Vec3 dir = std::sin(theta) * (std::cos(phi) * e1 + std::sin(phi) * e2)
                     + std::cos(theta) * axis;
    return r * dir;
}

EllipsoidDescriptor ellipsoid_params(double p, double q, double beta, int dA,
                                     std::optional<double> p0)
{
    if (dA < 2) {
        throw Error(ErrorCode::InvalidDimension, "ellipsoid_params: dA must be >= 2");
    }
    if (!(q > 0.0) || q > 1.0 + 1e-12) {
        throw Error(ErrorCode::Validation, "ellipsoid_params: q must lie in (0, 1]");
    }
    const double bg = p0 ? *p0 : 1.0 - p;
    const double pq = p * q;
    const double u = bg / dA;
    const double s2 = sq(std::sin(beta));
    const double delta = (u + pq * sq(std::sin(beta / 2.0))) * (u + pq * sq(std::cos(beta / 2.0)));

    EllipsoidDescriptor d;
    if (std::abs(delta) < 1e-300) {
        d.e = 0.0;
        d.a = 1.0;
        d.b = 1.0;
        d.zc = 0.0;
        return d;
    }
    d.e = bg * std::cos(beta) / (bg + 0.5 * pq * dA * s2);
    d.a = pq * (u + 0.5 * pq * s2) / (2.0 * delta);
    d.b = std::abs(pq) * std::sin(beta) / (2.0 * std::sqrt(delta));
    d.zc = d.a * d.e;
    return d;
}

double PlanarEllipse::support(const Vec3& u) const
{
    return u.dot(center) + std::hypot(u.dot(axis_u), u.dot(axis_v));
}

std::pair<Vec3, Vec3> transverse_frame(const Vec3& axis)
{
    const Vec3 n = axis.normalized();
    Vec3 seed = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    Vec3 e1 = (seed - seed.dot(n) * n).normalized();
    Vec3 e2 = n.cross(e1);
    return {e1, e2};
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

std::string descriptor_kind(const SetDescriptor& d)
{
    struct Visitor {
        std::string operator()(const FilledEllipsoid&) const { return "filled-ellipsoid"; }
        std::string operator()(const HullOfEllipsoids&) const { return "hull-of-ellipsoids"; }
        std::string operator()(const IceCream&) const { return "ice-cream"; }
        std::string operator()(const Triangle&) const { return "triangle"; }
        std::string operator()(const Segment&) const { return "segment"; }
        std::string operator()(const Point&) const { return "point"; }
        std::string operator()(const PancakeHull&) const { return "pancake-hull"; }
    };
    return std::visit(Visitor{}, d);
}

namespace {

void push_unique(std::vector<Vec3>& pts, const Vec3& x)
{
    for (const auto& p : pts) {
        if ((p - x).norm() < 1e-12) {
            return;
        }
    }
    pts.push_back(x);
}

// Hull of at most three points as the simplest descriptor.
SetDescriptor reduce_points(const std::vector<Vec3>& pts)
{
    if (pts.empty()) {
        return Point{Vec3::Zero()};
    }
    if (pts.size() == 1) {
        return Point{pts[0]};
    }
    if (pts.size() == 2) {
        return Segment{pts[0], pts[1]};
    }
    if (pts.size() == 3) {
        const Vec3 area = (pts[1] - pts[0]).cross(pts[2] - pts[0]);
        if (area.norm() > 1e-12) {
            return Triangle{pts[0], pts[1], pts[2]};
        }
        // collinear: keep the farthest pair
        std::size_t bi = 0, bj = 1;
        double best = -1.0;
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = i + 1; j < 3; ++j) {
                const double dist = (pts[i] - pts[j]).norm();
                if (dist > best) {
                    best = dist;
                    bi = i;
                    bj = j;
                }
            }
        }
        return Segment{pts[bi], pts[bj]};
    }
    return HullOfEllipsoids{{}, pts};
}

double beta_of(const SchmidtComponent& c)
{
    if (c.schmidt.size() < 2) {
        return 0.0;
    }
    return 2.0 * std::atan2(std::sqrt(std::max(c.schmidt[1], 0.0)),
                            std::sqrt(std::max(c.schmidt[0], 0.0)));
}

struct Members {
    std::vector<EllipsoidDescriptor> ellipsoids;
    std::vector<Vec3> points;
};

Members collect_members(const SchmidtMix& mix)
{
    const double p0 = background_weight(mix);
    const int dA = mix.dA;
    Members m;
    int occupied = 0;
    for (const auto& c : mix.components) {
        if (std::abs(c.weight) < kZeroWeight) {
            continue;
        }
        const Vec3 axis = frame_axis(c.gamma, c.eta);
        for (double q : c.schmidt) {
            if (q > kZeroWeight) {
                ++occupied;
            }
        }
        const double beta = beta_of(c);
        if (beta > 0.0) {
            EllipsoidDescriptor e = ellipsoid_params(c.weight, 1.0, beta, dA, p0);
            e.axis = axis;
            if (e.b >= kDegenerateMinor) {
                m.ellipsoids.push_back(e);
                continue;
            }
            push_unique(m.points, 2.0 * e.a * axis);
            continue;
        }
        push_unique(m.points, c.weight / (c.weight + p0 / dA) * axis);
    }
    if (p0 > kZeroWeight && occupied < dA) {
        push_unique(m.points, Vec3::Zero());
    }
    return m;
}

bool inside(const EllipsoidDescriptor& e, const Vec3& x)
{
    return e.implicit(x) <= 1e-12;
}

SetDescriptor classify(const Members& m)
{
    if (m.ellipsoids.empty()) {
        return reduce_points(m.points);
    }
    if (m.ellipsoids.size() == 1) {
        const auto& e = m.ellipsoids.front();
        std::vector<Vec3> outside;
        for (const auto& x : m.points) {
            if (!inside(e, x)) {
                outside.push_back(x);
            }
        }
        if (outside.empty()) {
            return FilledEllipsoid{e};
        }
        if (outside.size() == 1) {
            return IceCream{e, outside.front()};
        }
        return HullOfEllipsoids{m.ellipsoids, outside};
    }
    return HullOfEllipsoids{m.ellipsoids, m.points};
}

SetDescriptor describe_pure_mix(const PureMix& s)
{
    if (std::abs(s.p) < kZeroWeight) {
        return Point{Vec3::Zero()};
    }
    if (s.p >= 1.0 - 1e-12 && s.beta < 1e-12) {
        return Point{Vec3::UnitZ()};
    }
    const EllipsoidDescriptor e = ellipsoid_params(s.p, 1.0, s.beta, s.dA);
    if (s.beta <= 0.0 || e.b < kDegenerateMinor) {
        return Segment{Vec3::Zero(), 2.0 * e.a * Vec3::UnitZ()};
    }
    return FilledEllipsoid{e};
}

SetDescriptor describe_two_pure_mix(const TwoPureMix& s, const SchmidtMix& mix)
{
    Members m = collect_members(mix);
    const bool one_separable = (s.beta1 > 0.0) != (s.beta2 > 0.0);
    if (one_separable && s.p1 > kZeroWeight && s.p2 > kZeroWeight && m.ellipsoids.size() == 1) {
        // protrusion rule, valid for nonnegative weights
        const bool second_flat = s.beta2 <= 0.0;
        const bool protrudes = second_flat
                                   ? protrusion_test(s.p1, s.p2, s.beta1, 0.0, s.gamma)
                                   : protrusion_test(s.p2, s.p1, s.beta2, 0.0, s.gamma);
        const auto& e = m.ellipsoids.front();
        if (!protrudes) {
            return FilledEllipsoid{e};
        }
        Vec3 vertex = Vec3::Zero();
        double best = -1.0;
        for (const auto& x : m.points) {
            if (x.norm() > best) {
                best = x.norm();
                vertex = x;
            }
        }
        return IceCream{e, vertex};
    }
    return classify(m);
}

SetDescriptor describe_rank2(const Rank2Separable& s)
{
    const QuditQubitState state = make_state(s);
    const double pp = s.p_plus;
    const double pm = s.minus_weight();
    const double p0 = 1.0 - pp - pm;
    const Vec3 plus(std::sin(s.theta_b), 0.0, std::cos(s.theta_b));
    const Vec3 minus(-std::sin(s.theta_b), 0.0, std::cos(s.theta_b));

    if (p0 <= kZeroWeight) {
        if (pp <= kZeroWeight) {
            return Point{minus};
        }
        if (pm <= kZeroWeight) {
            return Point{plus};
        }
        if (s.theta_a <= 0.0) {
            return Point{(pp * plus + pm * minus) / (pp + pm)};
        }
        return reduce_points(s.theta_b > 0.0 ? std::vector<Vec3>{plus, minus}
                                             : std::vector<Vec3>{plus});
    }

    // qubit pair on the |0_A>,|1_A> block
    CMatrix block = state.rho().topLeftCorner(4, 4);
    block /= block.trace().real();
    const FanoData f = fano_decompose(block, 2);
    const SteeringEllipsoid se = steering_ellipsoid(f);
    PancakeHull out;
    out.ellipse.center = se.center;
    out.ellipse.axis_u = se.semiaxes(0) * se.axes.col(0);
    out.ellipse.axis_v = se.semiaxes(1) * se.axes.col(1);
    out.with_origin = s.dA >= 3;
    return out;
}

} // namespace

SetDescriptor describe_set(const FamilySpec& spec)
{
    if (std::holds_alternative<RawState>(spec)) {
        throw Error(ErrorCode::UnsupportedFamily,
                    "raw states have no closed-form set; use sample-set instead");
    }
    if (const auto* s = std::get_if<SpinAligned>(&spec)) {
        // B coordinates refer to the effective frame of make_state
        return describe_rank2(spin_effective_qubits(*s));
    }
    if (const auto* s = std::get_if<Rank2Separable>(&spec)) {
        return describe_rank2(*s);
    }
    make_state(spec); // feasibility checks
    if (const auto* s = std::get_if<PureMix>(&spec)) {
        return describe_pure_mix(*s);
    }
    const SchmidtMix mix = *schmidt_form(spec);
    if (const auto* s = std::get_if<TwoPureMix>(&spec)) {
        return describe_two_pure_mix(*s, mix);
    }
    return classify(collect_members(mix));
}

double support_function(const SetDescriptor& d, const Vec3& u)
{
    struct Visitor {
        const Vec3& u;
        double operator()(const FilledEllipsoid& s) const { return s.ellipsoid.support(u); }
        double operator()(const HullOfEllipsoids& s) const
        {
            double h = -std::numeric_limits<double>::infinity();
            for (const auto& e : s.ellipsoids) {
                h = std::max(h, e.support(u));
            }
            for (const auto& x : s.points) {
                h = std::max(h, u.dot(x));
            }
            return h;
        }
        double operator()(const IceCream& s) const
        {
            return std::max(s.ellipsoid.support(u), u.dot(s.vertex));
        }
        double operator()(const Triangle& s) const
        {
            return std::max({u.dot(s.v0), u.dot(s.v1), u.dot(s.v2)});
        }
        double operator()(const Segment& s) const { return std::max(u.dot(s.p0), u.dot(s.p1)); }
        double operator()(const Point& s) const { return u.dot(s.p); }
        double operator()(const PancakeHull& s) const
        {
            const double h = s.ellipse.support(u);
            return s.with_origin ? std::max(h, 0.0) : h;
        }
    };
    return std::visit(Visitor{u}, d);
}

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

std::vector<Vec3> fibonacci_sphere(int n)
{
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(std::max(n, 0)));
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        out.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
    return out;
}

const std::vector<Vec3>& direction_grid()
{
    static const std::vector<Vec3> grid = fibonacci_sphere(kDirectionGridSize);
    return grid;
}

namespace {

Vec3 interior_point(const SetDescriptor& d)
{
    struct Visitor {
        Vec3 operator()(const FilledEllipsoid& s) const { return s.ellipsoid.center(); }
        Vec3 operator()(const HullOfEllipsoids& s) const
        {
            Vec3 c = Vec3::Zero();
            for (const auto& e : s.ellipsoids) {
                c += e.center();
            }
            for (const auto& x : s.points) {
                c += x;
            }
            const auto n = s.ellipsoids.size() + s.points.size();
            return n > 0 ? Vec3(c / static_cast<double>(n)) : c;
        }
        Vec3 operator()(const IceCream& s) const { return s.ellipsoid.center(); }
        Vec3 operator()(const Triangle& s) const { return (s.v0 + s.v1 + s.v2) / 3.0; }
        Vec3 operator()(const Segment& s) const { return 0.5 * (s.p0 + s.p1); }
        Vec3 operator()(const Point& s) const { return s.p; }
        Vec3 operator()(const PancakeHull& s) const { return s.ellipse.center; }
    };
    return std::visit(Visitor{}, d);
}

} // namespace

MembershipOracle::MembershipOracle(const SetDescriptor& d)
    : desc_(d), ref_(interior_point(d))
{
    const auto& grid = direction_grid();
    h_.reserve(grid.size());
    for (const auto& u : grid) {
        h_.push_back(support_function(d, u));
    }
}

double MembershipOracle::ray_excess(const Vec3& x) const
{
    const Vec3 v = x - ref_;
    const double n = v.norm();
    if (n < 1e-300) {
        return -std::numeric_limits<double>::infinity();
    }
    const Vec3 u = v / n;
    return u.dot(x) - support_function(desc_, u);
}

double MembershipOracle::excess(const Vec3& x) const
{
    const auto& grid = direction_grid();
    double worst = ray_excess(x);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, grid[i].dot(x) - h_[i]);
    }
    return worst;
}

bool MembershipOracle::contains(const Vec3& x, double tol) const
{
    const auto& grid = direction_grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i].dot(x) > h_[i] + tol) {
            return false;
        }
    }
    return ray_excess(x) <= tol;
}

bool membership(const Vec3& point, const SetDescriptor& d, double tol)
{
    return MembershipOracle(d).contains(point, tol);
}

HullGap hull_gap(const std::vector<Vec3>& points, const SetDescriptor& d)
{
    const MembershipOracle oracle(d);
    const auto& grid = direction_grid();
    const auto& h = oracle.support_values();
    HullGap out;
    out.max_gap = -std::numeric_limits<double>::infinity();
    out.max_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& x : points) {
            best = std::max(best, grid[i].dot(x));
        }
        const double gap = h[i] - best;
        if (gap > out.max_gap) {
            out.max_gap = gap;
            out.worst_direction = grid[i];
        }
        out.max_excess = std::max(out.max_excess, -gap);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Protrusion and cone tangency
// ---------------------------------------------------------------------------

bool protrusion_test(double p1, double p2, double beta1, double beta2, double gamma)
{
    const double denom = (1.0 + std::cos(beta2)) * (1.0 - std::cos(beta1) * std::cos(gamma));
    if (std::abs(denom) < 1e-14) {
        throw Error(ErrorCode::Degenerate,
                    "protrusion_test: collinear degenerate configuration (zero denominator)");
    }
    const double threshold = p1 * sq(std::sin(beta1)) / denom;
    return p1 >= 0.0 ? p2 >= threshold : p2 <= threshold;
}

ConeTangency::ConeTangency(const IceCream& desc) : ell_(desc.ellipsoid), vertex_(desc.vertex)
{
    std::tie(e1_, e2_) = transverse_frame(ell_.axis);
    if (ell_.b < kDegenerateMinor) {
        throw Error(ErrorCode::NoTangency, "cone_tangency: degenerate ellipsoid");
    }
    if (ell_.implicit(vertex_) < -1e-12) {
        throw Error(ErrorCode::NoTangency, "cone_tangency: vertex lies inside the ellipsoid");
    }
}

double ConeTangency::tangency_residual(const Vec3& x) const
{
    const double xs = x.dot(e1_), ys = x.dot(e2_), zs = x.dot(ell_.axis);
    const double xv = vertex_.dot(e1_), yv = vertex_.dot(e2_), zv = vertex_.dot(ell_.axis);
    return (xs * (xs - xv) + ys * (ys - yv)) / sq(ell_.b)
           + (zs - ell_.zc) * (zs - zv) / sq(ell_.a);
}

double ConeTangency::ellipsoid_residual(const Vec3& x) const
{
    return ell_.implicit(x);
}

std::vector<Vec3> ConeTangency::tangent_curve(int n) const
{
    // scaled frame where the ellipsoid is the unit sphere
    const Vec3 v(vertex_.dot(e1_) / ell_.b, vertex_.dot(e2_) / ell_.b,
                 (vertex_.dot(ell_.axis) - ell_.zc) / ell_.a);
    const double v2 = v.squaredNorm();
    const Vec3 c = v / v2;
    const double radius = std::sqrt(std::max(0.0, 1.0 - 1.0 / v2));
    const auto [w1, w2] = transverse_frame(v);
    auto unscale = [&](const Vec3& s) {
        return (ell_.b * s.x()) * e1_ + (ell_.b * s.y()) * e2_ + (ell_.zc + ell_.a * s.z()) * ell_.axis;
    };
    std::vector<Vec3> out;
    if (radius < 1e-12) {
        out.push_back(unscale(c));
        return out;
    }
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * i / n;
        out.push_back(unscale(c + radius * (std::cos(t) * w1 + std::sin(t) * w2)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Two-qubit steering ellipsoid
// ---------------------------------------------------------------------------

SteeringEllipsoid steering_ellipsoid(const FanoData& f)
{
    if (f.r_a.size() != 3 || f.correlations.rows() != 3 || f.correlations.cols() != 3) {
        throw Error(ErrorCode::Shape, "steering_ellipsoid: expects two-qubit Fano data");
    }
    const Vec3 a = f.r_a;
    const double na = 1.0 - a.squaredNorm();
    if (na < 1e-14) {
        throw Error(ErrorCode::Degenerate, "steering_ellipsoid: pure marginal on A");
    }
    const Eigen::Matrix3d c = f.correlations;
    SteeringEllipsoid out;
    out.center = f.r_b - c.transpose() * a / na;
    const Eigen::Matrix3d m = Eigen::Matrix3d::Identity() + a * a.transpose() / na;
    const Eigen::Matrix3d q = c.transpose() * m * c / na;
    out.shape = q;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(q);
    for (int i = 0; i < 3; ++i) {
        out.semiaxes(i) = std::sqrt(std::max(es.eigenvalues()(2 - i), 0.0));
        out.axes.col(i) = es.eigenvectors().col(2 - i);
    }
    return out;
}

} // namespace condqubit
