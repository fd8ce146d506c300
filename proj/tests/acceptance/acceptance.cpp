// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

#include "condqubit/brute_force.hpp"
#include "condqubit/entropy.hpp"
#include "condqubit/geometry.hpp"
#include "condqubit/measurement.hpp"
#include "condqubit/nelder_mead.hpp"
#include "condqubit/random.hpp"

using namespace condqubit;

namespace {

constexpr double kPi = std::numbers::pi;

// tolerances
constexpr double kMembershipTol = 1e-7;
constexpr double kHullGapTol = 5e-3;
constexpr double kContainmentSeconds = 30.0;
constexpr double kGoldenTol = 1e-12;
constexpr double kOracleTol = 1e-8;
constexpr double kOracleSeconds = 300.0;
constexpr double kGridScanTol = 1e-6;
constexpr double kClosedFormTol = 1e-10;
constexpr double kRank2Tol = 1e-8;
constexpr double kBalanceTol = 1e-10;
constexpr double kSpinTol = 1e-6;
constexpr double kSpinSpreadTol = 1e-10;
constexpr double kSpinLocationTol = 1e-6;
constexpr double kSignallingTol = 1e-10;
constexpr double kThresholdTol = 1e-6;

// restarts per brute-force run; restart 0 and 1 come on top
constexpr int kOracleRestarts = 12;
constexpr int kRank2Restarts = 2;
constexpr int kSpinRestarts = 4;

// golden values for PureMix{0.5, pi/10, 4}, recomputed from the closed forms
constexpr double kGoldenE = 0.798547512267834;
constexpr double kGoldenA = 0.44258287887195885;
constexpr double kGoldenB = 0.26640470113456743;
constexpr double kGoldenZc = 0.3534234568955389;

int failures = 0;

std::string sci(double x)
{
    std::ostringstream os;
    os << std::scientific << std::setprecision(2) << x;
    return os.str();
}

void report(const std::string& name, bool ok, const std::string& detail)
{
    std::cout << (ok ? "PASS " : "FAIL ") << std::left << std::setw(34) << name << detail << std::endl;
    failures += ok ? 0 : 1;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_excess(const FamilySpec& spec, std::size_t n, std::uint64_t seed, std::vector<Vec3>* keep = nullptr)
{
    const auto desc = describe_set(spec);
    const MembershipOracle oracle(desc);
    double worst = -1.0;
    for (const auto& c : sample_cloud(make_state(spec), n, seed)) {
        worst = std::max(worst, oracle.excess(c.r_b));
        if (keep != nullptr) {
            keep->push_back(c.r_b);
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------

void ellipsoid_containment()
{
    const auto t0 = std::chrono::steady_clock::now();
    const FamilySpec ref_spec = PureMix{0.5, kPi / 10, 4};
    std::vector<Vec3> pts;
    const double worst = max_excess(ref_spec, 100000, 1, &pts);
    const auto gap = hull_gap(pts, describe_set(ref_spec));
    const double secs = seconds_since(t0);
    report("ellipsoid containment", worst <= kMembershipTol && gap.max_gap < kHullGapTol && secs < kContainmentSeconds,
           "max excess " + sci(worst) + ", hull gap " + sci(gap.max_gap) + ", " + sci(secs) + " s");
}

void closed_form_geometry()
{
    const double p = 0.5, beta = kPi / 10;
    const int dA = 4;
    const auto e = ellipsoid_params(p, 1.0, beta, dA);
    double dev = std::max({std::abs(e.e - kGoldenE), std::abs(e.a - kGoldenA), std::abs(e.b - kGoldenB),
                           std::abs(e.zc - kGoldenZc)});

    // cross-check on actual conditional states: kets cos(t/2)|0> + sin(t/2)|1>
    const auto st = make_state(PureMix{p, beta, dA});
    auto steer = [&](double t) {
        CVector k = CVector::Zero(dA);
        k(0) = std::cos(t / 2);
        k(1) = std::sin(t / 2);
        return conditional_state(st, k).r_b;
    };
    const double top = steer(0.0).z(), bottom = steer(kPi).z();
    const double a = (top - bottom) / 2, zc = (top + bottom) / 2;
    double lo = 0.0, hi = kPi;
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (steer(m1).x() < steer(m2).x()) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    const double b = steer(0.5 * (lo + hi)).x();
    const double cross = std::max({std::abs(a - kGoldenA), std::abs(zc - kGoldenZc), std::abs(b - kGoldenB),
                                   std::abs(zc / a - kGoldenE)});

    const auto sphere = ellipsoid_params(0.5, 1.0, kPi / 2, 4);
    const bool sphere_ok = std::abs(sphere.a - 2.0 / 3) < kGoldenTol && std::abs(sphere.b - 2.0 / 3) < kGoldenTol
                           && std::abs(sphere.zc) < kGoldenTol;
    const bool segment_ok = descriptor_kind(describe_set(PureMix{0.5, 0.0, 4})) == "segment";
    report("closed-form geometry", dev < kGoldenTol && cross < kGoldenTol && sphere_ok && segment_ok,
           "max dev " + sci(dev) + ", state cross-check " + sci(cross) + ", sphere " + (sphere_ok ? "ok" : "bad") +
               ", beta=0 " + (segment_ok ? "segment" : "misclassified"));
}

void classification()
{
    const FamilySpec hull_spec = TwoPureMix{0.2, 0.3, kPi / 5, kPi / 10, kPi, 0.0, 6};
    const FamilySpec cone_spec = TwoPureMix{0.2, 0.3, kPi / 5, 0.0, kPi, 0.0, 6};
    const FamilySpec tri_spec = TwoPureMix{0.3, 0.2, 0.0, 0.0, kPi / 2, 0.0, 4};
    const auto d3 = describe_set(hull_spec), d4 = describe_set(cone_spec), d5 = describe_set(tri_spec);
    bool kinds = std::holds_alternative<HullOfEllipsoids>(d3) && std::holds_alternative<Triangle>(d5);
    double rv = 0.0;
    if (const auto* ic = std::get_if<IceCream>(&d4)) {
        rv = ic->vertex.norm();
    } else {
        kinds = false;
    }
    const bool vertex_ok = std::abs(rv - 18.0 / 23.0) < 1e-12;
    double worst = -1.0;
    for (const auto& spec : {hull_spec, cone_spec, tri_spec}) {
        worst = std::max(worst, max_excess(spec, 100000, 2));
    }
    report("hull/ice-cream/triangle", kinds && vertex_ok && worst <= kMembershipTol,
           descriptor_kind(d3) + "/" + descriptor_kind(d4) + "/" + descriptor_kind(d5) + ", |rv| " +
               std::to_string(rv) + ", max excess " + sci(worst));
}

// random Schmidt mixture on levels of a dA qudit
FamilySpec random_schmidt_instance(int i, int dA, Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    switch (i % 3) {
    case 0: {
        const double pmin = -1.0 / (2 * dA - 1);
        return PureMix{pmin + (1.0 - pmin) * unit(rng), 0.05 + (kPi / 2 - 0.05) * unit(rng), dA};
    }
    case 1: {
        const double p1 = 0.8 * unit(rng), p2 = (1.0 - p1) * unit(rng);
        const double b2 = dA >= 4 ? kPi / 2 * unit(rng) : 0.0;
        return TwoPureMix{p1, p2, kPi / 2 * unit(rng), b2, kPi * unit(rng), 2 * kPi * unit(rng), dA};
    }
    default: {
        SchmidtMix mix;
        mix.dA = dA;
        int used = 0;
        double left = 1.0;
        while (used < dA) {
            const int levels = (dA - used >= 2 && unit(rng) < 0.7) ? 2 : 1;
            const double c = unit(rng);
            SchmidtComponent comp;
            comp.weight = left * unit(rng) * 0.8;
            comp.schmidt = levels == 2 ? std::vector<double>{c, 1.0 - c} : std::vector<double>{1.0};
            comp.gamma = kPi * unit(rng);
            comp.eta = 2 * kPi * unit(rng);
            left -= comp.weight;
            used += levels;
            mix.components.push_back(comp);
        }
        return mix;
    }
    }
}

void schmidt_oracle()
{
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng = make_stream(3, 0);
    const int dims[] = {3, 4, 6};
    const std::vector<EntropySpec> fs{VonNeumann{}, Linear{}, Tsallis{2.0}};
    double worst = 0.0, below = 0.0;
    for (int i = 0; i < 50; ++i) {
        const int dA = dims[i % 3];
        const FamilySpec spec = random_schmidt_instance(i / 3, dA, rng);
        const auto st = make_state(spec);
        for (const auto& f : fs) {
            const double a = min_conditional_schmidt(spec, f).value;
            BruteForceConfig c;
            c.restarts = kOracleRestarts;
            c.seed = static_cast<std::uint64_t>(100 + i);
            const double b = brute_force_min(st, f, c).value;
            worst = std::max(worst, std::abs(a - b));
            below = std::max(below, a - b);
        }
    }
    const double secs = seconds_since(t0);
    report("schmidt optimality vs brute force", worst < kOracleTol && below < kOracleTol && secs < kOracleSeconds,
           "max |diff| " + sci(worst) + ", max undershoot " + sci(below) + ", " + sci(secs) + " s");
}

// Linear conditional entropy over projective measurements on the 2-dim
// support of rho_A: 1-degree grid, then a simplex refinement.
double quad_grid_scan(const QuditQubitState& st)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(st.reduced_a());
    const int dA = st.qudit_dim();
    const CMatrix frame = es.eigenvectors().rightCols(2);
    auto value = [&](double alpha, double phi) {
        CMatrix cols(dA, 2);
        const Complex ph = std::polar(1.0, phi);
        cols.col(0) = std::cos(alpha / 2) * frame.col(0) + ph * std::sin(alpha / 2) * frame.col(1);
        cols.col(1) = -std::conj(ph) * std::sin(alpha / 2) * frame.col(0) + std::cos(alpha / 2) * frame.col(1);
        return conditional_entropy(st, measurement_from_unitary(complete_basis(cols)), Linear{});
    };
    double best = std::numeric_limits<double>::infinity();
    double ba = 0.0, bp = 0.0;
    for (int i = 0; i <= 180; ++i) {
        for (int j = 0; j < 360; ++j) {
            const double v = value(i * kPi / 180, j * kPi / 180);
            if (v < best) {
                best = v;
                ba = i * kPi / 180;
                bp = j * kPi / 180;
            }
        }
    }
    NelderMeadOptions o;
    o.initial_step = kPi / 180;
    o.ftol = 1e-15;
    o.xtol = 1e-10;
    RVector x0(2);
    x0 << ba, bp;
    return std::min(best, nelder_mead([&](const RVector& x) { return value(x(0), x(1)); }, x0, o).f);
}

QuditQubitState random_rank2_state(Rng& rng)
{
    std::uniform_int_distribution<int> dim(2, 4);
    const int dA = dim(rng);
    const CMatrix small = random_density_matrix(4, rng);
    const CMatrix iso = haar_unitary(dA, rng).leftCols(2);
    CMatrix k = CMatrix::Zero(2 * dA, 4);
    for (int x = 0; x < dA; ++x) {
        for (int a = 0; a < 2; ++a) {
            k(2 * x, 2 * a) = iso(x, a);
            k(2 * x + 1, 2 * a + 1) = iso(x, a);
        }
    }
    return QuditQubitState::from_density(k * small * k.adjoint(), dA);
}

void quadratic_eigenproblem()
{
    Rng rng = make_stream(4, 0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto st = random_rank2_state(rng);
        worst = std::max(worst, std::abs(min_quad_rank2(st).value - quad_grid_scan(st)));
    }
    double closed = 0.0;
    for (double p : {0.1, 0.35, 0.6, 0.9}) {
        for (double beta : {0.2, kPi / 4, 1.3}) {
            const double c2 = std::cos(beta) * std::cos(beta);
            const double czz = p - p * p * c2;
            const double lz = czz * czz / (1 - p * p * c2);
            const double lx = p * p * std::sin(beta) * std::sin(beta);
            Vec3 expect(lx, lx, lz);
            std::sort(expect.begin(), expect.end());
            const auto q = quad_eigenproblem(make_state(PureMix{p, beta, 2}).fano());
            closed = std::max(closed, (q.eigenvalues - expect).cwiseAbs().maxCoeff());
        }
    }
    report("quadratic eigenproblem", worst < kGridScanTol && closed < kClosedFormTol,
           "max |eig - grid| " + sci(worst) + ", closed forms " + sci(closed));
}

void rank2_separable()
{
    const auto t0 = std::chrono::steady_clock::now();
    double angle_dev = 0.0, value_dev = 0.0, balance = 0.0, vn_dev = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double ta = (i + 0.5) * kPi / 40;
        for (int j = 0; j < 20; ++j) {
            const double tb = (j + 0.5) * kPi / 40;
            for (int k = 0; k < 5; ++k) {
                const double pp = 0.5 + 0.1 * k;
                const Rank2Separable spec{pp, std::nullopt, ta, tb, 2};
                const auto st = make_state(spec);
                BruteForceConfig c;
                c.restarts = kRank2Restarts;
                const double lin = brute_force_min(st, Linear{}, c).value;
                const double vn = brute_force_min(st, VonNeumann{}, c).value;

                // measurement at the closed-form angle, built here
                const double phi = rank2_optimal_angle(pp, 1 - pp, ta);
                CMatrix u(2, 2);
                u << std::cos(phi / 2), -std::sin(phi / 2), std::sin(phi / 2), std::cos(phi / 2);
                const auto m = measurement_from_unitary(u);
                angle_dev = std::max(angle_dev, std::abs(conditional_entropy(st, m, Linear{}) - lin));
                const double s2 = rank2_s2_min(pp, 1 - pp, ta, tb);
                value_dev = std::max(value_dev, std::abs(s2 - lin));
                const double l0 = conditional_state(st, u.col(0)).r_b.norm();
                const double l1 = conditional_state(st, u.col(1)).r_b.norm();
                balance = std::max(balance, std::abs(l0 - l1));
                vn_dev = std::max(vn_dev, std::abs(concurrence_composition(std::sqrt(s2), VonNeumann{}) - vn));
            }
        }
    }
    const bool ok = angle_dev < kRank2Tol && value_dev < kRank2Tol && balance < kBalanceTol && vn_dev < kRank2Tol;
    report("rank-2 separable analytics", ok,
           "angle " + sci(angle_dev) + ", value " + sci(value_dev) + ", balance " + sci(balance) + ", vn " +
               sci(vn_dev) + ", " + sci(seconds_since(t0)) + " s");
}

// (2s+1) x (2s+1) spin pair with B compressed isometrically onto the span
// of its two spin-coherent states; conditional spectra are unchanged.
QuditQubitState explicit_spin_pair(const SpinAligned& spec)
{
    const int d = spin_dimension(spec.s);
    const CMatrix full = spin_aligned_full(spec);
    CMatrix plus_minus(d, 2);
    plus_minus.col(0) = spin_rotated_ket(spec.s, spec.theta);
    plus_minus.col(1) = spin_rotated_ket(spec.s, -spec.theta);
    const CMatrix v = Eigen::HouseholderQR<CMatrix>(plus_minus).householderQ() * CMatrix::Identity(d, 2);
    CMatrix k = CMatrix::Zero(d * d, 2 * d);
    for (int a = 0; a < d; ++a) {
        k.block(a * d, 2 * a, d, 2) = v;
    }
    return QuditQubitState::from_density(k.adjoint() * full * k, d);
}

double golden_max(const std::function<double(double)>& f, double lo, double hi)
{
    const double g = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > 1e-12) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    return 0.5 * (lo + hi);
}

void spin_application()
{
    double curve = 0.0, location = 0.0;
    double vmax = -1.0, vmin = 2.0;
    for (double s : {0.5, 1.0, 1.5}) {
        const int d = spin_dimension(s);
        for (double pp : {0.5, 0.7}) {
            for (int i = 1; i <= 8; ++i) {
                const double th = i * kPi / 17;
                BruteForceConfig c;
                c.restarts = kSpinRestarts;
                c.full_space = true;
                const auto st = explicit_spin_pair(SpinAligned{s, th, pp});
                (void)d;
                curve = std::max(curve, std::abs(brute_force_min(st, Linear{}, c).value - spin_s2_curve(s, th, pp)));
            }
        }
        const double tm = golden_max([s](double t) { return spin_s2_curve(s, t); }, 0.0, kPi / 2);
        location = std::max(location, std::abs(tm - spin_max_angle(s)));
        const double v = spin_s2_curve(s, tm);
        vmax = std::max(vmax, v);
        vmin = std::min(vmin, v);
        BruteForceConfig c;
        c.restarts = kSpinRestarts;
        c.full_space = true;
        curve = std::max(curve, std::abs(brute_force_min(explicit_spin_pair(SpinAligned{s, tm, 0.5}), Linear{}, c).value
                                         - 0.25));
    }
    bool exact = true;
    for (int i = 1; i <= 8; ++i) {
        const auto r = spin_min(0.5, i * kPi / 17);
        exact = exact && r.closed_form_averages && (*r.closed_form_averages)[0] == Vec3(1, 0, 0)
                && (*r.closed_form_averages)[1] == Vec3(-1, 0, 0)
                && (r.spin_averages[0] - Vec3(1, 0, 0)).norm() < 1e-15
                && (r.spin_averages[1] - Vec3(-1, 0, 0)).norm() < 1e-15;
    }
    report("spin-s application",
           curve < kSpinTol && vmax - vmin < kSpinSpreadTol && location < kSpinLocationTol && exact,
           "curve " + sci(curve) + ", max spread " + sci(vmax - vmin) + ", location " + sci(location) +
               ", s=1/2 averages " + (exact ? "exact" : "off"));
}

void no_signalling()
{
    Rng rng = make_stream(5, 0);
    std::uniform_int_distribution<int> dim(2, 6);
    double worst = 0.0, excess = -1.0;
    const std::vector<EntropySpec> fs{VonNeumann{}, Linear{}, Tsallis{2.0}};
    for (int i = 0; i < 1000; ++i) {
        const int dA = dim(rng);
        const int m = dA + i % (dA + 1);
        const auto st = QuditQubitState::from_density(random_density_matrix(2 * dA, rng), dA);
        const auto povm = measurement_from_frame(haar_unitary(m, rng).topRows(dA));
        Mat2c avg = Mat2c::Zero();
        for (const auto& e : povm.elements) {
            const auto co = conditional_state(st, e.ket);
            avg += e.weight * co.probability * co.rho_b;
        }
        worst = std::max(worst, (avg - st.reduced_b()).cwiseAbs().maxCoeff());
        for (const auto& f : fs) {
            excess = std::max(excess, conditional_entropy(st, povm, f) - entropy(st.reduced_b(), f));
        }
    }
    report("no-signalling", worst < kSignallingTol && excess <= 1e-12,
           "max |sum p rho - rho_B| " + sci(worst) + ", max S(B|A) - S(B) " + sci(excess));
}

void negativity_thresholds()
{
    double worst = 0.0;
    for (int dA : {2, 3, 4, 6}) {
        for (double beta : {kPi / 10, kPi / 4, kPi / 2}) {
            auto min_eig = [&](double p) { return negativity_test(make_state(PureMix{p, beta, dA})).min_eigenvalue; };
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (min_eig(mid) < 0 ? hi : lo) = mid;
            }
            worst = std::max(worst, std::abs(0.5 * (lo + hi) - 1.0 / (1.0 + dA * std::sin(beta))));
        }
    }
    report("negativity thresholds", worst < kThresholdTol, "max |p* - 1/(1 + dA sin beta)| " + sci(worst));
}

} // namespace

int main()
{
    const auto t0 = std::chrono::steady_clock::now();
    const std::pair<const char*, void (*)()> criteria[] = {
        {"ellipsoid containment", ellipsoid_containment},
        {"closed-form geometry", closed_form_geometry},
        {"hull/ice-cream/triangle", classification},
        {"schmidt optimality vs brute force", schmidt_oracle},
        {"quadratic eigenproblem", quadratic_eigenproblem},
        {"rank-2 separable analytics", rank2_separable},
        {"spin-s application", spin_application},
        {"no-signalling", no_signalling},
        {"negativity thresholds", negativity_thresholds},
    };
    for (const auto& [name, run] : criteria) {
        try {
            run();
        } catch (const std::exception& e) {
            report(name, false, std::string("threw: ") + e.what());
        }
    }
    std::cout << (9 - failures) << "/9 criteria passed in " << std::fixed << std::setprecision(1)
              << seconds_since(t0) << " s" << std::endl;
    return failures == 0 ? 0 : 1;
}
