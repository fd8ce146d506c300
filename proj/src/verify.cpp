#include "condqubit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "condqubit/brute_force.hpp"
#include "condqubit/entropy.hpp"
#include "condqubit/error.hpp"
#include "condqubit/geometry.hpp"
#include "condqubit/measurement.hpp"
#include "condqubit/nelder_mead.hpp"
#include "condqubit/operator_basis.hpp"
#include "condqubit/random.hpp"
#include "condqubit/state_factory.hpp"

namespace condqubit {

namespace {

constexpr double kPi = std::numbers::pi;

std::string sci(double x)
{
    std::ostringstream os;
    os << std::scientific << std::setprecision(2) << x;
    return os.str();
}

CheckResult check(const std::string& name, bool ok, const std::string& detail)
{
    return CheckResult{"", name, ok, detail};
}

QuditQubitState random_state(int dA, Rng& rng)
{
    return QuditQubitState::from_density(random_density_matrix(2 * dA, rng), dA);
}

// rank-1 POVM with m outcomes: first dA rows of a Haar unitary
RankOneMeasurement random_povm(int dA, int m, Rng& rng)
{
    const CMatrix u = haar_unitary(m, rng);
    return measurement_from_frame(u.topRows(dA));
}

RankOneMeasurement random_measurement(int dA, Rng& rng)
{
    std::uniform_int_distribution<int> extra(0, dA);
    const int m = dA + extra(rng);
    return m == dA ? measurement_from_unitary(haar_unitary(dA, rng)) : random_povm(dA, m, rng);
}

const std::vector<int> kDims{2, 3, 4, 6};

// --------------------------------------------------------------------------
// states
// --------------------------------------------------------------------------

std::vector<CheckResult> states_suite(std::uint64_t seed)
{
    std::vector<CheckResult> out;
    Rng rng = make_stream(seed, 101);

    {
        double worst = 0.0;
        for (int d : kDims) {
            const RMatrix g = basis_for(d).gram();
            worst = std::max(worst, (g - d * RMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff());
        }
        out.push_back(check("gram matrix equals d * identity", worst < 1e-12, "max dev " + sci(worst)));
    }
    {
        double worst = 0.0, norm_excess = -1.0, pure_dev = 0.0;
        for (int d : kDims) {
            const auto& basis = basis_for(d);
            for (int i = 0; i < 50; ++i) {
                const CMatrix rho = random_density_matrix(d, rng);
                const RVector r = bloch_vector(rho, basis);
                worst = std::max(worst, (state_from_bloch(r, basis) - rho).cwiseAbs().maxCoeff());
                norm_excess = std::max(norm_excess, r.squaredNorm() - (d - 1));
                const CVector k = haar_ket(d, rng);
                pure_dev = std::max(pure_dev, std::abs(ket_bloch_vector(k, basis).squaredNorm() - (d - 1)));
            }
        }
        out.push_back(check("bloch round trip", worst < 1e-12, "max dev " + sci(worst)));
        out.push_back(check("bloch norm bound, equality for pure states",
                            norm_excess <= 1e-10 && pure_dev < 1e-10,
                            "max |r|^2-(d-1) " + sci(norm_excess) + ", pure dev " + sci(pure_dev)));
    }
    {
        double worst = 0.0, purity = 0.0;
        for (int dA : kDims) {
            for (int i = 0; i < 25; ++i) {
                const CMatrix rho = random_density_matrix(2 * dA, rng);
                const FanoData f = fano_decompose(rho, dA);
                worst = std::max(worst, (fano_reconstruct(f, dA) - rho).cwiseAbs().maxCoeff());
                purity = std::max(purity, std::abs(fano_purity(f, dA) - (rho * rho).trace().real()));
            }
        }
        out.push_back(check("fano reconstruction and purity", worst < 1e-12 && purity < 1e-12,
                            "max dev " + sci(worst) + ", purity dev " + sci(purity)));
    }
    {
        const int dA = 4;
        const double v = -1.0 / (2 * dA - 2);
        int mismatches = 0, probed = 0;
        for (int i = 0; i < 50; ++i) {
            for (int j = 0; j < 50; ++j) {
                const double p1 = -0.3 + 1.4 * (i + 0.5) / 50.0;
                const double p2 = -0.3 + 1.4 * (j + 0.5) / 50.0;
                const double g1 = 1.0 - p1 - p2;
                const double g2 = 1.0 - p1 + (2 * dA - 1) * p2;
                const double g3 = 1.0 - p2 + (2 * dA - 1) * p1;
                if (std::min({std::abs(g1), std::abs(g2), std::abs(g3)}) < 1e-9) {
                    continue;
                }
                const bool inside = g1 > 0 && g2 > 0 && g3 > 0;
                bool built = true;
                try {
                    make_state(TwoPureMix{p1, p2, kPi / 5, kPi / 10, kPi / 3, 0.0, dA});
                } catch (const Error& e) {
                    built = false;
                }
                ++probed;
                mismatches += inside != built ? 1 : 0;
            }
        }
        const auto vertex = make_state(TwoPureMix{v, v, kPi / 5, kPi / 10, kPi / 3, 0.0, dA});
        const double mn = Eigen::SelfAdjointEigenSolver<CMatrix>(vertex.rho()).eigenvalues().minCoeff();
        out.push_back(check("feasibility triangle (50x50 grid)", mismatches == 0,
                            std::to_string(mismatches) + "/" + std::to_string(probed) + " mismatches"));
        out.push_back(check("triangle vertex has a zero eigenvalue", std::abs(mn) < 1e-12,
                            "min eigenvalue " + sci(mn)));
    }
    {
        double worst = 0.0;
        for (double s : {0.5, 1.0, 1.5, 2.0}) {
            for (double th : {0.1, 0.5, 1.0, 1.4}) {
                const Complex ov = spin_rotated_ket(s, -th).dot(spin_rotated_ket(s, th));
                worst = std::max(worst, std::abs(ov - std::pow(std::cos(th), 2 * s)));
            }
        }
        out.push_back(check("spin overlap equals cos^(2s)", worst < 1e-12, "max dev " + sci(worst)));
    }
    {
        const double beta = kPi / 10;
        const int dA = 4;
        auto min_eig = [&](double p) {
            return negativity_test(make_state(PureMix{p, beta, dA})).min_eigenvalue;
        };
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (min_eig(mid) < 0 ? hi : lo) = mid;
        }
        const double expect = 1.0 / (1.0 + dA * std::sin(beta));
        const double dev = std::abs(0.5 * (lo + hi) - expect);
        out.push_back(check("negativity threshold (dA=4, beta=pi/10)", dev < 1e-6, "dev " + sci(dev)));
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const int dA = kDims[static_cast<std::size_t>(i) % kDims.size()];
            const auto st = random_state(dA, rng);
            const CVector k = haar_ket(dA, rng);
            const auto co = conditional_state(st, k);
            double p = 0.0;
            const Vec3 rf = conditional_bloch_fano(st, ket_bloch_vector(k, basis_for(dA)), &p);
            worst = std::max({worst, (co.r_b - rf).norm(), std::abs(co.probability - p)});
        }
        out.push_back(check("conditional state dual path", worst < 1e-10, "max dev " + sci(worst)));
    }
    {
        const auto st = make_state(PureMix{0.5, kPi / 10, 4});
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            CVector k = haar_ket(4, rng);
            CVector k2 = k;
            const CVector rot = haar_unitary(2, rng) * k.tail(2);
            k2.tail(2) = rot;
            worst = std::max(worst, (conditional_state(st, k).rho_b - conditional_state(st, k2).rho_b)
                                        .cwiseAbs().maxCoeff());
        }
        out.push_back(check("out-of-support components do not matter", worst < 1e-12, "max dev " + sci(worst)));
    }
    {
        double psum = 0.0, sig = 0.0;
        bool complete = true;
        for (int i = 0; i < 200; ++i) {
            const int dA = kDims[static_cast<std::size_t>(i) % kDims.size()];
            const auto st = random_state(dA, rng);
            const auto m = random_measurement(dA, rng);
            const auto cert = validate_povm(m, dA, &st);
            complete = complete && cert.complete;
            psum = std::max(psum, std::abs(cert.probability_sum - 1.0));
            sig = std::max(sig, cert.signalling_residual);
        }
        out.push_back(check("povm completeness, probabilities, no-signalling",
                            complete && psum < 1e-12 && sig < 1e-10,
                            "prob dev " + sci(psum) + ", signalling " + sci(sig)));
    }
    return out;
}

// --------------------------------------------------------------------------
// geometry
// --------------------------------------------------------------------------

std::vector<Vec3> cloud_points(const FamilySpec& spec, std::size_t n, std::uint64_t seed)
{
    const auto cloud = sample_cloud(make_state(spec), n, seed);
    std::vector<Vec3> pts;
    pts.reserve(cloud.size());
    for (const auto& c : cloud) {
        pts.push_back(c.r_b);
    }
    return pts;
}

CheckResult cloud_membership(const std::string& name, const FamilySpec& spec, std::uint64_t seed)
{
    const auto desc = describe_set(spec);
    const MembershipOracle oracle(desc);
    const auto pts = cloud_points(spec, 100000, seed);
    double worst = -1.0;
    std::size_t outside = 0;
    for (const auto& x : pts) {
        const double ex = oracle.excess(x);
        worst = std::max(worst, ex);
        outside += ex > 1e-7 ? 1 : 0;
    }
    return check(name, outside == 0,
                 descriptor_kind(desc) + ", " + std::to_string(outside) + " outside, max excess " + sci(worst));
}

std::vector<CheckResult> geometry_suite(std::uint64_t seed)
{
    std::vector<CheckResult> out;
    Rng rng = make_stream(seed, 202);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> dim(2, 6);

    {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const int dA = dim(rng);
            const double pmin = -1.0 / (2 * dA - 1);
            const double p = pmin + (0.999 - pmin) * unit(rng);
            if (std::abs(p) < 1e-3) {
                continue;
            }
            const double q = 0.01 + 0.99 * unit(rng);
            const double beta = 0.05 + (kPi / 2 - 0.05) * unit(rng);
            const auto e = ellipsoid_params(p, q, beta, dA);
            const Vec3 x = e.polar_point(2 * kPi * unit(rng), 2 * kPi * unit(rng));
            worst = std::max(worst, std::abs(e.implicit(x)));
        }
        out.push_back(check("polar and cartesian forms agree", worst < 1e-12, "max residual " + sci(worst)));
    }
    {
        const auto& grid = direction_grid();
        double worst = -1.0;
        for (int i = 0; i < 1000; ++i) {
            const int dA = dim(rng);
            const double pmin = -1.0 / (2 * dA - 1);
            const double p = pmin + (1.0 - pmin) * unit(rng);
            const double beta = 0.05 + (kPi / 2 - 0.05) * unit(rng);
            const double q = unit(rng);
            if (std::abs(p) < 1e-3 || q < 1e-3) {
                continue;
            }
            const auto outer = ellipsoid_params(p, 1.0, beta, dA);
            const auto inner = ellipsoid_params(p, q, beta, dA);
            for (const auto& u : grid) {
                worst = std::max(worst, inner.support(u) - outer.support(u));
            }
        }
        out.push_back(check("q=1 ellipsoid contains the q<1 ellipsoids", worst <= 1e-12,
                            "max support excess " + sci(worst)));
    }
    {
        double focus = 0.0, origin = -1.0;
        for (int i = 0; i < 1000; ++i) {
            const int dA = dim(rng);
            const double pmin = -1.0 / (2 * dA - 1);
            const double p = pmin + (1.0 - pmin) * unit(rng);
            const double beta = 0.05 + (kPi / 2 - 0.05) * unit(rng);
            if (std::abs(p) < 1e-3) {
                continue;
            }
            const auto e = ellipsoid_params(p, 1.0, beta, dA);
            focus = std::max(focus, std::abs(e.zc - e.a * e.e));
            origin = std::max(origin, MembershipOracle(FilledEllipsoid{e}).excess(Vec3::Zero()));
        }
        out.push_back(check("focus relation zc = a e, origin inside", focus < 1e-12 && origin <= 1e-9,
                            "max |zc - a e| " + sci(focus) + ", origin excess " + sci(origin)));
    }
    {
        const FamilySpec ref_spec = PureMix{0.5, kPi / 10, 4};
        const auto pts = cloud_points(ref_spec, 1000000, seed);
        const auto gap = hull_gap(pts, describe_set(ref_spec));
        out.push_back(check("hull tightness (1e6 samples, gap < 5e-3)", gap.max_gap < 5e-3,
                            "max gap " + sci(gap.max_gap)));
    }
    out.push_back(cloud_membership("cloud inside ellipsoid, p=0.5", PureMix{0.5, kPi / 10, 4}, seed));
    out.push_back(cloud_membership("cloud inside ellipsoid, p=-0.14", PureMix{-0.14, kPi / 10, 4}, seed));
    out.push_back(cloud_membership("cloud inside hull of ellipsoids",
                                   TwoPureMix{0.2, 0.3, kPi / 5, kPi / 10, kPi, 0.0, 6}, seed));
    out.push_back(cloud_membership("cloud inside ice cream", TwoPureMix{0.2, 0.3, kPi / 5, 0.0, kPi, 0.0, 6},
                                   seed));
    out.push_back(cloud_membership("cloud inside triangle", TwoPureMix{0.3, 0.2, 0.0, 0.0, kPi / 2, 0.0, 4},
                                   seed));
    {
        const auto ice = describe_set(TwoPureMix{0.2, 0.3, kPi / 5, 0.0, kPi, 0.0, 6});
        const auto* ic = std::get_if<IceCream>(&ice);
        double worst = 1.0;
        if (ic != nullptr) {
            const ConeTangency cone(*ic);
            worst = 0.0;
            for (const auto& x : cone.tangent_curve(64)) {
                worst = std::max({worst, std::abs(cone.tangency_residual(x)), std::abs(cone.ellipsoid_residual(x))});
            }
        }
        out.push_back(check("cone tangent circle residuals", ic != nullptr && worst < 1e-10,
                            "max residual " + sci(worst)));
    }
    {
        bool same = true;
        for (double g : {0.0, 0.7, 1.9, kPi}) {
            for (double p2 : {0.29, 0.31}) {
                const bool expect = p2 >= 0.5 / (1.0 + std::cos(0.4));
                same = same && protrusion_test(0.5, p2, kPi / 2, 0.4, g) == expect;
            }
        }
        out.push_back(check("protrusion at beta1 = pi/2 ignores gamma", same, same ? "ok" : "mismatch"));
    }
    return out;
}

// --------------------------------------------------------------------------
// entropy
// --------------------------------------------------------------------------

const std::vector<EntropySpec>& oracle_entropies()
{
    static const std::vector<EntropySpec> fs{VonNeumann{}, Linear{}, Tsallis{2.0}};
    return fs;
}

// Linear conditional entropy minimized over projective measurements on the
// two-dimensional support of rho_A by a 1-degree grid, then refined.
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
            const double a = i * kPi / 180, p = j * kPi / 180;
            const double v = value(a, p);
            if (v < best) {
                best = v;
                ba = a;
                bp = p;
            }
        }
    }
    NelderMeadOptions o;
    o.initial_step = kPi / 180;
    o.ftol = 1e-14;
    o.xtol = 1e-10;
    RVector x0(2);
    x0 << ba, bp;
    const auto r = nelder_mead([&](const RVector& x) { return value(x(0), x(1)); }, x0, o);
    return std::min(best, r.f);
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

std::vector<CheckResult> entropy_suite(std::uint64_t seed)
{
    std::vector<CheckResult> out;
    Rng rng = make_stream(seed, 303);
    BruteForceConfig bf;
    bf.seed = seed;
    bf.restarts = 8;

    {
        const std::vector<FamilySpec> specs{
            PureMix{0.5, kPi / 10, 4}, PureMix{-0.14, kPi / 10, 4}, PureMix{0.8, 1.2, 3},
            TwoPureMix{0.2, 0.3, kPi / 5, kPi / 10, kPi, 0.0, 6}, TwoPureMix{0.3, 0.2, 0.0, 0.0, kPi / 2, 0.0, 4},
            SchmidtMix{{SchmidtComponent{0.4, {0.7, 0.3}, 0.5, 0.2}, SchmidtComponent{0.3, {1.0}, 2.0, 0.0}}, 5,
                       std::nullopt}};
        double worst = 0.0, below = 0.0;
        for (const auto& spec : specs) {
            const auto st = make_state(spec);
            for (const auto& f : oracle_entropies()) {
                const double a = min_conditional_schmidt(spec, f).value;
                const double b = brute_force_min(st, f, bf).value;
                worst = std::max(worst, std::abs(a - b));
                below = std::max(below, a - b);
            }
        }
        out.push_back(check("schmidt-basis minimum vs brute force", worst < 1e-8,
                            "max |diff| " + sci(worst) + ", max undercut " + sci(below)));
    }
    {
        double worst = 0.0;
        for (double ta : {0.3, kPi / 3}) {
            for (double tb : {kPi / 4, 1.3}) {
                const Rank2Separable spec{0.7, std::nullopt, ta, tb, 2};
                const auto st = make_state(spec);
                for (const auto& f : oracle_entropies()) {
                    worst = std::max(worst, std::abs(rank2_separable_min(spec, f).value
                                                     - brute_force_min(st, f, bf).value));
                }
            }
        }
        out.push_back(check("rank-2 closed form vs brute force", worst < 1e-8, "max |diff| " + sci(worst)));
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const int dA = kDims[static_cast<std::size_t>(i) % kDims.size()];
            const auto st = random_state(dA, rng);
            const auto m = random_measurement(dA, rng);
            const double direct = conditional_entropy(st, m, Linear{});
            const double viagain = qubit_entropy(st.r_b().norm(), Linear{}) - quad_info_gain(st, m);
            worst = std::max(worst, std::abs(direct - viagain));
        }
        out.push_back(check("quadratic gain identity", worst < 1e-10, "max dev " + sci(worst)));
    }
    {
        const std::vector<EntropySpec> fs{VonNeumann{}, Linear{}, Tsallis{0.8}, Tsallis{2.0}, Tsallis{3.0}};
        double excess = -1.0, negative = 0.0;
        for (int i = 0; i < 300; ++i) {
            const int dA = kDims[static_cast<std::size_t>(i) % kDims.size()];
            const auto st = random_state(dA, rng);
            const auto m = random_measurement(dA, rng);
            for (const auto& f : fs) {
                const double c = conditional_entropy(st, m, f);
                const double marg = qubit_entropy(st.r_b().norm(), f);
                excess = std::max(excess, c - marg);
                negative = std::min({negative, c, quad_info_gain(st, m)});
            }
        }
        out.push_back(check("conditional <= marginal, nonnegative", excess <= 1e-10 && negative >= -1e-12,
                            "max excess " + sci(excess) + ", min value " + sci(negative)));
    }
    {
        double worst = 0.0;
        for (double pp : {0.55, 0.7, 0.9}) {
            for (double ta : {0.2, 0.9, 1.4}) {
                const Rank2Separable spec{pp, std::nullopt, ta, 0.8, 2};
                const auto st = make_state(spec);
                const auto r = rank2_separable_min(spec, Linear{});
                const auto o0 = conditional_state(st, r.measurement.elements[0].ket);
                const auto o1 = conditional_state(st, r.measurement.elements[1].ket);
                worst = std::max(worst, std::abs(o0.r_b.norm() - o1.r_b.norm()));
            }
        }
        out.push_back(check("outcome balance at the rank-2 optimum", worst < 1e-10, "max dev " + sci(worst)));
    }
    {
        double worst = 0.0;
        const PureMix pm{0.5, kPi / 10, 4};
        const auto e = ellipsoid_params(pm.p, 1.0, pm.beta, pm.dA);
        const auto st = make_state(pm);
        const auto m = schmidt_measurement(pm);
        worst = std::max(worst, (conditional_state(st, m.elements[0].ket).r_b - (e.zc + e.a) * Vec3::UnitZ()).norm());
        worst = std::max(worst, (conditional_state(st, m.elements[1].ket).r_b - (e.zc - e.a) * Vec3::UnitZ()).norm());
        const TwoPureMix tp{0.2, 0.3, kPi / 5, 0.0, kPi, 0.0, 6};
        const auto ice = std::get<IceCream>(describe_set(tp));
        const auto st2 = make_state(tp);
        const auto m2 = schmidt_measurement(tp);
        worst = std::max(worst, (conditional_state(st2, m2.elements[2].ket).r_b - ice.vertex).norm());
        worst = std::max(worst, (conditional_state(st2, m2.elements[0].ket).r_b
                                 - ice.ellipsoid.center() - ice.ellipsoid.a * ice.ellipsoid.axis).norm());
        out.push_back(check("optimal outcomes at ellipsoid extrema and cone vertex", worst < 1e-9,
                            "max dev " + sci(worst)));
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const auto st = random_rank2_state(rng);
            worst = std::max(worst, std::abs(min_quad_rank2(st).value - quad_grid_scan(st)));
        }
        out.push_back(check("eigenproblem vs angular grid scan", worst < 1e-6, "max |diff| " + sci(worst)));
    }
    {
        const double p = 0.6, beta = kPi / 4;
        const auto q = quad_eigenproblem(make_state(PureMix{p, beta, 2}).fano());
        const double cb = std::cos(beta), sb = std::sin(beta);
        const double czz = p * (1.0 - p * cb * cb);
        const double lz = czz * czz / (1.0 - p * p * cb * cb);
        const double lx = p * p * sb * sb;
        const double dev = std::max(std::abs(q.lambda_max - lz), std::abs(q.eigenvalues(1) - lx));
        out.push_back(check("two-qubit eigenvalues lambda_z, lambda_x", dev < 1e-10 && q.k.z() > 1 - 1e-12,
                            "max dev " + sci(dev)));
    }
    {
        double worst = 0.0;
        for (double th : {0.2, 0.7, 1.2}) {
            for (double pp : {0.5, 0.8}) {
                const auto sm = spin_min(0.5, th, pp);
                const double r2 = rank2_separable_min(Rank2Separable{pp, std::nullopt, th, th, 2}, Linear{}).value;
                worst = std::max(worst, std::abs(sm.s2 - r2));
            }
        }
        out.push_back(check("spin-1/2 reduces to the rank-2 qubit pair", worst < 1e-14, "max dev " + sci(worst)));
    }
    {
        double worst = 0.0;
        for (double th : {0.3, 0.5718588702012103, 1.0}) {
            const auto st = make_state(SpinAligned{1.0, th, 0.5});
            worst = std::max(worst, std::abs(brute_force_min(st, Linear{}, bf).value - spin_s2_curve(1.0, th)));
        }
        out.push_back(check("spin-1 curve vs brute force", worst < 1e-6, "max |diff| " + sci(worst)));
    }
    {
        const auto product = make_state(PureMix{0.0, 0.0, 3});
        const auto bell = make_state(PureMix{1.0, kPi / 2, 2});
        const FamilySpec cc = TwoPureMix{0.5, 0.5, 0.0, 0.0, kPi, 0.0, 3};
        const double d0 = discord(product);
        const double d1 = discord(bell);
        const double d2 = discord(make_state(cc), &cc);
        const double dev = std::max({std::abs(d0), std::abs(d1 - 1.0), std::abs(d2)});
        out.push_back(check("discord: product 0, Bell pair 1, classical 0", dev < 1e-8, "max dev " + sci(dev)));
    }
    return out;
}

} // namespace

const std::vector<std::string>& verify_suites()
{
    static const std::vector<std::string> names{"states", "geometry", "entropy", "all"};
    return names;
}

std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed)
{
    using Runner = std::function<std::vector<CheckResult>(std::uint64_t)>;
    const std::vector<std::pair<std::string, Runner>> all{
        {"states", states_suite}, {"geometry", geometry_suite}, {"entropy", entropy_suite}};
    std::vector<CheckResult> results;
    bool found = false;
    for (const auto& [name, fn] : all) {
        if (suite == "all" || suite == name) {
            found = true;
            for (auto r : fn(seed)) {
                r.suite = name;
                results.push_back(std::move(r));
            }
        }
    }
    if (!found) {
        throw Error(ErrorCode::Validation, "unknown suite '" + suite + "' (states, geometry, entropy, all)");
    }
    return results;
}

bool print_report(std::ostream& os, const std::vector<CheckResult>& results)
{
    std::size_t failed = 0;
    for (const auto& r : results) {
        os << (r.passed ? "PASS" : "FAIL") << "  " << std::left << std::setw(9) << r.suite << std::setw(56)
           << r.name << r.detail << '\n';
        failed += r.passed ? 0 : 1;
    }
    os << results.size() - failed << "/" << results.size() << " checks passed\n";
    return failed == 0;
}

} // namespace condqubit
