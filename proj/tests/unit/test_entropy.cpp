#include <doctest.h>

#include <cmath>
#include <numbers>

#include "condqubit/brute_force.hpp"
#include "condqubit/entropy.hpp"
#include "condqubit/error.hpp"
#include "condqubit/random.hpp"

using namespace condqubit;
using std::numbers::pi;

namespace {

const std::vector<EntropySpec> kConvex{VonNeumann{}, Linear{}, Tsallis{0.8}, Tsallis{2.0}, Tsallis{3.0}};

BruteForceConfig quick()
{
    BruteForceConfig c;
    c.restarts = 6;
    return c;
}

// Linear conditional entropy on the uncompressed (2s+1) x (2s+1) state:
// sum_j p_j 2 (1 - Tr rho_j^2).
double linear_conditional_full(const CMatrix& rho, int d, const RankOneMeasurement& m)
{
    double s = 0.0;
    for (const auto& e : m.elements) {
        CMatrix rb = CMatrix::Zero(d, d);
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                rb += std::conj(e.ket(a)) * e.ket(b) * rho.block(a * d, b * d, d, d);
            }
        }
        const double p = rb.trace().real();
        if (p < 1e-14) {
            continue;
        }
        rb /= p;
        s += e.weight * p * 2.0 * (1.0 - (rb * rb).trace().real());
    }
    return s;
}

} // namespace

TEST_CASE("entropy of simple states")
{
    const CMatrix mixed = CMatrix::Identity(2, 2) / 2.0;
    CHECK(entropy(mixed, VonNeumann{}) == doctest::Approx(1.0).epsilon(1e-15));
    for (const auto& f : kConvex) {
        CHECK(entropy(mixed, f) == doctest::Approx(1.0).epsilon(1e-14));
        CMatrix pure = CMatrix::Zero(3, 3);
        pure(1, 1) = 1.0;
        CHECK(entropy(pure, f) == doctest::Approx(0.0));
    }
    for (double r : {0.0, 0.3, 0.9}) {
        CHECK(qubit_entropy(r, Linear{}) == doctest::Approx(1 - r * r).epsilon(1e-15));
    }
    RVector bad(2);
    bad << 1.1, -0.1;
    CHECK_THROWS_AS(entropy_of_spectrum(bad, VonNeumann{}), Error);
    RVector tiny(2);
    tiny << 1.0, -1e-12;
    CHECK(entropy_of_spectrum(tiny, VonNeumann{}) == doctest::Approx(0.0));
}

TEST_CASE("entropy spec parsing and validation")
{
    CHECK(entropy_name(parse_entropy("vn")) == "vn");
    CHECK(entropy_name(parse_entropy("linear")) == "linear");
    CHECK(std::get<Tsallis>(parse_entropy("tsallis:2.5")).q == 2.5);
    CHECK_THROWS_AS(parse_entropy("tsallis:1"), Error);
    CHECK_THROWS_AS(parse_entropy("tsallis:-2"), Error);
    CHECK_THROWS_AS(parse_entropy("tsallis:"), Error);
    CHECK_THROWS_AS(parse_entropy("shannon"), Error);
    CHECK(convex_f_class(VonNeumann{}));
    CHECK(convex_f_class(Linear{}));
    CHECK(convex_f_class(Tsallis{(5 - std::sqrt(13.0)) / 2}));
    CHECK(convex_f_class(Tsallis{(5 + std::sqrt(13.0)) / 2}));
    CHECK_FALSE(convex_f_class(Tsallis{0.5}));
    CHECK_FALSE(convex_f_class(Tsallis{5.0}));
}

TEST_CASE("F composition is convex in the convex class")
{
    for (const auto& f : kConvex) {
        for (int i = 1; i < 99; ++i) {
            const double x = i / 100.0, h = 1e-3;
            const double second = concurrence_composition(x + h, f) - 2 * concurrence_composition(x, f)
                                  + concurrence_composition(x - h, f);
            CHECK(second >= -1e-12);
        }
        CHECK(concurrence_composition(0.0, f) == doctest::Approx(0.0));
        CHECK(concurrence_composition(1.0, f) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("conditional entropy special cases")
{
    Rng rng = make_stream(31, 0);
    const CMatrix a = random_density_matrix(3, rng);
    const CMatrix b = random_density_matrix(2, rng);
    CMatrix rho(6, 6);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            rho.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
    }
    const auto product = QuditQubitState::from_density(rho, 3);
    const auto m = measurement_from_unitary(haar_unitary(3, rng));
    for (const auto& f : kConvex) {
        CHECK(conditional_entropy(product, m, f) == doctest::Approx(entropy(b, f)).epsilon(1e-12));
    }
    const auto bell = make_state(PureMix{1.0, 1.1, 3});
    for (const auto& f : kConvex) {
        CHECK(std::abs(conditional_entropy(bell, schmidt_measurement(PureMix{1.0, 1.1, 3}), f)) < 1e-14);
    }
}

TEST_CASE("schmidt minimum: closed form and both code paths")
{
    for (const auto& f : kConvex) {
        CHECK(std::abs(min_conditional_schmidt(PureMix{1.0, 0.7, 4}, f).value) < 1e-14);
        CHECK(min_conditional_schmidt(PureMix{0.0, 0.7, 4}, f).value == doctest::Approx(1.0).epsilon(1e-14));
        for (const FamilySpec spec : {FamilySpec{PureMix{0.5, pi / 10, 4}}, FamilySpec{PureMix{-0.1, 1.2, 3}},
                                      FamilySpec{TwoPureMix{0.2, 0.3, pi / 5, pi / 10, pi, 0.0, 6}}}) {
            const auto r = min_conditional_schmidt(spec, f);
            CHECK(r.method == "analytic-schmidt");
            CHECK(conditional_entropy(make_state(spec), r.measurement, f) == doctest::Approx(r.value).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(min_conditional_schmidt(Rank2Separable{}, Linear{}), Error);
}

TEST_CASE("schmidt minimum agrees with brute force on the reference state")
{
    const PureMix spec{0.5, pi / 10, 4};
    for (const auto& f : {EntropySpec{Linear{}}, EntropySpec{VonNeumann{}}}) {
        const double a = min_conditional_schmidt(spec, f).value;
        const auto b = brute_force_min(make_state(spec), f, quick());
        CHECK(std::abs(a - b.value) < 1e-8);
    }
}

TEST_CASE("quadratic gain")
{
    Rng rng = make_stream(32, 0);
    for (int i = 0; i < 100; ++i) {
        const int dA = 2 + i % 4;
        const auto st = QuditQubitState::from_density(random_density_matrix(2 * dA, rng), dA);
        const auto m = measurement_from_frame(haar_unitary(dA + i % 3, rng).topRows(dA));
        const double gain = quad_info_gain(st, m);
        CHECK(gain >= -1e-12);
        CHECK(qubit_entropy(st.r_b().norm(), Linear{}) - gain
              == doctest::Approx(conditional_entropy(st, m, Linear{})).epsilon(1e-10));
    }
    // no correlations, no gain
    const auto mixed = make_state(PureMix{0.0, 0.0, 3});
    CHECK(std::abs(quad_info_gain(mixed, measurement_from_unitary(haar_unitary(3, rng)))) < 1e-15);
}

TEST_CASE("two-qubit pure mix eigenproblem")
{
    const double p = 0.6, beta = pi / 4;
    const auto st = make_state(PureMix{p, beta, 2});
    const auto q = quad_eigenproblem(st.fano());
    CHECK(q.lambda_max == doctest::Approx(0.42 * 0.42 / 0.82).epsilon(1e-12));
    CHECK(q.lambda_max == doctest::Approx(0.21512195121951222).epsilon(1e-12));
    CHECK(q.eigenvalues(1) == doctest::Approx(0.18).epsilon(1e-12));
    CHECK(q.eigenvalues(0) == doctest::Approx(0.18).epsilon(1e-12));
    CHECK(q.k.isApprox(Vec3::UnitZ(), 1e-12));
    // the projective gain along z equals lambda_z and the realized entropy drop
    const double gz = quad_projective_gain(st.fano(), Vec3::UnitZ());
    CHECK(gz == doctest::Approx(q.lambda_max).epsilon(1e-12));
    const auto mz = measurement_from_unitary(CMatrix::Identity(2, 2));
    CHECK(qubit_entropy(st.r_b().norm(), Linear{}) - conditional_entropy(st, mz, Linear{})
          == doctest::Approx(gz).epsilon(1e-12));
    const auto r = min_quad_rank2(st);
    CHECK(r.value == doctest::Approx(qubit_entropy(st.r_b().norm(), Linear{}) - q.lambda_max).epsilon(1e-12));
    CHECK(r.method == "analytic-eig");
}

TEST_CASE("degenerate eigenvalue picks z, sign fixed")
{
    const auto mixed = make_state(PureMix{0.0, 0.0, 2});
    const auto q = quad_eigenproblem(mixed.fano());
    CHECK(q.multiplicity == 3);
    CHECK(q.k.isApprox(Vec3::UnitZ()));
    const auto bell = make_state(PureMix{0.9, pi / 2, 2});
    const auto qb = quad_eigenproblem(bell.fano());
    CHECK(qb.multiplicity == 3);
    CHECK(qb.k.isApprox(Vec3::UnitZ()));
}

TEST_CASE("eigenproblem needs a two-dimensional support")
{
    CHECK_THROWS_AS(min_quad_rank2(make_state(PureMix{0.5, 0.3, 4})), Error);
    CHECK_NOTHROW(min_quad_rank2(make_state(Rank2Separable{0.7, std::nullopt, 0.6, 0.4, 5})));
}

TEST_CASE("rank-2 separable closed forms")
{
    CHECK(rank2_s2_min(0.7, 0.3, pi / 3, pi / 4) == doctest::Approx(0.105).epsilon(1e-14));
    CHECK(rank2_optimal_angle(0.7, 0.3, pi / 3) == doctest::Approx(1.3438352477532258).epsilon(1e-14));
    for (double ta : {0.2, 1.0, 1.5}) {
        CHECK(rank2_optimal_angle(0.5, 0.5, ta) == doctest::Approx(pi / 2).epsilon(1e-15));
    }
    CHECK(std::abs(rank2_s2_min(0.7, 0.3, pi / 2, 0.9)) < 1e-15);
    CHECK(std::abs(rank2_s2_min(0.7, 0.3, 0.4, 0.0)) < 1e-15);

    const Rank2Separable spec{0.7, std::nullopt, pi / 3, pi / 4, 2};
    const auto st = make_state(spec);
    const auto lin = rank2_separable_min(spec, Linear{});
    CHECK(lin.value == doctest::Approx(0.105).epsilon(1e-13));
    CHECK(conditional_entropy(st, lin.measurement, Linear{}) == doctest::Approx(0.105).epsilon(1e-13));
    CHECK(min_quad_rank2(st).value == doctest::Approx(0.105).epsilon(1e-12));
    for (const auto& f : kConvex) {
        const auto r = rank2_separable_min(spec, f);
        CHECK(r.value == doctest::Approx(concurrence_composition(std::sqrt(0.105), f)).epsilon(1e-13));
        CHECK(std::abs(r.value - brute_force_min(st, f, quick()).value) < 1e-8);
    }
    // outside the convex class the closed form is not claimed
    CHECK_THROWS_AS(rank2_separable_min(spec, Tsallis{6.0}), Error);
    CHECK_THROWS_AS(rank2_separable_min(Rank2Separable{0.5, 0.3, 0.4, 0.5, 3}, Linear{}), Error);
}

TEST_CASE("rank-2 outcome balance and gain consistency")
{
    for (double pp : {0.55, 0.8}) {
        for (double ta : {0.3, 1.2}) {
            const double tb = 0.9;
            const Rank2Separable spec{pp, std::nullopt, ta, tb, 3};
            const auto st = make_state(spec);
            const auto r = rank2_separable_min(spec, Linear{});
            const auto o0 = conditional_state(st, r.measurement.elements[0].ket);
            const auto o1 = conditional_state(st, r.measurement.elements[1].ket);
            CHECK(std::abs(o0.r_b.norm() - o1.r_b.norm()) < 1e-10);
            const double gain = quad_info_gain(st, r.measurement);
            CHECK(qubit_entropy(st.r_b().norm(), Linear{}) - gain
                  == doctest::Approx(rank2_s2_min(pp, 1 - pp, ta, tb)).epsilon(1e-12));
        }
    }
}

TEST_CASE("spin-s closed forms")
{
    CHECK(spin_max_angle(1.0) == doctest::Approx(0.5718588702012103).epsilon(1e-14));
    for (double s : {0.5, 1.0, 1.5, 2.5}) {
        const double tm = spin_max_angle(s);
        CHECK(spin_s2_curve(s, tm) == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(spin_s2_curve(s, tm + 1e-3) < 0.25);
        CHECK(spin_s2_curve(s, tm - 1e-3) < 0.25);
        CHECK(std::abs(spin_min(s, 0.0).s2) < 1e-15);
    }
    for (double th : {0.2, 0.9, 1.4}) {
        const auto r = spin_min(0.5, th);
        CHECK(r.spin_averages[0].isApprox(Vec3(1, 0, 0), 1e-14));
        CHECK(r.spin_averages[1].isApprox(Vec3(-1, 0, 0), 1e-14));
        REQUIRE(r.closed_form_averages.has_value());
        CHECK((*r.closed_form_averages)[0] == Vec3(1, 0, 0));
    }
    // closed-form averages match the direct expectation values
    for (double s : {1.0, 2.0}) {
        const auto r = spin_min(s, 0.7);
        REQUIRE(r.closed_form_averages.has_value());
        for (int k = 0; k < 2; ++k) {
            CHECK((r.spin_averages[static_cast<std::size_t>(k)] - (*r.closed_form_averages)[static_cast<std::size_t>(k)])
                      .norm() < 1e-12);
        }
    }
    CHECK_THROWS_AS(spin_min(0.3, 0.5), Error);
}

TEST_CASE("spin-s minimum on the explicit spin-s pair")
{
    for (double s : {0.5, 1.0, 1.5}) {
        const int d = spin_dimension(s);
        for (double th : {0.3, 0.8}) {
            for (double pp : {0.5, 0.7}) {
                const SpinAligned spec{s, th, pp};
                const auto r = spin_min(s, th, pp);
                // the measurement acts on the full spin space of A
                CHECK(linear_conditional_full(spin_aligned_full(spec), d, r.result.measurement)
                      == doctest::Approx(r.s2).epsilon(1e-12));
                CHECK(std::abs(brute_force_min(make_state(spec), Linear{}, quick()).value - r.s2) < 1e-8);
            }
        }
    }
}

TEST_CASE("spin-1/2 is the rank-2 qubit pair")
{
    for (double th : {0.1, 0.6, 1.3}) {
        for (double pp : {0.5, 0.65, 0.9}) {
            CHECK(spin_min(0.5, th, pp).s2
                  == doctest::Approx(rank2_separable_min(Rank2Separable{pp, std::nullopt, th, th, 2}, Linear{}).value)
                         .epsilon(1e-15));
        }
    }
}

TEST_CASE("analytic dispatch")
{
    CHECK(analytic_min(PureMix{0.5, 0.3, 4}, VonNeumann{})->method == "analytic-schmidt");
    CHECK(analytic_min(Rank2Separable{0.7, std::nullopt, 1.0, 0.5, 2}, Tsallis{2.0})->method == "analytic-rank2");
    CHECK(analytic_min(SpinAligned{1.0, 0.5, 0.5}, Linear{}).has_value());
    CHECK(analytic_min(Rank2Separable{0.6, 0.3, 1.0, 0.5, 2}, Linear{})->method == "analytic-eig");
    CHECK_FALSE(analytic_min(Rank2Separable{0.7, std::nullopt, 1.0, 0.5, 2}, Tsallis{6.0}).has_value());
    CHECK(analytic_min(PureMix{0.5, 0.3, 4}, Tsallis{0.3}).has_value());
    Rng rng = make_stream(33, 0);
    const RawState raw{random_density_matrix(6, rng), 3};
    CHECK_FALSE(analytic_min(raw, Linear{}).has_value());
}

TEST_CASE("discord")
{
    CHECK(std::abs(discord(make_state(PureMix{0.0, 0.0, 3}))) < 1e-8);
    const FamilySpec bell = PureMix{1.0, pi / 2, 2};
    CHECK(discord(make_state(bell), &bell) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(discord(make_state(bell)) == doctest::Approx(1.0).epsilon(1e-8));
    const FamilySpec cc = TwoPureMix{0.3, 0.7, 0.0, 0.0, pi, 0.0, 3};
    CHECK(std::abs(discord(make_state(cc), &cc)) < 1e-12);
    Rng rng = make_stream(34, 0);
    for (int i = 0; i < 3; ++i) {
        const auto st = QuditQubitState::from_density(random_density_matrix(6, rng), 3);
        CHECK(discord(st) >= -1e-8);
    }
}

TEST_CASE("monotonicity and nonnegativity on random pairs")
{
    Rng rng = make_stream(35, 0);
    for (int i = 0; i < 300; ++i) {
        const int dA = 2 + i % 5;
        const auto st = QuditQubitState::from_density(random_density_matrix(2 * dA, rng), dA);
        const auto m = measurement_from_frame(haar_unitary(dA + i % 4, rng).topRows(dA));
        for (const auto& f : kConvex) {
            const double c = conditional_entropy(st, m, f);
            CHECK(c >= -1e-12);
            CHECK(c <= qubit_entropy(st.r_b().norm(), f) + 1e-10);
        }
    }
}

TEST_CASE("low-probability outcomes tolerate rounding")
{
    const auto st = make_state(PureMix{1.0, 0.3, 3});
    for (double tiny : {1e-5, 1e-6, 1e-7}) {
        // rotate level 2, outside the support, slightly into level 0
        const double c = std::cos(tiny), s = std::sin(tiny);
        CMatrix u = CMatrix::Identity(3, 3);
        u(0, 0) = c;
        u(0, 2) = -s;
        u(2, 0) = s;
        u(2, 2) = c;
        const auto m = measurement_from_unitary(u);
        double v = -1.0;
        CHECK_NOTHROW(v = conditional_entropy(st, m, VonNeumann{}));
        CHECK(v >= -1e-12);
    }
}
