#include <doctest.h>

#include <cmath>
#include <numbers>

#include "condqubit/error.hpp"
#include "condqubit/geometry.hpp"
#include "condqubit/measurement.hpp"
#include "condqubit/operator_basis.hpp"
#include "condqubit/random.hpp"

using namespace condqubit;
using std::numbers::pi;

TEST_CASE("maximally mixed state gives the origin")
{
    const auto st = make_state(PureMix{0.0, 0.3, 5});
    Rng rng = make_stream(1, 0);
    for (int i = 0; i < 10; ++i) {
        const auto co = conditional_state(st, haar_ket(5, rng));
        CHECK(co.r_b.norm() < 1e-15);
        CHECK(co.probability == doctest::Approx(0.2).epsilon(1e-14));
    }
}

TEST_CASE("schmidt-level outcome sits on the ellipsoid apex")
{
    const auto st = make_state(PureMix{0.5, pi / 10, 4});
    CVector k = CVector::Zero(4);
    k(0) = 1.0;
    const auto co = conditional_state(st, k);
    const auto e = ellipsoid_params(0.5, 1.0, pi / 10, 4);
    const double r = e.a * (1 - e.e * e.e) / (1 - e.e);
    CHECK((co.r_b - Vec3(0, 0, r)).norm() < 1e-12);
    double p = 0.0;
    const Vec3 rf = conditional_bloch_fano(st, ket_bloch_vector(k, basis_for(4)), &p);
    CHECK((rf - co.r_b).norm() < 1e-12);
    CHECK(p == doctest::Approx(co.probability).epsilon(1e-14));
}

TEST_CASE("dual path agreement on random pairs")
{
    Rng rng = make_stream(2, 0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const int dA = 2 + i % 5;
        const auto st = QuditQubitState::from_density(random_density_matrix(2 * dA, rng), dA);
        const CVector k = haar_ket(dA, rng);
        const auto co = conditional_state(st, k);
        const RVector kv = ket_bloch_vector(k, basis_for(dA));
        CHECK(kv.squaredNorm() == doctest::Approx(dA - 1.0).epsilon(1e-12));
        worst = std::max(worst, (conditional_bloch_fano(st, kv) - co.r_b).norm());
        CHECK(co.r_b.norm() <= 1.0 + 1e-12);
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("rank-2 separable: ket orthogonal to theta_A steers to -theta_B")
{
    const double ta = 0.8, tb = 0.5;
    const auto st = make_state(Rank2Separable{0.6, std::nullopt, ta, tb, 3});
    CVector k = CVector::Zero(3);
    // orthogonal to cos(ta/2)|0> + sin(ta/2)|1>
    k(0) = -std::sin(ta / 2);
    k(1) = std::cos(ta / 2);
    const auto co = conditional_state(st, k);
    Eigen::Vector2cd minus(std::cos(tb / 2), -std::sin(tb / 2));
    const Mat2c expect = minus * minus.adjoint();
    CHECK((co.rho_b - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("zero-probability outcome")
{
    const auto st = make_state(PureMix{1.0, 0.0, 3});
    CVector k = CVector::Zero(3);
    k(2) = 1.0;
    try {
        conditional_state(st, k);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroProbability);
    }
}

TEST_CASE("cloud sampling")
{
    const auto st = make_state(PureMix{0.5, pi / 10, 4});
    const auto a = sample_cloud(st, 3000, 9, 1);
    const auto b = sample_cloud(st, 3000, 9, 3);
    REQUIRE(a.size() == 3000);
    REQUIRE(b.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].r_b == b[i].r_b);
        CHECK(a[i].q == b[i].q);
    }
    const auto c = sample_cloud(st, 3000, 10, 1);
    CHECK(c[0].r_b != a[0].r_b);
    CHECK(sample_cloud(st, 0, 9).empty());
    for (const auto& pnt : a) {
        CHECK(pnt.q >= 0.0);
        CHECK(pnt.q <= 1.0 + 1e-12);
        CHECK(pnt.p > 0.0);
    }
    // a prefix does not depend on n
    const auto shorter = sample_cloud(st, 1500, 9, 2);
    CHECK(shorter.back().r_b == a[1499].r_b);
}

TEST_CASE("product state cloud collapses to r_B")
{
    Rng rng = make_stream(3, 0);
    const CMatrix a = random_density_matrix(3, rng);
    Mat2c b;
    b << 0.7, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.3;
    CMatrix rho(6, 6);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            rho.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
    }
    const auto st = QuditQubitState::from_density(rho, 3);
    for (const auto& pnt : sample_cloud(st, 2000, 4)) {
        CHECK((pnt.r_b - st.r_b()).norm() < 1e-12);
    }
}

TEST_CASE("in-support reduction")
{
    const auto st = make_state(PureMix{0.5, pi / 10, 4});
    Rng rng = make_stream(4, 0);
    for (int i = 0; i < 50; ++i) {
        CVector k = haar_ket(4, rng);
        CVector k2 = k;
        k2.tail(2) = haar_unitary(2, rng) * k.tail(2);
        CHECK((conditional_state(st, k).rho_b - conditional_state(st, k2).rho_b).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(support_weight(st, k) == doctest::Approx(k.head(2).squaredNorm()).epsilon(1e-12));
    }
}

TEST_CASE("povm validation")
{
    const auto st = make_state(PureMix{0.5, 0.7, 3});
    const auto vn = measurement_from_unitary(CMatrix::Identity(3, 3));
    const auto cert = validate_povm(vn, 3, &st);
    CHECK(cert.complete);
    CHECK(cert.weight_sum == doctest::Approx(3.0));
    CHECK(cert.bloch_residual < 1e-14);
    CHECK(cert.probability_sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cert.signalling_residual < 1e-14);

    CVector k = CVector::Zero(3);
    k(0) = 1.0;
    RankOneMeasurement twice;
    twice.elements = {make_element(1.5, k), make_element(1.5, k)};
    CHECK_FALSE(validate_povm(twice, 3).complete);

    CHECK_THROWS_AS(make_element(-0.1, k), Error);
    CHECK_THROWS_AS(make_element(1.0, 2.0 * k), Error);
    CHECK_THROWS_AS(validate_povm(RankOneMeasurement{}, 3), Error);
    CHECK_THROWS_AS(validate_povm(vn, 4), Error);
}

TEST_CASE("no-signalling for random povms")
{
    Rng rng = make_stream(6, 0);
    for (int i = 0; i < 200; ++i) {
        const int dA = 2 + i % 4;
        const int m = dA + i % 3;
        const auto st = QuditQubitState::from_density(random_density_matrix(2 * dA, rng), dA);
        const auto povm = measurement_from_frame(haar_unitary(m, rng).topRows(dA));
        const auto cert = validate_povm(povm, dA, &st);
        CHECK(cert.complete);
        CHECK(std::abs(cert.probability_sum - 1.0) < 1e-12);
        CHECK(cert.signalling_residual < 1e-10);
    }
}

TEST_CASE("schmidt measurements")
{
    const auto pm = schmidt_measurement(PureMix{0.5, 0.3, 4});
    REQUIRE(pm.elements.size() == 4);
    for (int j = 0; j < 4; ++j) {
        CHECK(std::abs(pm.elements[static_cast<std::size_t>(j)].ket(j)) == doctest::Approx(1.0));
    }
    const auto tp = schmidt_measurement(TwoPureMix{0.2, 0.3, 0.4, 0.5, 1.0, 0.0, 6});
    REQUIRE(tp.elements.size() == 6);
    CHECK(validate_povm(tp, 6).complete);
    CHECK_THROWS_AS(schmidt_measurement(Rank2Separable{0.6, std::nullopt, 1.0, 0.5, 2}), Error);
    CHECK_NOTHROW(schmidt_measurement(Rank2Separable{0.6, std::nullopt, pi / 2, 0.5, 2}));

    // two-component mixture: outcomes reproduce the per-component conditional states
    SchmidtMix mix;
    mix.dA = 5;
    mix.components = {SchmidtComponent{0.3, {0.8, 0.2}, 0.0, 0.0}, SchmidtComponent{0.4, {0.6, 0.4}, 1.1, 0.4}};
    const auto st = make_state(mix);
    const auto m = schmidt_measurement(mix);
    const double p0 = 0.3;
    const auto offsets = component_offsets(mix);
    for (std::size_t i = 0; i < mix.components.size(); ++i) {
        const auto& c = mix.components[i];
        const Vec3 axis = frame_axis(c.gamma, c.eta);
        for (std::size_t k = 0; k < 2; ++k) {
            const auto co = conditional_state(st, m.elements[static_cast<std::size_t>(offsets[i]) + k].ket);
            const double pk = c.weight * c.schmidt[k] + p0 / 5;
            const double sign = k == 0 ? 1.0 : -1.0;
            CHECK((co.r_b - sign * (c.weight * c.schmidt[k] / pk) * axis).norm() < 1e-12);
        }
    }
}
