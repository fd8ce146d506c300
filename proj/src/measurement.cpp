#include "condqubit/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "condqubit/error.hpp"
#include "condqubit/operator_basis.hpp"
#include "condqubit/random.hpp"

namespace condqubit {

RankOneElement make_element(double weight, const CVector& ket)
{
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
        throw Error(ErrorCode::InvalidMeasurement, "measurement weight must be nonnegative");
    }
    if (ket.size() < 2) {
        throw Error(ErrorCode::InvalidMeasurement, "measurement ket must have dimension >= 2");
    }
    if (std::abs(ket.norm() - 1.0) > 1e-10) {
        throw Error(ErrorCode::InvalidMeasurement, "measurement ket is not normalized");
    }
    RankOneElement e;
    e.weight = weight;
    e.ket = ket;
    e.k_vec = ket_bloch_vector(ket, basis_for(static_cast<int>(ket.size())));
    return e;
}

RankOneMeasurement measurement_from_unitary(const CMatrix& u)
{
    if (u.rows() != u.cols()) {
        throw Error(ErrorCode::Shape, "measurement basis must be square");
    }
    RankOneMeasurement m;
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        m.elements.push_back(make_element(1.0, u.col(j)));
    }
    return m;
}

RankOneMeasurement measurement_from_frame(const CMatrix& v)
{
    RankOneMeasurement m;
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        const double n = v.col(j).norm();
        if (n < 1e-14) {
            continue;
        }
        m.elements.push_back(make_element(n * n, v.col(j) / n));
    }
    return m;
}

ConditionalOutcome conditional_state(const QuditQubitState& state, const CVector& ket)
{
    const int dA = state.qudit_dim();
    if (ket.size() != dA) {
        throw Error(ErrorCode::Shape, "conditional_state: ket dimension does not match dA");
    }
    const double p = ket.dot(state.reduced_a() * ket).real();
    if (p < kZeroProbability) {
        throw Error(ErrorCode::ZeroProbability, "conditional_state: outcome probability below 1e-14");
    }
    Mat2c rho_b = Mat2c::Zero();
    const CMatrix& rho = state.rho();
    for (int a = 0; a < dA; ++a) {
        if (ket(a) == Complex(0.0)) {
            continue;
        }
        for (int b = 0; b < dA; ++b) {
            if (ket(b) == Complex(0.0)) {
                continue;
            }
            rho_b += std::conj(ket(a)) * ket(b) * rho.block<2, 2>(2 * a, 2 * b);
        }
    }
    rho_b /= p;
    ConditionalOutcome out;
    out.probability = p;
    out.rho_b = rho_b;
    out.r_b = Vec3(2.0 * rho_b(0, 1).real(), -2.0 * rho_b(0, 1).imag(),
                   (rho_b(0, 0) - rho_b(1, 1)).real());
    return out;
}

Vec3 conditional_bloch_fano(const QuditQubitState& state, const RVector& k_vec, double* probability)
{
    if (k_vec.size() != state.r_a().size()) {
        throw Error(ErrorCode::Shape, "conditional_bloch_fano: k vector length mismatch");
    }
    const double denom = 1.0 + state.r_a().dot(k_vec);
    if (probability != nullptr) {
        *probability = denom / state.qudit_dim();
    }
    if (denom / state.qudit_dim() < kZeroProbability) {
        throw Error(ErrorCode::ZeroProbability,
                    "conditional_bloch_fano: outcome probability below 1e-14");
    }
    return state.r_b() + state.correlations().transpose() * k_vec / denom;
}

double support_weight(const QuditQubitState& state, const CVector& ket)
{
    const CMatrix& p = state.correlated_block();
    return (p.adjoint() * ket).squaredNorm();
}

std::vector<CloudPoint> sample_cloud(const QuditQubitState& state, std::size_t n,
                                     std::uint64_t seed, int threads)
{
    const int dA = state.qudit_dim();
    const std::size_t blocks = (n + kCloudBlock - 1) / kCloudBlock;
    std::vector<std::vector<CloudPoint>> per_block(blocks);

    auto run_block = [&](std::size_t blk) {
        Rng rng = make_stream(seed, blk);
        const std::size_t begin = blk * kCloudBlock;
        const std::size_t end = std::min(n, begin + kCloudBlock);
        auto& out = per_block[blk];
        out.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) {
            const CVector ket = haar_ket(dA, rng);
            const double p = ket.dot(state.reduced_a() * ket).real();
            if (p < kZeroProbability) {
                continue;
            }
            const ConditionalOutcome c = conditional_state(state, ket);
            out.push_back({c.r_b, support_weight(state, ket), c.probability});
        }
    };

    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(blocks)));
    if (workers == 1) {
        for (std::size_t b = 0; b < blocks; ++b) {
            run_block(b);
        }
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t b = static_cast<std::size_t>(w); b < blocks;
                     b += static_cast<std::size_t>(workers)) {
                    run_block(b);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    std::vector<CloudPoint> cloud;
    cloud.reserve(n);
    for (auto& b : per_block) {
        cloud.insert(cloud.end(), b.begin(), b.end());
    }
    return cloud;
}

PovmCertificate validate_povm(const RankOneMeasurement& m, int dA, const QuditQubitState* state)
{
    if (m.elements.empty()) {
        throw Error(ErrorCode::InvalidMeasurement, "measurement has no elements");
    }
    CMatrix sum = CMatrix::Zero(dA, dA);
    RVector ksum = RVector::Zero(dA * dA - 1);
    PovmCertificate cert;
    for (const auto& e : m.elements) {
        if (!(e.weight >= 0.0)) {
            throw Error(ErrorCode::InvalidMeasurement, "negative measurement weight");
        }
        if (e.ket.size() != dA) {
            throw Error(ErrorCode::InvalidMeasurement, "measurement ket dimension mismatch");
        }
        sum += e.weight * e.ket * e.ket.adjoint();
        ksum += e.weight * e.k_vec;
        cert.weight_sum += e.weight;
    }
    cert.completeness_residual = (sum - CMatrix::Identity(dA, dA)).cwiseAbs().maxCoeff();
    cert.bloch_residual = ksum.norm();
    cert.complete = cert.completeness_residual <= 1e-10;

    if (state != nullptr) {
        if (state->qudit_dim() != dA) {
            throw Error(ErrorCode::Shape, "validate_povm: state dimension mismatch");
        }
        cert.has_state = true;
        Mat2c avg = Mat2c::Zero();
        for (const auto& e : m.elements) {
            const double p = e.ket.dot(state->reduced_a() * e.ket).real();
            if (e.weight == 0.0 || p < kZeroProbability) {
                continue;
            }
            const ConditionalOutcome c = conditional_state(*state, e.ket);
            cert.probability_sum += e.weight * c.probability;
            avg += e.weight * c.probability * c.rho_b;
        }
        cert.signalling_residual = (avg - state->reduced_b()).cwiseAbs().maxCoeff();
    }
    return cert;
}

RankOneMeasurement schmidt_measurement(const FamilySpec& spec)
{
    if (auto mix = schmidt_form(spec)) {
        return measurement_from_unitary(CMatrix::Identity(mix->dA, mix->dA));
    }
    if (const auto* r = std::get_if<Rank2Separable>(&spec)) {
        if (std::abs(r->theta_a - std::numbers::pi / 2.0) < 1e-12) {
            CMatrix u = CMatrix::Identity(r->dA, r->dA);
            const double h = std::sqrt(0.5);
            u(0, 0) = h;
            u(1, 0) = h;
            u(0, 1) = h;
            u(1, 1) = -h;
            return measurement_from_unitary(u);
        }
    }
    throw Error(ErrorCode::UnsupportedFamily,
                "family " + family_name(spec) + " has no distinguished Schmidt basis; use brute force");
}

} // namespace condqubit
