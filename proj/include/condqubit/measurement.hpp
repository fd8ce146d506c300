#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "condqubit/state_factory.hpp"
#include "condqubit/types.hpp"

namespace condqubit {

/// Weighted rank-1 element r |k><k|.
struct RankOneElement {
    double weight = 1.0;
    CVector ket;
    RVector k_vec; // <k| s_A |k>, |k_vec|^2 = dA - 1
};

struct RankOneMeasurement {
    std::vector<RankOneElement> elements;

    int dim() const { return elements.empty() ? 0 : static_cast<int>(elements.front().ket.size()); }
};

struct ConditionalOutcome {
    double probability = 0.0;
    Mat2c rho_b;
    Vec3 r_b;
};

/// Normalizes nothing: throws Error{InvalidMeasurement} if |ket| differs
/// from 1 by more than 1e-10 or the weight is negative.
RankOneElement make_element(double weight, const CVector& ket);

/// Von Neumann measurement on the columns of a unitary (all weights 1).
RankOneMeasurement measurement_from_unitary(const CMatrix& u);

/// Rank-1 POVM from the columns v_j of a dA x m matrix with V V^dagger = 1:
/// r_j = |v_j|^2, ket_j = v_j / |v_j|. Columns with |v_j| < 1e-14 are dropped.
RankOneMeasurement measurement_from_frame(const CMatrix& v);

/// rho_{B/k} = <k|rho_AB|k> / p with p = <k|rho_A|k>. Throws
/// Error{ZeroProbability} when p < 1e-14.
ConditionalOutcome conditional_state(const QuditQubitState& state, const CVector& ket);

/// The same Bloch vector from the Fano data: r_B + C^T k / (1 + r_A.k).
/// `probability` receives (1 + r_A.k)/dA when non-null.
Vec3 conditional_bloch_fano(const QuditQubitState& state, const RVector& k_vec,
                            double* probability = nullptr);

/// Weight of a ket inside the correlated block: q = |P k|^2.
double support_weight(const QuditQubitState& state, const CVector& ket);

struct CloudPoint {
    Vec3 r_b;
    double q = 0.0;
    double p = 0.0;
};

/// Samples per RNG stream; sample i uses stream i / kCloudBlock.
inline constexpr std::size_t kCloudBlock = 1024;

/// n Haar-random kets; outcomes with p < 1e-14 are skipped. The result
/// depends only on (state, n, seed), not on `threads`.
std::vector<CloudPoint> sample_cloud(const QuditQubitState& state, std::size_t n,
                                     std::uint64_t seed, int threads = 1);

struct PovmCertificate {
    bool complete = false;
    double completeness_residual = 0.0; // max |sum r_j Pi_j - 1|
    double weight_sum = 0.0;            // sum r_j, should be dA
    double bloch_residual = 0.0;        // |sum r_j k_j|
    // filled when a state is supplied
    bool has_state = false;
    double probability_sum = 0.0;
    double signalling_residual = 0.0;   // max |sum_j p_j rho_{B/j} - rho_B|
};

/// Completeness within 1e-10. Throws Error{InvalidMeasurement} for negative
/// weights, empty element lists or a dimension mismatch.
PovmCertificate validate_povm(const RankOneMeasurement& m, int dA,
                              const QuditQubitState* state = nullptr);

/// Local Schmidt basis for PureMix, TwoPureMix and SchmidtMix (computational
/// levels, completed to dA), and for Rank2Separable with theta_A = pi/2.
/// Other families throw Error{UnsupportedFamily}.
RankOneMeasurement schmidt_measurement(const FamilySpec& spec);

} // namespace condqubit
