#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "condqubit/measurement.hpp"
#include "condqubit/state_factory.hpp"
#include "condqubit/types.hpp"

namespace condqubit {

// ---------------------------------------------------------------------------
// Trace-form entropies S_f(rho) = sum_i f(lambda_i)
// ---------------------------------------------------------------------------

struct VonNeumann {};            // f(p) = -p log2 p
struct Tsallis {                 // f(p) = (p - p^q) / (1 - 2^(1-q))
    double q = 2.0;
};
struct Linear {};                // f(p) = 2 p (1 - p)

using EntropySpec = std::variant<VonNeumann, Tsallis, Linear>;

/// "vn", "linear", "tsallis:<q>".
std::string entropy_name(const EntropySpec& f);

/// Parses "vn", "linear" or "tsallis:<q>" (q > 0, q != 1).
EntropySpec parse_entropy(const std::string& text);

/// Throws Error{Validation} for q <= 0 or q == 1.
void validate_entropy(const EntropySpec& f);

double generator(const EntropySpec& f, double p);

/// Sum of f over a spectrum. Eigenvalues below -1e-10 throw
/// Error{PositivityViolation}; those below 1e-15 count as zero.
double entropy_of_spectrum(const RVector& eigenvalues, const EntropySpec& f);

double entropy(const CMatrix& rho, const EntropySpec& f);

/// Qubit with Bloch length r: f((1+r)/2) + f((1-r)/2).
double qubit_entropy(double r, const EntropySpec& f);

/// F(x) = sum_+- f((1 +- sqrt(1 - x^2))/2), the qubit entropy as a function
/// of sqrt(S_2).
double concurrence_composition(double x, const EntropySpec& f);

/// True for entropies whose F is convex (von Neumann, linear, Tsallis with
/// (5 - sqrt 13)/2 <= q <= (5 + sqrt 13)/2).
bool convex_f_class(const EntropySpec& f);

/// sum_j r_j p_j S_f(rho_{B/j}); outcomes with p < 1e-14 are skipped, and
/// |r_B/j| above 1 by less than 1e-12/p is treated as rounding.
double conditional_entropy(const QuditQubitState& state, const RankOneMeasurement& m,
                           const EntropySpec& f);

// ---------------------------------------------------------------------------
// Minimization results
// ---------------------------------------------------------------------------

struct Diagnostics {
    int iterations = 0;
    int evaluations = 0;
    int restarts = 0;
    int best_restart = -1;
    double residual = 0.0;
    bool converged = true;
    std::optional<double> reference;
    bool certified = false;
    std::vector<std::string> warnings;
};

struct MinimizationResult {
    double value = 0.0;
    RankOneMeasurement measurement;
    std::string method; // analytic-schmidt, analytic-eig, analytic-rank2, brute-force
    Diagnostics diagnostics;
};

/// Schmidt-basis minimum for mixtures of pure states with orthogonal local
/// supports plus the maximally mixed state:
///   sum_k p_k [f((p q_k + p0/(2 dA))/p_k) + f(p0/(2 dA p_k))],
///   p_k = p q_k + p0/dA.
/// Negative component weights are allowed. Throws Error{UnsupportedFamily}
/// for other families.
MinimizationResult min_conditional_schmidt(const FamilySpec& spec, const EntropySpec& f);

// ---------------------------------------------------------------------------
// Quadratic entropy
// ---------------------------------------------------------------------------

/// S_2(rho_B) - S_2(B|A_M) = (2/(dA dB)) sum_j r_j |C^T k_j|^2 / (1 + r_A.k_j).
double quad_info_gain(const QuditQubitState& state, const RankOneMeasurement& m);

/// Effective qubit on a two-dimensional local support at A.
struct EffectiveQubit {
    CMatrix frame;   // dA x 2 isometry
    FanoData fano;   // two-qubit Fano data of the compressed state
    CMatrix rho;     // 4 x 4 compressed state
};

/// Throws Error{Degenerate} for a one-dimensional support and
/// Error{UnsupportedFamily} when the support dimension exceeds 2. The
/// correlated block is used as frame when it spans the support.
EffectiveQubit effective_qubit(const QuditQubitState& state);

/// (2/dB) k^T C C^T k / (k^T N k), N = 1 - r_A r_A^T, for the projective
/// measurement {k, -k} on the effective qubit.
double quad_projective_gain(const FanoData& qubit_pair, const Vec3& k);

struct QuadEigen {
    Vec3 eigenvalues = Vec3::Zero(); // ascending
    double lambda_max = 0.0;
    Vec3 k = Vec3::UnitZ();
    int multiplicity = 1;
};

/// Largest solution of C C^T k = lambda N k. For a degenerate lambda_max the
/// direction with the largest |k_z| (then |k_x|, then |k_y|) is chosen.
QuadEigen quad_eigenproblem(const FanoData& qubit_pair);

/// Kets (|k>, |-k>) of the qubit projective measurement along unit vector k.
std::pair<Eigen::Vector2cd, Eigen::Vector2cd> qubit_kets(const Vec3& k);

/// S_2(rho_B) - (2/dB) lambda_max with the measurement along the eigenvector.
MinimizationResult min_quad_rank2(const QuditQubitState& state);

// ---------------------------------------------------------------------------
// Rank-2 separable states
// ---------------------------------------------------------------------------

/// tan(phi) = tan(theta_A) / (p+ - p-).
double rank2_optimal_angle(double p_plus, double p_minus, double theta_a);

/// 4 p+ p- cos^2(theta_A) sin^2(theta_B).
double rank2_s2_min(double p_plus, double p_minus, double theta_a, double theta_b);

/// Closed-form minimum for Rank2Separable with p+ + p- = 1 and an entropy in
/// the convex-F class: value F(sqrt(S_2 min)), measurement |phi>, |phi+pi>.
/// Other inputs throw Error{UnsupportedFamily}; callers fall back to brute force.
MinimizationResult rank2_separable_min(const Rank2Separable& spec, const EntropySpec& f);

// ---------------------------------------------------------------------------
// Spin-s aligned pairs
// ---------------------------------------------------------------------------

struct SpinMinResult {
    double s2 = 0.0;          // 4 p+ p- cos^{4s} theta (1 - cos^{4s} theta)
    double theta_eff = 0.0;
    double min_angle = 0.0;   // phi in the effective frame
    std::array<Vec3, 2> spin_averages;        // <+-k|S|+-k>/s, computed on the 2s+1 space
    std::optional<std::array<Vec3, 2>> closed_form_averages; // p+ = 1/2 and theta > 0 only
    MinimizationResult result;                // measurement on the 2s+1 space
};

SpinMinResult spin_min(double s, double theta, double p_plus = 0.5);

/// 4 p+ p- cos^{4s} theta (1 - cos^{4s} theta).
double spin_s2_curve(double s, double theta, double p_plus = 0.5);

/// arccos(2^(-1/(4s))).
double spin_max_angle(double s);

// ---------------------------------------------------------------------------
// Dispatch and discord
// ---------------------------------------------------------------------------

/// Closed-form minimum where the family admits one, nullopt otherwise.
std::optional<MinimizationResult> analytic_min(const FamilySpec& spec, const EntropySpec& f);

/// Von Neumann minimum conditional entropy minus S(rho_AB) - S(rho_A).
/// Uses the analytic minimum when `spec` admits one, brute force otherwise.
double discord(const QuditQubitState& state, const FamilySpec* spec = nullptr);

/// Orthonormal completion of the columns of `cols` (d x m isometry) to a
/// d x d unitary whose first m columns are `cols`.
CMatrix complete_basis(const CMatrix& cols);

} // namespace condqubit
