#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "condqubit/types.hpp"

namespace condqubit {

// ---------------------------------------------------------------------------
// Fano form  rho = rho_A (x) rho_B + 1/(dA dB) sum C_mu_nu s_A_mu (x) s_B_nu
// ---------------------------------------------------------------------------

struct FanoData {
    RVector r_a;          // length dA^2 - 1
    Vec3 r_b;
    RMatrix correlations; // (dA^2 - 1) x 3, C_mu_nu = <s_mu s_nu> - <s_mu><s_nu>
};

/// Validates dimension (2 dA) and unit trace, then extracts (r_A, r_B, C).
FanoData fano_decompose(const CMatrix& rho, int dA);

CMatrix fano_reconstruct(const FanoData& fano, int dA);

/// Tr rho^2 evaluated from the Fano data alone.
double fano_purity(const FanoData& fano, int dA);

// ---------------------------------------------------------------------------
// Qudit-qubit state
// ---------------------------------------------------------------------------

class QuditQubitState {
public:
    /// Validates rho (Hermitian, unit trace, eigenvalues >= -1e-10) and
    /// computes its Fano data. `correlated_block` is an optional dA x d'
    /// isometry spanning the qudit subspace that carries the non-maximally-mixed
    /// part of the state; when absent it is derived from the spectrum of rho_A
    /// (eigenvectors whose eigenvalue exceeds the smallest one by > 1e-12).
    static QuditQubitState from_density(CMatrix rho, int dA,
                                        std::optional<CMatrix> correlated_block = std::nullopt);

    int qudit_dim() const noexcept { return dA_; }
    const CMatrix& rho() const noexcept { return rho_; }
    const FanoData& fano() const noexcept { return fano_; }
    const RVector& r_a() const noexcept { return fano_.r_a; }
    const Vec3& r_b() const noexcept { return fano_.r_b; }
    const RMatrix& correlations() const noexcept { return fano_.correlations; }
    const CMatrix& reduced_a() const noexcept { return rho_a_; }
    const Mat2c& reduced_b() const noexcept { return rho_b_; }
    const CMatrix& correlated_block() const noexcept { return block_; }

    /// <a| rho |b> as a 2x2 operator on the qubit.
    Mat2c block(int a, int b) const { return rho_.block<2, 2>(2 * a, 2 * b); }

    /// Orthonormal basis (columns) of the range of rho_A: eigenvectors with
    /// eigenvalue > tol, ordered by decreasing eigenvalue.
    CMatrix support_a(double tol = 1e-12) const;

private:
    QuditQubitState() = default;

    int dA_ = 0;
    CMatrix rho_;
    FanoData fano_;
    CMatrix rho_a_;
    Mat2c rho_b_;
    CMatrix block_;
};

CMatrix partial_trace_b(const CMatrix& rho, int dA);
Mat2c partial_trace_a(const CMatrix& rho, int dA);

// ---------------------------------------------------------------------------
// State families
// ---------------------------------------------------------------------------

/// p |Psi><Psi| + (1-p) 1/(2 dA),  |Psi> = cos(beta/2)|00> + sin(beta/2)|11>.
struct PureMix {
    double p = 0.0;
    double beta = 0.0;
    int dA = 2;
};

/// p1 |Psi1><Psi1| + p2 |Psi2><Psi2| + p0 1/(2 dA) with orthogonal qudit
/// supports: Psi1 on |0_A>,|1_A> with qubit frame z; Psi2 on |2_A>,|3_A>
/// with qubit frame |0_2> = cos(gamma/2)|0> + e^{i eta} sin(gamma/2)|1>.
/// For beta2 = 0 only |2_A> is used (dA >= 3 suffices).
struct TwoPureMix {
    double p1 = 0.0;
    double p2 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double gamma = 0.0;
    double eta = 0.0;
    int dA = 4;
};

/// p+ |tA tB><tA tB| + p- |-tA -tB><-tA -tB| + p0 1/(2 dA),
/// |+-t> = cos(t/2)|0> +- sin(t/2)|1>. p- defaults to 1 - p+ (p0 = 0).
struct Rank2Separable {
    double p_plus = 0.5;
    std::optional<double> p_minus;
    double theta_a = 0.0;
    double theta_b = 0.0;
    int dA = 2;

    double minus_weight() const { return p_minus ? *p_minus : 1.0 - p_plus; }
};

/// p+ |theta_s theta_s><..| + p- |-theta_s -theta_s><..| for two spins s.
struct SpinAligned {
    double s = 0.5;
    double theta = 0.0;
    double p_plus = 0.5;
};

/// One pure component of a Schmidt mixture: weight p_i, Schmidt
/// coefficients (1 or 2 entries, summing to 1) on consecutive qudit levels,
/// and the qubit frame of its Schmidt vectors.
struct SchmidtComponent {
    double weight = 0.0;
    std::vector<double> schmidt;
    double gamma = 0.0;
    double eta = 0.0;
};

/// sum_i p_i |Psi_i><Psi_i| + p0 1/(2 dA) with orthogonal qudit supports.
/// Components occupy qudit levels in order. p0, when given, must equal
/// 1 - sum_i p_i.
struct SchmidtMix {
    std::vector<SchmidtComponent> components;
    int dA = 2;
    std::optional<double> p0;
};

struct RawState {
    CMatrix rho;
    int dA = 2;
};

using FamilySpec = std::variant<PureMix, TwoPureMix, Rank2Separable, SpinAligned, SchmidtMix, RawState>;

/// "pure-mix", "two-pure-mix", "rank2-separable", "spin-aligned", "schmidt-mix", "raw".
std::string family_name(const FamilySpec& spec);

/// Builds the state. Throws Error{PositivityViolation} naming the violated
/// inequality when the parameters are outside the family's feasible region,
/// Error{Validation} for out-of-range angles, Error{InvalidDimension} when
/// dA is too small for the family.
QuditQubitState make_state(const FamilySpec& spec);

/// Unified Schmidt-mixture form of PureMix, TwoPureMix and SchmidtMix.
/// Returns nullopt for the other families.
std::optional<SchmidtMix> schmidt_form(const FamilySpec& spec);

double background_weight(const SchmidtMix& mix);

/// First qudit level occupied by each component.
std::vector<int> component_offsets(const SchmidtMix& mix);

/// Qubit frame kets (|0_i>, |1_i>) for Bloch direction (gamma, eta).
std::pair<Eigen::Vector2cd, Eigen::Vector2cd> qubit_frame(double gamma, double eta);

/// Unit vector (sin gamma cos eta, sin gamma sin eta, cos gamma).
Vec3 frame_axis(double gamma, double eta);

// ---------------------------------------------------------------------------
// Partial transpose
// ---------------------------------------------------------------------------

struct NegativityReport {
    bool is_npt = false;
    std::vector<double> negative_eigenvalues;
    double min_eigenvalue = 0.0;
};

/// Eigenvalues of the partial transpose over the qubit; those below -1e-10
/// are reported as negative.
NegativityReport negativity_test(const QuditQubitState& state);

// ---------------------------------------------------------------------------
// Spin-s aligned states
// ---------------------------------------------------------------------------

/// 2s+1; throws Error{Validation} unless 2s is a positive integer.
int spin_dimension(double s);

/// |theta_s> = exp(-i theta S_y)|m=s> in the |m> basis ordered m = s, s-1, ..., -s.
CVector spin_rotated_ket(double s, double theta);

/// (S_x, S_y, S_z) in the same basis.
std::array<CMatrix, 3> spin_operators(double s);

/// Effective qubit angle: cos(theta_eff) = cos(theta)^(2s).
double spin_effective_angle(double s, double theta);

/// Orthonormal (|0>, |1>) spanning {|theta_s>, |-theta_s>}:
/// (|theta_s> +- |-theta_s>) / sqrt(2 (1 +- cos^{2s} theta)).
CMatrix spin_effective_frame(double s, double theta);

/// The state on the full (2s+1) x (2s+1) space.
CMatrix spin_aligned_full(const SpinAligned& spec);

/// The equivalent rank-2 separable qubit pair.
Rank2Separable spin_effective_qubits(const SpinAligned& spec);

} // namespace condqubit
