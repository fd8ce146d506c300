#include "condqubit/state_factory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "condqubit/error.hpp"
#include "condqubit/operator_basis.hpp"

namespace condqubit {

namespace {

constexpr double kFeasibilityTol = 1e-12;
constexpr double kAngleTol = 1e-12;

CMatrix kron(const CMatrix& a, const CMatrix& b)
{
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

void check_angle(double value, double lo, double hi, const char* name)
{
    if (!std::isfinite(value) || value < lo - kAngleTol || value > hi + kAngleTol) {
        std::ostringstream os;
        os << name << " = " << value << " outside [" << lo << ", " << hi << "]";
        throw Error(ErrorCode::Validation, os.str());
    }
}

[[noreturn]] void infeasible(const std::string& inequality, double lhs, double rhs)
{
    std::ostringstream os;
    os.precision(17);
    os << "infeasible parameters: violates " << inequality << " (" << lhs << " vs " << rhs << ")";
    throw Error(ErrorCode::PositivityViolation, os.str());
}

void require_le(double lhs, double rhs, const std::string& inequality)
{
    if (!(lhs <= rhs + kFeasibilityTol)) {
        infeasible(inequality, lhs, rhs);
    }
}

double min_eigenvalue(const CMatrix& h)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

CMatrix unit_columns(int dA, const std::vector<int>& levels)
{
    CMatrix block = CMatrix::Zero(dA, static_cast<Eigen::Index>(levels.size()));
    for (std::size_t c = 0; c < levels.size(); ++c) {
        block(levels[c], static_cast<Eigen::Index>(c)) = 1.0;
    }
    return block;
}

QuditQubitState build_schmidt_mix(const SchmidtMix& mix)
{
    const int dA = mix.dA;
    const double p0 = background_weight(mix);
    const auto offsets = component_offsets(mix);
    CMatrix rho = CMatrix::Identity(2 * dA, 2 * dA) * (p0 / (2.0 * dA));
    std::vector<int> levels;
    for (std::size_t i = 0; i < mix.components.size(); ++i) {
        const auto& comp = mix.components[i];
        const auto [zero, one] = qubit_frame(comp.gamma, comp.eta);
        CVector psi = CVector::Zero(2 * dA);
        for (std::size_t k = 0; k < comp.schmidt.size(); ++k) {
            const int level = offsets[i] + static_cast<int>(k);
            const Eigen::Vector2cd& qubit = (k == 0) ? zero : one;
            psi.segment<2>(2 * level) = std::sqrt(std::max(comp.schmidt[k], 0.0)) * qubit;
            levels.push_back(level);
        }
        rho += comp.weight * psi * psi.adjoint();
    }
    return QuditQubitState::from_density(std::move(rho), dA, unit_columns(dA, levels));
}

void validate_schmidt_mix(const SchmidtMix& mix)
{
    if (mix.dA < 2) {
        throw Error(ErrorCode::InvalidDimension, "schmidt-mix: dA must be >= 2");
    }
    int slots = 0;
    double total = 0.0;
    for (std::size_t i = 0; i < mix.components.size(); ++i) {
        const auto& comp = mix.components[i];
        if (comp.schmidt.empty() || comp.schmidt.size() > 2) {
            throw Error(ErrorCode::Validation,
                        "schmidt-mix: component " + std::to_string(i)
                            + " needs 1 or 2 Schmidt coefficients (qubit partner)");
        }
        double sum = 0.0;
        for (double q : comp.schmidt) {
            if (!(q >= -kFeasibilityTol)) {
                throw Error(ErrorCode::Validation, "schmidt-mix: negative Schmidt coefficient");
            }
            sum += q;
        }
        if (std::abs(sum - 1.0) > 1e-10) {
            throw Error(ErrorCode::Validation, "schmidt-mix: Schmidt coefficients of component "
                                                   + std::to_string(i) + " must sum to 1");
        }
        check_angle(comp.gamma, 0.0, std::numbers::pi, "gamma");
        if (!std::isfinite(comp.eta) || !std::isfinite(comp.weight)) {
            throw Error(ErrorCode::Validation, "schmidt-mix: non-finite parameter");
        }
        slots += static_cast<int>(comp.schmidt.size());
        total += comp.weight;
    }
    if (slots > mix.dA) {
        throw Error(ErrorCode::InvalidDimension,
                    "schmidt-mix: components need " + std::to_string(slots)
                        + " qudit levels but dA = " + std::to_string(mix.dA));
    }
    if (mix.p0 && std::abs(*mix.p0 - (1.0 - total)) > 1e-10) {
        throw Error(ErrorCode::Validation, "schmidt-mix: p0 must equal 1 - sum of weights");
    }
    const double p0 = 1.0 - total;
    require_le(0.0, p0, "p0 = 1 - sum p_i >= 0");
    for (std::size_t i = 0; i < mix.components.size(); ++i) {
        require_le(0.0, mix.components[i].weight + p0 / (2.0 * mix.dA),
                   "p_" + std::to_string(i + 1) + " + p0/(2 dA) >= 0");
    }
}

SchmidtMix pure_mix_form(const PureMix& s)
{
    const double c = std::cos(s.beta / 2.0);
    const double sn = std::sin(s.beta / 2.0);
    SchmidtMix mix;
    mix.dA = s.dA;
    mix.components.push_back({s.p, {c * c, sn * sn}, 0.0, 0.0});
    return mix;
}

SchmidtMix two_pure_mix_form(const TwoPureMix& s)
{
    const double c1 = std::cos(s.beta1 / 2.0);
    const double s1 = std::sin(s.beta1 / 2.0);
    const double c2 = std::cos(s.beta2 / 2.0);
    const double s2 = std::sin(s.beta2 / 2.0);
    SchmidtMix mix;
    mix.dA = s.dA;
    mix.components.push_back({s.p1, {c1 * c1, s1 * s1}, 0.0, 0.0});
    if (s.beta2 > 0.0) {
        mix.components.push_back({s.p2, {c2 * c2, s2 * s2}, s.gamma, s.eta});
    } else {
        mix.components.push_back({s.p2, {1.0}, s.gamma, s.eta});
    }
    return mix;
}

void validate_pure_mix(const PureMix& s)
{
    if (s.dA < 2) {
        throw Error(ErrorCode::InvalidDimension, "pure-mix: dA must be >= 2");
    }
    check_angle(s.beta, 0.0, std::numbers::pi / 2.0, "beta");
    require_le(-1.0 / (2.0 * s.dA - 1.0), s.p, "-1/(2 dA - 1) <= p");
    require_le(s.p, 1.0, "p <= 1");
}

void validate_two_pure_mix(const TwoPureMix& s)
{
    check_angle(s.beta1, 0.0, std::numbers::pi / 2.0, "beta1");
    check_angle(s.beta2, 0.0, std::numbers::pi / 2.0, "beta2");
    check_angle(s.gamma, 0.0, std::numbers::pi, "gamma");
    const int needed = s.beta2 > 0.0 ? 4 : 3;
    if (s.dA < needed) {
        throw Error(ErrorCode::InvalidDimension, "two-pure-mix: dA must be >= "
                                                     + std::to_string(needed) + " (got "
                                                     + std::to_string(s.dA) + ")");
    }
    const double m = 2.0 * s.dA - 1.0;
    require_le(s.p1 + s.p2, 1.0, "p1 + p2 <= 1");
    require_le(s.p1 - m * s.p2, 1.0, "p1 - (2 dA - 1) p2 <= 1");
    require_le(s.p2 - m * s.p1, 1.0, "p2 - (2 dA - 1) p1 <= 1");
}

QuditQubitState build_rank2(const Rank2Separable& s)
{
    if (s.dA < 2) {
        throw Error(ErrorCode::InvalidDimension, "rank2-separable: dA must be >= 2");
    }
    check_angle(s.theta_a, 0.0, std::numbers::pi / 2.0, "theta_a");
    check_angle(s.theta_b, 0.0, std::numbers::pi / 2.0, "theta_b");
    const double pp = s.p_plus;
    const double pm = s.minus_weight();
    require_le(0.0, pp, "p+ >= 0");
    require_le(0.0, pm, "p- >= 0");
    const double p0 = 1.0 - pp - pm;
    require_le(0.0, p0, "p+ + p- <= 1");

    auto product = [&](double sign) {
        CVector a = CVector::Zero(s.dA);
        a(0) = std::cos(s.theta_a / 2.0);
        a(1) = sign * std::sin(s.theta_a / 2.0);
        Eigen::Vector2cd b(std::cos(s.theta_b / 2.0), sign * std::sin(s.theta_b / 2.0));
        CVector psi(2 * s.dA);
        for (int i = 0; i < s.dA; ++i) {
            psi.segment<2>(2 * i) = a(i) * b;
        }
        return psi;
    };
    const CVector plus = product(1.0);
    const CVector minus = product(-1.0);
    CMatrix rho = pp * plus * plus.adjoint() + pm * minus * minus.adjoint();
    rho += CMatrix::Identity(2 * s.dA, 2 * s.dA) * (std::max(p0, 0.0) / (2.0 * s.dA));
    return QuditQubitState::from_density(std::move(rho), s.dA, unit_columns(s.dA, {0, 1}));
}

void validate_spin(const SpinAligned& s)
{
    spin_dimension(s.s);
    check_angle(s.theta, 0.0, std::numbers::pi / 2.0, "theta");
    require_le(0.0, s.p_plus, "p+ >= 0");
    require_le(s.p_plus, 1.0, "p+ <= 1");
}

QuditQubitState build_spin(const SpinAligned& s)
{
    validate_spin(s);
    const int n = spin_dimension(s.s);
    const CVector plus = spin_rotated_ket(s.s, s.theta);
    const CVector minus = spin_rotated_ket(s.s, -s.theta);
    const CMatrix frame = spin_effective_frame(s.s, s.theta);
    const Eigen::Vector2cd bp = frame.adjoint() * plus;
    const Eigen::Vector2cd bm = frame.adjoint() * minus;
    auto joint = [&](const CVector& a, const Eigen::Vector2cd& b) {
        CVector psi(2 * n);
        for (int i = 0; i < n; ++i) {
            psi.segment<2>(2 * i) = a(i) * b;
        }
        return psi;
    };
    const CVector jp = joint(plus, bp);
    const CVector jm = joint(minus, bm);
    const double pp = s.p_plus;
    CMatrix rho = pp * jp * jp.adjoint() + (1.0 - pp) * jm * jm.adjoint();
    return QuditQubitState::from_density(std::move(rho), n, frame);
}

} // namespace

// ---------------------------------------------------------------------------

CMatrix partial_trace_b(const CMatrix& rho, int dA)
{
    CMatrix out(dA, dA);
    for (int a = 0; a < dA; ++a) {
        for (int b = 0; b < dA; ++b) {
            out(a, b) = rho(2 * a, 2 * b) + rho(2 * a + 1, 2 * b + 1);
        }
    }
    return out;
}

Mat2c partial_trace_a(const CMatrix& rho, int dA)
{
    Mat2c out = Mat2c::Zero();
    for (int a = 0; a < dA; ++a) {
        out += rho.block<2, 2>(2 * a, 2 * a);
    }
    return out;
}

FanoData fano_decompose(const CMatrix& rho, int dA)
{
    if (dA < 2 || rho.rows() != 2 * dA || rho.cols() != 2 * dA) {
        throw Error(ErrorCode::Validation, "fano_decompose: expected a " + std::to_string(2 * dA)
                                               + "x" + std::to_string(2 * dA) + " matrix");
    }
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > kPositivityTol) {
        throw Error(ErrorCode::Validation, "fano_decompose: trace is " + std::to_string(tr));
    }
    const auto& basis_a = basis_for(dA);
    const auto& pauli = basis_for(2);

    FanoData f;
    f.r_a = bloch_vector(partial_trace_b(rho, dA), basis_a);
    const RVector rb = bloch_vector(partial_trace_a(rho, dA), pauli);
    f.r_b = rb;

    // T[a,b][nu] = Tr[<a|rho|b> s_nu]
    std::vector<Eigen::Vector3cd> t(static_cast<std::size_t>(dA * dA));
    for (int a = 0; a < dA; ++a) {
        for (int b = 0; b < dA; ++b) {
            const Mat2c blk = rho.block<2, 2>(2 * a, 2 * b);
            for (int nu = 0; nu < 3; ++nu) {
                t[static_cast<std::size_t>(a * dA + b)](nu) = (blk * pauli[nu]).trace();
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(basis_a.size());
    f.correlations.resize(n, 3);
    for (Eigen::Index mu = 0; mu < n; ++mu) {
        const CMatrix& s = basis_a[static_cast<std::size_t>(mu)];
        Eigen::Vector3cd acc = Eigen::Vector3cd::Zero();
        for (int a = 0; a < dA; ++a) {
            for (int b = 0; b < dA; ++b) {
                if (s(b, a) != Complex(0.0)) {
                    acc += s(b, a) * t[static_cast<std::size_t>(a * dA + b)];
                }
            }
        }
        for (int nu = 0; nu < 3; ++nu) {
            f.correlations(mu, nu) = acc(nu).real() - f.r_a(mu) * f.r_b(nu);
        }
    }
    return f;
}

CMatrix fano_reconstruct(const FanoData& fano, int dA)
{
    const auto& basis_a = basis_for(dA);
    const auto& pauli = basis_for(2);
    if (static_cast<std::size_t>(fano.r_a.size()) != basis_a.size()
        || static_cast<std::size_t>(fano.correlations.rows()) != basis_a.size()
        || fano.correlations.cols() != 3) {
        throw Error(ErrorCode::Shape, "fano_reconstruct: Fano data does not match dA");
    }
    const CMatrix rho_a = state_from_bloch(fano.r_a, basis_a);
    const CMatrix rho_b = state_from_bloch(RVector(fano.r_b), pauli);
    CMatrix rho = kron(rho_a, rho_b);
    for (std::size_t mu = 0; mu < basis_a.size(); ++mu) {
        for (int nu = 0; nu < 3; ++nu) {
            const double c = fano.correlations(static_cast<Eigen::Index>(mu), nu);
            if (c != 0.0) {
                rho += (c / (2.0 * dA)) * kron(basis_a[mu], pauli[static_cast<std::size_t>(nu)]);
            }
        }
    }
    return rho;
}

double fano_purity(const FanoData& fano, int dA)
{
    const double pa = (1.0 + fano.r_a.squaredNorm()) / dA;
    const double pb = (1.0 + fano.r_b.squaredNorm()) / 2.0;
    const double cross = fano.r_a.dot(fano.correlations * fano.r_b) * 2.0 / (2.0 * dA);
    const double corr = fano.correlations.squaredNorm() / (2.0 * dA);
    return pa * pb + cross + corr;
}

QuditQubitState QuditQubitState::from_density(CMatrix rho, int dA,
                                              std::optional<CMatrix> correlated_block)
{
    if (dA < 2) {
        throw Error(ErrorCode::InvalidDimension, "qudit dimension must be >= 2");
    }
    if (rho.rows() != 2 * dA || rho.cols() != 2 * dA) {
        throw Error(ErrorCode::Shape, "density matrix must be " + std::to_string(2 * dA) + "x"
                                          + std::to_string(2 * dA));
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kPositivityTol) {
        throw Error(ErrorCode::Validation, "density matrix is not Hermitian");
    }
    rho = (0.5 * (rho + rho.adjoint())).eval();
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > kPositivityTol) {
        throw Error(ErrorCode::Validation, "density matrix trace is " + std::to_string(tr));
    }
    const double lmin = min_eigenvalue(rho);
    if (lmin < -kPositivityTol) {
        std::ostringstream os;
        os.precision(17);
        os << "density matrix has eigenvalue " << lmin << " < -1e-10";
        throw Error(ErrorCode::PositivityViolation, os.str());
    }

    QuditQubitState s;
    s.dA_ = dA;
    s.fano_ = fano_decompose(rho, dA);
    s.rho_a_ = partial_trace_b(rho, dA);
    s.rho_b_ = partial_trace_a(rho, dA);
    s.rho_ = std::move(rho);

    if (correlated_block) {
        if (correlated_block->rows() != dA || correlated_block->cols() < 1
            || correlated_block->cols() > dA) {
            throw Error(ErrorCode::Shape, "correlated block must be dA x d' with 1 <= d' <= dA");
        }
        s.block_ = std::move(*correlated_block);
    } else {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(s.rho_a_);
        const auto& w = es.eigenvalues();
        const double floor = w(0);
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = dA - 1; i >= 0; --i) {
            if (w(i) > floor + 1e-12) {
                keep.push_back(i);
            }
        }
        if (keep.empty()) {
            s.block_ = CMatrix::Identity(dA, dA);
        } else {
            s.block_.resize(dA, static_cast<Eigen::Index>(keep.size()));
            for (std::size_t c = 0; c < keep.size(); ++c) {
                s.block_.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]);
            }
        }
    }
    return s;
}

CMatrix QuditQubitState::support_a(double tol) const
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_a_);
    const auto& w = es.eigenvalues();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = dA_ - 1; i >= 0; --i) {
        if (w(i) > tol) {
            keep.push_back(i);
        }
    }
    CMatrix out(dA_, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
        out.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]);
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string family_name(const FamilySpec& spec)
{
    struct Visitor {
        std::string operator()(const PureMix&) const { return "pure-mix"; }
        std::string operator()(const TwoPureMix&) const { return "two-pure-mix"; }
        std::string operator()(const Rank2Separable&) const { return "rank2-separable"; }
        std::string operator()(const SpinAligned&) const { return "spin-aligned"; }
        std::string operator()(const SchmidtMix&) const { return "schmidt-mix"; }
        std::string operator()(const RawState&) const { return "raw"; }
    };
    return std::visit(Visitor{}, spec);
}

std::optional<SchmidtMix> schmidt_form(const FamilySpec& spec)
{
    if (const auto* s = std::get_if<PureMix>(&spec)) {
        return pure_mix_form(*s);
    }
    if (const auto* s = std::get_if<TwoPureMix>(&spec)) {
        return two_pure_mix_form(*s);
    }
    if (const auto* s = std::get_if<SchmidtMix>(&spec)) {
        return *s;
    }
    return std::nullopt;
}

double background_weight(const SchmidtMix& mix)
{
    double total = 0.0;
    for (const auto& c : mix.components) {
        total += c.weight;
    }
    return 1.0 - total;
}

std::vector<int> component_offsets(const SchmidtMix& mix)
{
    std::vector<int> out;
    int next = 0;
    for (const auto& c : mix.components) {
        out.push_back(next);
        next += static_cast<int>(c.schmidt.size());
    }
    return out;
}

std::pair<Eigen::Vector2cd, Eigen::Vector2cd> qubit_frame(double gamma, double eta)
{
    const double c = std::cos(gamma / 2.0);
    const double s = std::sin(gamma / 2.0);
    const Complex phase = std::polar(1.0, eta);
    Eigen::Vector2cd zero(c, phase * s);
    Eigen::Vector2cd one(-std::conj(phase) * s, c);
    return {zero, one};
}

Vec3 frame_axis(double gamma, double eta)
{
    return {std::sin(gamma) * std::cos(eta), std::sin(gamma) * std::sin(eta), std::cos(gamma)};
}

QuditQubitState make_state(const FamilySpec& spec)
{
    struct Visitor {
        QuditQubitState operator()(const PureMix& s) const
        {
            validate_pure_mix(s);
            return build_schmidt_mix(pure_mix_form(s));
        }
        QuditQubitState operator()(const TwoPureMix& s) const
        {
            validate_two_pure_mix(s);
            return build_schmidt_mix(two_pure_mix_form(s));
        }
        QuditQubitState operator()(const Rank2Separable& s) const { return build_rank2(s); }
        QuditQubitState operator()(const SpinAligned& s) const { return build_spin(s); }
        QuditQubitState operator()(const SchmidtMix& s) const
        {
            validate_schmidt_mix(s);
            return build_schmidt_mix(s);
        }
        QuditQubitState operator()(const RawState& s) const
        {
            return QuditQubitState::from_density(s.rho, s.dA);
        }
    };
    return std::visit(Visitor{}, spec);
}

// ---------------------------------------------------------------------------

NegativityReport negativity_test(const QuditQubitState& state)
{
    const int dA = state.qudit_dim();
    const CMatrix& rho = state.rho();
    CMatrix pt(2 * dA, 2 * dA);
    for (int a = 0; a < dA; ++a) {
        for (int b = 0; b < dA; ++b) {
            pt.block<2, 2>(2 * a, 2 * b) = rho.block<2, 2>(2 * a, 2 * b).transpose();
        }
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(pt, Eigen::EigenvaluesOnly);
    NegativityReport report;
    report.min_eigenvalue = es.eigenvalues()(0);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (es.eigenvalues()(i) < -kPositivityTol) {
            report.negative_eigenvalues.push_back(es.eigenvalues()(i));
        }
    }
    report.is_npt = !report.negative_eigenvalues.empty();
    return report;
}

// ---------------------------------------------------------------------------

int spin_dimension(double s)
{
    const double twice = 2.0 * s;
    const double rounded = std::round(twice);
    if (!std::isfinite(s) || rounded < 1.0 || std::abs(twice - rounded) > 1e-12) {
        throw Error(ErrorCode::Validation,
                    "spin must be a positive half-integer, got " + std::to_string(s));
    }
    return static_cast<int>(rounded) + 1;
}

CVector spin_rotated_ket(double s, double theta)
{
    const int n = spin_dimension(s);
    const int twice = n - 1;
    const double c = std::cos(theta / 2.0);
    const double sn = std::sin(theta / 2.0);
    CVector ket(n);
    double binom = 1.0; // C(2s, i)
    for (int i = 0; i < n; ++i) {
        // index i <-> m = s - i, so s + m = 2s - i and s - m = i
        ket(i) = std::sqrt(binom) * std::pow(c, twice - i) * std::pow(sn, i);
        binom = binom * (twice - i) / (i + 1.0);
    }
    return ket;
}

std::array<CMatrix, 3> spin_operators(double s)
{
    const int n = spin_dimension(s);
    CMatrix plus = CMatrix::Zero(n, n);
    CMatrix sz = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double m = s - i;
        sz(i, i) = m;
        if (i > 0) {
            plus(i - 1, i) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
        }
    }
    const CMatrix minus = plus.adjoint();
    const CMatrix sx = 0.5 * (plus + minus);
    const CMatrix sy = Complex(0.0, -0.5) * (plus - minus);
    return {sx, sy, sz};
}

double spin_effective_angle(double s, double theta)
{
    spin_dimension(s);
    return std::acos(std::clamp(std::pow(std::cos(theta), 2.0 * s), -1.0, 1.0));
}

CMatrix spin_effective_frame(double s, double theta)
{
    const CVector plus = spin_rotated_ket(s, theta);
    const CVector minus = spin_rotated_ket(s, -theta);
    const int n = static_cast<int>(plus.size());
    CMatrix frame(n, 2);
    const CVector sum = plus + minus;
    frame.col(0) = sum / sum.norm();
    CVector diff = plus - minus;
    if (diff.norm() > 1e-12) {
        frame.col(1) = diff / diff.norm();
    } else {
        // theta = 0: the pair collapses, complete with the next |m> level
        CVector e = CVector::Zero(n);
        e(1) = 1.0;
        e -= frame.col(0) * frame.col(0).dot(e);
        frame.col(1) = e / e.norm();
    }
    return frame;
}

CMatrix spin_aligned_full(const SpinAligned& spec)
{
    validate_spin(spec);
    const CVector plus = spin_rotated_ket(spec.s, spec.theta);
    const CVector minus = spin_rotated_ket(spec.s, -spec.theta);
    const CMatrix pp = plus * plus.adjoint();
    const CMatrix mm = minus * minus.adjoint();
    return spec.p_plus * kron(pp, pp) + (1.0 - spec.p_plus) * kron(mm, mm);
}

Rank2Separable spin_effective_qubits(const SpinAligned& spec)
{
    validate_spin(spec);
    const double t = spin_effective_angle(spec.s, spec.theta);
    Rank2Separable r;
    r.p_plus = spec.p_plus;
    r.theta_a = t;
    r.theta_b = t;
    r.dA = 2;
    return r;
}

} // namespace condqubit
