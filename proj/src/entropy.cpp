#include "condqubit/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "condqubit/brute_force.hpp"
#include "condqubit/error.hpp"

namespace condqubit {

namespace {

constexpr double kSpectrumZero = 1e-15;

double tsallis_q(const EntropySpec& f)
{
    return std::get<Tsallis>(f).q;
}

} // namespace

std::string entropy_name(const EntropySpec& f)
{
    if (std::holds_alternative<VonNeumann>(f)) {
        return "vn";
    }
    if (std::holds_alternative<Linear>(f)) {
        return "linear";
    }
    std::ostringstream os;
    os.precision(17);
    os << "tsallis:" << tsallis_q(f);
    return os.str();
}

EntropySpec parse_entropy(const std::string& text)
{
    if (text == "vn" || text == "von-neumann") {
        return VonNeumann{};
    }
    if (text == "linear") {
        return Linear{};
    }
    const std::string prefix = "tsallis:";
    if (text.rfind(prefix, 0) == 0) {
        std::size_t used = 0;
        double q = 0.0;
        try {
            q = std::stod(text.substr(prefix.size()), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != text.size() - prefix.size()) {
            throw Error(ErrorCode::Validation, "cannot parse Tsallis index in '" + text + "'");
        }
        EntropySpec f = Tsallis{q};
        validate_entropy(f);
        return f;
    }
    throw Error(ErrorCode::Validation,
                "unknown entropy '" + text + "' (expected vn, linear or tsallis:<q>)");
}

void validate_entropy(const EntropySpec& f)
{
    if (const auto* t = std::get_if<Tsallis>(&f)) {
        if (!std::isfinite(t->q) || t->q <= 0.0 || std::abs(t->q - 1.0) < 1e-12) {
            throw Error(ErrorCode::Validation, "Tsallis index must satisfy q > 0, q != 1");
        }
    }
}

double generator(const EntropySpec& f, double p)
{
    if (p < kSpectrumZero) {
        return 0.0;
    }
    if (std::holds_alternative<VonNeumann>(f)) {
        return -p * std::log2(p);
    }
    if (std::holds_alternative<Linear>(f)) {
        return 2.0 * p * (1.0 - p);
    }
    const double q = tsallis_q(f);
    return (p - std::pow(p, q)) / (1.0 - std::pow(2.0, 1.0 - q));
}

double entropy_of_spectrum(const RVector& eigenvalues, const EntropySpec& f)
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double l = eigenvalues(i);
        if (l < -kPositivityTol) {
            std::ostringstream os;
            os << "entropy: eigenvalue " << l << " below -1e-10";
            throw Error(ErrorCode::PositivityViolation, os.str());
        }
        s += generator(f, l);
    }
    return s;
}

double entropy(const CMatrix& rho, const EntropySpec& f)
{
    if (rho.rows() != rho.cols() || rho.rows() == 0) {
        throw Error(ErrorCode::Shape, "entropy: expected a square matrix");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
    return entropy_of_spectrum(es.eigenvalues(), f);
}

double qubit_entropy(double r, const EntropySpec& f)
{
    RVector ev(2);
    ev << 0.5 * (1.0 + r), 0.5 * (1.0 - r);
    return entropy_of_spectrum(ev, f);
}

double concurrence_composition(double x, const EntropySpec& f)
{
    const double root = std::sqrt(std::max(0.0, 1.0 - x * x));
    return generator(f, 0.5 * (1.0 + root)) + generator(f, 0.5 * (1.0 - root));
}

bool convex_f_class(const EntropySpec& f)
{
    if (const auto* t = std::get_if<Tsallis>(&f)) {
        const double lo = (5.0 - std::sqrt(13.0)) / 2.0;
        const double hi = (5.0 + std::sqrt(13.0)) / 2.0;
        return t->q >= lo && t->q <= hi;
    }
    return true;
}

double conditional_entropy(const QuditQubitState& state, const RankOneMeasurement& m,
                           const EntropySpec& f)
{
    double s = 0.0;
    for (const auto& e : m.elements) {
        if (e.weight == 0.0) {
            continue;
        }
        const double p = e.ket.dot(state.reduced_a() * e.ket).real();
        if (p < kZeroProbability) {
            continue;
        }
        const ConditionalOutcome c = conditional_state(state, e.ket);
        // absolute rounding in p * rho_B/j becomes ~eps/p after normalizing
        double r = c.r_b.norm();
        if (r > 1.0 && (r - 1.0) * c.probability < 1e-12) {
            r = 1.0;
        }
        s += e.weight * c.probability * qubit_entropy(r, f);
    }
    return s;
}

// ---------------------------------------------------------------------------

MinimizationResult min_conditional_schmidt(const FamilySpec& spec, const EntropySpec& f)
{
    validate_entropy(f);
    const auto mix = schmidt_form(spec);
    if (!mix) {
        throw Error(ErrorCode::UnsupportedFamily,
                    "Schmidt-basis minimum needs pure-mix, two-pure-mix or schmidt-mix; use brute force for "
                        + family_name(spec));
    }
    make_state(spec);
    const int dA = mix->dA;
    const double p0 = background_weight(*mix);
    const auto offsets = component_offsets(*mix);
    std::vector<bool> used(static_cast<std::size_t>(dA), false);
    double value = 0.0;
    for (std::size_t i = 0; i < mix->components.size(); ++i) {
        const auto& c = mix->components[i];
        for (std::size_t k = 0; k < c.schmidt.size(); ++k) {
            used[static_cast<std::size_t>(offsets[i]) + k] = true;
            const double pk = c.weight * c.schmidt[k] + p0 / dA;
            if (pk < kZeroProbability) {
                continue;
            }
            value += pk * (generator(f, (c.weight * c.schmidt[k] + p0 / (2.0 * dA)) / pk)
                           + generator(f, p0 / (2.0 * dA * pk)));
        }
    }
    for (int level = 0; level < dA; ++level) {
        const double pk = p0 / dA;
        if (!used[static_cast<std::size_t>(level)] && pk >= kZeroProbability) {
            value += pk * 2.0 * generator(f, 0.5);
        }
    }
    MinimizationResult r;
    r.value = value;
    r.measurement = schmidt_measurement(spec);
    r.method = "analytic-schmidt";
    return r;
}

// ---------------------------------------------------------------------------

double quad_info_gain(const QuditQubitState& state, const RankOneMeasurement& m)
{
    const int dA = state.qudit_dim();
    const RMatrix& c = state.correlations();
    double g = 0.0;
    for (const auto& e : m.elements) {
        const double denom = 1.0 + state.r_a().dot(e.k_vec);
        if (e.weight == 0.0 || denom / dA < kZeroProbability) {
            continue;
        }
        g += e.weight * (c.transpose() * e.k_vec).squaredNorm() / denom;
    }
    return 2.0 / (dA * 2.0) * g;
}

CMatrix complete_basis(const CMatrix& cols)
{
    const auto d = cols.rows();
    CMatrix out(d, d);
    Eigen::Index filled = cols.cols();
    out.leftCols(filled) = cols;
    std::vector<bool> taken(static_cast<std::size_t>(d), false);
    while (filled < d) {
        // greedy: the unit vector with the largest residual
        Eigen::Index best = -1;
        double best_norm = -1.0;
        CVector best_v;
        for (Eigen::Index i = 0; i < d; ++i) {
            if (taken[static_cast<std::size_t>(i)]) {
                continue;
            }
            CVector v = CVector::Unit(d, i);
            for (int pass = 0; pass < 2; ++pass) {
                v -= out.leftCols(filled) * (out.leftCols(filled).adjoint() * v);
            }
            if (v.norm() > best_norm + 1e-12) {
                best_norm = v.norm();
                best = i;
                best_v = v;
            }
        }
        taken[static_cast<std::size_t>(best)] = true;
        out.col(filled) = best_v / best_norm;
        ++filled;
    }
    return out;
}

EffectiveQubit effective_qubit(const QuditQubitState& state)
{
    const CMatrix support = state.support_a();
    if (support.cols() < 2) {
        throw Error(ErrorCode::Degenerate, "local support at A is one-dimensional");
    }
    if (support.cols() > 2) {
        throw Error(ErrorCode::UnsupportedFamily,
                    "local support at A has dimension " + std::to_string(support.cols())
                        + "; the quadratic eigenproblem needs dimension 2");
    }
    const int dA = state.qudit_dim();
    CMatrix frame = support;
    const CMatrix& block = state.correlated_block();
    if (block.cols() == 2) {
        const CMatrix residual = support - block * (block.adjoint() * support);
        if (residual.norm() < 1e-9) {
            frame = block;
        }
    }
    CMatrix k = CMatrix::Zero(2 * dA, 4);
    for (int x = 0; x < dA; ++x) {
        for (int a = 0; a < 2; ++a) {
            k(2 * x, 2 * a) = frame(x, a);
            k(2 * x + 1, 2 * a + 1) = frame(x, a);
        }
    }
    EffectiveQubit eq;
    eq.frame = frame;
    eq.rho = k.adjoint() * state.rho() * k;
    eq.rho /= eq.rho.trace().real();
    eq.rho = (0.5 * (eq.rho + eq.rho.adjoint())).eval();
    eq.fano = fano_decompose(eq.rho, 2);
    return eq;
}

double quad_projective_gain(const FanoData& f, const Vec3& k)
{
    if (f.r_a.size() != 3) {
        throw Error(ErrorCode::Shape, "quad_projective_gain: expects effective two-qubit data");
    }
    const Vec3 a = f.r_a;
    const Eigen::Matrix3d c = f.correlations;
    const double num = (c.transpose() * k).squaredNorm();
    const double ak = a.dot(k);
    const double den = k.squaredNorm() - ak * ak;
    return (2.0 / 2.0) * num / den;
}

QuadEigen quad_eigenproblem(const FanoData& f)
{
    const Vec3 a = f.r_a;
    if (1.0 - a.squaredNorm() < 1e-12) {
        throw Error(ErrorCode::Degenerate, "N_A = 1 - r_A r_A^T is singular (pure marginal)");
    }
    const Eigen::Matrix3d c = f.correlations;
    const Eigen::Matrix3d cct = c * c.transpose();
    const Eigen::Matrix3d n = Eigen::Matrix3d::Identity() - a * a.transpose();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix3d> ges(cct, n);
    QuadEigen out;
    out.eigenvalues = ges.eigenvalues();
    out.lambda_max = out.eigenvalues(2);
    const double tol = 1e-10 * std::max(1.0, std::abs(out.lambda_max));
    int first = 2;
    while (first > 0 && out.eigenvalues(first - 1) >= out.lambda_max - tol) {
        --first;
    }
    out.multiplicity = 3 - first;
    const Eigen::MatrixXd space = ges.eigenvectors().rightCols(out.multiplicity);
    const Eigen::MatrixXd proj = space * (space.transpose() * space).inverse() * space.transpose();
    const std::array<Vec3, 3> preference{Vec3::UnitZ(), Vec3::UnitX(), Vec3::UnitY()};
    Vec3 k = space.col(space.cols() - 1).normalized();
    for (const auto& c0 : preference) {
        const Vec3 v = proj * c0;
        if (v.norm() > 1e-8) {
            k = v.normalized();
            break;
        }
    }
    for (int idx : {2, 0, 1}) {
        if (std::abs(k(idx)) > 1e-12) {
            if (k(idx) < 0.0) {
                k = -k;
            }
            break;
        }
    }
    out.k = k;
    return out;
}

std::pair<Eigen::Vector2cd, Eigen::Vector2cd> qubit_kets(const Vec3& k)
{
    const Vec3 u = k.normalized();
    const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
    const double phi = std::atan2(u.y(), u.x());
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    const Complex ph = std::polar(1.0, phi);
    Eigen::Vector2cd plus(c, ph * s);
    Eigen::Vector2cd minus(-std::conj(ph) * s, c);
    return {plus, minus};
}

namespace {

RankOneMeasurement frame_measurement(const CMatrix& frame, const Eigen::Vector2cd& k0,
                                     const Eigen::Vector2cd& k1)
{
    CMatrix cols(frame.rows(), 2);
    cols.col(0) = frame * k0;
    cols.col(1) = frame * k1;
    return measurement_from_unitary(complete_basis(cols));
}

} // namespace

MinimizationResult min_quad_rank2(const QuditQubitState& state)
{
    const EffectiveQubit eq = effective_qubit(state);
    const QuadEigen ev = quad_eigenproblem(eq.fano);
    MinimizationResult r;
    r.value = (1.0 - state.r_b().squaredNorm()) - (2.0 / 2.0) * ev.lambda_max;
    const auto [k0, k1] = qubit_kets(ev.k);
    r.measurement = frame_measurement(eq.frame, k0, k1);
    r.method = "analytic-eig";
    r.diagnostics.residual = std::abs(conditional_entropy(state, r.measurement, Linear{}) - r.value);
    if (ev.multiplicity > 1) {
        r.diagnostics.warnings.push_back("degenerate largest eigenvalue (multiplicity "
                                         + std::to_string(ev.multiplicity) + ")");
    }
    return r;
}

// ---------------------------------------------------------------------------

double rank2_optimal_angle(double p_plus, double p_minus, double theta_a)
{
    return std::atan2(std::sin(theta_a), (p_plus - p_minus) * std::cos(theta_a));
}

double rank2_s2_min(double p_plus, double p_minus, double theta_a, double theta_b)
{
    const double ca = std::cos(theta_a), sb = std::sin(theta_b);
    return 4.0 * p_plus * p_minus * ca * ca * sb * sb;
}

namespace {

void require_rank2_analytic(double p0, const EntropySpec& f)
{
    if (p0 > 1e-12) {
        throw Error(ErrorCode::UnsupportedFamily,
                    "rank-2 closed form needs p+ + p- = 1; use brute force");
    }
    if (!convex_f_class(f)) {
        throw Error(ErrorCode::UnsupportedFamily,
                    "entropy " + entropy_name(f)
                        + " is outside the convex-F class; optimality of the rank-2 angle is not guaranteed");
    }
}

} // namespace

MinimizationResult rank2_separable_min(const Rank2Separable& spec, const EntropySpec& f)
{
    validate_entropy(f);
    make_state(spec);
    const double pp = spec.p_plus;
    const double pm = spec.minus_weight();
    require_rank2_analytic(1.0 - pp - pm, f);
    const double phi = rank2_optimal_angle(pp, pm, spec.theta_a);
    const double s2 = rank2_s2_min(pp, pm, spec.theta_a, spec.theta_b);
    MinimizationResult r;
    r.value = concurrence_composition(std::sqrt(s2), f);
    const auto [k0, k1] = qubit_kets(Vec3(std::sin(phi), 0.0, std::cos(phi)));
    CMatrix frame = CMatrix::Zero(spec.dA, 2);
    frame(0, 0) = 1.0;
    frame(1, 1) = 1.0;
    r.measurement = frame_measurement(frame, k0, k1);
    r.method = "analytic-rank2";
    return r;
}

// ---------------------------------------------------------------------------

double spin_s2_curve(double s, double theta, double p_plus)
{
    spin_dimension(s);
    const double c = std::pow(std::cos(theta), 4.0 * s);
    return 4.0 * p_plus * (1.0 - p_plus) * c * (1.0 - c);
}

double spin_max_angle(double s)
{
    spin_dimension(s);
    return std::acos(std::pow(2.0, -1.0 / (4.0 * s)));
}

SpinMinResult spin_min(double s, double theta, double p_plus)
{
    const SpinAligned spec{s, theta, p_plus};
    const Rank2Separable eff = spin_effective_qubits(spec);
    SpinMinResult out;
    out.theta_eff = eff.theta_a;
    out.s2 = spin_s2_curve(s, theta, p_plus);
    out.min_angle = rank2_optimal_angle(p_plus, 1.0 - p_plus, out.theta_eff);

    const CMatrix frame = spin_effective_frame(s, theta);
    const auto [k0, k1] = qubit_kets(Vec3(std::sin(out.min_angle), 0.0, std::cos(out.min_angle)));
    const auto ops = spin_operators(s);
    const std::array<CVector, 2> kets{CVector(frame * k0), CVector(frame * k1)};
    for (std::size_t i = 0; i < 2; ++i) {
        for (int c = 0; c < 3; ++c) {
            out.spin_averages[i](c) = kets[i].dot(ops[static_cast<std::size_t>(c)] * kets[i]).real() / s;
        }
    }
    if (std::abs(p_plus - 0.5) < 1e-15 && theta > 0.0) {
        // 1 - cos^{2n} = sin^2 sum_{k<n} cos^{2k}, n = 2s; exact at s = 1/2
        const int n = spin_dimension(s) - 1;
        const double c2 = std::cos(theta) * std::cos(theta);
        double head = 0.0, full = 0.0, term = 1.0;
        for (int k = 0; k < n; ++k) {
            if (k < n - 1) {
                head += term;
            }
            full += term;
            term *= c2;
        }
        const double x = (std::sin(theta) < 0.0 ? -1.0 : 1.0) / std::sqrt(full);
        const double z = std::cos(theta) * head / full;
        out.closed_form_averages = std::array<Vec3, 2>{Vec3(x, 0.0, z), Vec3(-x, 0.0, z)};
    }
    out.result.value = out.s2;
    out.result.measurement = frame_measurement(frame, k0, k1);
    out.result.method = "analytic-rank2";
    return out;
}

// ---------------------------------------------------------------------------

std::optional<MinimizationResult> analytic_min(const FamilySpec& spec, const EntropySpec& f)
{
    validate_entropy(f);
    if (const auto mix = schmidt_form(spec)) {
        const bool nonnegative = std::all_of(mix->components.begin(), mix->components.end(),
                                             [](const SchmidtComponent& c) { return c.weight >= 0.0; });
        if (nonnegative) {
            return min_conditional_schmidt(spec, f);
        }
    }
    if (const auto* r = std::get_if<Rank2Separable>(&spec)) {
        if (1.0 - r->p_plus - r->minus_weight() <= 1e-12 && convex_f_class(f)) {
            return rank2_separable_min(*r, f);
        }
    }
    if (const auto* s = std::get_if<SpinAligned>(&spec)) {
        if (convex_f_class(f)) {
            SpinMinResult sm = spin_min(s->s, s->theta, s->p_plus);
            sm.result.value = concurrence_composition(std::sqrt(sm.s2), f);
            return sm.result;
        }
    }
    if (std::holds_alternative<Linear>(f)) {
        const QuditQubitState state = make_state(spec);
        try {
            return min_quad_rank2(state);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Degenerate && e.code() != ErrorCode::UnsupportedFamily) {
                throw;
            }
        }
    }
    return std::nullopt;
}

double discord(const QuditQubitState& state, const FamilySpec* spec)
{
    const EntropySpec vn = VonNeumann{};
    double minimum = 0.0;
    std::optional<MinimizationResult> a;
    if (spec != nullptr) {
        a = analytic_min(*spec, vn);
    }
    if (a) {
        minimum = a->value;
    } else {
        minimum = brute_force_min(state, vn).value;
    }
    const double s_ab = entropy(state.rho(), vn);
    const double s_a = entropy(state.reduced_a(), vn);
    return minimum - (s_ab - s_a);
}

} // namespace condqubit
