#include "condqubit/brute_force.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "condqubit/error.hpp"
#include "condqubit/nelder_mead.hpp"

namespace condqubit {

namespace {

// State compressed onto a d-dimensional subspace of A.
struct Problem {
    int d = 0;
    CMatrix frame;   // dA x d
    CMatrix rho;     // 2d x 2d, not renormalized
    // qubit-block views of rho on the d-dimensional side, stacked as
    // [R00 + R11; R00 - R11; R01] with Rij(a,b) = rho(2a+i, 2b+j)
    CMatrix blocks;
    EntropySpec f;
};

Problem compress(const QuditQubitState& state, const CMatrix& frame, const EntropySpec& f)
{
    const int dA = state.qudit_dim();
    const auto d = static_cast<int>(frame.cols());
    CMatrix k = CMatrix::Zero(2 * dA, 2 * d);
    for (int x = 0; x < dA; ++x) {
        for (int a = 0; a < d; ++a) {
            k(2 * x, 2 * a) = frame(x, a);
            k(2 * x + 1, 2 * a + 1) = frame(x, a);
        }
    }
    Problem p;
    p.d = d;
    p.frame = frame;
    p.rho = k.adjoint() * state.rho() * k;
    p.blocks.resize(3 * d, d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            const Complex r00 = p.rho(2 * a, 2 * b), r11 = p.rho(2 * a + 1, 2 * b + 1);
            p.blocks(a, b) = r00 + r11;
            p.blocks(d + a, b) = r00 - r11;
            p.blocks(2 * d + a, b) = p.rho(2 * a, 2 * b + 1);
        }
    }
    p.f = f;
    return p;
}

double objective(const Problem& pb, const CMatrix& u)
{
    // outcome c: p = u_c^+ (R00 + R11) u_c, p z = u_c^+ (R00 - R11) u_c,
    // p (x - iy)/2 = u_c^+ R01 u_c
    const int d = pb.d;
    const CMatrix bu = pb.blocks.lazyProduct(u);
    double s = 0.0;
    for (int c = 0; c < d; ++c) {
        const auto uc = u.col(c);
        const double p = uc.dot(bu.col(c).head(d)).real();
        if (p < kZeroProbability) {
            continue;
        }
        const double dz = uc.dot(bu.col(c).segment(d, d)).real();
        const Complex m01 = uc.dot(bu.col(c).tail(d));
        const double r = std::sqrt(dz * dz + 4.0 * std::norm(m01)) / p;
        s += p * qubit_entropy(std::min(r, 1.0), pb.f);
    }
    return s;
}

CMatrix support_frame(const QuditQubitState& state, bool full_space)
{
    const int dA = state.qudit_dim();
    if (full_space) {
        return CMatrix::Identity(dA, dA);
    }
    const CMatrix s = state.support_a();
    // prefer computational levels when they span the support
    const CMatrix proj = s * s.adjoint();
    std::vector<int> levels;
    bool computational = true;
    for (int i = 0; i < dA; ++i) {
        const double pii = proj(i, i).real();
        if (std::abs(pii - 1.0) < 1e-9) {
            levels.push_back(i);
        } else if (std::abs(pii) > 1e-9) {
            computational = false;
        }
    }
    if (computational && static_cast<Eigen::Index>(levels.size()) == s.cols()) {
        CMatrix w = CMatrix::Zero(dA, s.cols());
        for (std::size_t c = 0; c < levels.size(); ++c) {
            w(levels[c], static_cast<Eigen::Index>(c)) = 1.0;
        }
        return w;
    }
    return s;
}

struct RestartOutcome {
    double value = std::numeric_limits<double>::infinity();
    CMatrix u0;
    RVector x;
    NelderMeadResult nm;
};

RVector gradient(const std::function<double(const RVector&)>& f, const RVector& x, double h)
{
    RVector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        RVector xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        g(i) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

RMatrix hessian(const std::function<double(const RVector&)>& f, const RVector& x, double f0, double h)
{
    const auto n = x.size();
    RMatrix hm(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        RVector xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        hm(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (h * h);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            RVector pp = x, pm = x, mp = x, mm = x;
            pp(i) += h; pp(j) += h;
            pm(i) += h; pm(j) -= h;
            mp(i) -= h; mp(j) += h;
            mm(i) -= h; mm(j) -= h;
            hm(i, j) = hm(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
        }
    }
    return hm;
}

// Damped Newton steps with finite-difference derivatives, restricted to the
// directions of positive curvature.
RVector newton_polish(const std::function<double(const RVector&)>& f, RVector x, int& evals)
{
    int count = 0;
    auto fc = [&](const RVector& y) {
        ++count;
        return f(y);
    };
    double fx = fc(x);
    for (int it = 0; it < 8; ++it) {
        const RVector g = gradient(fc, x, 1e-5);
        const RMatrix h = hessian(fc, x, fx, 1e-4);
        Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
        const double top = es.eigenvalues().cwiseAbs().maxCoeff();
        RVector step = RVector::Zero(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double l = es.eigenvalues()(i);
            if (l > 1e-7 * std::max(top, 1e-12)) {
                const RVector v = es.eigenvectors().col(i);
                step -= v * (v.dot(g) / l);
            }
        }
        const double len = step.norm();
        if (len > 0.1) {
            step *= 0.1 / len;
        }
        const RVector cand = x + step;
        const double fn = fc(cand);
        if (fn > fx + 4e-16 * std::max(1.0, std::abs(fx))) {
            break;
        }
        x = cand;
        fx = fn;
        if (step.norm() < 1e-12) {
            break;
        }
    }
    evals += count;
    return x;
}

} // namespace

CMatrix givens_unitary(const RVector& params, int d)
{
    CMatrix u = CMatrix::Identity(d, d);
    Eigen::Index k = 0;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            const double c = std::cos(params(k)), s = std::sin(params(k));
            const Complex ph = std::polar(1.0, params(k + 1));
            const Complex a = ph * s, b = -std::conj(ph) * s;
            k += 2;
            for (int r = 0; r < d; ++r) {
                const Complex ui = u(r, i), uj = u(r, j);
                u(r, i) = c * ui + a * uj;
                u(r, j) = b * ui + c * uj;
            }
        }
    }
    return u;
}

MinimizationResult brute_force_min(const QuditQubitState& state, const EntropySpec& f,
                                   const BruteForceConfig& config)
{
    validate_entropy(f);
    if (config.restarts < 0 || config.grid_density < 1) {
        throw Error(ErrorCode::Validation, "brute force: restarts >= 0 and grid_density >= 1 required");
    }
    const CMatrix frame = support_frame(state, config.full_space);
    const Problem pb = compress(state, frame, f);
    const int d = pb.d;
    const auto nparam = static_cast<Eigen::Index>(d * d - d);

    MinimizationResult result;
    result.method = "brute-force";
    if (d == 1) {
        result.measurement = measurement_from_unitary(complete_basis(frame));
        result.value = conditional_entropy(state, result.measurement, f);
        result.diagnostics.restarts = 0;
    } else {
        // restart 0: computational basis of the support, 1: eigenbasis of rho_A
        const int total = config.restarts + 2;
        std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(total));
        NelderMeadOptions nmo;
        nmo.ftol = config.ftol;
        nmo.xtol = config.xtol;
        nmo.max_evaluations = config.max_evaluations > 0
                                  ? config.max_evaluations
                                  : 4000 + 800 * static_cast<int>(nparam);

        CMatrix rho_a(d, d);
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                rho_a(a, b) = pb.rho(2 * a, 2 * b) + pb.rho(2 * a + 1, 2 * b + 1);
            }
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho_a);

        auto run = [&](int idx) {
            RestartOutcome& out = outcomes[static_cast<std::size_t>(idx)];
            if (idx == 0) {
                out.u0 = CMatrix::Identity(d, d);
            } else if (idx == 1) {
                out.u0 = eig.eigenvectors().rowwise().reverse();
            } else {
                Rng rng = make_stream(config.seed, static_cast<std::uint64_t>(idx));
                double best = std::numeric_limits<double>::infinity();
                for (int g = 0; g < config.grid_density; ++g) {
                    CMatrix cand = haar_unitary(d, rng);
                    const double v = objective(pb, cand);
                    if (v < best) {
                        best = v;
                        out.u0 = std::move(cand);
                    }
                }
            }
            const CMatrix u0 = out.u0;
            auto fn = [&pb, &u0, d](const RVector& x) { return objective(pb, u0.lazyProduct(givens_unitary(x, d))); };
            out.nm = nelder_mead(fn, RVector::Zero(nparam), nmo);
            out.x = out.nm.x;
            out.value = out.nm.f;
        };

        const int workers = std::max(1, std::min(config.threads, total));
        if (workers == 1) {
            for (int i = 0; i < total; ++i) {
                run(i);
            }
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    for (int i = w; i < total; i += workers) {
                        run(i);
                    }
                });
            }
            for (auto& t : pool) {
                t.join();
            }
        }

        int best = 0;
        for (int i = 1; i < total; ++i) {
            if (outcomes[static_cast<std::size_t>(i)].value < outcomes[static_cast<std::size_t>(best)].value) {
                best = i;
            }
        }
        RestartOutcome& win = outcomes[static_cast<std::size_t>(best)];
        auto& diag = result.diagnostics;
        for (const auto& o : outcomes) {
            diag.iterations += o.nm.iterations;
            diag.evaluations += o.nm.evaluations;
        }
        diag.restarts = total;
        diag.best_restart = best;
        diag.converged = win.nm.converged;
        if (!win.nm.converged) {
            diag.warnings.push_back("best restart hit the evaluation cap of "
                                    + std::to_string(nmo.max_evaluations) + " before converging");
        }
        RVector x = win.x;
        if (config.polish) {
            const CMatrix u0 = win.u0;
            auto fn = [&pb, &u0, d](const RVector& y) { return objective(pb, u0.lazyProduct(givens_unitary(y, d))); };
            x = newton_polish(fn, x, diag.evaluations);
        }
        const CMatrix u = win.u0 * givens_unitary(x, d);
        result.measurement = measurement_from_unitary(complete_basis(frame * u));
        result.value = conditional_entropy(state, result.measurement, f);
        diag.residual = std::abs(result.value - objective(pb, u));
    }

    if (config.reference) {
        result.diagnostics.reference = config.reference;
        result.diagnostics.certified = result.value >= *config.reference - 1e-8;
    }
    return result;
}

RankOneMeasurement naimark_perturbation(const CMatrix& u, double eps, Rng& rng)
{
    const auto d = u.rows();
    const auto m = 2 * d;
    std::normal_distribution<double> normal;
    CMatrix g(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index i = 0; i < m; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    }
    CMatrix h = 0.5 * (g + g.adjoint());
    h /= h.norm();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    CVector phases(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        phases(i) = std::polar(1.0, eps * es.eigenvalues()(i));
    }
    const CMatrix e = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    CMatrix big = CMatrix::Identity(m, m);
    big.topLeftCorner(d, d) = u;
    const CMatrix v = (big * e).topRows(d);
    return measurement_from_frame(v);
}

} // namespace condqubit
