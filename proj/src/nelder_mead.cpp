#include "condqubit/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace condqubit {

namespace {

struct Simplex {
    std::vector<RVector> x;
    std::vector<double> f;
};

void order(Simplex& s)
{
    std::vector<std::size_t> idx(s.x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s.f[a] < s.f[b]; });
    Simplex t;
    for (auto i : idx) {
        t.x.push_back(s.x[i]);
        t.f.push_back(s.f[i]);
    }
    s = std::move(t);
}

bool converged(const Simplex& s, double ftol, double xtol)
{
    double fs = 0.0, xs = 0.0;
    for (std::size_t i = 1; i < s.x.size(); ++i) {
        fs = std::max(fs, std::abs(s.f[i] - s.f[0]));
        xs = std::max(xs, (s.x[i] - s.x[0]).cwiseAbs().maxCoeff());
    }
    return fs <= ftol && xs <= xtol;
}

} // namespace

NelderMeadResult nelder_mead(const Objective& fn, const RVector& x0, const NelderMeadOptions& opts)
{
    const auto n = x0.size();
    NelderMeadResult res;
    res.x = x0;
    int evals = 0;
    auto f = [&](const RVector& x) {
        ++evals;
        return fn(x);
    };
    if (n == 0) {
        res.f = f(x0);
        res.evaluations = evals;
        res.converged = true;
        return res;
    }

    const double dn = static_cast<double>(n);
    const double alpha = 1.0;
    const double beta = opts.adaptive ? 1.0 + 2.0 / dn : 2.0;
    const double gamma = opts.adaptive ? 0.75 - 1.0 / (2.0 * dn) : 0.5;
    const double delta = opts.adaptive ? 1.0 - 1.0 / dn : 0.5;

    RVector best_x = x0;
    double best_f = f(x0);
    int iterations = 0;
    bool done = false;

    for (int round = 0; round <= opts.reinitializations && !done; ++round) {
        const double step = opts.initial_step / std::pow(4.0, round);
        Simplex s;
        s.x.push_back(best_x);
        s.f.push_back(best_f);
        for (Eigen::Index i = 0; i < n; ++i) {
            RVector xi = best_x;
            xi(i) += step;
            s.x.push_back(xi);
            s.f.push_back(f(xi));
        }
        order(s);
        const double start_f = s.f[0];

        while (evals < opts.max_evaluations) {
            if (converged(s, opts.ftol, opts.xtol)) {
                break;
            }
            ++iterations;
            RVector centroid = RVector::Zero(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                centroid += s.x[static_cast<std::size_t>(i)];
            }
            centroid /= dn;
            const RVector& worst = s.x.back();
            const double fw = s.f.back();
            const double fb = s.f.front();
            const double fsw = s.f[s.f.size() - 2];

            const RVector xr = centroid + alpha * (centroid - worst);
            const double fr = f(xr);
            bool shrink = false;
            if (fr < fb) {
                const RVector xe = centroid + beta * (xr - centroid);
                const double fe = f(xe);
                if (fe < fr) {
                    s.x.back() = xe;
                    s.f.back() = fe;
                } else {
                    s.x.back() = xr;
                    s.f.back() = fr;
                }
            } else if (fr < fsw) {
                s.x.back() = xr;
                s.f.back() = fr;
            } else if (fr < fw) {
                const RVector xc = centroid + gamma * (xr - centroid);
                const double fc = f(xc);
                if (fc <= fr) {
                    s.x.back() = xc;
                    s.f.back() = fc;
                } else {
                    shrink = true;
                }
            } else {
                const RVector xc = centroid - gamma * (centroid - worst);
                const double fc = f(xc);
                if (fc < fw) {
                    s.x.back() = xc;
                    s.f.back() = fc;
                } else {
                    shrink = true;
                }
            }
            if (shrink) {
                for (std::size_t i = 1; i < s.x.size(); ++i) {
                    s.x[i] = s.x[0] + delta * (s.x[i] - s.x[0]);
                    s.f[i] = f(s.x[i]);
                }
            }
            order(s);
        }
        const bool ok = converged(s, opts.ftol, opts.xtol);
        best_x = s.x[0];
        best_f = s.f[0];
        if (!ok) {
            break; // evaluation cap
        }
        // a fresh simplex that cannot improve means we are done
        if (round > 0 && start_f - best_f <= opts.ftol) {
            done = true;
        }
        res.converged = ok;
    }

    res.x = best_x;
    res.f = best_f;
    res.iterations = iterations;
    res.evaluations = evals;
    return res;
}

} // namespace condqubit
