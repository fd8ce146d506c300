#pragma once

#include <functional>

#include "condqubit/types.hpp"

namespace condqubit {

struct NelderMeadOptions {
    double ftol = 1e-10;        // spread of simplex values
    double xtol = 1e-8;         // max vertex distance (infinity norm)
    double initial_step = 0.25;
    int max_evaluations = 20000;
    int reinitializations = 2;  // fresh simplex around the best point after convergence
    bool adaptive = true;       // dimension-dependent coefficients (Gao & Han 2012)
};

struct NelderMeadResult {
    RVector x;
    double f = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

using Objective = std::function<double(const RVector&)>;

NelderMeadResult nelder_mead(const Objective& f, const RVector& x0,
                             const NelderMeadOptions& opts = {});

} // namespace condqubit
