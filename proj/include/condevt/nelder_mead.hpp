#pragma once

#include <functional>
#include <span>
#include <vector>

namespace condevt {

struct NelderMeadOptions {
    int max_iterations = 500;
    /// Stop when (f_worst - f_best) <= tolerance * max(|f_best|, 1e-12).
    double tolerance = 1e-9;
    /// Per-coordinate offsets of the initial simplex around the start point.
    std::vector<double> initial_step;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Unconstrained minimisation with the standard Nelder-Mead simplex
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2). Non-finite
/// objective values are treated as +inf, so infeasible regions repel.
[[nodiscard]] NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                                           std::vector<double> start, const NelderMeadOptions& options);

}  // namespace condevt
