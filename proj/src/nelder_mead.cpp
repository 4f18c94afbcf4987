#include "condevt/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace condevt {

namespace {

double guarded(const std::function<double(std::span<const double>)>& f, std::span<const double> x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::vector<double> start, const NelderMeadOptions& options) {
    const std::size_t dim = start.size();
    if (dim == 0) throw std::invalid_argument("nelder_mead: empty start point");
    if (!options.initial_step.empty() && options.initial_step.size() != dim) {
        throw std::invalid_argument("nelder_mead: initial_step size mismatch");
    }

    std::vector<std::vector<double>> simplex(dim + 1, start);
    for (std::size_t i = 0; i < dim; ++i) {
        const double step = options.initial_step.empty() ? 0.1 : options.initial_step[i];
        simplex[i + 1][i] += step;
    }
    std::vector<double> values(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) values[i] = guarded(objective, simplex[i]);

    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), trial(dim), trial2(dim);
    NelderMeadResult result;

    auto point_along = [&](double coef, std::vector<double>& out, const std::vector<double>& worst) {
        for (std::size_t j = 0; j < dim; ++j) out[j] = centroid[j] + coef * (worst[j] - centroid[j]);
    };

    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        std::iota(order.begin(), order.end(), 0);
        // stable so that ties resolve by vertex index, keeping runs deterministic
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[dim - 1];

        const double spread = values[worst] - values[best];
        if (std::isfinite(spread) && spread <= options.tolerance * std::max(std::fabs(values[best]), 1e-12)) {
            result.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        point_along(-1.0, trial, simplex[worst]);
        const double f_reflect = guarded(objective, trial);

        if (f_reflect < values[best]) {
            point_along(-2.0, trial2, simplex[worst]);
            const double f_expand = guarded(objective, trial2);
            if (f_expand < f_reflect) {
                simplex[worst] = trial2;
                values[worst] = f_expand;
            } else {
                simplex[worst] = trial;
                values[worst] = f_reflect;
            }
            continue;
        }
        if (f_reflect < values[second_worst]) {
            simplex[worst] = trial;
            values[worst] = f_reflect;
            continue;
        }

        // contraction: outside if the reflection improved on the worst point
        const bool outside = f_reflect < values[worst];
        point_along(outside ? -0.5 : 0.5, trial2, simplex[worst]);
        const double f_contract = guarded(objective, trial2);
        if (f_contract < (outside ? f_reflect : values[worst])) {
            simplex[worst] = trial2;
            values[worst] = f_contract;
            continue;
        }

        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < dim; ++j) {
                simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
            }
            values[i] = guarded(objective, simplex[i]);
        }
    }

    const auto best_it = std::min_element(values.begin(), values.end());
    const auto best_idx = static_cast<std::size_t>(best_it - values.begin());
    result.x = simplex[best_idx];
    result.value = *best_it;
    result.iterations = iter;
    return result;
}

}  // namespace condevt
