#include "qrd/recurrence.hpp"

#include <cmath>
#include <stdexcept>

namespace qrd {

InitialConditions::InitialConditions(std::vector<double> vals) : values(std::move(vals)) {
    if (values.size() < 2)
        throw std::invalid_argument("InitialConditions: need at least m+1 = 2 values");
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("InitialConditions: every entry must be positive and finite");
}

IterationGuard::IterationGuard(std::size_t max_steps, double overflow_bound,
                               double underflow_bound)
    : max_steps(max_steps), overflow_bound(overflow_bound), underflow_bound(underflow_bound) {
    if (max_steps < 1) throw std::invalid_argument("IterationGuard: max_steps must be >= 1");
    if (!(underflow_bound < 1.0 && 1.0 < overflow_bound))
        throw std::invalid_argument("IterationGuard: need underflow_bound < 1 < overflow_bound");
}

double Trajectory::at(long n) const {
    const long m = static_cast<long>(params.m);
    if (n < -m || n > static_cast<long>(values.size()))
        throw std::out_of_range("Trajectory::at: index outside [-m, N]");
    if (n <= 0) return initial.values[static_cast<std::size_t>(n + m)];
    return values[static_cast<std::size_t>(n - 1)];
}

namespace {

// Shared loop for the y-form and x-form iterations. history starts as the
// initial segment; computed values are appended in place.
template <typename StepFn>
Trajectory run(const NormalizedParameters& params, const InitialConditions& init,
               const IterationGuard& guard, StepFn&& one_step) {
    Trajectory traj{init, params, {}, TrajectoryStatus::Completed, 0};
    traj.values.reserve(guard.max_steps);

    std::vector<double> history = init.values;  // history[i] = value at n = i - m
    history.reserve(init.values.size() + guard.max_steps);

    const std::size_t m = static_cast<std::size_t>(params.m);
    for (std::size_t n = 1; n <= guard.max_steps; ++n) {
        const double cur = history.back();
        if (cur <= guard.underflow_bound) {
            traj.status = TrajectoryStatus::Underflowed;
            traj.failed_step = n;
            break;
        }
        // lagged value sits m+1 slots behind the next position
        const double lag = history[history.size() - 1 - m];
        const double next = one_step(cur, lag);
        if (!std::isfinite(next) || next >= guard.overflow_bound) {
            traj.status = TrajectoryStatus::Overflowed;
            traj.failed_step = n;
            break;
        }
        history.push_back(next);
        traj.values.push_back(next);
    }
    return traj;
}

}  // namespace

Trajectory simulate(const NormalizedParameters& params, const InitialConditions& init,
                    const IterationGuard& guard) {
    if (init.delay() != params.m)
        throw std::invalid_argument("simulate: initial segment must hold exactly m+1 values");
    const double p = params.p;
    return run(params, init, guard,
               [p](double cur, double lag) { return step(cur, lag, p); });
}

Trajectory simulate_x_form(const Parameters& params, const std::vector<double>& init_x,
                           const IterationGuard& guard) {
    InitialConditions init(init_x);
    if (init.delay() != params.m)
        throw std::invalid_argument("simulate_x_form: initial segment must hold exactly m+1 values");
    const double A = params.A;
    const double B = params.B;
    return run(normalize(params), init, guard,
               [A, B](double cur, double lag) { return A + B * lag / (cur * cur); });
}

std::vector<double> comparison_simulate(double p, int m, const std::vector<double>& init,
                                        std::size_t n_steps) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("comparison_simulate: requires 0 < p < 1");
    if (m < 1) throw std::invalid_argument("comparison_simulate: delay m must be >= 1");
    if (init.size() != static_cast<std::size_t>(m) + 1)
        throw std::invalid_argument("comparison_simulate: initial segment must hold m+1 values");

    std::vector<double> history = init;
    history.reserve(init.size() + n_steps);
    for (std::size_t n = 0; n < n_steps; ++n)
        history.push_back(1.0 + p * history[history.size() - 1 - static_cast<std::size_t>(m)]);

    return {history.begin() + static_cast<long>(init.size()), history.end()};
}

}  // namespace qrd
