#pragma once

/**
 * @file recurrence.hpp
 * @brief Deterministic iteration of y_{n+1} = 1 + p * y_{n-m} / y_n^2, its
 *        unnormalized x-form, and the linear comparison equation
 *        u_{n+1} = 1 + p * u_{n-m}.
 *
 * Orbits are stored in full; downstream analyses (semi-cycles, envelope,
 * convergence rate) need the whole history. Guards stop the iteration when a
 * value leaves (underflow_bound, overflow_bound); a trip is encoded in the
 * trajectory status, never thrown.
 */

#include <cstddef>
#include <vector>

#include "qrd/core.hpp"

namespace qrd {

// y_{-m}, y_{-m+1}, ..., y_0; all entries must be positive.
struct InitialConditions {
    std::vector<double> values;

    explicit InitialConditions(std::vector<double> values);

    // delay implied by the segment length
    int delay() const { return static_cast<int>(values.size()) - 1; }
};

struct IterationGuard {
    std::size_t max_steps;
    double overflow_bound = 1e150;
    double underflow_bound = 1e-150;

    explicit IterationGuard(std::size_t max_steps, double overflow_bound = 1e150,
                            double underflow_bound = 1e-150);
};

enum class TrajectoryStatus { Completed, Overflowed, Underflowed };

struct Trajectory {
    InitialConditions initial;
    NormalizedParameters params;
    std::vector<double> values;   // y_1 ... y_N
    TrajectoryStatus status = TrajectoryStatus::Completed;
    std::size_t failed_step = 0;  // 1-based step where a guard tripped

    // y_n for n in [-m, N]; n <= 0 reads the initial segment.
    double at(long n) const;
    std::size_t length() const { return values.size(); }
};

// One application of the map. Pure arithmetic; the caller is responsible for
// guarding y_n away from zero.
inline double step(double y_n, double y_n_minus_m, double p) {
    return 1.0 + p * y_n_minus_m / (y_n * y_n);
}

Trajectory simulate(const NormalizedParameters& params, const InitialConditions& init,
                    const IterationGuard& guard);

// Iterates x_{n+1} = A + B * x_{n-m} / x_n^2 directly. The returned
// trajectory holds x coordinates; params carry the normalized (p, m).
Trajectory simulate_x_form(const Parameters& params, const std::vector<double>& init_x,
                           const IterationGuard& guard);

// Linear comparison iteration u_{n+1} = 1 + p * u_{n-m}; requires 0 < p < 1.
// init holds u_{-m} ... u_0; returns u_1 ... u_{n_steps}.
std::vector<double> comparison_simulate(double p, int m, const std::vector<double>& init,
                                        std::size_t n_steps);

}  // namespace qrd
