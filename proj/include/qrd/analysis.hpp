#pragma once

/**
 * @file analysis.hpp
 * @brief Trajectory analyses: semi-cycle decomposition, period detection,
 *        the two-cycle system, the boundedness envelope, and convergence
 *        rate estimation.
 *
 * Conventions used throughout:
 *   - orbit indices are 1-based (y_1 ... y_N); index n <= 0 refers to the
 *     initial segment,
 *   - a Positive semi-cycle collects consecutive terms >= ybar (ties go to
 *     Positive so the decomposition is total), Negative collects terms < ybar,
 *   - e_n = y_n - ybar.
 *
 * A double-precision orbit eventually pins to a floating fixed point a few
 * ulp away from ybar; below that resolution the side of ybar a term lands on
 * is rounding noise, not dynamics. Checks that depend on the side (semi-cycle
 * bound, strict alternation) therefore accept a resolution floor and examine
 * the prefix where |e_n| stays above it.
 */

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "qrd/linearization.hpp"
#include "qrd/recurrence.hpp"

namespace qrd {

enum class SemiCycleSign { Positive, Negative };

struct SemiCycle {
    SemiCycleSign sign;
    std::size_t start_index;  // orbit index n of the first term (1-based)
    std::size_t length;
};

struct SemiCycleDecomposition {
    std::vector<SemiCycle> cycles;  // alternating signs, lengths >= 1
    double equilibrium;
    // true when the first cycle continues a run begun in the initial segment
    // (y_0 lies on the same side of ybar), so its observed length is partial
    bool has_initial_partial = false;
    std::size_t analyzed_length = 0;           // cycles partition 1 .. analyzed_length
    std::optional<std::size_t> truncated_at;   // first index dropped by the floor
};

struct SemiCycleLengthCheck {
    bool holds;
    std::vector<std::size_t> offending;  // positions in cycles[] exceeding the bound
};

struct PeriodReport {
    std::optional<std::size_t> period;
    double tolerance;
    std::size_t window;
};

struct EnvelopeReport {
    std::vector<double> u_iterative;    // u_1 .. u_N from the comparison iteration
    std::vector<double> u_closed_form;  // same indices, rebuilt from the root basis
    std::vector<std::complex<double>> constants;  // c_j, one per root of lambda^{m+1} = p
    double u_bar;                                 // 1 / (1 - p)
    double max_discrepancy;  // max |u_iterative - u_closed_form|
    double max_imag;         // largest imaginary residue of the reconstruction
    std::vector<std::size_t> violations;  // indices n >= 1 with y_n <= 1 or y_n > u_n
};

struct ConvergenceRateReport {
    double ratio_estimate;     // tail mean of |e_{n+1}| / |e_n|
    double nth_root_estimate;  // geometric decay rate of the usable tail
    double dominant_modulus;   // spectral radius of the characteristic roots
    std::size_t usable_length; // last index with |e_n| above the error floor
};

// Coefficients of the exact error recurrence e_{n+1} = p_n e_n + q_n e_{n-m};
// they tend to the linearization (q0, qm) as y_n -> ybar.
struct ErrorRecurrenceCoeffs {
    double p_n;  // -p (y_n + ybar) / (ybar y_n^2)
    double q_n;  // p / y_n^2
};

struct TwoCycleOptions {
    std::size_t n_starts = 20;
    std::size_t max_iterations = 200;
    double tol = 1e-12;
};

struct TwoCycleResult {
    std::vector<std::pair<double, double>> solutions;  // distinct positive (alpha, beta)
    std::size_t n_starts;
    std::size_t n_converged;  // starts that reached a positive solution
    std::size_t n_escaped;    // starts that left the positive quadrant
};

// Maximal runs relative to ybar over indices 1..N. With resolution_floor > 0
// the scan stops at the first index with |y_n - ybar| <= floor.
SemiCycleDecomposition decompose_semicycles(const Trajectory& traj, double y_bar,
                                            double resolution_floor = 0.0);

// Every cycle with a preceding opposite-sign cycle must have length <= m; the
// first observed cycle is exempt (it lacks a predecessor inside the orbit).
SemiCycleLengthCheck check_max_semicycle_length(const SemiCycleDecomposition& dec, int m);

// Strict alternation y_{2n} > ybar, y_{2n+1} < ybar for odd m under the
// interleaved initial pattern; throws PatternMismatch when the initial
// conditions do not satisfy the hypothesis.
bool check_alternation(const Trajectory& traj, double y_bar,
                       double resolution_floor = 1e-12);

// Smallest k <= max_period whose shift discrepancy over the tail window of
// 4*max_period values stays within tol.
PeriodReport detect_period(const Trajectory& traj, std::size_t max_period = 64,
                           double tol = 1e-8);

// Newton iteration on alpha = 1 + p/beta, beta = 1 + p/alpha from asymmetric
// starts; the only positive solution is the symmetric one (alpha = beta = ybar).
TwoCycleResult two_cycle_analysis(double p, const TwoCycleOptions& options = {});

// Envelope u from the comparison equation matched to the trajectory's initial
// segment, both iterated and rebuilt from c_j p^{n/(m+1)} exp(2 pi i (j-1) n/(m+1)).
// Requires 0 < p < 1 and a Completed trajectory.
EnvelopeReport envelope(const Trajectory& traj);

// Throws EquilibriumOrbit when every |e_n| is below the error floor and
// NotConverging when the tail errors fail to decay.
ConvergenceRateReport estimate_rate(const Trajectory& traj, double y_bar,
                                    const RootSet& roots);

ErrorRecurrenceCoeffs error_recurrence_coeffs(double y_n, double p, double y_bar);

// max_n |e_{n+1} - p_n e_n - q_n e_{n-m}| along the orbit; algebraically zero,
// so anything beyond rounding flags a broken iteration.
double error_recurrence_max_residual(const Trajectory& traj, double y_bar);

// Core decay-rate estimator shared with the sweep module: geometric rate of
// |e_n| over the usable tail, or nullopt when the orbit sits at equilibrium
// or is not decaying.
std::optional<double> estimate_decay_rate(const std::vector<double>& values, double y_bar);

}  // namespace qrd
