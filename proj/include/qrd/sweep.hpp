#pragma once

/**
 * @file sweep.hpp
 * @brief Parameter-space exploration over (p, m): convergence counts per
 *        grid cell and single-orbit attractor summaries.
 *
 * Every trial draws its initial segment from a counter-based RNG stream
 * derived from (seed, cell index, trial index), so grids are reproducible
 * bit for bit regardless of evaluation order.
 */

#include <cstdint>
#include <cstddef>
#include <optional>
#include <vector>

#include "qrd/recurrence.hpp"

namespace qrd {

struct SweepConfig {
    double p_min;
    double p_max;
    int p_steps;                 // grid points, endpoints included
    std::vector<int> m_values;
    int trials;
    double init_low = 0.5;       // uniform initial-condition range; brackets
    double init_high = 5.0;      // ybar for every p <= 6
    std::uint64_t seed = 0;
    std::size_t steps = 5000;
    double tol = 1e-6;           // |y_N - ybar| threshold for Converged

    void validate() const;
};

struct SweepCell {
    double p;
    int m;
    int n_converged;
    int n_diverged;      // guard tripped
    int n_undetermined;  // completed but finished outside tol
    double median_final_error;  // over completed trials; NaN if none
    double median_rate;         // over trials with a measurable decay; NaN if none
};

// Runs trials cell by cell; outcome counts always sum to cfg.trials.
std::vector<SweepCell> stability_sweep(const SweepConfig& cfg);

struct AttractorPoint {
    double p;
    double tail_min;
    double tail_max;
    std::optional<std::size_t> period;
    TrajectoryStatus status;
};

// One orbit per p from a shared initial segment; summarizes the final
// `tail` values and runs period detection when the orbit is long enough.
std::vector<AttractorPoint> attractor_scan(const std::vector<double>& p_grid, int m,
                                           const std::vector<double>& init,
                                           std::size_t steps, std::size_t tail);

// Deterministic 64-bit stream generator (SplitMix64 over a counter). Small
// and self-contained so sweep output never depends on the standard library's
// distribution internals.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform double in [low, high)
    double uniform(double low, double high) {
        const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return low + u * (high - low);
    }
};

// Stream seed for one trial: seed, cell and trial are mixed through distinct
// rounds so neighbouring cells never share a stream.
std::uint64_t trial_stream_seed(std::uint64_t seed, std::uint64_t cell_index,
                                std::uint64_t trial_index);

}  // namespace qrd
