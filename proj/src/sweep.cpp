#include "qrd/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qrd/analysis.hpp"
#include "qrd/core.hpp"

namespace qrd {

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

void SweepConfig::validate() const {
    if (!(p_min > 0.0)) throw std::invalid_argument("SweepConfig: p_min must be > 0");
    if (!(p_max >= p_min)) throw std::invalid_argument("SweepConfig: p_max must be >= p_min");
    if (p_steps < 1) throw std::invalid_argument("SweepConfig: p_steps must be >= 1");
    if (m_values.empty()) throw std::invalid_argument("SweepConfig: m_values must be nonempty");
    for (int m : m_values)
        if (m < 1) throw std::invalid_argument("SweepConfig: every delay must be >= 1");
    if (trials < 1) throw std::invalid_argument("SweepConfig: trials must be >= 1");
    if (!(init_low > 0.0 && init_low < init_high))
        throw std::invalid_argument("SweepConfig: need 0 < init_low < init_high");
    if (steps < 1) throw std::invalid_argument("SweepConfig: steps must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("SweepConfig: tol must be > 0");
}

std::uint64_t trial_stream_seed(std::uint64_t seed, std::uint64_t cell_index,
                                std::uint64_t trial_index) {
    SplitMix64 mixer(seed ^ (0xd1342543de82ef95ull * (cell_index + 1)));
    const std::uint64_t cell_key = mixer.next();
    SplitMix64 trial_mixer(cell_key ^ (0xaf251af3b0f025b5ull * (trial_index + 1)));
    return trial_mixer.next();
}

std::vector<SweepCell> stability_sweep(const SweepConfig& cfg) {
    cfg.validate();

    std::vector<double> p_grid(static_cast<std::size_t>(cfg.p_steps));
    for (int i = 0; i < cfg.p_steps; ++i)
        p_grid[static_cast<std::size_t>(i)] =
            cfg.p_steps == 1
                ? cfg.p_min
                : cfg.p_min + (cfg.p_max - cfg.p_min) * static_cast<double>(i) /
                                  static_cast<double>(cfg.p_steps - 1);

    std::vector<SweepCell> grid;
    grid.reserve(p_grid.size() * cfg.m_values.size());

    std::uint64_t cell_index = 0;
    for (double p : p_grid) {
        const double y_bar = equilibrium(p).y_bar;
        for (int m : cfg.m_values) {
            SweepCell cell{p, m, 0, 0, 0,
                           std::numeric_limits<double>::quiet_NaN(),
                           std::numeric_limits<double>::quiet_NaN()};
            std::vector<double> final_errors;
            std::vector<double> rates;

            for (int t = 0; t < cfg.trials; ++t) {
                SplitMix64 rng(trial_stream_seed(cfg.seed, cell_index,
                                                 static_cast<std::uint64_t>(t)));
                std::vector<double> init(static_cast<std::size_t>(m) + 1);
                for (double& v : init) v = rng.uniform(cfg.init_low, cfg.init_high);

                const Trajectory traj = simulate(NormalizedParameters(p, m),
                                                 InitialConditions(init),
                                                 IterationGuard(cfg.steps));
                if (traj.status != TrajectoryStatus::Completed) {
                    ++cell.n_diverged;
                    continue;
                }
                const double err = std::abs(traj.values.back() - y_bar);
                final_errors.push_back(err);
                if (err <= cfg.tol)
                    ++cell.n_converged;
                else
                    ++cell.n_undetermined;
                if (auto rate = estimate_decay_rate(traj.values, y_bar)) rates.push_back(*rate);
            }

            cell.median_final_error = median(std::move(final_errors));
            cell.median_rate = median(std::move(rates));
            grid.push_back(cell);
            ++cell_index;
        }
    }
    return grid;
}

std::vector<AttractorPoint> attractor_scan(const std::vector<double>& p_grid, int m,
                                           const std::vector<double>& init,
                                           std::size_t steps, std::size_t tail) {
    if (tail < 1) throw std::invalid_argument("attractor_scan: tail must be >= 1");
    if (tail > steps) throw std::invalid_argument("attractor_scan: tail cannot exceed steps");

    std::vector<AttractorPoint> out;
    out.reserve(p_grid.size());
    for (double p : p_grid) {
        const Trajectory traj = simulate(NormalizedParameters(p, m), InitialConditions(init),
                                         IterationGuard(steps));
        AttractorPoint point{p, std::numeric_limits<double>::quiet_NaN(),
                             std::numeric_limits<double>::quiet_NaN(), std::nullopt,
                             traj.status};
        if (!traj.values.empty()) {
            const std::size_t n = traj.values.size();
            const std::size_t from = n > tail ? n - tail : 0;
            auto [lo, hi] = std::minmax_element(traj.values.begin() + static_cast<long>(from),
                                                traj.values.end());
            point.tail_min = *lo;
            point.tail_max = *hi;
        }
        if (traj.status == TrajectoryStatus::Completed && traj.values.size() >= 256) {
            const PeriodReport report = detect_period(traj);
            point.period = report.period;
        }
        out.push_back(point);
    }
    return out;
}

}  // namespace qrd
