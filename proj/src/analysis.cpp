#include "qrd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qrd/core.hpp"
#include "qrd/errors.hpp"

namespace qrd {

namespace {

// |e_n| at or below this is treated as numerically at equilibrium.
constexpr double kErrorFloor = 1e-13;

bool is_positive_side(double y, double y_bar) { return y >= y_bar; }

// Gaussian elimination with partial pivoting on a dense complex system.
// Sizes here are (m+1) x (m+1), so no factorization machinery is warranted.
std::vector<std::complex<double>> solve_complex(
    std::vector<std::vector<std::complex<double>>> a,
    std::vector<std::complex<double>> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-300)
            throw SingularSystem("solve_complex: vanishing pivot");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const std::complex<double> f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<std::complex<double>> x(n);
    for (std::size_t row = n; row-- > 0;) {
        std::complex<double> acc = b[row];
        for (std::size_t c = row + 1; c < n; ++c) acc -= a[row][c] * x[c];
        x[row] = acc / a[row][row];
    }
    return x;
}

}  // namespace

SemiCycleDecomposition decompose_semicycles(const Trajectory& traj, double y_bar,
                                            double resolution_floor) {
    if (traj.status != TrajectoryStatus::Completed)
        throw std::invalid_argument("decompose_semicycles: trajectory did not complete");
    if (traj.values.empty())
        throw std::invalid_argument("decompose_semicycles: empty trajectory");

    SemiCycleDecomposition dec;
    dec.equilibrium = y_bar;

    std::size_t limit = traj.values.size();
    if (resolution_floor > 0.0) {
        for (std::size_t i = 0; i < traj.values.size(); ++i) {
            if (std::abs(traj.values[i] - y_bar) <= resolution_floor) {
                limit = i;
                dec.truncated_at = i + 1;
                break;
            }
        }
    }
    dec.analyzed_length = limit;
    if (limit == 0) return dec;

    SemiCycleSign cur = is_positive_side(traj.values[0], y_bar) ? SemiCycleSign::Positive
                                                                : SemiCycleSign::Negative;
    std::size_t run_start = 1;
    for (std::size_t i = 1; i < limit; ++i) {
        const SemiCycleSign s = is_positive_side(traj.values[i], y_bar)
                                    ? SemiCycleSign::Positive
                                    : SemiCycleSign::Negative;
        if (s != cur) {
            dec.cycles.push_back({cur, run_start, i + 1 - run_start});
            cur = s;
            run_start = i + 1;
        }
    }
    dec.cycles.push_back({cur, run_start, limit + 1 - run_start});

    const bool y0_positive = is_positive_side(traj.initial.values.back(), y_bar);
    dec.has_initial_partial =
        (dec.cycles.front().sign == SemiCycleSign::Positive) == y0_positive;
    return dec;
}

SemiCycleLengthCheck check_max_semicycle_length(const SemiCycleDecomposition& dec, int m) {
    SemiCycleLengthCheck result{true, {}};
    for (std::size_t i = 1; i < dec.cycles.size(); ++i) {
        if (dec.cycles[i].length > static_cast<std::size_t>(m)) {
            result.holds = false;
            result.offending.push_back(i);
        }
    }
    return result;
}

bool check_alternation(const Trajectory& traj, double y_bar, double resolution_floor) {
    const int m = traj.params.m;
    if (m % 2 == 0)
        throw std::invalid_argument("check_alternation: the alternation theorem needs odd m");

    // hypothesis: odd-offset initials at or below ybar, even-offset above
    for (long n = -static_cast<long>(m); n <= 0; ++n) {
        const double v = traj.at(n);
        const bool even = (n % 2) == 0;
        if (even && !(v > y_bar))
            throw PatternMismatch("check_alternation: initial y_" + std::to_string(n) +
                                  " must exceed the equilibrium");
        if (!even && !(v <= y_bar))
            throw PatternMismatch("check_alternation: initial y_" + std::to_string(n) +
                                  " must not exceed the equilibrium");
    }

    for (std::size_t i = 0; i < traj.values.size(); ++i) {
        const double v = traj.values[i];
        if (resolution_floor > 0.0 && std::abs(v - y_bar) <= resolution_floor) break;
        const std::size_t n = i + 1;
        if (n % 2 == 1 ? !(v < y_bar) : !(v > y_bar)) return false;
    }
    return true;
}

PeriodReport detect_period(const Trajectory& traj, std::size_t max_period, double tol) {
    if (max_period < 1) throw std::invalid_argument("detect_period: max_period must be >= 1");
    const std::size_t n = traj.values.size();
    const std::size_t window = 4 * max_period;
    if (n < window)
        throw WindowTooShort("detect_period: need at least 4*max_period = " +
                             std::to_string(window) + " values, have " + std::to_string(n));

    const std::size_t first = n - window;  // 0-based start of the tail window
    for (std::size_t k = 1; k <= max_period; ++k) {
        bool ok = true;
        for (std::size_t i = first; i + k < n; ++i) {
            if (std::abs(traj.values[i + k] - traj.values[i]) > tol) {
                ok = false;
                break;
            }
        }
        if (ok) return PeriodReport{k, tol, window};
    }
    return PeriodReport{std::nullopt, tol, window};
}

TwoCycleResult two_cycle_analysis(double p, const TwoCycleOptions& options) {
    if (!(p > 0.0)) throw std::invalid_argument("two_cycle_analysis: p must be > 0");

    TwoCycleResult result{{}, options.n_starts, 0, 0};
    const double y_bar = equilibrium(p).y_bar;

    // Low-discrepancy asymmetric starts over a few decades of magnitude.
    constexpr double golden = 0.6180339887498949;
    auto start_coord = [](double u) { return 0.05 * std::pow(400.0, u); };

    for (std::size_t s = 0; s < options.n_starts; ++s) {
        double ua = std::fmod(static_cast<double>(s + 1) * golden, 1.0);
        double ub = std::fmod(static_cast<double>(s + 1) * golden * golden + 0.37, 1.0);
        double alpha = start_coord(ua);
        double beta = start_coord(ub);
        if (std::abs(alpha - beta) < 1e-3) beta *= 1.7;  // keep the start asymmetric

        bool converged = false;
        bool escaped = false;
        for (std::size_t it = 0; it < options.max_iterations; ++it) {
            const double f1 = alpha - 1.0 - p / beta;
            const double f2 = beta - 1.0 - p / alpha;
            if (std::max(std::abs(f1), std::abs(f2)) <= options.tol) {
                converged = true;
                break;
            }
            // J = [[1, p/beta^2], [p/alpha^2, 1]]
            const double j12 = p / (beta * beta);
            const double j21 = p / (alpha * alpha);
            const double det = 1.0 - j12 * j21;
            if (std::abs(det) < 1e-14) {
                escaped = true;
                break;
            }
            alpha -= (f1 - j12 * f2) / det;
            beta -= (f2 - j21 * f1) / det;
            if (!(alpha > 1e-12) || !(beta > 1e-12) || alpha > 1e12 || beta > 1e12) {
                escaped = true;
                break;
            }
        }

        if (converged) {
            ++result.n_converged;
            const double match_tol = 1e-6 * (1.0 + y_bar);
            bool known = false;
            for (const auto& sol : result.solutions)
                if (std::abs(sol.first - alpha) <= match_tol &&
                    std::abs(sol.second - beta) <= match_tol) {
                    known = true;
                    break;
                }
            if (!known) result.solutions.emplace_back(alpha, beta);
        } else if (escaped) {
            ++result.n_escaped;
        }
    }
    return result;
}

EnvelopeReport envelope(const Trajectory& traj) {
    const double p = traj.params.p;
    const int m = traj.params.m;
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("envelope: the boundedness envelope needs 0 < p < 1");
    if (traj.status != TrajectoryStatus::Completed)
        throw std::invalid_argument("envelope: trajectory did not complete");
    const std::size_t n_steps = traj.values.size();
    if (n_steps == 0) throw std::invalid_argument("envelope: empty trajectory");

    EnvelopeReport report;
    report.u_bar = comparison_equilibrium(p);
    report.u_iterative = comparison_simulate(p, m, traj.initial.values, n_steps);

    // Roots of lambda^{m+1} = p: the positive real (m+1)-th root of p spread
    // over the unit roots.
    const std::size_t k = static_cast<std::size_t>(m) + 1;
    const double r = std::pow(p, 1.0 / static_cast<double>(k));
    std::vector<std::complex<double>> lambda(k);
    for (std::size_t j = 0; j < k; ++j)
        lambda[j] = std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(j) /
                                      static_cast<double>(k));

    // Match the closed form on the initial segment: sum_j c_j lambda_j^n =
    // u_n - u_bar for n = -m .. 0. Distinct lambda_j make this Vandermonde
    // system uniquely solvable.
    std::vector<std::vector<std::complex<double>>> mat(k, std::vector<std::complex<double>>(k));
    std::vector<std::complex<double>> rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
        const long n = static_cast<long>(i) - m;
        for (std::size_t j = 0; j < k; ++j)
            mat[i][j] = std::pow(lambda[j], std::complex<double>(static_cast<double>(n), 0.0));
        rhs[i] = traj.initial.values[i] - report.u_bar;
    }
    report.constants = solve_complex(std::move(mat), std::move(rhs));

    report.u_closed_form.resize(n_steps);
    report.max_imag = 0.0;
    report.max_discrepancy = 0.0;
    std::vector<std::complex<double>> power = lambda;  // lambda_j^n, starting at n = 1
    for (std::size_t i = 0; i < n_steps; ++i) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t j = 0; j < k; ++j) {
            acc += report.constants[j] * power[j];
            power[j] *= lambda[j];
        }
        report.u_closed_form[i] = report.u_bar + acc.real();
        report.max_imag = std::max(report.max_imag, std::abs(acc.imag()));
        report.max_discrepancy =
            std::max(report.max_discrepancy, std::abs(report.u_iterative[i] - report.u_closed_form[i]));
    }

    for (std::size_t i = 0; i < n_steps; ++i) {
        const double y = traj.values[i];
        if (!(y > 1.0) || y > report.u_iterative[i]) report.violations.push_back(i + 1);
    }
    return report;
}

std::optional<double> estimate_decay_rate(const std::vector<double>& values, double y_bar) {
    // usable range: up to the last index still above the error floor
    std::size_t last = 0;  // 1-based; 0 = none
    for (std::size_t i = values.size(); i-- > 0;) {
        if (std::abs(values[i] - y_bar) > kErrorFloor) {
            last = i + 1;
            break;
        }
    }
    if (last < 2) return std::nullopt;

    auto abs_err = [&](std::size_t n) { return std::abs(values[n - 1] - y_bar); };

    // Rate from the second half of the usable range, read between block
    // maxima at either end. Anchoring on envelope peaks cancels both the
    // unknown amplitude and the |cos| dips a complex dominant pair produces;
    // the raw |e_N|^{1/N} would carry an O(log-amplitude / N) bias that double
    // precision never gets to amortize.
    std::size_t lo = last / 2 + 1;
    if (last - lo + 1 < 4) lo = 1;
    const std::size_t span = last - lo + 1;
    if (span < 2) return std::nullopt;
    const std::size_t block = std::max<std::size_t>(1, std::min<std::size_t>(10, span / 4));

    auto argmax_abs = [&](std::size_t from, std::size_t to) {  // inclusive, 1-based
        std::size_t best = from;
        for (std::size_t n = from; n <= to; ++n)
            if (abs_err(n) > abs_err(best)) best = n;
        return best;
    };
    const std::size_t a = argmax_abs(lo, lo + block - 1);
    const std::size_t b = argmax_abs(last - block + 1, last);
    if (b <= a || abs_err(a) == 0.0) {
        // degenerate window; fall back to the raw tail root
        return std::pow(abs_err(last), 1.0 / static_cast<double>(last));
    }
    return std::pow(abs_err(b) / abs_err(a), 1.0 / static_cast<double>(b - a));
}

ConvergenceRateReport estimate_rate(const Trajectory& traj, double y_bar,
                                    const RootSet& roots) {
    const std::vector<double>& v = traj.values;
    std::size_t last = 0;
    for (std::size_t i = v.size(); i-- > 0;) {
        if (std::abs(v[i] - y_bar) > kErrorFloor) {
            last = i + 1;
            break;
        }
    }
    if (last == 0)
        throw EquilibriumOrbit("estimate_rate: orbit is numerically at the equilibrium");

    auto abs_err = [&](std::size_t n) { return std::abs(v[n - 1] - y_bar); };

    // decay check on block maxima of the tail half
    const std::size_t half = last / 2 + 1;
    if (last > 8) {
        const std::size_t mid = (half + last) / 2;
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t n = half; n < mid; ++n) m1 = std::max(m1, abs_err(n));
        for (std::size_t n = mid; n <= last; ++n) m2 = std::max(m2, abs_err(n));
        if (m2 >= m1)
            throw NotConverging("estimate_rate: tail errors are not decaying");
    }

    // pointwise ratio over the last 20% of the usable range
    const std::size_t tail20 = std::max<std::size_t>(1, last - (last + 4) / 5 + 1);
    double ratio_sum = 0.0;
    std::size_t ratio_count = 0;
    for (std::size_t n = tail20; n < last; ++n) {
        if (abs_err(n) > kErrorFloor) {
            ratio_sum += abs_err(n + 1) / abs_err(n);
            ++ratio_count;
        }
    }
    const double ratio =
        ratio_count > 0 ? ratio_sum / static_cast<double>(ratio_count)
                        : std::numeric_limits<double>::quiet_NaN();

    const std::optional<double> rate = estimate_decay_rate(v, y_bar);
    if (!rate)
        throw EquilibriumOrbit("estimate_rate: too few usable errors above the floor");

    return ConvergenceRateReport{ratio, *rate, roots.spectral_radius, last};
}

ErrorRecurrenceCoeffs error_recurrence_coeffs(double y_n, double p, double y_bar) {
    if (!(y_n > 0.0)) throw std::invalid_argument("error_recurrence_coeffs: y_n must be > 0");
    const double y2 = y_n * y_n;
    return ErrorRecurrenceCoeffs{-p * (y_n + y_bar) / (y_bar * y2), p / y2};
}

double error_recurrence_max_residual(const Trajectory& traj, double y_bar) {
    const double p = traj.params.p;
    const int m = traj.params.m;
    double worst = 0.0;
    for (std::size_t k = 1; k <= traj.values.size(); ++k) {
        const double y_prev = traj.at(static_cast<long>(k) - 1);
        const ErrorRecurrenceCoeffs c = error_recurrence_coeffs(y_prev, p, y_bar);
        const double e_next = traj.values[k - 1] - y_bar;
        const double e_cur = y_prev - y_bar;
        const double e_lag = traj.at(static_cast<long>(k) - 1 - m) - y_bar;
        worst = std::max(worst, std::abs(e_next - (c.p_n * e_cur + c.q_n * e_lag)));
    }
    return worst;
}

}  // namespace qrd
