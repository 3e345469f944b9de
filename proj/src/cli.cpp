#include "qrd/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrd/analysis.hpp"
#include "qrd/core.hpp"
#include "qrd/errors.hpp"
#include "qrd/linearization.hpp"
#include "qrd/recurrence.hpp"
#include "qrd/sweep.hpp"

namespace qrd {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitViolation = 3;

// 17 significant digits: round-trip safe, locale-independent ("C" formatting).
std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// All options of all modes; each subcommand registers the slice it owns.
struct Options {
    std::string config_path;

    std::optional<double> p;
    std::optional<double> A;
    std::optional<double> B;
    std::optional<int> m;

    std::vector<double> init;
    std::optional<std::uint64_t> init_seed;
    double init_low = 0.5;
    double init_high = 5.0;

    std::size_t steps = 100;
    double overflow_bound = 1e150;
    double underflow_bound = 1e-150;

    std::size_t max_period = 64;
    double period_tol = 1e-8;

    // sweep / conjecture grid
    std::optional<double> p_min;
    std::optional<double> p_max;
    std::optional<int> p_steps;
    std::vector<int> m_values;
    int trials = 50;
    double tol = 1e-6;
    std::optional<std::uint64_t> seed;

    std::string out = "-";
    std::string table;  // optional secondary CSV for envelope
};

void apply_config(const json& cfg, Options& opt) {
    if (!cfg.is_object()) throw std::invalid_argument("config: top level must be an object");
    if (!cfg.contains("schema") || !cfg["schema"].is_number_integer() ||
        cfg["schema"].get<int>() != 1)
        throw std::invalid_argument("config: missing or unsupported schema (expected 1)");

    for (const auto& [key, value] : cfg.items()) {
        if (key == "schema" || key == "mode") continue;  // mode checked by caller
        if (key == "p") opt.p = value.get<double>();
        else if (key == "A") opt.A = value.get<double>();
        else if (key == "B") opt.B = value.get<double>();
        else if (key == "m") opt.m = value.get<int>();
        else if (key == "init") opt.init = value.get<std::vector<double>>();
        else if (key == "init_seed") opt.init_seed = value.get<std::uint64_t>();
        else if (key == "init_low") opt.init_low = value.get<double>();
        else if (key == "init_high") opt.init_high = value.get<double>();
        else if (key == "steps") opt.steps = value.get<std::size_t>();
        else if (key == "overflow_bound") opt.overflow_bound = value.get<double>();
        else if (key == "underflow_bound") opt.underflow_bound = value.get<double>();
        else if (key == "max_period") opt.max_period = value.get<std::size_t>();
        else if (key == "period_tol") opt.period_tol = value.get<double>();
        else if (key == "p_min") opt.p_min = value.get<double>();
        else if (key == "p_max") opt.p_max = value.get<double>();
        else if (key == "p_steps") opt.p_steps = value.get<int>();
        else if (key == "m_values") opt.m_values = value.get<std::vector<int>>();
        else if (key == "trials") opt.trials = value.get<int>();
        else if (key == "tol") opt.tol = value.get<double>();
        else if (key == "seed") opt.seed = value.get<std::uint64_t>();
        else if (key == "out") opt.out = value.get<std::string>();
        else if (key == "table") opt.table = value.get<std::string>();
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

struct ResolvedModel {
    NormalizedParameters params;
    std::optional<Parameters> raw;  // present when (A, B) were given
};

ResolvedModel resolve_model(const Options& opt) {
    if (!opt.m) throw std::invalid_argument("missing --m");
    const bool has_raw = opt.A.has_value() || opt.B.has_value();
    if (has_raw == opt.p.has_value())
        throw std::invalid_argument("give exactly one of --p or the pair --A/--B");
    if (has_raw) {
        if (!opt.A || !opt.B) throw std::invalid_argument("--A and --B must be given together");
        Parameters raw(*opt.A, *opt.B, *opt.m);
        return ResolvedModel{normalize(raw), raw};
    }
    return ResolvedModel{NormalizedParameters(*opt.p, *opt.m), std::nullopt};
}

// Initial segment: an explicit list or a seeded uniform draw; the seed is
// never implicit.
std::vector<double> resolve_init(const Options& opt, int m) {
    if (opt.init.empty() == !opt.init_seed.has_value())
        throw std::invalid_argument("give exactly one of --init or --init-seed");
    if (!opt.init.empty()) {
        if (opt.init.size() != static_cast<std::size_t>(m) + 1)
            throw std::invalid_argument("--init must list exactly m+1 values");
        return opt.init;
    }
    if (!(opt.init_low > 0.0 && opt.init_low < opt.init_high))
        throw std::invalid_argument("need 0 < --init-low < --init-high");
    SplitMix64 rng(*opt.init_seed);
    std::vector<double> init(static_cast<std::size_t>(m) + 1);
    for (double& v : init) v = rng.uniform(opt.init_low, opt.init_high);
    return init;
}

void write_text(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
    out << content;
    if (!out) throw std::invalid_argument("failed writing output file '" + path + "'");
}

const char* status_name(TrajectoryStatus s) {
    switch (s) {
        case TrajectoryStatus::Completed: return "completed";
        case TrajectoryStatus::Overflowed: return "overflowed";
        case TrajectoryStatus::Underflowed: return "underflowed";
    }
    return "unknown";
}

const char* class_name(StabilityClass c) {
    switch (c) {
        case StabilityClass::LocallyStable: return "locally_stable";
        case StabilityClass::Marginal: return "marginal";
        case StabilityClass::Unstable: return "unstable";
    }
    return "unknown";
}

json model_config_json(const Options& opt, const ResolvedModel& model) {
    json j;
    j["schema"] = 1;
    if (model.raw) {
        j["A"] = model.raw->A;
        j["B"] = model.raw->B;
    }
    j["p"] = model.params.p;
    j["m"] = model.params.m;
    return j;
}

json init_config_json(const Options& opt, const std::vector<double>& init) {
    json j;
    j["init"] = init;
    if (opt.init_seed) {
        j["init_seed"] = *opt.init_seed;
        j["init_low"] = opt.init_low;
        j["init_high"] = opt.init_high;
    }
    return j;
}

int report_guard_trip(const Trajectory& traj) {
    std::cerr << "numerical failure: guard tripped (" << status_name(traj.status)
              << ") at step " << traj.failed_step << "\n";
    return kExitNumerical;
}

// --- simulate ---------------------------------------------------------

int cmd_simulate(const Options& opt) {
    const ResolvedModel model = resolve_model(opt);
    const int m = model.params.m;
    const std::vector<double> init = resolve_init(opt, m);
    const IterationGuard guard(opt.steps, opt.overflow_bound, opt.underflow_bound);

    std::ostringstream csv;
    Trajectory traj = model.raw ? simulate_x_form(*model.raw, init, guard)
                                : simulate(model.params, InitialConditions(init), guard);
    if (model.raw) {
        const double A = model.raw->A;
        csv << "n,x,y\n";
        for (int i = 0; i <= m; ++i)
            csv << (i - m) << ',' << fmt17(init[static_cast<std::size_t>(i)]) << ','
                << fmt17(init[static_cast<std::size_t>(i)] / A) << '\n';
        for (std::size_t i = 0; i < traj.values.size(); ++i)
            csv << (i + 1) << ',' << fmt17(traj.values[i]) << ',' << fmt17(traj.values[i] / A)
                << '\n';
    } else {
        csv << "n,y\n";
        for (int i = 0; i <= m; ++i)
            csv << (i - m) << ',' << fmt17(init[static_cast<std::size_t>(i)]) << '\n';
        for (std::size_t i = 0; i < traj.values.size(); ++i)
            csv << (i + 1) << ',' << fmt17(traj.values[i]) << '\n';
    }
    write_text(opt.out, csv.str());

    if (traj.status != TrajectoryStatus::Completed) return report_guard_trip(traj);
    return kExitOk;
}

// --- roots ------------------------------------------------------------

int cmd_roots(const Options& opt) {
    const ResolvedModel model = resolve_model(opt);
    const double p = model.params.p;
    const int m = model.params.m;

    const LinearizedCoefficients lin = linearize(p, m);
    const CharacteristicPolynomial poly = characteristic_polynomial(lin);
    const RootSet roots = find_roots(poly);
    const StabilityReport stability = classify_stability(p, m);

    json j = model_config_json(opt, model);
    j["y_bar"] = equilibrium(p).y_bar;
    j["linearization"] = {{"q0", lin.q0}, {"q_m", lin.q_m}};
    j["characteristic_coefficients"] = poly.coeffs;  // lowest degree first
    json root_list = json::array();
    for (std::size_t i = 0; i < roots.roots.size(); ++i)
        root_list.push_back({{"re", roots.roots[i].real()},
                             {"im", roots.roots[i].imag()},
                             {"modulus", std::abs(roots.roots[i])},
                             {"residual", roots.residuals[i]}});
    j["roots"] = root_list;
    j["spectral_radius"] = roots.spectral_radius;
    j["companion_spectral_radius"] = companion_spectral_radius(poly);
    j["clark_sum"] = stability.clark_sum;
    j["clark_holds"] = stability.clark_holds;
    j["classification"] = class_name(stability.classification);

    write_text(opt.out, j.dump(2) + "\n");
    return kExitOk;
}

// --- envelope ---------------------------------------------------------

int cmd_envelope(const Options& opt) {
    const ResolvedModel model = resolve_model(opt);
    const int m = model.params.m;
    std::vector<double> init = resolve_init(opt, m);
    if (model.raw)  // x-form initials; the envelope lives in y coordinates
        for (double& v : init) v /= model.raw->A;

    const Trajectory traj = simulate(model.params, InitialConditions(init),
                                     IterationGuard(opt.steps, opt.overflow_bound,
                                                    opt.underflow_bound));
    if (traj.status != TrajectoryStatus::Completed) return report_guard_trip(traj);

    const EnvelopeReport report = envelope(traj);

    json j = model_config_json(opt, model);
    j["config_init"] = init_config_json(opt, init);
    j["steps"] = traj.values.size();
    j["u_bar"] = report.u_bar;
    json constants = json::array();
    for (const auto& c : report.constants)
        constants.push_back({{"re", c.real()}, {"im", c.imag()}});
    j["constants"] = constants;
    j["max_discrepancy"] = report.max_discrepancy;
    j["max_imag"] = report.max_imag;
    j["violations"] = report.violations;
    write_text(opt.out, j.dump(2) + "\n");

    if (!opt.table.empty()) {
        std::ostringstream csv;
        csv << "n,y,u_iterative,u_closed_form\n";
        for (std::size_t i = 0; i < traj.values.size(); ++i)
            csv << (i + 1) << ',' << fmt17(traj.values[i]) << ','
                << fmt17(report.u_iterative[i]) << ',' << fmt17(report.u_closed_form[i]) << '\n';
        write_text(opt.table, csv.str());
    }

    if (!report.violations.empty()) {
        std::cerr << "invariant violation: " << report.violations.size()
                  << " orbit value(s) escaped the envelope 1 < y_n <= u_n\n";
        return kExitViolation;
    }
    return kExitOk;
}

// --- analyze ----------------------------------------------------------

int cmd_analyze(const Options& opt) {
    const ResolvedModel model = resolve_model(opt);
    const double p = model.params.p;
    const int m = model.params.m;
    std::vector<double> init = resolve_init(opt, m);
    if (model.raw)
        for (double& v : init) v /= model.raw->A;

    const Trajectory traj = simulate(model.params, InitialConditions(init),
                                     IterationGuard(opt.steps, opt.overflow_bound,
                                                    opt.underflow_bound));
    if (traj.status != TrajectoryStatus::Completed) return report_guard_trip(traj);

    const double y_bar = equilibrium(p).y_bar;
    const RootSet roots = find_roots(characteristic_polynomial(linearize(p, m)));

    json j = model_config_json(opt, model);
    j["config_init"] = init_config_json(opt, init);
    j["y_bar"] = y_bar;
    j["trajectory"] = {{"steps", traj.values.size()},
                       {"status", status_name(traj.status)},
                       {"final_error", std::abs(traj.values.back() - y_bar)}};

    // semi-cycles over the numerically resolvable prefix
    const SemiCycleDecomposition dec = decompose_semicycles(traj, y_bar, 1e-12);
    const SemiCycleLengthCheck bound = check_max_semicycle_length(dec, m);
    std::size_t max_len = 0, max_noninitial = 0;
    for (std::size_t i = 0; i < dec.cycles.size(); ++i) {
        max_len = std::max(max_len, dec.cycles[i].length);
        if (i > 0) max_noninitial = std::max(max_noninitial, dec.cycles[i].length);
    }
    json sc = {{"count", dec.cycles.size()},
               {"analyzed_length", dec.analyzed_length},
               {"has_initial_partial", dec.has_initial_partial},
               {"max_length", max_len},
               {"max_noninitial_length", max_noninitial},
               {"bound_m", m},
               {"bound_holds", bound.holds},
               {"offending_cycles", bound.offending}};
    if (dec.truncated_at) sc["truncated_at"] = *dec.truncated_at;
    j["semicycles"] = sc;

    try {
        const PeriodReport period = detect_period(traj, opt.max_period, opt.period_tol);
        json pj = {{"tolerance", period.tolerance}, {"window", period.window}};
        if (period.period) pj["period"] = *period.period;
        else pj["period"] = nullptr;
        j["period"] = pj;
    } catch (const WindowTooShort& e) {
        j["period"] = {{"error", e.what()}};
    }

    try {
        const ConvergenceRateReport rate = estimate_rate(traj, y_bar, roots);
        j["rate"] = {{"ratio_estimate", rate.ratio_estimate},
                     {"nth_root_estimate", rate.nth_root_estimate},
                     {"dominant_modulus", rate.dominant_modulus},
                     {"usable_length", rate.usable_length}};
    } catch (const EquilibriumOrbit& e) {
        j["rate"] = {{"error", e.what()}};
    } catch (const NotConverging& e) {
        j["rate"] = {{"error", e.what()}};
    }

    j["error_recurrence_max_residual"] = error_recurrence_max_residual(traj, y_bar);
    j["spectral_radius"] = roots.spectral_radius;

    write_text(opt.out, j.dump(2) + "\n");

    if (!bound.holds) {
        std::cerr << "invariant violation: semi-cycle longer than m inside the resolvable "
                     "window\n";
        return kExitViolation;
    }
    return kExitOk;
}

// --- sweep / conjecture -------------------------------------------------

int cmd_sweep(const Options& opt) {
    if (!opt.seed) throw std::invalid_argument("missing --seed (seeds are never implicit)");
    if (!opt.p_min || !opt.p_max || !opt.p_steps)
        throw std::invalid_argument("missing --p-min/--p-max/--p-steps");
    if (opt.m_values.empty()) throw std::invalid_argument("missing --m");

    SweepConfig cfg;
    cfg.p_min = *opt.p_min;
    cfg.p_max = *opt.p_max;
    cfg.p_steps = *opt.p_steps;
    cfg.m_values = opt.m_values;
    cfg.trials = opt.trials;
    cfg.init_low = opt.init_low;
    cfg.init_high = opt.init_high;
    cfg.seed = *opt.seed;
    cfg.steps = opt.steps;
    cfg.tol = opt.tol;

    const std::vector<SweepCell> grid = stability_sweep(cfg);

    std::ostringstream csv;
    csv << "p,m,n_converged,n_diverged,n_undetermined,median_err,median_rate\n";
    for (const SweepCell& cell : grid)
        csv << fmt17(cell.p) << ',' << cell.m << ',' << cell.n_converged << ','
            << cell.n_diverged << ',' << cell.n_undetermined << ','
            << fmt17(cell.median_final_error) << ',' << fmt17(cell.median_rate) << '\n';
    write_text(opt.out, csv.str());
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    Options opt;

    // Mode defaults that differ from the struct's. The conjecture mode is the
    // evidence sweep over p in [0.50, 0.70]; explicit flags still override.
    std::string mode;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (!arg.empty() && arg[0] != '-') {
            mode = arg;
            break;
        }
    }
    if (mode == "conjecture") {
        opt.p_min = 0.50;
        opt.p_max = 0.70;
        opt.p_steps = 5;
        opt.m_values = {1, 2, 3};
        opt.trials = 50;
        opt.steps = 20000;
        opt.tol = 1e-6;
    } else if (mode == "sweep" || mode == "analyze") {
        opt.steps = mode == "sweep" ? 5000 : 2000;
    } else if (mode == "envelope") {
        opt.steps = 300;
    }

    // Config file first, flags second, so flags override the file.
    try {
        for (int i = 1; i < argc; ++i) {
            const std::string arg = argv[i];
            std::string path;
            if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
            else if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
            if (!path.empty()) {
                std::ifstream in(path);
                if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
                json cfg = json::parse(in);
                if (cfg.contains("mode") && cfg["mode"].get<std::string>() != mode)
                    throw std::invalid_argument("config mode '" +
                                                cfg["mode"].get<std::string>() +
                                                "' does not match subcommand '" + mode + "'");
                apply_config(cfg, opt);
                break;
            }
        }
    } catch (const json::exception& e) {
        std::cerr << "invalid arguments: config file: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return kExitUsage;
    }

    CLI::App app{"dynamics laboratory for y_{n+1} = 1 + p y_{n-m} / y_n^2"};
    app.require_subcommand(1);

    auto add_model = [&opt](CLI::App* cmd) {
        cmd->add_option("--p", opt.p, "normalized parameter p = B/A^2");
        cmd->add_option("--A", opt.A, "additive constant of the x-form");
        cmd->add_option("--B", opt.B, "coefficient of the x-form");
        cmd->add_option("--m", opt.m, "delay m >= 1");
        cmd->add_option("--config", opt.config_path, "JSON config file (flags override it)");
        cmd->add_option("--out", opt.out, "output path, or - for stdout");
    };
    auto add_init = [&opt](CLI::App* cmd) {
        cmd->add_option("--init", opt.init, "m+1 initial values y_{-m}..y_0")->delimiter(',');
        cmd->add_option("--init-seed", opt.init_seed, "seed for uniform random initials");
        cmd->add_option("--init-low", opt.init_low, "lower bound of the initial draw");
        cmd->add_option("--init-high", opt.init_high, "upper bound of the initial draw");
    };
    auto add_guard = [&opt](CLI::App* cmd) {
        cmd->add_option("--steps", opt.steps, "iteration steps");
        cmd->add_option("--overflow-bound", opt.overflow_bound, "guard upper bound");
        cmd->add_option("--underflow-bound", opt.underflow_bound, "guard lower bound");
    };

    CLI::App* sim = app.add_subcommand("simulate", "iterate the recurrence, write a CSV orbit");
    add_model(sim);
    add_init(sim);
    add_guard(sim);

    CLI::App* roots_cmd = app.add_subcommand("roots", "characteristic roots and stability report");
    add_model(roots_cmd);

    CLI::App* env = app.add_subcommand("envelope", "boundedness envelope check (0 < p < 1)");
    add_model(env);
    add_init(env);
    add_guard(env);
    env->add_option("--table", opt.table, "also write a CSV table n,y,u_iterative,u_closed_form");

    CLI::App* ana = app.add_subcommand("analyze", "semi-cycles, period, convergence rate");
    add_model(ana);
    add_init(ana);
    add_guard(ana);
    ana->add_option("--max-period", opt.max_period, "largest period searched");
    ana->add_option("--period-tol", opt.period_tol, "period detection tolerance");

    auto add_sweep_options = [&](CLI::App* cmd) {
        cmd->add_option("--p-min", opt.p_min, "grid lower endpoint");
        cmd->add_option("--p-max", opt.p_max, "grid upper endpoint");
        cmd->add_option("--p-steps", opt.p_steps, "grid points");
        cmd->add_option("--m", opt.m_values, "delays, comma separated")->delimiter(',');
        cmd->add_option("--trials", opt.trials, "random trials per cell");
        cmd->add_option("--steps", opt.steps, "iteration steps per trial");
        cmd->add_option("--tol", opt.tol, "convergence tolerance on |y_N - ybar|");
        cmd->add_option("--seed", opt.seed, "base seed (required; never implicit)");
        cmd->add_option("--init-low", opt.init_low, "lower bound of the initial draw");
        cmd->add_option("--init-high", opt.init_high, "upper bound of the initial draw");
        cmd->add_option("--config", opt.config_path, "JSON config file (flags override it)");
        cmd->add_option("--out", opt.out, "output path, or - for stdout");
    };
    CLI::App* swp = app.add_subcommand("sweep", "convergence counts over a (p, m) grid");
    add_sweep_options(swp);
    CLI::App* conj = app.add_subcommand("conjecture",
                                        "evidence sweep on p in [0.50, 0.70], m in {1,2,3}");
    add_sweep_options(conj);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::cout << app.help();
            return kExitOk;
        }
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (sim->parsed()) return cmd_simulate(opt);
        if (roots_cmd->parsed()) return cmd_roots(opt);
        if (env->parsed()) return cmd_envelope(opt);
        if (ana->parsed()) return cmd_analyze(opt);
        if (swp->parsed() || conj->parsed()) return cmd_sweep(opt);
        std::cerr << "invalid arguments: no subcommand\n";
        return kExitUsage;
    } catch (const NonConvergence& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace qrd
