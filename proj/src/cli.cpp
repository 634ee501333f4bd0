#include "qtm/cli.hpp"

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtm/errors.hpp"
#include "qtm/io.hpp"

namespace qtm {

namespace {

using nlohmann::ordered_json;

// Flag values collected as a config-override document so that flags beat the file.
struct FlagSet {
    std::string config_path;
    std::string T, p, E1, E2, E3, g, N, n0;
    std::string axis, grid;
    std::string horizon, window, dt;
    std::string out, format;
    std::string seed;
    bool print_config = false;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> values;
    std::istringstream is(text);
    std::string cell;
    while (std::getline(is, cell, ',')) {
        if (cell.empty()) continue;
        try {
            values.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("cannot parse ") + what + ": " + text);
        }
    }
    if (values.empty())
        throw std::invalid_argument(std::string("empty value for ") + what);
    return values;
}

ordered_json overrides_from_flags(const FlagSet& flags, MachineKind machine,
                                  const std::string& command) {
    ordered_json j = ordered_json::object();
    j["machine"] = machine == MachineKind::fridge ? "fridge" : "engine";
    auto set_number = [&j](const std::string& key, const std::string& text) {
        if (text.empty()) return;
        try {
            j[key] = std::stod(text);
        } catch (const std::exception&) {
            throw std::invalid_argument("cannot parse --" + key + ": " + text);
        }
    };
    set_number("E1", flags.E1);
    set_number("E2", flags.E2);
    set_number("E3", flags.E3);
    set_number("g", flags.g);
    set_number("N", flags.N);
    set_number("n0", flags.n0);
    if (!flags.T.empty()) j["T"] = parse_list(flags.T, "--T");
    if (!flags.p.empty()) {
        std::vector<double> p = parse_list(flags.p, "--p");
        const std::size_t want = machine == MachineKind::fridge ? 3 : 2;
        if (p.size() == 1) p.assign(want, p[0]);   // one rate applies to every bath
        j["p"] = p;
    }
    ordered_json numerics = ordered_json::object();
    if (!flags.dt.empty()) numerics["dt"] = std::stod(flags.dt);
    if (!flags.horizon.empty()) numerics["horizon"] = std::stod(flags.horizon);
    if (!flags.window.empty()) numerics["window"] = parse_list(flags.window, "--window");
    if (!numerics.empty()) j["numerics"] = numerics;
    ordered_json sweep = ordered_json::object();
    if (!flags.axis.empty()) sweep["axis"] = flags.axis;
    if (!flags.grid.empty()) sweep["grid"] = parse_grid(flags.grid);
    if (!sweep.empty()) j["sweep"] = sweep;
    ordered_json output = ordered_json::object();
    if (!flags.out.empty()) output["path"] = flags.out;
    if (!flags.format.empty()) output["format"] = flags.format;
    if (!output.empty()) j["output"] = output;
    if (!flags.seed.empty()) j["seed"] = std::stoull(flags.seed);
    (void)command;
    return j;
}

RunConfig resolve(const FlagSet& flags, MachineKind machine, const std::string& command) {
    const ordered_json overrides = overrides_from_flags(flags, machine, command);
    std::ostream* log = (command == "selftest") ? nullptr : &std::cerr;
    RunConfig config = flags.config_path.empty()
                           ? load_config(ordered_json::object(), overrides, log)
                           : load_config_file(flags.config_path, overrides, log);
    config.command = command;
    if (flags.print_config) std::cout << to_json(config).dump(2) << "\n";
    return config;
}

void add_common_flags(CLI::App* cmd, FlagSet& flags) {
    cmd->add_option("--config", flags.config_path, "JSON configuration file");
    cmd->add_option("--out", flags.out, "output file (default: stdout)");
    cmd->add_option("--format", flags.format, "output format: json or csv");
    cmd->add_flag("--print-config", flags.print_config, "echo the resolved configuration");
}

void add_fridge_flags(CLI::App* cmd, FlagSet& flags) {
    cmd->add_option("--E1", flags.E1, "qubit 1 energy gap");
    cmd->add_option("--E3", flags.E3, "qubit 3 energy gap (E2 is derived as E1 + E3)");
    cmd->add_option("--T", flags.T, "bath temperatures T1,T2,T3");
    cmd->add_option("--p", flags.p, "reset rates p1,p2,p3 (a single value applies to all)");
    cmd->add_option("--g", flags.g, "degenerate-pair coupling");
}

void add_engine_flags(CLI::App* cmd, FlagSet& flags) {
    cmd->add_option("--E2", flags.E2, "qubit 2 energy gap");
    cmd->add_option("--E3", flags.E3, "ladder step (E1 is derived as E2 + E3)");
    cmd->add_option("--T", flags.T, "bath temperatures T1,T2");
    cmd->add_option("--p", flags.p, "reset rates p1,p2 (a single value applies to both)");
    cmd->add_option("--g", flags.g, "degenerate-pair coupling");
    cmd->add_option("--N", flags.N, "ladder levels");
    cmd->add_option("--n0", flags.n0, "initial ladder level");
    cmd->add_option("--horizon", flags.horizon, "integration horizon");
    cmd->add_option("--window", flags.window, "measurement window begin,end");
    cmd->add_option("--dt", flags.dt, "integration step (default: auto)");
}

void emit_report(const RunConfig& config, const CurrentsReport& report) {
    if (config.format == OutputFormat::csv) emit_csv(report, config.output_path);
    else emit(to_json(report), config.output_path);
}

int run_fridge_steady(const RunConfig& config) {
    const FridgeSpec spec = config.fridge.build();
    const SteadyStateResult result = steady_state(assemble_fridge_liouvillian(spec));
    emit(to_json(result), config.output_path);
    return 0;
}

int run_fridge_currents(const RunConfig& config) {
    const FridgeSpec spec = config.fridge.build();
    const CurrentsReport report = fridge_report(spec, solve_fridge_steady(spec));
    emit_report(config, report);
    return 0;
}

int run_fridge_sweep(const RunConfig& config) {
    if (config.sweep_axis.empty())
        throw std::invalid_argument("sweep requires --axis (one of E1,E3,g,T1,T2,T3,p1,p2,p3)");
    if (config.sweep_grid.empty())
        std::cerr << "warning: empty sweep grid; emitting a header-only table\n";
    const SweepTable table = sweep_fridge(config.fridge, config.sweep_axis, config.sweep_grid);
    if (config.format == OutputFormat::csv) emit_csv(table, config.output_path);
    else emit(to_json(table), config.output_path);
    return 0;
}

int run_fridge_carnot(const RunConfig& config) {
    const CarnotCheck check =
        carnot_check_fridge(config.fridge.T[0], config.fridge.T[1], config.fridge.T[2],
                            config.fridge.E3, config.fridge.g, config.fridge.p);
    emit(to_json(check), config.output_path);
    if (!check.passed) throw NumericalError("carnot check failed: " + check.detail);
    return 0;
}

EngineRunConfig engine_run_config(const RunConfig& config) {
    EngineRunConfig rc = config.engine_run;
    const EngineRunConfig defaults;
    if (rc.horizon <= 0) {
        rc.horizon = defaults.horizon;
        std::cerr << "default: horizon = " << format_double(rc.horizon) << "\n";
    }
    if (rc.window_begin <= 0 && rc.window_end <= 0) {
        rc.window_begin = 0.32 * rc.horizon;
        rc.window_end = rc.horizon;
        std::cerr << "default: window = [" << format_double(rc.window_begin) << ", "
                  << format_double(rc.window_end) << "]\n";
    }
    return rc;
}

int run_engine_run(const RunConfig& config) {
    const EngineSpec spec = config.engine.build();
    const EngineRunResult result = run_engine(spec, engine_run_config(config));
    if (config.engine_run.dt <= 0)
        std::cerr << "default: dt = " << format_double(result.dt) << "\n";
    if (config.format == OutputFormat::csv) emit_csv(result.report, config.output_path);
    else emit(to_json(result), config.output_path);
    return 0;
}

int run_engine_carnot(const RunConfig& config) {
    std::vector<double> grid = config.sweep_grid;
    const double e3_star = config.engine.E2 * (config.engine.T[0] / config.engine.T[1] - 1.0);
    if (grid.empty()) {
        // approach the stall point from the working side
        for (double f : {0.1, 0.25, 0.5, 0.75}) grid.push_back(f * e3_star);
        std::cerr << "default: E3 grid at {0.1, 0.25, 0.5, 0.75} * E3*\n";
    }
    const EngineCarnotResult result = carnot_check_engine(
        config.engine.T[0], config.engine.T[1], config.engine.E2, grid, config.engine.g,
        config.engine.p, config.engine.ladder_levels, config.engine.initial_level,
        engine_run_config(config));
    emit(to_json(result), config.output_path);
    if (!result.check.passed)
        throw NumericalError("engine carnot check failed: " + result.check.detail);
    return 0;
}

int run_selftest_cmd(const RunConfig& config) {
    const SelftestReport report = run_selftest(config.seed);
    for (const SuiteResult& suite : report.suites)
        std::cout << (suite.passed ? "PASS " : "FAIL ") << suite.name
                  << (suite.detail.empty() ? "" : ": " + suite.detail) << "\n";
    if (!config.output_path.empty()) emit(to_json(report), config.output_path);
    if (!report.passed) throw NumericalError("selftest failed");
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"qtm — reset-model simulator for self-contained quantum thermal machines"};
    app.require_subcommand(1);

    FlagSet flags;
    std::string pending;   // machine+command of the parsed subcommand

    CLI::App* fridge = app.add_subcommand("fridge", "three-qubit absorption refrigerator");
    fridge->require_subcommand(1);
    for (const char* name : {"steady", "currents", "sweep", "carnot-check"}) {
        CLI::App* cmd = fridge->add_subcommand(name);
        add_common_flags(cmd, flags);
        add_fridge_flags(cmd, flags);
        if (std::string(name) == "sweep") {
            cmd->add_option("--axis", flags.axis, "swept parameter");
            cmd->add_option("--grid", flags.grid, "grid: from:to:count or comma list");
        }
        cmd->callback([&pending, name]() { pending = std::string("fridge ") + name; });
    }

    CLI::App* engine = app.add_subcommand("engine", "two-qubit heat engine with a weight");
    engine->require_subcommand(1);
    for (const char* name : {"run", "carnot-check"}) {
        CLI::App* cmd = engine->add_subcommand(name);
        add_common_flags(cmd, flags);
        add_engine_flags(cmd, flags);
        if (std::string(name) == std::string("carnot-check"))
            cmd->add_option("--E3-grid", flags.grid, "E3 grid approaching E3* from below");
        cmd->callback([&pending, name]() { pending = std::string("engine ") + name; });
    }

    CLI::App* selftest = app.add_subcommand("selftest", "run the oracle panel and invariant suites");
    selftest->add_option("--seed", flags.seed, "panel seed (default 42)");
    add_common_flags(selftest, flags);
    selftest->callback([&pending]() { pending = "selftest"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << "qtm: error: usage: " << e.what() << "\n";
        return 1;
    }

    try {
        if (pending == "selftest") {
            RunConfig config = resolve(flags, MachineKind::fridge, "selftest");
            return run_selftest_cmd(config);
        }
        const bool is_fridge = pending.rfind("fridge", 0) == 0;
        const std::string command = pending.substr(pending.find(' ') + 1);
        RunConfig config =
            resolve(flags, is_fridge ? MachineKind::fridge : MachineKind::engine, command);
        if (pending == "fridge steady") return run_fridge_steady(config);
        if (pending == "fridge currents") return run_fridge_currents(config);
        if (pending == "fridge sweep") return run_fridge_sweep(config);
        if (pending == "fridge carnot-check") return run_fridge_carnot(config);
        if (pending == "engine run") return run_engine_run(config);
        if (pending == "engine carnot-check") return run_engine_carnot(config);
        throw std::invalid_argument("unknown command: " + pending);
    } catch (const NumericalError& err) {
        std::string what = err.what();
        for (char& c : what)
            if (c == '\n') c = ' ';
        std::cerr << "qtm: error: numerical: " << what << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::string what = err.what();
        for (char& c : what)
            if (c == '\n') c = ' ';
        std::cerr << "qtm: error: validation: " << what << "\n";
        return 1;
    }
}

} // namespace qtm
