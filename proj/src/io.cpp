#include "qtm/io.hpp"

#include "qtm/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace qtm {

namespace {

using nlohmann::ordered_json;

void check_known_keys(const ordered_json& obj, const std::vector<std::string>& allowed,
                      const std::string& where) {
    if (!obj.is_object()) throw std::invalid_argument("expected an object at " + where);
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const std::string& key : allowed) known = known || key == item.key();
        if (!known)
            throw std::invalid_argument("unknown key \"" + item.key() + "\" in " + where);
    }
}

double number_at(const ordered_json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw std::invalid_argument("key \"" + key + "\" must be a number");
    return obj[key].get<double>();
}

template <std::size_t N>
std::array<double, N> array_at(const ordered_json& obj, const std::string& key,
                               const std::array<double, N>& fallback) {
    if (!obj.contains(key)) return fallback;
    const ordered_json& v = obj[key];
    if (!v.is_array() || v.size() != N)
        throw std::invalid_argument("key \"" + key + "\" must be an array of " +
                                    std::to_string(N) + " numbers");
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = v[i].get<double>();
    return out;
}

ordered_json merged(const ordered_json& base, const ordered_json& overrides) {
    ordered_json out = base.is_null() ? ordered_json::object() : base;
    if (overrides.is_null()) return out;
    for (const auto& item : overrides.items()) {
        if (item.value().is_object() && out.contains(item.key()) &&
            out[item.key()].is_object())
            out[item.key()] = merged(out[item.key()], item.value());
        else
            out[item.key()] = item.value();
    }
    return out;
}

const char* flag_name(ThermalFlag flag) {
    switch (flag) {
        case ThermalFlag::thermal: return "thermal";
        case ThermalFlag::inversion: return "inversion";
        case ThermalFlag::infinite: return "infinite";
        case ThermalFlag::zero: return "zero";
        case ThermalFlag::nonthermal: return "nonthermal";
    }
    return "unknown";
}

ThermalFlag flag_from_name(const std::string& name) {
    if (name == "thermal") return ThermalFlag::thermal;
    if (name == "inversion") return ThermalFlag::inversion;
    if (name == "infinite") return ThermalFlag::infinite;
    if (name == "zero") return ThermalFlag::zero;
    if (name == "nonthermal") return ThermalFlag::nonthermal;
    throw std::invalid_argument("unknown effective-temperature flag: " + name);
}

std::string csv_escape(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::string teff_cell(const EffectiveTemperature& eff) {
    switch (eff.flag) {
        case ThermalFlag::infinite: return "inf";
        case ThermalFlag::zero: return "0";
        case ThermalFlag::nonthermal: return "nonthermal";
        default: return format_double(eff.value);
    }
}

void write_report_row(const CurrentsReport& report, const std::string& param,
                      const std::string& status, std::ostream& out) {
    const bool fridge = report.kind == MachineKind::fridge;
    out << param << ',';
    out << format_double(report.bath_current[0]) << ',' << format_double(report.bath_current[1])
        << ',';
    out << (fridge ? format_double(report.bath_current[2]) : "") << ',';
    out << (fridge ? "" : format_double(report.work_current)) << ',';
    out << format_double(report.interaction_current) << ',';
    out << format_double(report.delta_q[0]) << ',' << format_double(report.delta_q[1]) << ',';
    out << (fridge ? format_double(report.delta_q[2]) : "") << ',';
    out << teff_cell(report.effective_temp[0]) << ',' << teff_cell(report.effective_temp[1])
        << ',';
    out << (fridge ? teff_cell(report.effective_temp[2]) : "") << ',';
    out << format_double(report.cop_or_eff) << ',';
    out << csv_escape(status) << '\n';
}

void write_error_row(double param, const std::string& status, std::ostream& out) {
    out << format_double(param) << ",,,,,,,,,,,,," << csv_escape(status) << '\n';
}

ordered_json teff_json(const EffectiveTemperature& eff) {
    ordered_json j;
    j["value"] = eff.value;
    j["flag"] = flag_name(eff.flag);
    return j;
}

ordered_json density_json(const Eigen::MatrixXcd& rho) {
    // row-major [re, im] pairs
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < rho.rows(); ++i)
        for (Eigen::Index j = 0; j < rho.cols(); ++j)
            rows.push_back(ordered_json::array({rho(i, j).real(), rho(i, j).imag()}));
    return rows;
}

} // namespace

std::string format_double(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    if (text.empty()) return grid;
    if (text.find(':') != std::string::npos) {
        double from = 0, to = 0;
        long count = 0;
        std::istringstream is(text);
        char c1 = 0, c2 = 0;
        if (!(is >> from >> c1 >> to >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1)
            throw std::invalid_argument("grid must be from:to:count or a comma list");
        if (count == 1) {
            grid.push_back(from);
            return grid;
        }
        for (long i = 0; i < count; ++i)
            grid.push_back(from + (to - from) * static_cast<double>(i) /
                                      static_cast<double>(count - 1));
        return grid;
    }
    std::istringstream is(text);
    std::string cell;
    while (std::getline(is, cell, ',')) {
        if (cell.empty()) continue;
        grid.push_back(std::stod(cell));
    }
    return grid;
}

RunConfig load_config(const ordered_json& file, const ordered_json& overrides,
                      std::ostream* log) {
    const ordered_json j = merged(file, overrides);
    check_known_keys(j, {"machine", "E1", "E2", "E3", "T", "p", "g", "N", "n0", "numerics",
                         "sweep", "output", "seed"},
                     "the configuration root");

    RunConfig config;
    if (j.contains("machine")) {
        const std::string m = j["machine"].get<std::string>();
        if (m == "fridge") config.machine = MachineKind::fridge;
        else if (m == "engine") config.machine = MachineKind::engine;
        else throw std::invalid_argument("machine must be \"fridge\" or \"engine\"");
    }

    if (config.machine == MachineKind::fridge) {
        FridgeSettings& s = config.fridge;
        s.E1 = number_at(j, "E1", s.E1);
        s.E3 = number_at(j, "E3", s.E3);
        s.T = array_at<3>(j, "T", s.T);
        s.p = array_at<3>(j, "p", s.p);
        s.g = number_at(j, "g", s.g);
        if (j.contains("N") || j.contains("n0"))
            throw std::invalid_argument("ladder keys N/n0 apply to the engine only");
        s.build();   // revalidate all spec invariants
        const double derived_e2 = s.E1 + s.E3;
        if (j.contains("E2") && j["E2"].get<double>() != derived_e2) {
            std::ostringstream msg;
            msg << "E2 must equal E1 + E3 (it is derived): got "
                << format_double(j["E2"].get<double>()) << ", expected "
                << format_double(derived_e2);
            throw std::invalid_argument(msg.str());
        }
        if (log) *log << "derived: E2 = " << format_double(derived_e2) << "\n";
    } else {
        EngineSettings& s = config.engine;
        s.E2 = number_at(j, "E2", s.E2);
        s.E3 = number_at(j, "E3", s.E3);
        s.T = array_at<2>(j, "T", s.T);
        s.p = array_at<2>(j, "p", s.p);
        s.g = number_at(j, "g", s.g);
        s.ladder_levels = static_cast<Index>(number_at(j, "N", static_cast<double>(s.ladder_levels)));
        s.initial_level = static_cast<Index>(number_at(j, "n0", static_cast<double>(s.initial_level)));
        s.build();
        const double derived_e1 = s.E2 + s.E3;
        if (j.contains("E1") && j["E1"].get<double>() != derived_e1) {
            std::ostringstream msg;
            msg << "E1 must equal E2 + E3 (it is derived): got "
                << format_double(j["E1"].get<double>()) << ", expected "
                << format_double(derived_e1);
            throw std::invalid_argument(msg.str());
        }
        if (log) *log << "derived: E1 = " << format_double(derived_e1) << "\n";
    }

    if (j.contains("numerics")) {
        const ordered_json& n = j["numerics"];
        check_known_keys(n, {"dt", "horizon", "window", "stride"}, "numerics");
        config.engine_run.dt = number_at(n, "dt", config.engine_run.dt);
        config.engine_run.horizon = number_at(n, "horizon", config.engine_run.horizon);
        if (n.contains("window")) {
            const auto w = array_at<2>(n, "window", {config.engine_run.window_begin,
                                                     config.engine_run.window_end});
            config.engine_run.window_begin = w[0];
            config.engine_run.window_end = w[1];
        }
        config.engine_run.sample_stride =
            static_cast<Index>(number_at(n, "stride", static_cast<double>(config.engine_run.sample_stride)));
    }

    if (j.contains("sweep")) {
        const ordered_json& s = j["sweep"];
        check_known_keys(s, {"axis", "grid"}, "sweep");
        if (s.contains("axis")) config.sweep_axis = s["axis"].get<std::string>();
        if (s.contains("grid")) {
            if (s["grid"].is_array()) {
                config.sweep_grid.clear();
                for (const auto& v : s["grid"]) config.sweep_grid.push_back(v.get<double>());
            } else if (s["grid"].is_object()) {
                check_known_keys(s["grid"], {"from", "to", "count"}, "sweep.grid");
                std::ostringstream text;
                text << format_double(s["grid"]["from"].get<double>()) << ':'
                     << format_double(s["grid"]["to"].get<double>()) << ':'
                     << s["grid"]["count"].get<long>();
                config.sweep_grid = parse_grid(text.str());
            } else {
                throw std::invalid_argument("sweep.grid must be an array or {from, to, count}");
            }
        }
    }

    if (j.contains("output")) {
        const ordered_json& o = j["output"];
        check_known_keys(o, {"path", "format"}, "output");
        if (o.contains("path")) config.output_path = o["path"].get<std::string>();
        if (o.contains("format")) {
            const std::string f = o["format"].get<std::string>();
            if (f == "json") config.format = OutputFormat::json;
            else if (f == "csv") config.format = OutputFormat::csv;
            else throw std::invalid_argument("output.format must be \"json\" or \"csv\"");
        }
    }

    if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
    return config;
}

RunConfig load_config_file(const std::string& path, const ordered_json& overrides,
                           std::ostream* log) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    ordered_json file;
    try {
        file = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& err) {
        throw std::invalid_argument(std::string("config parse error: ") + err.what());
    }
    return load_config(file, overrides, log);
}

nlohmann::ordered_json to_json(const CurrentsReport& report) {
    ordered_json j;
    j["schema"] = "qtm/1";
    j["kind"] = "currents";
    j["machine"] = report.kind == MachineKind::fridge ? "fridge" : "engine";
    j["Q"] = report.bath_current;
    j["W"] = report.work_current;
    j["J"] = report.interaction_current;
    j["delta_q"] = report.delta_q;
    ordered_json teff = ordered_json::array();
    for (const auto& eff : report.effective_temp) teff.push_back(teff_json(eff));
    j["T_eff"] = teff;
    j["cop_or_eff"] = report.cop_or_eff;
    return j;
}

CurrentsReport currents_from_json(const nlohmann::ordered_json& j) {
    CurrentsReport report;
    report.kind = j.at("machine").get<std::string>() == "fridge" ? MachineKind::fridge
                                                                 : MachineKind::engine;
    report.bath_current = j.at("Q").get<std::array<double, 3>>();
    report.work_current = j.at("W").get<double>();
    report.interaction_current = j.at("J").get<double>();
    report.delta_q = j.at("delta_q").get<std::array<double, 3>>();
    for (std::size_t i = 0; i < 3; ++i) {
        report.effective_temp[i].value = j.at("T_eff")[i].at("value").get<double>();
        report.effective_temp[i].flag =
            flag_from_name(j.at("T_eff")[i].at("flag").get<std::string>());
    }
    report.cop_or_eff = j.at("cop_or_eff").get<double>();
    return report;
}

nlohmann::ordered_json to_json(const SteadyStateResult& result) {
    ordered_json j;
    j["schema"] = "qtm/1";
    j["kind"] = "steady_state";
    j["dim"] = result.rho.rows();
    j["residual"] = result.residual;
    j["gap_proxy"] = result.gap_proxy;
    j["rho"] = density_json(result.rho);
    return j;
}

nlohmann::ordered_json to_json(const SweepTable& table) {
    ordered_json j;
    j["schema"] = "qtm/1";
    j["kind"] = "sweep";
    j["axis"] = table.axis;
    ordered_json rows = ordered_json::array();
    for (const SweepRow& row : table.rows) {
        ordered_json r;
        r["param"] = row.param;
        r["status"] = row.status;
        if (row.report) r["report"] = to_json(*row.report);
        rows.push_back(std::move(r));
    }
    j["rows"] = rows;
    return j;
}

nlohmann::ordered_json to_json(const CarnotCheck& check) {
    ordered_json j;
    j["schema"] = "qtm/1";
    j["kind"] = "carnot_check";
    j["reversibility_value"] = check.reversibility_value;
    j["limit_performance"] = check.limit_performance;
    j["carnot_performance"] = check.carnot_performance;
    j["difference"] = check.limit_performance - check.carnot_performance;
    j["current_at_point"] = check.current_at_point;
    j["passed"] = check.passed;
    j["detail"] = check.detail;
    return j;
}

nlohmann::ordered_json to_json(const EngineRunResult& result) {
    ordered_json j = to_json(result.report);
    j["kind"] = "engine_run";
    j["boundary_peak"] = result.boundary_peak;
    j["mean_level_drift"] = result.mean_level_drift;
    j["dt"] = result.dt;
    j["steps"] = result.steps;
    return j;
}

nlohmann::ordered_json to_json(const EngineCarnotResult& result) {
    ordered_json j;
    j["schema"] = "qtm/1";
    j["kind"] = "engine_carnot_check";
    j["check"] = to_json(result.check);
    j["table"] = to_json(result.table);
    return j;
}

nlohmann::ordered_json to_json(const SelftestReport& report) {
    ordered_json j;
    j["schema"] = "qtm/1";
    j["kind"] = "selftest";
    j["seed"] = report.seed;
    j["passed"] = report.passed;
    ordered_json suites = ordered_json::array();
    for (const SuiteResult& s : report.suites) {
        ordered_json row;
        row["name"] = s.name;
        row["passed"] = s.passed;
        row["worst"] = s.worst;
        row["tolerance"] = s.tolerance;
        row["detail"] = s.detail;
        suites.push_back(std::move(row));
    }
    j["suites"] = suites;
    return j;
}

nlohmann::ordered_json to_json(const RunConfig& config) {
    ordered_json j;
    j["schema"] = "qtm/1";
    j["kind"] = "config";
    j["machine"] = config.machine == MachineKind::fridge ? "fridge" : "engine";
    j["command"] = config.command;
    if (config.machine == MachineKind::fridge) {
        j["E1"] = config.fridge.E1;
        j["E2"] = config.fridge.E1 + config.fridge.E3;
        j["E3"] = config.fridge.E3;
        j["T"] = config.fridge.T;
        j["p"] = config.fridge.p;
        j["g"] = config.fridge.g;
    } else {
        j["E1"] = config.engine.E2 + config.engine.E3;
        j["E2"] = config.engine.E2;
        j["E3"] = config.engine.E3;
        j["T"] = config.engine.T;
        j["p"] = config.engine.p;
        j["g"] = config.engine.g;
        j["N"] = config.engine.ladder_levels;
        j["n0"] = config.engine.initial_level;
        j["numerics"] = {{"dt", config.engine_run.dt},
                         {"horizon", config.engine_run.horizon},
                         {"window", {config.engine_run.window_begin, config.engine_run.window_end}},
                         {"stride", config.engine_run.sample_stride}};
    }
    if (!config.sweep_axis.empty()) {
        j["sweep"] = {{"axis", config.sweep_axis}, {"grid", config.sweep_grid}};
    }
    j["output"] = {{"path", config.output_path},
                   {"format", config.format == OutputFormat::json ? "json" : "csv"}};
    j["seed"] = config.seed;
    return j;
}

void write_csv(const SweepTable& table, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const SweepRow& row : table.rows) {
        if (row.report)
            write_report_row(*row.report, format_double(row.param), row.status, out);
        else
            write_error_row(row.param, row.status, out);
    }
}

void write_csv(const CurrentsReport& report, std::ostream& out) {
    out << kCsvHeader << '\n';
    write_report_row(report, "", "ok", out);
}

namespace {

void emit_text(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << text;
    if (!out) throw NumericalError("failed writing output file: " + path);
}

} // namespace

void emit(const nlohmann::ordered_json& doc, const std::string& path) {
    emit_text(doc.dump(2) + "\n", path);
}

void emit_csv(const SweepTable& table, const std::string& path) {
    std::ostringstream os;
    write_csv(table, os);
    emit_text(os.str(), path);
}

void emit_csv(const CurrentsReport& report, const std::string& path) {
    std::ostringstream os;
    write_csv(report, os);
    emit_text(os.str(), path);
}

} // namespace qtm
