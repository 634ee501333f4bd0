// io.hpp — run configuration, CSV/JSON serialization

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtm/panels.hpp"
#include "qtm/sweep.hpp"

namespace qtm {

enum class OutputFormat { json, csv };

struct RunConfig {
    MachineKind machine = MachineKind::fridge;
    std::string command;   // steady | currents | sweep | carnot-check | run | selftest
    FridgeSettings fridge;
    EngineSettings engine;
    EngineRunConfig engine_run{0.0, 0.0, 0.0, 0.0, 0};   // zeros: resolve at run time
    std::string sweep_axis;
    std::vector<double> sweep_grid;
    std::string output_path;       // empty: stdout
    OutputFormat format = OutputFormat::json;
    std::uint64_t seed = 42;
};

// Strict JSON config reader: unknown keys are fatal, spec invariants are
// revalidated, derived quantities and applied defaults are echoed to `log`
// when it is non-null. `overrides` (same schema) wins over the file contents.
RunConfig load_config(const nlohmann::ordered_json& file,
                      const nlohmann::ordered_json& overrides, std::ostream* log);
RunConfig load_config_file(const std::string& path, const nlohmann::ordered_json& overrides,
                           std::ostream* log);

// "0.1:1.0:10" (inclusive linear grid) or a comma list "0.1,0.2,0.4".
std::vector<double> parse_grid(const std::string& text);

// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

nlohmann::ordered_json to_json(const CurrentsReport& report);
CurrentsReport currents_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const SteadyStateResult& result);
nlohmann::ordered_json to_json(const SweepTable& table);
nlohmann::ordered_json to_json(const CarnotCheck& check);
nlohmann::ordered_json to_json(const EngineRunResult& result);
nlohmann::ordered_json to_json(const EngineCarnotResult& result);
nlohmann::ordered_json to_json(const SelftestReport& report);
nlohmann::ordered_json to_json(const RunConfig& config);

inline constexpr const char* kCsvHeader =
    "param,Q1,Q2,Q3,W,J,dq1,dq2,dq3,Teff1,Teff2,Teff3,cop_or_eff,status";

void write_csv(const SweepTable& table, std::ostream& out);
void write_csv(const CurrentsReport& report, std::ostream& out);

// Serializes to `path`, or stdout when the path is empty.
void emit(const nlohmann::ordered_json& doc, const std::string& path);
void emit_csv(const SweepTable& table, const std::string& path);
void emit_csv(const CurrentsReport& report, const std::string& path);

} // namespace qtm
