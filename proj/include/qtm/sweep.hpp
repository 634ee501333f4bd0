// sweep.hpp — parameter sweeps, working-regime boundary location, Carnot checks

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qtm/observables.hpp"

namespace qtm {

// Plain fridge parameters, buildable into a validated FridgeSpec; the form a
// sweep can modify one field of.
struct FridgeSettings {
    double E1 = 1.0;
    double E3 = 1.0;
    std::array<double, 3> T{10.0, 5.0, 4.0};
    std::array<double, 3> p{1e-3, 1e-3, 1e-3};
    double g = 1e-3;

    FridgeSpec build() const { return FridgeSpec(E1, E3, T, p, g); }
    FridgeSettings with(const std::string& param, double value) const;
};

inline const std::vector<std::string>& fridge_sweep_axes() {
    static const std::vector<std::string> axes{"E1", "E3", "g",  "T1", "T2",
                                               "T3", "p1", "p2", "p3"};
    return axes;
}

// Plain engine parameters with the documented defaults.
struct EngineSettings {
    double E2 = 1.0;
    double E3 = 0.5;
    std::array<double, 2> T{10.0, 5.0};
    std::array<double, 2> p{0.02, 0.02};
    double g = 0.02;
    Index ladder_levels = 41;
    Index initial_level = 20;

    EngineSpec build() const {
        return EngineSpec(E2, E3, T, p, g, ladder_levels, initial_level);
    }
};

struct SweepRow {
    double param = 0.0;
    std::optional<CurrentsReport> report;
    std::string status = "ok";   // error text when the point failed
};

struct SweepTable {
    std::string axis;
    std::vector<double> grid;
    std::vector<SweepRow> rows;   // one per grid point, grid order
};

// Steady state plus currents at every grid point; failures are recorded in-row,
// never dropped.
SweepTable sweep_fridge(const FridgeSettings& base, const std::string& axis,
                        const std::vector<double>& grid);

// E1* solving E1/T1 + E3/T3 = (E1 + E3)/T2; the zero-current design point.
double reversibility_point_fridge(double T1, double T2, double T3, double E3);

// T3 (T1 - T2) / (T1 (T2 - T3)).
double carnot_cop(double T1, double T2, double T3);

// 1 - T2/T1.
double carnot_efficiency_engine(double T1, double T2);

// Bisection on sign(Q3) between bracketing E1 values; |result - root| <= tol.
double locate_q3_zero(const FridgeSettings& base, double e1_low, double e1_high,
                      double tol = 1e-6);

struct CarnotCheck {
    double reversibility_value = 0.0;   // parameter value where currents vanish
    double limit_performance = 0.0;     // design COP or efficiency at that point
    double carnot_performance = 0.0;    // analytic Carnot value
    double current_at_point = 0.0;      // |Q3| or |W| measured there
    bool passed = false;
    std::string detail;                 // empty when passed
};

// Builds the fridge at E1 = E1*, solves, and verifies that the design COP equals
// the Carnot COP to 1e-9 relative and that every current vanishes to 1e-12 of
// the current scale max_i(p_i E_i).
CarnotCheck carnot_check_fridge(double T1, double T2, double T3, double E3, double g,
                                const std::array<double, 3>& p);

// Engine time-domain runner (rotating-frame RK4) and windowed measurement.
struct EngineRunConfig {
    double horizon = 2500.0;
    double window_begin = 800.0;
    double window_end = 0.0;        // 0: run to the horizon
    double dt = 0.0;                // 0: min(0.05/|L|, 0.05/max(p,g))
    Index sample_stride = 0;        // 0: about 400 samples
};

struct EngineRunResult {
    CurrentsReport report;
    double boundary_peak = 0.0;     // worst boundary-level population in the window
    double mean_level_drift = 0.0;  // <n>(end) - n0
    double dt = 0.0;
    Index steps = 0;
};

EngineRunResult run_engine(const EngineSpec& spec, const EngineRunConfig& config = {});

struct EngineCarnotResult {
    CarnotCheck check;
    SweepTable table;   // one row per E3 grid point, efficiency in cop_or_eff
};

// Sweeps E3 toward the reversibility step E3* = E2 (T1/T2 - 1) from the working
// side, verifying the measured efficiency against E3/E1 (2% tolerance) per point
// and |W| against the 1e-12 E3 p stall floor at E3*.
EngineCarnotResult carnot_check_engine(double T1, double T2, double E2,
                                       const std::vector<double>& e3_grid,
                                       double g, const std::array<double, 2>& p,
                                       Index ladder_levels, Index initial_level,
                                       const EngineRunConfig& config = {});

} // namespace qtm
