// observables.hpp — heat currents, work, population shifts, effective temperatures
//
// Sign convention: bath currents are measured into the machine, so Q_i > 0 means
// the bath feeds energy to qubit i. The interaction current J counts net
// transitions through the degenerate pair, oriented so that J > 0 cools the cold
// qubit (fridge) or lifts the weight (engine). At steady state
// Q1/E1 = -Q2/E2 = Q3/E3 = J.

#pragma once

#include <array>

#include <Eigen/Dense>

#include "qtm/machine.hpp"
#include "qtm/solvers.hpp"

namespace qtm {

enum class MachineKind { fridge, engine };

enum class ThermalFlag {
    thermal,       // diagonal with q0 > q1 > 0
    inversion,     // excited population above ground; value is negative
    infinite,      // equal populations
    zero,          // empty excited level
    nonthermal,    // off-diagonal contamination above 1e-8
};

struct EffectiveTemperature {
    double value = 0.0;
    ThermalFlag flag = ThermalFlag::thermal;
};

// T = E / ln(q0/q1) from the diagonal of a qubit state; off-diagonal magnitude
// above 1e-8 is reported as nonthermal rather than projected away.
EffectiveTemperature effective_temperature(const Eigen::Matrix2cd& reduced, double energy);

struct CurrentsReport {
    MachineKind kind = MachineKind::fridge;
    std::array<double, 3> bath_current{};        // Q1, Q2, Q3 (engine: Q3 unused)
    double work_current = 0.0;                   // engine only
    std::array<double, 3> delta_q{};             // thermal minus actual excited population
    double interaction_current = 0.0;            // J
    std::array<EffectiveTemperature, 3> effective_temp{};
    double cop_or_eff = 0.0;                     // Q3/Q1 (fridge) or W/Q1 (engine)
};

double qubit_excited_population(const Eigen::MatrixXcd& rho, const std::vector<Index>& dims,
                                Index slot);

// Q_i = p_i E_i (r_i - q_i). `qubit` is zero-based; addressing the engine weight throws.
double bath_heat_current(const Eigen::MatrixXcd& rho, const FridgeSpec& spec, int qubit);
double bath_heat_current(const Eigen::MatrixXcd& rho, const EngineSpec& spec, int subsystem);

// Net degenerate-pair transition rate: 2g Im<101|rho|010> (fridge),
// 2g Σ_n Im<10,n|rho|01,n+1> (engine).
double interaction_current(const Eigen::MatrixXcd& rho, const FridgeSpec& spec);
double interaction_current(const Eigen::MatrixXcd& rho, const EngineSpec& spec);

double weight_mean_level(const Eigen::MatrixXcd& rho, const EngineSpec& spec);
double weight_boundary_population(const Eigen::MatrixXcd& rho, const EngineSpec& spec);

// Least-squares slope of y(t) over sampled points.
double fitted_slope(const std::vector<double>& times, const std::vector<double>& values);

// W = E3 * slope of <n>(t) over [window_begin, window_end]. Throws when fewer
// than two samples fall inside the window or when the boundary-level population
// exceeds 1e-3 anywhere in it (truncation contamination).
double work_current(const Trajectory& trajectory, const EngineSpec& spec,
                    double window_begin, double window_end);

// Full report at a solved fridge steady state. Extraction uses the deviation
// part directly, so small currents are not drowned by population round-off.
CurrentsReport fridge_report(const FridgeSpec& spec, const FridgeSteadyState& steady);
CurrentsReport fridge_report_from_state(const FridgeSpec& spec, const Eigen::MatrixXcd& rho);

// COP Q3/Q1 or efficiency W/Q1; throws below the 1e-14 stall floor on |Q1|.
double performance(const CurrentsReport& report);

} // namespace qtm
