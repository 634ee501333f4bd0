#include "qtm/observables.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qtm/errors.hpp"

namespace qtm {

namespace {

constexpr double kOffDiagonalTolerance = 1e-8;
constexpr double kStallFloor = 1e-14;
constexpr double kBoundaryLimit = 1e-3;

EffectiveTemperature effective_temperature_from_populations(double q0, double q1,
                                                            double energy) {
    EffectiveTemperature out;
    if (q1 <= 0.0) {
        out.flag = ThermalFlag::zero;
        out.value = 0.0;
        return out;
    }
    if (q0 == q1) {
        out.flag = ThermalFlag::infinite;
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    out.value = energy / std::log(q0 / q1);
    out.flag = (q1 > q0) ? ThermalFlag::inversion : ThermalFlag::thermal;
    return out;
}

} // namespace

EffectiveTemperature effective_temperature(const Eigen::Matrix2cd& reduced, double energy) {
    if (!(energy > 0)) throw std::invalid_argument("requires energy gap E > 0");
    const double off = std::max(std::abs(reduced(0, 1)), std::abs(reduced(1, 0)));
    if (off > kOffDiagonalTolerance)
        return {0.0, ThermalFlag::nonthermal};
    return effective_temperature_from_populations(reduced(0, 0).real(), reduced(1, 1).real(),
                                                  energy);
}

double qubit_excited_population(const Eigen::MatrixXcd& rho, const std::vector<Index>& dims,
                                Index slot) {
    return partial_trace_keep(rho, dims, slot)(1, 1).real();
}

double bath_heat_current(const Eigen::MatrixXcd& rho, const FridgeSpec& spec, int qubit) {
    if (qubit < 0 || qubit > 2) throw std::invalid_argument("fridge qubit index must be 0..2");
    const QubitSpec* qubits[3] = {&spec.qubit1, &spec.qubit2, &spec.qubit3};
    const QubitSpec& q = *qubits[qubit];
    const double thermal = thermal_excited_population(q.energy, q.temperature);
    const double actual = qubit_excited_population(rho, spec.dims(), qubit);
    return q.reset_rate * q.energy * (thermal - actual);
}

double bath_heat_current(const Eigen::MatrixXcd& rho, const EngineSpec& spec, int subsystem) {
    if (subsystem == 2)
        throw std::invalid_argument("the weight has no bath; no heat current is defined for it");
    if (subsystem < 0 || subsystem > 1)
        throw std::invalid_argument("engine subsystem index must be 0 or 1");
    const QubitSpec& q = (subsystem == 0) ? spec.qubit1 : spec.qubit2;
    const double thermal = thermal_excited_population(q.energy, q.temperature);
    const double actual = qubit_excited_population(rho, spec.dims(), subsystem);
    return q.reset_rate * q.energy * (thermal - actual);
}

double interaction_current(const Eigen::MatrixXcd& rho, const FridgeSpec& spec) {
    // J > 0 : net |101> -> |010| flow, the direction that cools qubit 3.
    return 2.0 * spec.coupling * rho(kIndex101, kIndex010).imag();
}

double interaction_current(const Eigen::MatrixXcd& rho, const EngineSpec& spec) {
    // J > 0 : net |10,n> -> |01,n+1> flow, the direction that lifts the weight.
    const Index N = spec.ladder_levels;
    double sum = 0.0;
    for (Index n = 0; n + 1 < N; ++n)
        sum += rho(engine_index(1, 0, n, N), engine_index(0, 1, n + 1, N)).imag();
    return 2.0 * spec.coupling * sum;
}

double weight_mean_level(const Eigen::MatrixXcd& rho, const EngineSpec& spec) {
    const Eigen::MatrixXcd weight = partial_trace_keep(rho, spec.dims(), 2);
    double mean = 0.0;
    for (Index n = 0; n < spec.ladder_levels; ++n)
        mean += static_cast<double>(n) * weight(n, n).real();
    return mean;
}

double weight_boundary_population(const Eigen::MatrixXcd& rho, const EngineSpec& spec) {
    const Eigen::MatrixXcd weight = partial_trace_keep(rho, spec.dims(), 2);
    return weight(0, 0).real() + weight(spec.ladder_levels - 1, spec.ladder_levels - 1).real();
}

double fitted_slope(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size() || times.size() < 2)
        throw std::invalid_argument("slope fit needs at least two samples");
    const double n = static_cast<double>(times.size());
    double tbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        tbar += times[i];
        ybar += values[i];
    }
    tbar /= n;
    ybar /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        num += (times[i] - tbar) * (values[i] - ybar);
        den += (times[i] - tbar) * (times[i] - tbar);
    }
    if (den == 0.0) throw std::invalid_argument("slope fit needs distinct sample times");
    return num / den;
}

double work_current(const Trajectory& trajectory, const EngineSpec& spec,
                    double window_begin, double window_end) {
    if (!(window_begin < window_end))
        throw std::invalid_argument("requires window_begin < window_end");
    std::vector<double> times;
    std::vector<double> levels;
    for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
        const double t = trajectory.times[i];
        if (t < window_begin || t > window_end) continue;
        const double boundary = weight_boundary_population(trajectory.states[i], spec);
        if (boundary >= kBoundaryLimit) {
            std::ostringstream msg;
            msg << "truncation contaminated: boundary-level population " << boundary
                << " at t = " << t << "; increase the ladder size N or shorten the horizon";
            throw NumericalError(msg.str());
        }
        times.push_back(t);
        levels.push_back(weight_mean_level(trajectory.states[i], spec));
    }
    if (times.size() < 2)
        throw std::invalid_argument("measurement window contains fewer than two samples");
    return spec.ladder_step * fitted_slope(times, levels);
}

CurrentsReport fridge_report(const FridgeSpec& spec, const FridgeSteadyState& steady) {
    CurrentsReport report;
    report.kind = MachineKind::fridge;
    const auto dims = spec.dims();
    const QubitSpec* qubits[3] = {&spec.qubit1, &spec.qubit2, &spec.qubit3};
    for (Index i = 0; i < 3; ++i) {
        // delta_q = r - q read off the traceless deviation, free of the r - q cancellation
        report.delta_q[i] = -partial_trace_keep(steady.deviation, dims, i)(1, 1).real();
        report.bath_current[i] =
            qubits[i]->reset_rate * qubits[i]->energy * report.delta_q[i];
        const Eigen::Matrix2cd reduced = partial_trace_keep(steady.rho, dims, i);
        report.effective_temp[i] = effective_temperature(reduced, qubits[i]->energy);
    }
    report.interaction_current = interaction_current(steady.deviation, spec);
    report.cop_or_eff = report.bath_current[2] / report.bath_current[0];
    return report;
}

CurrentsReport fridge_report_from_state(const FridgeSpec& spec, const Eigen::MatrixXcd& rho) {
    CurrentsReport report;
    report.kind = MachineKind::fridge;
    const auto dims = spec.dims();
    const QubitSpec* qubits[3] = {&spec.qubit1, &spec.qubit2, &spec.qubit3};
    for (Index i = 0; i < 3; ++i) {
        report.bath_current[i] = bath_heat_current(rho, spec, static_cast<int>(i));
        report.delta_q[i] =
            report.bath_current[i] / (qubits[i]->reset_rate * qubits[i]->energy);
        const Eigen::Matrix2cd reduced = partial_trace_keep(rho, dims, i);
        report.effective_temp[i] = effective_temperature(reduced, qubits[i]->energy);
    }
    report.interaction_current = interaction_current(rho, spec);
    report.cop_or_eff = report.bath_current[2] / report.bath_current[0];
    return report;
}

double performance(const CurrentsReport& report) {
    const double q1 = report.bath_current[0];
    if (std::abs(q1) < kStallFloor)
        throw NumericalError("performance undefined: |Q1| below the stall floor 1e-14");
    return (report.kind == MachineKind::fridge) ? report.bath_current[2] / q1
                                                : report.work_current / q1;
}

} // namespace qtm
