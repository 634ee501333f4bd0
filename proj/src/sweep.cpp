#include "qtm/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qtm/errors.hpp"

namespace qtm {

namespace {

constexpr double kCarnotRelTolerance = 1e-9;
constexpr double kStallScaleTolerance = 1e-12;
constexpr double kEngineRatioTolerance = 0.02;

void require_ordered(double T1, double T2, double T3) {
    if (!(T1 > T2 && T2 > T3 && T3 > 0))
        throw std::invalid_argument("requires T1 > T2 > T3 > 0");
}

} // namespace

FridgeSettings FridgeSettings::with(const std::string& param, double value) const {
    FridgeSettings out = *this;
    if (param == "E1") out.E1 = value;
    else if (param == "E3") out.E3 = value;
    else if (param == "g") out.g = value;
    else if (param == "T1") out.T[0] = value;
    else if (param == "T2") out.T[1] = value;
    else if (param == "T3") out.T[2] = value;
    else if (param == "p1") out.p[0] = value;
    else if (param == "p2") out.p[1] = value;
    else if (param == "p3") out.p[2] = value;
    else throw std::invalid_argument("unknown sweep axis: " + param);
    return out;
}

SweepTable sweep_fridge(const FridgeSettings& base, const std::string& axis,
                        const std::vector<double>& grid) {
    bool known_axis = false;
    for (const std::string& name : fridge_sweep_axes()) known_axis = known_axis || name == axis;
    if (!known_axis) throw std::invalid_argument("unknown sweep axis: " + axis);
    SweepTable table;
    table.axis = axis;
    table.grid = grid;
    table.rows.reserve(grid.size());
    for (double value : grid) {
        SweepRow row;
        row.param = value;
        try {
            const FridgeSpec spec = base.with(axis, value).build();
            row.report = fridge_report(spec, solve_fridge_steady(spec));
        } catch (const std::exception& err) {
            row.report.reset();
            row.status = err.what();
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

double reversibility_point_fridge(double T1, double T2, double T3, double E3) {
    require_ordered(T1, T2, T3);
    if (!(E3 > 0)) throw std::invalid_argument("requires E3 > 0");
    return E3 * (1.0 / T2 - 1.0 / T3) / (1.0 / T1 - 1.0 / T2);
}

double carnot_cop(double T1, double T2, double T3) {
    require_ordered(T1, T2, T3);
    return T3 * (T1 - T2) / (T1 * (T2 - T3));
}

double carnot_efficiency_engine(double T1, double T2) {
    if (!(T1 > T2 && T2 > 0)) throw std::invalid_argument("requires T1 > T2 > 0");
    return 1.0 - T2 / T1;
}

namespace {

double q3_at(const FridgeSettings& base, double e1) {
    const FridgeSpec spec = base.with("E1", e1).build();
    return fridge_report(spec, solve_fridge_steady(spec)).bath_current[2];
}

} // namespace

double locate_q3_zero(const FridgeSettings& base, double e1_low, double e1_high, double tol) {
    if (!(e1_low < e1_high)) throw std::invalid_argument("requires e1_low < e1_high");
    double f_low = q3_at(base, e1_low);
    double f_high = q3_at(base, e1_high);
    if (f_low == 0.0) return e1_low;
    if (f_high == 0.0) return e1_high;
    if ((f_low > 0) == (f_high > 0))
        throw std::invalid_argument("Q3 does not change sign over the bracket");
    double lo = e1_low, hi = e1_high;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = q3_at(base, mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0) == (f_low > 0)) {
            lo = mid;
            f_low = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

CarnotCheck carnot_check_fridge(double T1, double T2, double T3, double E3, double g,
                                const std::array<double, 3>& p) {
    CarnotCheck check;
    check.reversibility_value = reversibility_point_fridge(T1, T2, T3, E3);
    check.limit_performance = E3 / check.reversibility_value;
    check.carnot_performance = carnot_cop(T1, T2, T3);

    const FridgeSpec spec(check.reversibility_value, E3, {T1, T2, T3}, p, g);
    const CurrentsReport report = fridge_report(spec, solve_fridge_steady(spec));
    double current_scale = 0.0;
    for (int i = 0; i < 3; ++i) {
        const std::array<double, 3> E = spec.energies();
        current_scale = std::max(current_scale, spec.reset_rates()[i] * E[i]);
        check.current_at_point = std::max(check.current_at_point,
                                          std::abs(report.bath_current[i]));
    }

    std::ostringstream detail;
    const double cop_gap = std::abs(check.limit_performance - check.carnot_performance);
    if (cop_gap > kCarnotRelTolerance * std::abs(check.carnot_performance))
        detail << "design COP differs from the Carnot COP by " << cop_gap << "; ";
    if (check.current_at_point > kStallScaleTolerance * current_scale)
        detail << "currents do not vanish at reversibility: max |Q| = "
               << check.current_at_point << " vs scale " << current_scale << "; ";
    check.detail = detail.str();
    check.passed = check.detail.empty();
    return check;
}

EngineRunResult run_engine(const EngineSpec& spec, const EngineRunConfig& config) {
    const EngineFrameGenerator gen = make_engine_frame_generator(spec);
    const double horizon = config.horizon;
    if (!(horizon > 0)) throw std::invalid_argument("requires horizon > 0");
    const double window_end = (config.window_end > 0) ? config.window_end : horizon;
    const double window_begin = config.window_begin;
    if (!(window_begin >= 0 && window_begin < window_end && window_end <= horizon))
        throw std::invalid_argument("requires 0 <= window_begin < window_end <= horizon");

    const double bound = gen.norm_bound();
    double dt = config.dt;
    if (dt <= 0)
        dt = std::min(0.05 / bound, 0.05 / std::max(spec.max_reset_rate(), spec.coupling));
    const Index total_steps = static_cast<Index>(std::ceil(horizon / dt));
    Index stride = config.sample_stride;
    if (stride <= 0) stride = std::max<Index>(1, total_steps / 400);

    const double r1 = thermal_excited_population(spec.qubit1.energy, spec.qubit1.temperature);
    const double r2 = thermal_excited_population(spec.qubit2.energy, spec.qubit2.temperature);

    std::vector<double> times, levels, q1s, q2s, currents;
    double boundary_peak = 0.0;
    bool boundary_violated = false;
    double boundary_value = 0.0, boundary_time = 0.0;
    const auto dims = spec.dims();

    evolve_observed(gen, engine_initial_state(spec), horizon, dt, stride,
                    [&](double t, const Eigen::MatrixXcd& rho) {
                        if (t < window_begin || t > window_end) return;
                        const double boundary = weight_boundary_population(rho, spec);
                        boundary_peak = std::max(boundary_peak, boundary);
                        if (boundary >= 1e-3 && !boundary_violated) {
                            boundary_violated = true;
                            boundary_value = boundary;
                            boundary_time = t;
                        }
                        times.push_back(t);
                        levels.push_back(weight_mean_level(rho, spec));
                        q1s.push_back(qubit_excited_population(rho, dims, 0));
                        q2s.push_back(qubit_excited_population(rho, dims, 1));
                        currents.push_back(interaction_current(rho, spec));
                    });

    if (boundary_violated) {
        std::ostringstream msg;
        msg << "truncation contaminated: boundary-level population " << boundary_value
            << " at t = " << boundary_time
            << "; increase the ladder size N or shorten the horizon";
        throw NumericalError(msg.str());
    }
    if (times.size() < 2)
        throw NumericalError("measurement window produced fewer than two samples");

    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };

    EngineRunResult result;
    result.dt = dt;
    result.steps = total_steps;
    result.boundary_peak = boundary_peak;
    result.mean_level_drift = levels.back() - static_cast<double>(spec.initial_level);

    CurrentsReport& report = result.report;
    report.kind = MachineKind::engine;
    const double q1bar = mean(q1s);
    const double q2bar = mean(q2s);
    report.delta_q[0] = r1 - q1bar;
    report.delta_q[1] = r2 - q2bar;
    report.bath_current[0] = spec.qubit1.reset_rate * spec.qubit1.energy * report.delta_q[0];
    report.bath_current[1] = spec.qubit2.reset_rate * spec.qubit2.energy * report.delta_q[1];
    report.work_current = spec.ladder_step * fitted_slope(times, levels);
    report.interaction_current = mean(currents);
    Eigen::Matrix2cd red1 = Eigen::Matrix2cd::Zero();
    red1(0, 0) = 1.0 - q1bar;
    red1(1, 1) = q1bar;
    Eigen::Matrix2cd red2 = Eigen::Matrix2cd::Zero();
    red2(0, 0) = 1.0 - q2bar;
    red2(1, 1) = q2bar;
    report.effective_temp[0] = effective_temperature(red1, spec.qubit1.energy);
    report.effective_temp[1] = effective_temperature(red2, spec.qubit2.energy);
    report.cop_or_eff = (report.bath_current[0] != 0.0)
                            ? report.work_current / report.bath_current[0]
                            : 0.0;
    return result;
}

EngineCarnotResult carnot_check_engine(double T1, double T2, double E2,
                                       const std::vector<double>& e3_grid,
                                       double g, const std::array<double, 2>& p,
                                       Index ladder_levels, Index initial_level,
                                       const EngineRunConfig& config) {
    if (!(T1 > T2 && T2 > 0)) throw std::invalid_argument("requires T1 > T2 > 0");
    if (!(E2 > 0)) throw std::invalid_argument("requires E2 > 0");

    EngineCarnotResult result;
    CarnotCheck& check = result.check;
    const double e3_star = E2 * (T1 / T2 - 1.0);
    check.reversibility_value = e3_star;
    check.limit_performance = e3_star / (E2 + e3_star);
    check.carnot_performance = carnot_efficiency_engine(T1, T2);

    std::ostringstream detail;
    result.table.axis = "E3";
    result.table.grid = e3_grid;
    for (double e3 : e3_grid) {
        SweepRow row;
        row.param = e3;
        try {
            if (!(e3 < e3_star))
                throw std::invalid_argument(
                    "grid point outside the working regime (requires E3 < E3*)");
            const EngineSpec spec(E2, e3, {T1, T2}, p, g, ladder_levels, initial_level);
            const EngineRunResult run = run_engine(spec, config);
            row.report = run.report;
            const double design = e3 / (E2 + e3);
            const double eta = run.report.cop_or_eff;
            if (std::abs(eta - design) > kEngineRatioTolerance * design) {
                std::ostringstream why;
                why << "efficiency " << eta << " off the design value " << design
                    << " beyond 2%";
                row.status = why.str();
                detail << "E3 = " << e3 << ": " << why.str() << "; ";
            }
        } catch (const std::exception& err) {
            row.report.reset();
            row.status = err.what();
            detail << "E3 = " << e3 << ": " << err.what() << "; ";
        }
        result.table.rows.push_back(std::move(row));
    }

    // Stalled run exactly at the reversibility step; |W| must sit below the
    // noise floor rather than satisfy a 0/0 efficiency ratio.
    const EngineSpec stall_spec(E2, e3_star, {T1, T2}, p, g, ladder_levels, initial_level);
    const EngineRunResult stall = run_engine(stall_spec, config);
    check.current_at_point = std::abs(stall.report.work_current);
    const double floor =
        1e-12 * e3_star * std::max(stall_spec.qubit1.reset_rate, stall_spec.qubit2.reset_rate);
    if (check.current_at_point > floor)
        detail << "stalled engine still measures |W| = " << check.current_at_point
               << " above the floor " << floor << "; ";
    const double carnot_gap = std::abs(check.limit_performance - check.carnot_performance);
    if (carnot_gap > kCarnotRelTolerance * check.carnot_performance)
        detail << "design efficiency differs from Carnot by " << carnot_gap << "; ";

    check.detail = detail.str();
    check.passed = check.detail.empty();
    return result;
}

} // namespace qtm
