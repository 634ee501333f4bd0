#include "qtm/panels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qtm/errors.hpp"
#include "qtm/state.hpp"

namespace qtm {

std::uint64_t SpecSampler::next() {
    // splitmix64; stable across platforms and standard libraries
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SpecSampler::uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

double SpecSampler::log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
}

std::vector<FridgeSettings> fridge_identity_panel(std::uint64_t seed, int count) {
    SpecSampler sampler(seed);
    std::vector<FridgeSettings> panel;
    panel.reserve(count);
    for (int i = 0; i < count; ++i) {
        FridgeSettings s;
        s.E1 = sampler.log_uniform(0.2, 2.0);
        s.E3 = sampler.log_uniform(0.2, 2.0);
        s.T[2] = sampler.uniform(0.5, 4.0);
        s.T[1] = s.T[2] * sampler.uniform(1.25, 3.0);
        s.T[0] = s.T[1] * sampler.uniform(1.25, 3.0);
        for (int k = 0; k < 3; ++k) s.p[k] = sampler.log_uniform(1e-4, 1e-1);
        s.g = sampler.log_uniform(1e-4, 0.1 * std::min(s.E1, s.E3));
        panel.push_back(s);
    }
    return panel;
}

std::vector<FridgeSettings> fridge_oracle_panel(std::uint64_t seed, int count) {
    SpecSampler sampler(seed ^ 0x6f72636cULL);
    std::vector<FridgeSettings> panel;
    panel.reserve(count);
    for (int i = 0; i < count; ++i) {
        FridgeSettings s;
        s.E1 = sampler.log_uniform(0.3, 1.2);
        s.E3 = sampler.log_uniform(0.3, 1.2);
        s.T[2] = sampler.uniform(0.5, 4.0);
        s.T[1] = s.T[2] * sampler.uniform(1.25, 3.0);
        s.T[0] = s.T[1] * sampler.uniform(1.25, 3.0);
        for (int k = 0; k < 3; ++k) s.p[k] = sampler.log_uniform(0.05, 0.15);
        s.g = sampler.log_uniform(1e-3, 0.05);
        panel.push_back(s);
    }
    return panel;
}

FridgeSettings vanishing_coupling_case() {
    FridgeSettings s;
    s.E1 = 1.0;
    s.E3 = 1.0;
    s.T = {10.0, 5.0, 4.0};
    s.p = {0.05, 0.05, 0.05};
    s.g = 1e-15;   // constructible stand-in for the g -> 0 limit
    return s;
}

FridgeSettings equal_temperature_case() {
    FridgeSettings s;
    s.E1 = 1.0;
    s.E3 = 1.0;
    // strictly ordered within 1e-13 relative; the equilibrium bias this leaves
    // is far below the 1e-10 distance budget
    s.T = {5.0 * (1.0 + 2e-13), 5.0 * (1.0 + 1e-13), 5.0};
    s.p = {0.05, 0.05, 0.05};
    s.g = 0.01;
    return s;
}

namespace {

struct PanelPoint {
    FridgeSpec spec;
    CurrentsReport report;
};

std::vector<PanelPoint> solve_panel(const std::vector<FridgeSettings>& settings) {
    std::vector<PanelPoint> points;
    points.reserve(settings.size());
    for (const FridgeSettings& s : settings) {
        const FridgeSpec spec = s.build();
        points.push_back({spec, fridge_report(spec, solve_fridge_steady(spec))});
    }
    return points;
}

double spread(const std::vector<double>& values) {
    double lo = values[0], hi = values[0], mag = 0.0;
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        mag = std::max(mag, std::abs(v));
    }
    return (mag == 0.0) ? 0.0 : (hi - lo) / mag;
}

std::string format_count(int n, int total) {
    std::ostringstream os;
    os << n << " of " << total << " specs";
    return os.str();
}

SuiteResult ratio_identity_suite(const std::vector<PanelPoint>& panel) {
    SuiteResult result{"ratio-identity", true, 0.0, 1e-9, ""};
    for (const PanelPoint& pt : panel) {
        const auto E = pt.spec.energies();
        const auto& Q = pt.report.bath_current;
        result.worst = std::max(result.worst,
                                spread({Q[0] / E[0], -Q[1] / E[1], Q[2] / E[2],
                                        pt.report.interaction_current}));
    }
    result.passed = result.worst <= result.tolerance;
    result.detail = format_count(static_cast<int>(panel.size()), static_cast<int>(panel.size()));
    return result;
}

SuiteResult reset_shift_suite(const std::vector<PanelPoint>& panel) {
    SuiteResult result{"reset-scaled-shifts", true, 0.0, 1e-9, ""};
    for (const PanelPoint& pt : panel) {
        const auto p = pt.spec.reset_rates();
        const auto& dq = pt.report.delta_q;
        result.worst = std::max(result.worst,
                                spread({p[0] * dq[0], -p[1] * dq[1], p[2] * dq[2]}));
        const double scale = std::max({std::abs(dq[0]), std::abs(dq[1]), std::abs(dq[2])});
        if (scale > 1e-20) {
            const bool opposite = (dq[1] > 0) != (dq[0] > 0) && (dq[0] > 0) == (dq[2] > 0);
            if (!opposite) {
                result.passed = false;
                result.detail = "delta_q2 does not carry the opposite sense";
            }
        }
    }
    result.passed = result.passed && result.worst <= result.tolerance;
    return result;
}

SuiteResult conservation_suite(const std::vector<PanelPoint>& panel) {
    SuiteResult result{"energy-conservation", true, 0.0, 1e-10, ""};
    for (const PanelPoint& pt : panel) {
        const auto& Q = pt.report.bath_current;
        const double scale = std::max({std::abs(Q[0]), std::abs(Q[1]), std::abs(Q[2])});
        if (scale == 0.0) continue;
        result.worst = std::max(result.worst, std::abs(Q[0] + Q[1] + Q[2]) / scale);
    }
    result.passed = result.worst <= result.tolerance;
    return result;
}

double working_margin(const FridgeSpec& spec) {
    const auto E = spec.energies();
    const auto T = spec.temperatures();
    return E[1] / T[1] - E[0] / T[0] - E[2] / T[2];
}

SuiteResult sign_law_suite(const std::vector<PanelPoint>& panel) {
    SuiteResult result{"working-regime-sign", true, 0.0, 0.0, ""};
    int checked = 0;
    for (const PanelPoint& pt : panel) {
        const double margin = working_margin(pt.spec);
        const double scale = pt.spec.qubit2.energy / pt.spec.qubit2.temperature;
        if (std::abs(margin) <= 1e-12 * scale) continue;   // numerically on the boundary
        ++checked;
        if ((pt.report.bath_current[2] > 0) != (margin > 0)) {
            result.passed = false;
            std::ostringstream os;
            os << "sign(Q3) disagrees with the working-regime margin " << margin;
            result.detail = os.str();
        }
    }
    if (result.detail.empty()) result.detail = format_count(checked, static_cast<int>(panel.size()));
    return result;
}

SuiteResult boundary_bisection_suite() {
    SuiteResult result{"boundary-bisection", false, 0.0, 1e-6, ""};
    FridgeSettings base;
    base.E3 = 1.0;
    base.T = {10.0, 5.0, 4.0};
    base.p = {1e-3, 1e-3, 1e-3};
    base.g = 0.01;

    std::vector<double> grid;
    for (int i = 0; i < 10; ++i) grid.push_back(0.1 + 0.1 * i);
    const SweepTable table = sweep_fridge(base, "E1", grid);
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
        if (!table.rows[i].report || !table.rows[i + 1].report) continue;
        const double a = table.rows[i].report->bath_current[2];
        const double b = table.rows[i + 1].report->bath_current[2];
        if ((a > 0) != (b > 0)) {
            lo = table.rows[i].param;
            hi = table.rows[i + 1].param;
            break;
        }
    }
    if (hi == 0.0) {
        result.detail = "no sign change of Q3 found along the E1 sweep";
        return result;
    }
    const double zero = locate_q3_zero(base, lo, hi, 1e-6);
    result.worst = std::abs(zero - 0.5);
    result.passed = result.worst <= result.tolerance;
    std::ostringstream os;
    os << "zero located at E1 = " << zero;
    result.detail = os.str();
    return result;
}

SuiteResult cop_law_suite(const std::vector<PanelPoint>& panel) {
    SuiteResult result{"cop-law", true, 0.0, 1e-9, ""};
    int checked = 0;
    for (const PanelPoint& pt : panel) {
        const auto E = pt.spec.energies();
        const auto p = pt.spec.reset_rates();
        const double floor = 1e-16 * p[0] * E[0];
        if (std::abs(pt.report.bath_current[0]) <= floor) continue;
        ++checked;
        const double cop = pt.report.bath_current[2] / pt.report.bath_current[0];
        result.worst = std::max(result.worst, std::abs(cop * E[0] / E[2] - 1.0));
    }
    result.passed = result.worst <= result.tolerance;
    result.detail = format_count(checked, static_cast<int>(panel.size()));
    return result;
}

SuiteResult carnot_fridge_suite() {
    SuiteResult result{"carnot-fridge", true, 0.0, 1e-9, ""};
    const CarnotCheck first = carnot_check_fridge(10, 5, 4, 1.0, 1e-3, {1e-3, 1e-3, 1e-3});
    const CarnotCheck second = carnot_check_fridge(20, 10, 8, 1.0, 1e-3, {1e-3, 1e-3, 1e-3});
    result.worst = std::max(std::abs(first.limit_performance - first.carnot_performance),
                            std::abs(second.limit_performance - second.carnot_performance));
    result.passed = first.passed && second.passed;
    if (!result.passed) result.detail = first.detail + second.detail;
    else {
        std::ostringstream os;
        os << "design COPs " << first.limit_performance << ", " << second.limit_performance;
        result.detail = os.str();
    }
    return result;
}

SuiteResult effective_temperature_suite(const std::vector<PanelPoint>& panel) {
    SuiteResult result{"effective-temperature-ordering", true, 0.0, 0.0, ""};
    int working = 0;
    for (const PanelPoint& pt : panel) {
        const auto T = pt.spec.temperatures();
        const double scale = pt.spec.qubit2.energy / pt.spec.qubit2.temperature;
        if (working_margin(pt.spec) <= 1e-9 * scale) continue;
        ++working;
        const auto& eff = pt.report.effective_temp;
        bool ok = true;
        for (int i = 0; i < 3; ++i) ok = ok && eff[i].flag == ThermalFlag::thermal;
        ok = ok && eff[0].value < T[0] && eff[1].value > T[1] && eff[2].value < T[2];
        if (!ok) {
            result.passed = false;
            result.detail = "a working-regime member violates the temperature ordering";
        }
    }
    if (working == 0) {
        result.passed = false;
        result.detail = "panel contains no working-regime members";
    }
    if (result.detail.empty())
        result.detail = format_count(working, static_cast<int>(panel.size())) + " in the working regime";
    return result;
}

SuiteResult oracle_suite(std::uint64_t seed) {
    SuiteResult result{"oracle-crosscheck", true, 0.0, 1e-5, ""};
    double limit_worst = 0.0;
    try {
        for (const FridgeSettings& s : fridge_oracle_panel(seed, 10)) {
            const OracleReport report = oracle_crosscheck(s.build());
            result.worst = std::max(result.worst, report.distance);
        }
        for (const FridgeSettings& s : {vanishing_coupling_case(), equal_temperature_case()}) {
            const OracleReport report = oracle_crosscheck(s.build());
            limit_worst = std::max(limit_worst, report.distance);
        }
    } catch (const NumericalError& err) {
        result.passed = false;
        result.detail = err.what();
        return result;
    }
    result.passed = result.worst <= 1e-5 && limit_worst <= 1e-10;
    std::ostringstream os;
    os << "panel worst " << result.worst << ", analytic-limit worst " << limit_worst;
    result.detail = os.str();
    return result;
}

// Single qubit under a reset alone relaxes as r + (q0 - r) e^{-pt}.
double relaxation_error(double dt) {
    const double energy = 1.0, temperature = 2.0, rate = 1.0, t_final = 5.0;
    const Eigen::Matrix2cd tau = thermal_qubit_state(energy, temperature);
    const Superoperator sop = reset_dissipator(0, tau, rate, {2});
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(2, 2);
    rho0(1, 1) = 1.0;
    const Trajectory traj = evolve(sop, rho0, t_final, dt, 1 << 30);
    const double r = tau(1, 1).real();
    const double expected = r + (1.0 - r) * std::exp(-rate * t_final);
    return std::abs(traj.states.back()(1, 1).real() - expected);
}

SuiteResult rk4_closed_form_suite() {
    SuiteResult result{"rk4-closed-form", false, 0.0, 1e-9, ""};
    result.worst = relaxation_error(1e-3);
    result.passed = result.worst <= result.tolerance;
    return result;
}

SuiteResult rk4_order_suite() {
    SuiteResult result{"rk4-order", false, 0.0, 0.0, ""};
    const double coarse = relaxation_error(0.04);
    const double fine = relaxation_error(0.02);
    const double ratio = coarse / fine;
    result.worst = ratio;
    result.tolerance = 12.0;   // halving dt must shrink the error at least this much
    result.passed = ratio >= 12.0;
    std::ostringstream os;
    os << "error " << coarse << " -> " << fine;
    result.detail = os.str();
    return result;
}

SuiteResult contractivity_suite() {
    SuiteResult result{"contractivity", true, 0.0, 1e-9, ""};
    FridgeSettings s;
    s.p = {0.05, 0.05, 0.05};
    s.g = 0.01;
    const FridgeSpec spec = s.build();
    const Superoperator sop = assemble_fridge_liouvillian(spec);
    const SteadyStateResult steady = steady_state(sop);
    const double dt = 0.08 / spectral_norm(sop);
    std::vector<double> distances;
    evolve_observed(sop, thermal_product_state(spec), 150.0, dt, 25,
                    [&](double, const Eigen::MatrixXcd& rho) {
                        distances.push_back(trace_distance(rho, steady.rho));
                    });
    for (std::size_t i = 1; i < distances.size(); ++i)
        result.worst = std::max(result.worst, distances[i] - distances[i - 1]);
    result.passed = result.worst <= result.tolerance;
    std::ostringstream os;
    os << distances.size() << " samples, final distance " << distances.back();
    result.detail = os.str();
    return result;
}

SuiteResult trajectory_sanity_suite() {
    SuiteResult result{"trajectory-sanity", true, 0.0, 0.0, ""};
    FridgeSettings s;
    s.p = {0.05, 0.05, 0.05};
    s.g = 0.01;
    const FridgeSpec spec = s.build();
    const Superoperator sop = assemble_fridge_liouvillian(spec);
    const double dt = 0.08 / spectral_norm(sop);
    double worst_trace = 0.0, worst_herm = 0.0, worst_eig = 0.0;
    evolve_observed(sop, thermal_product_state(spec), 100.0, dt, 50,
                    [&](double, const Eigen::MatrixXcd& rho) {
                        worst_trace = std::max(worst_trace, std::abs(rho.trace() - 1.0));
                        worst_herm = std::max(worst_herm, hermiticity_error(rho));
                        worst_eig = std::min(worst_eig, min_eigenvalue(hermitized(rho)));
                    });
    result.passed = worst_trace <= 1e-8 && worst_herm <= 1e-8 && worst_eig >= -1e-7;
    std::ostringstream os;
    os << "trace " << worst_trace << ", hermiticity " << worst_herm << ", min eigenvalue "
       << worst_eig;
    result.detail = os.str();
    result.worst = worst_trace;
    return result;
}

SuiteResult engine_frame_suite() {
    SuiteResult result{"engine-frame-consistency", false, 0.0, 1e-7, ""};
    const EngineSpec spec(1.0, 0.5, {10.0, 5.0}, {0.2, 0.2}, 0.1, 5, 2);
    const Eigen::MatrixXcd rho0 = engine_initial_state(spec);
    const double t_final = 15.0, dt = 0.002;
    const Trajectory dense = evolve(assemble_engine_liouvillian(spec), rho0, t_final, dt, 1 << 30);
    const Trajectory frame =
        evolve(make_engine_frame_generator(spec), rho0, t_final, dt, 1 << 30);
    result.worst = (dense.states.back() - frame.states.back()).cwiseAbs().maxCoeff();
    result.passed = result.worst <= result.tolerance;
    return result;
}

SuiteResult engine_ratio_suite() {
    SuiteResult result{"engine-ratios", true, 0.0, 0.02, ""};
    EngineRunConfig config;
    config.horizon = 1200.0;
    config.window_begin = 400.0;
    const EngineSpec working(1.0, 0.5, {10.0, 5.0}, {0.02, 0.02}, 0.02, 41, 20);
    const EngineRunResult run = run_engine(working, config);
    const auto& r = run.report;
    const double lift_rate = r.work_current / working.ladder_step;
    const double dev1 = std::abs(r.bath_current[0] / working.qubit1.energy / lift_rate - 1.0);
    const double dev2 = std::abs(-r.bath_current[1] / working.qubit2.energy / lift_rate - 1.0);
    const double eta_dev =
        std::abs(r.cop_or_eff * working.qubit1.energy / working.ladder_step - 1.0);
    result.worst = std::max({dev1, dev2, eta_dev});

    const EngineSpec stalled(1.0, 1.0, {10.0, 5.0}, {0.02, 0.02}, 0.02, 41, 20);
    const EngineRunResult stall = run_engine(stalled, config);
    const double floor = 1e-12 * stalled.ladder_step * 0.02;
    result.passed = result.worst <= result.tolerance &&
                    std::abs(stall.report.work_current) <= floor;
    std::ostringstream os;
    os << "ratio deviation " << result.worst << ", stalled |W| = "
       << std::abs(stall.report.work_current);
    result.detail = os.str();
    return result;
}

SuiteResult generator_structure_suite(std::uint64_t seed) {
    SuiteResult result{"generator-structure", true, 0.0, 1e-10, ""};
    SpecSampler sampler(seed ^ 0x67656eULL);
    for (int i = 0; i < 10; ++i) {
        FridgeSettings s;
        s.E1 = sampler.log_uniform(0.2, 2.0);
        s.E3 = sampler.log_uniform(0.2, 2.0);
        s.T[2] = sampler.uniform(0.5, 4.0);
        s.T[1] = s.T[2] * sampler.uniform(1.25, 3.0);
        s.T[0] = s.T[1] * sampler.uniform(1.25, 3.0);
        for (int k = 0; k < 3; ++k) s.p[k] = sampler.log_uniform(1e-3, 1e-1);
        s.g = sampler.log_uniform(1e-4, 0.1 * std::min(s.E1, s.E3));
        const FridgeSpec spec = s.build();
        const Superoperator sop = assemble_fridge_liouvillian(spec);

        // trace preservation: vec(I)† L = 0 at the entry scale of L
        const double scale = sop.mat.cwiseAbs().maxCoeff();
        const double trace_violation =
            (trace_row(sop.dim) * sop.mat).cwiseAbs().maxCoeff() / scale;
        result.worst = std::max(result.worst, trace_violation);

        // Hermiticity preservation on a reproducible pseudo-random Hermitian input
        Eigen::MatrixXcd probe(sop.dim, sop.dim);
        for (Index r = 0; r < sop.dim; ++r)
            for (Index c = 0; c < sop.dim; ++c)
                probe(r, c) = std::complex<double>(sampler.uniform(-1, 1), sampler.uniform(-1, 1));
        probe = hermitized(probe);
        result.worst = std::max(result.worst, hermiticity_error(sop.apply(probe)));

        // the interaction only connects degenerate levels
        const Eigen::MatrixXcd h0 = fridge_free_hamiltonian(spec);
        const Eigen::MatrixXcd hint = fridge_interaction_hamiltonian(spec.coupling);
        const double comm_scale = spec.coupling * spec.qubit2.energy;
        result.worst = std::max(result.worst,
                                (h0 * hint - hint * h0).cwiseAbs().maxCoeff() / comm_scale);
    }
    result.passed = result.worst <= result.tolerance;
    return result;
}

} // namespace

SelftestReport run_selftest(std::uint64_t seed) {
    SelftestReport report;
    report.seed = seed;

    const std::vector<PanelPoint> panel = solve_panel(fridge_identity_panel(seed, 100));
    report.suites.push_back(ratio_identity_suite(panel));
    report.suites.push_back(reset_shift_suite(panel));
    report.suites.push_back(conservation_suite(panel));
    report.suites.push_back(sign_law_suite(panel));
    report.suites.push_back(boundary_bisection_suite());
    report.suites.push_back(cop_law_suite(panel));
    report.suites.push_back(carnot_fridge_suite());
    report.suites.push_back(effective_temperature_suite(panel));
    report.suites.push_back(generator_structure_suite(seed));
    report.suites.push_back(rk4_closed_form_suite());
    report.suites.push_back(rk4_order_suite());
    report.suites.push_back(contractivity_suite());
    report.suites.push_back(trajectory_sanity_suite());
    report.suites.push_back(oracle_suite(seed));
    report.suites.push_back(engine_frame_suite());
    report.suites.push_back(engine_ratio_suite());

    report.passed = true;
    for (const SuiteResult& suite : report.suites) report.passed = report.passed && suite.passed;
    return report;
}

} // namespace qtm
