// acceptance.cpp — end-to-end verification of every machine guarantee, one line each

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qtm/errors.hpp"
#include "qtm/io.hpp"
#include "qtm/state.hpp"

using namespace qtm;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool passed, const std::string& detail) {
    std::cout << (passed ? "PASS" : "FAIL") << " [" << criterion << "] " << name << ": "
              << detail << "\n";
    if (!passed) ++failures;
}

std::string fmt(double v) { return format_double(v); }

struct PanelData {
    std::vector<FridgeSpec> specs;
    std::vector<CurrentsReport> reports;
};

PanelData solve_identity_panel() {
    PanelData data;
    for (const FridgeSettings& s : fridge_identity_panel(42, 100)) {
        const FridgeSpec spec = s.build();
        data.specs.push_back(spec);
        data.reports.push_back(fridge_report(spec, solve_fridge_steady(spec)));
    }
    return data;
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

void criterion_1_ratio_identity(const PanelData& panel) {
    double worst = 0.0;
    for (std::size_t i = 0; i < panel.specs.size(); ++i) {
        const auto E = panel.specs[i].energies();
        const auto& r = panel.reports[i];
        worst = std::max(worst, spread({r.bath_current[0] / E[0], -r.bath_current[1] / E[1],
                                        r.bath_current[2] / E[2], r.interaction_current}));
    }
    std::ostringstream detail;
    detail << "worst pairwise spread of {Q1/E1, -Q2/E2, Q3/E3, J} over 100 specs = "
           << fmt(worst) << " (tolerance 1e-9)";
    report(1, "current ratio identity", worst <= 1e-9, detail.str());
}

void criterion_2_reset_shifts(const PanelData& panel) {
    double worst = 0.0;
    bool signs_ok = true;
    for (std::size_t i = 0; i < panel.specs.size(); ++i) {
        const auto p = panel.specs[i].reset_rates();
        const auto& dq = panel.reports[i].delta_q;
        worst = std::max(worst, spread({p[0] * dq[0], -p[1] * dq[1], p[2] * dq[2]}));
        if (panel.reports[i].bath_current[2] > 0)   // working members carry (+,-,+)
            signs_ok = signs_ok && dq[0] > 0 && dq[1] < 0 && dq[2] > 0;
        else if (panel.reports[i].bath_current[2] < 0)
            signs_ok = signs_ok && dq[0] < 0 && dq[1] > 0 && dq[2] < 0;
    }
    std::ostringstream detail;
    detail << "worst spread of |p_i dq_i| = " << fmt(worst)
           << " (tolerance 1e-9), alternating sign pattern "
           << (signs_ok ? "holds" : "violated");
    report(2, "reset-scaled population shifts", worst <= 1e-9 && signs_ok, detail.str());
}

void criterion_3_working_regime(const PanelData& panel) {
    bool signs_ok = true;
    int checked = 0;
    for (std::size_t i = 0; i < panel.specs.size(); ++i) {
        const auto E = panel.specs[i].energies();
        const auto T = panel.specs[i].temperatures();
        const double margin = E[1] / T[1] - E[0] / T[0] - E[2] / T[2];
        if (std::abs(margin) <= 1e-12 * (E[1] / T[1])) continue;
        ++checked;
        signs_ok = signs_ok && ((panel.reports[i].bath_current[2] > 0) == (margin > 0));
    }

    FridgeSettings base;
    base.E3 = 1.0;
    base.T = {10, 5, 4};
    base.p = {1e-3, 1e-3, 1e-3};
    base.g = 0.01;
    const double zero = locate_q3_zero(base, 0.1, 1.0, 1e-6);
    const double error = std::abs(zero - 0.5);

    std::ostringstream detail;
    detail << "sign(Q3) matched the margin on " << checked << " specs; E1 sweep zero at "
           << fmt(zero) << ", |error| = " << fmt(error) << " (tolerance 1e-6)";
    report(3, "working-regime law", signs_ok && error <= 1e-6, detail.str());
}

void criterion_4_carnot_fridge() {
    const CarnotCheck check = carnot_check_fridge(10, 5, 4, 1.0, 1e-3, {1e-3, 1e-3, 1e-3});
    const double gap = std::abs(check.limit_performance - check.carnot_performance);
    std::ostringstream detail;
    detail << "design COP " << fmt(check.limit_performance) << " vs Carnot "
           << fmt(check.carnot_performance) << " (|diff| = " << fmt(gap)
           << ", tolerance 1e-9 relative); max steady |Q| = " << fmt(check.current_at_point);
    report(4, "fridge stalls at the Carnot point", check.passed, detail.str());
}

void criterion_5_engine() {
    EngineRunConfig config;   // documented defaults: horizon 2500, window [800, 2500]
    bool passed = true;
    std::ostringstream detail;
    try {
        const EngineSpec working(1.0, 0.5, {10, 5}, {0.02, 0.02}, 0.02, 41, 20);
        const EngineRunResult run = run_engine(working, config);
        const auto& r = run.report;
        const double lift = r.work_current / working.ladder_step;
        const double dev1 = std::abs(r.bath_current[0] / working.qubit1.energy / lift - 1.0);
        const double dev2 = std::abs(-r.bath_current[1] / working.qubit2.energy / lift - 1.0);
        const double eta_dev = std::abs(r.cop_or_eff * 3.0 - 1.0);
        passed = passed && dev1 <= 0.02 && dev2 <= 0.02 && eta_dev <= 0.02 && lift > 0;

        const EngineSpec stalled(1.0, 1.0, {10, 5}, {0.02, 0.02}, 0.02, 41, 20);
        const EngineRunResult stall = run_engine(stalled, config);
        const double floor = 1e-12 * stalled.ladder_step * 0.02;
        const double stall_w = std::abs(stall.report.work_current);
        passed = passed && stall_w <= floor;

        detail << "eta = " << fmt(r.cop_or_eff) << " vs 1/3 (rel dev " << fmt(eta_dev)
               << "); ratio devs " << fmt(dev1) << ", " << fmt(dev2)
               << " (tolerance 0.02); stalled |W| = " << fmt(stall_w) << " (floor "
               << fmt(floor) << ")";
    } catch (const std::exception& err) {
        passed = false;
        detail << err.what();
    }
    report(5, "engine efficiency and stall", passed, detail.str());
}

void criterion_6_oracle() {
    double worst = 0.0, limit_worst = 0.0;
    bool passed = true;
    std::ostringstream detail;
    try {
        for (const FridgeSettings& s : fridge_oracle_panel(42, 10)) {
            const OracleReport r = oracle_crosscheck(s.build());
            worst = std::max(worst, r.distance);
        }
        for (const FridgeSettings& s : {vanishing_coupling_case(), equal_temperature_case()}) {
            const OracleReport r = oracle_crosscheck(s.build());
            limit_worst = std::max(limit_worst, r.distance);
        }
        passed = worst <= 1e-5 && limit_worst <= 1e-10;
        detail << "panel worst trace distance " << fmt(worst)
               << " (tolerance 1e-5); analytic limits " << fmt(limit_worst)
               << " (tolerance 1e-10)";
    } catch (const std::exception& err) {
        passed = false;
        detail << err.what();
    }
    report(6, "steady-state vs long-time integration", passed, detail.str());
}

void criterion_7_dynamics() {
    // closed-form relaxation
    const Eigen::Matrix2cd tau = thermal_qubit_state(1.0, 2.0);
    const double rate = 1.0;
    const Superoperator reset = reset_dissipator(0, tau, rate, {2});
    Eigen::MatrixXcd excited = Eigen::MatrixXcd::Zero(2, 2);
    excited(1, 1) = 1.0;
    const Trajectory relax = evolve(reset, excited, 5.0, 1e-3, 1 << 30);
    const double r = tau(1, 1).real();
    const double closed_form_err =
        std::abs(relax.states.back()(1, 1).real() - (r + (1 - r) * std::exp(-5.0)));

    // conservation and contractivity along a fridge trajectory
    FridgeSettings s;
    s.p = {0.05, 0.05, 0.05};
    s.g = 0.01;
    const FridgeSpec spec = s.build();
    const Superoperator sop = assemble_fridge_liouvillian(spec);
    const SteadyStateResult steady = steady_state(sop);
    const double dt = 0.08 / spectral_norm(sop);
    double worst_trace = 0.0, worst_herm = 0.0, worst_eig = 0.0, worst_increase = 0.0;
    double previous = -1.0;
    evolve_observed(sop, thermal_product_state(spec), 150.0, dt, 25,
                    [&](double, const Eigen::MatrixXcd& rho) {
                        worst_trace = std::max(worst_trace, std::abs(rho.trace() - 1.0));
                        worst_herm = std::max(worst_herm, hermiticity_error(rho));
                        worst_eig = std::min(worst_eig, min_eigenvalue(hermitized(rho)));
                        const double d = trace_distance(rho, steady.rho);
                        if (previous >= 0.0) worst_increase = std::max(worst_increase, d - previous);
                        previous = d;
                    });

    const bool passed = closed_form_err <= 1e-9 && worst_trace <= 1e-8 && worst_herm <= 1e-8 &&
                        worst_eig >= -1e-7 && worst_increase <= 1e-9;
    std::ostringstream detail;
    detail << "closed-form error " << fmt(closed_form_err) << " (tolerance 1e-9); trace drift "
           << fmt(worst_trace) << ", hermiticity " << fmt(worst_herm) << ", min eigenvalue "
           << fmt(worst_eig) << "; largest distance increase " << fmt(worst_increase)
           << " (slack 1e-9)";
    report(7, "dynamics sanity", passed, detail.str());
}

void criterion_8_effective_temperatures(const PanelData& panel) {
    int working = 0;
    bool ordered = true;
    for (std::size_t i = 0; i < panel.specs.size(); ++i) {
        const auto E = panel.specs[i].energies();
        const auto T = panel.specs[i].temperatures();
        const double margin = E[1] / T[1] - E[0] / T[0] - E[2] / T[2];
        if (margin <= 1e-9 * (E[1] / T[1])) continue;
        ++working;
        const auto& eff = panel.reports[i].effective_temp;
        for (int k = 0; k < 3; ++k) ordered = ordered && eff[k].flag == ThermalFlag::thermal;
        ordered = ordered && eff[0].value < T[0] && eff[1].value > T[1] && eff[2].value < T[2];
    }
    std::ostringstream detail;
    detail << working << " working-regime members: qubit 3 below its bath, qubit 2 above, "
           << "qubit 1 below " << (ordered ? "(all hold)" : "(violated)");
    report(8, "steady-state temperature ordering", working > 0 && ordered, detail.str());
}

bool files_identical(const std::string& a, const std::string& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    return fa.good() && fb.good() && sa.str() == sb.str() && !sa.str().empty();
}

void criterion_9_determinism() {
    const std::string self_a = "qtm_acceptance_selftest_a.json";
    const std::string self_b = "qtm_acceptance_selftest_b.json";
    emit(to_json(run_selftest(42)), self_a);
    emit(to_json(run_selftest(42)), self_b);
    const bool selftest_ok = files_identical(self_a, self_b);

    FridgeSettings base;
    base.p = {1e-3, 1e-3, 1e-3};
    base.g = 0.01;
    std::vector<double> grid;
    for (int i = 0; i < 10; ++i) grid.push_back(0.55 + 0.05 * i);
    const std::string sweep_a = "qtm_acceptance_sweep_a.csv";
    const std::string sweep_b = "qtm_acceptance_sweep_b.csv";
    emit_csv(sweep_fridge(base, "E1", grid), sweep_a);
    emit_csv(sweep_fridge(base, "E1", grid), sweep_b);
    const bool sweep_ok = files_identical(sweep_a, sweep_b);

    for (const std::string& f : {self_a, self_b, sweep_a, sweep_b}) std::remove(f.c_str());

    std::ostringstream detail;
    detail << "selftest reports byte-identical: " << (selftest_ok ? "yes" : "no")
           << "; sweep CSVs byte-identical: " << (sweep_ok ? "yes" : "no");
    report(9, "determinism", selftest_ok && sweep_ok, detail.str());
}

} // namespace

int main() {
    std::cout << "qtm acceptance suite\n";
    const PanelData panel = solve_identity_panel();
    criterion_1_ratio_identity(panel);
    criterion_2_reset_shifts(panel);
    criterion_3_working_regime(panel);
    criterion_4_carnot_fridge();
    criterion_5_engine();
    criterion_6_oracle();
    criterion_7_dynamics();
    criterion_8_effective_temperatures(panel);
    criterion_9_determinism();
    std::cout << (failures == 0 ? "ACCEPTANCE: all criteria passed\n"
                                : "ACCEPTANCE: " + std::to_string(failures) +
                                      " criterion(s) failed\n");
    return failures == 0 ? 0 : 1;
}
