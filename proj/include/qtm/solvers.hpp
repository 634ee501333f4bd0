// solvers.hpp — steady-state solves and fixed-step RK4 time evolution
//
// The two paths (null-space solve, long-time integration) are kept independent
// and cross-checked against each other by oracle_crosscheck.

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qtm/liouvillian.hpp"

namespace qtm {

struct SteadyStateResult {
    Eigen::MatrixXcd rho;
    double residual;    // |L vec(rho)|_2
    double gap_proxy;   // second-smallest singular value of L
};

struct SteadyStateOptions {
    double condition_limit = 1e12;   // beyond this the SVD null-vector route is used
};

// Null-space solve: one row of L replaced by the trace constraint, refined to
// near machine precision; falls back to the SVD null vector when the replaced
// system has condition number above the limit. Throws NumericalError when the
// null space is not one-dimensional (gap_proxy below 1e-10 |L|).
SteadyStateResult steady_state(const Superoperator& liouvillian,
                               const SteadyStateOptions& options = {});

struct FridgeSteadyState {
    Eigen::MatrixXcd rho;         // thermal product + deviation
    Eigen::MatrixXcd deviation;   // traceless correction to the thermal product
    double residual;
    double gap_proxy;
};

// Steady state expressed as thermal product plus a directly solved deviation.
// The deviation carries the currents; solving for it avoids the catastrophic
// cancellation of subtracting two order-one populations, so current identities
// survive at relative levels far below what the absolute state supports.
FridgeSteadyState solve_fridge_steady(const FridgeSpec& spec);
FridgeSteadyState solve_fridge_steady(const FridgeSpec& spec, const Superoperator& liouvillian);

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::MatrixXcd> states;
    double dt;
};

using StateObserver = std::function<void(double, const Eigen::MatrixXcd&)>;

// Classical RK4 on vec(rho)' = L vec(rho). Requires dt * |L| <= 0.1. The state
// is trace-renormalized each step; a per-step drift beyond 1e-8 throws. States
// are recorded at t = 0, every `stride` steps, and at the final time.
Trajectory evolve(const Superoperator& liouvillian, const Eigen::MatrixXcd& rho0,
                  double t_final, double dt, Index stride = 1);
Trajectory evolve(const EngineFrameGenerator& generator, const Eigen::MatrixXcd& rho0,
                  double t_final, double dt, Index stride = 1);

// Streaming variants: the observer sees sampled states without them being stored.
void evolve_observed(const Superoperator& liouvillian, const Eigen::MatrixXcd& rho0,
                     double t_final, double dt, Index stride, const StateObserver& observer);
void evolve_observed(const EngineFrameGenerator& generator, const Eigen::MatrixXcd& rho0,
                     double t_final, double dt, Index stride, const StateObserver& observer);

// min(0.01 / norm, 0.05 / max_rate): resolves both coherent and reset timescales.
double suggested_dt(double norm, double max_rate);

struct OracleReport {
    double distance;       // trace distance between the two steady-state routes
    double time_reached;   // integration time at which the comparison stopped
    bool converged;
    double residual;
    double gap_proxy;
};

// Runs both steady_state and long-time evolve from the thermal product state;
// throws NumericalError if the routes disagree beyond 1e-5 trace distance.
OracleReport oracle_crosscheck(const FridgeSpec& spec);

// Linear solve with column-pivoted QR plus extended-precision iterative
// refinement of the residual.
Eigen::VectorXcd refined_solve(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b);

} // namespace qtm
