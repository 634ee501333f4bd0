#include "qtm/solvers.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "qtm/errors.hpp"
#include "qtm/state.hpp"

namespace qtm {

namespace {

constexpr double kStepNormGuard = 0.1;      // dt * |L| must stay below this
constexpr double kTraceDriftLimit = 1e-8;   // per-step renormalization budget
constexpr double kGapTolerance = 1e-10;     // null space counted as degenerate below this * |L|
constexpr double kResidualTolerance = 1e-10;
constexpr double kOracleDistanceBound = 1e-5;
constexpr double kOracleStopDistance = 1e-7;

struct SvdDiagnostics {
    double norm;        // largest singular value
    double sigma_min;
    double gap_proxy;   // second smallest singular value
};

SvdDiagnostics check_null_space(const Superoperator& sop) {
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(sop.mat).singularValues();
    const Index n = sv.size();
    SvdDiagnostics diag{sv(0), sv(n - 1), sv(n - 2)};
    if (diag.norm <= 0.0 || diag.gap_proxy < kGapTolerance * diag.norm) {
        std::ostringstream msg;
        msg << "steady state is not unique: second-smallest singular value "
            << diag.gap_proxy << " below " << kGapTolerance << " * |L| = "
            << kGapTolerance * diag.norm;
        throw NumericalError(msg.str());
    }
    return diag;
}

Eigen::VectorXcd long_double_residual(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& x,
                                      const Eigen::VectorXcd& b) {
    const Index n = a.rows();
    Eigen::VectorXcd r(n);
    for (Index i = 0; i < n; ++i) {
        std::complex<long double> acc(b(i).real(), b(i).imag());
        for (Index j = 0; j < n; ++j) {
            const std::complex<long double> aij(a(i, j).real(), a(i, j).imag());
            const std::complex<long double> xj(x(j).real(), x(j).imag());
            acc -= aij * xj;
        }
        r(i) = std::complex<double>(static_cast<double>(acc.real()),
                                    static_cast<double>(acc.imag()));
    }
    return r;
}

// Replaced system A: row 0 carries the trace constraint. Returns the solution
// or an empty vector if A is too ill-conditioned for the direct route.
Eigen::VectorXcd trace_constrained_solve(const Superoperator& sop, const Eigen::VectorXcd& rhs0,
                                         double cond_limit) {
    const Index n = sop.mat.rows();
    Eigen::MatrixXcd a = sop.mat;
    a.row(0) = trace_row(sop.dim);
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(a).singularValues();
    if (sv(n - 1) <= 0.0 || sv(0) / sv(n - 1) > cond_limit) return {};
    Eigen::VectorXcd b = rhs0;
    return refined_solve(a, b);
}

void enforce_residual(const Superoperator& sop, const Eigen::MatrixXcd& rho, double norm,
                      double* residual_out) {
    const double residual = (sop.mat * vec(rho)).norm();
    if (residual > kResidualTolerance * norm) {
        std::ostringstream msg;
        msg << "steady-state residual " << residual << " exceeds " << kResidualTolerance
            << " * |L| = " << kResidualTolerance * norm;
        throw NumericalError(msg.str());
    }
    *residual_out = residual;
}

template <typename ApplyFn>
void run_rk4(ApplyFn&& apply_fn, double norm, const Eigen::MatrixXcd& rho0, double t_final,
             double dt, Index stride, const StateObserver& observer) {
    if (!(dt > 0)) throw std::invalid_argument("requires dt > 0");
    if (!(t_final >= 0)) throw std::invalid_argument("requires t_final >= 0");
    if (stride < 1) throw std::invalid_argument("requires stride >= 1");
    if (dt * norm > kStepNormGuard * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "step size too large: dt * |L| = " << dt * norm << " exceeds " << kStepNormGuard;
        throw std::invalid_argument(msg.str());
    }
    check_density(rho0);

    const Index steps = (t_final == 0) ? 0 : static_cast<Index>(std::ceil(t_final / dt - 1e-12));
    const double h = (steps == 0) ? dt : t_final / static_cast<double>(steps);

    Eigen::MatrixXcd rho = rho0;
    Eigen::MatrixXcd k1, k2, k3, k4, tmp;
    observer(0.0, rho);
    for (Index step = 1; step <= steps; ++step) {
        apply_fn(rho, k1);
        tmp = rho + (0.5 * h) * k1;
        apply_fn(tmp, k2);
        tmp = rho + (0.5 * h) * k2;
        apply_fn(tmp, k3);
        tmp = rho + h * k3;
        apply_fn(tmp, k4);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const std::complex<double> tr = rho.trace();
        const double drift = std::abs(tr - 1.0);
        if (drift > kTraceDriftLimit) {
            std::ostringstream msg;
            msg << "trace drifted by " << drift << " in one step (limit " << kTraceDriftLimit
                << "); reduce dt";
            throw NumericalError(msg.str());
        }
        rho /= tr.real();

        if (step % stride == 0 || step == steps) {
            const double herm = hermiticity_error(rho);
            if (herm > 1e-8)
                throw NumericalError("evolved state lost Hermiticity beyond 1e-8");
            observer(static_cast<double>(step) * h, rho);
        }
    }
}

} // namespace

Eigen::VectorXcd refined_solve(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b) {
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::VectorXcd x = qr.solve(b);
    for (int sweep = 0; sweep < 2; ++sweep) {
        const Eigen::VectorXcd r = long_double_residual(a, x, b);
        x += qr.solve(r);
    }
    return x;
}

SteadyStateResult steady_state(const Superoperator& liouvillian,
                               const SteadyStateOptions& options) {
    const Index n = liouvillian.mat.rows();
    const SvdDiagnostics diag = check_null_space(liouvillian);

    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
    rhs(0) = 1.0;
    Eigen::VectorXcd x = trace_constrained_solve(liouvillian, rhs, options.condition_limit);
    if (x.size() == 0) {
        // SVD null vector, normalized to unit trace.
        const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(liouvillian.mat, Eigen::ComputeFullV);
        x = svd.matrixV().col(n - 1);
        const std::complex<double> tr = unvec(x, liouvillian.dim).trace();
        if (std::abs(tr) < 1e-8 * x.norm())
            throw NumericalError("null vector has vanishing trace; no normalizable steady state");
        x /= tr;
    }

    Eigen::MatrixXcd rho = hermitized(unvec(x, liouvillian.dim));
    rho /= rho.trace().real();

    SteadyStateResult result;
    result.gap_proxy = diag.gap_proxy;
    enforce_residual(liouvillian, rho, diag.norm, &result.residual);
    check_density(rho);
    result.rho = rho;
    return result;
}

FridgeSteadyState solve_fridge_steady(const FridgeSpec& spec) {
    return solve_fridge_steady(spec, assemble_fridge_liouvillian(spec));
}

FridgeSteadyState solve_fridge_steady(const FridgeSpec& spec, const Superoperator& liouvillian) {
    const SvdDiagnostics diag = check_null_space(liouvillian);
    const Eigen::MatrixXcd tau3 = thermal_product_state(spec);

    // -L(thermal product) has exactly two entries: the resets fix the product and
    // the free Hamiltonian commutes with it, leaving the degenerate-pair commutator.
    const double bias = (tau3(kIndex101, kIndex101) - tau3(kIndex010, kIndex010)).real();
    Eigen::MatrixXcd source = Eigen::MatrixXcd::Zero(FridgeSpec::dim, FridgeSpec::dim);
    source(kIndex010, kIndex101) = std::complex<double>(0.0, spec.coupling * bias);
    source(kIndex101, kIndex010) = std::complex<double>(0.0, -spec.coupling * bias);

    Eigen::MatrixXcd a = liouvillian.mat;
    a.row(0) = trace_row(FridgeSpec::dim);
    Eigen::VectorXcd b = vec(source);
    b(0) = 0.0;   // deviation is traceless
    const Eigen::MatrixXcd chi = hermitized(unvec(refined_solve(a, b), FridgeSpec::dim));

    FridgeSteadyState result;
    result.deviation = chi;
    result.rho = tau3 + chi;
    result.gap_proxy = diag.gap_proxy;
    enforce_residual(liouvillian, result.rho, diag.norm, &result.residual);
    check_density(result.rho);
    return result;
}

Trajectory evolve(const Superoperator& liouvillian, const Eigen::MatrixXcd& rho0,
                  double t_final, double dt, Index stride) {
    Trajectory traj;
    traj.dt = dt;
    evolve_observed(liouvillian, rho0, t_final, dt, stride,
                    [&traj](double t, const Eigen::MatrixXcd& rho) {
                        traj.times.push_back(t);
                        traj.states.push_back(rho);
                    });
    return traj;
}

Trajectory evolve(const EngineFrameGenerator& generator, const Eigen::MatrixXcd& rho0,
                  double t_final, double dt, Index stride) {
    Trajectory traj;
    traj.dt = dt;
    evolve_observed(generator, rho0, t_final, dt, stride,
                    [&traj](double t, const Eigen::MatrixXcd& rho) {
                        traj.times.push_back(t);
                        traj.states.push_back(rho);
                    });
    return traj;
}

void evolve_observed(const Superoperator& liouvillian, const Eigen::MatrixXcd& rho0,
                     double t_final, double dt, Index stride, const StateObserver& observer) {
    if (rho0.rows() != liouvillian.dim || rho0.cols() != liouvillian.dim)
        throw std::invalid_argument("state dimension does not match the superoperator");
    const double norm = spectral_norm(liouvillian);
    run_rk4([&liouvillian](const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) {
                out = unvec(liouvillian.mat * vec(in), liouvillian.dim);
            },
            norm, rho0, t_final, dt, stride, observer);
}

void evolve_observed(const EngineFrameGenerator& generator, const Eigen::MatrixXcd& rho0,
                     double t_final, double dt, Index stride, const StateObserver& observer) {
    run_rk4([&generator](const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) {
                generator.apply_into(in, out);
            },
            generator.norm_bound(), rho0, t_final, dt, stride, observer);
}

double suggested_dt(double norm, double max_rate) {
    if (!(norm > 0) || !(max_rate > 0))
        throw std::invalid_argument("requires positive norm and rate scales");
    return std::min(0.01 / norm, 0.05 / max_rate);
}

OracleReport oracle_crosscheck(const FridgeSpec& spec) {
    const Superoperator liouvillian = assemble_fridge_liouvillian(spec);
    const SteadyStateResult steady = steady_state(liouvillian);

    const double norm = spectral_norm(liouvillian);
    const double dt = 0.08 / norm;
    const double chunk = 10.0 / spec.min_reset_rate();
    const double cap = 200.0 / spec.min_reset_rate();

    Eigen::MatrixXcd rho = thermal_product_state(spec);
    OracleReport report{trace_distance(rho, steady.rho), 0.0, false,
                        steady.residual, steady.gap_proxy};
    while (report.time_reached < cap) {
        const Index steps = static_cast<Index>(std::ceil(chunk / dt));
        evolve_observed(liouvillian, rho, chunk, dt, steps,
                        [&rho](double, const Eigen::MatrixXcd& state) { rho = state; });
        report.time_reached += chunk;
        report.distance = trace_distance(rho, steady.rho);
        if (report.distance <= kOracleStopDistance) break;
    }
    report.converged = report.distance <= kOracleDistanceBound;
    if (!report.converged) {
        std::ostringstream msg;
        msg << "steady-state routes disagree: trace distance " << report.distance
            << " after t = " << report.time_reached << " (bound " << kOracleDistanceBound << ")";
        throw NumericalError(msg.str());
    }
    return report;
}

} // namespace qtm
