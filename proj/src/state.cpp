#include "qtm/state.hpp"

#include <cmath>
#include <sstream>

#include "qtm/errors.hpp"

namespace qtm {

double hermiticity_error(const Eigen::MatrixXcd& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd hermitized(const Eigen::MatrixXcd& m) {
    return 0.5 * (m + m.adjoint());
}

double min_eigenvalue(const Eigen::MatrixXcd& hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void check_density(const Eigen::MatrixXcd& rho, const DensityTolerances& tol) {
    if (rho.rows() != rho.cols())
        throw NumericalError("density matrix is not square");
    const double herm = hermiticity_error(rho);
    if (herm > tol.hermiticity) {
        std::ostringstream msg;
        msg << "density matrix not Hermitian: deviation " << herm << " > " << tol.hermiticity;
        throw NumericalError(msg.str());
    }
    const double tr_err = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
    if (tr_err > tol.trace) {
        std::ostringstream msg;
        msg << "density matrix trace off unity by " << tr_err << " > " << tol.trace;
        throw NumericalError(msg.str());
    }
    const double lam = min_eigenvalue(hermitized(rho));
    if (lam < tol.min_eigenvalue) {
        std::ostringstream msg;
        msg << "density matrix not positive semidefinite: min eigenvalue " << lam
            << " < " << tol.min_eigenvalue;
        throw NumericalError(msg.str());
    }
}

bool is_valid_density(const Eigen::MatrixXcd& rho, const DensityTolerances& tol) {
    try {
        check_density(rho, tol);
        return true;
    } catch (const NumericalError&) {
        return false;
    }
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitized(a - b), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

} // namespace qtm
