// state.hpp — density-matrix sanity checks and distances

#pragma once

#include <Eigen/Dense>

namespace qtm {

// Tolerances a physical state must satisfy; negative eigenvalue slack absorbs
// solver and integrator dust.
struct DensityTolerances {
    double hermiticity = 1e-10;
    double trace = 1e-10;
    double min_eigenvalue = -1e-9;
};

double hermiticity_error(const Eigen::MatrixXcd& m);   // max elementwise |m - m†|
Eigen::MatrixXcd hermitized(const Eigen::MatrixXcd& m);
double min_eigenvalue(const Eigen::MatrixXcd& hermitian);

// Throws NumericalError naming the violated bound.
void check_density(const Eigen::MatrixXcd& rho, const DensityTolerances& tol = {});
bool is_valid_density(const Eigen::MatrixXcd& rho, const DensityTolerances& tol = {});

// (1/2) Σ |eig(a - b)| for Hermitian a, b.
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

} // namespace qtm
