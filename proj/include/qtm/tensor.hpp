// tensor.hpp — Kronecker products, partial traces, and column-major vectorization

#pragma once

#include <vector>

#include <Eigen/Dense>

namespace qtm {

using Eigen::Index;

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// Total dimension of a tensor-product space.
Index product_dim(const std::vector<Index>& dims);

// I ⊗ ... ⊗ op ⊗ ... ⊗ I with op acting on subsystem `slot`.
Eigen::MatrixXcd embed(const Eigen::MatrixXcd& op, const std::vector<Index>& dims, Index slot);

// Reduced state of subsystem `slot` (all other factors traced out).
Eigen::MatrixXcd partial_trace_keep(const Eigen::MatrixXcd& rho,
                                    const std::vector<Index>& dims, Index slot);

// Complementary reduction: subsystem `slot` traced out, the rest kept in order.
Eigen::MatrixXcd partial_trace_out(const Eigen::MatrixXcd& rho,
                                   const std::vector<Index>& dims, Index slot);

// factor ⊗ sigma with `factor` occupying subsystem `slot` and `sigma` the rest,
// original subsystem ordering preserved.
Eigen::MatrixXcd insert_factor(const Eigen::MatrixXcd& factor, const Eigen::MatrixXcd& sigma,
                               const std::vector<Index>& dims, Index slot);

// Column-major stacking; vec(i + d*j) = rho(i, j).
Eigen::VectorXcd vec(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd unvec(const Eigen::VectorXcd& v, Index dim);

// Row functional t with t · vec(rho) = Tr(rho).
Eigen::RowVectorXcd trace_row(Index dim);

} // namespace qtm
