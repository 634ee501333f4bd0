// liouvillian.hpp — reset-model master-equation generators as dense superoperators
//
// Vectorization convention: column-major stacking, vec(rho)(i + d*j) = rho(i, j),
// so vec(A rho B) = (B^T ⊗ A) vec(rho). All superoperator matrices use it.

#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qtm/machine.hpp"

namespace qtm {

struct Superoperator {
    Index dim = 0;          // Hilbert dimension d; mat is d^2 x d^2
    Eigen::MatrixXcd mat;

    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
};

Superoperator operator+(const Superoperator& a, const Superoperator& b);
double spectral_norm(const Superoperator& sop);   // largest singular value

// rho -> -i [H, rho]. H must be Hermitian to 1e-10.
Superoperator coherent_generator(const Eigen::MatrixXcd& hamiltonian);

// rho -> rate * (tau ⊗ Tr_slot rho - rho), with tau occupying subsystem `slot`.
Superoperator reset_dissipator(Index slot, const Eigen::Matrix2cd& tau, double rate,
                               const std::vector<Index>& dims);

// Coherent part plus one reset dissipator per qubit (64 x 64).
Superoperator assemble_fridge_liouvillian(const FridgeSpec& spec);

// Coherent part plus resets on the two qubits only; the weight has no bath.
Superoperator assemble_engine_liouvillian(const EngineSpec& spec);

// Matrix-free engine generator in the frame co-rotating with the free Hamiltonian:
// the coherent term keeps only the degenerate-pair coupling. Because the coupling
// commutes with the free Hamiltonian and the thermal states are diagonal,
// populations and degenerate-pair coherences match the lab-frame evolution exactly.
// This makes the stable step size scale with max(p, g) instead of the top ladder energy.
struct EngineFrameGenerator {
    EngineSpec spec;
    Eigen::Matrix2cd tau1;
    Eigen::Matrix2cd tau2;
    std::vector<std::pair<Index, Index>> pairs;   // (|10,n>, |01,n+1>) indices

    void apply_into(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const;
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
    double norm_bound() const;   // upper bound on the spectral norm
};

EngineFrameGenerator make_engine_frame_generator(const EngineSpec& spec);

} // namespace qtm
