// machine.hpp — machine parameterizations, free/interaction Hamiltonians, thermal states
//
// Units: k_B = hbar = 1. Qubit basis |0> = ground, |1> = excited.
// Product-basis ordering puts qubit 1 in the most significant position:
// fridge |q1 q2 q3>, engine |q1 q2 n> with the weight ladder last.

#pragma once

#include <array>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qtm/tensor.hpp"

namespace qtm {

struct QubitSpec {
    double energy;        // gap between |1> and |0>, > 0
    double temperature;   // bath temperature, > 0
    double reset_rate;    // thermal replacement probability per unit time, > 0

    QubitSpec(double energy, double temperature, double reset_rate);
};

// Three qubits against hot (T1), room (T2) and cold (T3) baths, T1 > T2 > T3.
// qubit2.energy is derived as E1 + E3 so that |010> and |101> are degenerate.
struct FridgeSpec {
    QubitSpec qubit1;
    QubitSpec qubit2;
    QubitSpec qubit3;
    double coupling;      // strength of the degenerate-pair swap, > 0

    FridgeSpec(double E1, double E3,
               const std::array<double, 3>& temperatures,
               const std::array<double, 3>& reset_rates,
               double coupling);

    std::array<double, 3> energies() const;
    std::array<double, 3> temperatures() const;
    std::array<double, 3> reset_rates() const;
    double min_reset_rate() const;
    double max_reset_rate() const;
    static constexpr Index dim = 8;
    std::vector<Index> dims() const { return {2, 2, 2}; }
};

// Two qubits (hot T1, cold T2) plus a bath-less weight ladder of `ladder_levels`
// equally spaced levels with step `ladder_step`. qubit1.energy is derived as
// E2 + E3 so that |10,n> and |01,n+1> are degenerate. The ladder is hard-truncated.
struct EngineSpec {
    QubitSpec qubit1;
    QubitSpec qubit2;
    double ladder_step;    // E3 > 0
    Index ladder_levels;   // N >= 3
    Index initial_level;   // strictly interior: 0 < n0 < N-1
    double coupling;

    EngineSpec(double E2, double E3,
               const std::array<double, 2>& temperatures,
               const std::array<double, 2>& reset_rates,
               double coupling, Index ladder_levels, Index initial_level);

    Index dim() const { return 4 * ladder_levels; }
    std::vector<Index> dims() const { return {2, 2, ladder_levels}; }
    double min_reset_rate() const;
    double max_reset_rate() const;
};

// Basis indices.
inline Index fridge_index(int b1, int b2, int b3) { return 4 * b1 + 2 * b2 + b3; }
inline constexpr Index kIndex010 = 2;
inline constexpr Index kIndex101 = 5;
inline Index engine_index(int b1, int b2, Index n, Index levels) {
    return (2 * b1 + b2) * levels + n;
}

double thermal_excited_population(double energy, double temperature);

// diag(1 - r, r) with r = e^{-E/T} / (1 + e^{-E/T}).
Eigen::Matrix2cd thermal_qubit_state(double energy, double temperature);

Eigen::MatrixXcd fridge_free_hamiltonian(const FridgeSpec& spec);                 // 8x8 diagonal
Eigen::MatrixXcd fridge_interaction_hamiltonian(double coupling);                 // g(|010><101| + h.c.)
Eigen::MatrixXcd engine_free_hamiltonian(const EngineSpec& spec);                 // diagonal, 4N x 4N
Eigen::MatrixXcd engine_interaction_hamiltonian(const EngineSpec& spec);          // g Σ |10,n><01,n+1| + h.c.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> engine_hamiltonians(const EngineSpec& spec);

Eigen::MatrixXcd thermal_product_state(const FridgeSpec& spec);   // τ1 ⊗ τ2 ⊗ τ3
Eigen::MatrixXcd engine_initial_state(const EngineSpec& spec);    // τ1 ⊗ τ2 ⊗ |n0><n0|

} // namespace qtm
