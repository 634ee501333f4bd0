#include "qtm/machine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qtm {

namespace {

void require(bool ok, const char* constraint) {
    if (!ok) throw std::invalid_argument(constraint);
}

} // namespace

QubitSpec::QubitSpec(double energy_, double temperature_, double reset_rate_)
    : energy(energy_), temperature(temperature_), reset_rate(reset_rate_) {
    require(std::isfinite(energy) && energy > 0, "requires energy gap E > 0");
    require(std::isfinite(temperature) && temperature > 0, "requires bath temperature T > 0");
    // reset_rate == 0 would leave the steady state non-unique
    require(std::isfinite(reset_rate) && reset_rate > 0, "requires reset rate p > 0");
}

FridgeSpec::FridgeSpec(double E1, double E3,
                       const std::array<double, 3>& T,
                       const std::array<double, 3>& p,
                       double coupling_)
    : qubit1(E1, T[0], p[0]),
      qubit2(E1 + E3, T[1], p[1]),
      qubit3(E3, T[2], p[2]),
      coupling(coupling_) {
    require(T[0] > T[1] && T[1] > T[2], "requires T1 > T2 > T3");
    require(std::isfinite(coupling) && coupling > 0, "requires coupling g > 0");
}

std::array<double, 3> FridgeSpec::energies() const {
    return {qubit1.energy, qubit2.energy, qubit3.energy};
}

std::array<double, 3> FridgeSpec::temperatures() const {
    return {qubit1.temperature, qubit2.temperature, qubit3.temperature};
}

std::array<double, 3> FridgeSpec::reset_rates() const {
    return {qubit1.reset_rate, qubit2.reset_rate, qubit3.reset_rate};
}

double FridgeSpec::min_reset_rate() const {
    return std::min({qubit1.reset_rate, qubit2.reset_rate, qubit3.reset_rate});
}

double FridgeSpec::max_reset_rate() const {
    return std::max({qubit1.reset_rate, qubit2.reset_rate, qubit3.reset_rate});
}

EngineSpec::EngineSpec(double E2, double E3,
                       const std::array<double, 2>& T,
                       const std::array<double, 2>& p,
                       double coupling_, Index ladder_levels_, Index initial_level_)
    : qubit1(E2 + E3, T[0], p[0]),
      qubit2(E2, T[1], p[1]),
      ladder_step(E3),
      ladder_levels(ladder_levels_),
      initial_level(initial_level_),
      coupling(coupling_) {
    require(T[0] > T[1], "requires T1 > T2");
    require(std::isfinite(E3) && E3 > 0, "requires ladder step E3 > 0");
    require(ladder_levels >= 3, "requires at least 3 ladder levels");
    require(initial_level > 0 && initial_level < ladder_levels - 1,
            "requires a strictly interior initial ladder level");
    require(std::isfinite(coupling) && coupling > 0, "requires coupling g > 0");
}

double EngineSpec::min_reset_rate() const {
    return std::min(qubit1.reset_rate, qubit2.reset_rate);
}

double EngineSpec::max_reset_rate() const {
    return std::max(qubit1.reset_rate, qubit2.reset_rate);
}

double thermal_excited_population(double energy, double temperature) {
    if (!(energy > 0) || !(temperature > 0))
        throw std::invalid_argument("thermal state requires E > 0 and T > 0");
    const double w = std::exp(-energy / temperature);
    return w / (1.0 + w);
}

Eigen::Matrix2cd thermal_qubit_state(double energy, double temperature) {
    const double r = thermal_excited_population(energy, temperature);
    Eigen::Matrix2cd tau = Eigen::Matrix2cd::Zero();
    tau(0, 0) = 1.0 - r;
    tau(1, 1) = r;
    return tau;
}

Eigen::MatrixXcd fridge_free_hamiltonian(const FridgeSpec& spec) {
    const auto E = spec.energies();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(FridgeSpec::dim, FridgeSpec::dim);
    for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2)
            for (int b3 = 0; b3 < 2; ++b3) {
                const Index i = fridge_index(b1, b2, b3);
                h(i, i) = b1 * E[0] + b2 * E[1] + b3 * E[2];
            }
    return h;
}

Eigen::MatrixXcd fridge_interaction_hamiltonian(double coupling) {
    if (!(coupling > 0)) throw std::invalid_argument("requires coupling g > 0");
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(FridgeSpec::dim, FridgeSpec::dim);
    h(kIndex010, kIndex101) = coupling;
    h(kIndex101, kIndex010) = coupling;
    return h;
}

Eigen::MatrixXcd engine_free_hamiltonian(const EngineSpec& spec) {
    const Index N = spec.ladder_levels;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(spec.dim(), spec.dim());
    for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2)
            for (Index n = 0; n < N; ++n) {
                const Index i = engine_index(b1, b2, n, N);
                h(i, i) = b1 * spec.qubit1.energy + b2 * spec.qubit2.energy +
                          static_cast<double>(n) * spec.ladder_step;
            }
    return h;
}

Eigen::MatrixXcd engine_interaction_hamiltonian(const EngineSpec& spec) {
    const Index N = spec.ladder_levels;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(spec.dim(), spec.dim());
    for (Index n = 0; n + 1 < N; ++n) {
        const Index up = engine_index(1, 0, n, N);       // |10,n>
        const Index down = engine_index(0, 1, n + 1, N); // |01,n+1>
        h(up, down) = spec.coupling;
        h(down, up) = spec.coupling;
    }
    return h;
}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> engine_hamiltonians(const EngineSpec& spec) {
    return {engine_free_hamiltonian(spec), engine_interaction_hamiltonian(spec)};
}

Eigen::MatrixXcd thermal_product_state(const FridgeSpec& spec) {
    const Eigen::MatrixXcd t1 = thermal_qubit_state(spec.qubit1.energy, spec.qubit1.temperature);
    const Eigen::MatrixXcd t2 = thermal_qubit_state(spec.qubit2.energy, spec.qubit2.temperature);
    const Eigen::MatrixXcd t3 = thermal_qubit_state(spec.qubit3.energy, spec.qubit3.temperature);
    return kron(t1, kron(t2, t3));
}

Eigen::MatrixXcd engine_initial_state(const EngineSpec& spec) {
    const Eigen::MatrixXcd t1 = thermal_qubit_state(spec.qubit1.energy, spec.qubit1.temperature);
    const Eigen::MatrixXcd t2 = thermal_qubit_state(spec.qubit2.energy, spec.qubit2.temperature);
    Eigen::MatrixXcd weight = Eigen::MatrixXcd::Zero(spec.ladder_levels, spec.ladder_levels);
    weight(spec.initial_level, spec.initial_level) = 1.0;
    return kron(t1, kron(t2, weight));
}

} // namespace qtm
