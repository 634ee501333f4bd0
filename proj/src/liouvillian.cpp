#include "qtm/liouvillian.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "qtm/state.hpp"

namespace qtm {

namespace {
const std::complex<double> kI(0.0, 1.0);
}

Superoperator operator+(const Superoperator& a, const Superoperator& b) {
    if (a.dim != b.dim)
        throw std::invalid_argument("superoperator dimensions do not match");
    return {a.dim, a.mat + b.mat};
}

Eigen::MatrixXcd Superoperator::apply(const Eigen::MatrixXcd& rho) const {
    if (rho.rows() != dim || rho.cols() != dim)
        throw std::invalid_argument("state dimension does not match the superoperator");
    return unvec(mat * vec(rho), dim);
}

double spectral_norm(const Superoperator& sop) {
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(sop.mat).singularValues()(0);
}

Superoperator coherent_generator(const Eigen::MatrixXcd& hamiltonian) {
    if (hamiltonian.rows() != hamiltonian.cols())
        throw std::invalid_argument("Hamiltonian must be square");
    const double herm = hermiticity_error(hamiltonian);
    const double scale = std::max(1.0, hamiltonian.cwiseAbs().maxCoeff());
    if (herm > 1e-10 * scale) {
        std::ostringstream msg;
        msg << "Hamiltonian not Hermitian: deviation " << herm;
        throw std::invalid_argument(msg.str());
    }
    const Index d = hamiltonian.rows();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    Superoperator sop;
    sop.dim = d;
    sop.mat = -kI * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
    return sop;
}

Superoperator reset_dissipator(Index slot, const Eigen::Matrix2cd& tau, double rate,
                               const std::vector<Index>& dims) {
    if (slot < 0 || slot >= static_cast<Index>(dims.size()))
        throw std::invalid_argument("subsystem index out of range");
    if (dims[slot] != 2)
        throw std::invalid_argument("reset dissipator addresses a non-qubit subsystem");
    if (!(rate > 0))
        throw std::invalid_argument("requires reset rate p > 0");
    if (std::abs(tau.trace().real() - 1.0) > 1e-10 || hermiticity_error(tau) > 1e-10 ||
        tau(0, 0).real() < -1e-12 || tau(1, 1).real() < -1e-12)
        throw std::invalid_argument("replacement state is not a valid qubit density matrix");

    const Index d = product_dim(dims);
    // Kraus form of rho -> tau ⊗ Tr_slot rho: K_{ab} = sqrt(tau_bb) |b><a| on `slot`.
    Eigen::MatrixXcd replace = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (Index a = 0; a < 2; ++a)
        for (Index b = 0; b < 2; ++b) {
            Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(2, 2);
            unit(b, a) = 1.0;
            const Eigen::MatrixXcd k = embed(unit, dims, slot);
            replace += tau(b, b).real() * kron(k.conjugate(), k);
        }
    Superoperator sop;
    sop.dim = d;
    sop.mat = rate * (replace - Eigen::MatrixXcd::Identity(d * d, d * d));
    return sop;
}

Superoperator assemble_fridge_liouvillian(const FridgeSpec& spec) {
    const Eigen::MatrixXcd h =
        fridge_free_hamiltonian(spec) + fridge_interaction_hamiltonian(spec.coupling);
    Superoperator sop = coherent_generator(h);
    const std::vector<Index> dims = spec.dims();
    const QubitSpec* qubits[3] = {&spec.qubit1, &spec.qubit2, &spec.qubit3};
    for (Index i = 0; i < 3; ++i) {
        const Eigen::Matrix2cd tau =
            thermal_qubit_state(qubits[i]->energy, qubits[i]->temperature);
        sop = sop + reset_dissipator(i, tau, qubits[i]->reset_rate, dims);
    }
    return sop;
}

Superoperator assemble_engine_liouvillian(const EngineSpec& spec) {
    const auto [h0, hint] = engine_hamiltonians(spec);
    Superoperator sop = coherent_generator(h0 + hint);
    const std::vector<Index> dims = spec.dims();
    const QubitSpec* qubits[2] = {&spec.qubit1, &spec.qubit2};
    for (Index i = 0; i < 2; ++i) {
        const Eigen::Matrix2cd tau =
            thermal_qubit_state(qubits[i]->energy, qubits[i]->temperature);
        sop = sop + reset_dissipator(i, tau, qubits[i]->reset_rate, dims);
    }
    return sop;
}

EngineFrameGenerator make_engine_frame_generator(const EngineSpec& spec) {
    EngineFrameGenerator gen{spec,
                             thermal_qubit_state(spec.qubit1.energy, spec.qubit1.temperature),
                             thermal_qubit_state(spec.qubit2.energy, spec.qubit2.temperature),
                             {}};
    const Index N = spec.ladder_levels;
    gen.pairs.reserve(N - 1);
    for (Index n = 0; n + 1 < N; ++n)
        gen.pairs.emplace_back(engine_index(1, 0, n, N), engine_index(0, 1, n + 1, N));
    return gen;
}

void EngineFrameGenerator::apply_into(const Eigen::MatrixXcd& rho,
                                       Eigen::MatrixXcd& out) const {
    const Index d = spec.dim();
    if (rho.rows() != d || rho.cols() != d)
        throw std::invalid_argument("state dimension does not match the engine generator");

    const double g = spec.coupling;
    const double p1 = spec.qubit1.reset_rate;
    const double p2 = spec.qubit2.reset_rate;
    const Index n = spec.ladder_levels;
    const Index half = 2 * n;   // dimension of the (qubit 2 ⊗ weight) factor

    // decay part of both resets in one pass
    out = (-(p1 + p2)) * rho;

    // -i [H_int, rho]: each degenerate pair feeds its partner's row and column
    const std::complex<double> mig(0.0, -g);
    for (const auto& [up, down] : pairs) {
        out.row(up) += mig * rho.row(down);
        out.row(down) += mig * rho.row(up);
        out.col(up) -= mig * rho.col(down);
        out.col(down) -= mig * rho.col(up);
    }

    // feed of the qubit-1 reset: tau1 is diagonal, so only diagonal qubit-1
    // blocks receive the traced block sum
    const Eigen::MatrixXcd sum1 = rho.topLeftCorner(half, half) +
                                  rho.bottomRightCorner(half, half);
    out.topLeftCorner(half, half) += (p1 * tau1(0, 0).real()) * sum1;
    out.bottomRightCorner(half, half) += (p1 * tau1(1, 1).real()) * sum1;

    // same structure for qubit 2 inside every qubit-1 block pair
    for (Index a = 0; a < 2; ++a)
        for (Index b = 0; b < 2; ++b) {
            const Index r0 = a * half, c0 = b * half;
            const Eigen::MatrixXcd sum2 =
                rho.block(r0, c0, n, n) + rho.block(r0 + n, c0 + n, n, n);
            out.block(r0, c0, n, n) += (p2 * tau2(0, 0).real()) * sum2;
            out.block(r0 + n, c0 + n, n, n) += (p2 * tau2(1, 1).real()) * sum2;
        }
}

Eigen::MatrixXcd EngineFrameGenerator::apply(const Eigen::MatrixXcd& rho) const {
    Eigen::MatrixXcd out;
    apply_into(rho, out);
    return out;
}

double EngineFrameGenerator::norm_bound() const {
    // |H_int| = g (direct sum of swap blocks); each reset map has norm <= 1 + sqrt(2)
    // on the Hilbert-Schmidt space.
    return 2.0 * spec.coupling +
           (1.0 + std::sqrt(2.0)) * (spec.qubit1.reset_rate + spec.qubit2.reset_rate);
}

} // namespace qtm
