#include <doctest.h>

#include <cmath>
#include <complex>

#include "qtm/liouvillian.hpp"
#include "qtm/panels.hpp"
#include "qtm/solvers.hpp"
#include "qtm/state.hpp"

using namespace qtm;
using Eigen::MatrixXcd;

namespace {

MatrixXcd random_hermitian(Index d, SpecSampler& sampler) {
    MatrixXcd m(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            m(i, j) = std::complex<double>(sampler.uniform(-1, 1), sampler.uniform(-1, 1));
    return hermitized(m);
}

} // namespace

TEST_CASE("coherent generator") {
    SUBCASE("zero Hamiltonian gives the zero map") {
        const Superoperator sop = coherent_generator(MatrixXcd::Zero(4, 4));
        CHECK(sop.mat.norm() == 0.0);
    }
    SUBCASE("identity is a fixed point") {
        SpecSampler sampler(3);
        const MatrixXcd h = random_hermitian(5, sampler);
        const Superoperator sop = coherent_generator(h);
        CHECK(sop.apply(MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("qubit coherence rotates at the gap frequency") {
        const double energy = 1.3, dt = 0.01;
        MatrixXcd h = MatrixXcd::Zero(2, 2);
        h(1, 1) = energy;
        MatrixXcd rho0 = MatrixXcd::Zero(2, 2);
        rho0(0, 0) = 0.5;
        rho0(1, 1) = 0.5;
        rho0(0, 1) = 0.25;
        rho0(1, 0) = 0.25;
        const Trajectory traj = evolve(coherent_generator(h), rho0, dt, dt);
        const std::complex<double> expected =
            rho0(0, 1) * std::exp(std::complex<double>(0.0, energy * dt));
        // one RK4 step carries a fifth-order local error
        CHECK(std::abs(traj.states.back()(0, 1) - expected) <
              std::pow(energy * dt, 5));
    }
    SUBCASE("rejects a non-Hermitian Hamiltonian") {
        MatrixXcd h = MatrixXcd::Zero(2, 2);
        h(0, 1) = 1.0;
        CHECK_THROWS_AS(coherent_generator(h), std::invalid_argument);
    }
}

TEST_CASE("reset dissipator") {
    const std::vector<Index> dims{2, 2, 2};
    const Eigen::Matrix2cd tau = thermal_qubit_state(1.0, 2.0);

    SUBCASE("replacement products are fixed points") {
        SpecSampler sampler(5);
        MatrixXcd sigma = random_hermitian(4, sampler);
        sigma = sigma * sigma.adjoint();   // positive
        sigma /= sigma.trace().real();
        const MatrixXcd fixed = insert_factor(tau, sigma, dims, 1);
        const Superoperator sop = reset_dissipator(1, tau, 0.7, dims);
        CHECK(sop.apply(fixed).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("linear in the rate") {
        const Superoperator once = reset_dissipator(0, tau, 0.25, dims);
        const Superoperator twice = reset_dissipator(0, tau, 0.5, dims);
        CHECK((twice.mat - 2.0 * once.mat).norm() == 0.0);
    }
    SUBCASE("single-qubit relaxation rate") {
        const double p = 0.3;
        const Superoperator sop = reset_dissipator(0, tau, p, {2});
        MatrixXcd excited = MatrixXcd::Zero(2, 2);
        excited(1, 1) = 1.0;
        const MatrixXcd rate = sop.apply(excited);
        CHECK(rate(1, 1).real() ==
              doctest::Approx(p * (tau(1, 1).real() - 1.0)).epsilon(1e-14));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(reset_dissipator(3, tau, 0.1, dims), std::invalid_argument);
        CHECK_THROWS_AS(reset_dissipator(2, tau, 0.1, {2, 2, 5}), std::invalid_argument);
        CHECK_THROWS_AS(reset_dissipator(0, tau, 0.0, dims), std::invalid_argument);
        Eigen::Matrix2cd bad = tau;
        bad(0, 0) = 0.9;   // trace != 1
        CHECK_THROWS_AS(reset_dissipator(0, bad, 0.1, dims), std::invalid_argument);
    }
}

TEST_CASE("fridge Liouvillian structure") {
    const FridgeSpec spec(1.0, 1.0, {10, 5, 4}, {1e-3, 2e-3, 3e-3}, 0.01);
    const Superoperator sop = assemble_fridge_liouvillian(spec);

    SUBCASE("trace preservation") {
        const double scale = sop.mat.cwiseAbs().maxCoeff();
        CHECK((trace_row(8) * sop.mat).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    }
    SUBCASE("Hermiticity preservation") {
        SpecSampler sampler(9);
        for (int i = 0; i < 5; ++i)
            CHECK(hermiticity_error(sop.apply(random_hermitian(8, sampler))) < 1e-10);
    }
    SUBCASE("linearity") {
        SpecSampler sampler(10);
        const MatrixXcd a = random_hermitian(8, sampler);
        const MatrixXcd b = random_hermitian(8, sampler);
        const MatrixXcd combined = sop.apply(0.3 * a + 1.7 * b);
        const MatrixXcd split = 0.3 * sop.apply(a) + 1.7 * sop.apply(b);
        CHECK((combined - split).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("thermal product is steady without coupling") {
        // assemble the g -> 0 generator directly from its parts
        Superoperator bare = coherent_generator(fridge_free_hamiltonian(spec));
        const QubitSpec* qubits[3] = {&spec.qubit1, &spec.qubit2, &spec.qubit3};
        for (Index i = 0; i < 3; ++i)
            bare = bare + reset_dissipator(
                              i, thermal_qubit_state(qubits[i]->energy, qubits[i]->temperature),
                              qubits[i]->reset_rate, spec.dims());
        CHECK(bare.apply(thermal_product_state(spec)).cwiseAbs().maxCoeff() <= 1e-12);
    }
    SUBCASE("thermal product is steady at equal temperatures even with coupling") {
        const double T = 3.0;
        const Eigen::MatrixXcd h = fridge_free_hamiltonian(spec) +
                                   fridge_interaction_hamiltonian(0.05);
        Superoperator equal = coherent_generator(h);
        const QubitSpec* qubits[3] = {&spec.qubit1, &spec.qubit2, &spec.qubit3};
        Eigen::MatrixXcd product = Eigen::MatrixXcd::Identity(1, 1);
        for (Index i = 0; i < 3; ++i) {
            const Eigen::Matrix2cd tau = thermal_qubit_state(qubits[i]->energy, T);
            equal = equal + reset_dissipator(i, tau, qubits[i]->reset_rate, spec.dims());
            product = kron(product, tau);
        }
        CHECK(equal.apply(product).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("engine Liouvillian structure") {
    const EngineSpec spec(1.0, 0.5, {10, 5}, {0.2, 0.2}, 0.05, 3, 1);
    const Superoperator sop = assemble_engine_liouvillian(spec);

    SUBCASE("trace preservation") {
        const double scale = sop.mat.cwiseAbs().maxCoeff();
        CHECK((trace_row(spec.dim()) * sop.mat).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    }
    SUBCASE("weakly coupled qubits stay near their baths") {
        const EngineSpec weak(1.0, 0.5, {10, 5}, {0.2, 0.2}, 1e-12, 3, 1);
        const Superoperator weak_sop = assemble_engine_liouvillian(weak);
        const double dt = 0.08 / spectral_norm(weak_sop);
        const double horizon = 10.0 / weak.min_reset_rate();
        const Trajectory traj =
            evolve(weak_sop, engine_initial_state(weak), horizon, dt, 1 << 30);
        const MatrixXcd rho = traj.states.back();
        const Eigen::Matrix2cd tau1 =
            thermal_qubit_state(weak.qubit1.energy, weak.qubit1.temperature);
        const Eigen::Matrix2cd tau2 =
            thermal_qubit_state(weak.qubit2.energy, weak.qubit2.temperature);
        CHECK((partial_trace_keep(rho, weak.dims(), 0) - tau1).cwiseAbs().maxCoeff() < 1e-6);
        CHECK((partial_trace_keep(rho, weak.dims(), 1) - tau2).cwiseAbs().maxCoeff() < 1e-6);
    }
    SUBCASE("weight stays on its level when the coupling vanishes") {
        const EngineSpec frozen(1.0, 0.5, {10, 5}, {0.2, 0.2}, 1e-30, 3, 1);
        const Superoperator frozen_sop = assemble_engine_liouvillian(frozen);
        const double dt = 0.08 / spectral_norm(frozen_sop);
        const Trajectory traj =
            evolve(frozen_sop, engine_initial_state(frozen), 20.0, dt, 1 << 30);
        const MatrixXcd weight = partial_trace_keep(traj.states.back(), frozen.dims(), 2);
        CHECK(weight(0, 0).real() < 1e-50);
        CHECK(weight(2, 2).real() < 1e-50);
        CHECK(weight(1, 1).real() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("engine frame generator matches the dense Liouvillian") {
    const EngineSpec spec(1.0, 0.5, {10, 5}, {0.2, 0.2}, 0.1, 4, 2);
    const MatrixXcd rho0 = engine_initial_state(spec);   // diagonal start
    const double t_final = 10.0, dt = 0.002;
    const Trajectory dense = evolve(assemble_engine_liouvillian(spec), rho0, t_final, dt, 1 << 30);
    const Trajectory frame =
        evolve(make_engine_frame_generator(spec), rho0, t_final, dt, 1 << 30);
    CHECK((dense.states.back() - frame.states.back()).cwiseAbs().maxCoeff() < 1e-8);
}
