#include <doctest.h>

#include <complex>

#include "qtm/tensor.hpp"

using namespace qtm;
using Eigen::MatrixXcd;

namespace {

MatrixXcd pseudo_random(Index rows, Index cols, unsigned seed) {
    MatrixXcd m(rows, cols);
    unsigned s = seed;
    auto next = [&s]() {
        s = s * 1664525u + 1013904223u;
        return static_cast<double>(s) / 4294967296.0 - 0.5;
    };
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = std::complex<double>(next(), next());
    return m;
}

} // namespace

TEST_CASE("kron matches the index convention") {
    MatrixXcd a = pseudo_random(2, 2, 1);
    MatrixXcd b = pseudo_random(3, 3, 2);
    MatrixXcd k = kron(a, b);
    REQUIRE(k.rows() == 6);
    for (Index i1 = 0; i1 < 2; ++i1)
        for (Index i2 = 0; i2 < 3; ++i2)
            for (Index j1 = 0; j1 < 2; ++j1)
                for (Index j2 = 0; j2 < 3; ++j2)
                    CHECK(k(i1 * 3 + i2, j1 * 3 + j2) == a(i1, j1) * b(i2, j2));
}

TEST_CASE("embed places an operator on one factor") {
    std::vector<Index> dims{2, 3, 2};
    MatrixXcd op = pseudo_random(3, 3, 7);
    MatrixXcd id2 = MatrixXcd::Identity(2, 2);
    CHECK((embed(op, dims, 1) - kron(id2, kron(op, id2))).norm() == 0.0);
    CHECK_THROWS_AS(embed(op, dims, 0), std::invalid_argument);
    CHECK_THROWS_AS(embed(op, dims, 5), std::invalid_argument);
}

TEST_CASE("partial traces invert tensor products") {
    std::vector<Index> dims{2, 3, 2};
    MatrixXcd a = pseudo_random(2, 2, 3);
    MatrixXcd b = pseudo_random(3, 3, 4);
    MatrixXcd c = pseudo_random(2, 2, 5);
    const std::complex<double> tb = b.trace(), ta = a.trace(), tc = c.trace();
    MatrixXcd full = kron(a, kron(b, c));

    CHECK((partial_trace_keep(full, dims, 1) - ta * tc * b).norm() < 1e-13);
    CHECK((partial_trace_keep(full, dims, 0) - tb * tc * a).norm() < 1e-13);
    CHECK((partial_trace_out(full, dims, 1) - tb * kron(a, c)).norm() < 1e-13);
    CHECK((partial_trace_out(full, dims, 2) - tc * kron(a, b)).norm() < 1e-13);

    // trace of any reduction equals the full trace
    const std::complex<double> t = full.trace();
    CHECK(std::abs(partial_trace_keep(full, dims, 2).trace() - t) < 1e-13);
}

TEST_CASE("insert_factor is the inverse of tracing a slot out") {
    std::vector<Index> dims{2, 2, 3};
    MatrixXcd tau = pseudo_random(2, 2, 11);
    MatrixXcd rest = pseudo_random(6, 6, 12);
    MatrixXcd assembled = insert_factor(tau, rest, dims, 1);
    CHECK((partial_trace_out(assembled, dims, 1) - tau.trace() * rest).norm() < 1e-13);
    CHECK((partial_trace_keep(assembled, dims, 1) - rest.trace() * tau).norm() < 1e-13);

    // slot 0 insertion is a plain Kronecker product
    MatrixXcd front = insert_factor(tau, rest, {2, 2, 3}, 0);
    CHECK((front - kron(tau, rest)).norm() == 0.0);
}

TEST_CASE("vec is column-major and trace_row sums the diagonal") {
    MatrixXcd m = pseudo_random(3, 3, 21);
    Eigen::VectorXcd v = vec(m);
    CHECK(v(0 + 3 * 1) == m(0, 1));
    CHECK(v(2 + 3 * 0) == m(2, 0));
    CHECK((unvec(v, 3) - m).norm() == 0.0);
    CHECK(std::abs((trace_row(3) * v)(0) - m.trace()) < 1e-15);

    // vec(A X B) = (B^T kron A) vec(X)
    MatrixXcd a = pseudo_random(3, 3, 22), b = pseudo_random(3, 3, 23);
    CHECK((kron(b.transpose(), a) * vec(m) - vec(a * m * b)).norm() < 1e-13);
}
