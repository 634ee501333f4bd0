#include "qtm/tensor.hpp"

#include <stdexcept>

namespace qtm {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Index product_dim(const std::vector<Index>& dims) {
    Index d = 1;
    for (Index dk : dims) d *= dk;
    return d;
}

namespace {

void check_slot(const std::vector<Index>& dims, Index slot) {
    if (slot < 0 || slot >= static_cast<Index>(dims.size()))
        throw std::invalid_argument("subsystem index out of range");
}

// Flat index from the digit of `slot` and the rank of the complementary digits.
Index compose(Index slot_digit, Index rest_rank, const std::vector<Index>& dims, Index slot) {
    Index post = 1;
    for (Index k = slot + 1; k < static_cast<Index>(dims.size()); ++k) post *= dims[k];
    const Index pre = rest_rank / post;
    const Index suf = rest_rank % post;
    return (pre * dims[slot] + slot_digit) * post + suf;
}

} // namespace

Eigen::MatrixXcd embed(const Eigen::MatrixXcd& op, const std::vector<Index>& dims, Index slot) {
    check_slot(dims, slot);
    if (op.rows() != dims[slot] || op.cols() != dims[slot])
        throw std::invalid_argument("embedded operator does not match the subsystem dimension");
    const Index d = product_dim(dims);
    const Index rest = d / dims[slot];
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (Index a = 0; a < dims[slot]; ++a)
        for (Index b = 0; b < dims[slot]; ++b) {
            if (op(a, b) == 0.0) continue;
            for (Index r = 0; r < rest; ++r)
                out(compose(a, r, dims, slot), compose(b, r, dims, slot)) = op(a, b);
        }
    return out;
}

Eigen::MatrixXcd partial_trace_keep(const Eigen::MatrixXcd& rho,
                                    const std::vector<Index>& dims, Index slot) {
    check_slot(dims, slot);
    const Index d = product_dim(dims);
    if (rho.rows() != d || rho.cols() != d)
        throw std::invalid_argument("state dimension does not match the subsystem list");
    const Index dk = dims[slot];
    const Index rest = d / dk;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
    for (Index a = 0; a < dk; ++a)
        for (Index b = 0; b < dk; ++b)
            for (Index r = 0; r < rest; ++r)
                out(a, b) += rho(compose(a, r, dims, slot), compose(b, r, dims, slot));
    return out;
}

Eigen::MatrixXcd partial_trace_out(const Eigen::MatrixXcd& rho,
                                   const std::vector<Index>& dims, Index slot) {
    check_slot(dims, slot);
    const Index d = product_dim(dims);
    if (rho.rows() != d || rho.cols() != d)
        throw std::invalid_argument("state dimension does not match the subsystem list");
    const Index dk = dims[slot];
    const Index rest = d / dk;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rest, rest);
    for (Index r = 0; r < rest; ++r)
        for (Index s = 0; s < rest; ++s)
            for (Index a = 0; a < dk; ++a)
                out(r, s) += rho(compose(a, r, dims, slot), compose(a, s, dims, slot));
    return out;
}

Eigen::MatrixXcd insert_factor(const Eigen::MatrixXcd& factor, const Eigen::MatrixXcd& sigma,
                               const std::vector<Index>& dims, Index slot) {
    check_slot(dims, slot);
    const Index d = product_dim(dims);
    const Index dk = dims[slot];
    const Index rest = d / dk;
    if (factor.rows() != dk || factor.cols() != dk)
        throw std::invalid_argument("inserted factor does not match the subsystem dimension");
    if (sigma.rows() != rest || sigma.cols() != rest)
        throw std::invalid_argument("remainder block does not match the complementary dimension");
    Eigen::MatrixXcd out(d, d);
    for (Index a = 0; a < dk; ++a)
        for (Index b = 0; b < dk; ++b)
            for (Index r = 0; r < rest; ++r)
                for (Index s = 0; s < rest; ++s)
                    out(compose(a, r, dims, slot), compose(b, s, dims, slot)) =
                        factor(a, b) * sigma(r, s);
    return out;
}

Eigen::VectorXcd vec(const Eigen::MatrixXcd& m) {
    return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

Eigen::MatrixXcd unvec(const Eigen::VectorXcd& v, Index dim) {
    if (v.size() != dim * dim)
        throw std::invalid_argument("vectorized state has the wrong length");
    return Eigen::Map<const Eigen::MatrixXcd>(v.data(), dim, dim);
}

Eigen::RowVectorXcd trace_row(Index dim) {
    Eigen::RowVectorXcd t = Eigen::RowVectorXcd::Zero(dim * dim);
    for (Index i = 0; i < dim; ++i) t(i + dim * i) = 1.0;
    return t;
}

} // namespace qtm
