#include "popcov/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "popcov/error.hpp"

namespace popcov {

std::string_view to_string(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::W: return "W";
        case OperatorKind::D: return "D";
        case OperatorKind::V: return "V";
        case OperatorKind::HalfNegD: return "-D/2";
    }
    return "?";
}

SymMat apply_W(const SymMat& a) {
    const std::size_t m = a.dim();
    const double inv_m = 1.0 / static_cast<double>(m);
    std::vector<double> row_mean = a.row_sums();
    double grand = 0.0;
    for (double& r : row_mean) {
        grand += r;
        r *= inv_m;
    }
    grand *= inv_m * inv_m;
    SymMat w(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) w(i, j) = a(i, j) - row_mean[i] - row_mean[j] + grand;
    return w;
}

SymMat apply_D(const SymMat& a) {
    const std::size_t m = a.dim();
    SymMat d(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) d(i, j) = a(i, i) + a(j, j) - 2.0 * a(i, j);
    return d;
}

SymMat apply_V(const SymMat& a) {
    const double m = static_cast<double>(a.dim());
    const double grand = a.total_sum() / (m * m);
    SymMat v = a;
    for (double& x : v.packed()) x -= grand;
    return v;
}

SymMat apply(OperatorKind kind, const SymMat& a) {
    switch (kind) {
        case OperatorKind::W: return apply_W(a);
        case OperatorKind::D: return apply_D(a);
        case OperatorKind::V: return apply_V(a);
        case OperatorKind::HalfNegD: return apply_D(a) * -0.5;
    }
    throw std::logic_error("unknown operator kind");
}

std::vector<SymMat> kernel_basis(OperatorKind kind, std::size_t m) {
    if (m < 2) throw InputError("kernel_basis: m must be at least 2");
    if (kind == OperatorKind::V) return {SymMat::ones(m)};
    std::vector<SymMat> basis;
    basis.reserve(m);
    const std::vector<double> e(m, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> ei(m, 0.0);
        ei[i] = 1.0;
        basis.push_back(SymMat::sym_outer(ei, e));
    }
    return basis;
}

Eigen::VectorXd vectorize(const SymMat& a) {
    const std::size_t m = a.dim();
    Eigen::VectorXd v(SymMat::packed_size(m));
    std::size_t k = 0;
    for (std::size_t i = 0; i < m; ++i) v(k++) = a(i, i);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) v(k++) = std::sqrt(2.0) * a(i, j);
    return v;
}

SymMat unvectorize(const Eigen::VectorXd& coords, std::size_t m) {
    if (static_cast<std::size_t>(coords.size()) != SymMat::packed_size(m))
        throw InputError("unvectorize: coordinate count does not match m");
    SymMat a(m);
    std::size_t k = 0;
    for (std::size_t i = 0; i < m; ++i) a(i, i) = coords(k++);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) a(i, j) = coords(k++) / std::sqrt(2.0);
    return a;
}

Eigen::MatrixXd operator_matrix(OperatorKind kind, std::size_t m, std::size_t cap) {
    if (m < 2) throw InputError("operator_matrix: m must be at least 2");
    if (m > cap)
        throw InputError("operator_matrix: m=" + std::to_string(m) + " exceeds the dimension cap " +
                         std::to_string(cap));
    const std::size_t d = SymMat::packed_size(m);
    Eigen::MatrixXd op(d, d);
    for (std::size_t c = 0; c < d; ++c) {
        Eigen::VectorXd unit = Eigen::VectorXd::Zero(d);
        unit(c) = 1.0;
        op.col(c) = vectorize(apply(kind, unvectorize(unit, m)));
    }
    return op;
}

// Eigen 3.4's divide-and-conquer SVD loses accuracy on these heavily
// degenerate spectra (errors near 1e-6), so the norm comes from the symmetric
// eigensolver on op^t op and the rank from a column-pivoted QR.
double operator_norm(OperatorKind kind, std::size_t m, std::size_t cap) {
    const Eigen::MatrixXd op = operator_matrix(kind, m, cap);
    const Eigen::MatrixXd gram = op.transpose() * op;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(eig.eigenvalues().maxCoeff(), 0.0));
}

std::size_t operator_rank(OperatorKind kind, std::size_t m, std::size_t cap) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(operator_matrix(kind, m, cap));
    qr.setThreshold(1e-9);
    return static_cast<std::size_t>(qr.rank());
}

}  // namespace popcov
