#include "popcov/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "popcov/error.hpp"

namespace popcov {

namespace {

void require_dim(std::size_t dim) {
    if (dim < 2) throw InputError("symmetric matrix dimension must be at least 2, got " + std::to_string(dim));
}

void require_same_dim(const SymMat& a, const SymMat& b) {
    if (a.dim() != b.dim())
        throw InputError("dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

}  // namespace

SymMat::SymMat(std::size_t dim) : dim_(dim) {
    require_dim(dim);
    data_.assign(packed_size(dim), 0.0);
}

SymMat::SymMat(std::size_t dim, std::vector<double> packed) : dim_(dim), data_(std::move(packed)) {
    require_dim(dim);
    if (data_.size() != packed_size(dim))
        throw InputError("packed storage has " + std::to_string(data_.size()) + " values, expected " +
                         std::to_string(packed_size(dim)));
}

SymMat SymMat::identity(std::size_t dim) {
    SymMat a(dim);
    for (std::size_t i = 0; i < dim; ++i) a(i, i) = 1.0;
    return a;
}

SymMat SymMat::ones(std::size_t dim) {
    return SymMat(dim, std::vector<double>(packed_size(dim), 1.0));
}

SymMat SymMat::sym_outer(std::span<const double> v, std::span<const double> w) {
    if (v.size() != w.size()) throw InputError("sym_outer: vector lengths differ");
    const std::size_t m = v.size();
    SymMat a(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) a(i, j) = v[i] * w[j] + w[i] * v[j];
    return a;
}

SymMat SymMat::from_dense(const Eigen::MatrixXd& a, double tol) {
    if (a.rows() != a.cols()) throw InputError("matrix is not square");
    const auto m = static_cast<std::size_t>(a.rows());
    SymMat s(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            const double x = a(i, j), y = a(j, i);
            if (std::abs(x - y) > tol * std::max({1.0, std::abs(x), std::abs(y)}))
                throw InputError("matrix is not symmetric at (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ")");
            s(i, j) = 0.5 * (x + y);
        }
    }
    return s;
}

Eigen::MatrixXd SymMat::to_dense() const {
    Eigen::MatrixXd a(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j) a(i, j) = a(j, i) = (*this)(i, j);
    return a;
}

std::vector<double> SymMat::row_sums() const {
    std::vector<double> r(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) r[i] += (*this)(i, j);
    return r;
}

double SymMat::total_sum() const {
    double s = 0.0;
    for (double r : row_sums()) s += r;
    return s;
}

double SymMat::max_abs() const {
    double mx = 0.0;
    for (double x : data_) mx = std::max(mx, std::abs(x));
    return mx;
}

bool SymMat::is_diagonal() const {
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i + 1; j < dim_; ++j)
            if ((*this)(i, j) != 0.0) return false;
    return true;
}

SymMat& SymMat::operator+=(const SymMat& other) {
    require_same_dim(*this, other);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

SymMat& SymMat::operator-=(const SymMat& other) {
    require_same_dim(*this, other);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

SymMat& SymMat::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
SymMat operator-(SymMat a, const SymMat& b) { return a -= b; }
SymMat operator*(SymMat a, double s) { return a *= s; }
SymMat operator*(double s, SymMat a) { return a *= s; }

double frobenius_inner(const SymMat& a, const SymMat& b) {
    require_same_dim(a, b);
    const std::size_t m = a.dim();
    double diag = 0.0, off = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        diag += a(i, i) * b(i, i);
        for (std::size_t j = i + 1; j < m; ++j) off += a(i, j) * b(i, j);
    }
    return diag + 2.0 * off;
}

double frobenius_norm(const SymMat& a) { return std::sqrt(frobenius_inner(a, a)); }

double relative_error(const SymMat& a, const SymMat& b, double floor) {
    return frobenius_norm(a - b) / std::max(frobenius_norm(b), floor);
}

double min_eigenvalue(const SymMat& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.to_dense(), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

}  // namespace popcov
