#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace popcov {

/// Dense symmetric m x m matrix stored as its packed upper triangle
/// (row-major, i <= j). Dimension is at least 2.
class SymMat {
public:
    explicit SymMat(std::size_t dim);
    SymMat(std::size_t dim, std::vector<double> packed);

    static SymMat identity(std::size_t dim);
    static SymMat ones(std::size_t dim);  // E
    /// v w^t + w v^t
    static SymMat sym_outer(std::span<const double> v, std::span<const double> w);
    /// Symmetrizes (A + A^t)/2; throws InputError if asymmetry exceeds tol.
    static SymMat from_dense(const Eigen::MatrixXd& a, double tol = 1e-9);

    std::size_t dim() const { return dim_; }
    static std::size_t packed_size(std::size_t dim) { return dim * (dim + 1) / 2; }
    static std::size_t packed_index(std::size_t dim, std::size_t i, std::size_t j) {
        if (i > j) std::swap(i, j);
        return i * (2 * dim - i + 1) / 2 + (j - i);
    }

    double operator()(std::size_t i, std::size_t j) const { return data_[packed_index(dim_, i, j)]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[packed_index(dim_, i, j)]; }

    std::span<const double> packed() const { return data_; }
    std::span<double> packed() { return data_; }

    Eigen::MatrixXd to_dense() const;
    std::vector<double> row_sums() const;
    double total_sum() const;
    double max_abs() const;
    bool is_diagonal() const;

    SymMat& operator+=(const SymMat& other);
    SymMat& operator-=(const SymMat& other);
    SymMat& operator*=(double s);

    friend bool operator==(const SymMat&, const SymMat&) = default;

private:
    std::size_t dim_;
    std::vector<double> data_;
};

SymMat operator+(SymMat a, const SymMat& b);
SymMat operator-(SymMat a, const SymMat& b);
SymMat operator*(SymMat a, double s);
SymMat operator*(double s, SymMat a);

double frobenius_inner(const SymMat& a, const SymMat& b);
double frobenius_norm(const SymMat& a);
/// ||a - b||_F / max(||b||_F, floor)
double relative_error(const SymMat& a, const SymMat& b, double floor = 1e-300);
double min_eigenvalue(const SymMat& a);

}  // namespace popcov
