#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "popcov/symmat.hpp"

namespace popcov {

/// The linear maps on symmetric matrices relating the covariance
/// statistics. HalfNegD is -D/2.
enum class OperatorKind { W, D, V, HalfNegD };

std::string_view to_string(OperatorKind kind);

/// (I - E/m) A (I - E/m), evaluated through row and grand means.
SymMat apply_W(const SymMat& a);
/// A_ii + A_jj - 2 A_ij
SymMat apply_D(const SymMat& a);
/// A - (1/m^2) E A E, i.e. A minus its grand mean times E.
SymMat apply_V(const SymMat& a);
SymMat apply(OperatorKind kind, const SymMat& a);

/// Spanning set of the kernel: {e_i e^t + e e_i^t} for W, D and -D/2; {E} for V.
std::vector<SymMat> kernel_basis(OperatorKind kind, std::size_t m);

/// Coordinates in the Frobenius-orthonormal basis of S_m: diagonal units
/// first, then (e_i e_j^t + e_j e_i^t)/sqrt(2) for i < j in lexicographic order.
Eigen::VectorXd vectorize(const SymMat& a);
SymMat unvectorize(const Eigen::VectorXd& coords, std::size_t m);

inline constexpr std::size_t kDefaultOperatorCap = 64;

/// d x d matrix of the operator in the orthonormal basis, d = m(m+1)/2.
Eigen::MatrixXd operator_matrix(OperatorKind kind, std::size_t m, std::size_t cap = kDefaultOperatorCap);
/// Largest singular value of operator_matrix. Throws InputError above the cap.
double operator_norm(OperatorKind kind, std::size_t m, std::size_t cap = kDefaultOperatorCap);
/// Numerical rank of operator_matrix (pivoted QR, relative threshold 1e-9).
std::size_t operator_rank(OperatorKind kind, std::size_t m, std::size_t cap = kDefaultOperatorCap);

}  // namespace popcov
