#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "popcov/symmat.hpp"

namespace popcov {

/// Linear subspace of S_m given by a basis, with its Frobenius Gram matrix.
class MatrixSubspace {
public:
    /// Throws InputError when the basis is empty, mixes dimensions, is
    /// numerically dependent (Gram condition >= 1e12), or, with
    /// `within_v_image`, contains an element whose entries do not sum to 0.
    explicit MatrixSubspace(std::vector<SymMat> basis, bool within_v_image = true);

    std::size_t dim_m() const { return dim_m_; }
    std::size_t size() const { return basis_.size(); }
    const std::vector<SymMat>& basis() const { return basis_; }
    const Eigen::MatrixXd& gram() const { return gram_; }
    double gram_condition() const { return condition_; }
    /// Solves gram() * x = rhs.
    Eigen::VectorXd solve_gram(const Eigen::VectorXd& rhs) const { return factor_.solve(rhs); }

private:
    std::size_t dim_m_;
    std::vector<SymMat> basis_;
    Eigen::MatrixXd gram_;
    Eigen::LLT<Eigen::MatrixXd> factor_;
    double condition_;

};

struct Projection {
    SymMat fit;
    std::vector<double> coefficients;
    SymMat residual;
};

/// Frobenius least-squares projection of m onto the subspace.
Projection project(const SymMat& m, const MatrixSubspace& l);

/// Independent subset of `elements` by pivoted Gram-Schmidt; an element is
/// dropped when its residual norm is below rel_tol * max(max_i ||B_i||_F, scale).
/// Pass `scale` when the elements are images of a larger basis, so that
/// round-off images are not mistaken for directions.
/// Returns an empty vector when everything is (numerically) zero.
std::vector<SymMat> prune_basis(const std::vector<SymMat>& elements, double rel_tol = 1e-10, double scale = 0.0);

/// True iff W(B) lies in the subspace for every basis element B.
bool w_invariance_check(const MatrixSubspace& l);

struct LsPair {
    SymMat v_fit;   // projection of V-hat onto L
    SymMat w_fit;   // projection of W-hat onto W(L)
    double gap;     // ||w_fit - W(v_fit)||_F
    bool consistent;
};

/// Fits V-hat on L and W-hat on W(L). Requires what == W(vhat) within 1e-9.
LsPair ls_pair(const SymMat& vhat, const SymMat& what, const MatrixSubspace& l);

}  // namespace popcov
