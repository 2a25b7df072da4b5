#include "popcov/lsfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "popcov/error.hpp"
#include "popcov/operators.hpp"

namespace popcov {

MatrixSubspace::MatrixSubspace(std::vector<SymMat> basis, bool within_v_image)
    : dim_m_(basis.empty() ? 0 : basis.front().dim()), basis_(std::move(basis)) {
    if (basis_.empty()) throw InputError("subspace basis is empty");
    const std::size_t k = basis_.size();
    for (std::size_t b = 0; b < k; ++b) {
        if (basis_[b].dim() != dim_m_) throw InputError("subspace basis elements have different dimensions");
        if (within_v_image && std::abs(basis_[b].total_sum()) > 1e-9 * std::max(1.0, frobenius_norm(basis_[b])))
            throw InputError("basis element " + std::to_string(b + 1) +
                             " has nonzero entry sum; it is not in the image of V");
    }
    gram_.resize(k, k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = r; c < k; ++c) gram_(r, c) = gram_(c, r) = frobenius_inner(basis_[r], basis_[c]);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram_, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
    condition_ = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (!(condition_ < 1e12))
        throw InputError("subspace basis is rank-deficient (Gram condition number " + std::to_string(condition_) + ")");
    factor_.compute(gram_);
    if (factor_.info() != Eigen::Success) throw InputError("subspace Gram matrix is not positive definite");
}

Projection project(const SymMat& m, const MatrixSubspace& l) {
    if (m.dim() != l.dim_m())
        throw InputError("project: matrix is " + std::to_string(m.dim()) + "x" + std::to_string(m.dim()) +
                         ", subspace lives in dimension " + std::to_string(l.dim_m()));
    const std::size_t k = l.size();
    Eigen::VectorXd rhs(k);
    for (std::size_t b = 0; b < k; ++b) rhs(b) = frobenius_inner(m, l.basis()[b]);
    const Eigen::VectorXd coef = l.solve_gram(rhs);

    SymMat fit(m.dim());
    for (std::size_t b = 0; b < k; ++b) fit += l.basis()[b] * coef(b);
    SymMat residual = m - fit;
    return {std::move(fit), std::vector<double>(coef.data(), coef.data() + k), std::move(residual)};
}

std::vector<SymMat> prune_basis(const std::vector<SymMat>& elements, double rel_tol, double scale) {
    for (const auto& e : elements) scale = std::max(scale, frobenius_norm(e));
    if (scale == 0.0) return {};
    const double drop = rel_tol * scale;

    std::vector<SymMat> residual = elements;
    std::vector<bool> used(elements.size(), false);
    std::vector<SymMat> kept;
    while (true) {
        // Pivot: the remaining element with the largest residual.
        std::size_t pivot = elements.size();
        double best = drop;
        for (std::size_t i = 0; i < residual.size(); ++i) {
            if (used[i]) continue;
            const double nrm = frobenius_norm(residual[i]);
            if (nrm > best) {
                best = nrm;
                pivot = i;
            }
        }
        if (pivot == elements.size()) break;
        used[pivot] = true;
        kept.push_back(elements[pivot]);
        const SymMat q = residual[pivot] * (1.0 / best);
        for (std::size_t i = 0; i < residual.size(); ++i)
            if (!used[i]) residual[i] -= q * frobenius_inner(q, residual[i]);
    }
    return kept;
}

bool w_invariance_check(const MatrixSubspace& l) {
    for (const auto& b : l.basis()) {
        const SymMat wb = apply_W(b);
        if (frobenius_norm(project(wb, l).residual) > 1e-9 * std::max(frobenius_norm(b), 1e-300)) return false;
    }
    return true;
}

LsPair ls_pair(const SymMat& vhat, const SymMat& what, const MatrixSubspace& l) {
    if (frobenius_norm(what - apply_W(vhat)) > 1e-9 * (1.0 + frobenius_norm(vhat)))
        throw InputError("ls_pair: W-hat is not W(V-hat)");
    SymMat v_fit = project(vhat, l).fit;

    std::vector<SymMat> w_images;
    double scale = 0.0;
    for (const auto& b : l.basis()) {
        w_images.push_back(apply_W(b));
        scale = std::max(scale, frobenius_norm(b));
    }
    std::vector<SymMat> w_basis = prune_basis(w_images, 1e-10, scale);
    SymMat w_fit = w_basis.empty() ? SymMat(vhat.dim()) : project(what, MatrixSubspace(std::move(w_basis))).fit;

    const double gap = frobenius_norm(w_fit - apply_W(v_fit));
    const bool consistent = gap <= 1e-8 * (1.0 + frobenius_norm(vhat));
    return {std::move(v_fit), std::move(w_fit), gap, consistent};
}

}  // namespace popcov
