#pragma once

// Reference computations used by the tests. They work on dense Eigen
// matrices and direct definitions, independent of the library's packed
// storage and single-pass kernels.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "popcov/panel.hpp"
#include "popcov/symmat.hpp"

namespace oracle {

using Dense = Eigen::MatrixXd;

inline Dense ones(Eigen::Index m) { return Dense::Ones(m, m); }

inline Dense W(const Dense& a) {
    const auto m = a.rows();
    const Dense p = Dense::Identity(m, m) - ones(m) / static_cast<double>(m);
    return p * a * p;
}

inline Dense D(const Dense& a) {
    const auto m = a.rows();
    Dense d(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) d(i, j) = a(i, i) + a(j, j) - 2.0 * a(i, j);
    return d;
}

inline Dense V(const Dense& a) {
    const double m = static_cast<double>(a.rows());
    return a - ones(a.rows()) * a * ones(a.rows()) / (m * m);
}

inline double max_abs_diff(const Dense& a, const Dense& b) { return (a - b).cwiseAbs().maxCoeff(); }

// ---- estimators by their defining sums over SNPs

inline Dense moment(const popcov::FreqPanel& p) {
    const auto m = static_cast<Eigen::Index>(p.n_pops());
    Dense y = Dense::Zero(m, m);
    for (std::size_t k = 0; k < p.n_snps(); ++k)
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) y(i, j) += p(k, i) * p(k, j);
    return y / static_cast<double>(p.n_snps());
}

inline double snp_mean(const popcov::FreqPanel& p, std::size_t k) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.n_pops(); ++i) s += p(k, i);
    return s / static_cast<double>(p.n_pops());
}

inline Dense w_hat(const popcov::FreqPanel& p) {
    const auto m = static_cast<Eigen::Index>(p.n_pops());
    Dense w = Dense::Zero(m, m);
    for (std::size_t k = 0; k < p.n_snps(); ++k) {
        const double mu = snp_mean(p, k);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) w(i, j) += (p(k, i) - mu) * (p(k, j) - mu);
    }
    return w / static_cast<double>(p.n_snps());
}

inline Dense d_hat(const popcov::FreqPanel& p) {
    const auto m = static_cast<Eigen::Index>(p.n_pops());
    Dense d = Dense::Zero(m, m);
    for (std::size_t k = 0; k < p.n_snps(); ++k)
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) d(i, j) += std::pow(p(k, i) - p(k, j), 2);
    return d / static_cast<double>(p.n_snps());
}

// Per-SNP form: (1/n) sum_k [X^k X^k^t - mu_k^2 E].
inline Dense v_hat(const popcov::FreqPanel& p) {
    const auto m = static_cast<Eigen::Index>(p.n_pops());
    Dense v = Dense::Zero(m, m);
    for (std::size_t k = 0; k < p.n_snps(); ++k) {
        const double mu = snp_mean(p, k);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) v(i, j) += p(k, i) * p(k, j) - mu * mu;
    }
    return v / static_cast<double>(p.n_snps());
}

inline Dense s_hat(const popcov::FreqPanel& p, const popcov::PairedPanel& pairs) {
    const auto m = static_cast<Eigen::Index>(p.n_pops());
    Dense s = Dense::Zero(m, m);
    for (const auto& [a, b] : pairs.pairs)
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) s(i, j) += (p(b, i) - p(a, i)) * (p(b, j) - p(a, j));
    return s / (2.0 * static_cast<double>(pairs.size()));
}

// ---- operator norm through an independent basis of S_m
//
// Orthonormal basis of the symmetric matrices inside R^{m*m} (full grid,
// column-major vec) from a QR of random symmetric matrices; the operator is
// applied with the dense formulas above and its largest singular value taken.
template <class Op>
double operator_norm(Op op, Eigen::Index m, std::uint64_t seed = 99) {
    const Eigen::Index d = m * (m + 1) / 2;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    Dense spanning(m * m, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        Dense a(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = i; j < m; ++j) a(i, j) = a(j, i) = z(rng);
        spanning.col(c) = Eigen::Map<Eigen::VectorXd>(a.data(), m * m);
    }
    const Dense q = Eigen::HouseholderQR<Dense>(spanning).householderQ() * Dense::Identity(m * m, d);
    Dense image(m * m, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        Dense a = Eigen::Map<const Dense>(q.col(c).data(), m, m);
        Dense t = op(a);
        image.col(c) = Eigen::Map<Eigen::VectorXd>(t.data(), m * m);
    }
    return Eigen::JacobiSVD<Dense>(q.transpose() * image).singularValues()(0);
}

}  // namespace oracle
