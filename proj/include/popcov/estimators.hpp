#pragma once

#include "popcov/panel.hpp"
#include "popcov/parallel.hpp"
#include "popcov/symmat.hpp"

namespace popcov {

// Estimators of the covariance structure from a panel X^1..X^n in R^m.
// Every one of them is a linear image of the moment matrix
//   Y = (1/n) sum_k X^k (X^k)^t,
// so W-hat = W(Y), D-hat = D(Y), V-hat = V(Y).

SymMat moment_matrix(const FreqPanel& panel, const ParallelOptions& opts = {});
SymMat moment_matrix_serial(const FreqPanel& panel);

/// (1/n) sum_k (X^k - mu_k e)(X^k - mu_k e)^t with known per-SNP means.
SymMat sigma_hat(const FreqPanel& panel, const KnownMeans& means, const ParallelOptions& opts = {});

SymMat w_hat(const FreqPanel& panel, const ParallelOptions& opts = {});
SymMat d_hat(const FreqPanel& panel, const ParallelOptions& opts = {});
SymMat v_hat(const FreqPanel& panel, const ParallelOptions& opts = {});

/// All three mean-free statistics from a single pass.
struct Estimates {
    SymMat moment, w, d, v;
};
Estimates estimate_all(const FreqPanel& panel, const ParallelOptions& opts = {});

/// (1/(2p)) sum over the p pairs (a,b) of (X^b - X^a)(X^b - X^a)^t.
SymMat s_hat(const FreqPanel& panel, const PairedPanel& pairing, const ParallelOptions& opts = {});
SymMat s_hat_serial(const FreqPanel& panel, const PairedPanel& pairing);

}  // namespace popcov
