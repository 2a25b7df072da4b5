#include "popcov/estimators.hpp"

#include <string>

#include "popcov/error.hpp"
#include "popcov/operators.hpp"

namespace popcov {

namespace {

// Adds the packed upper triangle of v v^t.
void add_outer(std::span<const double> v, KahanVector& acc) {
    const std::size_t m = v.size();
    std::size_t idx = 0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) acc.add(idx++, v[i] * v[j]);
}

SymMat mean_of(std::size_t m, std::vector<double> sums, double count) {
    for (double& s : sums) s /= count;
    return SymMat(m, std::move(sums));
}

auto row_outer(const FreqPanel& panel) {
    return [&panel](std::size_t k, KahanVector& acc) { add_outer(panel.row(k), acc); };
}

auto pair_outer(const FreqPanel& panel, const PairedPanel& pairing) {
    return [&panel, &pairing](std::size_t p, KahanVector& acc) {
        const std::size_t m = panel.n_pops();
        thread_local std::vector<double> diff;
        diff.resize(m);
        const auto a = panel.row(pairing.pairs[p].first);
        const auto b = panel.row(pairing.pairs[p].second);
        for (std::size_t i = 0; i < m; ++i) diff[i] = b[i] - a[i];
        add_outer(diff, acc);
    };
}

}  // namespace

SymMat moment_matrix(const FreqPanel& panel, const ParallelOptions& opts) {
    const std::size_t m = panel.n_pops();
    return mean_of(m, chunked_sum(panel.n_snps(), SymMat::packed_size(m), row_outer(panel), opts),
                   static_cast<double>(panel.n_snps()));
}

SymMat moment_matrix_serial(const FreqPanel& panel) {
    const std::size_t m = panel.n_pops();
    return mean_of(m, serial_sum(panel.n_snps(), SymMat::packed_size(m), row_outer(panel)),
                   static_cast<double>(panel.n_snps()));
}

SymMat sigma_hat(const FreqPanel& panel, const KnownMeans& means, const ParallelOptions& opts) {
    if (means.mu.size() != panel.n_snps())
        throw InputError("known means have " + std::to_string(means.mu.size()) + " entries, panel has " +
                         std::to_string(panel.n_snps()) + " SNPs");
    const std::size_t m = panel.n_pops();
    auto centered = [&](std::size_t k, KahanVector& acc) {
        thread_local std::vector<double> x;
        x.assign(panel.row(k).begin(), panel.row(k).end());
        for (double& v : x) v -= means.mu[k];
        add_outer(x, acc);
    };
    return mean_of(m, chunked_sum(panel.n_snps(), SymMat::packed_size(m), centered, opts),
                   static_cast<double>(panel.n_snps()));
}

SymMat w_hat(const FreqPanel& panel, const ParallelOptions& opts) { return apply_W(moment_matrix(panel, opts)); }
SymMat d_hat(const FreqPanel& panel, const ParallelOptions& opts) { return apply_D(moment_matrix(panel, opts)); }
SymMat v_hat(const FreqPanel& panel, const ParallelOptions& opts) { return apply_V(moment_matrix(panel, opts)); }

Estimates estimate_all(const FreqPanel& panel, const ParallelOptions& opts) {
    SymMat y = moment_matrix(panel, opts);
    SymMat w = apply_W(y), d = apply_D(y), v = apply_V(y);
    return {std::move(y), std::move(w), std::move(d), std::move(v)};
}

SymMat s_hat(const FreqPanel& panel, const PairedPanel& pairing, const ParallelOptions& opts) {
    pairing.validate(panel.n_snps());
    const std::size_t m = panel.n_pops();
    return mean_of(m, chunked_sum(pairing.size(), SymMat::packed_size(m), pair_outer(panel, pairing), opts),
                   2.0 * static_cast<double>(pairing.size()));
}

SymMat s_hat_serial(const FreqPanel& panel, const PairedPanel& pairing) {
    pairing.validate(panel.n_snps());
    const std::size_t m = panel.n_pops();
    return mean_of(m, serial_sum(pairing.size(), SymMat::packed_size(m), pair_outer(panel, pairing)),
                   2.0 * static_cast<double>(pairing.size()));
}

}  // namespace popcov
