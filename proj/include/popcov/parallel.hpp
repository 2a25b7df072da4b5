#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <omp.h>

namespace popcov {

/// Chunking and threading for the map-reduce kernels. Results depend on
/// chunk_size only, never on the thread count.
struct ParallelOptions {
    std::size_t chunk_size = 16384;
    int threads = 0;  // 0: OpenMP default
};

/// Thread count to use: explicit value if positive, else POPCOV_THREADS,
/// else the OpenMP default.
int resolve_threads(int requested);

/// Compensated running sum over a fixed-width vector.
class KahanVector {
public:
    explicit KahanVector(std::size_t width) : sum_(width, 0.0), comp_(width, 0.0) {}

    void add(std::size_t idx, double x) {
        const double y = x - comp_[idx];
        const double t = sum_[idx] + y;
        comp_[idx] = (t - sum_[idx]) - y;
        sum_[idx] = t;
    }
    void add(std::span<const double> xs) {
        for (std::size_t k = 0; k < xs.size(); ++k) add(k, xs[k]);
    }
    std::size_t width() const { return sum_.size(); }
    const std::vector<double>& sums() const { return sum_; }

private:
    std::vector<double> sum_, comp_;
};

/// Sums item contributions over [0, items). `contribute(k, acc)` adds item
/// k's terms to a KahanVector of the given width. Items are grouped into
/// chunks of opts.chunk_size; chunks are summed in parallel and their partial
/// sums are reduced serially in chunk order, so the result is bit-identical
/// for a fixed chunk size regardless of thread count.
template <class Contribute>
std::vector<double> chunked_sum(std::size_t items, std::size_t width, Contribute&& contribute,
                                const ParallelOptions& opts) {
    const std::size_t chunk = opts.chunk_size == 0 ? 1 : opts.chunk_size;
    const std::size_t n_chunks = (items + chunk - 1) / chunk;
    std::vector<std::vector<double>> partial(n_chunks);
    const long long n_chunks_ll = static_cast<long long>(n_chunks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(opts.threads))
    for (long long c = 0; c < n_chunks_ll; ++c) {
        KahanVector acc(width);
        const std::size_t begin = static_cast<std::size_t>(c) * chunk;
        const std::size_t end = begin + chunk < items ? begin + chunk : items;
        for (std::size_t k = begin; k < end; ++k) contribute(k, acc);
        partial[static_cast<std::size_t>(c)] = acc.sums();
    }
    KahanVector total(width);
    for (const auto& p : partial) total.add(p);
    return total.sums();
}

/// Serial reference: one compensated pass over all items in order.
template <class Contribute>
std::vector<double> serial_sum(std::size_t items, std::size_t width, Contribute&& contribute) {
    KahanVector acc(width);
    for (std::size_t k = 0; k < items; ++k) contribute(k, acc);
    return acc.sums();
}

}  // namespace popcov
