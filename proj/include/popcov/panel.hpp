#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace popcov {

/// n x m table of per-SNP, per-population values (row-major). Values need
/// not be frequencies; when `frequencies` is set every value must lie in [0,1].
class FreqPanel {
public:
    FreqPanel(std::size_t n_snps, std::size_t n_pops, std::vector<double> values, std::vector<std::string> snp_ids = {},
              std::vector<std::string> chrom = {}, std::vector<std::string> pop_names = {}, bool frequencies = false);

    std::size_t n_snps() const { return n_; }
    std::size_t n_pops() const { return m_; }
    bool frequencies() const { return frequencies_; }

    std::span<const double> row(std::size_t k) const { return {values_.data() + k * m_, m_}; }
    double operator()(std::size_t k, std::size_t i) const { return values_[k * m_ + i]; }
    std::span<const double> values() const { return values_; }

    const std::vector<std::string>& snp_ids() const { return snp_ids_; }
    const std::vector<std::string>& chrom() const { return chrom_; }
    const std::vector<std::string>& pop_names() const { return pop_names_; }

    /// True when every chromosome label is "." (unknown).
    bool chrom_unknown() const;

private:
    std::size_t n_, m_;
    std::vector<double> values_;
    std::vector<std::string> snp_ids_, chrom_, pop_names_;
    bool frequencies_;
};

/// Per-SNP means used by the known-mean covariance estimator.
struct KnownMeans {
    std::vector<double> mu;
};

/// Disjoint pairs of SNP row indices. Pair members are meant to be
/// independent (e.g. on different chromosomes).
struct PairedPanel {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    std::size_t size() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }
    /// Throws InputError on out-of-range or repeated indices, or when empty.
    void validate(std::size_t n_snps) const;
};

/// Diploid sample sizes N_ik, same shape as the panel they describe.
class SampleSizes {
public:
    SampleSizes(std::size_t n_snps, std::size_t n_pops, std::vector<long> sizes);
    static SampleSizes uniform(std::size_t n_snps, std::size_t n_pops, long size);

    std::size_t n_snps() const { return n_; }
    std::size_t n_pops() const { return m_; }
    long operator()(std::size_t k, std::size_t i) const { return sizes_[k * m_ + i]; }

    /// Throws InputError unless the shape matches and every entry is >= min_size.
    void check_against(std::size_t n_snps, std::size_t n_pops, long min_size) const;

private:
    std::size_t n_, m_;
    std::vector<long> sizes_;
};

}  // namespace popcov
