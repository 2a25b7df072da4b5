#include "popcov/panel.hpp"

#include <algorithm>
#include <cmath>

#include "popcov/error.hpp"

namespace popcov {

FreqPanel::FreqPanel(std::size_t n_snps, std::size_t n_pops, std::vector<double> values,
                     std::vector<std::string> snp_ids, std::vector<std::string> chrom,
                     std::vector<std::string> pop_names, bool frequencies)
    : n_(n_snps), m_(n_pops), values_(std::move(values)), snp_ids_(std::move(snp_ids)), chrom_(std::move(chrom)),
      pop_names_(std::move(pop_names)), frequencies_(frequencies) {
    if (n_ == 0) throw InputError("empty panel");
    if (m_ < 2) throw InputError("panel needs at least 2 populations, got " + std::to_string(m_));
    if (values_.size() != n_ * m_)
        throw InputError("panel has " + std::to_string(values_.size()) + " values, expected " +
                         std::to_string(n_ * m_));
    for (std::size_t k = 0; k < values_.size(); ++k) {
        const double x = values_[k];
        if (!std::isfinite(x))
            throw InputError("non-finite value at SNP " + std::to_string(k / m_ + 1) + ", population " +
                             std::to_string(k % m_ + 1));
        if (frequencies_ && (x < 0.0 || x > 1.0))
            throw InputError("frequency outside [0,1] at SNP " + std::to_string(k / m_ + 1) + ", population " +
                             std::to_string(k % m_ + 1));
    }
    if (snp_ids_.empty())
        for (std::size_t k = 0; k < n_; ++k) snp_ids_.push_back("snp" + std::to_string(k + 1));
    if (chrom_.empty()) chrom_.assign(n_, ".");
    if (pop_names_.empty())
        for (std::size_t i = 0; i < m_; ++i) pop_names_.push_back("pop" + std::to_string(i + 1));
    if (snp_ids_.size() != n_ || chrom_.size() != n_) throw InputError("SNP metadata length does not match panel rows");
    if (pop_names_.size() != m_) throw InputError("population name count does not match panel columns");
}

bool FreqPanel::chrom_unknown() const {
    return std::all_of(chrom_.begin(), chrom_.end(), [](const std::string& c) { return c == "."; });
}

void PairedPanel::validate(std::size_t n_snps) const {
    if (pairs.empty()) throw InputError("empty pairing");
    std::vector<char> used(n_snps, 0);
    for (const auto& [a, b] : pairs) {
        for (std::size_t idx : {a, b}) {
            if (idx >= n_snps)
                throw InputError("pair index " + std::to_string(idx) + " out of range for " +
                                 std::to_string(n_snps) + " SNPs");
            if (used[idx]) throw InputError("SNP index " + std::to_string(idx) + " appears in more than one pair slot");
            used[idx] = 1;
        }
    }
}

SampleSizes::SampleSizes(std::size_t n_snps, std::size_t n_pops, std::vector<long> sizes)
    : n_(n_snps), m_(n_pops), sizes_(std::move(sizes)) {
    if (sizes_.size() != n_ * m_) throw InputError("sample size table has the wrong number of entries");
}

SampleSizes SampleSizes::uniform(std::size_t n_snps, std::size_t n_pops, long size) {
    return SampleSizes(n_snps, n_pops, std::vector<long>(n_snps * n_pops, size));
}

void SampleSizes::check_against(std::size_t n_snps, std::size_t n_pops, long min_size) const {
    if (n_snps != n_ || n_pops != m_)
        throw InputError("sample sizes are " + std::to_string(n_) + "x" + std::to_string(m_) + ", panel is " +
                         std::to_string(n_snps) + "x" + std::to_string(n_pops));
    for (std::size_t k = 0; k < sizes_.size(); ++k)
        if (sizes_[k] < min_size)
            throw InputError("sample size " + std::to_string(sizes_[k]) + " at SNP " + std::to_string(k / m_ + 1) +
                             ", population " + std::to_string(k % m_ + 1) + " is below " + std::to_string(min_size));
}

}  // namespace popcov
