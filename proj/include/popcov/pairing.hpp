#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "popcov/panel.hpp"

namespace popcov {

struct ChromCount {
    std::string label;
    std::size_t count;
};

/// Chromosome counts in order of first appearance in the panel.
std::vector<ChromCount> chrom_counts(const FreqPanel& panel);

/// True iff the total is even and the largest count does not exceed the
/// sum of the others.
bool pairing_feasible(const std::vector<std::size_t>& counts);
bool pairing_feasible(const std::vector<ChromCount>& counts);

/// Natural order on chromosome labels: numeric labels compare numerically
/// and sort before non-numeric ones, which compare lexicographically.
bool chrom_label_less(const std::string& a, const std::string& b);

struct PairingResult {
    PairedPanel pairing;
    std::optional<std::size_t> dropped;  // SNP row discarded to make the total even
    bool consecutive = false;            // no chromosome labels: rows paired (1,2), (3,4), ...
    std::vector<ChromCount> counts;
};

/// Cross-chromosome pairing. Repeatedly pairs the next unused SNP (file
/// order) of the chromosome with the most remaining SNPs with one from the
/// chromosome with the second most (ties by chrom_label_less). Odd totals
/// drop the last SNP of the largest chromosome first. Throws InputError
/// when the largest chromosome outnumbers all others combined.
PairingResult pair_snps(const FreqPanel& panel);

/// Rows (0,1), (2,3), ...; an odd last row is dropped.
PairedPanel consecutive_pairs(std::size_t n_snps);

/// pair_idx <TAB> snp_a <TAB> chrom_a <TAB> snp_b <TAB> chrom_b
void write_pairing_report(std::ostream& out, const FreqPanel& panel, const PairedPanel& pairing);

}  // namespace popcov
