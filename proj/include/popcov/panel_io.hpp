#pragma once

#include <filesystem>

#include "popcov/panel.hpp"

namespace popcov {

// Panel TSV:  snp_id <TAB> chrom <TAB> pop_1 ... <TAB> pop_m
// one row per SNP, decimal values, chrom "." when unknown. Paths ending in
// ".gz" are read and written through zlib.

FreqPanel read_panel(const std::filesystem::path& path, bool frequencies = false);
void write_panel(const std::filesystem::path& path, const FreqPanel& panel);

// Sizes TSV: same header and row order as the panel, positive integers.
SampleSizes read_sizes(const std::filesystem::path& path, const FreqPanel& panel);
void write_sizes(const std::filesystem::path& path, const FreqPanel& panel, const SampleSizes& sizes);

}  // namespace popcov
