#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "popcov/parallel.hpp"
#include "popcov/symmat.hpp"

namespace popcov {

enum class SplitMode { Exhaustive, Greedy, Auto };

std::string_view to_string(SplitMode mode);
SplitMode parse_split_mode(std::string_view text);

inline constexpr std::size_t kExhaustiveCap = 22;

/// Bipartition of populations 0..m-1 with population 0 always in group_a.
/// score is the mean of M_ij over unordered cross pairs i in A, j in B.
struct RootPartition {
    std::vector<std::size_t> group_a, group_b;
    double score = 0.0;
    SplitMode mode = SplitMode::Exhaustive;  // search actually used
    bool tied = false;  // another partition scores within 1e-12 * max|M| of the best
};

/// Mean cross-group entry. `in_a[i]` marks membership of group A.
double cross_average(const SymMat& m, const std::vector<bool>& in_a);

/// Partition minimizing the mean cross-group entry. Exhaustive search breaks
/// ties by smaller |A|, then lexicographically smaller A. Auto uses the
/// exhaustive search up to kExhaustiveCap populations, greedy beyond.
RootPartition find_root_split(const SymMat& m, SplitMode mode = SplitMode::Auto, const ParallelOptions& opts = {});

/// Single-threaded exhaustive scan kept as the reference for the parallel one.
RootPartition find_root_split_serial(const SymMat& m);

/// Every nontrivial bipartition with its score, best first (same order as the
/// exhaustive tie-break).
std::vector<RootPartition> split_report(const SymMat& m);

}  // namespace popcov
