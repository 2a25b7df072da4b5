#include "popcov/rootsplit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "popcov/error.hpp"

namespace popcov {

std::string_view to_string(SplitMode mode) {
    switch (mode) {
        case SplitMode::Exhaustive: return "exhaustive";
        case SplitMode::Greedy: return "greedy";
        case SplitMode::Auto: return "auto";
    }
    return "?";
}

SplitMode parse_split_mode(std::string_view text) {
    if (text == "exhaustive") return SplitMode::Exhaustive;
    if (text == "greedy") return SplitMode::Greedy;
    if (text == "auto") return SplitMode::Auto;
    throw InputError("unknown split mode '" + std::string(text) + "'");
}

namespace {

// Bit i-1 of a mask set <=> population i (i >= 1) is in group A.
// Population 0 is always in A; the all-ones mask (empty B) is excluded.
using Mask = std::uint32_t;

struct Candidate {
    double score = std::numeric_limits<double>::infinity();
    Mask mask = 0;
};

std::size_t group_a_size(Mask mask) { return 1 + static_cast<std::size_t>(std::popcount(mask)); }

// Lexicographic comparison of the sorted member lists of A. Both lists start
// with population 0; the first differing population decides: the list that
// contains the smaller index is smaller (unless it ran out first).
bool lex_less(Mask a, Mask b) {
    if (a == b) return false;
    const Mask diff = a ^ b;
    const Mask low = diff & (~diff + 1);
    // The mask owning the lowest differing member has the smaller next element.
    return (a & low) != 0;
}

bool better(const Candidate& x, const Candidate& y) {
    if (x.score != y.score) return x.score < y.score;
    const std::size_t sx = group_a_size(x.mask), sy = group_a_size(y.mask);
    if (sx != sy) return sx < sy;
    return lex_less(x.mask, y.mask);
}

double score_mask(const SymMat& m, Mask mask, std::vector<std::size_t>& a, std::vector<std::size_t>& b) {
    const std::size_t dim = m.dim();
    a.clear();
    b.clear();
    a.push_back(0);
    for (std::size_t i = 1; i < dim; ++i) (mask >> (i - 1) & 1u ? a : b).push_back(i);
    double sum = 0.0;
    for (std::size_t i : a)
        for (std::size_t j : b) sum += m(i, j);
    return sum / static_cast<double>(a.size() * b.size());
}

RootPartition to_partition(std::size_t dim, Mask mask, double score, SplitMode mode) {
    RootPartition p;
    p.group_a.push_back(0);
    for (std::size_t i = 1; i < dim; ++i) (mask >> (i - 1) & 1u ? p.group_a : p.group_b).push_back(i);
    p.score = score;
    p.mode = mode;
    return p;
}

void require_dims(const SymMat& m, std::size_t cap) {
    if (m.dim() > cap)
        throw InputError("exhaustive root search supports at most " + std::to_string(cap) + " populations, got " +
                         std::to_string(m.dim()));
}

Mask mask_count(std::size_t dim) { return (Mask{1} << (dim - 1)) - 1; }

double tie_tolerance(const SymMat& m) { return 1e-12 * std::max(m.max_abs(), std::numeric_limits<double>::min()); }

// Keeps the best two candidates seen; the runner-up feeds the tie warning.
struct BestTwo {
    Candidate best, second;
    void offer(const Candidate& c) {
        if (better(c, best)) {
            second = best;
            best = c;
        } else if (better(c, second)) {
            second = c;
        }
    }
    void merge(const BestTwo& o) {
        offer(o.best);
        if (o.second.score < std::numeric_limits<double>::infinity()) offer(o.second);
    }
};

RootPartition finish(const SymMat& m, const BestTwo& top) {
    RootPartition p = to_partition(m.dim(), top.best.mask, top.best.score, SplitMode::Exhaustive);
    p.tied = std::abs(top.second.score - top.best.score) <= tie_tolerance(m);
    return p;
}

RootPartition exhaustive(const SymMat& m, const ParallelOptions& opts) {
    require_dims(m, kExhaustiveCap);
    const long long count = static_cast<long long>(mask_count(m.dim()));
    const int threads = resolve_threads(opts.threads);
    std::vector<BestTwo> per_thread(static_cast<std::size_t>(threads));
#pragma omp parallel num_threads(threads)
    {
        BestTwo local;
        std::vector<std::size_t> a, b;
#pragma omp for schedule(static)
        for (long long mask = 0; mask < count; ++mask) {
            const Mask mk = static_cast<Mask>(mask);
            local.offer({score_mask(m, mk, a, b), mk});
        }
        per_thread[static_cast<std::size_t>(omp_get_thread_num())] = local;
    }
    BestTwo top;
    for (const auto& t : per_thread) top.merge(t);
    return finish(m, top);
}

RootPartition greedy(const SymMat& m) {
    const std::size_t dim = m.dim();
    std::vector<bool> in_a(dim, false);
    in_a[0] = true;
    // Insert populations 2..m on the side giving the lower cross-average.
    for (std::size_t i = 2; i < dim; ++i) {
        std::vector<bool> trial(in_a.begin(), in_a.begin() + static_cast<long>(i + 1));
        SymMat head(i + 1);
        for (std::size_t r = 0; r <= i; ++r)
            for (std::size_t c = r; c <= i; ++c) head(r, c) = m(r, c);
        trial[i] = true;
        const double with_a = cross_average(head, trial);
        trial[i] = false;
        const double with_b = cross_average(head, trial);
        in_a[i] = with_a < with_b;
    }
    double current = cross_average(m, in_a);
    for (bool improved = true; improved;) {
        improved = false;
        for (std::size_t i = 1; i < dim; ++i) {
            in_a[i] = !in_a[i];
            const bool valid = std::count(in_a.begin(), in_a.end(), false) > 0;
            const double s = valid ? cross_average(m, in_a) : std::numeric_limits<double>::infinity();
            if (s < current) {
                current = s;
                improved = true;
            } else {
                in_a[i] = !in_a[i];
            }
        }
    }
    RootPartition p;
    for (std::size_t i = 0; i < dim; ++i) (in_a[i] ? p.group_a : p.group_b).push_back(i);
    p.score = current;
    p.mode = SplitMode::Greedy;
    return p;
}

}  // namespace

double cross_average(const SymMat& m, const std::vector<bool>& in_a) {
    if (in_a.size() != m.dim()) throw InputError("cross_average: membership vector has the wrong length");
    double sum = 0.0;
    std::size_t na = 0, nb = 0;
    for (std::size_t i = 0; i < m.dim(); ++i) (in_a[i] ? na : nb)++;
    if (na == 0 || nb == 0) throw InputError("cross_average: both groups must be nonempty");
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
            if (in_a[i] && !in_a[j]) sum += m(i, j);
    return sum / static_cast<double>(na * nb);
}

RootPartition find_root_split(const SymMat& m, SplitMode mode, const ParallelOptions& opts) {
    if (mode == SplitMode::Auto) mode = m.dim() <= kExhaustiveCap ? SplitMode::Exhaustive : SplitMode::Greedy;
    return mode == SplitMode::Exhaustive ? exhaustive(m, opts) : greedy(m);
}

RootPartition find_root_split_serial(const SymMat& m) {
    require_dims(m, kExhaustiveCap);
    const Mask count = mask_count(m.dim());
    BestTwo top;
    std::vector<std::size_t> a, b;
    for (Mask mask = 0; mask < count; ++mask) top.offer({score_mask(m, mask, a, b), mask});
    return finish(m, top);
}

std::vector<RootPartition> split_report(const SymMat& m) {
    require_dims(m, kExhaustiveCap);
    const Mask count = mask_count(m.dim());
    std::vector<Candidate> all;
    all.reserve(count);
    std::vector<std::size_t> a, b;
    for (Mask mask = 0; mask < count; ++mask) all.push_back({score_mask(m, mask, a, b), mask});
    std::sort(all.begin(), all.end(), better);
    std::vector<RootPartition> out;
    out.reserve(all.size());
    for (const auto& c : all) out.push_back(to_partition(m.dim(), c.mask, c.score, SplitMode::Exhaustive));
    if (out.size() > 1) out.front().tied = std::abs(all[1].score - all[0].score) <= tie_tolerance(m);
    return out;
}

}  // namespace popcov
