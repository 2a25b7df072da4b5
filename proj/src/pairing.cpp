#include "popcov/pairing.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <ostream>
#include <queue>
#include <unordered_map>

#include "popcov/error.hpp"

namespace popcov {

namespace {

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::string describe(const std::vector<ChromCount>& counts) {
    std::string out;
    for (const auto& c : counts) {
        if (!out.empty()) out += ", ";
        out += c.label + ":" + std::to_string(c.count);
    }
    return out;
}

}  // namespace

bool chrom_label_less(const std::string& a, const std::string& b) {
    const bool da = all_digits(a), db = all_digits(b);
    if (da && db) {
        const auto strip = [](const std::string& s) {
            const auto p = s.find_first_not_of('0');
            return p == std::string::npos ? std::string("0") : s.substr(p);
        };
        const std::string sa = strip(a), sb = strip(b);
        if (sa.size() != sb.size()) return sa.size() < sb.size();
        if (sa != sb) return sa < sb;
        return a < b;
    }
    if (da != db) return da;
    return a < b;
}

std::vector<ChromCount> chrom_counts(const FreqPanel& panel) {
    std::vector<ChromCount> counts;
    std::unordered_map<std::string, std::size_t> slot;
    for (const auto& c : panel.chrom()) {
        auto [it, inserted] = slot.try_emplace(c, counts.size());
        if (inserted) counts.push_back({c, 0});
        ++counts[it->second].count;
    }
    return counts;
}

bool pairing_feasible(const std::vector<std::size_t>& counts) {
    const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
    if (total % 2 != 0) return false;
    const std::size_t largest = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
    return largest <= total - largest;
}

bool pairing_feasible(const std::vector<ChromCount>& counts) {
    std::vector<std::size_t> raw;
    for (const auto& c : counts) raw.push_back(c.count);
    return pairing_feasible(raw);
}

PairedPanel consecutive_pairs(std::size_t n_snps) {
    PairedPanel p;
    for (std::size_t k = 0; k + 1 < n_snps; k += 2) p.pairs.emplace_back(k, k + 1);
    return p;
}

PairingResult pair_snps(const FreqPanel& panel) {
    PairingResult result;
    result.counts = chrom_counts(panel);
    const std::size_t n = panel.n_snps();

    if (panel.chrom_unknown()) {
        result.consecutive = true;
        result.pairing = consecutive_pairs(n);
        if (n % 2) result.dropped = n - 1;
        if (result.pairing.empty()) throw InputError("cannot pair a single SNP");
        return result;
    }
    for (const auto& c : result.counts)
        if (c.label == ".")
            throw InputError("chromosome labels are partly missing ('.'); label every SNP or none");

    // Rows per chromosome, in file order.
    std::vector<std::vector<std::size_t>> rows(result.counts.size());
    {
        std::unordered_map<std::string, std::size_t> slot;
        for (std::size_t c = 0; c < result.counts.size(); ++c) slot[result.counts[c].label] = c;
        for (std::size_t k = 0; k < n; ++k) rows[slot[panel.chrom()[k]]].push_back(k);
    }

    // Rank of each chromosome under the natural label order, for tie-breaks.
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return chrom_label_less(result.counts[a].label, result.counts[b].label);
    });
    std::vector<std::size_t> rank(rows.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;

    auto before = [&](std::size_t a, std::size_t b, const std::vector<std::size_t>& remaining) {
        if (remaining[a] != remaining[b]) return remaining[a] > remaining[b];
        return rank[a] < rank[b];
    };

    std::vector<std::size_t> remaining(rows.size());
    for (std::size_t c = 0; c < rows.size(); ++c) remaining[c] = rows[c].size();

    if (n % 2) {
        std::size_t largest = 0;
        for (std::size_t c = 1; c < rows.size(); ++c)
            if (before(c, largest, remaining)) largest = c;
        result.dropped = rows[largest].back();
        rows[largest].pop_back();
        --remaining[largest];
    }

    std::vector<ChromCount> effective = result.counts;
    for (std::size_t c = 0; c < rows.size(); ++c) effective[c].count = remaining[c];
    if (!pairing_feasible(effective))
        throw InputError("SNPs cannot be paired across chromosomes: the largest chromosome outnumbers the rest (" +
                         describe(effective) + ")");

    // Max-heap keyed on (remaining, label rank).
    auto heap_less = [&](std::size_t a, std::size_t b) { return before(b, a, remaining); };
    std::vector<std::size_t> next(rows.size(), 0);
    std::vector<std::size_t> heap;
    for (std::size_t c = 0; c < rows.size(); ++c)
        if (remaining[c] > 0) heap.push_back(c);
    std::make_heap(heap.begin(), heap.end(), heap_less);

    result.pairing.pairs.reserve(n / 2);
    while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), heap_less);
        const std::size_t first = heap.back();
        heap.pop_back();
        if (heap.empty()) throw std::logic_error("pairing left unmatched SNPs on one chromosome");
        std::pop_heap(heap.begin(), heap.end(), heap_less);
        const std::size_t second = heap.back();
        heap.pop_back();

        result.pairing.pairs.emplace_back(rows[first][next[first]++], rows[second][next[second]++]);
        for (std::size_t c : {first, second}) {
            if (--remaining[c] > 0) {
                heap.push_back(c);
                std::push_heap(heap.begin(), heap.end(), heap_less);
            }
        }
    }
    return result;
}

void write_pairing_report(std::ostream& out, const FreqPanel& panel, const PairedPanel& pairing) {
    out << "pair_idx\tsnp_a\tchrom_a\tsnp_b\tchrom_b\n";
    for (std::size_t p = 0; p < pairing.size(); ++p) {
        const auto [a, b] = pairing.pairs[p];
        out << p + 1 << '\t' << panel.snp_ids()[a] << '\t' << panel.chrom()[a] << '\t' << panel.snp_ids()[b] << '\t'
            << panel.chrom()[b] << '\n';
    }
}

}  // namespace popcov
