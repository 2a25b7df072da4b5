#include "popcov/biascorr.hpp"

#include <string>

#include "popcov/error.hpp"
#include "popcov/estimators.hpp"
#include "popcov/operators.hpp"

namespace popcov {

std::string_view to_string(BiasForm form) { return form == BiasForm::Paper ? "paper" : "alt"; }

BiasForm parse_bias_form(std::string_view text) {
    if (text == "paper") return BiasForm::Paper;
    if (text == "alt") return BiasForm::Alt;
    throw InputError("unknown bias form '" + std::string(text) + "' (expected paper or alt)");
}

double bias_term(double x, long n, BiasForm form) {
    if (n < 2) throw InputError("sample size must be at least 2 for bias correction, got " + std::to_string(n));
    const double nd = static_cast<double>(n);
    const double het = x * (1.0 - x);
    if (form == BiasForm::Paper) return het / (8.0 * nd * nd * (nd - 1.0));
    return het / (2.0 * nd - 1.0);
}

namespace {

void check_sizes(const FreqPanel& panel, const SampleSizes& sizes) {
    if (sizes.n_snps() != panel.n_snps() || sizes.n_pops() != panel.n_pops())
        throw InputError("sample sizes shape does not match the panel");
    for (std::size_t k = 0; k < panel.n_snps(); ++k)
        for (std::size_t i = 0; i < panel.n_pops(); ++i)
            if (sizes(k, i) < 2)
                throw InputError("sample size " + std::to_string(sizes(k, i)) + " < 2 at SNP '" +
                                 panel.snp_ids()[k] + "', population '" + panel.pop_names()[i] +
                                 "' (bias correction divides by N-1)");
}

auto row_terms(const FreqPanel& panel, const SampleSizes& sizes, BiasForm form) {
    return [&panel, &sizes, form](std::size_t k, KahanVector& acc) {
        for (std::size_t i = 0; i < panel.n_pops(); ++i) acc.add(i, bias_term(panel(k, i), sizes(k, i), form));
    };
}

SymMat diagonal(std::vector<double> sums, double count) {
    SymMat b(sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i) b(i, i) = sums[i] / count;
    return b;
}

}  // namespace

SymMat bias_moment(const FreqPanel& panel, const SampleSizes& sizes, BiasForm form, const ParallelOptions& opts) {
    check_sizes(panel, sizes);
    return diagonal(chunked_sum(panel.n_snps(), panel.n_pops(), row_terms(panel, sizes, form), opts),
                    static_cast<double>(panel.n_snps()));
}

SymMat bias_moment_serial(const FreqPanel& panel, const SampleSizes& sizes, BiasForm form) {
    check_sizes(panel, sizes);
    return diagonal(serial_sum(panel.n_snps(), panel.n_pops(), row_terms(panel, sizes, form)),
                    static_cast<double>(panel.n_snps()));
}

CorrectedEstimates corrected_estimates(const FreqPanel& panel, const SampleSizes& sizes, BiasForm form,
                                       const ParallelOptions& opts) {
    SymMat bias = bias_moment(panel, sizes, form, opts);
    const Estimates est = estimate_all(panel, opts);
    return {est.w - apply_W(bias), est.d - apply_D(bias), est.v - apply_V(bias), std::move(bias)};
}

SymMat bias_s(const FreqPanel& panel, const PairedPanel& pairing, const SampleSizes& sizes, BiasForm form,
              const ParallelOptions& opts) {
    check_sizes(panel, sizes);
    pairing.validate(panel.n_snps());
    auto terms = [&](std::size_t p, KahanVector& acc) {
        const auto [a, b] = pairing.pairs[p];
        for (std::size_t i = 0; i < panel.n_pops(); ++i)
            acc.add(i, bias_term(panel(a, i), sizes(a, i), form) + bias_term(panel(b, i), sizes(b, i), form));
    };
    return diagonal(chunked_sum(pairing.size(), panel.n_pops(), terms, opts), 2.0 * static_cast<double>(pairing.size()));
}

}  // namespace popcov
