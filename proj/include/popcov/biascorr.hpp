#pragma once

#include <string_view>

#include "popcov/panel.hpp"
#include "popcov/parallel.hpp"
#include "popcov/symmat.hpp"

namespace popcov {

/// Per-entry binomial sampling bias of X^s (X^s)^t on the diagonal.
///   Paper: x(1-x) / (8 N^2 (N-1))   (as printed in the source formula)
///   Alt:   x(1-x) / (2N - 1)        (unbiased plug-in for E[(X^s-X)^2] = X(1-X)/(2N))
enum class BiasForm { Paper, Alt };

std::string_view to_string(BiasForm form);
BiasForm parse_bias_form(std::string_view text);

/// One SNP/population bias term; requires N >= 2.
double bias_term(double x, long n, BiasForm form);

/// Diagonal bias of the moment matrix of sample frequencies.
SymMat bias_moment(const FreqPanel& panel, const SampleSizes& sizes, BiasForm form = BiasForm::Paper,
                   const ParallelOptions& opts = {});
SymMat bias_moment_serial(const FreqPanel& panel, const SampleSizes& sizes, BiasForm form = BiasForm::Paper);

struct CorrectedEstimates {
    SymMat w, d, v;
    SymMat bias;  // bias_moment
};

/// (W-hat - W(B), D-hat - D(B), V-hat - V(B)) with B = bias_moment.
CorrectedEstimates corrected_estimates(const FreqPanel& panel, const SampleSizes& sizes,
                                       BiasForm form = BiasForm::Paper, const ParallelOptions& opts = {});

/// Diagonal bias of S-hat: (1/(2p)) sum over pairs of term(a) + term(b).
SymMat bias_s(const FreqPanel& panel, const PairedPanel& pairing, const SampleSizes& sizes,
              BiasForm form = BiasForm::Paper, const ParallelOptions& opts = {});

}  // namespace popcov
