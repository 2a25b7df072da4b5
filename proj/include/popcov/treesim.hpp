#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "popcov/panel.hpp"
#include "popcov/parallel.hpp"
#include "popcov/symmat.hpp"

namespace popcov {

/// Distribution of the ancestral (root) allele frequency x0 of a SNP.
struct X0Law {
    enum class Kind { Fixed, Uniform };
    Kind kind = Kind::Uniform;
    double lo = 0.05, hi = 0.95;  // Fixed uses lo

    static X0Law fixed(double x0);
    static X0Law uniform(double lo, double hi);
    /// "fixed:<x0>" or "uniform:<lo>:<hi>"
    static X0Law parse(std::string_view text);
    std::string describe() const;

    double mean_heterozygosity() const;  // E[x0 (1 - x0)]
    double variance() const;             // Var(x0)
};

/// Rooted tree with drift lengths on edges and a root tip of variance tau.
/// Node 0 is the root; every other node's parent has a smaller index.
class TreeModel {
public:
    struct Node {
        int parent;    // -1 for the root
        double drift;  // length of the edge from the parent (0 for the root)
        int leaf;      // population index, or -1 for internal nodes
    };

    TreeModel(std::vector<Node> nodes, double root_tip_var = 0.0, X0Law law = {});

    std::size_t n_leaves() const { return leaf_node_.size(); }
    const std::vector<Node>& nodes() const { return nodes_; }
    double root_tip_var() const { return root_tip_var_; }
    const X0Law& x0_law() const { return law_; }
    std::size_t leaf_node(std::size_t pop) const { return leaf_node_[pop]; }

private:
    std::vector<Node> nodes_;
    std::vector<std::size_t> leaf_node_;
    double root_tip_var_;
    X0Law law_;
};

/// Two leaves hanging off the root with drifts s1, s2.
TreeModel two_leaf_tree(double s1, double s2, double tau = 0.0, X0Law law = {});
/// Leaf 1 on the root (drift s11); an internal node at drift s12 carries
/// leaves 2 and 3 (drifts s2, s3).
TreeModel three_leaf_tree(double s11, double s12, double s2, double s3, double tau = 0.0, X0Law law = {});

/// Sequential-split caterpillar: population i splits from i-1 at time
/// T (m + 1 - i) before present, and the outbranching lineage passes a
/// bottleneck of duration B at relative size `factor`.
struct ScenarioParams {
    std::size_t m = 20;
    double T = 0.00275;
    double B = 0.00005;
    double factor = 0.025;
    double tau = 0.0;
    X0Law x0_law;

    void validate() const;
    /// Drift of one split epoch on the outbranching lineage: T - B + B / factor.
    double epoch_drift() const { return T - B + B / factor; }
};

TreeModel scenario_tree(const ScenarioParams& params);

/// tau + drift shared by the root-to-leaf paths of i and j (no x0 factor).
SymMat drift_covariance(const TreeModel& tree);
/// drift_covariance * x0 (1 - x0).
SymMat theoretical_sigma(const TreeModel& tree, double x0);
/// drift_covariance * E[x0 (1 - x0)] under the tree's x0 law.
SymMat expected_sigma(const TreeModel& tree);
/// expected_sigma + Var(x0) E: the expectation of S-hat.
SymMat expected_sigma1(const TreeModel& tree);

struct SimulationOptions {
    std::size_t n_snps = 10000;
    std::uint64_t seed = 1;
    std::size_t block_size = 1;  // SNPs in an LD block share their drift draws
    std::size_t n_chrom = 22;    // chromosomes, as contiguous runs of whole blocks
    bool clamp = false;          // truncate leaf values to [0,1]
    ParallelOptions parallel;
};

/// Normal-approximation drift along the tree: per SNP draw x0, then the
/// root value x0 + sqrt(tau h) z_r and edge increments sqrt(d_e h) z_e with
/// h = x0 (1 - x0); leaves sum their root-to-leaf path.
FreqPanel simulate_panel(const TreeModel& tree, const SimulationOptions& opts);
FreqPanel simulate_panel_serial(const TreeModel& tree, const SimulationOptions& opts);

struct SampledPanel {
    FreqPanel panel;
    std::size_t clamped;  // population values truncated into [0,1] before sampling
};

/// X^s = Z / (2N) with Z ~ Binomial(2N, X).
SampledPanel binomial_sample(const FreqPanel& panel, const SampleSizes& sizes, std::uint64_t seed,
                             const ParallelOptions& opts = {});

/// key=value scenario file for the simulate command.
struct ScenarioConfig {
    ScenarioParams params;
    std::size_t n = 100000;
    std::uint64_t seed = 1;
    std::size_t t_block = 1;
    std::size_t n_chrom = 22;
    bool clamp = false;
    long sample_size = 0;  // > 0: also emit binomially sampled frequencies

    std::map<std::string, std::string> resolved() const;
};

ScenarioConfig parse_scenario_config(std::istream& in);
ScenarioConfig load_scenario_config(const std::filesystem::path& path);

}  // namespace popcov
