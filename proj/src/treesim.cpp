#include "popcov/treesim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <random>
#include <sstream>

#include "popcov/error.hpp"
#include "popcov/rng.hpp"

namespace popcov {

namespace {

enum StreamTag : std::uint64_t { kBlockDraws = 1, kSnpX0 = 2, kBinomial = 3 };

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw InputError("scenario config: '" + key + "' expects a number, got '" + v + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw InputError("scenario config: '" + key + "' expects an integer, got '" + v + "'");
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

X0Law X0Law::fixed(double x0) {
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw InputError("fixed x0 must lie in [0,1], got " + fmt(x0));
    return {Kind::Fixed, x0, x0};
}

X0Law X0Law::uniform(double lo, double hi) {
    if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) throw InputError("uniform x0 law needs 0 <= lo < hi <= 1");
    return {Kind::Uniform, lo, hi};
}

X0Law X0Law::parse(std::string_view text) {
    const std::string s(text);
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(trim(p));
    if (parts.size() == 2 && parts[0] == "fixed") return fixed(parse_double("x0", parts[1]));
    if (parts.size() == 3 && parts[0] == "uniform")
        return uniform(parse_double("x0", parts[1]), parse_double("x0", parts[2]));
    throw InputError("x0 law must be 'fixed:<x0>' or 'uniform:<lo>:<hi>', got '" + s + "'");
}

std::string X0Law::describe() const {
    return kind == Kind::Fixed ? "fixed:" + fmt(lo) : "uniform:" + fmt(lo) + ":" + fmt(hi);
}

double X0Law::mean_heterozygosity() const {
    if (kind == Kind::Fixed) return lo * (1.0 - lo);
    return (lo + hi) / 2.0 - (lo * lo + lo * hi + hi * hi) / 3.0;
}

double X0Law::variance() const {
    if (kind == Kind::Fixed) return 0.0;
    return (hi - lo) * (hi - lo) / 12.0;
}

TreeModel::TreeModel(std::vector<Node> nodes, double root_tip_var, X0Law law)
    : nodes_(std::move(nodes)), root_tip_var_(root_tip_var), law_(law) {
    if (nodes_.empty() || nodes_[0].parent != -1) throw InputError("tree: node 0 must be the root");
    if (!(root_tip_var_ >= 0.0)) throw InputError("tree: root tip variance must be nonnegative");
    std::vector<bool> has_child(nodes_.size(), false);
    int max_leaf = -1;
    for (std::size_t v = 1; v < nodes_.size(); ++v) {
        const Node& node = nodes_[v];
        if (node.parent < 0 || static_cast<std::size_t>(node.parent) >= v)
            throw InputError("tree: node " + std::to_string(v) + " must have a parent with a smaller index");
        if (!(node.drift >= 0.0)) throw InputError("tree: edge drift must be nonnegative");
        has_child[static_cast<std::size_t>(node.parent)] = true;
    }
    for (const Node& node : nodes_) max_leaf = std::max(max_leaf, node.leaf);
    if (max_leaf < 1) throw InputError("tree: need at least 2 labelled leaves");
    leaf_node_.assign(static_cast<std::size_t>(max_leaf + 1), nodes_.size());
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
        const int leaf = nodes_[v].leaf;
        if (leaf < 0) continue;
        if (has_child[v]) throw InputError("tree: leaf node " + std::to_string(v) + " has children");
        if (leaf_node_[static_cast<std::size_t>(leaf)] != nodes_.size())
            throw InputError("tree: population " + std::to_string(leaf + 1) + " labels more than one leaf");
        leaf_node_[static_cast<std::size_t>(leaf)] = v;
    }
    for (std::size_t p = 0; p < leaf_node_.size(); ++p)
        if (leaf_node_[p] == nodes_.size()) throw InputError("tree: population " + std::to_string(p + 1) + " has no leaf");
}

TreeModel two_leaf_tree(double s1, double s2, double tau, X0Law law) {
    return TreeModel({{-1, 0.0, -1}, {0, s1, 0}, {0, s2, 1}}, tau, law);
}

TreeModel three_leaf_tree(double s11, double s12, double s2, double s3, double tau, X0Law law) {
    return TreeModel({{-1, 0.0, -1}, {0, s11, 0}, {0, s12, -1}, {2, s2, 1}, {2, s3, 2}}, tau, law);
}

void ScenarioParams::validate() const {
    if (m < 2) throw InputError("scenario: m must be at least 2");
    if (!(T > 0.0)) throw InputError("scenario: T must be positive");
    if (!(B >= 0.0 && B <= T)) throw InputError("scenario: B must satisfy 0 <= B <= T");
    if (!(factor > 0.0 && factor <= 1.0)) throw InputError("scenario: bottleneck factor must lie in (0,1]");
    if (!(tau >= 0.0)) throw InputError("scenario: tau must be nonnegative");
}

TreeModel scenario_tree(const ScenarioParams& p) {
    p.validate();
    const std::size_t m = p.m;
    const double epoch = p.epoch_drift();
    std::vector<TreeModel::Node> nodes;
    // Root is the split of population 1 from the lineage of 2..m.
    nodes.push_back({-1, 0.0, -1});
    nodes.push_back({0, static_cast<double>(m - 1) * p.T, 0});
    int lineage = 0;  // node where the lineage of populations k..m starts
    for (std::size_t k = 2; k < m; ++k) {
        // Outbranching lineage of populations k..m over one epoch, then the split of k.
        nodes.push_back({lineage, epoch, -1});
        lineage = static_cast<int>(nodes.size() - 1);
        nodes.push_back({lineage, static_cast<double>(m - k) * p.T, static_cast<int>(k - 1)});
    }
    nodes.push_back({lineage, epoch, static_cast<int>(m - 1)});
    return TreeModel(std::move(nodes), p.tau, p.x0_law);
}

SymMat drift_covariance(const TreeModel& tree) {
    const std::size_t m = tree.n_leaves();
    const auto& nodes = tree.nodes();
    SymMat sigma(m);
    std::vector<char> on_path(nodes.size());
    for (std::size_t i = 0; i < m; ++i) {
        std::fill(on_path.begin(), on_path.end(), 0);
        for (int v = static_cast<int>(tree.leaf_node(i)); v >= 0; v = nodes[static_cast<std::size_t>(v)].parent)
            on_path[static_cast<std::size_t>(v)] = 1;
        for (std::size_t j = i; j < m; ++j) {
            // Shared edges, summed root-first.
            std::vector<std::size_t> shared;
            for (int v = static_cast<int>(tree.leaf_node(j)); v > 0; v = nodes[static_cast<std::size_t>(v)].parent)
                if (on_path[static_cast<std::size_t>(v)]) shared.push_back(static_cast<std::size_t>(v));
            double s = tree.root_tip_var();
            for (auto it = shared.rbegin(); it != shared.rend(); ++it) s += nodes[*it].drift;
            sigma(i, j) = s;
        }
    }
    return sigma;
}

SymMat theoretical_sigma(const TreeModel& tree, double x0) {
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw InputError("x0 must lie in [0,1]");
    return drift_covariance(tree) * (x0 * (1.0 - x0));
}

SymMat expected_sigma(const TreeModel& tree) {
    return drift_covariance(tree) * tree.x0_law().mean_heterozygosity();
}

SymMat expected_sigma1(const TreeModel& tree) {
    return expected_sigma(tree) + SymMat::ones(tree.n_leaves()) * tree.x0_law().variance();
}

namespace {

double draw_x0(const X0Law& law, SplitMix64& rng) {
    if (law.kind == X0Law::Kind::Fixed) return law.lo;
    return std::uniform_real_distribution<double>(law.lo, law.hi)(rng);
}

struct SimLayout {
    std::size_t n_blocks, block, n_chrom;
    std::string chrom_of_block(std::size_t b) const { return std::to_string(1 + b * n_chrom / n_blocks); }
};

SimLayout layout_for(const SimulationOptions& opts) {
    if (opts.n_snps == 0) throw InputError("simulation needs at least one SNP");
    if (opts.block_size == 0) throw InputError("LD block size must be positive");
    if (opts.n_chrom == 0) throw InputError("chromosome count must be positive");
    const std::size_t n_blocks = (opts.n_snps + opts.block_size - 1) / opts.block_size;
    return {n_blocks, opts.block_size, std::min(opts.n_chrom, n_blocks)};
}

// Fills the rows of one LD block.
void simulate_block(const TreeModel& tree, const SimulationOptions& opts, const SimLayout& lay, std::size_t b,
                    std::vector<double>& values, std::vector<double>& node_value) {
    const auto& nodes = tree.nodes();
    const std::size_t m = tree.n_leaves();
    SplitMix64 block_rng = substream(opts.seed, kBlockDraws, b);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> z(nodes.size());
    for (double& zv : z) zv = normal(block_rng);

    const std::size_t begin = b * lay.block;
    const std::size_t end = std::min(begin + lay.block, opts.n_snps);
    node_value.resize(nodes.size());
    for (std::size_t k = begin; k < end; ++k) {
        SplitMix64 snp_rng = substream(opts.seed, kSnpX0, k);
        const double x0 = draw_x0(tree.x0_law(), snp_rng);
        const double het = x0 * (1.0 - x0);
        node_value[0] = x0 + std::sqrt(tree.root_tip_var() * het) * z[0];
        for (std::size_t v = 1; v < nodes.size(); ++v)
            node_value[v] = node_value[static_cast<std::size_t>(nodes[v].parent)] + std::sqrt(nodes[v].drift * het) * z[v];
        for (std::size_t i = 0; i < m; ++i) {
            double x = node_value[tree.leaf_node(i)];
            if (opts.clamp) x = std::clamp(x, 0.0, 1.0);
            values[k * m + i] = x;
        }
    }
}

FreqPanel assemble(const TreeModel& tree, const SimulationOptions& opts, const SimLayout& lay,
                   std::vector<double> values) {
    std::vector<std::string> ids(opts.n_snps), chrom(opts.n_snps);
    for (std::size_t k = 0; k < opts.n_snps; ++k) {
        ids[k] = "snp" + std::to_string(k + 1);
        chrom[k] = lay.chrom_of_block(k / lay.block);
    }
    return FreqPanel(opts.n_snps, tree.n_leaves(), std::move(values), std::move(ids), std::move(chrom), {},
                     opts.clamp);
}

}  // namespace

FreqPanel simulate_panel(const TreeModel& tree, const SimulationOptions& opts) {
    const SimLayout lay = layout_for(opts);
    std::vector<double> values(opts.n_snps * tree.n_leaves());
    const long long n_blocks = static_cast<long long>(lay.n_blocks);
#pragma omp parallel num_threads(resolve_threads(opts.parallel.threads))
    {
        std::vector<double> node_value;
#pragma omp for schedule(static)
        for (long long b = 0; b < n_blocks; ++b)
            simulate_block(tree, opts, lay, static_cast<std::size_t>(b), values, node_value);
    }
    return assemble(tree, opts, lay, std::move(values));
}

FreqPanel simulate_panel_serial(const TreeModel& tree, const SimulationOptions& opts) {
    const SimLayout lay = layout_for(opts);
    std::vector<double> values(opts.n_snps * tree.n_leaves());
    std::vector<double> node_value;
    for (std::size_t b = 0; b < lay.n_blocks; ++b) simulate_block(tree, opts, lay, b, values, node_value);
    return assemble(tree, opts, lay, std::move(values));
}

SampledPanel binomial_sample(const FreqPanel& panel, const SampleSizes& sizes, std::uint64_t seed,
                             const ParallelOptions& opts) {
    sizes.check_against(panel.n_snps(), panel.n_pops(), 1);
    const std::size_t n = panel.n_snps(), m = panel.n_pops();
    std::vector<double> out(n * m);
    std::size_t clamped = 0;
    const long long n_ll = static_cast<long long>(n);
#pragma omp parallel for schedule(static) reduction(+ : clamped) num_threads(resolve_threads(opts.threads))
    for (long long kk = 0; kk < n_ll; ++kk) {
        const std::size_t k = static_cast<std::size_t>(kk);
        SplitMix64 rng = substream(seed, kBinomial, k);
        for (std::size_t i = 0; i < m; ++i) {
            double x = panel(k, i);
            if (x < 0.0 || x > 1.0) {
                x = std::clamp(x, 0.0, 1.0);
                ++clamped;
            }
            const long alleles = 2 * sizes(k, i);
            const long z = std::binomial_distribution<long>(alleles, x)(rng);
            out[k * m + i] = static_cast<double>(z) / static_cast<double>(alleles);
        }
    }
    return {FreqPanel(n, m, std::move(out), panel.snp_ids(), panel.chrom(), panel.pop_names(), true), clamped};
}

std::map<std::string, std::string> ScenarioConfig::resolved() const {
    return {{"m", std::to_string(params.m)},
            {"T", fmt(params.T)},
            {"B", fmt(params.B)},
            {"factor", fmt(params.factor)},
            {"tau", fmt(params.tau)},
            {"x0", params.x0_law.describe()},
            {"n", std::to_string(n)},
            {"seed", std::to_string(seed)},
            {"t_block", std::to_string(t_block)},
            {"n_chrom", std::to_string(n_chrom)},
            {"clamp", clamp ? "true" : "false"},
            {"sample_size", std::to_string(sample_size)}};
}

ScenarioConfig parse_scenario_config(std::istream& in) {
    ScenarioConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError("scenario config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        auto positive = [&](long long v) {
            if (v <= 0) throw InputError("scenario config: '" + key + "' must be positive");
            return v;
        };
        if (key == "m") cfg.params.m = static_cast<std::size_t>(positive(parse_int(key, value)));
        else if (key == "T") cfg.params.T = parse_double(key, value);
        else if (key == "B") cfg.params.B = parse_double(key, value);
        else if (key == "factor") cfg.params.factor = parse_double(key, value);
        else if (key == "tau") cfg.params.tau = parse_double(key, value);
        else if (key == "x0") cfg.params.x0_law = X0Law::parse(value);
        else if (key == "n") cfg.n = static_cast<std::size_t>(positive(parse_int(key, value)));
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
        else if (key == "t_block") cfg.t_block = static_cast<std::size_t>(positive(parse_int(key, value)));
        else if (key == "n_chrom") cfg.n_chrom = static_cast<std::size_t>(positive(parse_int(key, value)));
        else if (key == "sample_size") cfg.sample_size = static_cast<long>(parse_int(key, value));
        else if (key == "clamp") {
            if (value == "true" || value == "1") cfg.clamp = true;
            else if (value == "false" || value == "0") cfg.clamp = false;
            else throw InputError("scenario config: 'clamp' expects true or false");
        } else {
            throw InputError("scenario config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    cfg.params.validate();
    if (cfg.sample_size < 0) throw InputError("scenario config: sample_size must be nonnegative");
    return cfg;
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    return parse_scenario_config(in);
}

}  // namespace popcov
