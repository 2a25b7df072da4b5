#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "popcov/biascorr.hpp"
#include "popcov/error.hpp"
#include "popcov/estimators.hpp"
#include "popcov/lsfit.hpp"
#include "popcov/matrix_io.hpp"
#include "popcov/operators.hpp"
#include "popcov/pairing.hpp"
#include "popcov/panel_io.hpp"
#include "popcov/rootsplit.hpp"
#include "popcov/treesim.hpp"

namespace popcov::app {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct ParallelFlags {
    int threads = 0;
    std::size_t chunk_size = ParallelOptions{}.chunk_size;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--threads", threads, "Worker threads (default: POPCOV_THREADS, else all cores)")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--chunk-size", chunk_size, "SNPs per reduction chunk; results are reproducible per chunk size")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    }
    ParallelOptions options() const { return {chunk_size, threads}; }
    json to_json() const { return {{"threads", resolve_threads(threads)}, {"chunk_size", chunk_size}}; }
};

void ensure_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw InputError("cannot create output directory " + dir.string());
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Pairing for S-hat; nullopt (with a warning) when the panel cannot be paired.
std::optional<PairingResult> try_pairing(const FreqPanel& panel, std::ostream& err) {
    try {
        PairingResult r = pair_snps(panel);
        if (r.consecutive)
            err << "warning: no chromosome labels; S-hat pairs consecutive rows and assumes they are independent\n";
        if (r.dropped) err << "note: discarded SNP '" << panel.snp_ids()[*r.dropped] << "' to make the count even\n";
        return r;
    } catch (const InputError& e) {
        err << "warning: S-hat skipped: " << e.what() << '\n';
        return std::nullopt;
    }
}

json pairing_json(const std::optional<PairingResult>& r) {
    if (!r) return {{"available", false}};
    return {{"available", true},
            {"pairs", r->pairing.size()},
            {"discarded_snps", r->dropped ? 1 : 0},
            {"consecutive_fallback", r->consecutive}};
}

// ---------------------------------------------------------------- stats

struct StatsArgs {
    std::string panel, sizes, out, bias_form = "paper";
    bool bias = false, frequencies = false, heatmaps = true;
    ParallelFlags par;
};

int cmd_stats(const StatsArgs& a, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    if (a.bias && a.sizes.empty()) throw InputError("bias correction requested but no --sizes file given");
    if (!a.bias && !a.sizes.empty()) throw InputError("--sizes given without --bias");
    const BiasForm form = parse_bias_form(a.bias_form);
    const ParallelOptions opts = a.par.options();

    const FreqPanel panel = read_panel(a.panel, a.frequencies || a.bias);
    ensure_out_dir(a.out);
    const fs::path dir(a.out);

    const auto pairing = try_pairing(panel, err);
    Estimates est = estimate_all(panel, opts);
    std::optional<SymMat> shat;
    if (pairing) shat = s_hat(panel, pairing->pairing, opts);

    json bias_info = {{"enabled", a.bias}};
    if (a.bias) {
        const SampleSizes sizes = read_sizes(a.sizes, panel);
        CorrectedEstimates corr = corrected_estimates(panel, sizes, form, opts);
        save_symmat(dir / "what_raw.tsv", est.w);
        save_symmat(dir / "dhat_raw.tsv", est.d);
        save_symmat(dir / "vhat_raw.tsv", est.v);
        save_symmat(dir / "bias_moment.tsv", corr.bias);
        est.w = corr.w;
        est.d = corr.d;
        est.v = corr.v;
        if (shat) {
            save_symmat(dir / "shat_raw.tsv", *shat);
            *shat -= bias_s(panel, pairing->pairing, sizes, form, opts);
        }
        bias_info["form"] = std::string(to_string(form));
    }

    std::vector<std::pair<std::string, const SymMat*>> outputs = {{"what", &est.w}, {"dhat", &est.d}, {"vhat", &est.v}};
    if (shat) outputs.emplace_back("shat", &*shat);
    for (const auto& [name, mat] : outputs) {
        save_symmat(dir / (name + ".tsv"), *mat);
        if (a.heatmaps) write_heatmap(dir / ("heatmap_" + name + ".pgm"), *mat);
    }

    json report = {
        {"command", "stats"},
        {"n", panel.n_snps()},
        {"m", panel.n_pops()},
        {"populations", panel.pop_names()},
        {"discarded_snps", pairing && pairing->dropped ? 1 : 0},
        {"pairing", pairing_json(pairing)},
        {"bias", bias_info},
        {"outputs", [&] {
             json o = json::array();
             for (const auto& p : outputs) o.push_back(p.first + ".tsv");
             return o;
         }()},
        {"config",
         {{"panel", a.panel},
          {"sizes", a.sizes},
          {"bias", a.bias},
          {"bias_form", a.bias_form},
          {"frequencies", a.frequencies},
          {"out", a.out},
          {"parallel", a.par.to_json()}}},
        {"runtime_seconds", seconds_since(t0)},
    };
    write_json(dir / "report.json", report);
    out << "n=" << panel.n_snps() << " m=" << panel.n_pops() << " -> " << dir.string() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- root

struct RootArgs {
    std::string panel, out, mode = "auto";
    bool require_agreement = false, frequencies = false;
    ParallelFlags par;
};

json root_json(const RootPartition& p, const FreqPanel& panel, const std::string& method) {
    json a = json::array(), b = json::array();
    for (auto i : p.group_a) a.push_back(panel.pop_names()[i]);
    for (auto i : p.group_b) b.push_back(panel.pop_names()[i]);
    return {{"group_a", a}, {"group_b", b}, {"score", p.score}, {"method", method}, {"mode", std::string(to_string(p.mode))}};
}

int cmd_root(const RootArgs& a, std::ostream& out, std::ostream& err) {
    const SplitMode mode = parse_split_mode(a.mode);
    const ParallelOptions opts = a.par.options();
    const FreqPanel panel = read_panel(a.panel, a.frequencies);
    ensure_out_dir(a.out);
    const fs::path dir(a.out);

    auto report = [&](const RootPartition& p, const std::string& method) {
        if (p.tied) err << "warning: " << method << " root split is tied; canonical tie-break applied\n";
        const json j = root_json(p, panel, method);
        write_json(dir / ("root_" + method + ".json"), j);
        out << method << ": " << j["group_a"].dump() << " | " << j["group_b"].dump() << " score=" << p.score << '\n';
    };

    const RootPartition by_v = find_root_split(v_hat(panel, opts), mode, opts);
    report(by_v, "vhat");

    const auto pairing = try_pairing(panel, err);
    if (!pairing) {
        if (a.require_agreement) throw InputError("--require-agreement needs S-hat, but the panel cannot be paired");
        return kExitOk;
    }
    const RootPartition by_s = find_root_split(s_hat(panel, pairing->pairing, opts), mode, opts);
    report(by_s, "shat");

    if (by_v.group_a != by_s.group_a) {
        err << "warning: V-hat and S-hat root splits disagree\n";
        if (a.require_agreement) return kExitDisagree;
    }
    return kExitOk;
}

// ---------------------------------------------------------------- pair

struct PairArgs {
    std::string panel, out;
};

int cmd_pair(const PairArgs& a, std::ostream& out, std::ostream& err) {
    const FreqPanel panel = read_panel(a.panel);
    const PairingResult r = pair_snps(panel);
    if (r.consecutive) err << "warning: no chromosome labels; pairing consecutive rows\n";
    ensure_out_dir(a.out);
    std::ofstream tsv(fs::path(a.out) / "pairs.tsv");
    if (!tsv) throw InputError("cannot write pairs.tsv");
    write_pairing_report(tsv, panel, r.pairing);
    out << "pairs=" << r.pairing.size() << " discarded=" << (r.dropped ? 1 : 0)
        << (r.dropped ? " (" + panel.snp_ids()[*r.dropped] + ")" : std::string()) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- lsfit

struct LsfitArgs {
    std::string vhat, what, basis, out;
};

int cmd_lsfit(const LsfitArgs& a, std::ostream& out, std::ostream&) {
    const SymMat vhat = load_symmat(a.vhat);
    const SymMat what = a.what.empty() ? apply_W(vhat) : load_symmat(a.what);
    const MatrixSubspace l(load_basis(a.basis));
    if (l.dim_m() != vhat.dim()) throw InputError("basis dimension does not match V-hat");

    const Projection proj = project(vhat, l);
    const LsPair fit = ls_pair(vhat, what, l);
    const bool invariant = w_invariance_check(l);
    ensure_out_dir(a.out);
    const fs::path dir(a.out);
    save_symmat(dir / "vfit.tsv", fit.v_fit);
    save_symmat(dir / "wfit.tsv", fit.w_fit);
    write_json(dir / "lsfit.json", {{"w_invariant", invariant},
                                    {"consistent", fit.consistent},
                                    {"gap", fit.gap},
                                    {"coefficients", proj.coefficients},
                                    {"gram_condition", l.gram_condition()},
                                    {"residual_norm", frobenius_norm(proj.residual)},
                                    {"config", {{"vhat", a.vhat}, {"what", a.what}, {"basis", a.basis}}}});
    out << "w_invariant=" << (invariant ? "true" : "false") << " consistent=" << (fit.consistent ? "true" : "false")
        << " gap=" << fit.gap << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string config, out;
    std::optional<std::uint64_t> seed;
    bool gzip = false;
    ParallelFlags par;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioConfig cfg = load_scenario_config(a.config);
    if (a.seed) cfg.seed = *a.seed;
    if (cfg.sample_size > 0 && !cfg.clamp) {
        err << "note: sample_size set; clamping population values to [0,1] before sampling\n";
        cfg.clamp = true;
    }
    const TreeModel tree = scenario_tree(cfg.params);
    SimulationOptions sim;
    sim.n_snps = cfg.n;
    sim.seed = cfg.seed;
    sim.block_size = cfg.t_block;
    sim.n_chrom = cfg.n_chrom;
    sim.clamp = cfg.clamp;
    sim.parallel = a.par.options();
    const FreqPanel panel = simulate_panel(tree, sim);

    ensure_out_dir(a.out);
    const fs::path dir(a.out);
    const std::string ext = a.gzip ? ".tsv.gz" : ".tsv";
    write_panel(dir / ("panel" + ext), panel);
    const SymMat sigma = expected_sigma(tree);
    save_symmat(dir / "sigma_theory.tsv", sigma);
    save_symmat(dir / "v_theory.tsv", apply_V(sigma));
    save_symmat(dir / "sigma1_theory.tsv", expected_sigma1(tree));

    json report = {{"command", "simulate"}, {"n", panel.n_snps()}, {"m", panel.n_pops()}};
    if (cfg.sample_size > 0) {
        const SampleSizes sizes = SampleSizes::uniform(panel.n_snps(), panel.n_pops(), cfg.sample_size);
        // Sampling noise gets its own stream family so it never repeats the drift draws.
        const SampledPanel sampled = binomial_sample(panel, sizes, cfg.seed ^ 0x5bd1e995ULL, sim.parallel);
        write_panel(dir / ("panel_sample" + ext), sampled.panel);
        write_sizes(dir / ("sizes" + ext), panel, sizes);
        report["clamped_before_sampling"] = sampled.clamped;
    }
    json config = cfg.resolved();
    config["parallel"] = a.par.to_json();
    report["config"] = config;
    report["runtime_seconds"] = seconds_since(t0);
    write_json(dir / "report.json", report);
    out << "simulated n=" << panel.n_snps() << " m=" << panel.n_pops() << " -> " << dir.string() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- norms

struct NormsArgs {
    std::size_t m_min = 2, m_max = 10;
};

int cmd_norms(const NormsArgs& a, std::ostream& out, std::ostream&) {
    if (a.m_min < 2 || a.m_max < a.m_min) throw InputError("need 2 <= m-min <= m-max");
    if (a.m_max > kDefaultOperatorCap)
        throw InputError("m=" + std::to_string(a.m_max) + " exceeds the cap of " + std::to_string(kDefaultOperatorCap));
    for (std::size_t m = a.m_min; m <= a.m_max; ++m) {
        const std::size_t d = SymMat::packed_size(m);
        char line[256];
        std::snprintf(line, sizeof line, "m=%zu  W %.10f  V %.10f  -D/2 %.10f  kerW %zu  kerD %zu  kerV %zu\n", m,
                      operator_norm(OperatorKind::W, m), operator_norm(OperatorKind::V, m),
                      operator_norm(OperatorKind::HalfNegD, m), d - operator_rank(OperatorKind::W, m),
                      d - operator_rank(OperatorKind::D, m), d - operator_rank(OperatorKind::V, m));
        out << line;
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"popcov: covariance structure of related populations from allele-frequency panels"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "popcov 1.0.0");

    StatsArgs stats;
    auto* s = app.add_subcommand("stats", "Estimate W-hat, D-hat, V-hat and S-hat from a panel");
    s->add_option("--panel", stats.panel, "Panel TSV (.gz accepted)")->required()->check(CLI::ExistingFile);
    s->add_option("--out", stats.out, "Output directory")->required();
    s->add_flag("--bias", stats.bias, "Apply binomial sampling-bias correction (needs --sizes)");
    s->add_option("--sizes", stats.sizes, "Sample-size TSV matching the panel")->check(CLI::ExistingFile);
    s->add_option("--bias-form", stats.bias_form, "Bias term: paper = x(1-x)/(8N^2(N-1)), alt = x(1-x)/(2N-1)")
        ->check(CLI::IsMember({"paper", "alt"}))
        ->capture_default_str();
    s->add_flag("--frequencies", stats.frequencies, "Require every value to lie in [0,1]");
    s->add_flag("!--no-heatmaps", stats.heatmaps, "Skip the PGM heatmaps");
    stats.par.add_to(s);

    RootArgs root;
    auto* r = app.add_subcommand("root", "Find the root bipartition from V-hat and S-hat");
    r->add_option("--panel", root.panel, "Panel TSV (.gz accepted)")->required()->check(CLI::ExistingFile);
    r->add_option("--out", root.out, "Output directory")->required();
    r->add_option("--mode", root.mode, "Search: exhaustive, greedy or auto (exhaustive up to 22 populations)")
        ->check(CLI::IsMember({"exhaustive", "greedy", "auto"}))
        ->capture_default_str();
    r->add_flag("--require-agreement", root.require_agreement, "Exit with code 3 if the two splits differ");
    r->add_flag("--frequencies", root.frequencies, "Require every value to lie in [0,1]");
    root.par.add_to(r);

    PairArgs pair;
    auto* p = app.add_subcommand("pair", "Pair SNPs across chromosomes and write the pairing report");
    p->add_option("--panel", pair.panel, "Panel TSV (.gz accepted)")->required()->check(CLI::ExistingFile);
    p->add_option("--out", pair.out, "Output directory")->required();

    LsfitArgs ls;
    auto* l = app.add_subcommand("lsfit", "Least-squares fit of V-hat and W-hat under a linear hypothesis");
    l->add_option("--vhat", ls.vhat, "V-hat matrix file")->required()->check(CLI::ExistingFile);
    l->add_option("--what", ls.what, "W-hat matrix file (default: W(V-hat))")->check(CLI::ExistingFile);
    l->add_option("--basis", ls.basis, "Subspace basis file")->required()->check(CLI::ExistingFile);
    l->add_option("--out", ls.out, "Output directory")->required();

    SimulateArgs sim;
    auto* m = app.add_subcommand("simulate", "Simulate the sequential-split scenario under normal drift");
    m->add_option("--config", sim.config, "Scenario key=value file")->required()->check(CLI::ExistingFile);
    m->add_option("--out", sim.out, "Output directory")->required();
    m->add_option("--seed", sim.seed, "Overrides the config seed");
    m->add_flag("--gzip", sim.gzip, "Write gzip-compressed panels");
    sim.par.add_to(m);

    NormsArgs norms;
    auto* n = app.add_subcommand("norms", "Print operator norms and kernel dimensions");
    n->add_option("--m-min", norms.m_min, "Smallest m")->capture_default_str();
    n->add_option("--m-max", norms.m_max, "Largest m (at most 64)")->capture_default_str();
    std::optional<std::size_t> single_m;
    n->add_option("--m", single_m, "Single m (overrides the range)");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*s) return cmd_stats(stats, out, err);
        if (*r) return cmd_root(root, out, err);
        if (*p) return cmd_pair(pair, out, err);
        if (*l) return cmd_lsfit(ls, out, err);
        if (*m) return cmd_simulate(sim, out, err);
        if (*n) {
            if (single_m) norms.m_min = norms.m_max = *single_m;
            return cmd_norms(norms, out, err);
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}

}  // namespace popcov::app
