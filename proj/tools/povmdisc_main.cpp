// Command-line front end: builds and samples POVM pairs, classifies their
// multi-shot distinguishability, synthesizes and simulates the two-shot
// adaptive scheme, and runs Monte-Carlo sweeps.
//
// Verdicts and reports go to stdout, artifacts to files (written atomically),
// diagnostics to stderr. Exit codes: 0 success, 1 domain error, 2 usage
// error. All randomness is seeded explicitly; defaults are fixed constants.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "povmdisc/adaptive.hpp"
#include "povmdisc/classify.hpp"
#include "povmdisc/experiments.hpp"
#include "povmdisc/json_io.hpp"
#include "povmdisc/povm.hpp"

namespace {

using namespace povmdisc;

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        const std::string token = text.substr(pos, next - pos);
        try {
            out.push_back(std::stoi(token));
        } catch (const std::exception&) {
            throw CLI::ValidationError(std::string(what) + ": bad integer '" + token + "'");
        }
        pos = next + 1;
    }
    if (out.empty()) throw CLI::ValidationError(std::string(what) + ": empty list");
    return out;
}

// Accepts "lo..hi", "lo..hi:step", or a comma list of integers.
std::vector<int> parse_effects_spec(const std::string& text) {
    const std::size_t dots = text.find("..");
    if (dots == std::string::npos) return parse_int_list(text, "--effects");
    const std::size_t colon = text.find(':', dots + 2);
    try {
        const int lo = std::stoi(text.substr(0, dots));
        const int hi = std::stoi(colon == std::string::npos
                                     ? text.substr(dots + 2)
                                     : text.substr(dots + 2, colon - dots - 2));
        const int step = colon == std::string::npos ? 1 : std::stoi(text.substr(colon + 1));
        if (step < 1 || hi < lo) throw std::invalid_argument("range");
        std::vector<int> out;
        for (int v = lo; v <= hi; v += step) out.push_back(v);
        return out;
    } catch (const std::exception&) {
        throw CLI::ValidationError("--effects: expected M, M1,M2,..., or M1..M2[:step], got '" +
                                   text + "'");
    }
}

ClassifyOptions classify_options(int restarts, int max_iter, double tol, std::uint64_t seed) {
    ClassifyOptions options;
    options.search.restarts = restarts;
    options.search.max_iter = max_iter;
    options.parallel.restarts = restarts;
    options.parallel.max_iter = max_iter;
    if (tol > 0) {
        options.identity_tol = tol;
        options.search.membership_tol = tol;
        options.parallel.orthogonality_tol = tol;
    }
    options.seed = seed;
    return options;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* env_tol = std::getenv("POVMDISC_TOL")) {
        try {
            global_tolerances().atol = std::stod(env_tol);
        } catch (const std::exception&) {
            std::cerr << "POVMDISC_TOL ignored: '" << env_tol << "' is not a number\n";
        }
    }

    CLI::App app{"rank-one POVM pair discrimination toolkit"};
    app.require_subcommand(1);

    // sic
    auto* sic = app.add_subcommand("sic", "build a SIC POVM pair (second = permuted effects)");
    int sic_dim = 3;
    std::string sic_perm = "9,8,7,3,1,2,6,4,5";
    std::string sic_out;
    sic->add_option("--dim", sic_dim, "dimension (built-in fiducial: 3)")->capture_default_str();
    sic->add_option("--perm", sic_perm, "1-based effect permutation")->capture_default_str();
    sic->add_option("--out", sic_out, "output pair JSON")->required();

    // random
    auto* random_cmd = app.add_subcommand("random", "sample a Haar-random POVM pair");
    int rnd_dim = 2, rnd_m = 3;
    std::uint64_t rnd_seed = 1;
    std::string rnd_out;
    random_cmd->add_option("--dim", rnd_dim, "dimension")->required();
    random_cmd->add_option("--effects", rnd_m, "effect count m >= d")->required();
    random_cmd->add_option("--seed", rnd_seed, "RNG seed")->capture_default_str();
    random_cmd->add_option("--out", rnd_out, "output pair JSON")->required();

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "classify a pair (verdict on stdout)");
    std::string cls_pair;
    std::string cls_parallel;
    int cls_restarts = 8, cls_max_iter = 5000;
    double cls_tol = 0.0;
    std::uint64_t cls_seed = 1;
    bool cls_no_witness = false;
    classify_cmd->add_option("pair", cls_pair, "pair JSON file")->required();
    classify_cmd->add_option("--parallel-n", cls_parallel,
                             "comma list of N for parallel witness checks");
    classify_cmd->add_option("--restarts", cls_restarts, "search restarts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    classify_cmd->add_option("--max-iter", cls_max_iter, "projection iterations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    classify_cmd->add_option("--tol", cls_tol, "override span/orthogonality tolerance");
    classify_cmd->add_option("--seed", cls_seed, "search seed")->capture_default_str();
    classify_cmd->add_flag("--no-witness", cls_no_witness, "omit witness matrices from output");

    // synthesize
    auto* synth = app.add_subcommand("synthesize", "build the two-shot adaptive scheme");
    std::string syn_pair, syn_out;
    int syn_search = 0;
    std::uint64_t syn_seed = 1;
    synth->add_option("pair", syn_pair, "pair JSON file")->required();
    synth->add_option("--out", syn_out, "output scheme JSON")->required();
    synth->add_option("--optimize-a", syn_search,
                      "random-search trials for the complement element (0 = canonical)")
        ->capture_default_str();
    synth->add_option("--seed", syn_seed, "search seed")->capture_default_str();

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a scheme against a pair (report on stdout)");
    std::string sim_scheme, sim_pair;
    long sim_shots = 0;
    std::uint64_t sim_seed = 1;
    bool sim_no_paths = false;
    sim->add_option("scheme", sim_scheme, "scheme JSON file")->required();
    sim->add_option("pair", sim_pair, "pair JSON file")->required();
    sim->add_option("--shots", sim_shots, "sample count (0 = exact evaluation)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sim->add_option("--seed", sim_seed, "sampling seed")->capture_default_str();
    sim->add_flag("--no-paths", sim_no_paths, "omit the per-path table from output");

    // parallel-check
    auto* par = app.add_subcommand("parallel-check", "search a parallel witness at N uses");
    std::string par_pair;
    int par_uses = 1, par_restarts = 8, par_max_iter = 5000;
    std::uint64_t par_seed = 1;
    bool par_no_witness = false;
    par->add_option("pair", par_pair, "pair JSON file")->required();
    par->add_option("--uses", par_uses, "number of black-box uses N")->required();
    par->add_option("--restarts", par_restarts, "search restarts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    par->add_option("--max-iter", par_max_iter, "projection iterations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    par->add_option("--seed", par_seed, "search seed")->capture_default_str();
    par->add_flag("--no-witness", par_no_witness, "omit the witness matrix from output");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo verdict frequencies vs effect count");
    int sw_dim = 2, sw_samples = 1000, sw_threads = 0, sw_restarts = 8, sw_max_iter = 5000;
    std::string sw_effects, sw_out, sw_config_out;
    std::uint64_t sw_seed = 1;
    sweep->add_option("--dim", sw_dim, "dimension")->required();
    sweep->add_option("--effects", sw_effects, "M, M1,M2,..., or M1..M2[:step]")->required();
    sweep->add_option("--samples", sw_samples, "pairs per effect count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep->add_option("--seed", sw_seed, "master seed")->capture_default_str();
    sweep->add_option("--out", sw_out, "output CSV")->required();
    sweep->add_option("--threads", sw_threads, "worker count (0 = hardware)")
        ->capture_default_str();
    sweep->add_option("--restarts", sw_restarts, "search restarts per sample")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep->add_option("--max-iter", sw_max_iter, "projection iterations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep->add_option("--config-out", sw_config_out, "also write the sweep config as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (sic->parsed()) {
            const std::vector<int> perm = parse_int_list(sic_perm, "--perm");
            const PovmPair pair = sic_pair(sic_dim, perm);
            write_json_atomic(sic_out, pair_to_json(pair));
            std::cerr << "wrote " << sic_out << "\n";
        } else if (random_cmd->parsed()) {
            RngStream first_rng = RngStream::derive(rnd_seed, {0});
            RngStream second_rng = RngStream::derive(rnd_seed, {1});
            PovmPair pair;
            pair.first = sample_random_povm(rnd_dim, rnd_m, first_rng);
            pair.second = sample_random_povm(rnd_dim, rnd_m, second_rng);
            write_json_atomic(rnd_out, pair_to_json(pair));
            std::cerr << "wrote " << rnd_out << "\n";
        } else if (classify_cmd->parsed()) {
            const PovmPair pair = pair_from_json(read_json_file(cls_pair));
            ClassifyOptions options =
                classify_options(cls_restarts, cls_max_iter, cls_tol, cls_seed);
            if (!cls_parallel.empty())
                options.parallel_uses = parse_int_list(cls_parallel, "--parallel-n");
            const Verdict verdict = classify(pair, options);
            std::cout << verdict_to_json(verdict, !cls_no_witness).dump(2) << "\n";
        } else if (synth->parsed()) {
            const PovmPair pair = pair_from_json(read_json_file(syn_pair));
            SynthesisOptions options;
            if (syn_search > 0) {
                options.strategy = SynthesisOptions::AStrategy::RandomSearch;
                options.search_trials = syn_search;
                options.seed = syn_seed;
            }
            const AdaptiveScheme scheme = synthesize(pair, options);
            write_json_atomic(syn_out, scheme_to_json(scheme));
            std::cerr << "wrote " << syn_out << "\n";
        } else if (sim->parsed()) {
            const AdaptiveScheme scheme = scheme_from_json(read_json_file(sim_scheme));
            const PovmPair pair = pair_from_json(read_json_file(sim_pair));
            const SimulationReport report = sim_shots > 0
                                                ? simulate_sampled(scheme, pair, sim_shots, sim_seed)
                                                : simulate_exact(scheme, pair);
            std::cout << report_to_json(report, !sim_no_paths).dump(2) << "\n";
        } else if (par->parsed()) {
            const PovmPair pair = pair_from_json(read_json_file(par_pair));
            ParallelCheckOptions options;
            options.restarts = par_restarts;
            options.max_iter = par_max_iter;
            const ParallelCheckResult result =
                parallel_check(pair, par_uses, options, par_seed);
            std::cout << parallel_result_to_json(result, !par_no_witness).dump(2) << "\n";
        } else if (sweep->parsed()) {
            SweepConfig cfg;
            cfg.dim = sw_dim;
            cfg.m_values = parse_effects_spec(sw_effects);
            cfg.samples_per_point = sw_samples;
            cfg.master_seed = sw_seed;
            cfg.workers = sw_threads;
            cfg.classifier = classify_options(sw_restarts, sw_max_iter, 0.0, 0);
            const std::vector<SweepRow> rows = run_sweep(cfg);
            emit_csv(rows, sw_out);
            if (!sw_config_out.empty()) {
                Json j;
                j["dim"] = cfg.dim;
                j["m_values"] = cfg.m_values;
                j["samples_per_point"] = cfg.samples_per_point;
                j["master_seed"] = cfg.master_seed;
                j["restarts"] = sw_restarts;
                j["max_iter"] = sw_max_iter;
                write_json_atomic(sw_config_out, j);
            }
            std::cerr << "wrote " << sw_out << "\n";
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
