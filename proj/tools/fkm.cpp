// Command-line surface for the fuzzy K-means coreset toolkit: dataset
// generation, coreset builds, quality evaluation, the small-scale
// approximation scheme, stream simulation, and size benchmarks.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fkm/bicriteria.hpp"
#include "fkm/common.hpp"
#include "fkm/coreset.hpp"
#include "fkm/evaluate.hpp"
#include "fkm/fuzzy.hpp"
#include "fkm/generator.hpp"
#include "fkm/io.hpp"
#include "fkm/ptas.hpp"
#include "fkm/streaming.hpp"

namespace {

struct CommonOptions {
    fkm::FuzzyParams params;
    fkm::BicriteriaOptions bicriteria;
    uint64_t seed = 1;
    std::string preset = "default";
};

void add_common_flags(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--k", opts.params.k, "number of clusters")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--m", opts.params.m, "fuzzifier (> 1)")
        ->default_val(2.0);
    cmd->add_option("--epsilon", opts.params.epsilon, "accuracy target in (0,1)");
    cmd->add_option("--delta", opts.params.delta, "failure budget in (0,1)");
    cmd->add_option("--seed", opts.seed, "master RNG seed");
    cmd->add_option("--const-q", opts.params.const_q, "sample-count constant");
    cmd->add_option("--const-a", opts.params.const_a, "accuracy-split constant");
    cmd->add_option("--const-b", opts.params.const_b, "grid-log constant");
    cmd->add_option("--const-c", opts.params.const_c, "grid-cell constant");
    cmd->add_option("--alpha", opts.bicriteria.alpha,
                    "assumed seeding cost inflation");
    cmd->add_option("--beta", opts.bicriteria.beta, "seeding center inflation");
    cmd->add_option("--preset", opts.preset,
                    "constant preset: default | conservative")
        ->check(CLI::IsMember({"default", "conservative"}));
}

void apply_preset(CommonOptions& opts) {
    if (opts.preset != "conservative") return;
    // Guarantee-oriented constants; desk-scale builds under them rarely
    // compress below the input.
    opts.params.const_q = 256.0;
    opts.params.const_a = 96.0;
    opts.params.const_b = 64.0;
    opts.params.const_c = 8.0;
}

fkm::HeaderEcho param_echo(const CommonOptions& opts) {
    return {
        {"k", std::to_string(opts.params.k)},
        {"m", fkm::format_double(opts.params.m)},
        {"epsilon", fkm::format_double(opts.params.epsilon)},
        {"delta", fkm::format_double(opts.params.delta)},
        {"const_q", fkm::format_double(opts.params.const_q)},
        {"const_a", fkm::format_double(opts.params.const_a)},
        {"const_b", fkm::format_double(opts.params.const_b)},
        {"const_c", fkm::format_double(opts.params.const_c)},
        {"alpha", fkm::format_double(opts.bicriteria.alpha)},
        {"beta", fkm::format_double(opts.bicriteria.beta)},
        {"seed", std::to_string(opts.seed)},
    };
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int run_gen(const std::string& spec_path, const std::string& spec_json,
            uint64_t seed, const std::string& out_path) {
    const std::string text =
        !spec_json.empty() ? spec_json : read_text_file(spec_path);
    const fkm::MixtureSpec spec = fkm::mixture_from_json(text);
    const fkm::WeightedDataset data = fkm::generate_dataset(spec, seed);
    fkm::HeaderEcho echo{{"generator", "gaussian-mixture"},
                         {"seed", std::to_string(seed)},
                         {"spec", fkm::mixture_to_json(spec)}};
    fkm::write_points_file(out_path, data, echo);
    std::cerr << "gen: " << data.size() << " points of dimension " << spec.dim
              << " -> " << out_path << "\n";
    return 0;
}

int run_coreset(const CommonOptions& opts, const std::string& in_path,
                const std::string& out_path) {
    const auto start = std::chrono::steady_clock::now();
    const fkm::WeightedDataset data = fkm::read_points_file(in_path);
    const fkm::CoresetBuild build =
        fkm::build_fuzzy_coreset(data, opts.params, opts.seed, opts.bicriteria);
    fkm::HeaderEcho echo = param_echo(opts);
    echo.emplace_back("q", std::to_string(build.q));
    echo.emplace_back("ring_levels", std::to_string(build.ring_levels));
    echo.emplace_back("nonempty_cells", std::to_string(build.nonempty_cells));
    fkm::write_coreset_file(out_path, build.coreset, echo);
    std::cerr << "coreset: " << data.size() << " -> " << build.coreset.size()
              << " points (q=" << build.q << ", F=" << build.ring_levels
              << ", cells=" << build.nonempty_cells << ") in "
              << seconds_since(start) << " s\n";
    return 0;
}

int run_eval(const CommonOptions& opts, const std::string& in_path,
             const std::string& coreset_path, const std::string& out_path,
             uint32_t solutions, const std::string& mode,
             double box_inflation) {
    const auto start = std::chrono::steady_clock::now();
    const fkm::WeightedDataset data = fkm::read_points_file(in_path);
    const fkm::Coreset coreset = fkm::read_coreset_file(coreset_path);
    fkm::EvalConfig config;
    config.params = opts.params;
    config.n_solutions = solutions;
    config.mode = fkm::solution_mode_from_string(mode);
    config.seed = opts.seed;
    config.box_inflation = box_inflation;
    config.alpha = opts.bicriteria.alpha;
    config.beta = opts.bicriteria.beta;
    const fkm::TrialReport report = fkm::evaluate_coreset(data, coreset, config);
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
    fkm::write_report(out, report);
    std::cerr << "eval: fuzzy " << report.fuzzy_pass << "/"
              << report.fuzzy_ratio.size() << " in [" << report.fuzzy_lo << ","
              << report.fuzzy_hi << "], km " << report.km_pass << "/"
              << report.km_ratio.size() << " in " << seconds_since(start)
              << " s\n";
    return 0;
}

int run_ptas(const CommonOptions& opts, const std::string& in_path,
             const std::string& out_path, uint32_t t_override, uint64_t budget,
             bool use_coreset) {
    const auto start = std::chrono::steady_clock::now();
    const fkm::WeightedDataset data = fkm::read_points_file(in_path);
    fkm::PtasOptions ptas_opts;
    ptas_opts.t_override = t_override;
    ptas_opts.pool_budget = budget;
    ptas_opts.eval_budget = budget;
    const fkm::MeansSolution means =
        use_coreset
            ? fkm::ptas_on_coreset(data, opts.params, opts.seed, ptas_opts,
                                   opts.bicriteria)
            : fkm::derandomized_sampling_ptas(data, opts.params.k, opts.params.m,
                                              opts.params.epsilon, ptas_opts);
    const double cost = fkm::fuzzy_cost_of_means(data, means, opts.params.m);
    const fkm::WeightedDataset out_means(means.data(), means.dim());
    fkm::HeaderEcho echo = param_echo(opts);
    echo.emplace_back("cost", fkm::format_double(cost));
    echo.emplace_back("t_override", std::to_string(t_override));
    echo.emplace_back("on_coreset", use_coreset ? "1" : "0");
    fkm::write_points_file(out_path, out_means, echo);
    std::cerr << "ptas: cost " << cost << " with " << means.count()
              << " means in " << seconds_since(start) << " s\n";
    return 0;
}

int run_stream(const CommonOptions& opts, const std::string& in_path,
               const std::string& out_path, uint64_t block_size,
               const std::string& checkpoint_out,
               const std::string& resume_path) {
    const auto start = std::chrono::steady_clock::now();
    const fkm::WeightedDataset data = fkm::read_points_file(in_path);
    if (!data.unit_weights())
        throw std::runtime_error("stream input must be unweighted points");

    fkm::StreamConfig config;
    config.params = opts.params;
    config.bicriteria = opts.bicriteria;
    config.base_block_size = block_size;
    config.seed = opts.seed;

    fkm::CoresetStream stream =
        resume_path.empty() ? fkm::CoresetStream(data.dim(), config)
                            : fkm::load_checkpoint_file(resume_path);
    uint64_t peak = stream.summarized_points();
    for (std::size_t i = 0; i < data.size(); ++i) {
        stream.insert(data.point(i));
        peak = std::max(peak, stream.summarized_points());
    }
    const fkm::Coreset final_coreset = stream.finalize();
    fkm::HeaderEcho echo = param_echo(opts);
    echo.emplace_back("block_size", std::to_string(stream.block_size()));
    echo.emplace_back("total_seen", std::to_string(stream.total_seen()));
    fkm::write_coreset_file(out_path, final_coreset, echo);
    if (!checkpoint_out.empty()) fkm::save_checkpoint_file(checkpoint_out, stream);

    std::ostringstream levels;
    for (std::size_t i = 0; i < stream.levels().size(); ++i)
        if (stream.levels()[i].has_value())
            levels << " L" << i << ":" << stream.levels()[i]->size();
    std::cerr << "stream: " << stream.total_seen() << " points -> "
              << final_coreset.size() << " (peak resident " << peak << ","
              << levels.str() << ") in " << seconds_since(start) << " s\n";
    return 0;
}

int run_bench(const CommonOptions& opts, const std::string& data_kind,
              const std::string& n_list, std::size_t dim,
              const std::string& out_path) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
    out << "# fkm coreset size benchmark\n";
    out << "# data=" << data_kind << " dim=" << dim << " k=" << opts.params.k
        << " epsilon=" << fkm::format_double(opts.params.epsilon)
        << " const_q=" << fkm::format_double(opts.params.const_q)
        << " seed=" << opts.seed << "\n";
    out << "n\tcoreset_points\tq\tring_levels\tnonempty_cells\n";
    std::stringstream list(n_list);
    std::string token;
    while (std::getline(list, token, ',')) {
        const std::size_t n = std::stoull(token);
        const auto start = std::chrono::steady_clock::now();
        fkm::WeightedDataset data = [&] {
            if (data_kind == "heavy")
                return fkm::heavy_tailed_cloud(n, dim, opts.seed);
            fkm::MixtureSpec spec;
            spec.dim = dim;
            const uint64_t half = std::max<uint64_t>(1, n / 2);
            spec.components.push_back({std::vector<double>(dim, 0.0), 1.0, half});
            spec.components.push_back(
                {std::vector<double>(dim, 20.0), 1.0, n - half});
            return fkm::generate_dataset(spec, opts.seed);
        }();
        const fkm::CoresetBuild build =
            fkm::build_fuzzy_coreset(data, opts.params, opts.seed, opts.bicriteria);
        out << n << '\t' << build.coreset.size() << '\t' << build.q << '\t'
            << build.ring_levels << '\t' << build.nonempty_cells << '\n';
        std::cerr << "bench n=" << n << ": |S|=" << build.coreset.size()
                  << " in " << seconds_since(start) << " s\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fuzzy K-means coreset toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "sample a Gaussian mixture dataset");
    std::string gen_spec_path, gen_spec_json, gen_out;
    uint64_t gen_seed = 1;
    gen->add_option("--spec", gen_spec_path, "mixture spec JSON file");
    gen->add_option("--spec-json", gen_spec_json, "mixture spec JSON string");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--out", gen_out, "output point file")->required();

    // coreset
    auto* coreset = app.add_subcommand("coreset", "build a coreset of a point file");
    CommonOptions coreset_opts;
    std::string coreset_in, coreset_out;
    add_common_flags(coreset, coreset_opts);
    coreset->add_option("--in", coreset_in, "input point file")->required();
    coreset->add_option("--out", coreset_out, "output coreset file")->required();

    // eval
    auto* eval = app.add_subcommand("eval", "measure coreset cost ratios");
    CommonOptions eval_opts;
    std::string eval_in, eval_coreset, eval_out, eval_mode = "non-negligible";
    uint32_t eval_solutions = 100;
    double eval_inflation = 0.0;
    add_common_flags(eval, eval_opts);
    eval->add_option("--in", eval_in, "source point file")->required();
    eval->add_option("--coreset", eval_coreset, "coreset file")->required();
    eval->add_option("--out", eval_out, "report file")->required();
    eval->add_option("--mode", eval_mode,
                     "solution family: non-negligible | unrestricted");
    eval->add_option("--solutions", eval_solutions, "candidate solutions");
    eval->add_option("--box-inflation", eval_inflation,
                     "bounding-box inflation (0 = mode default)");

    // ptas
    auto* ptas = app.add_subcommand(
        "ptas", "small-scale (1+epsilon)-approximation by enumeration");
    CommonOptions ptas_options;
    std::string ptas_in, ptas_out;
    uint32_t ptas_t_override = 0;
    uint64_t ptas_budget = 10000000ULL;
    bool ptas_use_coreset = false;
    add_common_flags(ptas, ptas_options);
    ptas->add_option("--in", ptas_in, "input point file")->required();
    ptas->add_option("--out", ptas_out, "output means file")->required();
    ptas->add_option("--t-override", ptas_t_override,
                     "candidate multiset size (0 = 64K/epsilon)");
    ptas->add_option("--budget", ptas_budget, "enumeration budget");
    ptas->add_flag("--use-coreset", ptas_use_coreset,
                   "compress with a coreset first");

    // stream
    auto* stream = app.add_subcommand("stream", "merge-and-reduce over a point file");
    CommonOptions stream_opts;
    std::string stream_in, stream_out, stream_checkpoint, stream_resume;
    uint64_t stream_block = 0;
    add_common_flags(stream, stream_opts);
    stream->add_option("--in", stream_in, "input point file")->required();
    stream->add_option("--out", stream_out, "final coreset file")->required();
    stream->add_option("--block-size", stream_block,
                       "points per base block (0 = auto)");
    stream->add_option("--checkpoint", stream_checkpoint,
                       "write the stream state here");
    stream->add_option("--resume", stream_resume, "resume from a checkpoint");

    // bench
    auto* bench = app.add_subcommand("bench", "coreset size across dataset sizes");
    CommonOptions bench_opts;
    std::string bench_data = "heavy", bench_ns = "1000,10000,100000", bench_out;
    std::size_t bench_dim = 2;
    add_common_flags(bench, bench_opts);
    bench->add_option("--data", bench_data, "dataset family: heavy | mixture")
        ->check(CLI::IsMember({"heavy", "mixture"}));
    bench->add_option("--n-list", bench_ns, "comma-separated dataset sizes");
    bench->add_option("--dim", bench_dim, "dimension");
    bench->add_option("--out", bench_out, "output table")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed()) {
            if (gen_spec_path.empty() && gen_spec_json.empty())
                throw std::runtime_error("gen needs --spec or --spec-json");
            return run_gen(gen_spec_path, gen_spec_json, gen_seed, gen_out);
        }
        if (coreset->parsed()) {
            apply_preset(coreset_opts);
            return run_coreset(coreset_opts, coreset_in, coreset_out);
        }
        if (eval->parsed()) {
            apply_preset(eval_opts);
            return run_eval(eval_opts, eval_in, eval_coreset, eval_out,
                            eval_solutions, eval_mode, eval_inflation);
        }
        if (ptas->parsed()) {
            apply_preset(ptas_options);
            return run_ptas(ptas_options, ptas_in, ptas_out, ptas_t_override,
                            ptas_budget, ptas_use_coreset);
        }
        if (stream->parsed()) {
            apply_preset(stream_opts);
            return run_stream(stream_opts, stream_in, stream_out, stream_block,
                              stream_checkpoint, stream_resume);
        }
        if (bench->parsed()) {
            apply_preset(bench_opts);
            return run_bench(bench_opts, bench_data, bench_ns, bench_dim,
                             bench_out);
        }
    } catch (const fkm::infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
