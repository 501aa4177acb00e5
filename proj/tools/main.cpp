// wmh: weighted minwise hashing command line.
//
//   wmh layout   DATA -o LAYOUT [--alpha auto|X]
//   wmh sketch   DATA --layout LAYOUT -o SKETCHES [--scheme S --k K --seed N]
//   wmh estimate SKETCHES --pair I,J ... [--exact DATA]
//   wmh bench    DATA [--schemes redgreen,ioffe,reduction --k 500 --reps 3]
//   wmh stats    SKETCHES | --data DATA --pair I,J [--k-max 50 --reps 200]
//
// Exit codes: 0 success, 1 data/domain error, 2 usage or I/O error.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "wmh/error.hpp"

namespace {

std::vector<wmh::Scheme> parse_scheme_list(const std::string& text) {
    std::vector<wmh::Scheme> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(wmh::parse_scheme(item));
    }
    return out;
}

std::pair<std::size_t, std::size_t> parse_pair(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) throw wmh::UsageError("pair must look like I,J");
    try {
        return {std::stoull(text.substr(0, comma)), std::stoull(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw wmh::UsageError("malformed pair '" + text + "'");
    }
}

void add_input_flags(CLI::App* cmd, wmh::cli::InputOptions& in, std::optional<std::size_t>& dim_flag) {
    cmd->add_option("--base", in.base, "Index origin of the sparse text format")->check(CLI::IsMember({0, 1}));
    cmd->add_option("--dim", dim_flag, "Declared dimensionality D (default: max index + 1)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted minwise hashing: red-green rejection sampling, Ioffe CWS and the unweighted reduction"};
    app.require_subcommand(1);

    std::optional<std::size_t> dim_flag;
    std::string scheme_name = "redgreen";
    std::string schemes_text = "redgreen,ioffe,reduction";
    std::vector<std::string> pair_texts;
    std::string pair_text = "0,1";
    std::string format = "binary";
    bool json = false;

    wmh::cli::LayoutOptions layout_opts;
    auto* layout = app.add_subcommand("layout", "Build the red-green layout of a dataset");
    layout->add_option("data", layout_opts.data_path, "Sparse text dataset")->required();
    layout->add_option("-o,--out", layout_opts.out_path, "Layout file to write")->required();
    layout->add_option("--alpha", layout_opts.alpha, "Scale factor, or 'auto' to search the default grid");
    layout->add_flag("--low-mem", layout_opts.low_mem, "Do not build the M-cell lookup table");
    layout->add_option("--max-cells", layout_opts.max_cells, "Largest allowed M for the lookup table");
    layout->add_flag("--json", json, "Print the summary as JSON");
    add_input_flags(layout, layout_opts.input, dim_flag);

    wmh::cli::SketchOptions sketch_opts;
    auto* sketch = app.add_subcommand("sketch", "Compute k hashes per vector");
    sketch->add_option("data", sketch_opts.data_path, "Sparse text dataset")->required();
    sketch->add_option("--layout", sketch_opts.layout_path, "Layout file (redgreen scheme)");
    sketch->add_option("-o,--out", sketch_opts.out_path, "Output file ('-' for stdout)")->required();
    sketch->add_option("--scheme", scheme_name, "redgreen, ioffe or reduction");
    sketch->add_option("--k", sketch_opts.config.k, "Hashes per vector");
    sketch->add_option("--seed", sketch_opts.config.master_seed, "64-bit master seed");
    sketch->add_option("--delta", sketch_opts.config.delta, "Tail probability that sets the iteration cap");
    sketch->add_flag("--low-mem", sketch_opts.config.low_mem, "Binary-search green test instead of the table");
    sketch->add_option("--threads", sketch_opts.threads, "Worker threads");
    sketch->add_option("--format", format, "binary or json")->check(CLI::IsMember({"binary", "json"}));
    add_input_flags(sketch, sketch_opts.input, dim_flag);

    wmh::cli::EstimateOptions est_opts;
    auto* estimate = app.add_subcommand("estimate", "Estimate Jaccard similarity from sketches");
    estimate->add_option("sketches", est_opts.sketch_path, "Sketch file")->required();
    estimate->add_option("--pair", pair_texts, "Pair of record indices I,J (repeatable)");
    estimate->add_option("--pairs", est_opts.pairs_file, "File with one pair per line");
    estimate->add_option("--exact", est_opts.exact_path, "Dataset for exact Jaccard and absolute error");
    estimate->add_flag("--json", json, "JSON instead of CSV");
    add_input_flags(estimate, est_opts.input, dim_flag);

    wmh::cli::BenchOptions bench_opts;
    auto* bench = app.add_subcommand("bench", "Time k hashes per vector for each scheme");
    bench->add_option("data", bench_opts.data_path, "Sparse text dataset")->required();
    bench->add_option("--schemes", schemes_text, "Comma-separated scheme list");
    bench->add_option("--k", bench_opts.k, "Hashes per vector");
    bench->add_option("--reps", bench_opts.reps, "Timed repetitions per vector (median is reported)");
    bench->add_option("--seed", bench_opts.seed, "64-bit master seed");
    bench->add_option("--alpha", bench_opts.alpha, "Scale factor or 'auto'");
    bench->add_option("--delta", bench_opts.delta, "Tail probability that sets the iteration cap");
    bench->add_flag("--low-mem", bench_opts.low_mem, "Binary-search green test instead of the table");
    bench->add_option("--json", bench_opts.json_path, "Also write the report as JSON");
    add_input_flags(bench, bench_opts.input, dim_flag);

    wmh::cli::StatsOptions stats_opts;
    auto* stats = app.add_subcommand("stats", "Hash value statistics, or error curves for one pair");
    stats->add_option("sketches", stats_opts.sketch_path, "Sketch file");
    stats->add_option("--data", stats_opts.data_path, "Dataset for error-curve mode");
    stats->add_option("--pair", pair_text, "Pair of vector indices I,J");
    stats->add_option("--k-max", stats_opts.k_max, "Largest k of the curve");
    stats->add_option("--reps", stats_opts.reps, "Repetitions per curve point");
    stats->add_option("--seed", stats_opts.seed, "Base seed of the repetitions");
    stats->add_option("--alpha", stats_opts.alpha, "Scale factor or 'auto'");
    stats->add_option("--schemes", schemes_text, "Comma-separated scheme list");
    stats->add_flag("--json", json, "JSON instead of text/CSV");
    add_input_flags(stats, stats_opts.input, dim_flag);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*layout) {
            layout_opts.input.dim = dim_flag;
            layout_opts.json = json;
            wmh::cli::cmd_layout(layout_opts, std::cout);
        } else if (*sketch) {
            sketch_opts.input.dim = dim_flag;
            sketch_opts.config.scheme = wmh::parse_scheme(scheme_name);
            sketch_opts.json = format == "json";
            wmh::cli::cmd_sketch(sketch_opts, std::cout);
        } else if (*estimate) {
            est_opts.input.dim = dim_flag;
            est_opts.json = json;
            for (const auto& p : pair_texts) est_opts.pairs.push_back(parse_pair(p));
            wmh::cli::cmd_estimate(est_opts, std::cout);
        } else if (*bench) {
            bench_opts.input.dim = dim_flag;
            bench_opts.schemes = parse_scheme_list(schemes_text);
            wmh::cli::cmd_bench(bench_opts, std::cout);
        } else if (*stats) {
            stats_opts.input.dim = dim_flag;
            stats_opts.json = json;
            stats_opts.pair = parse_pair(pair_text);
            stats_opts.schemes = parse_scheme_list(schemes_text);
            wmh::cli::cmd_stats(stats_opts, std::cout);
        }
    } catch (const wmh::UsageError& e) {
        std::cerr << "wmh: " << e.what() << '\n';
        return 2;
    } catch (const wmh::IoError& e) {
        std::cerr << "wmh: " << e.what() << '\n';
        return 2;
    } catch (const wmh::Error& e) {
        std::cerr << "wmh: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
