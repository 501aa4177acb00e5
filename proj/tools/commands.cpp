#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "wmh/baselines.hpp"
#include "wmh/error.hpp"
#include "wmh/estimate.hpp"
#include "wmh/sketcher.hpp"
#include "wmh/vectors.hpp"

namespace wmh::cli {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Dataset load(const std::string& path, const InputOptions& in, std::optional<std::size_t> dim = std::nullopt) {
    ParseOptions p{in.base, in.dim ? in.dim : dim};
    return read_dataset_file(path, p);
}

struct ResolvedLayout {
    RedGreenLayout layout;
    double alpha;
    bool automatic;
};

ResolvedLayout resolve_layout(const Dataset& ds, const std::string& alpha_text, bool low_mem,
                              std::uint64_t max_cells) {
    auto alpha = parse_alpha(alpha_text);
    bool automatic = !alpha.has_value();
    if (automatic) {
        auto grid = default_alpha_grid();
        alpha = optimize_alpha(ds, grid, low_mem ? std::numeric_limits<std::uint64_t>::max() : max_cells);
    }
    auto maxima = dataset_maxima(ds);
    return {RedGreenLayout::build(maxima, *alpha, low_mem, max_cells), *alpha, automatic};
}

std::uint64_t header_layout_id(Scheme scheme, const RedGreenLayout* layout, std::size_t dim) {
    switch (scheme) {
        case Scheme::RedGreen: return layout->id();
        case Scheme::Ioffe: return 0;
        case Scheme::Reduction: return reduction_layout_id(dim);
    }
    return 0;
}

std::vector<Sketch> read_sketch_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_sketches(in);
}

std::pair<std::size_t, std::size_t> parse_pair(const std::string& text) {
    std::string t = text;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream is(t);
    long long i = -1;
    long long j = -1;
    std::string rest;
    if (!(is >> i >> j) || (is >> rest) || i < 0 || j < 0) throw UsageError("malformed pair '" + text + "'");
    return {static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
}

}  // namespace

std::optional<double> parse_alpha(const std::string& text) {
    if (text == "auto") return std::nullopt;
    double v = 0.0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size() || !(v > 0.0) || !std::isfinite(v)) {
        throw UsageError("--alpha expects 'auto' or a positive number, got '" + text + "'");
    }
    return v;
}

void cmd_layout(const LayoutOptions& opts, std::ostream& out) {
    auto ds = load(opts.data_path, opts.input);
    if (ds.empty()) throw DataError("dataset '" + opts.data_path + "' has no vectors");
    auto resolved = resolve_layout(ds, opts.alpha, opts.low_mem, opts.max_cells);
    resolved.layout.save_file(opts.out_path);
    auto maxima = dataset_maxima(ds);
    double s = mean_sparsity(ds, maxima, resolved.alpha);

    if (opts.json) {
        nlohmann::json j{{"D", ds.dim()},
                         {"M", resolved.layout.total()},
                         {"retained_coordinates", resolved.layout.slots()},
                         {"alpha", resolved.alpha},
                         {"alpha_auto", resolved.automatic},
                         {"mean_sparsity", s},
                         {"layout_id", resolved.layout.id()}};
        out << j.dump(2) << '\n';
    } else {
        out << "D = " << ds.dim() << '\n'
            << "M = " << resolved.layout.total() << '\n'
            << "retained coordinates = " << resolved.layout.slots() << '\n'
            << "alpha = " << resolved.alpha << (resolved.automatic ? " (auto)" : "") << '\n'
            << "mean effective sparsity = " << s << '\n'
            << "layout id = " << std::hex << std::setw(16) << std::setfill('0') << resolved.layout.id()
            << std::dec << std::setfill(' ') << '\n';
    }
}

void cmd_sketch(const SketchOptions& opts, std::ostream& out) {
    opts.config.validate();
    std::optional<RedGreenLayout> layout;
    std::optional<std::size_t> dim;
    if (opts.config.scheme == Scheme::RedGreen) {
        if (opts.layout_path.empty()) throw UsageError("--layout is required for the redgreen scheme");
        layout = RedGreenLayout::load_file(opts.layout_path, opts.config.low_mem);
        dim = layout->dim();
    }
    auto ds = load(opts.data_path, opts.input, dim);
    if (layout && ds.dim() != layout->dim()) {
        throw MismatchError("dataset dimension " + std::to_string(ds.dim()) + " does not match layout dimension " +
                            std::to_string(layout->dim()));
    }

    std::vector<Sketch> sketches(ds.size());
    const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(ds.size())));
    std::mutex failure_mutex;
    std::optional<std::size_t> failed_at;
    std::exception_ptr failure;

    auto worker = [&](unsigned t) {
        Sketcher sketcher(opts.config.scheme, layout ? &*layout : nullptr, opts.config.delta);
        for (std::size_t i = t; i < ds.size(); i += threads) {
            try {
                if (ds[i].empty()) throw DataError("empty vector");
                sketches[i] = sketcher.sketch(ds[i], opts.config.k, opts.config.master_seed);
            } catch (const Error& e) {
                std::lock_guard lock(failure_mutex);
                if (!failed_at || i < *failed_at) {
                    failed_at = i;
                    auto msg = "line " + std::to_string(ds.source_line(i)) + ": " + e.what();
                    if (dynamic_cast<const UsageError*>(&e)) {
                        failure = std::make_exception_ptr(UsageError(msg));
                    } else if (dynamic_cast<const MismatchError*>(&e)) {
                        failure = std::make_exception_ptr(MismatchError(msg));
                    } else {
                        failure = std::make_exception_ptr(DataError(msg));
                    }
                }
                return;
            }
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    }
    if (failure) std::rethrow_exception(failure);

    auto layout_id = header_layout_id(opts.config.scheme, layout ? &*layout : nullptr, ds.dim());
    std::ofstream file;
    std::ostream* sink = &out;
    if (!opts.out_path.empty() && opts.out_path != "-") {
        file.open(opts.out_path, std::ios::binary);
        if (!file) throw IoError("cannot open '" + opts.out_path + "' for writing");
        sink = &file;
    }
    if (opts.json) {
        write_sketches_json(*sink, sketches);
    } else {
        write_sketches(*sink, sketches, opts.config.scheme, opts.config.k, opts.config.master_seed, layout_id);
    }
    sink->flush();
    if (!*sink) throw IoError("failed to write sketches");
}

void cmd_estimate(const EstimateOptions& opts, std::ostream& out) {
    auto sketches = read_sketch_file(opts.sketch_path);
    auto pairs = opts.pairs;
    if (!opts.pairs_file.empty()) {
        std::ifstream in(opts.pairs_file);
        if (!in) throw IoError("cannot open '" + opts.pairs_file + "'");
        std::string line;
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
            pairs.push_back(parse_pair(line));
        }
    }
    if (pairs.empty()) throw UsageError("no pairs given (use --pair or --pairs)");

    std::optional<Dataset> exact;
    if (!opts.exact_path.empty()) {
        exact = load(opts.exact_path, opts.input);
        if (exact->size() != sketches.size()) {
            throw DataError("--exact dataset has " + std::to_string(exact->size()) + " vectors but the sketch file has " +
                            std::to_string(sketches.size()));
        }
    }

    nlohmann::json rows = nlohmann::json::array();
    if (!opts.json) out << "i,j,j_hat,std_err" << (exact ? ",exact,abs_error" : "") << '\n';
    for (auto [i, j] : pairs) {
        if (i >= sketches.size() || j >= sketches.size()) {
            throw UsageError("pair (" + std::to_string(i) + "," + std::to_string(j) + ") out of range for " +
                             std::to_string(sketches.size()) + " sketches");
        }
        auto rep = estimate_from_sketches(sketches[i], sketches[j]);
        std::optional<double> truth;
        if (exact) truth = exact_jaccard((*exact)[i], (*exact)[j]);
        if (opts.json) {
            nlohmann::json row{{"i", i}, {"j", j}, {"j_hat", rep.j_hat}, {"std_err", rep.std_err}, {"k", rep.k},
                               {"scheme", std::string(to_string(rep.scheme))}};
            if (truth) {
                row["exact"] = *truth;
                row["abs_error"] = std::abs(rep.j_hat - *truth);
            }
            rows.push_back(std::move(row));
        } else {
            out << i << ',' << j << ',' << rep.j_hat << ',' << rep.std_err;
            if (truth) out << ',' << *truth << ',' << std::abs(rep.j_hat - *truth);
            out << '\n';
        }
    }
    if (opts.json) out << rows.dump(2) << '\n';
}

void cmd_bench(const BenchOptions& opts, std::ostream& out) {
    if (opts.reps == 0) throw UsageError("--reps must be at least 1");
    if (opts.k == 0) throw UsageError("--k must be at least 1");
    if (opts.schemes.empty()) throw UsageError("no schemes selected");
    auto ds = load(opts.data_path, opts.input);
    if (ds.empty()) throw DataError("dataset '" + opts.data_path + "' has no vectors");

    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (!ds[i].empty()) members.push_back(i);
    }
    if (members.empty()) throw DataError("dataset has only empty vectors");

    nlohmann::json report;
    report["vectors"] = members.size();
    report["D"] = ds.dim();
    report["k"] = opts.k;
    report["reps"] = opts.reps;
    double nnz = 0.0;
    for (auto i : members) nnz += static_cast<double>(ds[i].nnz());
    report["mean_nnz"] = nnz / static_cast<double>(members.size());

    std::optional<ResolvedLayout> layout;
    for (auto scheme : opts.schemes) {
        nlohmann::json row;
        if (scheme == Scheme::RedGreen) {
            auto t0 = Clock::now();
            layout = resolve_layout(ds, opts.alpha, opts.low_mem, kDefaultMaxCells);
            row["layout_ms"] = ms_since(t0);
            row["alpha"] = layout->alpha;
            row["M"] = layout->layout.total();
            row["mean_sparsity"] = mean_sparsity(ds, dataset_maxima(ds), layout->alpha);
        }
        Sketcher sketcher(scheme, layout ? &layout->layout : nullptr, opts.delta);
        double total_ms = 0.0;
        std::vector<Sketch> last;
        for (auto i : members) {
            std::vector<double> times;
            Sketch s;
            for (std::size_t r = 0; r < opts.reps; ++r) {
                auto t0 = Clock::now();
                s = sketcher.sketch(ds[i], opts.k, opts.seed);
                times.push_back(ms_since(t0));
            }
            std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2), times.end());
            total_ms += times[times.size() / 2];
            last.push_back(std::move(s));
        }
        row["ms_per_vector"] = total_ms / static_cast<double>(members.size());
        if (scheme == Scheme::RedGreen) {
            auto stats = hash_stats(last);
            row["mean_hash"] = stats.mean;
            row["max_hash"] = stats.max;
            row["bits_needed"] = stats.bits_needed;
        }
        report["schemes"][std::string(to_string(scheme))] = std::move(row);
    }

    out << "vectors=" << members.size() << "  D=" << ds.dim() << "  mean nnz=" << report["mean_nnz"].get<double>()
        << "  k=" << opts.k << "  reps=" << opts.reps << '\n';
    out << std::left << std::setw(12) << "scheme" << std::right << std::setw(16) << "ms/vector" << std::setw(14)
        << "layout ms" << std::setw(12) << "mean hash" << std::setw(8) << "bits" << '\n';
    for (auto scheme : opts.schemes) {
        const auto& row = report["schemes"][std::string(to_string(scheme))];
        out << std::left << std::setw(12) << to_string(scheme) << std::right << std::setw(16) << std::fixed
            << std::setprecision(4) << row["ms_per_vector"].get<double>() << std::setw(14);
        if (row.contains("layout_ms")) {
            out << row["layout_ms"].get<double>() << std::setw(12) << std::setprecision(2)
                << row["mean_hash"].get<double>() << std::setw(8) << row["bits_needed"].get<unsigned>();
        } else {
            out << "-" << std::setw(12) << "-" << std::setw(8) << "-";
        }
        out << '\n';
        out.unsetf(std::ios::floatfield);
        out << std::setprecision(6);
    }
    const auto& schemes = report["schemes"];
    if (schemes.contains("redgreen")) {
        double rg = schemes["redgreen"]["ms_per_vector"].get<double>();
        for (const char* other : {"ioffe", "reduction"}) {
            if (schemes.contains(other) && rg > 0.0) {
                double ratio = schemes[other]["ms_per_vector"].get<double>() / rg;
                report["speedup_vs_" + std::string(other)] = ratio;
                out << "redgreen speedup vs " << other << ": " << ratio << "x\n";
            }
        }
    }
    if (!opts.json_path.empty()) {
        std::ofstream js(opts.json_path);
        if (!js) throw IoError("cannot open '" + opts.json_path + "' for writing");
        js << report.dump(2) << '\n';
    }
}

void cmd_stats(const StatsOptions& opts, std::ostream& out) {
    if (!opts.data_path.empty()) {
        if (opts.reps == 0) throw UsageError("--reps must be at least 1");
        if (opts.k_max == 0) throw UsageError("--k-max must be at least 1");
        auto ds = load(opts.data_path, opts.input);
        auto [i, j] = opts.pair;
        if (i >= ds.size() || j >= ds.size()) throw UsageError("--pair index out of range");
        CurveSet curves;
        std::optional<ResolvedLayout> layout;
        for (auto scheme : opts.schemes) {
            if (scheme == Scheme::RedGreen) layout = resolve_layout(ds, opts.alpha, false, kDefaultMaxCells);
            Sketcher sketcher(scheme, layout ? &layout->layout : nullptr);
            auto curve = error_curve(ds[i], ds[j], sketcher, opts.k_max, opts.reps, opts.seed);
            switch (scheme) {
                case Scheme::RedGreen: curves.redgreen = std::move(curve); break;
                case Scheme::Ioffe: curves.ioffe = std::move(curve); break;
                case Scheme::Reduction: curves.reduction = std::move(curve); break;
            }
        }
        if (opts.json) {
            write_curves_json(out, curves);
        } else {
            write_curves_csv(out, curves);
        }
        return;
    }
    if (opts.sketch_path.empty()) throw UsageError("stats needs a sketch file or --data for error curves");
    auto sketches = read_sketch_file(opts.sketch_path);
    if (sketches.empty()) throw DataError("sketch file holds no records");
    auto stats = hash_stats(sketches);
    nlohmann::json j{{"scheme", std::string(to_string(sketches.front().scheme))},
                     {"records", sketches.size()},
                     {"k", sketches.front().k()},
                     {"mean", stats.mean},
                     {"max", stats.max},
                     {"bits_needed", stats.bits_needed},
                     {"mean_log2", stats.mean_log2}};
    if (opts.json) {
        out << j.dump(2) << '\n';
    } else {
        out << "scheme = " << j["scheme"].get<std::string>() << '\n'
            << "records = " << sketches.size() << ", k = " << sketches.front().k() << '\n'
            << "mean hash = " << stats.mean << '\n'
            << "max hash = " << stats.max << '\n'
            << "bits needed = " << stats.bits_needed << '\n';
    }
}

}  // namespace wmh::cli
