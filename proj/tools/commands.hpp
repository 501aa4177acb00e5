#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wmh/redgreen.hpp"
#include "wmh/sketch.hpp"

namespace wmh::cli {

struct InputOptions {
    int base = 0;
    std::optional<std::size_t> dim;
};

// "auto" or a positive real.
std::optional<double> parse_alpha(const std::string& text);

struct LayoutOptions {
    std::string data_path;
    std::string out_path;
    std::string alpha = "1";
    InputOptions input;
    bool low_mem = false;
    std::uint64_t max_cells = kDefaultMaxCells;
    bool json = false;
};
void cmd_layout(const LayoutOptions& opts, std::ostream& out);

struct SketchOptions {
    std::string data_path;
    std::string layout_path;   // required for redgreen
    std::string out_path;
    SchemeConfig config;
    unsigned threads = 1;
    bool json = false;
    InputOptions input;
};
void cmd_sketch(const SketchOptions& opts, std::ostream& out);

struct EstimateOptions {
    std::string sketch_path;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::string pairs_file;    // one "i j" or "i,j" per line
    std::string exact_path;    // optional ground-truth dataset
    InputOptions input;
    bool json = false;
};
void cmd_estimate(const EstimateOptions& opts, std::ostream& out);

struct BenchOptions {
    std::string data_path;
    std::vector<Scheme> schemes{Scheme::RedGreen, Scheme::Ioffe, Scheme::Reduction};
    std::uint32_t k = 500;
    std::size_t reps = 3;
    std::uint64_t seed = 1;
    std::string alpha = "auto";
    double delta = 1e-12;
    bool low_mem = false;
    InputOptions input;
    std::string json_path;     // optional machine-readable copy
};
void cmd_bench(const BenchOptions& opts, std::ostream& out);

struct StatsOptions {
    std::string sketch_path;   // hash statistics of a sketch file
    // error-curve mode, used when data_path is set
    std::string data_path;
    std::pair<std::size_t, std::size_t> pair{0, 1};
    std::size_t k_max = 50;
    std::size_t reps = 200;
    std::uint64_t seed = 1;
    std::string alpha = "auto";
    std::vector<Scheme> schemes{Scheme::RedGreen, Scheme::Ioffe, Scheme::Reduction};
    InputOptions input;
    bool json = false;
};
void cmd_stats(const StatsOptions& opts, std::ostream& out);

}  // namespace wmh::cli
