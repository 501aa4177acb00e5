#include "wmh/vectors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>

#include "wmh/error.hpp"

namespace wmh {

SparseVector::SparseVector(std::vector<Entry> entries, std::size_t dim) : dim_(dim) {
    for (const auto& e : entries) {
        if (!std::isfinite(e.weight)) {
            throw DomainError("weight at index " + std::to_string(e.index) + " is not finite");
        }
        if (e.weight < 0.0) {
            throw DomainError("negative weight at index " + std::to_string(e.index));
        }
        if (e.index >= dim) {
            throw DomainError("index " + std::to_string(e.index) + " out of range for dimension " +
                              std::to_string(dim));
        }
    }
    std::erase_if(entries, [](const Entry& e) { return e.weight == 0.0; });
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.index < b.index; });
    auto dup = std::adjacent_find(entries.begin(), entries.end(),
                                  [](const Entry& a, const Entry& b) { return a.index == b.index; });
    if (dup != entries.end()) {
        throw FormatError("duplicate index " + std::to_string(dup->index));
    }
    entries_ = std::move(entries);
}

double SparseVector::at(Index i) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                               [](const Entry& e, Index idx) { return e.index < idx; });
    return (it != entries_.end() && it->index == i) ? it->weight : 0.0;
}

SparseVector SparseVector::with_dim(std::size_t dim) const {
    if (!entries_.empty() && entries_.back().index >= dim) {
        throw DomainError("index " + std::to_string(entries_.back().index) +
                          " out of range for dimension " + std::to_string(dim));
    }
    SparseVector out = *this;
    out.dim_ = dim;
    return out;
}

double l1_norm(const SparseVector& x) {
    double sum = 0.0;
    for (const auto& e : x.entries()) sum += e.weight;
    return sum;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

}  // namespace

ParsedLine parse_sparse_line(std::string_view line, const ParseOptions& options, std::size_t line_no) {
    if (options.base != 0 && options.base != 1) {
        throw UsageError("index base must be 0 or 1");
    }
    ParsedLine out;
    std::vector<Entry> entries;
    std::size_t pos = 0;
    bool first = true;
    std::uint64_t max_index = 0;

    while (pos < line.size()) {
        while (pos < line.size() && is_space(line[pos])) ++pos;
        if (pos >= line.size()) break;
        std::size_t start = pos;
        while (pos < line.size() && !is_space(line[pos])) ++pos;
        std::string_view tok = line.substr(start, pos - start);
        const std::size_t col = start + 1;

        auto colon = tok.find(':');
        if (colon == std::string_view::npos) {
            if (!first) throw ParseError(line_no, col, "expected idx:val, got '" + std::string(tok) + "'");
            out.label = std::string(tok);
            first = false;
            continue;
        }
        first = false;

        std::string_view idx_text = tok.substr(0, colon);
        std::string_view val_text = tok.substr(colon + 1);
        std::uint64_t idx = 0;
        auto [iend, iec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), idx);
        if (iec != std::errc{} || iend != idx_text.data() + idx_text.size() || idx_text.empty()) {
            throw ParseError(line_no, col, "malformed index '" + std::string(idx_text) + "'");
        }
        double val = 0.0;
        auto [vend, vec] = std::from_chars(val_text.data(), val_text.data() + val_text.size(), val);
        if (vec != std::errc{} || vend != val_text.data() + val_text.size() || val_text.empty()) {
            throw ParseError(line_no, col + colon + 1, "malformed value '" + std::string(val_text) + "'");
        }
        if (std::isnan(val) || std::isinf(val)) {
            throw DomainError("line " + std::to_string(line_no) + ": non-finite weight at index " +
                              std::to_string(idx));
        }
        if (val < 0.0) {
            throw DomainError("line " + std::to_string(line_no) + ": negative weight at index " +
                              std::to_string(idx));
        }
        if (idx < static_cast<std::uint64_t>(options.base)) {
            throw ParseError(line_no, col, "index below base " + std::to_string(options.base));
        }
        idx -= options.base;
        if (idx > 0xFFFFFFFEu) throw ParseError(line_no, col, "index too large");
        max_index = std::max(max_index, idx);
        entries.push_back({static_cast<Index>(idx), val});
    }

    std::size_t dim = options.dim.value_or(entries.empty() ? 0 : max_index + 1);
    if (!entries.empty() && max_index >= dim) {
        throw DomainError("line " + std::to_string(line_no) + ": index " + std::to_string(max_index) +
                          " out of range for dimension " + std::to_string(dim));
    }
    try {
        out.vector = SparseVector(std::move(entries), dim);
    } catch (const FormatError& e) {
        throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
    return out;
}

std::string format_sparse_line(const SparseVector& x, std::string_view label, int base) {
    std::string out(label.empty() ? "0" : label);
    char buf[64];
    for (const auto& e : x.entries()) {
        out += ' ';
        out += std::to_string(static_cast<std::uint64_t>(e.index) + base);
        out += ':';
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, e.weight);
        out.append(buf, end);
    }
    return out;
}

Dataset::Dataset(std::vector<SparseVector> vectors, std::vector<std::string> labels,
                 std::optional<std::size_t> dim)
    : labels_(std::move(labels)) {
    std::size_t d = 0;
    for (const auto& v : vectors) d = std::max(d, v.dim());
    dim_ = dim.value_or(d);
    vectors_.reserve(vectors.size());
    for (auto& v : vectors) {
        vectors_.push_back(v.dim() == dim_ ? std::move(v) : v.with_dim(dim_));
    }
    labels_.resize(vectors_.size());
}

std::vector<double> dataset_maxima(const Dataset& ds) {
    if (ds.empty()) throw UsageError("dataset is empty");
    std::vector<double> maxima(ds.dim(), 0.0);
    for (const auto& v : ds.vectors()) {
        for (const auto& e : v.entries()) maxima[e.index] = std::max(maxima[e.index], e.weight);
    }
    return maxima;
}

Dataset read_dataset(std::istream& in, const ParseOptions& options) {
    std::vector<SparseVector> vectors;
    std::vector<std::string> labels;
    std::vector<std::size_t> lines;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        auto parsed = parse_sparse_line(line, options, line_no);
        labels.push_back(std::move(parsed.label));
        vectors.push_back(std::move(parsed.vector));
        lines.push_back(line_no);
    }
    Dataset ds(std::move(vectors), std::move(labels), options.dim);
    ds.set_source_lines(std::move(lines));
    return ds;
}

Dataset read_dataset_file(const std::string& path, const ParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_dataset(in, options);
}

}  // namespace wmh
