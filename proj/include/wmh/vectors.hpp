#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wmh {

using Index = std::uint32_t;

struct Entry {
    Index index;
    double weight;

    friend bool operator==(const Entry&, const Entry&) = default;
};

// Non-negative sparse vector of dimension dim(). Entries are sorted by index,
// unique, and carry strictly positive finite weights; explicit zeros are
// dropped on construction.
class SparseVector {
public:
    SparseVector() = default;

    // Accepts entries in any order. Throws DomainError on negative or
    // non-finite weights or an index >= dim, FormatError on duplicates.
    SparseVector(std::vector<Entry> entries, std::size_t dim);

    std::span<const Entry> entries() const { return entries_; }
    std::size_t dim() const { return dim_; }
    std::size_t nnz() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    // Weight at coordinate i, 0 when absent. O(log nnz).
    double at(Index i) const;

    // Same entries, different dimension (must still cover every index).
    SparseVector with_dim(std::size_t dim) const;

    friend bool operator==(const SparseVector&, const SparseVector&) = default;

private:
    std::vector<Entry> entries_;
    std::size_t dim_ = 0;
};

double l1_norm(const SparseVector& x);

struct ParseOptions {
    int base = 0;                       // index origin of the text format, 0 or 1
    std::optional<std::size_t> dim;     // declared D; inferred when empty
};

struct ParsedLine {
    std::string label;
    SparseVector vector;
};

// Parses `label idx:val idx:val ...`. The label is optional when the first
// token already is an `idx:val` pair. Without a declared dim the vector's dim
// is max index + 1. line_no is only used in error messages.
ParsedLine parse_sparse_line(std::string_view line, const ParseOptions& options = {},
                             std::size_t line_no = 1);

// Inverse of parse_sparse_line; weights use the shortest round-tripping
// decimal form.
std::string format_sparse_line(const SparseVector& x, std::string_view label = {}, int base = 0);

class Dataset {
public:
    // All vectors are re-dimensioned to a common D: the declared dim, or the
    // largest member dim when none is given.
    explicit Dataset(std::vector<SparseVector> vectors, std::vector<std::string> labels = {},
                     std::optional<std::size_t> dim = std::nullopt);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return vectors_.size(); }
    bool empty() const { return vectors_.empty(); }
    const SparseVector& operator[](std::size_t i) const { return vectors_[i]; }
    std::span<const SparseVector> vectors() const { return vectors_; }
    const std::vector<std::string>& labels() const { return labels_; }

    // 1-based source line of each vector when read from text, else its position.
    std::size_t source_line(std::size_t i) const { return i < lines_.size() ? lines_[i] : i + 1; }
    void set_source_lines(std::vector<std::size_t> lines) { lines_ = std::move(lines); }

private:
    std::vector<SparseVector> vectors_;
    std::vector<std::string> labels_;
    std::vector<std::size_t> lines_;
    std::size_t dim_ = 0;
};

// Coordinate-wise maxima over the dataset, length D, 0 where a coordinate is
// never present. Throws UsageError on an empty dataset.
std::vector<double> dataset_maxima(const Dataset& ds);

// Reads one vector per line; blank and `#` lines are skipped.
Dataset read_dataset(std::istream& in, const ParseOptions& options = {});
Dataset read_dataset_file(const std::string& path, const ParseOptions& options = {});

}  // namespace wmh
