#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "wmh/sketch.hpp"
#include "wmh/vectors.hpp"

namespace wmh {

class Dataset;

// Default ceiling on the number of integer cells M (4 bytes of table each).
inline constexpr std::uint64_t kDefaultMaxCells = std::uint64_t{1} << 28;

// Partition of [0, M) into one integer-sized interval per retained
// coordinate. Coordinates whose dataset maximum is 0 are never green and are
// compacted out. Immutable after construction.
class RedGreenLayout {
public:
    static constexpr std::uint32_t kExcluded = std::numeric_limits<std::uint32_t>::max();

    // m_i = ceil(alpha * maxima[i]) for every positive maximum.
    // Throws UsageError when alpha <= 0 or every maximum is 0, and
    // ResourceError when M exceeds max_cells and the lookup table is wanted.
    static RedGreenLayout build(std::span<const double> maxima, double alpha, bool low_mem = false,
                                std::uint64_t max_cells = kDefaultMaxCells);

    // Sidecar file: "WMHL", version, D, M, alpha, then D bounds (0 = excluded)
    // and D + 1 prefix sums, all little-endian.
    void save(std::ostream& out) const;
    static RedGreenLayout load(std::istream& in, bool low_mem = false);
    void save_file(const std::string& path) const;
    static RedGreenLayout load_file(const std::string& path, bool low_mem = false);
    std::vector<unsigned char> serialize() const;

    std::size_t dim() const { return coord_to_slot_.size(); }
    std::size_t slots() const { return slot_coord_.size(); }
    double alpha() const { return alpha_; }
    std::uint64_t total() const { return total_; }  // M
    double scale() const { return static_cast<double>(total_); }
    bool low_mem() const { return int_to_comp_.empty(); }

    // 64-bit FNV-1a digest of the serialized layout.
    std::uint64_t id() const { return id_; }

    // Slot of coordinate i or kExcluded.
    std::uint32_t slot_of(Index coord) const { return coord_to_slot_[coord]; }
    Index coord_of(std::uint32_t slot) const { return slot_coord_[slot]; }
    std::uint64_t bound(std::uint32_t slot) const { return prefix_[slot + 1] - prefix_[slot]; }
    // Interval start M_{i-1}.
    std::uint64_t start(std::uint32_t slot) const { return prefix_[slot]; }
    std::span<const std::uint64_t> prefix() const { return prefix_; }
    // Slot owning integer cell t in [0, M). Requires !low_mem().
    std::uint32_t slot_of_cell(std::uint64_t t) const { return int_to_comp_[t]; }

    // Upper end of the green part of a slot for raw weight w. Every green
    // test goes through this so all variants agree bit for bit.
    double green_end(std::uint32_t slot, double w) const {
        return static_cast<double>(prefix_[slot]) + alpha_ * w;
    }

    // Throws MismatchError when x has a different dim, touches an excluded
    // coordinate, or alpha * x_i > m_i.
    void check_compatible(const SparseVector& x) const;

private:
    void finish(bool low_mem);

    double alpha_ = 1.0;
    std::uint64_t total_ = 0;
    std::vector<std::uint32_t> coord_to_slot_;
    std::vector<Index> slot_coord_;
    std::vector<std::uint64_t> prefix_;      // size slots() + 1, strictly increasing
    std::vector<std::uint32_t> int_to_comp_;  // size M, empty in low-memory mode
    std::uint64_t id_ = 0;
};

// Dense per-slot view of one vector's green region: green_end(slot) for
// slots the vector touches, -1 elsewhere. Loading and clearing cost O(nnz).
class GreenView {
public:
    explicit GreenView(const RedGreenLayout& layout);

    void load(const SparseVector& x);
    void clear();
    double end(std::uint32_t slot) const { return ends_[slot]; }
    std::span<const std::uint32_t> touched() const { return touched_; }
    double mass() const { return mass_; }

private:
    const RedGreenLayout* layout_;
    std::vector<double> ends_;
    std::vector<std::uint32_t> touched_;
    double mass_ = 0.0;
};

// O(1) membership of r in the green region, using the cell table. r exactly
// on a green/red boundary counts as green. Throws DomainError if r is outside
// [0, M), UsageError in low-memory mode.
bool is_green_o1(const RedGreenLayout& layout, const GreenView& view, double r);
bool is_green_o1(const RedGreenLayout& layout, const SparseVector& x, double r);

// Same verdict by binary search over the vector's sorted green intervals.
bool is_green_binsearch(const RedGreenLayout& layout, const SparseVector& x, double r);

double effective_sparsity(const RedGreenLayout& layout, const SparseVector& x);

// ceil(ln(delta) / ln(1 - s)): beyond this many draws the tail probability is
// below delta. 1 when s >= 1.
std::uint64_t max_iterations(double sparsity, double delta);

// Receives every draw of hash_one, in order.
class DrawObserver {
public:
    virtual ~DrawObserver() = default;
    virtual void on_draw(double r, bool green) = 0;
};

// Rejection-sampling hasher. Owns a GreenView scratch buffer, so one
// instance per thread; the layout is shared.
class RedGreenHasher {
public:
    explicit RedGreenHasher(const RedGreenLayout& layout, double delta = 1e-12);

    // Number of draws until the first green one, >= 1.
    std::uint64_t hash_one(const SparseVector& x, std::uint64_t seed, DrawObserver* observer = nullptr);

    Sketch sketch(const SparseVector& x, std::uint32_t k, std::uint64_t master_seed);

    const RedGreenLayout& layout() const { return *layout_; }

private:
    struct Prepared {
        double sparsity;
        std::uint64_t cap;
    };
    Prepared prepare(const SparseVector& x);
    std::uint64_t run(std::uint64_t seed, const Prepared& p, DrawObserver* observer);
    bool green(double r) const;

    const RedGreenLayout* layout_;
    double delta_;
    GreenView view_;
    // low-memory mode: sorted (start, green end) of the loaded vector
    std::vector<double> starts_;
    std::vector<double> ends_;
};

// Mean effective sparsity over the dataset for a scale factor alpha.
double mean_sparsity(const Dataset& ds, std::span<const double> maxima, double alpha);

// {2^j : j = -4..8}
std::vector<double> default_alpha_grid();

// Grid value maximizing mean_sparsity; ties go to the smaller alpha.
// Candidates whose layout would exceed max_cells are skipped.
double optimize_alpha(const Dataset& ds, std::span<const double> grid,
                      std::uint64_t max_cells = std::numeric_limits<std::uint64_t>::max());

}  // namespace wmh
