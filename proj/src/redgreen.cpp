#include "wmh/redgreen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "binio.hpp"
#include "wmh/error.hpp"
#include "wmh/rng.hpp"

namespace wmh {

namespace {

constexpr std::uint32_t kLayoutVersion = 1;
// Chain states are ceil(r * 10^6) with r < M; keep them inside 64 bits and
// M itself exactly representable.
constexpr std::uint64_t kMaxTotal = std::uint64_t{1} << 44;

}  // namespace

RedGreenLayout RedGreenLayout::build(std::span<const double> maxima, double alpha, bool low_mem,
                                     std::uint64_t max_cells) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw UsageError("alpha must be a positive finite number");
    if (maxima.size() >= RedGreenLayout::kExcluded) throw ResourceError("dimension too large for 32-bit ids");

    RedGreenLayout layout;
    layout.alpha_ = alpha;
    layout.coord_to_slot_.assign(maxima.size(), kExcluded);
    layout.prefix_.push_back(0);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < maxima.size(); ++i) {
        double m = maxima[i];
        if (!std::isfinite(m) || m < 0.0) throw DomainError("invalid maximum at coordinate " + std::to_string(i));
        if (m == 0.0) continue;
        double cell = std::ceil(alpha * m);
        if (cell > static_cast<double>(kMaxTotal)) throw ResourceError("alpha too large: interval size overflows");
        auto bound = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(cell));
        total += bound;
        if (total > kMaxTotal) throw ResourceError("layout size M overflows; use a smaller alpha");
        layout.coord_to_slot_[i] = static_cast<std::uint32_t>(layout.slot_coord_.size());
        layout.slot_coord_.push_back(static_cast<Index>(i));
        layout.prefix_.push_back(total);
    }
    if (total == 0) throw UsageError("all-zero dataset: the layout would be empty");
    if (!low_mem && total > max_cells) {
        throw ResourceError("layout needs M = " + std::to_string(total) + " table cells (limit " +
                            std::to_string(max_cells) + "); use a smaller alpha or low-memory mode");
    }
    layout.total_ = total;
    layout.finish(low_mem);
    return layout;
}

void RedGreenLayout::finish(bool low_mem) {
    int_to_comp_.clear();
    if (!low_mem) {
        int_to_comp_.resize(total_);
        for (std::uint32_t s = 0; s < slots(); ++s) {
            std::fill(int_to_comp_.begin() + static_cast<std::ptrdiff_t>(prefix_[s]),
                      int_to_comp_.begin() + static_cast<std::ptrdiff_t>(prefix_[s + 1]), s);
        }
    }
    auto bytes = serialize();
    id_ = detail::fnv1a64(bytes);
}

std::vector<unsigned char> RedGreenLayout::serialize() const {
    detail::ByteWriter w;
    w.put_magic("WMHL");
    w.put<std::uint32_t>(kLayoutVersion);
    w.put<std::uint64_t>(dim());
    w.put<std::uint64_t>(total_);
    w.put_f64(alpha_);
    for (std::size_t i = 0; i < dim(); ++i) {
        auto s = coord_to_slot_[i];
        w.put<std::uint64_t>(s == kExcluded ? 0 : bound(s));
    }
    std::uint64_t running = 0;
    w.put<std::uint64_t>(running);
    for (std::size_t i = 0; i < dim(); ++i) {
        auto s = coord_to_slot_[i];
        if (s != kExcluded) running += bound(s);
        w.put<std::uint64_t>(running);
    }
    return std::move(w.bytes());
}

void RedGreenLayout::save(std::ostream& out) const {
    auto bytes = serialize();
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed to write layout");
}

RedGreenLayout RedGreenLayout::load(std::istream& in, bool low_mem) {
    detail::StreamReader r(in, "layout file");
    r.expect_magic("WMHL");
    if (auto v = r.get<std::uint32_t>(); v != kLayoutVersion) {
        throw FormatError("layout file: unsupported version " + std::to_string(v));
    }
    auto dim = r.get<std::uint64_t>();
    auto total = r.get<std::uint64_t>();
    double alpha = r.get_f64();
    if (dim >= kExcluded) throw FormatError("layout file: dimension too large");
    if (total == 0 || total > kMaxTotal) throw FormatError("layout file: invalid M");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw FormatError("layout file: invalid alpha");

    std::vector<std::uint64_t> bounds(dim);
    for (auto& b : bounds) b = r.get<std::uint64_t>();

    RedGreenLayout layout;
    layout.alpha_ = alpha;
    layout.total_ = total;
    layout.coord_to_slot_.assign(dim, kExcluded);
    layout.prefix_.push_back(0);
    if (r.get<std::uint64_t>() != 0) throw FormatError("layout file: prefix must start at 0");
    std::uint64_t running = 0;
    for (std::size_t i = 0; i < dim; ++i) {
        if (bounds[i] > kMaxTotal) throw FormatError("layout file: bound out of range");
        running += bounds[i];
        if (r.get<std::uint64_t>() != running) throw FormatError("layout file: prefix sums disagree with bounds");
        if (bounds[i] == 0) continue;
        layout.coord_to_slot_[i] = static_cast<std::uint32_t>(layout.slot_coord_.size());
        layout.slot_coord_.push_back(static_cast<Index>(i));
        layout.prefix_.push_back(running);
    }
    if (running != total) throw FormatError("layout file: M disagrees with bounds");
    layout.finish(low_mem);
    return layout;
}

void RedGreenLayout::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    save(out);
}

RedGreenLayout RedGreenLayout::load_file(const std::string& path, bool low_mem) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return load(in, low_mem);
}

void RedGreenLayout::check_compatible(const SparseVector& x) const {
    if (x.dim() != dim()) {
        throw MismatchError("vector dimension " + std::to_string(x.dim()) + " does not match layout dimension " +
                            std::to_string(dim()));
    }
    for (const auto& e : x.entries()) {
        auto s = coord_to_slot_[e.index];
        if (s == kExcluded) {
            throw MismatchError("coordinate " + std::to_string(e.index) + " is absent from the layout");
        }
        if (alpha_ * e.weight > static_cast<double>(bound(s))) {
            throw MismatchError("coordinate " + std::to_string(e.index) + ": scaled weight " +
                                std::to_string(alpha_ * e.weight) + " exceeds bound " + std::to_string(bound(s)));
        }
    }
}

GreenView::GreenView(const RedGreenLayout& layout) : layout_(&layout), ends_(layout.slots(), -1.0) {}

void GreenView::load(const SparseVector& x) {
    clear();
    layout_->check_compatible(x);
    touched_.reserve(x.nnz());
    for (const auto& e : x.entries()) {
        auto s = layout_->slot_of(e.index);
        ends_[s] = layout_->green_end(s, e.weight);
        touched_.push_back(s);
        mass_ += layout_->alpha() * e.weight;
    }
}

void GreenView::clear() {
    for (auto s : touched_) ends_[s] = -1.0;
    touched_.clear();
    mass_ = 0.0;
}

namespace {

void check_draw(const RedGreenLayout& layout, double r) {
    if (!(r >= 0.0 && r < layout.scale())) {
        throw DomainError("draw " + std::to_string(r) + " outside [0, " + std::to_string(layout.total()) + ")");
    }
}

inline bool green_by_table(const RedGreenLayout& layout, const GreenView& view, double r) {
    auto cell = static_cast<std::uint64_t>(r);
    if (r <= view.end(layout.slot_of_cell(cell))) return true;
    // An integer r is also the closed upper end of the previous cell.
    return cell > 0 && r == static_cast<double>(cell) && r <= view.end(layout.slot_of_cell(cell - 1));
}

}  // namespace

bool is_green_o1(const RedGreenLayout& layout, const GreenView& view, double r) {
    check_draw(layout, r);
    if (layout.low_mem()) throw UsageError("the O(1) test needs the cell table; layout is in low-memory mode");
    return green_by_table(layout, view, r);
}

bool is_green_o1(const RedGreenLayout& layout, const SparseVector& x, double r) {
    GreenView view(layout);
    view.load(x);
    return is_green_o1(layout, view, r);
}

bool is_green_binsearch(const RedGreenLayout& layout, const SparseVector& x, double r) {
    check_draw(layout, r);
    if (x.dim() != layout.dim()) throw MismatchError("vector dimension does not match layout");
    auto entries = x.entries();
    auto slot = [&](const Entry& e) {
        auto s = layout.slot_of(e.index);
        if (s == RedGreenLayout::kExcluded) {
            throw MismatchError("coordinate " + std::to_string(e.index) + " is absent from the layout");
        }
        return s;
    };
    // First entry whose interval starts after r; the candidate is the one before.
    auto it = std::upper_bound(entries.begin(), entries.end(), r, [&](double value, const Entry& e) {
        return value < static_cast<double>(layout.start(slot(e)));
    });
    if (it == entries.begin()) return false;
    --it;
    return r <= layout.green_end(slot(*it), it->weight);
}

double effective_sparsity(const RedGreenLayout& layout, const SparseVector& x) {
    double mass = 0.0;
    for (const auto& e : x.entries()) mass += layout.alpha() * e.weight;
    return mass / layout.scale();
}

std::uint64_t max_iterations(double sparsity, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw UsageError("delta must lie in (0, 1)");
    if (!(sparsity > 0.0)) throw UsageError("effective sparsity must be positive");
    if (sparsity >= 1.0) return 1;
    double n = std::ceil(std::log(delta) / std::log1p(-sparsity));
    if (!(n < 0x1.0p63)) return std::uint64_t{1} << 63;
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n));
}

RedGreenHasher::RedGreenHasher(const RedGreenLayout& layout, double delta)
    : layout_(&layout), delta_(delta), view_(layout) {
    if (!(delta > 0.0 && delta < 1.0)) throw UsageError("delta must lie in (0, 1)");
}

RedGreenHasher::Prepared RedGreenHasher::prepare(const SparseVector& x) {
    double mass = 0.0;
    if (layout_->low_mem()) {
        layout_->check_compatible(x);
        starts_.clear();
        ends_.clear();
        for (const auto& e : x.entries()) {
            auto s = layout_->slot_of(e.index);
            starts_.push_back(static_cast<double>(layout_->start(s)));
            ends_.push_back(layout_->green_end(s, e.weight));
            mass += layout_->alpha() * e.weight;
        }
    } else {
        view_.load(x);
        mass = view_.mass();
    }
    if (x.empty()) throw UsageError("cannot hash an empty vector");
    double s = mass / layout_->scale();
    return {s, max_iterations(s, delta_)};
}

bool RedGreenHasher::green(double r) const {
    if (!layout_->low_mem()) return green_by_table(*layout_, view_, r);
    auto it = std::upper_bound(starts_.begin(), starts_.end(), r);
    if (it == starts_.begin()) return false;
    return r <= ends_[static_cast<std::size_t>(it - starts_.begin()) - 1];
}

std::uint64_t RedGreenHasher::run(std::uint64_t seed, const Prepared& p, DrawObserver* observer) {
    ChainedRng rng(seed, layout_->scale());
    for (std::uint64_t count = 1;; ++count) {
        double r = rng.next_uniform();
        bool g = green(r);
        if (observer) observer->on_draw(r, g);
        if (g) return count;
        if (count >= p.cap) throw IterationCapError(p.sparsity, p.cap);
        rng = rng.reseed_from(r);
    }
}

std::uint64_t RedGreenHasher::hash_one(const SparseVector& x, std::uint64_t seed, DrawObserver* observer) {
    auto p = prepare(x);
    return run(seed, p, observer);
}

Sketch RedGreenHasher::sketch(const SparseVector& x, std::uint32_t k, std::uint64_t master_seed) {
    if (k == 0) throw UsageError("k must be at least 1");
    auto p = prepare(x);
    Sketch out{Scheme::RedGreen, master_seed, layout_->id(), {}, {}};
    out.values.resize(k);
    for (std::uint32_t i = 0; i < k; ++i) out.values[i] = run(slot_seed(master_seed, i), p, nullptr);
    return out;
}

double mean_sparsity(const Dataset& ds, std::span<const double> maxima, double alpha) {
    if (ds.empty()) throw UsageError("dataset is empty");
    double total = 0.0;
    for (double m : maxima) {
        if (m > 0.0) total += std::max(1.0, std::ceil(alpha * m));
    }
    if (total == 0.0) throw UsageError("all-zero dataset");
    double sum = 0.0;
    for (const auto& v : ds.vectors()) sum += alpha * l1_norm(v) / total;
    return sum / static_cast<double>(ds.size());
}

std::vector<double> default_alpha_grid() {
    std::vector<double> grid;
    for (int j = -4; j <= 8; ++j) grid.push_back(std::ldexp(1.0, j));
    return grid;
}

double optimize_alpha(const Dataset& ds, std::span<const double> grid, std::uint64_t max_cells) {
    if (grid.empty()) throw UsageError("alpha grid is empty");
    if (ds.empty()) throw UsageError("dataset is empty");
    std::vector<double> sorted(grid.begin(), grid.end());
    for (double a : sorted) {
        if (!(a > 0.0) || !std::isfinite(a)) throw UsageError("alpha candidates must be positive and finite");
    }
    std::sort(sorted.begin(), sorted.end());
    auto maxima = dataset_maxima(ds);

    double best_alpha = 0.0;
    double best = -1.0;
    for (double a : sorted) {
        double cells = 0.0;
        for (double m : maxima) {
            if (m > 0.0) cells += std::max(1.0, std::ceil(a * m));
        }
        if (cells > static_cast<double>(max_cells)) continue;
        double s = mean_sparsity(ds, maxima, a);
        // Relative slack so that exact ties (integer data) keep the smaller alpha.
        if (s > best * (1.0 + 1e-12)) {
            best = s;
            best_alpha = a;
        }
    }
    if (best < 0.0) throw ResourceError("every alpha candidate exceeds the table budget");
    return best_alpha;
}

}  // namespace wmh
