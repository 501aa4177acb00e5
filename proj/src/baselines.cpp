#include "wmh/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wmh/error.hpp"
#include "wmh/rng.hpp"

namespace wmh {

namespace {

constexpr std::uint64_t kReductionTag = 0x5245445543450001ull;
constexpr std::uint64_t kUniversalTag = 0x554E495645520002ull;

struct IoffeCandidate {
    double log_a;
    Index coord;
    std::int64_t t;
};

inline IoffeCandidate ioffe_candidate(Index coord, double log_w, std::uint64_t slot, std::uint64_t master_seed) {
    KeyedStream stream(stream_key(master_seed, slot, coord));
    double r = stream.gamma21();
    double c = stream.gamma21();
    double beta = stream.uniform_open();
    double t = std::floor(log_w / r + beta);
    // ln y = r (t - beta), ln z = ln y + r, ln a = ln c - ln z
    double log_a = std::log(c) - (r * (t - beta) + r);
    return {log_a, coord, static_cast<std::int64_t>(t)};
}

}  // namespace

IoffeHash ioffe_hash(const SparseVector& x, std::uint64_t slot, std::uint64_t master_seed) {
    if (x.empty()) throw UsageError("cannot hash an empty vector");
    IoffeCandidate best{std::numeric_limits<double>::infinity(), 0, 0};
    for (const auto& e : x.entries()) {
        auto cand = ioffe_candidate(e.index, std::log(e.weight), slot, master_seed);
        if (cand.log_a < best.log_a) best = cand;
    }
    return {best.coord, best.t};
}

Sketch ioffe_sketch(const SparseVector& x, std::uint32_t k, std::uint64_t master_seed) {
    if (k == 0) throw UsageError("k must be at least 1");
    if (x.empty()) throw UsageError("cannot hash an empty vector");
    std::vector<double> logs;
    logs.reserve(x.nnz());
    for (const auto& e : x.entries()) logs.push_back(std::log(e.weight));

    Sketch out{Scheme::Ioffe, master_seed, 0, {}, {}};
    out.values.resize(k);
    out.levels.resize(k);
    auto entries = x.entries();
    for (std::uint32_t i = 0; i < k; ++i) {
        IoffeCandidate best{std::numeric_limits<double>::infinity(), 0, 0};
        for (std::size_t j = 0; j < entries.size(); ++j) {
            auto cand = ioffe_candidate(entries[j].index, logs[j], i, master_seed);
            if (cand.log_a < best.log_a) best = cand;
        }
        out.values[i] = best.coord;
        out.levels[i] = best.t;
    }
    return out;
}

UnweightedSet reduce_to_unweighted(const SparseVector& x, std::uint64_t seed) {
    UnweightedSet out;
    out.dim = x.dim();
    double total = 0.0;
    for (const auto& e : x.entries()) total += std::floor(e.weight) + 1.0;
    if (total > static_cast<double>(kMaxReducedElements)) {
        throw ResourceError("reduced set would hold about " + std::to_string(total) + " elements");
    }
    // Largest possible key must stay below the 61-bit modulus.
    for (const auto& e : x.entries()) {
        double top = (std::floor(e.weight) + 1.0) * static_cast<double>(x.dim()) + e.index;
        if (top >= static_cast<double>(kMersenne61)) throw ResourceError("element keys exceed 61 bits");
    }
    out.elements.reserve(static_cast<std::size_t>(total));
    for (const auto& e : x.entries()) {
        auto whole = static_cast<std::uint64_t>(std::floor(e.weight));
        for (std::uint64_t level = 1; level <= whole; ++level) out.elements.push_back({level, e.index});
        KeyedStream stream(mix64(seed, e.index));
        if (stream.uniform_open() <= e.weight - static_cast<double>(whole)) {
            out.elements.push_back({whole + 1, e.index});
        }
    }
    std::sort(out.elements.begin(), out.elements.end());
    return out;
}

UniversalHash UniversalHash::for_slot(std::uint64_t master_seed, std::uint64_t slot) {
    KeyedStream stream(stream_key(master_seed, slot, kUniversalTag));
    std::uint64_t a = 1 + stream.next_u64() % (kMersenne61 - 1);
    std::uint64_t b = stream.next_u64() % kMersenne61;
    return {a, b};
}

std::uint64_t UniversalHash::operator()(std::uint64_t key) const {
    unsigned __int128 v = static_cast<unsigned __int128>(a) * (key % kMersenne61) + b;
    // fold twice: v < 2^122 + 2^61
    std::uint64_t lo = static_cast<std::uint64_t>(v & kMersenne61);
    std::uint64_t hi = static_cast<std::uint64_t>(v >> 61);
    std::uint64_t s = (hi & kMersenne61) + (hi >> 61) + lo;
    s = (s & kMersenne61) + (s >> 61);
    return s >= kMersenne61 ? s - kMersenne61 : s;
}

std::uint64_t minwise_unweighted(const UnweightedSet& s, std::uint64_t slot, std::uint64_t master_seed) {
    if (s.elements.empty()) return kEmptySetHash;
    auto h = UniversalHash::for_slot(master_seed, slot);
    std::uint64_t best = kEmptySetHash;
    for (const auto& e : s.elements) best = std::min(best, h(element_key(e, s.dim)));
    return best;
}

Sketch reduction_sketch(const SparseVector& x, std::uint32_t k, std::uint64_t master_seed) {
    if (k == 0) throw UsageError("k must be at least 1");
    auto set = reduce_to_unweighted(x, mix64(master_seed, kReductionTag));
    Sketch out{Scheme::Reduction, master_seed, reduction_layout_id(x.dim()), {}, {}};
    out.values.resize(k);
    for (std::uint32_t i = 0; i < k; ++i) out.values[i] = minwise_unweighted(set, i, master_seed);
    return out;
}

std::uint64_t reduction_layout_id(std::size_t dim) { return mix64(kReductionTag, dim); }

}  // namespace wmh
