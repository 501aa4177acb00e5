#pragma once

#include <cstdint>
#include <vector>

#include "wmh/sketch.hpp"
#include "wmh/vectors.hpp"

namespace wmh {

// ---- Ioffe's consistent weighted sampling -------------------------------

struct IoffeHash {
    Index k_star = 0;
    std::int64_t t_star = 0;

    friend bool operator==(const IoffeHash&, const IoffeHash&) = default;
};

// One CWS sample in O(nnz). Every (slot, coordinate) pair draws
// r, c ~ Gamma(2,1) and beta ~ U(0,1) from its own keyed stream; the sample
// is the coordinate minimising a_j = c / (exp(r (t_j - beta)) exp(r)) with
// t_j = floor(ln x_j / r + beta). Throws UsageError for an empty vector.
IoffeHash ioffe_hash(const SparseVector& x, std::uint64_t slot, std::uint64_t master_seed);

// k slots; ln x_j is computed once per vector.
Sketch ioffe_sketch(const SparseVector& x, std::uint32_t k, std::uint64_t master_seed);

// ---- weighted-to-unweighted reduction + 2-universal minwise ---------------

// Element (level, coordinate) of a replicated weighted set.
struct SetElement {
    std::uint64_t level;
    Index coord;

    friend bool operator==(const SetElement&, const SetElement&) = default;
    friend auto operator<=>(const SetElement&, const SetElement&) = default;
};

struct UnweightedSet {
    std::vector<SetElement> elements;  // sorted, unique
    std::size_t dim = 0;
};

// Largest reduced set the baseline will materialise.
inline constexpr std::size_t kMaxReducedElements = std::size_t{1} << 28;

// Levels 1..floor(x_j) always; level floor(x_j)+1 with probability
// frac(x_j), decided by the stream keyed by (seed, j). Throws ResourceError
// when the set would exceed kMaxReducedElements or its keys 61 bits.
UnweightedSet reduce_to_unweighted(const SparseVector& x, std::uint64_t seed);

// 2^61 - 1
inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

// ((a key + b) mod p) with a, b drawn for (master_seed, slot).
struct UniversalHash {
    std::uint64_t a;
    std::uint64_t b;

    static UniversalHash for_slot(std::uint64_t master_seed, std::uint64_t slot);
    std::uint64_t operator()(std::uint64_t key) const;
};

// Injective key level * D + coord.
inline std::uint64_t element_key(const SetElement& e, std::size_t dim) { return e.level * dim + e.coord; }

// Minimum of the slot's 2-universal hash over S; kEmptySetHash for empty S.
std::uint64_t minwise_unweighted(const UnweightedSet& s, std::uint64_t slot, std::uint64_t master_seed);

// Reduction seeded once per vector from the master seed, then k minwise slots.
Sketch reduction_sketch(const SparseVector& x, std::uint32_t k, std::uint64_t master_seed);

// Identifier stored in reduction sketches: element keys depend on D.
std::uint64_t reduction_layout_id(std::size_t dim);

}  // namespace wmh
