#pragma once

#include <cstdint>
#include <optional>

#include "wmh/redgreen.hpp"
#include "wmh/sketch.hpp"
#include "wmh/vectors.hpp"

namespace wmh {

// Scheme-independent front end: sketch(x, k, seed) for any of the three
// schemes. Holds a RedGreenHasher for the red-green scheme, so it is not
// thread-safe; make one per worker.
class Sketcher {
public:
    // layout is required for Scheme::RedGreen and ignored otherwise.
    Sketcher(Scheme scheme, const RedGreenLayout* layout, double delta = 1e-12);

    Sketch sketch(const SparseVector& x, std::uint32_t k, std::uint64_t master_seed);
    Scheme scheme() const { return scheme_; }

private:
    Scheme scheme_;
    std::optional<RedGreenHasher> hasher_;
};

}  // namespace wmh
