#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "wmh/sketch.hpp"
#include "wmh/vectors.hpp"

namespace wmh {

class Sketcher;

// Generalized Jaccard sum(min) / sum(max) by a linear merge.
// Throws UsageError on a dim mismatch and DomainError when both are empty.
double exact_jaccard(const SparseVector& x, const SparseVector& y);

struct EstimateReport {
    double j_hat = 0.0;
    std::size_t k = 0;
    double std_err = 0.0;  // sqrt(j_hat (1 - j_hat) / k)
    Scheme scheme = Scheme::RedGreen;
};

// Fraction of agreeing slots over the first `prefix` slots (all when empty).
// Throws IncompatibleError naming the first mismatching field.
EstimateReport estimate_from_sketches(const Sketch& a, const Sketch& b,
                                      std::optional<std::size_t> prefix = std::nullopt);

struct CurvePoint {
    std::size_t k;
    double mae;     // mean over repetitions of |J_hat_k - J|
    double se;      // standard error of that mean
};

// Mean absolute estimation error for k = 1..k_max. Repetition r uses master
// seed slot_seed(base_seed, r) and one k_max-slot sketch per vector; the
// estimate at k reads the first k slots.
std::vector<CurvePoint> error_curve(const SparseVector& x, const SparseVector& y, Sketcher& sketcher,
                                    std::size_t k_max, std::size_t reps, std::uint64_t base_seed = 1);

// Curves per scheme, written as `k,mae_redgreen,mae_ioffe,mae_reduction`.
// Missing curves leave their column empty.
struct CurveSet {
    std::vector<CurvePoint> redgreen;
    std::vector<CurvePoint> ioffe;
    std::vector<CurvePoint> reduction;
};
void write_curves_csv(std::ostream& out, const CurveSet& curves);
void write_curves_json(std::ostream& out, const CurveSet& curves);

struct HashStats {
    double mean = 0.0;
    std::uint64_t max = 0;
    unsigned bits_needed = 0;   // ceil(log2(max + 1))
    double mean_log2 = 0.0;     // mean of log2(h)
    std::size_t count = 0;
};

// Over all slot values of red-green sketches. Throws UsageError on an empty
// list or mixed schemes.
HashStats hash_stats(std::span<const Sketch> sketches);
HashStats hash_stats(std::span<const std::uint64_t> values);

}  // namespace wmh
