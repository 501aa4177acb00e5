#include "wmh/estimate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <string>

#include "json.hpp"
#include "wmh/error.hpp"
#include "wmh/rng.hpp"
#include "wmh/sketcher.hpp"

namespace wmh {

double exact_jaccard(const SparseVector& x, const SparseVector& y) {
    if (x.dim() != y.dim()) {
        throw UsageError("dimension mismatch: " + std::to_string(x.dim()) + " vs " + std::to_string(y.dim()));
    }
    auto a = x.entries();
    auto b = y.entries();
    double num = 0.0;
    double den = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].index == b[j].index) {
            num += std::min(a[i].weight, b[j].weight);
            den += std::max(a[i].weight, b[j].weight);
            ++i;
            ++j;
        } else if (a[i].index < b[j].index) {
            den += a[i++].weight;
        } else {
            den += b[j++].weight;
        }
    }
    for (; i < a.size(); ++i) den += a[i].weight;
    for (; j < b.size(); ++j) den += b[j].weight;
    if (den == 0.0) throw DomainError("Jaccard similarity of two all-zero vectors is undefined");
    return num / den;
}

EstimateReport estimate_from_sketches(const Sketch& a, const Sketch& b, std::optional<std::size_t> prefix) {
    if (a.scheme != b.scheme) throw IncompatibleError("sketches differ in scheme");
    if (a.master_seed != b.master_seed) throw IncompatibleError("sketches differ in master_seed");
    if (a.layout_id != b.layout_id) throw IncompatibleError("sketches differ in layout_id");
    if (a.k() != b.k()) throw IncompatibleError("sketches differ in k");
    std::size_t k = prefix.value_or(a.k());
    if (k == 0 || k > a.k()) throw UsageError("prefix must lie in [1, k]");

    std::size_t matches = 0;
    for (std::size_t i = 0; i < k; ++i) matches += a.slot_equal(b, i) ? 1 : 0;
    EstimateReport out;
    out.k = k;
    out.j_hat = static_cast<double>(matches) / static_cast<double>(k);
    out.std_err = std::sqrt(out.j_hat * (1.0 - out.j_hat) / static_cast<double>(k));
    out.scheme = a.scheme;
    return out;
}

std::vector<CurvePoint> error_curve(const SparseVector& x, const SparseVector& y, Sketcher& sketcher,
                                    std::size_t k_max, std::size_t reps, std::uint64_t base_seed) {
    if (k_max == 0) throw UsageError("k_max must be at least 1");
    if (reps == 0) throw UsageError("reps must be at least 1");
    const double truth = exact_jaccard(x, y);

    std::vector<double> sum(k_max, 0.0);
    std::vector<double> sum_sq(k_max, 0.0);
    for (std::size_t r = 0; r < reps; ++r) {
        auto seed = slot_seed(base_seed, r);
        auto a = sketcher.sketch(x, static_cast<std::uint32_t>(k_max), seed);
        auto b = sketcher.sketch(y, static_cast<std::uint32_t>(k_max), seed);
        std::size_t matches = 0;
        for (std::size_t k = 1; k <= k_max; ++k) {
            matches += a.slot_equal(b, k - 1) ? 1 : 0;
            double err = std::abs(static_cast<double>(matches) / static_cast<double>(k) - truth);
            sum[k - 1] += err;
            sum_sq[k - 1] += err * err;
        }
    }
    std::vector<CurvePoint> curve;
    curve.reserve(k_max);
    const auto n = static_cast<double>(reps);
    for (std::size_t k = 1; k <= k_max; ++k) {
        double mean = sum[k - 1] / n;
        double var = reps > 1 ? std::max(0.0, (sum_sq[k - 1] - n * mean * mean) / (n - 1.0)) : 0.0;
        curve.push_back({k, mean, std::sqrt(var / n)});
    }
    return curve;
}

namespace {

std::size_t curve_length(const CurveSet& c) {
    return std::max({c.redgreen.size(), c.ioffe.size(), c.reduction.size()});
}

}  // namespace

void write_curves_csv(std::ostream& out, const CurveSet& curves) {
    out << "k,mae_redgreen,mae_ioffe,mae_reduction\n";
    auto cell = [&](const std::vector<CurvePoint>& c, std::size_t i) {
        if (i < c.size()) out << c[i].mae;
    };
    for (std::size_t i = 0; i < curve_length(curves); ++i) {
        out << (i + 1) << ',';
        cell(curves.redgreen, i);
        out << ',';
        cell(curves.ioffe, i);
        out << ',';
        cell(curves.reduction, i);
        out << '\n';
    }
}

void write_curves_json(std::ostream& out, const CurveSet& curves) {
    auto to_json = [](const std::vector<CurvePoint>& c) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& p : c) arr.push_back({{"k", p.k}, {"mae", p.mae}, {"se", p.se}});
        return arr;
    };
    nlohmann::json j;
    if (!curves.redgreen.empty()) j["redgreen"] = to_json(curves.redgreen);
    if (!curves.ioffe.empty()) j["ioffe"] = to_json(curves.ioffe);
    if (!curves.reduction.empty()) j["reduction"] = to_json(curves.reduction);
    out << j.dump(2) << '\n';
}

HashStats hash_stats(std::span<const std::uint64_t> values) {
    if (values.empty()) throw UsageError("no hash values");
    HashStats out;
    double sum = 0.0;
    double sum_log = 0.0;
    for (auto v : values) {
        sum += static_cast<double>(v);
        sum_log += v > 0 ? std::log2(static_cast<double>(v)) : 0.0;
        out.max = std::max(out.max, v);
    }
    out.count = values.size();
    out.mean = sum / static_cast<double>(values.size());
    out.mean_log2 = sum_log / static_cast<double>(values.size());
    out.bits_needed = out.max == ~std::uint64_t{0} ? 64u : static_cast<unsigned>(std::bit_width(out.max));
    return out;
}

HashStats hash_stats(std::span<const Sketch> sketches) {
    if (sketches.empty()) throw UsageError("no sketches");
    std::vector<std::uint64_t> all;
    for (const auto& s : sketches) {
        if (s.scheme != sketches.front().scheme) throw UsageError("sketches mix schemes");
        all.insert(all.end(), s.values.begin(), s.values.end());
    }
    return hash_stats(all);
}

}  // namespace wmh
