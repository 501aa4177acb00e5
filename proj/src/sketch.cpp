#include "wmh/sketch.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "json.hpp"

#include "binio.hpp"
#include "wmh/baselines.hpp"
#include "wmh/error.hpp"
#include "wmh/sketcher.hpp"

namespace wmh {

namespace {
constexpr std::uint32_t kSketchVersion = 1;
}

std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::RedGreen: return "redgreen";
        case Scheme::Ioffe: return "ioffe";
        case Scheme::Reduction: return "reduction";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    if (name == "redgreen") return Scheme::RedGreen;
    if (name == "ioffe") return Scheme::Ioffe;
    if (name == "reduction") return Scheme::Reduction;
    throw UsageError("unknown scheme '" + std::string(name) + "' (expected redgreen, ioffe or reduction)");
}

void SchemeConfig::validate() const {
    if (k == 0) throw UsageError("k must be at least 1");
    if (alpha && !(*alpha > 0.0 && std::isfinite(*alpha))) throw UsageError("alpha must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw UsageError("delta must lie in (0, 1)");
}

void write_sketches(std::ostream& out, const std::vector<Sketch>& sketches, Scheme scheme, std::uint32_t k,
                    std::uint64_t master_seed, std::uint64_t layout_id) {
    detail::ByteWriter w;
    w.put_magic("WMHS");
    w.put<std::uint32_t>(kSketchVersion);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(scheme));
    w.put<std::uint8_t>(0);
    w.put<std::uint16_t>(0);
    w.put<std::uint32_t>(k);
    w.put<std::uint64_t>(master_seed);
    w.put<std::uint64_t>(layout_id);
    w.put<std::uint64_t>(sketches.size());
    for (std::size_t n = 0; n < sketches.size(); ++n) {
        const auto& s = sketches[n];
        if (s.scheme != scheme || s.k() != k || s.master_seed != master_seed || s.layout_id != layout_id) {
            throw IncompatibleError("sketch " + std::to_string(n) + " does not match the file header");
        }
        for (std::size_t i = 0; i < k; ++i) {
            switch (scheme) {
                case Scheme::RedGreen:
                    if (s.values[i] > 0xFFFF) {
                        throw ResourceError("sketch " + std::to_string(n) + ": hash value " +
                                            std::to_string(s.values[i]) + " does not fit 16 bits");
                    }
                    w.put<std::uint16_t>(static_cast<std::uint16_t>(s.values[i]));
                    break;
                case Scheme::Ioffe:
                    w.put<std::uint64_t>(s.values[i]);
                    w.put<std::int64_t>(s.levels[i]);
                    break;
                case Scheme::Reduction:
                    w.put<std::uint64_t>(s.values[i]);
                    break;
            }
        }
    }
    const auto& bytes = w.bytes();
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed to write sketch file");
}

std::vector<Sketch> read_sketches(std::istream& in) {
    detail::StreamReader r(in, "sketch file");
    r.expect_magic("WMHS");
    if (auto v = r.get<std::uint32_t>(); v != kSketchVersion) {
        throw FormatError("sketch file: unsupported version " + std::to_string(v));
    }
    auto scheme_id = r.get<std::uint8_t>();
    r.get<std::uint8_t>();
    r.get<std::uint16_t>();
    if (scheme_id < 1 || scheme_id > 3) throw FormatError("sketch file: unknown scheme id");
    auto scheme = static_cast<Scheme>(scheme_id);
    auto k = r.get<std::uint32_t>();
    auto seed = r.get<std::uint64_t>();
    auto layout_id = r.get<std::uint64_t>();
    auto count = r.get<std::uint64_t>();

    std::vector<Sketch> out;
    for (std::uint64_t n = 0; n < count; ++n) {
        Sketch s{scheme, seed, layout_id, {}, {}};
        s.values.resize(k);
        if (scheme == Scheme::Ioffe) s.levels.resize(k);
        for (std::uint32_t i = 0; i < k; ++i) {
            switch (scheme) {
                case Scheme::RedGreen: s.values[i] = r.get<std::uint16_t>(); break;
                case Scheme::Ioffe:
                    s.values[i] = r.get<std::uint64_t>();
                    s.levels[i] = r.get<std::int64_t>();
                    break;
                case Scheme::Reduction: s.values[i] = r.get<std::uint64_t>(); break;
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

void write_sketches_json(std::ostream& out, const std::vector<Sketch>& sketches) {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& s : sketches) {
        nlohmann::json rec;
        rec["scheme"] = std::string(to_string(s.scheme));
        rec["master_seed"] = s.master_seed;
        rec["layout_id"] = s.layout_id;
        if (s.scheme == Scheme::Ioffe) {
            nlohmann::json pairs = nlohmann::json::array();
            for (std::size_t i = 0; i < s.k(); ++i) pairs.push_back({s.values[i], s.levels[i]});
            rec["values"] = std::move(pairs);
        } else {
            rec["values"] = s.values;
        }
        records.push_back(std::move(rec));
    }
    out << nlohmann::json{{"sketches", std::move(records)}}.dump() << '\n';
}

Sketcher::Sketcher(Scheme scheme, const RedGreenLayout* layout, double delta) : scheme_(scheme) {
    if (scheme == Scheme::RedGreen) {
        if (layout == nullptr) throw UsageError("the red-green scheme needs a layout");
        hasher_.emplace(*layout, delta);
    }
}

Sketch Sketcher::sketch(const SparseVector& x, std::uint32_t k, std::uint64_t master_seed) {
    switch (scheme_) {
        case Scheme::RedGreen: return hasher_->sketch(x, k, master_seed);
        case Scheme::Ioffe: return ioffe_sketch(x, k, master_seed);
        case Scheme::Reduction: return reduction_sketch(x, k, master_seed);
    }
    throw UsageError("unknown scheme");
}

}  // namespace wmh
