#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wmh {

enum class Scheme : std::uint8_t {
    RedGreen = 1,
    Ioffe = 2,
    Reduction = 3,
};

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name);

// Returned by the unweighted baseline for an empty reduced set. Real hashes
// are below 2^61, and the estimator never counts a sentinel as a match.
inline constexpr std::uint64_t kEmptySetHash = ~std::uint64_t{0};

// k hash values of one vector plus the metadata needed to compare it with
// another sketch. Ioffe slots are (k*, t*) pairs: `values` holds k* and
// `levels` holds t*; for the other schemes `levels` is empty.
struct Sketch {
    Scheme scheme = Scheme::RedGreen;
    std::uint64_t master_seed = 0;
    std::uint64_t layout_id = 0;
    std::vector<std::uint64_t> values;
    std::vector<std::int64_t> levels;

    std::size_t k() const { return values.size(); }

    bool slot_equal(const Sketch& other, std::size_t i) const {
        if (values[i] != other.values[i] || values[i] == kEmptySetHash) return false;
        return levels.empty() || levels[i] == other.levels[i];
    }

    friend bool operator==(const Sketch&, const Sketch&) = default;
};

struct SchemeConfig {
    Scheme scheme = Scheme::RedGreen;
    std::uint32_t k = 500;
    std::uint64_t master_seed = 1;
    std::optional<double> alpha;     // empty means "auto"
    double delta = 1e-12;            // iteration cap tail probability
    bool low_mem = false;

    // Throws UsageError when k == 0, alpha <= 0 or delta outside (0, 1).
    void validate() const;
};

// Binary sketch container: header (magic "WMHS", version, scheme, k, master
// seed, layout id, record count) then fixed-width little-endian records.
// Red-green values are 16-bit, Ioffe slots are two 64-bit integers, the
// unweighted baseline uses one 64-bit integer per slot.
void write_sketches(std::ostream& out, const std::vector<Sketch>& sketches, Scheme scheme, std::uint32_t k,
                    std::uint64_t master_seed, std::uint64_t layout_id);
std::vector<Sketch> read_sketches(std::istream& in);

void write_sketches_json(std::ostream& out, const std::vector<Sketch>& sketches);

}  // namespace wmh
