#pragma once

// Little-endian fixed-width encoding shared by the layout and sketch files.

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wmh/error.hpp"

namespace wmh::detail {

class ByteWriter {
public:
    template <typename T>
    void put(T value) {
        using U = std::make_unsigned_t<T>;
        auto v = static_cast<U>(value);
        for (std::size_t i = 0; i < sizeof(T); ++i) bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
    }
    void put_f64(double v) { put(std::bit_cast<std::uint64_t>(v)); }
    void put_magic(const char (&m)[5]) { bytes_.insert(bytes_.end(), m, m + 4); }

    std::vector<unsigned char>& bytes() { return bytes_; }

private:
    std::vector<unsigned char> bytes_;
};

class StreamReader {
public:
    StreamReader(std::istream& in, std::string what) : in_(in), what_(std::move(what)) {}

    template <typename T>
    T get() {
        unsigned char buf[sizeof(T)];
        read(buf, sizeof(T));
        std::make_unsigned_t<T> v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::make_unsigned_t<T>>(buf[i]) << (8 * i);
        return static_cast<T>(v);
    }
    double get_f64() { return std::bit_cast<double>(get<std::uint64_t>()); }

    void expect_magic(const char (&m)[5]) {
        char buf[4];
        read(reinterpret_cast<unsigned char*>(buf), 4);
        if (std::string(buf, 4) != std::string(m, 4)) throw FormatError(what_ + ": bad magic");
    }

private:
    void read(unsigned char* dst, std::size_t n) {
        in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
        if (in_.gcount() != static_cast<std::streamsize>(n)) throw FormatError(what_ + ": truncated file");
    }

    std::istream& in_;
    std::string what_;
};

constexpr std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace wmh::detail
