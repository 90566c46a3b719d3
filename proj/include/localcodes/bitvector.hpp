#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace localcodes {

/// Fixed-length binary vector packed into 64-bit words.
/// Bits past size() in the last word are always zero.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    /// Parses a string of '0'/'1' characters.
    static BitVector from_string(std::string_view bits);

    std::size_t size() const noexcept { return size_; }

    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
    void set(std::size_t i, bool value = true) {
        const auto mask = std::uint64_t{1} << (i % 64);
        if (value) words_[i / 64] |= mask;
        else words_[i / 64] &= ~mask;
    }
    void reset(std::size_t i) { set(i, false); }

    /// Number of ones (the codeword weight).
    std::size_t count() const noexcept {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    /// Positions of the ones, ascending.
    std::vector<std::size_t> ones() const;

    std::string to_string() const;

    const std::vector<std::uint64_t>& words() const noexcept { return words_; }

    friend bool operator==(const BitVector&, const BitVector&) = default;
    friend auto operator<=>(const BitVector&, const BitVector&) = default;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Number of positions in which a and b differ. Throws UsageError on a
/// length mismatch.
std::size_t hamming(const BitVector& a, const BitVector& b);

}  // namespace localcodes
