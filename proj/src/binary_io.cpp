#include "localcodes/binary_io.hpp"

#include <fstream>
#include <iterator>

namespace localcodes::io {

void ByteWriter::packed_bits(const BitVector& v) {
    const auto nbytes = (v.size() + 7) / 8;
    const auto& words = v.words();
    for (std::size_t b = 0; b < nbytes; ++b) bytes_.push_back(static_cast<std::uint8_t>(words[b / 8] >> (8 * (b % 8))));
}

void ByteReader::need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw DataError(source_ + ": truncated file");
}

std::uint64_t ByteReader::get(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
    return v;
}

void ByteReader::expect_magic(std::string_view tag) {
    need(tag.size());
    if (std::memcmp(bytes_.data() + pos_, tag.data(), tag.size()) != 0)
        throw DataError(source_ + ": not a " + std::string(tag) + " file");
    pos_ += tag.size();
}

std::string ByteReader::str() {
    const auto n = u32();
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
}

BitVector ByteReader::packed_bits(std::size_t size) {
    const auto nbytes = (size + 7) / 8;
    need(nbytes);
    BitVector v(size);
    for (std::size_t i = 0; i < size; ++i)
        if ((bytes_[pos_ + i / 8] >> (i % 8)) & 1U) v.set(i);
    // Padding bits in the final byte must be zero.
    if (size % 8 != 0 && (bytes_[pos_ + nbytes - 1] >> (size % 8)) != 0) throw DataError(source_ + ": nonzero padding bits");
    pos_ += nbytes;
    return v;
}

void ByteReader::expect_end() const {
    if (!at_end()) throw DataError(source_ + ": trailing bytes after payload");
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("write failed: " + path.string());
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

std::string read_text(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    return {bytes.begin(), bytes.end()};
}

}  // namespace localcodes::io
