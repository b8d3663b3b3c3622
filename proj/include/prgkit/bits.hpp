#pragma once

#include <boost/container/small_vector.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "prgkit/common.hpp"

namespace prgkit {

// A finite bit string. Seeds are consumed least-significant-field first:
// the object that declares a seed layout reads fields in a fixed order
// through bit_reader, so two runs with equal bits always agree.
// Short seeds (the enumeration hot path) stay on the stack.
class seed {
public:
    seed() = default;
    explicit seed(std::size_t length_bits)
        : length_(length_bits), words_((length_bits + 63) / 64, 0) {}

    static seed from_words(std::size_t length_bits, std::vector<std::uint64_t> words) {
        seed s(length_bits);
        for (std::size_t i = 0; i < s.words_.size() && i < words.size(); ++i) s.words_[i] = words[i];
        s.mask_tail();
        return s;
    }

    // Low `length_bits` of a single integer; convenient for enumeration loops.
    static seed from_uint(std::size_t length_bits, std::uint64_t value) {
        require(length_bits <= 64, "seed::from_uint: length > 64");
        seed s(length_bits);
        if (!s.words_.empty()) s.words_[0] = value;
        s.mask_tail();
        return s;
    }

    static seed from_hex(std::size_t length_bits, const std::string& hex);

    std::size_t length() const { return length_; }

    bool bit(std::size_t i) const {
        return (words_[i / 64] >> (i % 64)) & 1u;
    }
    void set_bit(std::size_t i, bool v) {
        std::uint64_t m = std::uint64_t{1} << (i % 64);
        if (v) words_[i / 64] |= m; else words_[i / 64] &= ~m;
    }

    // Bits [pos, pos+count), count <= 64, packed little-endian.
    std::uint64_t get_bits(std::size_t pos, std::size_t count) const {
        require(count <= 64 && pos + count <= length_, "seed::get_bits out of range");
        if (count == 0) return 0;
        std::size_t w = pos / 64, off = pos % 64;
        std::uint64_t lo = words_[w] >> off;
        if (off + count > 64) lo |= words_[w + 1] << (64 - off);
        return count == 64 ? lo : (lo & ((std::uint64_t{1} << count) - 1));
    }
    void set_bits(std::size_t pos, std::size_t count, std::uint64_t value) {
        for (std::size_t i = 0; i < count; ++i) set_bit(pos + i, (value >> i) & 1u);
    }

    std::string to_hex() const;

    bool operator==(const seed& o) const { return length_ == o.length_ && words_ == o.words_; }

private:
    void mask_tail() {
        std::size_t r = length_ % 64;
        if (r != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << r) - 1;
    }

    std::size_t length_ = 0;
    boost::container::small_vector<std::uint64_t, 4> words_;
};

// Sequential field reader over a seed; throws if the layout overruns.
class bit_reader {
public:
    explicit bit_reader(const seed& s) : s_(&s) {}

    std::uint64_t take(std::size_t count) {
        std::uint64_t v = s_->get_bits(pos_, count);
        pos_ += count;
        return v;
    }
    seed take_seed(std::size_t count) {
        seed out(count);
        std::size_t done = 0;
        while (done < count) {
            std::size_t chunk = std::min<std::size_t>(64, count - done);
            out.set_bits(done, chunk, s_->get_bits(pos_ + done, chunk));
            done += chunk;
        }
        pos_ += count;
        return out;
    }
    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return s_->length() - pos_; }

private:
    const seed* s_;
    std::size_t pos_ = 0;
};

inline std::string seed::to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    std::size_t nibbles = (length_ + 3) / 4;
    for (std::size_t i = 0; i < nibbles; ++i) {
        std::size_t pos = (nibbles - 1 - i) * 4;
        std::size_t count = std::min<std::size_t>(4, length_ - pos);
        out.push_back(digits[get_bits(pos, count)]);
    }
    return out.empty() ? "0" : out;
}

inline seed seed::from_hex(std::size_t length_bits, const std::string& hex) {
    seed s(length_bits);
    std::size_t nibbles = (length_bits + 3) / 4;
    require(hex.size() <= nibbles, "seed::from_hex: hex string longer than declared length");
    for (std::size_t i = 0; i < hex.size(); ++i) {
        char c = hex[hex.size() - 1 - i];
        std::uint64_t v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = 10 + (c - 'a');
        else if (c >= 'A' && c <= 'F') v = 10 + (c - 'A');
        else throw format_error("seed::from_hex: bad hex digit");
        std::size_t pos = i * 4;
        std::size_t count = std::min<std::size_t>(4, length_bits - pos);
        require(count == 4 || (v >> count) == 0, "seed::from_hex: value exceeds declared length");
        s.set_bits(pos, count, v);
    }
    return s;
}

}  // namespace prgkit
