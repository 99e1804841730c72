#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gt/errors.hpp"

namespace gt {

/// Fixed-length bit sequence. Bit 0 is the first character of the string
/// form, so "100" is the length-3 word with exactly bit 0 set.
class BitWord {
 public:
  BitWord() = default;
  explicit BitWord(std::size_t length) : size_(length), blocks_((length + 63) / 64, 0) {}

  /// Parses '0'/'1' characters; '|' separators are ignored.
  static BitWord from_string(std::string_view s) {
    std::string bits;
    bits.reserve(s.size());
    for (char c : s) {
      if (c == '|') continue;
      if (c != '0' && c != '1') throw DomainError("BitWord::from_string: invalid character");
      bits.push_back(c);
    }
    BitWord w(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i] == '1') w.set(i);
    return w;
  }

  std::size_t size() const { return size_; }

  bool test(std::size_t i) const { return (blocks_[i >> 6] >> (i & 63)) & 1u; }

  void set(std::size_t i, bool value = true) {
    if (i >= size_) throw DomainError("BitWord::set: index out of range");
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value)
      blocks_[i >> 6] |= mask;
    else
      blocks_[i >> 6] &= ~mask;
  }

  unsigned weight() const {
    unsigned n = 0;
    for (std::uint64_t b : blocks_) n += static_cast<unsigned>(std::popcount(b));
    return n;
  }

  bool none() const {
    for (std::uint64_t b : blocks_)
      if (b) return false;
    return true;
  }

  BitWord& operator|=(const BitWord& other) {
    if (other.size_ != size_) throw DomainError("BitWord: length mismatch in OR");
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] |= other.blocks_[i];
    return *this;
  }

  friend BitWord operator|(BitWord a, const BitWord& b) {
    a |= b;
    return a;
  }

  /// True when every 1-bit of `other` is also set here (other <= this).
  bool covers(const BitWord& other) const {
    if (other.size_ != size_) throw DomainError("BitWord: length mismatch in covers");
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      if (other.blocks_[i] & ~blocks_[i]) return false;
    return true;
  }

  BitWord slice(std::size_t pos, std::size_t len) const {
    if (pos + len > size_) throw DomainError("BitWord::slice: range out of bounds");
    BitWord out(len);
    for (std::size_t i = 0; i < len; ++i)
      if (test(pos + i)) out.set(i);
    return out;
  }

  bool operator==(const BitWord&) const = default;

  std::string to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
      if (test(i)) s[i] = '1';
    return s;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> blocks_;
};

}  // namespace gt
