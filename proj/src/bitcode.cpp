#include "fedcodec/bitcode.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

#include "fedcodec/errors.hpp"

namespace fedcodec {
namespace {

void check_code_range(uint64_t n) {
  if (n == 0 || n >= (uint64_t{1} << kMaxCodeBits))
    throw std::domain_error("elias code: n must be in [1, 2^62)");
}

}  // namespace

void BitString::push_back(bool bit) {
  if (size_ % 8 == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<uint8_t>(1u << (7 - size_ % 8));
  ++size_;
}

void BitString::append_bits(uint64_t value, unsigned count) {
  for (unsigned i = count; i-- > 0;) push_back((value >> i) & 1u);
}

void BitString::append(const BitString& other) {
  for (uint64_t i = 0; i < other.size_; ++i) push_back(other.bit(i));
}

bool BitString::bit(uint64_t index) const {
  if (index >= size_) throw std::out_of_range("BitString::bit");
  return (bytes_[index / 8] >> (7 - index % 8)) & 1u;
}

std::string BitString::to_string() const {
  std::string s;
  s.reserve(size_);
  for (uint64_t i = 0; i < size_; ++i) s.push_back(bit(i) ? '1' : '0');
  return s;
}

BitString BitString::from_string(std::string_view bits) {
  BitString out;
  for (char c : bits) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("BitString::from_string: not a bit");
    out.push_back(c == '1');
  }
  return out;
}

void BitString::serialize(std::vector<uint8_t>& out) const {
  for (unsigned i = 0; i < 8; ++i)
    out.push_back(static_cast<uint8_t>(size_ >> (8 * i)));
  out.insert(out.end(), bytes_.begin(), bytes_.end());
}

BitString BitString::deserialize(const std::vector<uint8_t>& data,
                                 size_t& offset) {
  if (offset > data.size() || data.size() - offset < 8)
    throw CorruptStreamError("bitstring: truncated length field", offset);
  uint64_t size = 0;
  for (unsigned i = 0; i < 8; ++i)
    size |= static_cast<uint64_t>(data[offset + i]) << (8 * i);
  offset += 8;
  uint64_t nbytes = (size + 7) / 8;
  if (nbytes > data.size() - offset)
    throw CorruptStreamError("bitstring: truncated payload", offset);
  BitString out;
  out.size_ = size;
  out.bytes_.assign(data.begin() + static_cast<ptrdiff_t>(offset),
                    data.begin() + static_cast<ptrdiff_t>(offset + nbytes));
  offset += nbytes;
  return out;
}

bool BitReader::read_bit() {
  if (cursor_ >= source_->size())
    throw CorruptStreamError("bit stream exhausted", cursor_);
  return source_->bit(cursor_++);
}

uint64_t BitReader::read_bits(unsigned count) {
  uint64_t value = 0;
  for (unsigned i = 0; i < count; ++i)
    value = (value << 1) | (read_bit() ? 1u : 0u);
  return value;
}

void gamma_encode(uint64_t n, BitString& out) {
  check_code_range(n);
  unsigned width = static_cast<unsigned>(std::bit_width(n));
  for (unsigned i = 1; i < width; ++i) out.push_back(false);
  out.append_bits(n, width);
}

BitString gamma_encode(uint64_t n) {
  BitString out;
  gamma_encode(n, out);
  return out;
}

uint64_t gamma_decode(BitReader& reader) {
  unsigned zeros = 0;
  while (!reader.read_bit()) {
    if (++zeros >= kMaxCodeBits)
      throw CorruptStreamError("gamma: zero run exceeds the code range",
                               reader.position());
  }
  return (uint64_t{1} << zeros) | reader.read_bits(zeros);
}

void delta_encode(uint64_t n, BitString& out) {
  check_code_range(n);
  unsigned width = static_cast<unsigned>(std::bit_width(n));
  gamma_encode(width, out);
  out.append_bits(n, width - 1);
}

BitString delta_encode(uint64_t n) {
  BitString out;
  delta_encode(n, out);
  return out;
}

uint64_t delta_decode(BitReader& reader) {
  uint64_t width = gamma_decode(reader);
  if (width > kMaxCodeBits)
    throw CorruptStreamError("delta: width exceeds the code range",
                             reader.position());
  unsigned low = static_cast<unsigned>(width - 1);
  return (uint64_t{1} << low) | reader.read_bits(low);
}

uint64_t gamma_length(uint64_t n) {
  check_code_range(n);
  return 2 * static_cast<uint64_t>(std::bit_width(n)) - 1;
}

uint64_t delta_length(uint64_t n) {
  check_code_range(n);
  uint64_t width = static_cast<uint64_t>(std::bit_width(n));
  return gamma_length(width) + width - 1;
}

}  // namespace fedcodec
