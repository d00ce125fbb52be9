#include "fedcodec/codec.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fedcodec/errors.hpp"

namespace fedcodec {
namespace {

uint64_t magnitude(int64_t q) {
  return q < 0 ? 0 - static_cast<uint64_t>(q) : static_cast<uint64_t>(q);
}

void encode_one(uint64_t n, Code code, BitString& out) {
  if (code == Code::gamma)
    gamma_encode(n, out);
  else
    delta_encode(n, out);
}

uint64_t decode_one(BitReader& reader, Code code) {
  return code == Code::gamma ? gamma_decode(reader) : delta_decode(reader);
}

}  // namespace

void encode_symbols(std::span<const int64_t> symbols, Code code,
                    BitString& out) {
  size_t d = symbols.size();
  size_t i = 0;
  while (i < d) {
    size_t r = 0;
    while (i + r < d && symbols[i + r] == 0) ++r;
    encode_one(r + 1, code, out);
    i += r;
    if (i >= d) break;  // trailing zeros: the run token ends the stream
    int64_t q = symbols[i];
    out.push_back(q < 0);  // 0 positive, 1 negative
    encode_one(magnitude(q), code, out);
    ++i;
  }
}

BitString encode_symbols(std::span<const int64_t> symbols, Code code) {
  BitString out;
  encode_symbols(symbols, code, out);
  return out;
}

std::vector<int64_t> decode_symbols(BitReader& reader, uint64_t d, Code code) {
  std::vector<int64_t> out;
  out.reserve(d);
  uint64_t i = 0;
  while (i < d) {
    uint64_t run = decode_one(reader, code) - 1;
    if (run > d - i)
      throw CorruptStreamError("codec: zero run overshoots the vector",
                               reader.position());
    out.insert(out.end(), run, 0);
    i += run;
    if (i >= d) break;
    bool negative = reader.read_bit();
    int64_t mag = static_cast<int64_t>(decode_one(reader, code));
    out.push_back(negative ? -mag : mag);
    ++i;
  }
  return out;
}

EncodedUpdate encode_update(std::span<const double> u, double step, Rng& rng,
                            Code code, Quantizer quantizer) {
  if (u.size() > std::numeric_limits<uint32_t>::max())
    throw std::invalid_argument("encode_update: vector too long for header");
  // Quantize with the 32-bit step that travels in the header, so the decoder
  // reconstructs exactly what the encoder dequantized.
  float fstep = static_cast<float>(step);
  uint64_t dither_seed =
      quantizer == Quantizer::dithered ? rng.next_u64() : 0;
  std::vector<int64_t> q =
      quantize(u, static_cast<double>(fstep), quantizer, rng, dither_seed);

  EncodedUpdate e;
  e.quantizer_id = static_cast<uint8_t>(quantizer);
  e.code_id = static_cast<uint8_t>(code);
  e.d = static_cast<uint32_t>(u.size());
  e.step = fstep;
  e.dither_seed = dither_seed;
  e.payload = encode_symbols(q, code);
  return e;
}

std::vector<double> decode_update(const EncodedUpdate& e) {
  if (e.format_version != kFormatVersion)
    throw CorruptStreamError("container: unsupported format version", 0);
  if (e.quantizer_id > static_cast<uint8_t>(Quantizer::dithered))
    throw CorruptStreamError("container: not a main-codec scheme", 1);
  if (e.code_id > static_cast<uint8_t>(Code::delta))
    throw CorruptStreamError("container: unknown code id", 2);
  if (e.d > 0 && (!(e.step > 0.0f) || !std::isfinite(e.step)))
    throw CorruptStreamError("container: invalid step", 7);

  BitReader reader(e.payload);
  std::vector<int64_t> symbols =
      decode_symbols(reader, e.d, static_cast<Code>(e.code_id));
  if (reader.position() != e.payload.size())
    throw CorruptStreamError("container: trailing bits after the last symbol",
                             reader.position());
  return dequantize_symbols(symbols, static_cast<double>(e.step),
                            static_cast<Quantizer>(e.quantizer_id),
                            e.dither_seed);
}

RateReport rate_of(const EncodedUpdate& e) {
  RateReport r;
  r.payload_bits = e.payload.size();
  r.header_bits = kHeaderBits;
  r.bits_per_element =
      e.d == 0 ? 0.0
               : static_cast<double>(r.payload_bits + r.header_bits) / e.d;
  return r;
}

double coding_overhead(const QuantizedUpdate& q, Code code) {
  std::map<uint64_t, uint64_t> histogram;
  uint64_t total_bits = 0;
  uint64_t nonzero = 0;
  for (int64_t s : q.symbols) {
    if (s == 0) continue;
    uint64_t mag = magnitude(s);
    ++histogram[mag];
    total_bits += code == Code::gamma ? gamma_length(mag) : delta_length(mag);
    ++nonzero;
  }
  if (nonzero == 0)
    throw std::invalid_argument("coding_overhead: all symbols are zero");
  double entropy = 0.0;
  for (const auto& [mag, count] : histogram) {
    double p = static_cast<double>(count) / static_cast<double>(nonzero);
    entropy -= p * std::log2(p);
  }
  if (entropy == 0.0) return std::numeric_limits<double>::infinity();
  double mean_bits = static_cast<double>(total_bits) / static_cast<double>(nonzero);
  return mean_bits / entropy;
}

std::vector<uint8_t> serialize(const EncodedUpdate& e) {
  std::vector<uint8_t> out;
  out.reserve(kHeaderBytes + 8 + e.payload.bytes().size());
  out.push_back(e.format_version);
  out.push_back(e.quantizer_id);
  out.push_back(e.code_id);
  for (unsigned i = 0; i < 4; ++i)
    out.push_back(static_cast<uint8_t>(e.d >> (8 * i)));
  uint32_t step_bits = std::bit_cast<uint32_t>(e.step);
  for (unsigned i = 0; i < 4; ++i)
    out.push_back(static_cast<uint8_t>(step_bits >> (8 * i)));
  for (unsigned i = 0; i < 8; ++i)
    out.push_back(static_cast<uint8_t>(e.dither_seed >> (8 * i)));
  e.payload.serialize(out);
  return out;
}

EncodedUpdate deserialize_update(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < kHeaderBytes)
    throw CorruptStreamError("container: truncated header", bytes.size());
  EncodedUpdate e;
  e.format_version = bytes[0];
  if (e.format_version != kFormatVersion)
    throw CorruptStreamError("container: unsupported format version", 0);
  e.quantizer_id = bytes[1];
  e.code_id = bytes[2];
  uint32_t d = 0;
  for (unsigned i = 0; i < 4; ++i)
    d |= static_cast<uint32_t>(bytes[3 + i]) << (8 * i);
  e.d = d;
  uint32_t step_bits = 0;
  for (unsigned i = 0; i < 4; ++i)
    step_bits |= static_cast<uint32_t>(bytes[7 + i]) << (8 * i);
  e.step = std::bit_cast<float>(step_bits);
  uint64_t seed = 0;
  for (unsigned i = 0; i < 8; ++i)
    seed |= static_cast<uint64_t>(bytes[11 + i]) << (8 * i);
  e.dither_seed = seed;
  size_t offset = kHeaderBytes;
  e.payload = BitString::deserialize(bytes, offset);
  if (offset != bytes.size())
    throw CorruptStreamError("container: trailing bytes", offset);
  return e;
}

const char* code_name(Code code) {
  return code == Code::gamma ? "gamma" : "delta";
}

}  // namespace fedcodec
