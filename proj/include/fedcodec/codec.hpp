#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fedcodec/bitcode.hpp"
#include "fedcodec/quantizer.hpp"
#include "fedcodec/rng.hpp"
#include "fedcodec/update.hpp"

namespace fedcodec {

enum class Code : uint8_t {
  gamma = 0,
  delta = 1,
};

// quantizer_id values used in the container header. 0-2 match Quantizer;
// baseline methods get their own ids so one decoder can dispatch on them.
namespace scheme_id {
inline constexpr uint8_t round = 0;
inline constexpr uint8_t stochastic = 1;
inline constexpr uint8_t dithered = 2;
inline constexpr uint8_t topk = 16;
inline constexpr uint8_t qsgd = 17;
inline constexpr uint8_t drive = 18;
inline constexpr uint8_t tlc = 19;
inline constexpr uint8_t none = 20;
}  // namespace scheme_id

inline constexpr uint8_t kFormatVersion = 1;

// Fixed header: version u8, quantizer_id u8, code_id u8, d u32, step f32,
// dither_seed u64, all little-endian.
inline constexpr size_t kHeaderBytes = 19;
inline constexpr uint64_t kHeaderBits = 8 * kHeaderBytes;

struct EncodedUpdate {
  uint8_t format_version = kFormatVersion;
  uint8_t quantizer_id = scheme_id::stochastic;
  uint8_t code_id = 0;
  uint32_t d = 0;
  float step = 0.0f;
  uint64_t dither_seed = 0;  // zero when unused
  BitString payload;
};

struct RateReport {
  uint64_t payload_bits = 0;
  uint64_t header_bits = kHeaderBits;
  double bits_per_element = 0.0;  // (payload + header) / d
};

// Symbol layer shared by the main codec, QSGD and the 3LC recoder: runs of
// zeros become code(r+1); each non-zero becomes a sign bit (0 positive,
// 1 negative) followed by code(|q|). A run reaching the end of the vector is
// emitted and the stream stops there.
BitString encode_symbols(std::span<const int64_t> symbols, Code code);
void encode_symbols(std::span<const int64_t> symbols, Code code, BitString& out);

// Inverse of encode_symbols for a known symbol count. Throws
// CorruptStreamError if the stream ends early or a run overshoots d.
std::vector<int64_t> decode_symbols(BitReader& reader, uint64_t d, Code code);

// Client-side encoder: quantize, then entropy-code the symbols. The dither
// seed (when quantizer == dithered) is drawn from `rng` and recorded in the
// header.
EncodedUpdate encode_update(std::span<const double> u, double step, Rng& rng,
                            Code code = Code::gamma,
                            Quantizer quantizer = Quantizer::stochastic);

// Parses the payload back to exactly d symbols and dequantizes. Throws
// CorruptStreamError if the payload is exhausted early or bits remain after
// the d-th symbol.
std::vector<double> decode_update(const EncodedUpdate& e);

RateReport rate_of(const EncodedUpdate& e);

// Mean code bits per non-zero magnitude divided by the empirical entropy of
// the non-zero magnitudes. Returns +infinity for a single-valued (zero
// entropy) magnitude distribution; throws on an all-zero input.
double coding_overhead(const QuantizedUpdate& q, Code code);

// Container wire format: 19-byte header, then the serialized payload
// BitString (u64 bit count + padded bytes).
std::vector<uint8_t> serialize(const EncodedUpdate& e);
EncodedUpdate deserialize_update(const std::vector<uint8_t>& bytes);

const char* code_name(Code code);

}  // namespace fedcodec
