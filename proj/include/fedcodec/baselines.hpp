#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fedcodec/codec.hpp"
#include "fedcodec/rng.hpp"

namespace fedcodec {

enum class Method : uint8_t {
  topk,
  qsgd,
  drive,
  tlc,
  none,
};

struct BaselineConfig {
  Method method = Method::none;
  double topk_fraction = 0.1;  // in (0, 1]
  uint32_t qsgd_levels = 16;   // s >= 1
  double tlc_sparsity = 1.0;   // s >= 1
  uint64_t seed = 0;           // rotation seed for drive
};

// Top-K sparsification: the ceil(fraction*d) largest-magnitude entries plus a
// d-bit position mask. Magnitude ties break toward the lower index.
struct TopkMessage {
  uint32_t d = 0;
  std::vector<uint32_t> indices;  // ascending
  std::vector<double> values;
};

TopkMessage topk_encode(std::span<const double> u, double fraction);
std::vector<double> topk_decode(const TopkMessage& m);
uint64_t topk_payload_bits(const TopkMessage& m);  // d + 32 * kept

// QSGD: transmit the l2 norm, then per coordinate a stochastically rounded
// level in [0, s]; signed levels reuse the main codec's run-length + gamma
// loop. Decode is norm * level / s with the sign restored; unbiased.
struct QsgdMessage {
  uint32_t d = 0;
  uint32_t levels = 1;  // s
  double norm = 0.0;
  std::vector<int64_t> signed_levels;
};

QsgdMessage qsgd_encode(std::span<const double> u, uint32_t levels, Rng& rng);
std::vector<double> qsgd_decode(const QsgdMessage& m);
uint64_t qsgd_payload_bits(const QsgdMessage& m, Code code = Code::gamma);

// DRIVE: one sign bit per rotated coordinate plus the distortion-minimizing
// scale S = ||R(u)||1 / d_pad. sign(0) is +1.
struct DriveMessage {
  uint32_t d = 0;  // original length; signs cover the padded length
  uint64_t seed = 0;
  double scale = 0.0;
  std::vector<int8_t> signs;  // +1 / -1, padded length
};

DriveMessage drive_encode(std::span<const double> u, uint64_t seed);
std::vector<double> drive_decode(const DriveMessage& m);
uint64_t drive_payload_bits(const DriveMessage& m);  // 32 + padded d

// 3LC-style three-value quantization: m = max|u|/s, stochastic trits in
// {-1, 0, 1} after clipping u/m to [-1, 1], decoded as m * trit.
struct TlcMessage {
  uint32_t d = 0;
  double scale = 0.0;  // m
  std::vector<int8_t> trits;
};

TlcMessage tlc_encode(std::span<const double> u, double sparsity, Rng& rng);
std::vector<double> tlc_decode(const TlcMessage& m);

// Five trits per byte, value = sum (t_j + 1) * 3^j.
std::vector<uint8_t> tlc_pack(std::span<const int8_t> trits);
std::vector<int8_t> tlc_unpack(std::span<const uint8_t> bytes, size_t d);

// Bits of the container payload as transmitted (32-bit scale + packed bytes).
uint64_t tlc_packed_payload_bits(const TlcMessage& m);
// Rate credited to 3LC in experiments: the trit stream recoded with the
// shared run-length + gamma coder, standing in for its dictionary coder.
uint64_t tlc_reported_payload_bits(const TlcMessage& m);

// Full-precision baseline: identity transport at 32 bits per element.
uint64_t none_payload_bits(size_t d);

// Container framing shared with the main codec; quantizer_id carries the
// method. Values and scales are stored as 32-bit floats.
EncodedUpdate to_container(const TopkMessage& m);
EncodedUpdate to_container(const QsgdMessage& m, Code code = Code::gamma);
EncodedUpdate to_container(const DriveMessage& m);
EncodedUpdate to_container(const TlcMessage& m);
EncodedUpdate none_container(std::span<const double> u);

// Decodes any container produced by this library, main codec included.
std::vector<double> decode_container(const EncodedUpdate& e);

const char* method_name(Method method);

}  // namespace fedcodec
