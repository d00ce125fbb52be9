#include "fedcodec/baselines.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fedcodec/errors.hpp"
#include "fedcodec/transforms.hpp"

namespace fedcodec {
namespace {

void append_f32(float v, BitString& out) {
  out.append_bits(std::bit_cast<uint32_t>(v), 32);
}

float read_f32(BitReader& reader) {
  return std::bit_cast<float>(static_cast<uint32_t>(reader.read_bits(32)));
}

EncodedUpdate container_shell(uint8_t quantizer_id, uint32_t d, float step,
                              uint64_t seed, Code code = Code::gamma) {
  EncodedUpdate e;
  e.quantizer_id = quantizer_id;
  e.code_id = static_cast<uint8_t>(code);
  e.d = d;
  e.step = step;
  e.dither_seed = seed;
  return e;
}

void check_consumed(const BitReader& reader, const BitString& payload) {
  if (reader.position() != payload.size())
    throw CorruptStreamError("container: trailing bits after the last symbol",
                             reader.position());
}

}  // namespace

TopkMessage topk_encode(std::span<const double> u, double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::invalid_argument("topk: fraction must be in (0, 1]");
  TopkMessage m;
  m.d = static_cast<uint32_t>(u.size());
  size_t k = static_cast<size_t>(
      std::ceil(fraction * static_cast<double>(u.size())));
  k = std::min(k, u.size());
  if (k == 0) return m;

  std::vector<uint32_t> order(u.size());
  std::iota(order.begin(), order.end(), 0u);
  // Largest magnitude first; ties broken by lower index.
  auto better = [&](uint32_t a, uint32_t b) {
    double ma = std::abs(u[a]);
    double mb = std::abs(u[b]);
    return ma != mb ? ma > mb : a < b;
  };
  std::nth_element(order.begin(), order.begin() + (k - 1), order.end(), better);
  order.resize(k);
  std::sort(order.begin(), order.end());

  m.indices = std::move(order);
  m.values.reserve(k);
  for (uint32_t i : m.indices) m.values.push_back(u[i]);
  return m;
}

std::vector<double> topk_decode(const TopkMessage& m) {
  std::vector<double> u(m.d, 0.0);
  for (size_t j = 0; j < m.indices.size(); ++j) u[m.indices[j]] = m.values[j];
  return u;
}

uint64_t topk_payload_bits(const TopkMessage& m) {
  return m.d + 32 * static_cast<uint64_t>(m.values.size());
}

QsgdMessage qsgd_encode(std::span<const double> u, uint32_t levels, Rng& rng) {
  if (levels < 1) throw std::invalid_argument("qsgd: levels must be >= 1");
  QsgdMessage m;
  m.d = static_cast<uint32_t>(u.size());
  m.levels = levels;
  double sq = 0.0;
  for (double x : u) sq += x * x;
  m.norm = std::sqrt(sq);
  m.signed_levels.assign(u.size(), 0);
  if (m.norm == 0.0) return m;
  for (size_t i = 0; i < u.size(); ++i) {
    double t = std::abs(u[i]) / m.norm * levels;  // in [0, s]
    double lo = std::floor(t);
    int64_t level =
        static_cast<int64_t>(lo) + (rng.next_unit() < (t - lo) ? 1 : 0);
    m.signed_levels[i] = u[i] < 0 ? -level : level;
  }
  return m;
}

std::vector<double> qsgd_decode(const QsgdMessage& m) {
  std::vector<double> u(m.d, 0.0);
  for (size_t i = 0; i < u.size(); ++i)
    u[i] = m.norm * static_cast<double>(m.signed_levels[i]) /
           static_cast<double>(m.levels);
  return u;
}

uint64_t qsgd_payload_bits(const QsgdMessage& m, Code code) {
  if (m.norm == 0.0) return 32;  // norm alone; the level stream is empty
  return 32 + encode_symbols(m.signed_levels, code).size();
}

DriveMessage drive_encode(std::span<const double> u, uint64_t seed) {
  std::vector<double> y = randomized_hadamard(u, seed);
  DriveMessage m;
  m.d = static_cast<uint32_t>(u.size());
  m.seed = seed;
  double l1 = 0.0;
  m.signs.reserve(y.size());
  for (double v : y) {
    l1 += std::abs(v);
    m.signs.push_back(v < 0.0 ? -1 : 1);  // sign(0) = +1
  }
  m.scale = l1 / static_cast<double>(y.size());
  return m;
}

std::vector<double> drive_decode(const DriveMessage& m) {
  std::vector<double> y(m.signs.size());
  for (size_t i = 0; i < y.size(); ++i)
    y[i] = m.scale * static_cast<double>(m.signs[i]);
  return inverse_hadamard(y, m.seed, m.d);
}

uint64_t drive_payload_bits(const DriveMessage& m) {
  return 32 + static_cast<uint64_t>(m.signs.size());
}

TlcMessage tlc_encode(std::span<const double> u, double sparsity, Rng& rng) {
  if (!(sparsity >= 1.0))
    throw std::invalid_argument("tlc: sparsity must be >= 1");
  TlcMessage m;
  m.d = static_cast<uint32_t>(u.size());
  double peak = 0.0;
  for (double x : u) peak = std::max(peak, std::abs(x));
  m.scale = peak / sparsity;
  m.trits.assign(u.size(), 0);
  if (m.scale == 0.0) return m;
  for (size_t i = 0; i < u.size(); ++i) {
    double t = std::clamp(u[i] / m.scale, -1.0, 1.0);
    double lo = std::floor(t);
    m.trits[i] = static_cast<int8_t>(
        static_cast<int>(lo) + (rng.next_unit() < (t - lo) ? 1 : 0));
  }
  return m;
}

std::vector<double> tlc_decode(const TlcMessage& m) {
  std::vector<double> u(m.d, 0.0);
  for (size_t i = 0; i < u.size(); ++i)
    u[i] = m.scale * static_cast<double>(m.trits[i]);
  return u;
}

std::vector<uint8_t> tlc_pack(std::span<const int8_t> trits) {
  std::vector<uint8_t> bytes((trits.size() + 4) / 5, 0);
  for (size_t i = 0; i < trits.size(); ++i) {
    if (trits[i] < -1 || trits[i] > 1)
      throw std::invalid_argument("tlc_pack: not a trit");
    unsigned digit = static_cast<unsigned>(trits[i] + 1);
    unsigned pow3[5] = {1, 3, 9, 27, 81};
    bytes[i / 5] = static_cast<uint8_t>(bytes[i / 5] + digit * pow3[i % 5]);
  }
  return bytes;
}

std::vector<int8_t> tlc_unpack(std::span<const uint8_t> bytes, size_t d) {
  if (bytes.size() != (d + 4) / 5)
    throw CorruptStreamError("tlc: packed length does not match d", 0);
  std::vector<int8_t> trits(d);
  for (size_t i = 0; i < d; ++i) {
    unsigned pow3[5] = {1, 3, 9, 27, 81};
    unsigned digit = (bytes[i / 5] / pow3[i % 5]) % 3;
    trits[i] = static_cast<int8_t>(static_cast<int>(digit) - 1);
  }
  return trits;
}

uint64_t tlc_packed_payload_bits(const TlcMessage& m) {
  return 32 + 8 * ((static_cast<uint64_t>(m.d) + 4) / 5);
}

uint64_t tlc_reported_payload_bits(const TlcMessage& m) {
  std::vector<int64_t> symbols(m.trits.begin(), m.trits.end());
  return 32 + encode_symbols(symbols, Code::gamma).size();
}

uint64_t none_payload_bits(size_t d) { return 32 * static_cast<uint64_t>(d); }

EncodedUpdate to_container(const TopkMessage& m) {
  EncodedUpdate e = container_shell(scheme_id::topk, m.d, 0.0f, 0);
  std::vector<bool> mask(m.d, false);
  for (uint32_t i : m.indices) mask[i] = true;
  for (uint32_t i = 0; i < m.d; ++i) e.payload.push_back(mask[i]);
  for (double v : m.values) append_f32(static_cast<float>(v), e.payload);
  return e;
}

EncodedUpdate to_container(const QsgdMessage& m, Code code) {
  EncodedUpdate e = container_shell(scheme_id::qsgd, m.d,
                                    static_cast<float>(m.norm), m.levels, code);
  if (m.norm != 0.0) encode_symbols(m.signed_levels, code, e.payload);
  return e;
}

EncodedUpdate to_container(const DriveMessage& m) {
  EncodedUpdate e = container_shell(scheme_id::drive, m.d,
                                    static_cast<float>(m.scale), m.seed);
  for (int8_t s : m.signs) e.payload.push_back(s < 0);
  return e;
}

EncodedUpdate to_container(const TlcMessage& m) {
  EncodedUpdate e = container_shell(scheme_id::tlc, m.d,
                                    static_cast<float>(m.scale), 0);
  for (uint8_t b : tlc_pack(m.trits)) e.payload.append_bits(b, 8);
  return e;
}

EncodedUpdate none_container(std::span<const double> u) {
  EncodedUpdate e =
      container_shell(scheme_id::none, static_cast<uint32_t>(u.size()), 1.0f, 0);
  for (double v : u) append_f32(static_cast<float>(v), e.payload);
  return e;
}

std::vector<double> decode_container(const EncodedUpdate& e) {
  if (e.quantizer_id <= static_cast<uint8_t>(Quantizer::dithered))
    return decode_update(e);

  BitReader reader(e.payload);
  switch (e.quantizer_id) {
    case scheme_id::topk: {
      std::vector<uint32_t> indices;
      for (uint32_t i = 0; i < e.d; ++i)
        if (reader.read_bit()) indices.push_back(i);
      TopkMessage m;
      m.d = e.d;
      m.indices = std::move(indices);
      m.values.reserve(m.indices.size());
      for (size_t j = 0; j < m.indices.size(); ++j)
        m.values.push_back(read_f32(reader));
      check_consumed(reader, e.payload);
      return topk_decode(m);
    }
    case scheme_id::qsgd: {
      if (e.code_id > static_cast<uint8_t>(Code::delta))
        throw CorruptStreamError("container: unknown code id", 2);
      if (e.dither_seed == 0)
        throw CorruptStreamError("container: qsgd levels missing", 11);
      QsgdMessage m;
      m.d = e.d;
      m.levels = static_cast<uint32_t>(e.dither_seed);
      m.norm = static_cast<double>(e.step);
      if (e.payload.empty() && e.step == 0.0f) {
        m.signed_levels.assign(e.d, 0);
      } else {
        m.signed_levels =
            decode_symbols(reader, e.d, static_cast<Code>(e.code_id));
        check_consumed(reader, e.payload);
      }
      return qsgd_decode(m);
    }
    case scheme_id::drive: {
      DriveMessage m;
      m.d = e.d;
      m.seed = e.dither_seed;
      m.scale = static_cast<double>(e.step);
      size_t d_pad = padded_length(e.d);
      m.signs.reserve(d_pad);
      for (size_t i = 0; i < d_pad; ++i)
        m.signs.push_back(reader.read_bit() ? -1 : 1);
      check_consumed(reader, e.payload);
      return drive_decode(m);
    }
    case scheme_id::tlc: {
      std::vector<uint8_t> bytes;
      bytes.reserve((e.d + 4) / 5);
      for (size_t i = 0; i < (static_cast<size_t>(e.d) + 4) / 5; ++i)
        bytes.push_back(static_cast<uint8_t>(reader.read_bits(8)));
      check_consumed(reader, e.payload);
      TlcMessage m;
      m.d = e.d;
      m.scale = static_cast<double>(e.step);
      m.trits = tlc_unpack(bytes, e.d);
      return tlc_decode(m);
    }
    case scheme_id::none: {
      std::vector<double> u(e.d);
      for (size_t i = 0; i < u.size(); ++i)
        u[i] = static_cast<double>(read_f32(reader));
      check_consumed(reader, e.payload);
      return u;
    }
    default:
      throw CorruptStreamError("container: unknown quantizer id", 1);
  }
}

const char* method_name(Method method) {
  switch (method) {
    case Method::topk: return "topk";
    case Method::qsgd: return "qsgd";
    case Method::drive: return "drive";
    case Method::tlc: return "tlc";
    case Method::none: return "none";
  }
  return "unknown";
}

}  // namespace fedcodec
