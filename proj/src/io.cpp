#include "fedcodec/io.hpp"

#include <bit>
#include <fstream>

#include "fedcodec/errors.hpp"

namespace fedcodec {

std::vector<uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed on " + path);
  return data;
}

void write_bytes(const std::string& path, std::span<const uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed on " + path);
}

std::string read_text(const std::string& path) {
  std::vector<uint8_t> data = read_bytes(path);
  return std::string(data.begin(), data.end());
}

void write_text(const std::string& path, const std::string& text) {
  write_bytes(path, std::span<const uint8_t>(
                        reinterpret_cast<const uint8_t*>(text.data()),
                        text.size()));
}

std::vector<double> read_vector_file(const std::string& path) {
  std::vector<uint8_t> data = read_bytes(path);
  if (data.size() < 8 || !std::equal(kVectorMagic.begin(), kVectorMagic.end(),
                                     data.begin()))
    throw CorruptStreamError("vector file: bad magic in " + path, 0);
  uint32_t count = 0;
  for (unsigned i = 0; i < 4; ++i)
    count |= static_cast<uint32_t>(data[4 + i]) << (8 * i);
  if (data.size() != 8 + size_t{count} * 4)
    throw CorruptStreamError("vector file: length mismatch in " + path, 8);
  std::vector<double> v(count);
  for (size_t i = 0; i < count; ++i) {
    uint32_t bits = 0;
    for (unsigned b = 0; b < 4; ++b)
      bits |= static_cast<uint32_t>(data[8 + 4 * i + b]) << (8 * b);
    v[i] = static_cast<double>(std::bit_cast<float>(bits));
  }
  return v;
}

void write_vector_file(const std::string& path, std::span<const double> v) {
  std::vector<uint8_t> data;
  data.reserve(8 + v.size() * 4);
  data.insert(data.end(), kVectorMagic.begin(), kVectorMagic.end());
  uint32_t count = static_cast<uint32_t>(v.size());
  for (unsigned i = 0; i < 4; ++i)
    data.push_back(static_cast<uint8_t>(count >> (8 * i)));
  for (double x : v) {
    uint32_t bits = std::bit_cast<uint32_t>(static_cast<float>(x));
    for (unsigned b = 0; b < 4; ++b)
      data.push_back(static_cast<uint8_t>(bits >> (8 * b)));
  }
  write_bytes(path, data);
}

}  // namespace fedcodec
