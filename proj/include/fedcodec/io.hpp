#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fedcodec {

// Vector file: magic "FVEC", u32 little-endian count, then 32-bit
// little-endian floats. Values are narrowed to f32 on write.
inline constexpr std::array<uint8_t, 4> kVectorMagic = {'F', 'V', 'E', 'C'};

std::vector<double> read_vector_file(const std::string& path);
void write_vector_file(const std::string& path, std::span<const double> v);

std::vector<uint8_t> read_bytes(const std::string& path);
void write_bytes(const std::string& path, std::span<const uint8_t> data);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace fedcodec
