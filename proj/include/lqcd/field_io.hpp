#pragma once

// Binary field files. Byte-level layout is documented in docs/file-format.md.
// All multi-byte values are little-endian regardless of host byte order.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lqcd/fields.hpp"

namespace lqcd {

inline constexpr std::size_t kHeaderBytes = 48;
inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr char kMagic[8] = {'L', 'Q', 'C', 'D', 'F', 'L', 'D', '\0'};

enum class FieldKind : std::uint8_t { gauge = 1, spinor = 2 };

struct FieldFileHeader {
  std::uint32_t version = kFormatVersion;
  FieldKind kind = FieldKind::gauge;
  Precision precision = Precision::high;
  bool compressed = false;
  LatticeDims dims;
  std::uint64_t payload_bytes = 0;
  std::uint32_t checksum = 0;  // CRC-32 of the payload
};

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_header(const FieldFileHeader& h);
// Throws FormatError on bad magic, unknown version or malformed fields.
FieldFileHeader decode_header(std::span<const std::uint8_t> bytes);

template <class Real>
std::vector<std::uint8_t> encode_gauge(const GaugeField<Real>& g, bool compressed);
template <class Real>
std::vector<std::uint8_t> encode_spinor(const SpinorField<Real>& x);

// Verify checksum, kind, precision and payload size; links are re-checked
// for SU(3) membership after decoding.
template <class Real>
GaugeField<Real> decode_gauge(std::span<const std::uint8_t> bytes);
template <class Real>
SpinorField<Real> decode_spinor(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

FieldFileHeader read_header(const std::filesystem::path& path);

template <class Real>
void save_gauge(const GaugeField<Real>& g, const std::filesystem::path& path, bool compressed = false) {
  write_file(path, encode_gauge(g, compressed));
}
template <class Real>
GaugeField<Real> load_gauge(const std::filesystem::path& path) {
  return decode_gauge<Real>(read_file(path));
}
template <class Real>
void save_spinor(const SpinorField<Real>& x, const std::filesystem::path& path) {
  write_file(path, encode_spinor(x));
}
template <class Real>
SpinorField<Real> load_spinor(const std::filesystem::path& path) {
  return decode_spinor<Real>(read_file(path));
}

}  // namespace lqcd
