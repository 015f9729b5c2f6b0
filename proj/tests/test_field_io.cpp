#include <cstring>

#include "doctest.h"
#include "lqcd/errors.hpp"
#include "lqcd/field_io.hpp"
#include "support.hpp"

using namespace lqcd;

namespace {

std::uint32_t le32(const std::vector<std::uint8_t>& b, std::size_t off) {
  return std::uint32_t{b[off]} | std::uint32_t{b[off + 1]} << 8 | std::uint32_t{b[off + 2]} << 16 |
         std::uint32_t{b[off + 3]} << 24;
}

std::uint64_t le64(const std::vector<std::uint8_t>& b, std::size_t off) {
  return std::uint64_t{le32(b, off)} | std::uint64_t{le32(b, off + 4)} << 32;
}

// Bitwise CRC-32 (reflected, polynomial 0xEDB88320).
std::uint32_t crc32_reference(const std::uint8_t* p, std::size_t n) {
  std::uint32_t c = 0xffffffffu;
  for (std::size_t i = 0; i < n; ++i) {
    c ^= p[i];
    for (int k = 0; k < 8; ++k) c = (c >> 1) ^ (0xedb88320u & (0u - (c & 1u)));
  }
  return ~c;
}

template <class Real>
bool same_links(const GaugeField<Real>& a, const GaugeField<Real>& b) {
  return std::equal(a.links().begin(), a.links().end(), b.links().begin(), b.links().end());
}

}  // namespace

TEST_CASE("crc32 check value") {
  const char* s = "123456789";
  const std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(s), 9);
  CHECK(crc32(bytes) == 0xcbf43926u);
}

TEST_CASE("header layout") {
  const auto geom = make_geometry({4, 2, 3, 2});
  const auto g = hot_start<double>(geom, 1);
  const auto bytes = encode_gauge(g, false);
  REQUIRE(bytes.size() == 48 + 48 * 4 * 18 * 8);
  CHECK(std::memcmp(bytes.data(), "LQCDFLD\0", 8) == 0);
  CHECK(le32(bytes, 8) == 1);
  CHECK(bytes[12] == 1);
  CHECK(bytes[13] == 2);
  CHECK(bytes[14] == 0);
  CHECK(bytes[15] == 0);
  CHECK(le32(bytes, 16) == 4);
  CHECK(le32(bytes, 20) == 2);
  CHECK(le32(bytes, 24) == 3);
  CHECK(le32(bytes, 28) == 2);
  CHECK(le64(bytes, 32) == bytes.size() - 48);
  CHECK(le32(bytes, 40) == crc32_reference(bytes.data() + 48, bytes.size() - 48));
  CHECK(le32(bytes, 44) == 0);
  // first real of the payload is Re U_0(0)(0,0), little-endian binary64
  double first = 0;
  std::memcpy(&first, bytes.data() + 48, 8);
  CHECK(first == g.link(0, 0)(0, 0).re);
}

TEST_CASE("spinor payload order is site, spin, color, re/im") {
  const auto geom = make_geometry({2, 2, 2, 2});
  const auto x = point_source<float>(geom, 3, 2, 1);
  const auto bytes = encode_spinor(x);
  REQUIRE(bytes.size() == 48 + 16 * 24 * 4);
  CHECK(bytes[12] == 2);
  CHECK(bytes[13] == 1);
  const std::size_t word = 3 * 24 + (2 * 3 + 1) * 2;
  float one = 0;
  std::memcpy(&one, bytes.data() + 48 + 4 * word, 4);
  CHECK(one == 1.0f);
}

TEST_CASE("save and load are bitwise round trips") {
  const auto dir = test::scratch_dir("io_roundtrip");
  const auto geom = make_geometry({4, 2, 2, 2});
  const auto gd = hot_start<double>(geom, 3);
  const auto gf = hot_start<float>(geom, 3);
  const auto s = random_spinor<double>(geom, 4);
  save_gauge(gd, dir / "gd");
  save_gauge(gf, dir / "gf");
  save_spinor(s, dir / "s");
  save_spinor(convert<float>(s), dir / "sf");
  CHECK(same_links(load_gauge<double>(dir / "gd"), gd));
  CHECK(same_links(load_gauge<float>(dir / "gf"), gf));
  CHECK(load_spinor<double>(dir / "s") == s);
  CHECK(load_spinor<float>(dir / "sf") == convert<float>(s));
  save_gauge(load_gauge<double>(dir / "gd"), dir / "gd2");
  CHECK(test::slurp(dir / "gd") == test::slurp(dir / "gd2"));
  const auto cold = cold_start<double>(geom);
  save_gauge(cold, dir / "cold");
  CHECK(same_links(load_gauge<double>(dir / "cold"), cold));
}

TEST_CASE("compressed gauge files") {
  const auto dir = test::scratch_dir("io_compressed");
  const auto geom = make_geometry({4, 2, 2, 2});
  const auto gd = hot_start<double>(geom, 6);
  save_gauge(gd, dir / "c", true);
  const auto h = read_header(dir / "c");
  CHECK(h.compressed);
  CHECK(h.payload_bytes == 128 * (1 + 10 * 8));
  const auto back = load_gauge<double>(dir / "c");
  double worst = 0;
  for (std::size_t i = 0; i < gd.links().size(); ++i)
    for (std::size_t k = 0; k < 9; ++k) worst = std::max(worst, std::sqrt(norm2(back.links()[i].m[k] - gd.links()[i].m[k])));
  CHECK(worst <= 1e-12);

  const auto gf = hot_start<float>(geom, 6);
  save_gauge(gf, dir / "cf", true);
  const auto backf = load_gauge<float>(dir / "cf");
  worst = 0;
  for (std::size_t i = 0; i < gf.links().size(); ++i)
    for (std::size_t k = 0; k < 9; ++k) {
      const auto d = cplx_cast<double>(backf.links()[i].m[k]) - cplx_cast<double>(gf.links()[i].m[k]);
      worst = std::max(worst, std::sqrt(norm2(d)));
    }
  CHECK(worst <= 1e-5);

  // identity links fail the pivot check and are stored raw with flag 1
  save_gauge(cold_start<double>(geom), dir / "cold", true);
  const auto bytes = test::slurp(dir / "cold");
  CHECK(bytes.size() == 48 + 128 * (1 + 18 * 8));
  CHECK(bytes[48] == 1);
  CHECK(same_links(load_gauge<double>(dir / "cold"), cold_start<double>(geom)));
}

TEST_CASE("corrupt and mismatched files are rejected") {
  const auto dir = test::scratch_dir("io_errors");
  const auto geom = make_geometry({2, 2, 2, 2});
  save_gauge(hot_start<double>(geom, 1), dir / "g");
  auto bytes = read_file(dir / "g");

  auto truncated = bytes;
  truncated.resize(bytes.size() - 5);
  CHECK_THROWS_AS(decode_gauge<double>(truncated), ChecksumError);

  auto flipped = bytes;
  flipped[200] ^= 0x10;
  CHECK_THROWS_AS(decode_gauge<double>(flipped), ChecksumError);

  auto badmagic = bytes;
  badmagic[0] = 'X';
  CHECK_THROWS_AS(decode_gauge<double>(badmagic), FormatError);

  auto badversion = bytes;
  badversion[8] = 7;
  CHECK_THROWS_WITH_AS(decode_gauge<double>(badversion), doctest::Contains("version"), FormatError);

  CHECK_THROWS_WITH_AS(decode_gauge<float>(bytes), doctest::Contains("precision"), FormatError);
  CHECK_THROWS_WITH_AS(decode_spinor<double>(bytes), doctest::Contains("kind"), FormatError);
  CHECK_THROWS_AS(decode_gauge<double>(std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 20)), FormatError);
  CHECK_THROWS_AS(load_gauge<double>(dir / "missing"), FormatError);

  // a non-SU(3) payload with a valid checksum fails the load-time check
  auto tampered = bytes;
  tampered[48 + 7] ^= 0x40;  // exponent bit of Re U(0,0)
  FieldFileHeader h = decode_header(tampered);
  h.checksum = crc32(std::span<const std::uint8_t>(tampered).subspan(48));
  const auto hdr = encode_header(h);
  std::copy(hdr.begin(), hdr.end(), tampered.begin());
  CHECK_THROWS_AS(decode_gauge<double>(tampered), NotSpecialUnitary);
}

TEST_CASE("golden files") {
  const auto golden = test::source_dir() / "tests" / "golden";
  const auto geom = make_geometry({2, 2, 2, 2});
  const auto dir = test::scratch_dir("io_golden");
  save_gauge(cold_start<double>(geom), dir / "cold");
  save_gauge(hot_start<double>(geom, 42), dir / "hot");
  save_gauge(hot_start<double>(geom, 42), dir / "hotc", true);
  CHECK(test::slurp(dir / "cold") == test::slurp(golden / "cold_2x2x2x2.lqcd"));
  CHECK(test::slurp(dir / "hot") == test::slurp(golden / "hot_2x2x2x2_seed42.lqcd"));
  CHECK(test::slurp(dir / "hotc") == test::slurp(golden / "hot_2x2x2x2_seed42_compressed.lqcd"));
  const auto g = load_gauge<double>(golden / "hot_2x2x2x2_seed42.lqcd");
  CHECK(same_links(g, hot_start<double>(geom, 42)));
}
