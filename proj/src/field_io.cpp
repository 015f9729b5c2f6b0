#include "lqcd/field_io.hpp"

#include <bit>
#include <boost/crc.hpp>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace lqcd {

namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void real(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void real(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  std::vector<std::uint8_t>& data() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{in_[pos_++]} << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{in_[pos_++]} << (8 * i);
    return v;
  }
  template <class Real>
  Real real() {
    if constexpr (sizeof(Real) == 4) {
      return std::bit_cast<float>(u32());
    } else {
      return std::bit_cast<double>(u64());
    }
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw FormatError("unexpected end of payload");
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

template <class Real>
void write_complex(Writer& w, const Cplx<Real>& z) {
  w.real(z.re);
  w.real(z.im);
}

template <class Real>
Cplx<Real> read_complex(Reader& r) {
  const Real re = r.real<Real>();
  const Real im = r.real<Real>();
  return {re, im};
}

// Header + payload split with checksum and kind/precision checks.
template <class Real>
std::span<const std::uint8_t> checked_payload(std::span<const std::uint8_t> bytes, FieldKind kind,
                                              FieldFileHeader& header) {
  header = decode_header(bytes);
  const auto payload = bytes.subspan(kHeaderBytes);
  if (crc32(payload) != header.checksum) {
    throw ChecksumError("payload checksum mismatch (file truncated or corrupted)");
  }
  if (payload.size() != header.payload_bytes) {
    throw FormatError("payload size " + std::to_string(payload.size()) + " does not match header " +
                      std::to_string(header.payload_bytes));
  }
  if (header.kind != kind) {
    throw FormatError(std::string("field kind mismatch: file holds a ") +
                      (header.kind == FieldKind::gauge ? "gauge" : "spinor") + " field");
  }
  if (header.precision != precision_of<Real>::value) {
    throw FormatError("precision mismatch: file is " + std::string(to_string(header.precision)) + ", requested " +
                      std::string(to_string(precision_of<Real>::value)));
  }
  return payload;
}

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

std::vector<std::uint8_t> encode_header(const FieldFileHeader& h) {
  Writer w;
  for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u32(h.version);
  w.u8(static_cast<std::uint8_t>(h.kind));
  w.u8(static_cast<std::uint8_t>(h.precision));
  w.u8(h.compressed ? 1 : 0);
  w.u8(0);
  for (int axis = 0; axis < kDims; ++axis) w.u32(static_cast<std::uint32_t>(h.dims.extent(axis)));
  w.u64(h.payload_bytes);
  w.u32(h.checksum);
  w.u32(0);
  return std::move(w.data());
}

FieldFileHeader decode_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) throw FormatError("file shorter than the fixed header");
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) throw FormatError("bad magic; not a field file");
  Reader r(bytes.subspan(sizeof(kMagic), kHeaderBytes - sizeof(kMagic)));
  FieldFileHeader h;
  h.version = r.u32();
  if (h.version != kFormatVersion) throw FormatError("unknown format version " + std::to_string(h.version));
  const std::uint8_t kind = r.u8();
  const std::uint8_t precision = r.u8();
  const std::uint8_t compressed = r.u8();
  r.u8();
  if (kind != 1 && kind != 2) throw FormatError("unknown field kind " + std::to_string(kind));
  if (precision != 1 && precision != 2) throw FormatError("unknown precision tag " + std::to_string(precision));
  if (compressed > 1) throw FormatError("bad compression flag");
  h.kind = static_cast<FieldKind>(kind);
  h.precision = static_cast<Precision>(precision);
  h.compressed = compressed == 1;
  if (h.compressed && h.kind != FieldKind::gauge) throw FormatError("compression flag set on a spinor field");
  std::array<std::uint32_t, kDims> ext{};
  for (auto& e : ext) e = r.u32();
  for (auto e : ext) {
    if (e < 2 || e > 1u << 20) throw FormatError("bad lattice extent " + std::to_string(e) + " in header");
  }
  h.dims = {static_cast<int>(ext[0]), static_cast<int>(ext[1]), static_cast<int>(ext[2]), static_cast<int>(ext[3])};
  h.payload_bytes = r.u64();
  h.checksum = r.u32();
  return h;
}

template <class Real>
std::vector<std::uint8_t> encode_gauge(const GaugeField<Real>& g, bool compressed) {
  Writer payload;
  if (compressed) {
    for (const auto& u : g.links()) {
      const StoredLink<Real> s = pack_link(u);
      payload.u8(s.raw ? 1 : 0);
      const int words = s.raw ? kLinkWords : kCompressedLinkWords;
      for (int i = 0; i < words; ++i) payload.real(s.w[static_cast<std::size_t>(i)]);
    }
  } else {
    for (const auto& u : g.links())
      for (const auto& z : u.m) write_complex(payload, z);
  }
  FieldFileHeader h;
  h.kind = FieldKind::gauge;
  h.precision = precision_of<Real>::value;
  h.compressed = compressed;
  h.dims = g.geometry().dims();
  h.payload_bytes = payload.data().size();
  h.checksum = crc32(payload.data());
  Writer out;
  out.bytes(encode_header(h));
  out.bytes(payload.data());
  return std::move(out.data());
}

template <class Real>
std::vector<std::uint8_t> encode_spinor(const SpinorField<Real>& x) {
  Writer payload;
  for (const auto& s : x.sites())
    for (int a = 0; a < kSpins; ++a)
      for (int c = 0; c < kColors; ++c) write_complex(payload, s[a][c]);
  FieldFileHeader h;
  h.kind = FieldKind::spinor;
  h.precision = precision_of<Real>::value;
  h.dims = x.geometry().dims();
  h.payload_bytes = payload.data().size();
  h.checksum = crc32(payload.data());
  Writer out;
  out.bytes(encode_header(h));
  out.bytes(payload.data());
  return std::move(out.data());
}

template <class Real>
GaugeField<Real> decode_gauge(std::span<const std::uint8_t> bytes) {
  FieldFileHeader h;
  Reader r(checked_payload<Real>(bytes, FieldKind::gauge, h));
  auto geom = make_geometry(h.dims);
  const std::size_t nlinks = geom->volume() * kDims;
  std::vector<ColorMatrix<Real>> links(nlinks);
  for (auto& u : links) {
    if (h.compressed) {
      StoredLink<Real> s;
      const std::uint8_t flag = r.u8();
      if (flag > 1) throw FormatError("bad per-link flag byte");
      s.raw = flag == 1;
      const int words = s.raw ? kLinkWords : kCompressedLinkWords;
      for (int i = 0; i < words; ++i) s.w[static_cast<std::size_t>(i)] = r.real<Real>();
      u = unpack_link(s);
    } else {
      for (auto& z : u.m) z = read_complex<Real>(r);
    }
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after gauge payload");
  return GaugeField<Real>(std::move(geom), std::move(links));
}

template <class Real>
SpinorField<Real> decode_spinor(std::span<const std::uint8_t> bytes) {
  FieldFileHeader h;
  Reader r(checked_payload<Real>(bytes, FieldKind::spinor, h));
  SpinorField<Real> x(make_geometry(h.dims));
  for (auto& s : x.sites())
    for (int a = 0; a < kSpins; ++a)
      for (int c = 0; c < kColors; ++c) s[a][c] = read_complex<Real>(r);
  if (r.remaining() != 0) throw FormatError("trailing bytes after spinor payload");
  return x;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("write failed for '" + path.string() + "'");
}

FieldFileHeader read_header(const std::filesystem::path& path) { return decode_header(read_file(path)); }

template std::vector<std::uint8_t> encode_gauge(const GaugeField<float>&, bool);
template std::vector<std::uint8_t> encode_gauge(const GaugeField<double>&, bool);
template std::vector<std::uint8_t> encode_spinor(const SpinorField<float>&);
template std::vector<std::uint8_t> encode_spinor(const SpinorField<double>&);
template GaugeField<float> decode_gauge<float>(std::span<const std::uint8_t>);
template GaugeField<double> decode_gauge<double>(std::span<const std::uint8_t>);
template SpinorField<float> decode_spinor<float>(std::span<const std::uint8_t>);
template SpinorField<double> decode_spinor<double>(std::span<const std::uint8_t>);

}  // namespace lqcd
