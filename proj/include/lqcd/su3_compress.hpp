#pragma once

// 10-real gauge-link compression.
//
// A link is stored as its full first row a = (a0, a1, a2) and the first two
// entries of the second row (b0, b1). Reconstruction uses only field
// arithmetic (no trigonometric or square-root calls):
//
//   b2  = -(conj(a0) b0 + conj(a1) b1) / conj(a2)     row orthogonality
//   row3 = conj(a x b)                                 det U = 1
//
// The division needs |a2| to be bounded away from zero; links with
// |U[0][2]| < kPivotThreshold are rejected by compress() and kept raw.

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "lqcd/algebra.hpp"
#include "lqcd/errors.hpp"

namespace lqcd {

inline constexpr double kPivotThreshold = 1e-6;
inline constexpr int kCompressedLinkWords = 10;
inline constexpr int kLinkWords = 18;

// Real operations in one reconstruct() call:
//   conj(a0) b0 + conj(a1) b1           6 + 6 + 2 = 14
//   complex division by conj(a2)        12  (|y|^2: 3, reciprocal: 1, x conj(y): 6, scale: 2)
//   three cross-product components      3 * (2 * 6 + 2) = 42
// conjugations and negations are sign flips and are not counted.
inline constexpr std::uint64_t kReconstructionFlops = 14 + 12 + 42;

constexpr std::uint64_t reconstruction_flops() { return kReconstructionFlops; }

// Layout: a0.re a0.im a1.re a1.im a2.re a2.im b0.re b0.im b1.re b1.im
template <class Real>
struct CompressedLink {
  std::array<Real, kCompressedLinkWords> w{};

  Cplx<Real> row0(int j) const { return {w[2 * j], w[2 * j + 1]}; }
  Cplx<Real> row1(int j) const { return {w[6 + 2 * j], w[6 + 2 * j + 1]}; }

  friend bool operator==(const CompressedLink&, const CompressedLink&) = default;
};

// Returns nullopt when the pivot |U[0][2]| is too small. Throws
// NotSpecialUnitary when U fails the SU(3) check.
template <class Real>
std::optional<CompressedLink<Real>> try_compress(const ColorMatrix<Real>& u) {
  if (!is_special_unitary(u, su3_tolerance<Real>())) {
    throw NotSpecialUnitary("compress: link is not special unitary (unitarity dev " +
                            std::to_string(unitarity_deviation(u)) + ", det dev " +
                            std::to_string(det_deviation(u)) + ")");
  }
  if (std::sqrt(norm2(cplx_cast<double>(u(0, 2)))) < kPivotThreshold) return std::nullopt;
  CompressedLink<Real> c;
  for (int j = 0; j < kColors; ++j) {
    c.w[2 * j] = u(0, j).re;
    c.w[2 * j + 1] = u(0, j).im;
  }
  for (int j = 0; j < 2; ++j) {
    c.w[6 + 2 * j] = u(1, j).re;
    c.w[6 + 2 * j + 1] = u(1, j).im;
  }
  return c;
}

template <class Real>
CompressedLink<Real> compress(const ColorMatrix<Real>& u) {
  auto c = try_compress(u);
  if (!c) throw PivotTooSmall("compress: |U[0][2]| below pivot threshold");
  return *c;
}

template <class Real>
ColorMatrix<Real> reconstruct(const CompressedLink<Real>& c) {
  ColorMatrix<Real> u;
  const Cplx<Real> a0 = c.row0(0), a1 = c.row0(1), a2 = c.row0(2);
  const Cplx<Real> b0 = c.row1(0), b1 = c.row1(1);
  const Cplx<Real> b2 = -((conj(a0) * b0 + conj(a1) * b1) / conj(a2));
  u(0, 0) = a0;
  u(0, 1) = a1;
  u(0, 2) = a2;
  u(1, 0) = b0;
  u(1, 1) = b1;
  u(1, 2) = b2;
  u(2, 0) = conj(a1 * b2 - a2 * b1);
  u(2, 1) = conj(a2 * b0 - a0 * b2);
  u(2, 2) = conj(a0 * b1 - a1 * b0);
  return u;
}

// A link as held by a compressed gauge field: 10 words plus a flag, or 18
// words when the pivot check failed.
template <class Real>
struct StoredLink {
  std::array<Real, kLinkWords> w{};
  bool raw = false;
};

template <class Real>
StoredLink<Real> pack_link(const ColorMatrix<Real>& u) {
  StoredLink<Real> s;
  if (auto c = try_compress(u)) {
    for (int i = 0; i < kCompressedLinkWords; ++i) s.w[i] = c->w[i];
    return s;
  }
  s.raw = true;
  for (int i = 0; i < kColors * kColors; ++i) {
    s.w[2 * i] = u.m[i].re;
    s.w[2 * i + 1] = u.m[i].im;
  }
  return s;
}

template <class Real>
ColorMatrix<Real> unpack_link(const StoredLink<Real>& s) {
  if (!s.raw) {
    CompressedLink<Real> c;
    for (int i = 0; i < kCompressedLinkWords; ++i) c.w[i] = s.w[i];
    return reconstruct(c);
  }
  ColorMatrix<Real> u;
  for (int i = 0; i < kColors * kColors; ++i) u.m[i] = {s.w[2 * i], s.w[2 * i + 1]};
  return u;
}

}  // namespace lqcd
