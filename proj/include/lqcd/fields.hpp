#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

#include "lqcd/algebra.hpp"
#include "lqcd/errors.hpp"
#include "lqcd/geometry.hpp"
#include "lqcd/rng.hpp"
#include "lqcd/su3_compress.hpp"

namespace lqcd {

// Forward links U_mu(n) for every site, 4 per site, index 4*n + mu.
template <class Real>
class GaugeField {
 public:
  using real_type = Real;
  static constexpr Precision precision = precision_of<Real>::value;

  // Every link must pass the SU(3) check at su3_tolerance<Real>().
  GaugeField(GeometryPtr geom, std::vector<ColorMatrix<Real>> links) : geom_(std::move(geom)), links_(std::move(links)) {
    if (!geom_) throw GeometryError("gauge field without geometry");
    if (links_.size() != geom_->volume() * kDims) {
      throw GeometryError("gauge field: expected " + std::to_string(geom_->volume() * kDims) + " links, got " +
                          std::to_string(links_.size()));
    }
    for (std::size_t i = 0; i < links_.size(); ++i) {
      if (!is_special_unitary(links_[i], su3_tolerance<Real>())) {
        throw NotSpecialUnitary("gauge field: link " + std::to_string(i / kDims) + "/" + std::to_string(i % kDims) +
                                " fails the SU(3) check");
      }
    }
  }

  const Geometry& geometry() const { return *geom_; }
  const GeometryPtr& geometry_ptr() const { return geom_; }
  std::size_t volume() const { return geom_->volume(); }

  const ColorMatrix<Real>& link(SiteIndex n, int mu) const { return links_[n * kDims + static_cast<std::size_t>(mu)]; }
  std::span<const ColorMatrix<Real>> links() const { return links_; }

 private:
  GeometryPtr geom_;
  std::vector<ColorMatrix<Real>> links_;
};

// Gauge field held in 10-word form; links failing the pivot check are stored
// raw and flagged.
template <class Real>
class CompressedGaugeField {
 public:
  using real_type = Real;
  static constexpr Precision precision = precision_of<Real>::value;

  explicit CompressedGaugeField(const GaugeField<Real>& g) : geom_(g.geometry_ptr()) {
    links_.reserve(g.links().size());
    for (const auto& u : g.links()) {
      links_.push_back(pack_link(u));
      raw_count_ += links_.back().raw ? 1 : 0;
    }
  }

  CompressedGaugeField(GeometryPtr geom, std::vector<StoredLink<Real>> links)
      : geom_(std::move(geom)), links_(std::move(links)) {
    if (!geom_ || links_.size() != geom_->volume() * kDims) throw GeometryError("compressed gauge field: bad link count");
    for (const auto& s : links_) raw_count_ += s.raw ? 1 : 0;
  }

  const Geometry& geometry() const { return *geom_; }
  const GeometryPtr& geometry_ptr() const { return geom_; }
  std::size_t volume() const { return geom_->volume(); }

  const StoredLink<Real>& stored(SiteIndex n, int mu) const { return links_[n * kDims + static_cast<std::size_t>(mu)]; }
  ColorMatrix<Real> link(SiteIndex n, int mu) const { return unpack_link(stored(n, mu)); }
  std::span<const StoredLink<Real>> stored_links() const { return links_; }
  std::size_t raw_count() const { return raw_count_; }

  GaugeField<Real> decompress() const {
    std::vector<ColorMatrix<Real>> out;
    out.reserve(links_.size());
    for (const auto& s : links_) out.push_back(unpack_link(s));
    return GaugeField<Real>(geom_, std::move(out));
  }

 private:
  GeometryPtr geom_;
  std::vector<StoredLink<Real>> links_;
  std::size_t raw_count_ = 0;
};

template <class Real>
class SpinorField {
 public:
  using real_type = Real;
  static constexpr Precision precision = precision_of<Real>::value;

  explicit SpinorField(GeometryPtr geom) : geom_(std::move(geom)) {
    if (!geom_) throw GeometryError("spinor field without geometry");
    sites_.resize(geom_->volume());
  }

  const Geometry& geometry() const { return *geom_; }
  const GeometryPtr& geometry_ptr() const { return geom_; }
  std::size_t volume() const { return sites_.size(); }

  Spinor<Real>& operator[](SiteIndex n) { return sites_[n]; }
  const Spinor<Real>& operator[](SiteIndex n) const { return sites_[n]; }
  std::span<Spinor<Real>> sites() { return sites_; }
  std::span<const Spinor<Real>> sites() const { return sites_; }

  friend bool operator==(const SpinorField& a, const SpinorField& b) {
    return *a.geom_ == *b.geom_ && a.sites_ == b.sites_;
  }

 private:
  GeometryPtr geom_;
  std::vector<Spinor<Real>> sites_;
};

template <class Real>
GaugeField<Real> cold_start(GeometryPtr geom) {
  std::vector<ColorMatrix<Real>> links(geom->volume() * kDims, ColorMatrix<Real>::identity());
  return GaugeField<Real>(std::move(geom), std::move(links));
}

// Random SU(3) link for (site, mu): Gaussian complex 3x3 from the counter
// stream, Gram-Schmidt on the rows, then the third row is rotated by
// conj(det) to put det U = 1.
ColorMatrix<double> random_su3(const Philox4x32& rng, SiteIndex site, int mu);

GaugeField<double> hot_start_double(GeometryPtr geom, std::uint64_t seed);

// Content is a pure function of (seed, geometry).
template <class Real>
GaugeField<Real> hot_start(GeometryPtr geom, std::uint64_t seed);

template <>
inline GaugeField<double> hot_start<double>(GeometryPtr geom, std::uint64_t seed) {
  return hot_start_double(std::move(geom), seed);
}

template <class To, class From>
GaugeField<To> convert(const GaugeField<From>& g) {
  std::vector<ColorMatrix<To>> links;
  links.reserve(g.links().size());
  for (const auto& u : g.links()) links.push_back(matrix_cast<To>(u));
  return GaugeField<To>(g.geometry_ptr(), std::move(links));
}

template <>
inline GaugeField<float> hot_start<float>(GeometryPtr geom, std::uint64_t seed) {
  return convert<float>(hot_start_double(std::move(geom), seed));
}

// Round-to-nearest per component for double -> float; exact the other way.
template <class To, class From>
SpinorField<To> convert(const SpinorField<From>& x) {
  SpinorField<To> out(x.geometry_ptr());
  const auto n = static_cast<std::ptrdiff_t>(x.volume());
#pragma omp parallel for
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& s = x[static_cast<SiteIndex>(i)];
    auto& d = out[static_cast<SiteIndex>(i)];
    for (int a = 0; a < kSpins; ++a)
      for (int c = 0; c < kColors; ++c) d[a][c] = cplx_cast<To>(s[a][c]);
  }
  return out;
}

template <class Real>
SpinorField<Real> point_source(GeometryPtr geom, SiteIndex site, int spin, int color) {
  if (site >= geom->volume()) throw GeometryError("point source site out of range");
  if (spin < 0 || spin >= kSpins || color < 0 || color >= kColors) {
    throw GeometryError("point source spin/color out of range");
  }
  SpinorField<Real> out(std::move(geom));
  out[site][spin][color] = Cplx<Real>(Real(1), Real(0));
  return out;
}

// Gaussian components (unit variance per real part), deterministic in seed.
SpinorField<double> random_spinor_double(GeometryPtr geom, std::uint64_t seed);

template <class Real>
SpinorField<Real> random_spinor(GeometryPtr geom, std::uint64_t seed) {
  if constexpr (std::is_same_v<Real, double>) {
    return random_spinor_double(std::move(geom), seed);
  } else {
    return convert<Real>(random_spinor_double(std::move(geom), seed));
  }
}

}  // namespace lqcd
