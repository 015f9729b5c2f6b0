#include "lqcd/fields.hpp"

#include <cmath>

namespace lqcd {

namespace {

using C = Cplx<double>;

// <a, b> = sum conj(a_j) b_j
C row_dot(const ColorMatrix<double>& u, int a, int b) {
  C s;
  for (int j = 0; j < kColors; ++j) s += conj(u(a, j)) * u(b, j);
  return s;
}

void normalize_row(ColorMatrix<double>& u, int a) {
  double n2 = 0.0;
  for (int j = 0; j < kColors; ++j) n2 += norm2(u(a, j));
  const double inv = 1.0 / std::sqrt(n2);
  for (int j = 0; j < kColors; ++j) u(a, j) = inv * u(a, j);
}

}  // namespace

ColorMatrix<double> random_su3(const Philox4x32& rng, SiteIndex site, int mu) {
  ColorMatrix<double> u;
  const auto stream = static_cast<std::uint32_t>(mu);
  for (std::uint32_t draw = 0; draw < 9; ++draw) {
    const auto [re, im] = gaussian_pair(rng, site, stream, draw);
    u.m[draw] = {re, im};
  }
  normalize_row(u, 0);
  for (int b = 1; b < kColors; ++b) {
    for (int a = 0; a < b; ++a) {
      const C p = row_dot(u, a, b);
      for (int j = 0; j < kColors; ++j) u(b, j) -= p * u(a, j);
    }
    normalize_row(u, b);
  }
  const C d = det(u);
  const C fix = (1.0 / std::sqrt(norm2(d))) * conj(d);
  for (int j = 0; j < kColors; ++j) u(2, j) = fix * u(2, j);
  return u;
}

GaugeField<double> hot_start_double(GeometryPtr geom, std::uint64_t seed) {
  const Philox4x32 rng(seed);
  std::vector<ColorMatrix<double>> links(geom->volume() * kDims);
  const auto n = static_cast<std::ptrdiff_t>(geom->volume());
#pragma omp parallel for
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto site = static_cast<SiteIndex>(i);
    for (int mu = 0; mu < kDims; ++mu) links[site * kDims + static_cast<std::size_t>(mu)] = random_su3(rng, site, mu);
  }
  return GaugeField<double>(std::move(geom), std::move(links));
}

SpinorField<double> random_spinor_double(GeometryPtr geom, std::uint64_t seed) {
  const Philox4x32 rng(seed);
  SpinorField<double> out(std::move(geom));
  const auto n = static_cast<std::ptrdiff_t>(out.volume());
  constexpr auto stream = static_cast<std::uint32_t>(RngStream::spinor);
#pragma omp parallel for
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto site = static_cast<SiteIndex>(i);
    std::uint32_t draw = 0;
    for (int a = 0; a < kSpins; ++a)
      for (int c = 0; c < kColors; ++c) {
        const auto [re, im] = gaussian_pair(rng, site, stream, draw++);
        out[site][a][c] = {re, im};
      }
  }
  return out;
}

}  // namespace lqcd
