#pragma once

// Shared helpers for the unit tests. Nothing here calls into the code under
// test except to build inputs.

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "lqcd/algebra.hpp"
#include "lqcd/fields.hpp"

namespace lqcd::test {

// Scalar that counts every binary + - * / it takes part in. Negation is a
// sign flip and is not counted.
struct CountingReal {
  double v = 0.0;
  static inline std::uint64_t ops = 0;

  constexpr CountingReal() = default;
  constexpr CountingReal(double x) : v(x) {}  // NOLINT: implicit by design
  explicit constexpr CountingReal(int x) : v(x) {}

  friend CountingReal operator+(CountingReal a, CountingReal b) { return ++ops, CountingReal(a.v + b.v); }
  friend CountingReal operator-(CountingReal a, CountingReal b) { return ++ops, CountingReal(a.v - b.v); }
  friend CountingReal operator*(CountingReal a, CountingReal b) { return ++ops, CountingReal(a.v * b.v); }
  friend CountingReal operator/(CountingReal a, CountingReal b) { return ++ops, CountingReal(a.v / b.v); }
  friend CountingReal operator-(CountingReal a) { return CountingReal(-a.v); }
  friend bool operator==(CountingReal a, CountingReal b) { return a.v == b.v; }
};

inline std::uint64_t ops_since(std::uint64_t start) { return CountingReal::ops - start; }

using cd = std::complex<double>;

// Haar-distributed U(3) via QR of a Ginibre matrix (Mezzadri), then the
// determinant phase is divided out of the first row.
inline ColorMatrix<double> haar_su3(std::mt19937_64& gen) {
  std::normal_distribution<double> n01;
  cd a[3][3];
  for (auto& row : a)
    for (auto& x : row) x = cd(n01(gen), n01(gen));
  // modified Gram-Schmidt on columns
  cd q[3][3];
  for (int j = 0; j < 3; ++j) {
    cd v[3] = {a[0][j], a[1][j], a[2][j]};
    for (int k = 0; k < j; ++k) {
      cd proj = 0;
      for (int i = 0; i < 3; ++i) proj += std::conj(q[i][k]) * v[i];
      for (int i = 0; i < 3; ++i) v[i] -= proj * q[i][k];
    }
    double nrm = 0;
    for (auto& x : v) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    for (int i = 0; i < 3; ++i) q[i][j] = v[i] / nrm;
  }
  const cd d = q[0][0] * (q[1][1] * q[2][2] - q[1][2] * q[2][1]) - q[0][1] * (q[1][0] * q[2][2] - q[1][2] * q[2][0]) +
               q[0][2] * (q[1][0] * q[2][1] - q[1][1] * q[2][0]);
  const cd fix = std::conj(d) / std::abs(d);
  ColorMatrix<double> u;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const cd x = (i == 0 ? fix : cd(1)) * q[i][j];
      u(i, j) = {x.real(), x.imag()};
    }
  return u;
}

inline Spinor<double> random_spinor_site(std::mt19937_64& gen) {
  std::normal_distribution<double> n01;
  Spinor<double> s;
  for (int a = 0; a < kSpins; ++a)
    for (int c = 0; c < kColors; ++c) s[a][c] = {n01(gen), n01(gen)};
  return s;
}

inline SpinorField<double> random_field(const GeometryPtr& g, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  SpinorField<double> f(g);
  for (auto& s : f.sites()) s = random_spinor_site(gen);
  return f;
}

inline cd to_std(Cplx<double> z) { return {z.re, z.im}; }

// Site n -> site n + shift (periodic), applied to a field: out(n + shift) = in(n).
inline SpinorField<double> shifted(const SpinorField<double>& in, const Coords& shift) {
  const Geometry& g = in.geometry();
  SpinorField<double> out(in.geometry_ptr());
  for (SiteIndex n = 0; n < g.volume(); ++n) {
    Coords c = g.coords_of(n);
    for (int mu = 0; mu < kDims; ++mu) c[mu] = (c[mu] + shift[mu]) % g.dims().extent(mu);
    out[g.index_of(c)] = in[n];
  }
  return out;
}

inline GaugeField<double> shifted(const GaugeField<double>& in, const Coords& shift) {
  const Geometry& g = in.geometry();
  std::vector<ColorMatrix<double>> links(in.links().size());
  for (SiteIndex n = 0; n < g.volume(); ++n) {
    Coords c = g.coords_of(n);
    for (int mu = 0; mu < kDims; ++mu) c[mu] = (c[mu] + shift[mu]) % g.dims().extent(mu);
    for (int mu = 0; mu < kDims; ++mu) links[g.index_of(c) * kDims + mu] = in.link(n, mu);
  }
  return GaugeField<double>(in.geometry_ptr(), std::move(links));
}

inline std::vector<char> slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string slurp_text(const std::filesystem::path& p) {
  const auto bytes = slurp(p);
  return {bytes.begin(), bytes.end()};
}

inline std::filesystem::path source_dir() { return LQCD_SOURCE_DIR; }

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("lqcd_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace lqcd::test
