#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>

#include "lqcd/geometry.hpp"

namespace lqcd {

// high = binary64, low = binary32. Fields are templated on the scalar type;
// there is no implicit conversion between them (see convert()).
enum class Precision : std::uint8_t { low = 1, high = 2 };

template <class Real>
struct precision_of;
template <>
struct precision_of<double> {
  static constexpr Precision value = Precision::high;
};
template <>
struct precision_of<float> {
  static constexpr Precision value = Precision::low;
};

constexpr std::string_view to_string(Precision p) { return p == Precision::high ? "double" : "single"; }

template <class Real>
struct Cplx {
  Real re{};
  Real im{};

  constexpr Cplx() = default;
  constexpr Cplx(Real r, Real i) : re(r), im(i) {}
  constexpr explicit Cplx(Real r) : re(r), im(Real(0)) {}

  Cplx& operator+=(const Cplx& o) {
    re = re + o.re;
    im = im + o.im;
    return *this;
  }
  Cplx& operator-=(const Cplx& o) {
    re = re - o.re;
    im = im - o.im;
    return *this;
  }
  friend bool operator==(const Cplx&, const Cplx&) = default;
};

template <class Real>
constexpr Cplx<Real> operator+(const Cplx<Real>& a, const Cplx<Real>& b) {
  return {a.re + b.re, a.im + b.im};
}
template <class Real>
constexpr Cplx<Real> operator-(const Cplx<Real>& a, const Cplx<Real>& b) {
  return {a.re - b.re, a.im - b.im};
}
template <class Real>
constexpr Cplx<Real> operator-(const Cplx<Real>& a) {
  return {-a.re, -a.im};
}
// 4 mul + 2 add
template <class Real>
constexpr Cplx<Real> operator*(const Cplx<Real>& a, const Cplx<Real>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class Real>
constexpr Cplx<Real> operator*(const Real& s, const Cplx<Real>& a) {
  return {s * a.re, s * a.im};
}
template <class Real>
constexpr Cplx<Real> conj(const Cplx<Real>& a) {
  return {a.re, -a.im};
}
// |y|^2 (3) + reciprocal (1) + x*conj(y) (6) + scale (2) = 12
template <class Real>
constexpr Cplx<Real> operator/(const Cplx<Real>& x, const Cplx<Real>& y) {
  const Real inv = Real(1) / (y.re * y.re + y.im * y.im);
  return inv * (x * conj(y));
}
template <class Real>
constexpr Real norm2(const Cplx<Real>& a) {
  return a.re * a.re + a.im * a.im;
}
template <class Real>
Real abs(const Cplx<Real>& a) {
  using std::sqrt;
  return sqrt(norm2(a));
}

template <class To, class From>
constexpr Cplx<To> cplx_cast(const Cplx<From>& a) {
  return {static_cast<To>(a.re), static_cast<To>(a.im)};
}

// Multiplication by one of {+1, -1, +i, -i}; sign flips and swaps only.
enum class Phase : std::uint8_t { plus_one, minus_one, plus_i, minus_i };

template <class Real>
constexpr Cplx<Real> apply_phase(Phase p, const Cplx<Real>& a) {
  switch (p) {
    case Phase::plus_one: return a;
    case Phase::minus_one: return {-a.re, -a.im};
    case Phase::plus_i: return {-a.im, a.re};
    default: return {a.im, -a.re};
  }
}

constexpr Phase negate(Phase p) {
  switch (p) {
    case Phase::plus_one: return Phase::minus_one;
    case Phase::minus_one: return Phase::plus_one;
    case Phase::plus_i: return Phase::minus_i;
    default: return Phase::plus_i;
  }
}

constexpr Cplx<double> phase_value(Phase p) {
  switch (p) {
    case Phase::plus_one: return {1.0, 0.0};
    case Phase::minus_one: return {-1.0, 0.0};
    case Phase::plus_i: return {0.0, 1.0};
    default: return {0.0, -1.0};
  }
}

inline constexpr int kColors = 3;
inline constexpr int kSpins = 4;

template <class Real>
struct ColorVector {
  std::array<Cplx<Real>, kColors> c{};

  Cplx<Real>& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  const Cplx<Real>& operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  ColorVector& operator+=(const ColorVector& o) {
    for (int i = 0; i < kColors; ++i) (*this)[i] += o[i];
    return *this;
  }
  friend bool operator==(const ColorVector&, const ColorVector&) = default;
};

template <class Real>
ColorVector<Real> operator+(const ColorVector<Real>& a, const ColorVector<Real>& b) {
  ColorVector<Real> r;
  for (int i = 0; i < kColors; ++i) r[i] = a[i] + b[i];
  return r;
}
template <class Real>
ColorVector<Real> operator*(const Real& s, const ColorVector<Real>& a) {
  ColorVector<Real> r;
  for (int i = 0; i < kColors; ++i) r[i] = s * a[i];
  return r;
}
template <class Real>
ColorVector<Real> apply_phase(Phase p, const ColorVector<Real>& a) {
  ColorVector<Real> r;
  for (int i = 0; i < kColors; ++i) r[i] = apply_phase(p, a[i]);
  return r;
}

// Row-major 3x3 complex matrix; element (A, B) of a gauge link.
template <class Real>
struct ColorMatrix {
  std::array<Cplx<Real>, kColors * kColors> m{};

  Cplx<Real>& operator()(int row, int col) { return m[static_cast<std::size_t>(row * kColors + col)]; }
  const Cplx<Real>& operator()(int row, int col) const {
    return m[static_cast<std::size_t>(row * kColors + col)];
  }

  static ColorMatrix identity() {
    ColorMatrix u;
    for (int i = 0; i < kColors; ++i) u(i, i) = Cplx<Real>(Real(1), Real(0));
    return u;
  }
  friend bool operator==(const ColorMatrix&, const ColorMatrix&) = default;
};

// 3 complex mul + 2 complex add per row: 66 real operations.
inline constexpr std::uint64_t kMatVecFlops = 66;

template <class Real>
ColorVector<Real> mat_vec(const ColorMatrix<Real>& u, const ColorVector<Real>& v) {
  ColorVector<Real> r;
  for (int i = 0; i < kColors; ++i) r[i] = u(i, 0) * v[0] + u(i, 1) * v[1] + u(i, 2) * v[2];
  return r;
}

// U^dagger v without forming U^dagger.
template <class Real>
ColorVector<Real> mat_dag_vec(const ColorMatrix<Real>& u, const ColorVector<Real>& v) {
  ColorVector<Real> r;
  for (int i = 0; i < kColors; ++i) {
    r[i] = conj(u(0, i)) * v[0] + conj(u(1, i)) * v[1] + conj(u(2, i)) * v[2];
  }
  return r;
}

template <class Real>
ColorMatrix<Real> dagger(const ColorMatrix<Real>& u) {
  ColorMatrix<Real> r;
  for (int i = 0; i < kColors; ++i)
    for (int j = 0; j < kColors; ++j) r(i, j) = conj(u(j, i));
  return r;
}

template <class Real>
ColorMatrix<Real> operator*(const ColorMatrix<Real>& a, const ColorMatrix<Real>& b) {
  ColorMatrix<Real> r;
  for (int i = 0; i < kColors; ++i)
    for (int j = 0; j < kColors; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
  return r;
}

template <class Real>
Cplx<Real> det(const ColorMatrix<Real>& u) {
  return u(0, 0) * (u(1, 1) * u(2, 2) - u(1, 2) * u(2, 1)) -
         u(0, 1) * (u(1, 0) * u(2, 2) - u(1, 2) * u(2, 0)) +
         u(0, 2) * (u(1, 0) * u(2, 1) - u(1, 1) * u(2, 0));
}

template <class To, class From>
ColorMatrix<To> matrix_cast(const ColorMatrix<From>& u) {
  ColorMatrix<To> r;
  for (std::size_t i = 0; i < u.m.size(); ++i) r.m[i] = cplx_cast<To>(u.m[i]);
  return r;
}

// max_ij |(U^dagger U - 1)_ij|, evaluated in double.
template <class Real>
double unitarity_deviation(const ColorMatrix<Real>& u) {
  const auto ud = matrix_cast<double>(u);
  const auto p = dagger(ud) * ud;
  double worst = 0.0;
  for (int i = 0; i < kColors; ++i)
    for (int j = 0; j < kColors; ++j) {
      const Cplx<double> e = p(i, j) - Cplx<double>(i == j ? 1.0 : 0.0, 0.0);
      worst = std::max(worst, std::sqrt(norm2(e)));
    }
  return worst;
}

template <class Real>
double det_deviation(const ColorMatrix<Real>& u) {
  const Cplx<double> d = det(matrix_cast<double>(u)) - Cplx<double>(1.0, 0.0);
  return std::sqrt(norm2(d));
}

template <class Real>
bool is_special_unitary(const ColorMatrix<Real>& u, double tol) {
  return unitarity_deviation(u) <= tol && det_deviation(u) <= tol;
}

// Tolerance used when validating gauge links at creation and load.
template <class Real>
constexpr double su3_tolerance() {
  return precision_of<Real>::value == Precision::high ? 1e-10 : 1e-5;
}

// 4 spin x 3 color complex components.
template <class Real>
struct Spinor {
  static constexpr std::size_t kRealWords = 2 * kSpins * kColors;

  std::array<ColorVector<Real>, kSpins> s{};

  ColorVector<Real>& operator[](int a) { return s[static_cast<std::size_t>(a)]; }
  const ColorVector<Real>& operator[](int a) const { return s[static_cast<std::size_t>(a)]; }

  Spinor& operator+=(const Spinor& o) {
    for (int a = 0; a < kSpins; ++a) (*this)[a] += o[a];
    return *this;
  }
  friend bool operator==(const Spinor&, const Spinor&) = default;
};
static_assert(Spinor<double>::kRealWords == 24);

template <class Real>
Spinor<Real> operator*(const Real& s, const Spinor<Real>& a) {
  Spinor<Real> r;
  for (int i = 0; i < kSpins; ++i) r[i] = s * a[i];
  return r;
}

// Upper spin doublet of a projected spinor; the lower doublet follows from it
// by a fixed phase (see expand()).
template <class Real>
struct HalfSpinor {
  std::array<ColorVector<Real>, 2> h{};

  ColorVector<Real>& operator[](int a) { return h[static_cast<std::size_t>(a)]; }
  const ColorVector<Real>& operator[](int a) const { return h[static_cast<std::size_t>(a)]; }
};

// Chiral (DeGrand-Rossi) basis with axis 0 = time:
//
//   gamma_0 (t)            gamma_1 (x)            gamma_2 (y)            gamma_3 (z)
//   [ 0  0  1  0 ]         [ 0  0  0  i ]         [ 0  0  0 -1 ]         [ 0  0  i  0 ]
//   [ 0  0  0  1 ]         [ 0  0  i  0 ]         [ 0  0  1  0 ]         [ 0  0  0 -i ]
//   [ 1  0  0  0 ]         [ 0 -i  0  0 ]         [ 0  1  0  0 ]         [-i  0  0  0 ]
//   [ 0  1  0  0 ]         [-i  0  0  0 ]         [-1  0  0  0 ]         [ 0  i  0  0 ]
//
//   gamma_5 = gamma_1 gamma_2 gamma_3 gamma_0 = diag(1, 1, -1, -1)
//           = -gamma_0 gamma_1 gamma_2 gamma_3
//
// Each row has one nonzero entry: (gamma_mu psi)_a = phase[mu][a] * psi_{column[mu][a]}.
struct GammaBasis {
  static constexpr int column[kDims][kSpins] = {
      {2, 3, 0, 1},
      {3, 2, 1, 0},
      {3, 2, 1, 0},
      {2, 3, 0, 1},
  };
  static constexpr Phase phase[kDims][kSpins] = {
      {Phase::plus_one, Phase::plus_one, Phase::plus_one, Phase::plus_one},
      {Phase::plus_i, Phase::plus_i, Phase::minus_i, Phase::minus_i},
      {Phase::minus_one, Phase::plus_one, Phase::plus_one, Phase::minus_one},
      {Phase::plus_i, Phase::minus_i, Phase::minus_i, Phase::plus_i},
  };
  static constexpr int gamma5_sign[kSpins] = {1, 1, -1, -1};
};

using DenseSpinMatrix = std::array<std::array<Cplx<double>, kSpins>, kSpins>;

inline DenseSpinMatrix gamma_dense(int mu) {
  DenseSpinMatrix g{};
  for (int a = 0; a < kSpins; ++a) g[a][GammaBasis::column[mu][a]] = phase_value(GammaBasis::phase[mu][a]);
  return g;
}

inline DenseSpinMatrix gamma5_dense() {
  DenseSpinMatrix g{};
  for (int a = 0; a < kSpins; ++a) g[a][a] = Cplx<double>(GammaBasis::gamma5_sign[a], 0.0);
  return g;
}

// Spin matrix applied to the neighbour in direction d: forward -> (1 - gamma_mu),
// backward -> (1 + gamma_mu).
inline DenseSpinMatrix projector_dense(Direction d) {
  const DenseSpinMatrix g = gamma_dense(d.axis);
  const double sign = d.is_forward() ? -1.0 : 1.0;
  DenseSpinMatrix p{};
  for (int a = 0; a < kSpins; ++a)
    for (int b = 0; b < kSpins; ++b)
      p[a][b] = Cplx<double>((a == b ? 1.0 : 0.0) + sign * g[a][b].re, sign * g[a][b].im);
  return p;
}

// Phase relating component a of (1 + sign*gamma_mu) psi to component column[mu][a].
constexpr Phase projector_phase(Direction d, int a) {
  const Phase p = GammaBasis::phase[d.axis][a];
  return d.is_forward() ? negate(p) : p;
}

// Upper doublet of (1 -/+ gamma_mu) s: 2 color-vector add/sub, 12 real operations.
template <class Real>
HalfSpinor<Real> spin_project(Direction d, const Spinor<Real>& s) {
  HalfSpinor<Real> h;
  for (int a = 0; a < 2; ++a) {
    const ColorVector<Real>& other = s[GammaBasis::column[d.axis][a]];
    const Phase p = GammaBasis::phase[d.axis][a];
    for (int c = 0; c < kColors; ++c) {
      const Cplx<Real> t = apply_phase(p, other[c]);
      h[a][c] = d.is_forward() ? s[a][c] - t : s[a][c] + t;
    }
  }
  return h;
}

// Full spinor from its upper doublet. The projected spinor v satisfies
// gamma_mu v = -/+ v, which fixes the lower components by phase alone.
template <class Real>
Spinor<Real> expand(Direction d, const HalfSpinor<Real>& h) {
  Spinor<Real> s;
  s[0] = h[0];
  s[1] = h[1];
  for (int a = 2; a < kSpins; ++a) s[a] = apply_phase(projector_phase(d, a), h[GammaBasis::column[d.axis][a]]);
  return s;
}

template <class Real>
Spinor<Real> project(Direction d, const Spinor<Real>& s) {
  return expand(d, spin_project(d, s));
}

template <class Real>
Spinor<Real> apply_gamma5(const Spinor<Real>& s) {
  Spinor<Real> r = s;
  for (int a = 0; a < kSpins; ++a)
    if (GammaBasis::gamma5_sign[a] < 0)
      for (int c = 0; c < kColors; ++c) r[a][c] = -r[a][c];
  return r;
}

}  // namespace lqcd
