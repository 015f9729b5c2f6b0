#pragma once

// Field-level linear algebra. Reductions are carried out in double regardless
// of the field precision: each site contributes one partial sum (fixed
// component order), and the site partials are combined by a pairwise tree
// that splits a range of n > 1 terms at the largest power of two below n.
// The tree shape depends only on the volume, so results are bitwise
// reproducible for any thread count.

#include <bit>
#include <cmath>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include "lqcd/algebra.hpp"
#include "lqcd/fields.hpp"

namespace lqcd {

template <class T>
T pairwise_sum(std::span<const T> x) {
  if (x.empty()) return T{};
  if (x.size() == 1) return x[0];
  const std::size_t split = std::bit_floor(x.size() - 1);
  return pairwise_sum(x.first(split)) + pairwise_sum(x.subspan(split));
}

namespace detail {

template <class Real>
Cplx<double> site_dot(const Spinor<Real>& x, const Spinor<Real>& y) {
  Cplx<double> s;
  for (int a = 0; a < kSpins; ++a)
    for (int c = 0; c < kColors; ++c) s += conj(cplx_cast<double>(x[a][c])) * cplx_cast<double>(y[a][c]);
  return s;
}

template <class Real>
double site_norm2(const Spinor<Real>& x) {
  double s = 0.0;
  for (int a = 0; a < kSpins; ++a)
    for (int c = 0; c < kColors; ++c) s += norm2(cplx_cast<double>(x[a][c]));
  return s;
}

template <class Real>
Real scalar_cast(double a) {
  return static_cast<Real>(a);
}

}  // namespace detail

// sum_n conj(x_n) . y_n
template <class Real>
Cplx<double> dot(const SpinorField<Real>& x, const SpinorField<Real>& y) {
  require_same_geometry(x.geometry(), y.geometry(), "dot");
  std::vector<Cplx<double>> partial(x.volume());
  const auto n = static_cast<std::ptrdiff_t>(x.volume());
#pragma omp parallel for
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto s = static_cast<SiteIndex>(i);
    partial[s] = detail::site_dot(x[s], y[s]);
  }
  return pairwise_sum(std::span<const Cplx<double>>(partial));
}

template <class Real>
double norm2(const SpinorField<Real>& x) {
  std::vector<double> partial(x.volume());
  const auto n = static_cast<std::ptrdiff_t>(x.volume());
#pragma omp parallel for
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto s = static_cast<SiteIndex>(i);
    partial[s] = detail::site_norm2(x[s]);
  }
  return pairwise_sum(std::span<const double>(partial));
}

template <class Real>
double norm(const SpinorField<Real>& x) {
  return std::sqrt(norm2(x));
}

// y <- y + a x, a real (double) or complex (Cplx<double>); a is rounded to the
// field precision first.
template <class Real, class Scalar>
void axpy(const Scalar& a, const SpinorField<Real>& x, SpinorField<Real>& y) {
  require_same_geometry(x.geometry(), y.geometry(), "axpy");
  const auto n = static_cast<std::ptrdiff_t>(x.volume());
  if constexpr (std::is_same_v<Scalar, Cplx<double>>) {
    const Cplx<Real> ar = cplx_cast<Real>(a);
#pragma omp parallel for
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto s = static_cast<SiteIndex>(i);
      for (int sp = 0; sp < kSpins; ++sp)
        for (int c = 0; c < kColors; ++c) y[s][sp][c] += ar * x[s][sp][c];
    }
  } else {
    const Real ar = detail::scalar_cast<Real>(a);
#pragma omp parallel for
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto s = static_cast<SiteIndex>(i);
      for (int sp = 0; sp < kSpins; ++sp)
        for (int c = 0; c < kColors; ++c) y[s][sp][c] += ar * x[s][sp][c];
    }
  }
}

// Returning form: y + a x.
template <class Real, class Scalar>
SpinorField<Real> axpy_copy(const Scalar& a, const SpinorField<Real>& x, const SpinorField<Real>& y) {
  SpinorField<Real> out = y;
  axpy(a, x, out);
  return out;
}

// y <- x + b y
template <class Real>
void xpay(const SpinorField<Real>& x, double b, SpinorField<Real>& y) {
  require_same_geometry(x.geometry(), y.geometry(), "xpay");
  const Real br = detail::scalar_cast<Real>(b);
  const auto n = static_cast<std::ptrdiff_t>(x.volume());
#pragma omp parallel for
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto s = static_cast<SiteIndex>(i);
    for (int sp = 0; sp < kSpins; ++sp)
      for (int c = 0; c < kColors; ++c) y[s][sp][c] = x[s][sp][c] + br * y[s][sp][c];
  }
}

template <class Real>
void scale(double a, SpinorField<Real>& x) {
  const Real ar = detail::scalar_cast<Real>(a);
  for (auto& site : x.sites()) site = ar * site;
}

template <class Real>
void set_zero(SpinorField<Real>& x) {
  for (auto& site : x.sites()) site = Spinor<Real>{};
}

template <class Real>
void apply_gamma5(SpinorField<Real>& x) {
  for (auto& site : x.sites()) site = apply_gamma5(site);
}

// max over all real components of |x - y|
template <class Real>
double max_abs_diff(const SpinorField<Real>& x, const SpinorField<Real>& y) {
  require_same_geometry(x.geometry(), y.geometry(), "max_abs_diff");
  double worst = 0.0;
  for (SiteIndex s = 0; s < x.volume(); ++s)
    for (int a = 0; a < kSpins; ++a)
      for (int c = 0; c < kColors; ++c) {
        const auto d = cplx_cast<double>(x[s][a][c]) - cplx_cast<double>(y[s][a][c]);
        worst = std::max({worst, std::abs(d.re), std::abs(d.im)});
      }
  return worst;
}

// ||x - y|| in double
template <class Real>
double distance(const SpinorField<Real>& x, const SpinorField<Real>& y) {
  SpinorField<Real> d = x;
  axpy(-1.0, y, d);
  return norm(d);
}

}  // namespace lqcd
