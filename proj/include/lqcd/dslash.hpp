#pragma once

// Wilson Dirac operator
//
//   (D psi)(n) = (m + 4) psi(n)
//              + (s/2) sum_mu [ U_mu(n) (1 - gamma_mu) psi(n + mu)
//                             + U_mu(n - mu)^dagger (1 + gamma_mu) psi(n - mu) ]
//
// with hopping sign s = -1 by default (the free constant mode is then a zero
// mode at m = 0). Boundaries are periodic in all four directions.
//
// One site evaluation (a "stencil") runs in four stages:
//   1. gather 8 links and 9 spinors (decode compressed links here)
//   2. spin projection of the 8 neighbours to half spinors      8 x 12   =   96
//   3. 16 SU(3) mat-vecs, each product scaled by s/2             8 x 144  = 1152
//   4. (m + 4) psi(n) plus the 8 expanded hopping terms          24 + 192 =  216
// for 1464 real operations per site. The lower spin doublet of each hopping
// term is a phase permutation of the upper one and costs nothing.

#include <array>
#include <cstddef>
#include <cstdint>
#include <type_traits>
#include <utility>

#include "lqcd/algebra.hpp"
#include "lqcd/blas.hpp"
#include "lqcd/fields.hpp"
#include "lqcd/su3_compress.hpp"

namespace lqcd {

inline constexpr double kDefaultHopSign = -1.0;

struct WilsonParams {
  double mass = 0.1;
  double hop_sign = kDefaultHopSign;
};

enum class DiracKind { D, Ddag, DdagD };

inline constexpr std::uint64_t kStage2Flops = 8 * (2 * kColors * 2);
inline constexpr std::uint64_t kStage3Flops = 8 * 2 * (kMatVecFlops + 2 * kColors);
inline constexpr std::uint64_t kStage4Flops = 24 + 8 * 24;
inline constexpr std::uint64_t kStencilFlops = kStage2Flops + kStage3Flops + kStage4Flops;
static_assert(kStage3Flops == 1152);
static_assert(kStencilFlops == 1464);

// gamma_5 only flips signs.
inline constexpr std::uint64_t kGamma5Flops = 0;

template <class Real, class Link = ColorMatrix<Real>>
struct StencilInputs {
  static constexpr std::size_t kWordsUncompressed = 8 * kLinkWords + 9 * Spinor<Real>::kRealWords;
  static constexpr std::size_t kWordsCompressed = 8 * kCompressedLinkWords + 9 * Spinor<Real>::kRealWords;

  std::array<Link, kDims> forward_links{};   // U_mu(n)
  std::array<Link, kDims> backward_links{};  // U_mu(n - mu)
  Spinor<Real> center{};
  std::array<Spinor<Real>, kDirections> neighbors{};  // psi(n + d), by Direction::index()
  double mass = 0.0;
};
static_assert(StencilInputs<double>::kWordsUncompressed == 360);
static_assert(StencilInputs<double>::kWordsCompressed == 296);

namespace stencil_stage {

template <class Real>
const ColorMatrix<Real>& decode(const ColorMatrix<Real>& u) {
  return u;
}
template <class Real>
ColorMatrix<Real> decode(const StoredLink<Real>& s) {
  return unpack_link(s);
}

template <class Real>
std::array<HalfSpinor<Real>, kDirections> project(const std::array<Spinor<Real>, kDirections>& neighbors) {
  std::array<HalfSpinor<Real>, kDirections> h;
  for (const Direction d : all_directions()) h[d.index()] = spin_project(d, neighbors[d.index()]);
  return h;
}

template <class Real>
std::array<HalfSpinor<Real>, kDirections> multiply(const std::array<ColorMatrix<Real>, kDims>& forward,
                                                   const std::array<ColorMatrix<Real>, kDims>& backward,
                                                   const std::array<HalfSpinor<Real>, kDirections>& h, Real hop) {
  std::array<HalfSpinor<Real>, kDirections> out;
  for (const Direction d : all_directions()) {
    const int i = d.index();
    for (int a = 0; a < 2; ++a) {
      const ColorVector<Real> v =
          d.is_forward() ? mat_vec(forward[d.axis], h[i][a]) : mat_dag_vec(backward[d.axis], h[i][a]);
      out[i][a] = hop * v;
    }
  }
  return out;
}

template <class Real>
Spinor<Real> accumulate(const Spinor<Real>& center, Real diag, const std::array<HalfSpinor<Real>, kDirections>& h) {
  Spinor<Real> out = diag * center;
  for (const Direction d : all_directions()) out += expand(d, h[d.index()]);
  return out;
}

}  // namespace stencil_stage

template <class Real, class Link>
Spinor<Real> stencil(const StencilInputs<Real, Link>& in, double hop_sign = kDefaultHopSign) {
  std::array<ColorMatrix<Real>, kDims> fwd, bwd;
  for (int mu = 0; mu < kDims; ++mu) {
    fwd[mu] = stencil_stage::decode(in.forward_links[mu]);
    bwd[mu] = stencil_stage::decode(in.backward_links[mu]);
  }
  const auto projected = stencil_stage::project(in.neighbors);
  const auto hopped = stencil_stage::multiply(fwd, bwd, projected, static_cast<Real>(0.5 * hop_sign));
  return stencil_stage::accumulate(in.center, static_cast<Real>(in.mass + 4.0), hopped);
}

namespace detail {

template <class Real>
const ColorMatrix<Real>& fetch_link(const GaugeField<Real>& g, SiteIndex n, int mu) {
  return g.link(n, mu);
}
template <class Real>
const StoredLink<Real>& fetch_link(const CompressedGaugeField<Real>& g, SiteIndex n, int mu) {
  return g.stored(n, mu);
}

template <class Gauge>
using link_t = std::remove_cvref_t<decltype(fetch_link(std::declval<const Gauge&>(), SiteIndex{}, 0))>;

template <class Real, class Gauge>
StencilInputs<Real, link_t<Gauge>> gather(const Gauge& g, const SpinorField<Real>& in, SiteIndex n, double mass) {
  const Geometry& geom = g.geometry();
  StencilInputs<Real, link_t<Gauge>> s;
  s.mass = mass;
  s.center = in[n];
  for (int mu = 0; mu < kDims; ++mu) {
    s.forward_links[mu] = fetch_link(g, n, mu);
    s.backward_links[mu] = fetch_link(g, geom.neighbor(n, {mu, Orientation::backward}), mu);
  }
  for (const Direction d : all_directions()) s.neighbors[d.index()] = in[geom.neighbor(n, d)];
  return s;
}

template <class Real, class Gauge>
void apply_wilson(const Gauge& g, const SpinorField<Real>& in, SpinorField<Real>& out, const WilsonParams& p) {
  require_same_geometry(g.geometry(), in.geometry(), "dslash input");
  require_same_geometry(g.geometry(), out.geometry(), "dslash output");
  if (&in == &out) throw GeometryError("dslash: input and output must be distinct fields");
  const auto volume = static_cast<std::ptrdiff_t>(in.volume());
#pragma omp parallel for
  for (std::ptrdiff_t i = 0; i < volume; ++i) {
    const auto n = static_cast<SiteIndex>(i);
    out[n] = stencil(gather(g, in, n, p.mass), p.hop_sign);
  }
}

}  // namespace detail

// out <- K in. D^dagger = gamma5 D gamma5; D^dagger D is two passes.
// Gauge is GaugeField<Real> or CompressedGaugeField<Real>.
template <class Real, class Gauge>
void apply(DiracKind kind, const Gauge& g, const SpinorField<Real>& in, SpinorField<Real>& out,
           const WilsonParams& p) {
  static_assert(std::is_same_v<typename Gauge::real_type, Real>, "gauge and spinor precision must match");
  switch (kind) {
    case DiracKind::D:
      detail::apply_wilson(g, in, out, p);
      return;
    case DiracKind::Ddag: {
      SpinorField<Real> tmp = in;
      apply_gamma5(tmp);
      detail::apply_wilson(g, tmp, out, p);
      apply_gamma5(out);
      return;
    }
    case DiracKind::DdagD: {
      SpinorField<Real> tmp(in.geometry_ptr());
      detail::apply_wilson(g, in, tmp, p);
      apply(DiracKind::Ddag, g, tmp, out, p);
      return;
    }
  }
}

template <class Real, class Gauge>
SpinorField<Real> apply(DiracKind kind, const Gauge& g, const SpinorField<Real>& in, const WilsonParams& p) {
  SpinorField<Real> out(in.geometry_ptr());
  apply(kind, g, in, out, p);
  return out;
}

struct FlopReport {
  std::uint64_t reconstruction = 0;  // stage 1, compressed links only
  std::uint64_t stage2 = 0;
  std::uint64_t stage3 = 0;
  std::uint64_t stage4 = 0;
  std::uint64_t gamma5 = 0;

  std::uint64_t total() const { return reconstruction + stage2 + stage3 + stage4 + gamma5; }
  friend bool operator==(const FlopReport&, const FlopReport&) = default;
};

// Exact operation count for one application of `kind` on `volume` sites.
// With compressed links every stencil reconstructs 8 links.
FlopReport flop_count(DiracKind kind, std::size_t volume, bool compressed);

}  // namespace lqcd
