#include "lqcd/dslash.hpp"

#include <complex>

#include "lqcd/dense.hpp"

namespace lqcd {

FlopReport flop_count(DiracKind kind, std::size_t volume, bool compressed) {
  const std::uint64_t v = volume;
  const std::uint64_t passes = kind == DiracKind::DdagD ? 2 : 1;
  // gamma5 is applied twice per D^dagger pass
  const std::uint64_t gamma5_passes = kind == DiracKind::D ? 0 : 2;
  FlopReport r;
  r.reconstruction = compressed ? passes * v * 8 * reconstruction_flops() : 0;
  r.stage2 = passes * v * kStage2Flops;
  r.stage3 = passes * v * kStage3Flops;
  r.stage4 = passes * v * kStage4Flops;
  r.gamma5 = gamma5_passes * v * kGamma5Flops;
  return r;
}

namespace {

std::complex<double> to_std(const Cplx<double>& z) { return {z.re, z.im}; }

}  // namespace

Eigen::MatrixXcd apply_dense(const GaugeField<double>& g, const WilsonParams& p) {
  const Geometry& geom = g.geometry();
  const std::size_t volume = geom.volume();
  if (volume > kDenseVolumeLimit) {
    throw GeometryError("apply_dense: volume " + std::to_string(volume) + " exceeds the oracle limit");
  }
  const auto dim = static_cast<Eigen::Index>(volume * kSpins * kColors);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  const double half = 0.5 * p.hop_sign;
  for (SiteIndex n = 0; n < volume; ++n) {
    for (int a = 0; a < kSpins; ++a)
      for (int c = 0; c < kColors; ++c) m(dense_index(n, a, c), dense_index(n, a, c)) += p.mass + 4.0;

    for (const Direction d : all_directions()) {
      const SiteIndex nb = geom.neighbor(n, d);
      const DenseSpinMatrix proj = projector_dense(d);
      // forward: U_mu(n); backward: U_mu(n - mu)^dagger, i.e. conj(U(B, A))
      const ColorMatrix<double>& u = d.is_forward() ? g.link(n, d.axis) : g.link(nb, d.axis);
      for (int a = 0; a < kSpins; ++a)
        for (int b = 0; b < kSpins; ++b) {
          const std::complex<double> pab = to_std(proj[a][b]);
          if (pab == 0.0) continue;
          for (int A = 0; A < kColors; ++A)
            for (int B = 0; B < kColors; ++B) {
              const std::complex<double> uab = d.is_forward() ? to_std(u(A, B)) : std::conj(to_std(u(B, A)));
              m(dense_index(n, a, A), dense_index(nb, b, B)) += half * uab * pab;
            }
        }
    }
  }
  return m;
}

Eigen::VectorXcd to_vector(const SpinorField<double>& x) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(x.volume() * kSpins * kColors));
  for (SiteIndex n = 0; n < x.volume(); ++n)
    for (int a = 0; a < kSpins; ++a)
      for (int c = 0; c < kColors; ++c) v(dense_index(n, a, c)) = to_std(x[n][a][c]);
  return v;
}

SpinorField<double> from_vector(GeometryPtr geom, const Eigen::VectorXcd& v) {
  SpinorField<double> x(std::move(geom));
  if (v.size() != static_cast<Eigen::Index>(x.volume() * kSpins * kColors)) {
    throw GeometryError("from_vector: length does not match geometry");
  }
  for (SiteIndex n = 0; n < x.volume(); ++n)
    for (int a = 0; a < kSpins; ++a)
      for (int c = 0; c < kColors; ++c) {
        const auto z = v(dense_index(n, a, c));
        x[n][a][c] = {z.real(), z.imag()};
      }
  return x;
}

}  // namespace lqcd
