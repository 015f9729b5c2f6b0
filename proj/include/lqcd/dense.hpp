#pragma once

// Explicit complex (12V) x (12V) Wilson matrix, assembled entry by entry from the
// operator definition with dense gamma matrices. Test oracle only.

#include <Eigen/Dense>

#include "lqcd/dslash.hpp"

namespace lqcd {

inline constexpr std::size_t kDenseVolumeLimit = 4096;

// Row/column index of component (site, spin, color): matches SpinorField layout.
constexpr Eigen::Index dense_index(SiteIndex n, int spin, int color) {
  return static_cast<Eigen::Index>((n * kSpins + static_cast<std::size_t>(spin)) * kColors +
                                   static_cast<std::size_t>(color));
}

// Throws GeometryError when the volume exceeds kDenseVolumeLimit.
Eigen::MatrixXcd apply_dense(const GaugeField<double>& g, const WilsonParams& p);

Eigen::VectorXcd to_vector(const SpinorField<double>& x);
SpinorField<double> from_vector(GeometryPtr geom, const Eigen::VectorXcd& v);

}  // namespace lqcd
