#include <random>

#include "doctest.h"
#include "lqcd/algebra.hpp"
#include "support.hpp"

using namespace lqcd;
using lqcd::test::cd;
using lqcd::test::CountingReal;

namespace {

using M4 = std::array<std::array<cd, 4>, 4>;
const cd I(0, 1);

// DeGrand-Rossi matrices written out by hand; index 0 is time.
const M4 kGamma[4] = {
    {{{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}}},
    {{{0, 0, 0, I}, {0, 0, I, 0}, {0, -I, 0, 0}, {-I, 0, 0, 0}}},
    {{{0, 0, 0, -1}, {0, 0, 1, 0}, {0, 1, 0, 0}, {-1, 0, 0, 0}}},
    {{{0, 0, I, 0}, {0, 0, 0, -I}, {-I, 0, 0, 0}, {0, I, 0, 0}}},
};

M4 mul(const M4& a, const M4& b) {
  M4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

M4 eye(cd s = 1) {
  M4 r{};
  for (int i = 0; i < 4; ++i) r[i][i] = s;
  return r;
}

M4 from(const DenseSpinMatrix& m) {
  M4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = {m[i][j].re, m[i][j].im};
  return r;
}

double dist(const M4& a, const M4& b) {
  double w = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) w = std::max(w, std::abs(a[i][j] - b[i][j]));
  return w;
}

Spinor<double> dense_apply(const M4& m, const Spinor<double>& s) {
  Spinor<double> r;
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 3; ++c) {
      cd acc = 0;
      for (int b = 0; b < 4; ++b) acc += m[a][b] * cd(s[b][c].re, s[b][c].im);
      r[a][c] = {acc.real(), acc.imag()};
    }
  return r;
}

double dist(const Spinor<double>& a, const Spinor<double>& b) {
  double w = 0;
  for (int s = 0; s < 4; ++s)
    for (int c = 0; c < 3; ++c)
      w = std::max({w, std::abs(a[s][c].re - b[s][c].re), std::abs(a[s][c].im - b[s][c].im)});
  return w;
}

}  // namespace

TEST_CASE("gamma table matches the literal matrices") {
  for (int mu = 0; mu < 4; ++mu) CHECK(dist(from(gamma_dense(mu)), kGamma[mu]) == 0.0);
  const M4 g5 = mul(mul(mul(kGamma[1], kGamma[2]), kGamma[3]), kGamma[0]);
  CHECK(dist(from(gamma5_dense()), g5) == 0.0);
  M4 minus_g0123 = mul(mul(mul(kGamma[0], kGamma[1]), kGamma[2]), kGamma[3]);
  for (auto& row : minus_g0123)
    for (auto& x : row) x = -x;
  CHECK(dist(g5, minus_g0123) == 0.0);
}

TEST_CASE("Clifford algebra, hermiticity, gamma5 anticommutation") {
  const M4 g5 = from(gamma5_dense());
  for (int mu = 0; mu < 4; ++mu) {
    const M4 gm = from(gamma_dense(mu));
    for (int nu = 0; nu < 4; ++nu) {
      const M4 gn = from(gamma_dense(nu));
      M4 anti = mul(gm, gn);
      const M4 ba = mul(gn, gm);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) anti[i][j] += ba[i][j];
      CHECK(dist(anti, eye(mu == nu ? 2.0 : 0.0)) == 0.0);
    }
    M4 dag{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) dag[i][j] = std::conj(gm[j][i]);
    CHECK(dist(dag, gm) == 0.0);
    M4 conj5 = mul(mul(g5, gm), g5);
    for (auto& row : conj5)
      for (auto& x : row) x = -x;
    CHECK(dist(conj5, gm) == 0.0);
  }
}

TEST_CASE("projector identities") {
  for (int mu = 0; mu < 4; ++mu) {
    const M4 pp = from(projector_dense({mu, Orientation::backward}));  // 1 + gamma
    const M4 pm = from(projector_dense({mu, Orientation::forward}));   // 1 - gamma
    M4 sum{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) sum[i][j] = pp[i][j] + pm[i][j];
    CHECK(dist(sum, eye(2.0)) == 0.0);
    CHECK(dist(mul(pp, pm), eye(0.0)) == 0.0);
    M4 twice = pp;
    for (auto& row : twice)
      for (auto& x : row) x *= 2.0;
    CHECK(dist(mul(pp, pp), twice) == 0.0);
  }
}

TEST_CASE("two-component projection matches dense multiply") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Spinor<double> s = test::random_spinor_site(gen);
    for (const Direction d : all_directions()) {
      const M4 p = from(projector_dense(d));
      const M4 lit = [&] {
        M4 r = eye();
        const double sign = d.is_forward() ? -1.0 : 1.0;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) r[i][j] += sign * kGamma[d.axis][i][j];
        return r;
      }();
      REQUIRE(dist(p, lit) == 0.0);
      const Spinor<double> fast = project(d, s);
      REQUIRE(dist(fast, dense_apply(lit, s)) <= 1e-12);
      // P^2 = 2P
      const Spinor<double> twice = project(d, fast);
      REQUIRE(dist(twice, 2.0 * fast) <= 1e-12);
      // P+ s + P- s = 2 s
      Spinor<double> both = fast;
      both += project(d.reversed(), s);
      REQUIRE(dist(both, 2.0 * s) <= 1e-12);
    }
    REQUIRE(dist(apply_gamma5(s), dense_apply(from(gamma5_dense()), s)) == 0.0);
  }
}

TEST_CASE("mat_vec and mat_dag_vec against triple loops") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> n01;
  const ColorVector<double> e0{{Cplx<double>(1, 0), {}, {}}};
  ColorMatrix<double> di;
  for (int i = 0; i < 3; ++i) di(i, i) = {0, 1};
  const auto r = mat_vec(di, e0);
  CHECK(r[0] == Cplx<double>(0, 1));
  CHECK(r[1] == Cplx<double>(0, 0));

  for (int trial = 0; trial < 100; ++trial) {
    ColorMatrix<double> u;
    ColorVector<double> v;
    for (auto& x : u.m) x = {n01(gen), n01(gen)};
    for (auto& x : v.c) x = {n01(gen), n01(gen)};
    CHECK(mat_vec(ColorMatrix<double>::identity(), v) == v);
    CHECK(mat_dag_vec(ColorMatrix<double>::identity(), v) == v);
    const auto mv = mat_vec(u, v);
    const auto mdv = mat_dag_vec(u, v);
    for (int i = 0; i < 3; ++i) {
      cd a = 0, b = 0;
      for (int j = 0; j < 3; ++j) {
        a += test::to_std(u(i, j)) * test::to_std(v[j]);
        b += std::conj(test::to_std(u(j, i))) * test::to_std(v[j]);
      }
      REQUIRE(std::abs(test::to_std(mv[i]) - a) <= 1e-14 * (1 + std::abs(a)));
      REQUIRE(std::abs(test::to_std(mdv[i]) - b) <= 1e-14 * (1 + std::abs(b)));
    }
    const auto viaexplicit = mat_vec(dagger(u), v);
    for (int i = 0; i < 3; ++i) REQUIRE(std::abs(test::to_std(viaexplicit[i] - mdv[i])) <= 1e-14);
  }
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = test::haar_su3(gen);
    ColorVector<double> v;
    for (auto& x : v.c) x = {n01(gen), n01(gen)};
    const auto back = mat_dag_vec(u, mat_vec(u, v));
    for (int i = 0; i < 3; ++i) REQUIRE(std::abs(test::to_std(back[i] - v[i])) <= 1e-12);
  }
}

TEST_CASE("operation counts of the building blocks") {
  ColorMatrix<CountingReal> u;
  ColorVector<CountingReal> v;
  auto start = CountingReal::ops;
  (void)mat_vec(u, v);
  CHECK(test::ops_since(start) == kMatVecFlops);
  CHECK(kMatVecFlops == 66);
  start = CountingReal::ops;
  (void)mat_dag_vec(u, v);
  CHECK(test::ops_since(start) == 66);

  Spinor<CountingReal> s;
  for (const Direction d : all_directions()) {
    start = CountingReal::ops;
    const auto h = spin_project(d, s);
    CHECK(test::ops_since(start) == 12);
    start = CountingReal::ops;
    (void)expand(d, h);
    CHECK(test::ops_since(start) == 0);
  }
  start = CountingReal::ops;
  (void)apply_gamma5(s);
  CHECK(test::ops_since(start) == 0);

  const Cplx<CountingReal> a(1.0, 2.0), b(3.0, -1.0);
  start = CountingReal::ops;
  (void)(a / b);
  CHECK(test::ops_since(start) == 12);
  start = CountingReal::ops;
  (void)(a * b);
  CHECK(test::ops_since(start) == 6);
}

TEST_CASE("complex arithmetic") {
  const Cplx<double> a(1.5, -2.0), b(0.25, 3.0);
  const cd sa(1.5, -2.0), sb(0.25, 3.0);
  CHECK(std::abs(test::to_std(a * b) - sa * sb) < 1e-15);
  CHECK(std::abs(test::to_std(a / b) - sa / sb) < 1e-15);
  CHECK(std::abs(test::to_std(a - b) - (sa - sb)) == 0.0);
  CHECK(norm2(a) == std::norm(sa));
  for (Phase p : {Phase::plus_one, Phase::minus_one, Phase::plus_i, Phase::minus_i}) {
    CHECK(test::to_std(apply_phase(p, a)) == test::to_std(phase_value(p)) * sa);
    CHECK(test::to_std(phase_value(negate(p))) == -test::to_std(phase_value(p)));
  }
}

TEST_CASE("SU(3) checks") {
  std::mt19937_64 gen(3);
  const auto u = test::haar_su3(gen);
  CHECK(is_special_unitary(u, 1e-12));
  auto bad = u;
  bad(1, 1) = bad(1, 1) + Cplx<double>(1e-6, 0);
  CHECK_FALSE(is_special_unitary(bad, 1e-10));
  auto phase = u;
  for (int j = 0; j < 3; ++j) phase(0, j) = Cplx<double>(0, 1) * phase(0, j);  // det -> i
  CHECK(unitarity_deviation(phase) < 1e-12);
  CHECK_FALSE(is_special_unitary(phase, 1e-10));
  CHECK(su3_tolerance<double>() == 1e-10);
  CHECK(su3_tolerance<float>() == 1e-5);
}
