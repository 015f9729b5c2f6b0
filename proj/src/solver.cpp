#include "lqcd/solver.hpp"

#include <cmath>
#include <optional>

#include "lqcd/blas.hpp"

namespace lqcd {

void SolverConfig::validate() const {
  if (!(r_min > 0.0)) throw SolverError("r_min must be positive");
  if (inner_k < 1) throw SolverError("inner k must be >= 1");
  if (max_outer < 1) throw SolverError("max_outer must be >= 1");
  if (max_iterations < 1) throw SolverError("max_iterations must be >= 1");
}

double true_residual(const GaugeField<double>& gauge, const SpinorField<double>& psi, const SpinorField<double>& eta,
                     const WilsonParams& p) {
  const double eta_norm = norm(eta);
  if (eta_norm == 0.0) throw SolverError("true_residual: right-hand side is zero");
  SpinorField<double> r = eta;
  axpy(-1.0, apply(DiracKind::DdagD, gauge, psi, p), r);
  return norm(r) / eta_norm;
}

namespace {

double checked_eta_norm(const GaugeField<double>& gauge, const SpinorField<double>& eta) {
  require_same_geometry(gauge.geometry(), eta.geometry(), "solver");
  const double n = norm(eta);
  if (n == 0.0) throw SolverError("right-hand side is zero");
  return n;
}

}  // namespace

SolveResult cg_reference(const GaugeField<double>& gauge, const SpinorField<double>& eta, const SolverConfig& cfg) {
  cfg.validate();
  SolveReport report;
  report.algorithm = "cg";
  report.eta_norm = checked_eta_norm(gauge, eta);
  const double target = cfg.r_min * report.eta_norm;

  SpinorField<double> x(eta.geometry_ptr());
  SpinorField<double> r = eta;
  SpinorField<double> p = eta;
  SpinorField<double> q(eta.geometry_ptr());
  double rho = norm2(r);
  report.outer.push_back({0, std::sqrt(rho), std::sqrt(rho) / report.eta_norm, 0, 0, 0, false});

  for (int it = 1; it <= cfg.max_iterations && std::sqrt(rho) > target; ++it) {
    apply(DiracKind::DdagD, gauge, p, q, cfg.wilson);
    ++report.high_applies;
    const double pq = dot(p, q).re;
    if (!(pq > 0.0)) throw SolverError("cg: breakdown, p.q = " + std::to_string(pq));
    const double alpha = rho / pq;
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    const double rho_next = norm2(r);
    xpay(r, rho_next / rho, p);
    rho = rho_next;
    report.inner_rho.push_back(rho);
    report.outer.push_back({it, std::sqrt(rho), std::sqrt(rho) / report.eta_norm, 1, report.high_applies, 0, false});
  }
  report.outer_iterations = static_cast<int>(report.outer.size()) - 1;
  report.converged = std::sqrt(rho) <= target;
  report.true_residual = true_residual(gauge, x, eta, cfg.wilson);
  return {std::move(x), std::move(report)};
}

namespace {

template <class LowGauge>
SolveResult run_residual_guided(const GaugeField<double>& gauge, const LowGauge& low_gauge,
                                const SpinorField<double>& eta, const SolverConfig& cfg, SolveReport report) {
  const GeometryPtr& geom = eta.geometry_ptr();
  const double target = cfg.r_min * report.eta_norm;

  // psi = 0, r = eta, s = ||r|| in double
  SpinorField<double> psi_high(geom);
  SpinorField<double> r_high = eta;
  axpy(-1.0, apply(DiracKind::DdagD, gauge, psi_high, cfg.wilson), r_high);
  ++report.high_applies;
  double s = norm(r_high);
  report.outer.push_back({0, s, s / report.eta_norm, 0, report.high_applies, 0, false});

  SpinorField<float> r(geom), x(geom), p(geom), q(geom);
  std::optional<SpinorField<float>> p_prev;
  double rho_prev = 0.0;
  double s_prev = 0.0;

  int l = 0;
  while (s >= target && l < cfg.max_outer) {
    // r_0 <- r^high / s^high
    {
      SpinorField<double> scaled = r_high;
      scale(1.0 / s, scaled);
      r = convert<float>(scaled);
    }
    set_zero(x);
    double rho = norm2(r);

    // Recycle the previous direction; the first pass (and any pass after a restart) starts
    // from p_0 = r_0.
    const bool restarted = !p_prev.has_value();
    if (restarted) {
      p = r;
    } else {
      p = *p_prev;
      const Cplx<double> overlap = dot(r, p);
      axpy(-overlap, r, p);
      const double beta0 = s / (s_prev * rho_prev);
      xpay(r, beta0, p);
    }

    // k low-precision CG steps
    int n = 0;
    bool breakdown = false;
    while (n < cfg.inner_k) {
      apply(DiracKind::DdagD, low_gauge, p, q, cfg.wilson);
      ++report.low_applies;
      const double pq = dot(p, q).re;
      if (!(pq > 0.0) || !std::isfinite(pq)) {
        breakdown = true;
        break;
      }
      const double alpha = rho / pq;
      axpy(alpha, p, x);
      axpy(-alpha, q, r);
      const double rho_next = norm2(r);
      report.inner_rho.push_back(rho_next);
      xpay(r, rho_next / rho, p);
      rho = rho_next;
      ++n;
    }

    // psi^high += s^high x; x already holds the last alpha p update.
    axpy(s, convert<double>(x), psi_high);

    // fresh high-precision residual
    r_high = eta;
    axpy(-1.0, apply(DiracKind::DdagD, gauge, psi_high, cfg.wilson), r_high);
    ++report.high_applies;
    s_prev = s;
    s = norm(r_high);
    ++l;

    if (breakdown || n == 0) {
      ++report.breakdowns;
      p_prev.reset();
    } else if (s_prev * std::sqrt(rho) < kRecycleConsistency * s) {
      ++report.stale_restarts;
      p_prev.reset();
    } else {
      p_prev = p;
      rho_prev = rho;
    }
    report.outer.push_back({l, s, s / report.eta_norm, n, report.high_applies, report.low_applies, restarted});
  }

  report.outer_iterations = l;
  report.converged = s < target;
  report.true_residual = true_residual(gauge, psi_high, eta, cfg.wilson);
  return {std::move(psi_high), std::move(report)};
}

}  // namespace

SolveResult residual_guided_cg(const GaugeField<double>& gauge, const SpinorField<double>& eta,
                               const SolverConfig& cfg) {
  cfg.validate();
  SolveReport report;
  report.algorithm = "rgcg";
  report.eta_norm = checked_eta_norm(gauge, eta);
  const GaugeField<float> low = convert<float>(gauge);
  if (cfg.compressed) {
    return run_residual_guided(gauge, CompressedGaugeField<float>(low), eta, cfg, std::move(report));
  }
  return run_residual_guided(gauge, low, eta, cfg, std::move(report));
}

}  // namespace lqcd
