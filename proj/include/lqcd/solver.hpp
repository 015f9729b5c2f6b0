#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lqcd/dslash.hpp"
#include "lqcd/fields.hpp"

namespace lqcd {

struct SolverConfig {
  // Stop once ||eta - D^dagger D psi|| < r_min * ||eta||.
  double r_min = 1e-9;
  // Low-precision CG steps per outer correction.
  int inner_k = 16;
  int max_outer = 100;
  // Iteration cap for cg_reference.
  int max_iterations = 10000;
  WilsonParams wilson;
  // Run the low-precision inner loop on 10-word links.
  bool compressed = false;

  // Throws SolverError on r_min <= 0, inner_k < 1, max_outer < 1 or max_iterations < 1.
  void validate() const;
};

// Direction recycling (p_0 from the previous p_k) assumes the inner residual
// still tracks the true one, i.e. s_l sqrt(rho_k) ~ s_{l+1}. Once the single
// precision loop runs into its rounding floor rho_k collapses, beta_0 blows
// up and the outer loop stalls; below this ratio the next pass restarts.
inline constexpr double kRecycleConsistency = 0.5;

struct OuterRecord {
  int l = 0;
  double s_high = 0.0;             // ||r_l^high||, recomputed from psi_l
  double relative_residual = 0.0;  // s_high / ||eta||
  int inner_iterations = 0;
  std::uint64_t high_applies = 0;  // cumulative D^dagger D applications, double
  std::uint64_t low_applies = 0;   // cumulative D^dagger D applications, single
  bool restarted = false;          // inner loop started from p_0 = r_0
};

struct SolveReport {
  std::string algorithm;
  std::vector<OuterRecord> outer;
  std::vector<double> inner_rho;
  std::uint64_t high_applies = 0;
  std::uint64_t low_applies = 0;
  int outer_iterations = 0;
  int breakdowns = 0;
  int stale_restarts = 0;  // recycling skipped because rho_k lost track of s_high
  double eta_norm = 0.0;
  // ||eta - D^dagger D psi|| / ||eta|| from a fresh double-precision apply.
  double true_residual = 0.0;
  bool converged = false;
};

struct SolveResult {
  SpinorField<double> solution;
  SolveReport report;
};

// Plain CG on D^dagger D psi = eta, double precision throughout. Throws
// SolverError if p.q <= 0 (the operator lost positive definiteness). Hitting
// max_iterations returns with converged = false.
SolveResult cg_reference(const GaugeField<double>& gauge, const SpinorField<double>& eta, const SolverConfig& cfg);

// Mixed-precision defect correction: k single-precision CG steps on the
// normalised residual between double-precision residual recomputations, with
// the search direction carried across outer iterations.
SolveResult residual_guided_cg(const GaugeField<double>& gauge, const SpinorField<double>& eta,
                               const SolverConfig& cfg);

double true_residual(const GaugeField<double>& gauge, const SpinorField<double>& psi, const SpinorField<double>& eta,
                     const WilsonParams& p);

}  // namespace lqcd
