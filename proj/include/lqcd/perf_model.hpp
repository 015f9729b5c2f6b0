#pragma once

// Analytical model of the two FPGA deployments: lattice data resident in
// on-chip URAM ("embedded"), or streamed from DDR once per stencil
// ("streaming"). Everything here is closed-form arithmetic on profile values.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lqcd/algebra.hpp"
#include "lqcd/geometry.hpp"

namespace lqcd {

inline constexpr int kWordsPerStencil = 8 * 18 + 9 * 24;
inline constexpr int kWordsPerStencilCompressed = 8 * 10 + 9 * 24;
static_assert(kWordsPerStencil == 360);
static_assert(kWordsPerStencilCompressed == 296);

enum class Scenario { embedded, streaming };

// fixed32 only enters the resource model.
enum class DataType { float32, float64, fixed32 };

DataType data_type(Precision p);
std::string to_string(Scenario s);
std::string to_string(DataType t);
Scenario parse_scenario(const std::string& text);

struct DeviceParams {
  std::string name = "u250";
  double clock_hz = 300e6;
  double link_bytes_per_cycle = 256;
  int channels = 4;
  double aggregate_bandwidth = 76.8e9;  // bytes/s
  double uram_block_bits = 294912;
  int uram_blocks = 1280;
  double ddr_capacity_bytes = 68719476736.0;

  // pct(II, double) = resource_anchor_percent * resource_anchor_ii / II
  double resource_anchor_ii = 5;
  double resource_anchor_percent = 20;
  double resource_ratio_single = 0.5;
  double resource_ratio_fixed32 = 0.35;

  // Reference double-precision GFLOPs at II = 1 for the calibrated figures.
  double calibration_gflops = 406;

  double uram_block_bytes() const { return uram_block_bits / 8.0; }
};

struct KernelParams {
  std::uint64_t flops_per_stencil = 1464;
  std::uint64_t reconstruction_flops = 68;  // per link
  std::array<int, 4> stage_latency{1, 14, 70, 57};
  int pipelines_single = 2;
  int pipelines_double = 1;

  int pipelines(Precision p) const { return p == Precision::low ? pipelines_single : pipelines_double; }
};

struct FootprintParams {
  int spinor_fields = 6;      // psi, r, p, q, eta, scratch
  int gauge_duplication = 2;  // U and U^dagger held separately
};

struct Profile {
  DeviceParams device;
  KernelParams kernel;
  FootprintParams footprint;
};

// Throws ModelError on nonpositive values or when aggregate_bandwidth
// disagrees with link_bytes_per_cycle * clock_hz by more than 1e-6 relative.
void validate(const Profile& p);

// Key = value lines, '#' starts a comment. Unknown keys are errors; absent
// keys keep the U250 defaults above.
Profile parse_profile(std::istream& in, const std::string& origin = "<profile>");
Profile load_profile(const std::string& path);
std::string format_profile(const Profile& p);

int words_per_stencil(bool compressed);
int word_bytes(Precision p);
std::uint64_t bytes_per_stencil(Precision p, bool compressed);

int pipeline_latency(const KernelParams& k);

// ceil(bytes * f / bandwidth), at least 1. Throws ModelError on zero bandwidth.
int min_initiation_interval(const DeviceParams& d, Precision p, bool compressed);

// Streaming keeps a single pipeline per device (the DDR link is the shared
// bottleneck); embedded uses kernel.pipelines(p).
int active_pipelines(const KernelParams& k, Scenario s, Precision p);

// GFLOPs = pipelines * (flops + [8 * reconstruction]) * f / II / 1e9.
double sustained_gflops(const DeviceParams& d, const KernelParams& k, int ii, Precision p, Scenario s,
                        bool include_reconstruction = false);

// calibration_gflops / raw double GFLOPs at II = 1 in the embedded scenario.
double calibration_factor(const DeviceParams& d, const KernelParams& k);

// bytes/s
double required_bandwidth(const DeviceParams& d, int ii, Precision p, bool compressed);

double resource_usage(const DeviceParams& d, int ii, DataType t);

struct Footprint {
  std::uint64_t bytes = 0;
  std::uint64_t uram_blocks = 0;  // sum of per-array block counts
  std::uint64_t uram_budget = 0;
  bool fits = false;
};

// 4 * duplication gauge arrays of V * 18 words and spinor_fields arrays of
// V * 24 words, each rounded up to whole URAM blocks.
Footprint bram_footprint(const DeviceParams& d, std::size_t volume, Precision p, const FootprintParams& fp);

struct PerfPoint {
  int initiation_interval = 0;
  double required_bandwidth = 0;  // bytes/s
  double sustained_gflops = 0;    // streaming, raw, no reconstruction
  double resource_percentage = 0;
  Precision precision = Precision::high;
  bool compressed = true;
};

std::vector<PerfPoint> sweep(const Profile& p, Precision precision, bool compressed, int ii_min, int ii_max);

struct ScenarioRow {
  std::string key;
  std::string value;
};

// Side-by-side figures for one scenario on `dims`; node estimate for a
// target volume of target_factor * V.
std::vector<ScenarioRow> scenario_report(const Profile& p, const LatticeDims& dims, Scenario s,
                                         double target_factor = 4096);

std::uint64_t node_estimate(const Profile& p, std::size_t local_volume, Scenario s, double target_volume);

struct AnchorRow {
  std::string anchor;
  double reference_value = 0;
  double model_value = 0;
  double relative_deviation = 0;  // |model - reference| / reference
  std::string flag;               // "ok" or "known-discrepancy"
};

inline constexpr const char* kAnchorOk = "ok";
inline constexpr const char* kAnchorKnownDiscrepancy = "known-discrepancy";
inline constexpr double kAnchorTolerance = 0.10;

std::vector<AnchorRow> anchor_audit(const Profile& p);

// Per-link reconstruction cost that the 194 GFLOPs figure would imply.
double implied_reconstruction_flops(const Profile& p);

// CSV writers; column names match the struct fields.
void write_perf_csv(std::ostream& out, const std::vector<PerfPoint>& rows);
void write_anchor_csv(std::ostream& out, const std::vector<AnchorRow>& rows);
// fig2: footprint over a fixed list of lattices, spinor_fields swept 4..9.
void write_footprint_csv(std::ostream& out, const Profile& p, const std::vector<Precision>& precisions);

// Shortest round-trip decimal form, so CSV output is stable byte for byte.
std::string format_number(double v);

}  // namespace lqcd
