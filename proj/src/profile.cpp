#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "lqcd/errors.hpp"
#include "lqcd/perf_model.hpp"

namespace lqcd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw ModelError("profile key '" + key + "': not a number: '" + text + "'");
  }
  return v;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& text) {
  Int v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw ModelError("profile key '" + key + "': not an integer: '" + text + "'");
  }
  return v;
}

using Setter = std::function<void(Profile&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"name", [](Profile& p, auto&, auto& v) { p.device.name = v; }},
      {"clock_hz", [](Profile& p, auto& k, auto& v) { p.device.clock_hz = parse_double(k, v); }},
      {"link_bytes_per_cycle", [](Profile& p, auto& k, auto& v) { p.device.link_bytes_per_cycle = parse_double(k, v); }},
      {"channels", [](Profile& p, auto& k, auto& v) { p.device.channels = parse_int<int>(k, v); }},
      {"aggregate_bandwidth", [](Profile& p, auto& k, auto& v) { p.device.aggregate_bandwidth = parse_double(k, v); }},
      {"uram_block_bits", [](Profile& p, auto& k, auto& v) { p.device.uram_block_bits = parse_double(k, v); }},
      {"uram_blocks", [](Profile& p, auto& k, auto& v) { p.device.uram_blocks = parse_int<int>(k, v); }},
      {"ddr_capacity_bytes", [](Profile& p, auto& k, auto& v) { p.device.ddr_capacity_bytes = parse_double(k, v); }},
      {"resource_anchor_ii", [](Profile& p, auto& k, auto& v) { p.device.resource_anchor_ii = parse_double(k, v); }},
      {"resource_anchor_percent",
       [](Profile& p, auto& k, auto& v) { p.device.resource_anchor_percent = parse_double(k, v); }},
      {"resource_ratio_single", [](Profile& p, auto& k, auto& v) { p.device.resource_ratio_single = parse_double(k, v); }},
      {"resource_ratio_fixed32",
       [](Profile& p, auto& k, auto& v) { p.device.resource_ratio_fixed32 = parse_double(k, v); }},
      {"calibration_gflops", [](Profile& p, auto& k, auto& v) { p.device.calibration_gflops = parse_double(k, v); }},
      {"flops_per_stencil",
       [](Profile& p, auto& k, auto& v) { p.kernel.flops_per_stencil = parse_int<std::uint64_t>(k, v); }},
      {"reconstruction_flops",
       [](Profile& p, auto& k, auto& v) { p.kernel.reconstruction_flops = parse_int<std::uint64_t>(k, v); }},
      {"stage_latencies",
       [](Profile& p, auto& k, const std::string& v) {
         std::istringstream in(v);
         std::string item;
         std::size_t i = 0;
         while (std::getline(in, item, ',')) {
           if (i == p.kernel.stage_latency.size()) throw ModelError("profile key 'stage_latencies': expected 4 values");
           p.kernel.stage_latency[i++] = parse_int<int>(k, trim(item));
         }
         if (i != p.kernel.stage_latency.size()) throw ModelError("profile key 'stage_latencies': expected 4 values");
       }},
      {"pipelines_single", [](Profile& p, auto& k, auto& v) { p.kernel.pipelines_single = parse_int<int>(k, v); }},
      {"pipelines_double", [](Profile& p, auto& k, auto& v) { p.kernel.pipelines_double = parse_int<int>(k, v); }},
      {"spinor_fields", [](Profile& p, auto& k, auto& v) { p.footprint.spinor_fields = parse_int<int>(k, v); }},
      {"gauge_duplication", [](Profile& p, auto& k, auto& v) { p.footprint.gauge_duplication = parse_int<int>(k, v); }},
  };
  return table;
}

void require_positive(double v, const char* what) {
  if (!(v > 0)) throw ModelError(std::string("profile: ") + what + " must be positive");
}

}  // namespace

void validate(const Profile& p) {
  const DeviceParams& d = p.device;
  require_positive(d.clock_hz, "clock_hz");
  require_positive(d.link_bytes_per_cycle, "link_bytes_per_cycle");
  require_positive(d.channels, "channels");
  require_positive(d.aggregate_bandwidth, "aggregate_bandwidth");
  require_positive(d.uram_block_bits, "uram_block_bits");
  require_positive(d.uram_blocks, "uram_blocks");
  require_positive(d.ddr_capacity_bytes, "ddr_capacity_bytes");
  require_positive(d.resource_anchor_ii, "resource_anchor_ii");
  require_positive(d.resource_anchor_percent, "resource_anchor_percent");
  require_positive(d.resource_ratio_single, "resource_ratio_single");
  require_positive(d.resource_ratio_fixed32, "resource_ratio_fixed32");
  require_positive(d.calibration_gflops, "calibration_gflops");
  if (std::fmod(d.uram_block_bits, 8.0) != 0) throw ModelError("profile: uram_block_bits must be whole bytes");
  const double per_cycle = d.link_bytes_per_cycle * d.clock_hz;
  if (std::abs(per_cycle - d.aggregate_bandwidth) > 1e-6 * d.aggregate_bandwidth) {
    throw ModelError("profile: aggregate_bandwidth " + format_number(d.aggregate_bandwidth) +
                     " disagrees with link_bytes_per_cycle * clock_hz = " + format_number(per_cycle));
  }
  const KernelParams& k = p.kernel;
  require_positive(static_cast<double>(k.flops_per_stencil), "flops_per_stencil");
  for (int c : k.stage_latency) require_positive(c, "stage latency");
  require_positive(k.pipelines_single, "pipelines_single");
  require_positive(k.pipelines_double, "pipelines_double");
  require_positive(p.footprint.spinor_fields, "spinor_fields");
  require_positive(p.footprint.gauge_duplication, "gauge_duplication");
}

Profile parse_profile(std::istream& in, const std::string& origin) {
  Profile p;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ModelError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ModelError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    it->second(p, key, value);
  }
  validate(p);
  return p;
}

Profile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open profile '" + path + "'");
  return parse_profile(in, path);
}

std::string format_profile(const Profile& p) {
  std::ostringstream o;
  const auto& d = p.device;
  const auto& k = p.kernel;
  o << "name = " << d.name << '\n'
    << "clock_hz = " << format_number(d.clock_hz) << '\n'
    << "link_bytes_per_cycle = " << format_number(d.link_bytes_per_cycle) << '\n'
    << "channels = " << d.channels << '\n'
    << "aggregate_bandwidth = " << format_number(d.aggregate_bandwidth) << '\n'
    << "uram_block_bits = " << format_number(d.uram_block_bits) << '\n'
    << "uram_blocks = " << d.uram_blocks << '\n'
    << "ddr_capacity_bytes = " << format_number(d.ddr_capacity_bytes) << '\n'
    << "resource_anchor_ii = " << format_number(d.resource_anchor_ii) << '\n'
    << "resource_anchor_percent = " << format_number(d.resource_anchor_percent) << '\n'
    << "resource_ratio_single = " << format_number(d.resource_ratio_single) << '\n'
    << "resource_ratio_fixed32 = " << format_number(d.resource_ratio_fixed32) << '\n'
    << "calibration_gflops = " << format_number(d.calibration_gflops) << '\n'
    << "flops_per_stencil = " << k.flops_per_stencil << '\n'
    << "reconstruction_flops = " << k.reconstruction_flops << '\n'
    << "stage_latencies = " << k.stage_latency[0] << ',' << k.stage_latency[1] << ',' << k.stage_latency[2] << ','
    << k.stage_latency[3] << '\n'
    << "pipelines_single = " << k.pipelines_single << '\n'
    << "pipelines_double = " << k.pipelines_double << '\n'
    << "spinor_fields = " << p.footprint.spinor_fields << '\n'
    << "gauge_duplication = " << p.footprint.gauge_duplication << '\n';
  return o.str();
}

}  // namespace lqcd
