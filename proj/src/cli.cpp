#include "lqcd/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lqcd/blas.hpp"
#include "lqcd/dslash.hpp"
#include "lqcd/errors.hpp"
#include "lqcd/field_io.hpp"
#include "lqcd/fields.hpp"
#include "lqcd/parallel.hpp"
#include "lqcd/perf_model.hpp"
#include "lqcd/solver.hpp"

namespace lqcd::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : Error {
  using Error::Error;
};

Precision parse_precision(const std::string& s) {
  if (s == "double") return Precision::high;
  if (s == "single") return Precision::low;
  throw UsageError("precision must be single or double, got '" + s + "'");
}

std::string absolute_path(const std::string& p) { return fs::weakly_canonical(fs::absolute(p)).string(); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw FormatError("cannot write " + path.string());
}

void write_manifest(const fs::path& out_dir, const std::string& subcommand, json params, json inputs,
                    std::vector<std::string> outputs) {
  json m;
  m["tool"] = "lqcd";
  m["version"] = kToolVersion;
  m["subcommand"] = subcommand;
  m["parameters"] = std::move(params);
  m["inputs"] = std::move(inputs);
  m["outputs"] = std::move(outputs);
  write_text(out_dir / kManifestName, m.dump(2) + "\n");
}

void prepare(const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw FormatError("cannot create " + out_dir.string() + ": " + ec.message());
}

json to_json(const GenOptions& o) {
  return {{"dims", o.dims.to_string()},
          {"seed", o.seed},
          {"kind", o.kind},
          {"precision", std::string(to_string(o.precision))},
          {"compressed", o.compressed}};
}

GenOptions gen_from_json(const json& j) {
  GenOptions o;
  o.dims = parse_dims(j.at("dims").get<std::string>());
  o.seed = j.at("seed").get<std::uint64_t>();
  o.kind = j.at("kind").get<std::string>();
  o.precision = parse_precision(j.at("precision").get<std::string>());
  o.compressed = j.at("compressed").get<bool>();
  return o;
}

json to_json(const SolveOptions& o) {
  return {{"source", o.source},       {"seed", o.seed},           {"mass", o.mass},
          {"rmin", o.rmin},           {"inner_k", o.inner_k},     {"max_outer", o.max_outer},
          {"max_iterations", o.max_iterations}, {"algorithm", o.algorithm}, {"compressed", o.compressed}};
}

SolveOptions solve_from_json(const json& params, const json& inputs) {
  SolveOptions o;
  o.gauge = inputs.at("gauge").get<std::string>();
  o.source = params.at("source").get<std::string>();
  o.seed = params.at("seed").get<std::uint64_t>();
  o.mass = params.at("mass").get<double>();
  o.rmin = params.at("rmin").get<double>();
  o.inner_k = params.at("inner_k").get<int>();
  o.max_outer = params.at("max_outer").get<int>();
  o.max_iterations = params.at("max_iterations").get<int>();
  o.algorithm = params.at("algorithm").get<std::string>();
  o.compressed = params.at("compressed").get<bool>();
  return o;
}

json to_json(const PerfOptions& o) {
  return {{"scenario", o.scenario}, {"ii_min", o.ii_min},         {"ii_max", o.ii_max},
          {"precision", o.precision}, {"compressed", o.compressed}, {"dims", o.dims.to_string()}};
}

PerfOptions perf_from_json(const json& params, const json& inputs) {
  PerfOptions o;
  o.profile = inputs.at("profile").get<std::string>();
  o.scenario = params.at("scenario").get<std::string>();
  o.ii_min = params.at("ii_min").get<int>();
  o.ii_max = params.at("ii_max").get<int>();
  o.precision = params.at("precision").get<std::string>();
  o.compressed = params.at("compressed").get<bool>();
  o.dims = parse_dims(params.at("dims").get<std::string>());
  return o;
}

GaugeField<double> load_double_gauge(const std::string& path) {
  const FieldFileHeader h = read_header(path);
  if (h.kind != FieldKind::gauge) throw FormatError(path + " is not a gauge file");
  if (h.precision != Precision::high) {
    throw FormatError(path + " holds a single-precision gauge field; solve and bench need double");
  }
  return load_gauge<double>(path);
}

struct Source {
  SpinorField<double> eta;
  std::optional<SpinorField<double>> exact;
};

Source make_source(const SolveOptions& o, const GaugeField<double>& g) {
  const GeometryPtr& geom = g.geometry_ptr();
  const std::string& s = o.source;
  if (s == "random") return {random_spinor<double>(geom, o.seed), std::nullopt};
  if (s == "manufactured") {
    SpinorField<double> x0 = random_spinor<double>(geom, o.seed);
    SpinorField<double> eta = apply(DiracKind::DdagD, g, x0, WilsonParams{o.mass, kDefaultHopSign});
    return {std::move(eta), std::move(x0)};
  }
  if (s == "point" || s.rfind("point:", 0) == 0) {
    long long site = 0;
    int spin = 0, color = 0;
    if (s.size() > 5) {
      char c1 = 0, c2 = 0;
      std::istringstream in(s.substr(6));
      if (!(in >> site >> c1 >> spin >> c2 >> color) || c1 != ',' || c2 != ',' || site < 0 || !in.eof()) {
        throw UsageError("source must look like point:SITE,SPIN,COLOR, got '" + s + "'");
      }
    }
    if (static_cast<std::size_t>(site) >= g.volume() || spin < 0 || spin >= kSpins || color < 0 ||
        color >= kColors) {
      throw UsageError("point source out of range: '" + s + "'");
    }
    return {point_source<double>(geom, static_cast<SiteIndex>(site), spin, color), std::nullopt};
  }
  throw UsageError("unknown source '" + s + "' (point[:site,spin,color] | random | manufactured)");
}

std::string report_csv(const SolveReport& r) {
  std::ostringstream o;
  o << "l,s_high,relative_residual,inner_iterations,ddagd_high,ddagd_low,restarted\n";
  for (const OuterRecord& rec : r.outer) {
    o << rec.l << ',' << format_number(rec.s_high) << ',' << format_number(rec.relative_residual) << ','
      << rec.inner_iterations << ',' << rec.high_applies << ',' << rec.low_applies << ',' << (rec.restarted ? 1 : 0)
      << '\n';
  }
  return o.str();
}

std::vector<Precision> precisions_of(const std::string& s) {
  if (s == "both") return {Precision::low, Precision::high};
  return {parse_precision(s)};
}

}  // namespace

int cmd_gen(const GenOptions& o, const fs::path& out_dir, std::ostream& log) {
  validate(o.dims);
  if (o.kind != "hot" && o.kind != "cold") throw UsageError("kind must be hot or cold, got '" + o.kind + "'");
  prepare(out_dir);
  const GeometryPtr geom = make_geometry(o.dims);
  const fs::path path = out_dir / kGaugeName;
  if (o.precision == Precision::high) {
    save_gauge(o.kind == "hot" ? hot_start<double>(geom, o.seed) : cold_start<double>(geom), path, o.compressed);
  } else {
    save_gauge(o.kind == "hot" ? hot_start<float>(geom, o.seed) : cold_start<float>(geom), path, o.compressed);
  }
  write_manifest(out_dir, "gen", to_json(o), json::object(), {kGaugeName});
  log << "wrote " << path.string() << " (" << o.kind << ", " << o.dims.to_string() << ", "
      << to_string(o.precision) << (o.compressed ? ", compressed" : "") << ")\n";
  return kExitOk;
}

int cmd_solve(const SolveOptions& o, const fs::path& out_dir, std::ostream& log) {
  SolverConfig cfg;
  cfg.r_min = o.rmin;
  cfg.inner_k = o.inner_k;
  cfg.max_outer = o.max_outer;
  cfg.max_iterations = o.max_iterations;
  cfg.wilson = WilsonParams{o.mass, kDefaultHopSign};
  cfg.compressed = o.compressed;
  try {
    cfg.validate();
  } catch (const SolverError& e) {
    throw UsageError(e.what());
  }
  if (o.algorithm != "cg" && o.algorithm != "rgcg") {
    throw UsageError("algorithm must be cg or rgcg, got '" + o.algorithm + "'");
  }

  SolveOptions resolved = o;
  resolved.gauge = absolute_path(o.gauge);
  const GaugeField<double> g = load_double_gauge(resolved.gauge);
  Source src = make_source(resolved, g);
  prepare(out_dir);

  const SolveResult res = o.algorithm == "cg" ? cg_reference(g, src.eta, cfg) : residual_guided_cg(g, src.eta, cfg);
  save_spinor(res.solution, out_dir / kSolutionName);
  write_text(out_dir / kReportName, report_csv(res.report));
  std::vector<std::string> outputs = {kSolutionName, kReportName};
  if (src.exact) {
    save_spinor(*src.exact, out_dir / kExactName);
    outputs.push_back(kExactName);
  }
  write_manifest(out_dir, "solve", to_json(resolved), {{"gauge", resolved.gauge}}, outputs);

  const SolveReport& r = res.report;
  log << r.algorithm << ": " << (r.converged ? "converged" : "NOT converged") << " after " << r.outer_iterations
      << " iterations, high D^dagger D = " << r.high_applies << ", low D^dagger D = " << r.low_applies
      << ", true residual = " << format_number(r.true_residual) << '\n';
  if (src.exact) {
    log << "relative error vs x0 = " << format_number(distance(res.solution, *src.exact) / norm(*src.exact)) << '\n';
  }
  return r.converged ? kExitOk : kExitNotConverged;
}

int cmd_perf(const PerfOptions& o, const fs::path& out_dir, std::ostream& log) {
  const Scenario scenario = [&] {
    try {
      return parse_scenario(o.scenario);
    } catch (const ModelError& e) {
      throw UsageError(e.what());
    }
  }();
  if (o.ii_min < 1 || o.ii_max < o.ii_min) throw UsageError("need 1 <= ii-min <= ii-max");
  validate(o.dims);
  const std::vector<Precision> precs = precisions_of(o.precision);

  PerfOptions resolved = o;
  resolved.profile = absolute_path(o.profile);
  const Profile profile = load_profile(resolved.profile);
  prepare(out_dir);

  std::vector<PerfPoint> points;
  for (Precision p : precs) {
    auto s = sweep(profile, p, o.compressed, o.ii_min, o.ii_max);
    points.insert(points.end(), s.begin(), s.end());
  }
  {
    std::ostringstream f2;
    write_footprint_csv(f2, profile, precs);
    write_text(out_dir / "fig2.csv", f2.str());
  }
  std::ostringstream curves;
  write_perf_csv(curves, points);
  for (const char* name : {"fig3.csv", "fig4.csv", "fig5.csv"}) write_text(out_dir / name, curves.str());
  std::ostringstream anchors;
  write_anchor_csv(anchors, anchor_audit(profile));
  write_text(out_dir / "anchors.csv", anchors.str());

  std::ostringstream rep;
  for (const ScenarioRow& row : scenario_report(profile, o.dims, scenario)) rep << row.key << " = " << row.value << '\n';
  write_text(out_dir / "scenario.txt", rep.str());
  write_manifest(out_dir, "perf", to_json(resolved), {{"profile", resolved.profile}},
                 {"fig2.csv", "fig3.csv", "fig4.csv", "fig5.csv", "anchors.csv", "scenario.txt"});
  log << rep.str();
  return kExitOk;
}

int cmd_bench(const BenchOptions& o, std::ostream& log) {
  if (o.reps < 1) throw UsageError("reps must be >= 1");
  const GaugeField<double> g = load_double_gauge(absolute_path(o.gauge));
  const WilsonParams wp{o.mass, kDefaultHopSign};
  const SpinorField<double> in = random_spinor<double>(g.geometry_ptr(), 1);
  SpinorField<double> out(g.geometry_ptr());
  const auto run_reps = [&](const auto& gauge) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < o.reps; ++i) apply(DiracKind::DdagD, gauge, in, out, wp);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  const double seconds = o.compressed ? run_reps(CompressedGaugeField<double>(g)) : run_reps(g);
  const std::uint64_t flops =
      static_cast<std::uint64_t>(o.reps) * flop_count(DiracKind::DdagD, g.volume(), o.compressed).total();
  log << "threads = " << num_threads() << '\n'
      << "volume = " << g.volume() << '\n'
      << "reps = " << o.reps << '\n'
      << "flops = " << flops << '\n'
      << "seconds = " << format_number(seconds) << '\n'
      << "gflops = " << format_number(static_cast<double>(flops) / seconds / 1e9) << '\n'
      << "sites_per_second = "
      << format_number(2.0 * static_cast<double>(o.reps) * static_cast<double>(g.volume()) / seconds) << '\n';
  return kExitOk;
}

int cmd_rerun(const fs::path& manifest, const fs::path& out_dir, std::ostream& log) {
  json m;
  try {
    std::ifstream in(manifest);
    if (!in) throw FormatError("cannot open manifest " + manifest.string());
    m = json::parse(in);
    const std::string sub = m.at("subcommand").get<std::string>();
    const json& params = m.at("parameters");
    const json& inputs = m.at("inputs");
    if (sub == "gen") return cmd_gen(gen_from_json(params), out_dir, log);
    if (sub == "solve") return cmd_solve(solve_from_json(params, inputs), out_dir, log);
    if (sub == "perf") return cmd_perf(perf_from_json(params, inputs), out_dir, log);
    throw FormatError("manifest: cannot rerun subcommand '" + sub + "'");
  } catch (const json::exception& e) {
    throw FormatError("manifest " + manifest.string() + ": " + e.what());
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wilson-Dirac lattice tools: field generation, solvers, FPGA performance model", "lqcd"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

  std::string out_dir;
  std::string dims_text, precision_text = "double";

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "generate a gauge field");
  g->add_option("--dims", dims_text, "T,X,Y,Z")->required();
  g->add_option("--seed", gen.seed);
  g->add_option("--kind", gen.kind)->check(CLI::IsMember({"hot", "cold"}));
  g->add_option("--precision", precision_text)->check(CLI::IsMember({"single", "double"}));
  g->add_flag("--compressed", gen.compressed, "store links in 10-word form");
  g->add_option("--out", out_dir)->required();

  SolveOptions solve;
  auto* s = app.add_subcommand("solve", "solve D^dagger D psi = eta");
  s->add_option("--gauge", solve.gauge)->required();
  s->add_option("--source", solve.source, "point[:site,spin,color] | random | manufactured");
  s->add_option("--seed", solve.seed);
  s->add_option("--mass", solve.mass);
  s->add_option("--rmin", solve.rmin);
  s->add_option("--inner-k", solve.inner_k);
  s->add_option("--max-outer", solve.max_outer);
  s->add_option("--max-iterations", solve.max_iterations);
  s->add_option("--algorithm", solve.algorithm)->check(CLI::IsMember({"cg", "rgcg"}));
  s->add_flag("--compressed", solve.compressed, "compressed links in the single-precision inner loop");
  s->add_option("--out", out_dir)->required();

  PerfOptions perf;
  std::string perf_dims;
  auto* p = app.add_subcommand("perf", "run the performance model");
  p->add_option("--profile", perf.profile)->required();
  p->add_option("--scenario", perf.scenario)->check(CLI::IsMember({"embedded", "streaming"}));
  p->add_option("--ii-min", perf.ii_min);
  p->add_option("--ii-max", perf.ii_max);
  p->add_option("--precision", perf.precision)->check(CLI::IsMember({"single", "double", "both"}));
  p->add_flag("--compressed,!--no-compressed", perf.compressed);
  p->add_option("--dims", perf_dims, "lattice for the scenario report");
  p->add_option("--out", out_dir)->required();

  BenchOptions bench;
  auto* b = app.add_subcommand("bench", "time D^dagger D on a gauge file");
  b->add_option("--gauge", bench.gauge)->required();
  b->add_option("--reps", bench.reps);
  b->add_option("--mass", bench.mass);
  b->add_flag("--compressed", bench.compressed);

  std::string manifest;
  auto* r = app.add_subcommand("rerun", "repeat the command recorded in a manifest");
  r->add_option("--manifest", manifest)->required();
  r->add_option("--out", out_dir)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (threads > 0) set_num_threads(threads);
    if (g->parsed()) {
      gen.dims = parse_dims(dims_text);
      gen.precision = parse_precision(precision_text);
      return cmd_gen(gen, out_dir, out);
    }
    if (s->parsed()) return cmd_solve(solve, out_dir, out);
    if (p->parsed()) {
      if (!perf_dims.empty()) perf.dims = parse_dims(perf_dims);
      return cmd_perf(perf, out_dir, out);
    }
    if (b->parsed()) return cmd_bench(bench, out);
    if (r->parsed()) return cmd_rerun(manifest, out_dir, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const GeometryError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SolverError& e) {
    err << "solver failed: " << e.what() << '\n';
    return kExitNotConverged;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace lqcd::cli
